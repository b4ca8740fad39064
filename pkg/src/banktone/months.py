"""Calendar-month grid arithmetic.

Months are handled internally as integer indices (``year * 12 + month - 1``)
so contiguous grids, lags, and intersections reduce to integer math.
Externally months are always the ISO form ``YYYY-MM``.
"""

from __future__ import annotations

import datetime as dt
import re

from .errors import FormatError

_YM_RE = re.compile(r"^(\d{4})-(\d{2})$")


def month_index(label: str) -> int:
    """Parse ``YYYY-MM`` into a month index."""
    m = _YM_RE.match(label.strip())
    if not m:
        raise FormatError(f"not a YYYY-MM month stamp: {label!r}")
    year, month = int(m.group(1)), int(m.group(2))
    if not 1 <= month <= 12:
        raise FormatError(f"month out of range in {label!r}")
    return year * 12 + month - 1


def month_label(index: int) -> str:
    """Render a month index back to ``YYYY-MM``."""
    year, month = divmod(index, 12)
    return f"{year:04d}-{month + 1:02d}"


def month_of(date: dt.date) -> int:
    """Month index of a calendar date."""
    return date.year * 12 + date.month - 1


def month_labels(start: int, count: int) -> list[str]:
    return [month_label(start + i) for i in range(count)]


def parse_date(text: str) -> dt.date:
    """Parse an ISO ``YYYY-MM-DD`` date, raising FormatError on junk."""
    try:
        return dt.date.fromisoformat(text.strip())
    except ValueError as exc:
        raise FormatError(f"not a YYYY-MM-DD date: {text!r}") from exc
