"""Shared series containers: meeting-frequency and monthly-frequency values."""

from __future__ import annotations

import datetime as dt
from dataclasses import dataclass

import numpy as np

from .errors import AlignmentError, FormatError
from .months import month_label


@dataclass(frozen=True)
class MeetingSeries:
    """One value per meeting for a single scoring method."""

    method: str
    dates: tuple[dt.date, ...]
    values: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "values", np.asarray(self.values, dtype=float))
        if len(self.dates) != len(self.values):
            raise FormatError(
                f"series {self.method!r}: {len(self.dates)} dates vs "
                f"{len(self.values)} values"
            )
        if any(b <= a for a, b in zip(self.dates, self.dates[1:])):
            raise FormatError(f"series {self.method!r}: dates not strictly increasing")
        if not np.isfinite(self.values).all():
            raise FormatError(f"series {self.method!r}: non-finite value")

    def __len__(self) -> int:
        return len(self.dates)


@dataclass(frozen=True)
class MonthlyIndex:
    """Contiguous monthly values for one method, starting at a month index."""

    method: str
    start: int
    values: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "values", np.asarray(self.values, dtype=float))
        if not np.isfinite(self.values).all():
            raise FormatError(f"index {self.method!r}: non-finite value")

    def __len__(self) -> int:
        return len(self.values)

    @property
    def end(self) -> int:
        return self.start + len(self) - 1

    def month_labels(self) -> list[str]:
        return [month_label(self.start + i) for i in range(len(self))]

    def value_at(self, month: int) -> float:
        if not self.start <= month <= self.end:
            raise AlignmentError(
                f"index {self.method!r} has no value for {month_label(month)}"
            )
        return float(self.values[month - self.start])

    def window(self, start: int, end: int) -> np.ndarray:
        if start < self.start or end > self.end or end < start:
            raise AlignmentError(
                f"window {month_label(start)}..{month_label(end)} outside index "
                f"{self.method!r} range {month_label(self.start)}.."
                f"{month_label(self.end)}"
            )
        return self.values[start - self.start:end - self.start + 1]

    def lagged(self, lag: int) -> "MonthlyIndex":
        """The same values seen `lag` months later (value at t is x_{t-lag})."""
        return MonthlyIndex(self.method, self.start + lag, self.values)


def align(*indices: MonthlyIndex) -> list[MonthlyIndex]:
    """Trim indices to their common month range."""
    start = max(ix.start for ix in indices)
    end = min(ix.end for ix in indices)
    if end < start:
        labels = ", ".join(
            f"{ix.method!r} {month_label(ix.start)}..{month_label(ix.end)}"
            for ix in indices
        )
        raise AlignmentError(f"no common months among: {labels}")
    return [MonthlyIndex(ix.method, start, ix.window(start, end))
            for ix in indices]
