"""Minutes corpus and macro table ingestion.

Documents arrive as UTF-8 text files named ``YYYY-MM-DD.txt`` or via a
manifest CSV (``meeting_date,publication_date,path``). Macro data arrives
as a delimited table whose first column is a ``YYYY-MM`` month stamp.
"""

from __future__ import annotations

import csv
import datetime as dt
import math
import re
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import (
    AlignmentError,
    EmptyCorpusError,
    FormatError,
    InputIOError,
)
from .months import month_index, month_label, parse_date

PUBLICATION_LAG_DAYS = 21

# Trailing tokens that end with a terminator but do not end a sentence.
ABBREVIATIONS = frozenset({
    "U.S.", "U.K.", "Mr.", "Mrs.", "Ms.", "Dr.", "Prof.", "St.", "No.",
    "Nos.", "vs.", "etc.", "e.g.", "i.e.", "cf.", "Inc.", "Ltd.", "Co.",
    "Corp.", "Jan.", "Feb.", "Mar.", "Apr.", "May.", "Jun.", "Jul.",
    "Aug.", "Sep.", "Sept.", "Oct.", "Nov.", "Dec.",
})

_TERMINATOR = re.compile(r"[.!?](?=\s+[A-Z])")
_FILENAME_DATE = re.compile(r"(\d{4}-\d{2}-\d{2})")


@dataclass(frozen=True)
class MinutesDocument:
    """One minutes release: meeting date, publication date, full text."""

    meeting_date: dt.date
    publication_date: dt.date
    raw_text: str

    def __post_init__(self):
        if self.publication_date < self.meeting_date:
            raise FormatError(
                f"publication date {self.publication_date} precedes meeting "
                f"date {self.meeting_date}"
            )
        if not self.raw_text:
            raise FormatError(f"document for {self.meeting_date} has no text")

    @property
    def key(self) -> str:
        return self.meeting_date.isoformat()


@dataclass(frozen=True)
class SentenceRecord:
    """One sentence of a document, with its lowercase word tokens."""

    document_key: str
    ordinal: int
    text: str
    tokens: tuple[str, ...]


def tokenize(text: str) -> list[str]:
    """Lowercase word tokens: hyphens split, other non-letters dropped in place.

    Dropping (rather than splitting on) embedded punctuation keeps
    contractions as single tokens ("don't" -> "dont"), which the negation
    scanner in the sentiment scorers relies on.
    """
    lowered = text.lower().replace("-", " ").replace("–", " ").replace("—", " ")
    tokens = []
    for chunk in lowered.split():
        word = "".join(c for c in chunk if c.isalpha())
        if word:
            tokens.append(word)
    return tokens


def split_sentences(text: str) -> list[str]:
    """Split on '.', '!', '?' followed by whitespace and an uppercase letter.

    A trailing abbreviation (``U.S.``, ``Mr.``, month names, ...) suppresses
    the split. Text after the last terminator is kept as a final sentence.
    """
    sentences: list[str] = []
    start = 0
    for match in _TERMINATOR.finditer(text):
        end = match.end()
        trailing = text[:end].rsplit(None, 1)
        if trailing and trailing[-1] in ABBREVIATIONS:
            continue
        sentence = text[start:end].strip()
        if sentence:
            sentences.append(sentence)
        start = end
    tail = text[start:].strip()
    if tail:
        sentences.append(tail)
    return sentences


def segment(doc: MinutesDocument) -> list[SentenceRecord]:
    """Sentence records for one document, ordinals dense from 0."""
    return [
        SentenceRecord(doc.key, i, sentence, tuple(tokenize(sentence)))
        for i, sentence in enumerate(split_sentences(doc.raw_text))
    ]


def _read_text(path: Path) -> str:
    try:
        return path.read_text(encoding="utf-8")
    except OSError as exc:
        raise InputIOError(f"cannot read {path}: {exc}") from exc


def _default_publication(meeting: dt.date) -> dt.date:
    return meeting + dt.timedelta(days=PUBLICATION_LAG_DAYS)


def _load_from_directory(directory: Path) -> list[MinutesDocument]:
    docs = []
    for path in sorted(directory.glob("*.txt")):
        m = _FILENAME_DATE.search(path.stem)
        if not m:
            raise FormatError(f"no YYYY-MM-DD date in filename {path.name!r}")
        meeting = parse_date(m.group(1))
        docs.append(MinutesDocument(meeting, _default_publication(meeting), _read_text(path)))
    return docs


def _load_from_manifest(manifest: Path) -> list[MinutesDocument]:
    base = manifest.parent
    docs = []
    try:
        with manifest.open(newline="", encoding="utf-8") as fh:
            reader = csv.DictReader(fh)
            if reader.fieldnames is None or "meeting_date" not in reader.fieldnames \
                    or "path" not in reader.fieldnames:
                raise FormatError(
                    f"manifest {manifest} needs 'meeting_date' and 'path' columns"
                )
            for row in reader:
                meeting = parse_date(row["meeting_date"])
                pub_raw = (row.get("publication_date") or "").strip()
                publication = parse_date(pub_raw) if pub_raw else _default_publication(meeting)
                doc_path = Path(row["path"])
                if not doc_path.is_absolute():
                    doc_path = base / doc_path
                docs.append(MinutesDocument(meeting, publication, _read_text(doc_path)))
    except OSError as exc:
        raise InputIOError(f"cannot read {manifest}: {exc}") from exc
    return docs


def load_corpus(path) -> list[MinutesDocument]:
    """Load all documents under a directory or listed in a manifest file.

    Output is sorted by meeting date; enumeration order of the file system
    never matters.
    """
    path = Path(path)
    if path.is_dir():
        docs = _load_from_directory(path)
    elif path.is_file():
        docs = _load_from_manifest(path)
    else:
        raise InputIOError(f"corpus path does not exist: {path}")
    if not docs:
        raise EmptyCorpusError(f"no documents found at {path}")
    docs.sort(key=lambda d: d.meeting_date)
    return docs


MISSING_MARKERS = frozenset({"", "NA", "NaN", "nan"})


@dataclass
class MacroTable:
    """Monthly macro columns on a contiguous month grid (NaN = missing)."""

    start: int
    columns: dict[str, np.ndarray] = field(default_factory=dict)

    def __len__(self) -> int:
        return len(next(iter(self.columns.values()))) if self.columns else 0

    @property
    def end(self) -> int:
        return self.start + len(self) - 1

    def month_labels(self) -> list[str]:
        return [month_label(self.start + i) for i in range(len(self))]

    def column(self, name: str) -> np.ndarray:
        if name not in self.columns:
            raise AlignmentError(f"macro table has no column {name!r}")
        return self.columns[name]

    def window(self, name: str, start: int, end: int) -> np.ndarray:
        """Values of a column for months start..end, which must be complete."""
        if start < self.start or end > self.end:
            raise AlignmentError(
                f"window {month_label(start)}..{month_label(end)} outside macro "
                f"range {month_label(self.start)}..{month_label(self.end)}"
            )
        values = self.column(name)[start - self.start:end - self.start + 1]
        if np.isnan(values).any():
            bad = int(np.flatnonzero(np.isnan(values))[0])
            raise AlignmentError(
                f"column {name!r} missing at {month_label(start + bad)}"
            )
        return values


def load_macro(path) -> MacroTable:
    """Read a delimited macro table; absent months are NaN-flagged."""
    path = Path(path)
    try:
        with path.open(newline="", encoding="utf-8") as fh:
            rows = [row for row in csv.reader(fh) if row and not row[0].startswith("#")]
    except OSError as exc:
        raise InputIOError(f"cannot read {path}: {exc}") from exc
    if not rows:
        raise FormatError(f"macro table {path} is empty")
    header = [h.strip() for h in rows[0]]
    if len(header) < 2:
        raise FormatError(f"macro table {path} needs a month column plus data columns")
    names = header[1:]
    seen: dict[int, list[str]] = {}
    for lineno, row in enumerate(rows[1:], start=2):
        if len(row) != len(header):
            raise FormatError(f"{path} line {lineno}: expected {len(header)} cells")
        try:
            idx = month_index(row[0])
        except FormatError as exc:
            raise FormatError(f"{path} line {lineno}: {exc}") from None
        if idx in seen:
            raise FormatError(f"{path} line {lineno}: duplicate month {row[0]}")
        seen[idx] = [cell.strip() for cell in row[1:]]
    first, last = min(seen), max(seen)
    n = last - first + 1
    columns = {name: np.full(n, math.nan) for name in names}
    for idx, cells in seen.items():
        for name, cell in zip(names, cells):
            if cell in MISSING_MARKERS:
                continue
            try:
                columns[name][idx - first] = float(cell)
            except ValueError:
                raise FormatError(
                    f"{path}: non-numeric value {cell!r} in column {name!r} "
                    f"at {month_label(idx)}"
                ) from None
    return MacroTable(start=first, columns=columns)
