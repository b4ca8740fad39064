"""Sentence-level sentiment scorers Word0-Word4 and meeting aggregation.

Five scorers of increasing sophistication, all sign-conventioned so that
more negative means more inflation concern:

* Word0: negated raw count of inflation keywords.
* Word1: (positive hits - negative hits) / token count.
* Word2: rule-based compound score from a valence lexicon with a
  three-token negation window.
* Word3: negated share of "negatively concentrated" keywords, floored
  at -1.
* Word4: Word2 + Word3, clamped to [-1, 1].

Externally produced scores (for example transformer classifiers run
elsewhere) join through ``ingest_external_scores`` and behave like any
other method downstream.
"""

from __future__ import annotations

import csv
import datetime as dt
import math
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .corpus import MinutesDocument, segment
from .errors import (
    AggregationError,
    AlignmentError,
    FormatError,
    InputIOError,
    ParameterError,
)
from .months import month_label, parse_date
from .series import MeetingSeries, MonthlyIndex

WORD_METHODS = ("Word0", "Word1", "Word2", "Word3", "Word4")

NEGATION_DAMPING = -0.74
NEGATION_WINDOW = 3
COMPOUND_NORMALIZER = 15.0

# Bare negators plus contracted forms as the tokenizer renders them
# (apostrophes are dropped in place, so "isn't" arrives as "isnt").
NEGATIONS = frozenset({
    "not", "no", "never", "nor", "without",
    "aint", "arent", "cant", "cannot", "couldnt", "didnt", "doesnt",
    "dont", "hadnt", "hasnt", "havent", "isnt", "mightnt", "mustnt",
    "neednt", "shant", "shouldnt", "wasnt", "werent", "wont", "wouldnt",
})


@dataclass(frozen=True)
class Lexicon:
    """Positive/negative word sets plus an optional signed valence map."""

    positive: frozenset[str]
    negative: frozenset[str]
    valence: dict[str, float]
    source: str = ""

    def __post_init__(self):
        overlap = self.positive & self.negative
        if overlap:
            sample = sorted(overlap)[:3]
            raise FormatError(
                f"lexicon {self.source or '<inline>'}: words in both polarity "
                f"sets: {', '.join(sample)}"
            )


def _read_rows(path: Path) -> list[list[str]]:
    try:
        with path.open(newline="", encoding="utf-8") as fh:
            return [row for row in csv.reader(fh)
                    if row and not row[0].lstrip().startswith("#")]
    except OSError as exc:
        raise InputIOError(f"cannot read {path}: {exc}") from exc


def load_lexicon(paths: Iterable) -> Lexicon:
    """Read one or more lexicon tables and merge them.

    Each file is either ``word,category`` (category in {positive, negative})
    or ``word,valence`` (signed real; the sign implies the category). Later
    files win on valence conflicts.
    """
    paths = [Path(p) for p in paths]
    if not paths:
        raise ParameterError("no lexicon files given")
    positive: set[str] = set()
    negative: set[str] = set()
    valence: dict[str, float] = {}
    for path in paths:
        rows = _read_rows(path)
        if not rows:
            raise FormatError(f"lexicon {path} is empty")
        header = [h.strip().lower() for h in rows[0]]
        if header[:2] == ["word", "category"]:
            for lineno, row in enumerate(rows[1:], start=2):
                if len(row) < 2:
                    raise FormatError(f"{path} line {lineno}: expected 2 cells")
                word, category = row[0].strip().lower(), row[1].strip().lower()
                if category == "positive":
                    positive.add(word)
                elif category == "negative":
                    negative.add(word)
                else:
                    raise FormatError(
                        f"{path} line {lineno}: unknown category {category!r}"
                    )
        elif header[:2] == ["word", "valence"]:
            for lineno, row in enumerate(rows[1:], start=2):
                if len(row) < 2:
                    raise FormatError(f"{path} line {lineno}: expected 2 cells")
                word = row[0].strip().lower()
                try:
                    v = float(row[1])
                except ValueError:
                    raise FormatError(
                        f"{path} line {lineno}: non-numeric valence {row[1]!r}"
                    ) from None
                valence[word] = v
                if v > 0:
                    positive.add(word)
                elif v < 0:
                    negative.add(word)
        else:
            raise FormatError(
                f"lexicon {path}: header must be word,category or word,valence"
            )
    return Lexicon(frozenset(positive), frozenset(negative), valence,
                   source=";".join(str(p) for p in paths))


def load_wordlist(path) -> tuple[str, ...]:
    """One lowercase word per line; '#' starts a comment line."""
    path = Path(path)
    try:
        lines = path.read_text(encoding="utf-8").splitlines()
    except OSError as exc:
        raise InputIOError(f"cannot read {path}: {exc}") from exc
    words = []
    for line in lines:
        word = line.strip().lower()
        if word and not word.startswith("#"):
            words.append(word)
    if not words:
        raise FormatError(f"word list {path} is empty")
    if len(set(words)) != len(words):
        dup = sorted({w for w in words if words.count(w) > 1})[0]
        raise FormatError(f"word list {path}: duplicate entry {dup!r}")
    return tuple(words)


def default_keywords() -> tuple[str, ...]:
    """Bundled inflation-concern keyword lemmas."""
    with resources.as_file(resources.files("banktone") / "data"
                           / "inflation_keywords.txt") as p:
        return load_wordlist(p)


def default_concentrated() -> tuple[str, ...]:
    """Bundled (non-canonical) negatively concentrated keyword list."""
    with resources.as_file(resources.files("banktone") / "data"
                           / "negative_concentrated.txt") as p:
        return load_wordlist(p)


@dataclass(frozen=True)
class SentenceScores:
    word0: float
    word1: float
    word2: float
    word3: float
    word4: float

    def by_method(self) -> dict[str, float]:
        return dict(zip(WORD_METHODS,
                        (self.word0, self.word1, self.word2, self.word3,
                         self.word4)))


def score_word0(tokens: Sequence[str], keywords: Iterable[str]) -> float:
    keyword_set = frozenset(keywords)
    return -float(sum(tok in keyword_set for tok in tokens))


def score_word1(tokens: Sequence[str], lexicon: Lexicon) -> float:
    pos = sum(tok in lexicon.positive for tok in tokens)
    neg = sum(tok in lexicon.negative for tok in tokens)
    return (pos - neg) / max(1, len(tokens))


def score_word2(tokens: Sequence[str], lexicon: Lexicon) -> float:
    """Compound valence score in [-1, 1].

    Each valence hit is flipped and damped by -0.74 when a negator sits in
    the three preceding tokens; the summed score s maps through
    s / sqrt(s^2 + 15).
    """
    if not lexicon.valence:
        raise FormatError(
            "lexicon has no valence entries; Word2 needs a word,valence table"
        )
    total = 0.0
    hit = False
    for i, tok in enumerate(tokens):
        v = lexicon.valence.get(tok)
        if v is None:
            continue
        hit = True
        window = tokens[max(0, i - NEGATION_WINDOW):i]
        if any(w in NEGATIONS for w in window):
            v *= NEGATION_DAMPING
        total += v
    if not hit:
        return 0.0
    return total / math.sqrt(total * total + COMPOUND_NORMALIZER)


def score_word3(tokens: Sequence[str], concentrated: Iterable[str]) -> float:
    concentrated_set = frozenset(concentrated)
    hits = sum(tok in concentrated_set for tok in tokens)
    return max(-1.0, -hits / max(1, len(tokens)))


def score_word4(word2: float, word3: float) -> float:
    return min(1.0, max(-1.0, word2 + word3))


def score_sentence(tokens: Sequence[str], lexicon: Lexicon,
                   keywords: Iterable[str],
                   concentrated: Iterable[str]) -> SentenceScores:
    w2 = score_word2(tokens, lexicon)
    w3 = score_word3(tokens, concentrated)
    return SentenceScores(
        word0=score_word0(tokens, keywords),
        word1=score_word1(tokens, lexicon),
        word2=w2,
        word3=w3,
        word4=score_word4(w2, w3),
    )


def aggregate_meeting(values: Sequence[float]) -> float:
    """Unweighted mean of sentence scores; a scoreless document is an error."""
    if len(values) == 0:
        raise AggregationError("document has no sentences to aggregate")
    return float(np.mean(values))


def score_document(doc: MinutesDocument, lexicon: Lexicon,
                   keywords: Iterable[str],
                   concentrated: Iterable[str]) -> dict[str, float]:
    records = segment(doc)
    if not records:
        raise AggregationError(f"document {doc.key} has no sentences")
    scored = [score_sentence(r.tokens, lexicon, keywords, concentrated)
              for r in records]
    out = {}
    for method in WORD_METHODS:
        out[method] = aggregate_meeting([s.by_method()[method] for s in scored])
    return out


def score_corpus(docs: Sequence[MinutesDocument], lexicon: Lexicon,
                 keywords: Iterable[str],
                 concentrated: Iterable[str]) -> dict[str, MeetingSeries]:
    """One MeetingSeries per Word method over all documents."""
    per_method: dict[str, list[float]] = {m: [] for m in WORD_METHODS}
    dates = []
    for doc in docs:
        values = score_document(doc, lexicon, keywords, concentrated)
        dates.append(doc.meeting_date)
        for method in WORD_METHODS:
            per_method[method].append(values[method])
    return {
        method: MeetingSeries(method, tuple(dates), np.array(vals))
        for method, vals in per_method.items()
    }


def ingest_external_scores(path, meeting_dates: Iterable[dt.date] | None = None,
                           ) -> dict[str, MeetingSeries]:
    """Read a date,<method...> table of externally computed meeting scores.

    When ``meeting_dates`` is given, every row date must match a corpus
    meeting date exactly.
    """
    path = Path(path)
    rows = _read_rows(path)
    if not rows:
        raise FormatError(f"score table {path} is empty")
    header = [h.strip() for h in rows[0]]
    if not header or header[0].lower() != "date":
        raise FormatError(f"score table {path}: first column must be 'date'")
    methods = header[1:]
    if not methods:
        raise FormatError(f"score table {path}: no method columns")
    parsed: list[tuple[dt.date, list[float]]] = []
    for lineno, row in enumerate(rows[1:], start=2):
        if len(row) != len(header):
            raise FormatError(f"{path} line {lineno}: expected {len(header)} cells")
        date = parse_date(row[0].strip())
        try:
            values = [float(cell) for cell in row[1:]]
        except ValueError:
            raise FormatError(
                f"{path} line {lineno}: non-numeric score"
            ) from None
        parsed.append((date, values))
    parsed.sort(key=lambda item: item[0])
    dates = tuple(date for date, _ in parsed)
    if len(set(dates)) != len(dates):
        raise FormatError(f"score table {path}: duplicate date")
    if meeting_dates is not None:
        known = set(meeting_dates)
        stray = [d for d in dates if d not in known]
        if stray:
            raise AlignmentError(
                f"score table {path}: date {stray[0]} matches no corpus meeting"
            )
    columns = np.array([values for _, values in parsed], dtype=float)
    return {
        method: MeetingSeries(method, dates, columns[:, j])
        for j, method in enumerate(methods)
    }


def compose_scm(members: Sequence[MonthlyIndex], label: str = "SCm",
                ) -> MonthlyIndex:
    """Per-month mean of already-standardized member indices."""
    if len(members) < 2:
        raise ParameterError("composite index needs at least 2 member indices")
    first = members[0]
    for member in members[1:]:
        if member.start != first.start or len(member) != len(first):
            raise AlignmentError(
                f"member {member.method!r} grid "
                f"{month_label(member.start)}+{len(member)} differs from "
                f"{first.method!r} grid {month_label(first.start)}+{len(first)}"
            )
    stacked = np.vstack([m.values for m in members])
    return MonthlyIndex(label, first.start, stacked.mean(axis=0))
