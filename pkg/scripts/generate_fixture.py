#!/usr/bin/env python3
"""Regenerate the bundled synthetic fixture under fixtures/.

Everything here is deterministic arithmetic (trig grids and a planted
inflation recursion); there is no random number generator anywhere, so
the fixture needs no seed to reproduce. The inflation column is built so
that regressing the rational gap on the lagged Word1 index recovers a
coefficient of exactly 0.3, and the futures series is the sentiment
proxy harmonic shifted three months so every lead-lag cell averages 3.

Run from the repository root:

    python3 scripts/generate_fixture.py

The script rewrites fixtures/, then executes the full pipeline into a
temporary directory and asserts the planted values before reporting.
"""

from __future__ import annotations

import csv
import datetime as dt
import shutil
import sys
import tempfile
from pathlib import Path

import numpy as np

from banktone.indexer import SGParams, build_monthly_index, standardize
from banktone.months import month_index, month_label
from banktone.pipeline import load_config, run
from banktone.sentiment import default_concentrated, default_keywords, load_lexicon, score_corpus
from banktone.corpus import load_corpus

ROOT = Path(__file__).resolve().parents[1] / "fixtures"

YEARS = range(2006, 2011)
MEETING_DAYS = ((1, 25), (3, 18), (5, 5), (6, 24), (8, 8), (9, 19), (11, 1), (12, 12))
START_MONTH = month_index("2006-01")
N_MONTHS = 60
PLANTED_ALPHA = 0.3
SHIFT_MONTHS = 3

CONCERN_SENTENCES = (
    "Mr. Hawk warned that inflation pressures were building faster than expected.",
    "Several members feared that surging energy prices would worsen the squeeze on households.",
    "The committee judged the recession risk alarming as credit conditions deteriorated.",
    "Unemployment climbed again and the crisis in short-term funding markets deepened.",
    "Participants worried that the U.S. downturn could trigger a painful slump abroad.",
    "Rising costs threatened to erode real incomes and depress consumption.",
)

CALM_SENTENCES = (
    "Growth remained encouraging and the recovery gained momentum through the spring.",
    "Members were not worried about near-term price stability.",
    "The outlook improved as well-anchored expectations supported steady spending.",
    "Dr. Dove noted that hiring strengthened and confidence rebounded across districts.",
    "No significant deterioration was evident in household balance sheets.",
    "Stable financing conditions reassured the committee that momentum would continue.",
)

LEXICON = (
    ("warned", -1.1), ("feared", -1.8), ("surging", -0.9), ("worsen", -1.5),
    ("squeeze", -1.0), ("alarming", -1.9), ("deteriorated", -1.6),
    ("deterioration", -1.6), ("worried", -1.2), ("crisis", -2.3),
    ("deepened", -0.8), ("downturn", -1.7), ("painful", -1.3),
    ("slump", -2.1), ("threatened", -1.4), ("erode", -1.2),
    ("depress", -1.5), ("encouraging", 1.5), ("recovery", 1.6),
    ("gained", 0.5), ("momentum", 0.7), ("improved", 1.3),
    ("supported", 0.6), ("steady", 0.8), ("strengthened", 1.4),
    ("confidence", 1.0), ("rebounded", 1.2), ("stable", 0.9),
    ("reassured", 1.1),
)

RUN_YAML = """\
# Synthetic end-to-end fixture. Regenerate with scripts/generate_fixture.py.
corpus: corpus
lexicons:
  - lexicon_valence.csv
external_scores: external_scores.csv
macro: macro.csv
output: out

scm_members: [BERTa, BERTk2]

indexer:
  resample: linear
  sg_window: 5
  sg_poly: 2
  sg_edge: wrap

regression:
  variants: [1, 2, 3]
  pi_column: HCPI
  output_gap_column: y

model:
  m: 0.85
  beta: 0.985
  kappa: -0.25
  alpha_variant: 1
  m_grid: [0.8, 0.85, 0.9]

bands:
  long: 3
  mid: 6
  short: 12

leadlag:
  x: leadlag_x.csv
  y: futures.csv

report_metric: abs
"""


def fmt(value: float) -> str:
    return format(float(value), ".17g")


def meeting_dates() -> list[dt.date]:
    return [dt.date(year, month, day)
            for year in YEARS for month, day in MEETING_DAYS]


def write_corpus(dates: list[dt.date]) -> None:
    corpus_dir = ROOT / "corpus"
    corpus_dir.mkdir(parents=True)
    for i, date in enumerate(dates):
        n_concern = round(6 + 4 * np.sin(2 * np.pi * 2 * i / len(dates)))
        picks = [CONCERN_SENTENCES[(i + j) % len(CONCERN_SENTENCES)]
                 for j in range(n_concern)]
        picks += [CALM_SENTENCES[(i + j) % len(CALM_SENTENCES)]
                  for j in range(12 - n_concern)]
        preamble = f"Minutes of the policy meeting held on {date:%B %d, %Y}."
        text = preamble + " " + " ".join(picks) + "\n"
        (corpus_dir / f"{date.isoformat()}.txt").write_text(text,
                                                            encoding="utf-8")


def write_csv(path: Path, header: list[str], rows) -> None:
    with path.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        writer.writerows(rows)


def write_lexicon() -> None:
    write_csv(ROOT / "lexicon_valence.csv", ["word", "valence"],
              [[word, fmt(valence)] for word, valence in LEXICON])


def write_external_scores(dates: list[dt.date]) -> None:
    n = len(dates)
    rows = []
    for i, date in enumerate(dates):
        phase = 2 * np.pi * 2 * i / n
        rows.append([date.isoformat(),
                     fmt(0.9 * np.sin(phase + 0.3)),
                     fmt(-0.7 * np.cos(phase - 0.2))])
    write_csv(ROOT / "external_scores.csv", ["date", "BERTa", "BERTk2"], rows)


def leadlag_series() -> tuple[np.ndarray, np.ndarray]:
    t = np.arange(N_MONTHS)
    x = np.cos(2 * np.pi * 2 * (t - 8) / N_MONTHS)
    return x, np.roll(x, SHIFT_MONTHS)


def write_leadlag_files() -> None:
    x, y = leadlag_series()
    labels = [month_label(START_MONTH + t) for t in range(N_MONTHS)]
    write_csv(ROOT / "leadlag_x.csv", ["month", "value"],
              [[label, fmt(v)] for label, v in zip(labels, x)])
    write_csv(ROOT / "futures.csv", ["month", "value"],
              [[label, fmt(v)] for label, v in zip(labels, y)])


def word1_monthly_index() -> np.ndarray:
    """The standardized Word1 index exactly as the pipeline will build it."""
    docs = load_corpus(ROOT / "corpus")
    lexicon = load_lexicon([ROOT / "lexicon_valence.csv"])
    scored = score_corpus(docs, lexicon, default_keywords(),
                          default_concentrated())
    index = build_monthly_index(scored["Word1"], resample="linear",
                                sg=SGParams(), start=START_MONTH,
                                end=START_MONTH + N_MONTHS - 1)
    return index.values


def plant_inflation(word1: np.ndarray) -> np.ndarray:
    """Inflation path whose rational gap is 0.3 times lagged Word1.

    The regression window over this grid is months 1..58 (the dependent
    loses the last month to the one-step-ahead expectation and the
    lagged regressor loses the first). Within that window the regressor
    column is the index at months 0..57 standardized over those 58
    values, so the recursion consumes exactly that column.
    """
    z = standardize(word1[:N_MONTHS - 2])
    pi = np.empty(N_MONTHS)
    pi[0] = pi[1] = 2.0
    for k in range(1, N_MONTHS - 1):
        pi[k + 1] = pi[k] - PLANTED_ALPHA * z[k - 1]
    return pi


def write_macro(pi: np.ndarray) -> None:
    t = np.arange(N_MONTHS)
    columns = {
        "HCPI": pi,
        "y": 0.5 * np.sin(2 * np.pi * t / 12),
        "GDP": np.sin(2 * np.pi * t / 7) + 0.3 * np.cos(2 * np.pi * t / 13),
        "MBAS": np.cos(2 * np.pi * t / 9),
        "FEDIR": np.sin(2 * np.pi * t / 11),
        "EXC": np.cos(2 * np.pi * t / 5) + 0.2 * np.sin(2 * np.pi * t / 17),
        "UNEM": np.sin(2 * np.pi * t / 8),
        "PCE": np.cos(2 * np.pi * t / 10),
        "COIL": np.sin(2 * np.pi * t / 6) + 0.1 * np.cos(2 * np.pi * t / 19),
    }
    rows = []
    for i in range(N_MONTHS):
        rows.append([month_label(START_MONTH + i)]
                    + [fmt(columns[name][i]) for name in columns])
    write_csv(ROOT / "macro.csv", ["month"] + list(columns), rows)


def verify() -> dict:
    """Run the real pipeline on the fresh fixture and check the plants."""
    with tempfile.TemporaryDirectory() as tmp:
        config = load_config(ROOT / "run.yaml", {"output_flag": tmp})
        manifest = run(config)
        out = Path(tmp)

        alpha_rows = _rows(out / "alpha_estimates.csv")
        hits = 0
        for row in alpha_rows:
            if row["method"] == "Word1" and row["term"] == "Word1(-1)":
                got = float(row["coefficient"])
                assert abs(got - PLANTED_ALPHA) < 1e-8, (row["variant"], got)
                assert float(row["r_squared"]) > 1 - 1e-10
                hits += 1
        assert hits == 3, f"expected Word1 rows for 3 variants, saw {hits}"

        for row in _rows(out / "leadlag_summary.csv"):
            assert row["count"] == "2", row
            assert float(row["abs_mean"]) == 3.0, row
            assert float(row["signed_mean"]) == -3.0, row
    return manifest


def _rows(path: Path) -> list[dict]:
    with path.open(newline="", encoding="utf-8") as fh:
        filtered = [line for line in fh if not line.startswith("#")]
    return list(csv.DictReader(filtered))


def main() -> int:
    if ROOT.exists():
        shutil.rmtree(ROOT)
    ROOT.mkdir(parents=True)

    dates = meeting_dates()
    write_corpus(dates)
    write_lexicon()
    write_external_scores(dates)
    write_leadlag_files()
    write_macro(plant_inflation(word1_monthly_index()))
    (ROOT / "run.yaml").write_text(RUN_YAML, encoding="utf-8")

    manifest = verify()
    print(f"fixture written to {ROOT}")
    print(f"  documents: {len(dates)}, months: {N_MONTHS}")
    print(f"  planted alpha {PLANTED_ALPHA} recovered in variants 1-3")
    print(f"  lead-lag shift {SHIFT_MONTHS} recovered in every band cell")
    print(f"  pipeline wall time: {manifest['wall_time_seconds']}s")
    return 0


if __name__ == "__main__":
    sys.exit(main())
