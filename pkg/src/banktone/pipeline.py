"""Configuration-driven pipeline: score, index, regress, bounded, leadlag, report.

Each stage reads its inputs from disk (original data or prior-stage
artifacts under the output directory) and writes delimited tables, so
stages can be re-run individually and a full run is just the stages in
order. A manifest records the config digest, input digests, and row
counts; an exclusive lock file keeps two runs out of one output
directory; artifacts of a failed run are moved to a quarantine
subdirectory instead of being left in place.
"""

from __future__ import annotations

import csv
import hashlib
import json
import os
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
import yaml

from . import __version__, reporting
from .corpus import MacroTable, load_corpus, load_macro
from .econometrics import (
    CalibratedParams,
    ModelData,
    bounded_path,
    estimate_alpha,
    macro_index,
    perfect_foresight_expectation,
    robustness_sweep,
    sign_structure_check,
    summarize,
)
from .errors import (
    BanktoneError,
    ConfigError,
    DependencyError,
    FormatError,
    LockError,
)
from .indexer import SGParams, build_monthly_index
from .months import month_index, month_label, month_of, parse_date
from .sentiment import (
    WORD_METHODS,
    compose_scm,
    default_concentrated,
    default_keywords,
    ingest_external_scores,
    load_lexicon,
    load_wordlist,
    score_corpus,
)
from .series import MeetingSeries, MonthlyIndex, align
from .spectral import KINDS, BandSpec, band_series, leadlag_report

OUTPUT_ROOT_ENV = "BANKTONE_OUTPUT_ROOT"
LOCK_NAME = ".banktone.lock"
QUARANTINE = "quarantine"
STAGE_ORDER = ("score", "index", "regress", "bounded", "leadlag", "report")

DEFAULT_BAND_LABELS = ("long", "mid", "short")


@dataclass
class RunConfig:
    """Resolved, validated run settings plus the digest of their raw form."""

    raw: dict
    base: Path
    output: Path
    corpus: Path | None
    lexicons: list[Path]
    keywords: Path | None
    concentrated: Path | None
    external_scores: Path | None
    macro: Path | None
    methods: list[str] | None
    scm_members: list[str]
    resample: str
    sg: SGParams | None
    keep_harmonics: int
    variants: list[int]
    pi_column: str
    expectation_column: str | None
    output_gap_column: str
    params: CalibratedParams
    alpha_variant: int
    m_grid: list[float]
    bands: list[BandSpec]
    disjoint: bool
    leadlag_x: str | None
    leadlag_y: str | None
    report_metric: str
    digest: str = ""

    def resolve(self, value: str) -> Path:
        p = Path(value)
        return p if p.is_absolute() else self.base / p


def _merge(base: dict, override: dict) -> dict:
    out = dict(base)
    for key, value in override.items():
        if isinstance(value, dict) and isinstance(out.get(key), dict):
            out[key] = _merge(out[key], value)
        else:
            out[key] = value
    return out


def config_digest(raw: dict) -> str:
    """Digest of the analysis-relevant config keys.

    Where the artifacts land is excluded on purpose: the same analysis
    written to two directories should produce byte-identical tables.
    """
    scrubbed = {k: v for k, v in raw.items()
                if k not in ("output", "output_flag")}
    canonical = json.dumps(scrubbed, sort_keys=True, default=str)
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()


def _existing(path: Path, role: str) -> Path:
    if not path.exists():
        raise ConfigError(f"{role} path does not exist: {path}")
    return path


def _looks_like_path(value: str) -> bool:
    return ("/" in value or value.endswith(".csv") or value.endswith(".txt")
            or value.endswith(".tsv"))


def load_config(path, overrides: dict | None = None) -> RunConfig:
    """Read the YAML config, apply flag overrides, validate, and digest."""
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    try:
        raw = yaml.safe_load(text) or {}
    except yaml.YAMLError as exc:
        raise ConfigError(f"config {path} is not valid YAML: {exc}") from exc
    if not isinstance(raw, dict):
        raise ConfigError(f"config {path} must be a mapping")
    if overrides:
        raw = _merge(raw, overrides)
    return build_config(raw, base=path.parent)


def build_config(raw: dict, base: Path) -> RunConfig:
    digest = config_digest(raw)
    indexer_cfg = raw.get("indexer") or {}
    regression_cfg = raw.get("regression") or {}
    model_cfg = raw.get("model") or {}
    leadlag_cfg = raw.get("leadlag") or {}

    output_value = os.environ.get(OUTPUT_ROOT_ENV) or raw.get("output")
    if "output_flag" in raw:
        output_value = raw["output_flag"]
    if not output_value:
        raise ConfigError("no output directory (config key 'output', "
                          f"flag --output, or ${OUTPUT_ROOT_ENV})")

    def resolve(value):
        p = Path(value)
        return p if p.is_absolute() else base / p

    def optional_path(key, node=raw):
        value = node.get(key)
        return _existing(resolve(value), key) if value else None

    lexicons = [_existing(resolve(p), "lexicon")
                for p in (raw.get("lexicons") or [])]

    bands_cfg = raw.get("bands") or dict(zip(DEFAULT_BAND_LABELS, (3, 6, 12)))
    if isinstance(bands_cfg, dict):
        bands = [BandSpec(str(label), int(cutoff))
                 for label, cutoff in bands_cfg.items()]
    else:
        cutoffs = sorted(int(c) for c in bands_cfg)
        labels = (DEFAULT_BAND_LABELS if len(cutoffs) == 3
                  else tuple(f"band{c}" for c in cutoffs))
        bands = [BandSpec(label, cutoff)
                 for label, cutoff in zip(labels, cutoffs)]
    if len({b.label for b in bands}) != len(bands):
        raise ConfigError("band labels must be unique")

    variants = [int(v) for v in regression_cfg.get("variants", (1, 2, 3))]
    for v in variants:
        if v not in (1, 2, 3):
            raise ConfigError(f"regression variant {v} not in {{1, 2, 3}}")

    sg_window = int(indexer_cfg.get("sg_window", 5))
    sg = None if indexer_cfg.get("sg_window") == 0 else SGParams(
        window=sg_window,
        polyorder=int(indexer_cfg.get("sg_poly", 2)),
        mode=str(indexer_cfg.get("sg_edge", "wrap")),
    )

    methods = raw.get("methods")
    if methods is not None:
        methods = [str(m) for m in methods]
        if not methods:
            raise ConfigError("'methods' must list at least one method")
    scm_members = [str(m) for m in (raw.get("scm_members") or [])]
    if scm_members and len(scm_members) < 2:
        raise ConfigError("'scm_members' needs at least 2 methods")

    m_grid = [float(m) for m in model_cfg.get("m_grid", (0.8, 0.85, 0.9))]

    report_metric = str(raw.get("report_metric", "abs"))
    if report_metric not in ("signed", "abs"):
        raise ConfigError("report_metric must be 'signed' or 'abs'")

    config = RunConfig(
        raw=raw,
        base=base,
        output=resolve(output_value),
        corpus=optional_path("corpus"),
        lexicons=lexicons,
        keywords=optional_path("keywords"),
        concentrated=optional_path("concentrated"),
        external_scores=optional_path("external_scores"),
        macro=optional_path("macro"),
        methods=methods,
        scm_members=scm_members,
        resample=str(indexer_cfg.get("resample", "linear")),
        sg=sg,
        keep_harmonics=int(indexer_cfg.get("keep_harmonics", 6)),
        variants=variants,
        pi_column=str(regression_cfg.get("pi_column", "HCPI")),
        expectation_column=regression_cfg.get("expectation"),
        output_gap_column=str(regression_cfg.get("output_gap_column", "y")),
        params=CalibratedParams(
            m=float(model_cfg.get("m", 0.85)),
            beta=float(model_cfg.get("beta", 0.985)),
            kappa=float(model_cfg.get("kappa", -0.25)),
        ),
        alpha_variant=int(model_cfg.get("alpha_variant", 1)),
        m_grid=m_grid,
        bands=bands,
        disjoint=bool(raw.get("disjoint", False)),
        leadlag_x=leadlag_cfg.get("x"),
        leadlag_y=leadlag_cfg.get("y"),
        report_metric=report_metric,
        digest=digest,
    )
    if config.resample not in ("linear", "fourier", "none"):
        raise ConfigError(f"unknown resample method {config.resample!r}")
    if config.alpha_variant not in (1, 2, 3):
        raise ConfigError(f"alpha_variant {config.alpha_variant} not in 1..3")
    for value in (config.leadlag_x, config.leadlag_y):
        if value and _looks_like_path(value):
            _existing(config.resolve(value), "leadlag series")
    return config


# ---------------------------------------------------------------- artifacts

def _sha256(path: Path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(65536), b""):
            h.update(chunk)
    return h.hexdigest()


def _read_artifact_rows(path: Path) -> tuple[list[str], list[list[str]]]:
    if not path.exists():
        raise DependencyError(
            f"required artifact {path} not found; run the earlier stages first"
        )
    with path.open(newline="", encoding="utf-8") as fh:
        rows = [row for row in csv.reader(fh)
                if row and not row[0].startswith("#")]
    if not rows:
        raise FormatError(f"artifact {path} has no header")
    return rows[0], rows[1:]


def read_scores(path: Path) -> dict[str, MeetingSeries]:
    header, rows = _read_artifact_rows(path)
    methods = header[1:]
    per_method: dict[str, list[tuple]] = {m: [] for m in methods}
    for row in rows:
        date = parse_date(row[0])
        for m, cell in zip(methods, row[1:]):
            if cell != reporting.MISSING:
                per_method[m].append((date, float(cell)))
    return {
        m: MeetingSeries(m, tuple(d for d, _ in pairs),
                         np.array([v for _, v in pairs]))
        for m, pairs in per_method.items() if pairs
    }


def read_indices(path: Path) -> dict[str, MonthlyIndex]:
    header, rows = _read_artifact_rows(path)
    methods = header[1:]
    start = month_index(rows[0][0])
    out = {}
    for j, m in enumerate(methods, start=1):
        out[m] = MonthlyIndex(m, start,
                              np.array([float(r[j]) for r in rows]))
    return out


def read_alpha_table(path: Path) -> list[dict[str, str]]:
    header, rows = _read_artifact_rows(path)
    return [dict(zip(header, row)) for row in rows]


def read_series_file(path: Path, label: str | None = None) -> MonthlyIndex:
    """A month,value (or date,value) file as a contiguous MonthlyIndex."""
    header, rows = _read_artifact_rows(path)
    if len(header) < 2:
        raise FormatError(f"series file {path} needs a date and a value column")
    months = []
    values = []
    for row in rows:
        stamp = row[0].strip()
        months.append(month_index(stamp[:7]))
        values.append(float(row[1]))
    order = np.argsort(months, kind="stable")
    months = [months[i] for i in order]
    values = [values[i] for i in order]
    for a, b in zip(months, months[1:]):
        if b == a:
            raise FormatError(f"series file {path}: duplicate month "
                              f"{month_label(b)}")
        if b != a + 1:
            raise FormatError(f"series file {path}: gap after {month_label(a)}")
    return MonthlyIndex(label or header[1], months[0], np.array(values))


# ---------------------------------------------------------------- stage runner

@dataclass
class Runner:
    config: RunConfig
    written: list[Path] = field(default_factory=list)
    counts: dict[str, dict[str, int]] = field(default_factory=dict)

    def __post_init__(self):
        self.config.output.mkdir(parents=True, exist_ok=True)

    def path(self, name: str) -> Path:
        return self.config.output / name

    def table(self, stage: str, name: str, columns, rows, units: str):
        count = reporting.write_table(self.path(name), columns, rows,
                                      self.config.digest, units)
        self.written.append(self.path(name))
        self.counts.setdefault(stage, {})[name] = count

    def figure(self, stage: str, name: str, draw, *args, **kwargs):
        draw(self.path(name), *args, **kwargs)
        self.written.append(self.path(name))
        self.counts.setdefault(stage, {})[name] = 1

    def quarantine(self):
        qdir = self.config.output / QUARANTINE
        qdir.mkdir(exist_ok=True)
        for path in self.written:
            if path.exists():
                target = qdir / path.name
                if target.exists():
                    target.unlink()
                path.rename(target)


class _Lock:
    def __init__(self, output: Path):
        self.path = output / LOCK_NAME

    def __enter__(self):
        self.path.parent.mkdir(parents=True, exist_ok=True)
        try:
            fd = os.open(self.path, os.O_CREAT | os.O_EXCL | os.O_WRONLY)
        except FileExistsError:
            raise LockError(
                f"output directory is locked by another run ({self.path}); "
                "remove the lock file if that run is dead"
            ) from None
        os.write(fd, str(os.getpid()).encode())
        os.close(fd)
        return self

    def __exit__(self, *exc_info):
        try:
            self.path.unlink()
        except FileNotFoundError:
            pass


# ---------------------------------------------------------------- stages

def stage_score(runner: Runner):
    cfg = runner.config
    if cfg.corpus is None:
        raise ConfigError("scoring needs a 'corpus' path in the config")
    if not cfg.lexicons:
        raise ConfigError("scoring needs at least one lexicon file")
    docs = load_corpus(cfg.corpus)
    lexicon = load_lexicon(cfg.lexicons)
    keywords = (load_wordlist(cfg.keywords) if cfg.keywords
                else default_keywords())
    concentrated = (load_wordlist(cfg.concentrated) if cfg.concentrated
                    else default_concentrated())
    series = score_corpus(docs, lexicon, keywords, concentrated)
    if cfg.external_scores is not None:
        external = ingest_external_scores(
            cfg.external_scores, meeting_dates=[d.meeting_date for d in docs])
        for name, ext in external.items():
            if name in series:
                raise ConfigError(
                    f"external score column {name!r} collides with a "
                    "built-in method"
                )
            series[name] = ext
    methods = list(series)
    dates = sorted({d for s in series.values() for d in s.dates})
    by_method = {m: dict(zip(series[m].dates, series[m].values))
                 for m in methods}
    rows = []
    for date in dates:
        rows.append([date.isoformat()]
                    + [by_method[m].get(date) for m in methods])
    runner.table("score", "scores.csv", ["meeting_date"] + methods, rows,
                 "per-meeting mean sentence scores, unitless")


def _selected_methods(cfg: RunConfig, available: list[str]) -> list[str]:
    if cfg.methods is None:
        return available
    missing = [m for m in cfg.methods if m not in available]
    if missing:
        raise ConfigError(f"configured methods not present in scores: "
                          f"{', '.join(missing)}")
    return list(cfg.methods)


def stage_index(runner: Runner):
    cfg = runner.config
    scored = read_scores(runner.path("scores.csv"))
    methods = _selected_methods(cfg, list(scored))
    ranges = [(month_of(scored[m].dates[0]), month_of(scored[m].dates[-1]))
              for m in methods]
    start = max(lo for lo, _ in ranges)
    end = min(hi for _, hi in ranges)
    indices = {}
    for m in methods:
        indices[m] = build_monthly_index(
            scored[m], resample=cfg.resample, sg=cfg.sg,
            keep_harmonics=cfg.keep_harmonics, start=start, end=end)
    if cfg.scm_members:
        missing = [m for m in cfg.scm_members if m not in indices]
        if missing:
            raise ConfigError(f"scm_members not indexed: {', '.join(missing)}")
        indices["SCm"] = compose_scm([indices[m] for m in cfg.scm_members])
    labels = [month_label(start + i) for i in range(end - start + 1)]
    columns = list(indices)
    rows = [[labels[i]] + [indices[m].values[i] for m in columns]
            for i in range(len(labels))]
    runner.table("index", "indices.csv", ["month"] + columns, rows,
                 "standardized monthly index values (sample s.d. units)")


def _model_data(cfg: RunConfig, macro: MacroTable) -> ModelData:
    pi = macro_index(macro, cfg.pi_column, "pi")
    if cfg.expectation_column:
        expected = macro_index(macro, cfg.expectation_column, "E[pi+1]")
    else:
        expected = perfect_foresight_expectation(pi)
    output_gap = macro_index(macro, cfg.output_gap_column, "y")
    return ModelData(pi=pi, expected=expected, output_gap=output_gap)


def _load_macro(cfg: RunConfig) -> MacroTable:
    if cfg.macro is None:
        raise ConfigError("this stage needs a 'macro' table in the config")
    return load_macro(cfg.macro)


def stage_regress(runner: Runner):
    cfg = runner.config
    indices = read_indices(runner.path("indices.csv"))
    macro = _load_macro(cfg)
    data = _model_data(cfg, macro)
    columns = ["variant", "method", "term", "coefficient", "std_error",
               "t_stat", "p_value", "stars", "r_squared", "n_obs",
               "window_start", "window_end"]
    rows = []
    for variant in cfg.variants:
        for method in indices:
            fit = estimate_alpha(indices[method], variant, data, macro)
            w0, w1 = fit.window
            for i, term in enumerate(fit.names):
                rows.append([
                    variant, method, term,
                    float(fit.coefficients[i]),
                    float(fit.standard_errors[i]),
                    float(fit.t_stats[i]),
                    float(fit.p_values[i]),
                    fit.stars[i] or ".",
                    fit.r_squared, fit.n,
                    month_label(w0), month_label(w1),
                ])
    runner.table("regress", "alpha_estimates.csv", columns, rows,
                 "coefficients in dependent units per 1 s.d. of regressor")


def _alpha_by_method(runner: Runner, variant: int) -> dict[str, float]:
    table = read_alpha_table(runner.path("alpha_estimates.csv"))
    out = {}
    for row in table:
        if (int(row["variant"]) == variant
                and row["term"] == f"{row['method']}(-1)"):
            out[row["method"]] = float(row["coefficient"])
    if not out:
        raise DependencyError(
            f"alpha_estimates.csv has no rows for variant {variant}"
        )
    return out


def stage_bounded(runner: Runner):
    cfg = runner.config
    indices = read_indices(runner.path("indices.csv"))
    macro = _load_macro(cfg)
    data = _model_data(cfg, macro)
    alphas = _alpha_by_method(runner, cfg.alpha_variant)
    methods = [m for m in indices if m in alphas]

    paths = {m: bounded_path(data, indices[m], alphas[m], cfg.params)
             for m in methods}

    path_rows = []
    for m in methods:
        p = paths[m]
        for i, label in enumerate(p.month_labels()):
            path_rows.append([label, m, p.pi[i], p.e_br[i], p.pi_br[i],
                              p.gap[i]])
    runner.table("bounded", "bounded_paths.csv",
                 ["month", "method", "pi", "e_br", "pi_br", "gap"], path_rows,
                 "inflation units of the configured pi column")

    summary_rows = []
    for m in methods:
        p = paths[m]
        for label, values in (("E_BR", p.e_br), ("pi_BR", p.pi_br),
                              ("gap", p.gap)):
            s = summarize(values)
            summary_rows.append([m, label, s.mean, s.median, s.maximum,
                                 s.minimum, s.value_range])
    runner.table("bounded", "bounded_summary.csv",
                 ["method", "series", "mean", "median", "max", "min", "range"],
                 summary_rows, "inflation units of the configured pi column")

    sign_rows = []
    for m in methods:
        check = sign_structure_check(alphas[m], -1.0)
        sign_rows.append([m, alphas[m], check.value, check.pattern])
    runner.table("bounded", "sign_patterns.csv",
                 ["method", "alpha", "contribution_at_sc_minus1", "pattern"],
                 sign_rows, "contribution = alpha * SC evaluated at SC = -1")

    sweep = robustness_sweep(cfg.m_grid,
                             {m: (indices[m], alphas[m]) for m in methods},
                             data, cfg.params)
    sweep_rows = [[row.m, row.method, row.alpha, row.gap_stats.mean,
                   row.gap_stats.median, row.gap_stats.maximum,
                   row.gap_stats.minimum, row.gap_stats.value_range]
                  for row in sweep]
    runner.table("bounded", "robustness.csv",
                 ["m", "method", "alpha", "gap_mean", "gap_median", "gap_max",
                  "gap_min", "gap_range"], sweep_rows,
                 "gap statistics in inflation units, one row per (m, method)")


def _leadlag_series(runner: Runner, selector: str | None, role: str,
                    ) -> MonthlyIndex:
    cfg = runner.config
    if not selector:
        raise ConfigError(f"leadlag needs an '{role}' series (method name "
                          "or month,value file)")
    if _looks_like_path(selector):
        return read_series_file(cfg.resolve(selector), role)
    indices = read_indices(runner.path("indices.csv"))
    if selector not in indices:
        raise ConfigError(f"leadlag {role} series {selector!r} is not an "
                          f"indexed method ({', '.join(indices)})")
    index = indices[selector]
    return MonthlyIndex(selector, index.start, index.values)


def stage_leadlag(runner: Runner):
    cfg = runner.config
    x = _leadlag_series(runner, cfg.leadlag_x, "x")
    y = _leadlag_series(runner, cfg.leadlag_y, "y")
    x, y = align(x, y)
    summary = leadlag_report(x.values, y.values, cfg.bands,
                             disjoint=cfg.disjoint)

    summary_rows = []
    for band in cfg.bands:
        for kind in KINDS:
            cell = summary.cell(band.label, kind)
            summary_rows.append([band.label, band.cutoff, kind, cell.count,
                                 cell.signed_mean, cell.abs_mean])
    runner.table("leadlag", "leadlag_summary.csv",
                 ["band", "cutoff", "kind", "count", "signed_mean",
                  "abs_mean"], summary_rows,
                 "distances in months; positive signed value = x later than y")

    pair_rows = []
    for band in cfg.bands:
        for kind in KINDS:
            for tx, ty, delta in summary.cell(band.label, kind).pairs:
                pair_rows.append([band.label, kind,
                                  month_label(x.start + tx),
                                  month_label(y.start + ty), delta])
    runner.table("leadlag", "leadlag_pairs.csv",
                 ["band", "kind", "x_month", "y_month", "delta_months"],
                 pair_rows, "matched extremum months; delta in months")

    x_bands = band_series(x.values, cfg.bands, cfg.disjoint)
    y_bands = band_series(y.values, cfg.bands, cfg.disjoint)
    band_rows = []
    for band in cfg.bands:
        for i, label in enumerate(x.month_labels()):
            band_rows.append([band.label, label, x_bands[band.label][i],
                              y_bands[band.label][i]])
    runner.table("leadlag", "leadlag_bands.csv",
                 ["band", "month", "x", "y"], band_rows,
                 "band-reconstructed series values (x, y input units)")


def _series_name(selector: str | None, fallback: str) -> str:
    if not selector:
        return fallback
    return Path(selector).stem if _looks_like_path(selector) else selector


def stage_report(runner: Runner):
    cfg = runner.config

    header, rows = _read_artifact_rows(runner.path("bounded_paths.csv"))
    months = []
    gaps: dict[str, dict[str, float]] = {}
    for row in rows:
        month, method = row[0], row[1]
        gaps.setdefault(method, {})[month] = float(row[5])
        if month not in months:
            months.append(month)
    gap_series = {m: [vals.get(label, float("nan")) for label in months]
                  for m, vals in gaps.items()}
    runner.figure("report", "fig_gap_over_time.svg",
                  reporting.plot_gap_over_time, months, gap_series)

    _, brows = _read_artifact_rows(runner.path("leadlag_bands.csv"))
    first_band = min(cfg.bands, key=lambda b: b.cutoff).label
    band_months = [r[1] for r in brows if r[0] == first_band]
    x_vals = [float(r[2]) for r in brows if r[0] == first_band]
    y_vals = [float(r[3]) for r in brows if r[0] == first_band]
    _, prows = _read_artifact_rows(runner.path("leadlag_pairs.csv"))
    month_pos = {label: i for i, label in enumerate(band_months)}
    pairs = [(month_pos[r[2]], month_pos[r[3]]) for r in prows
             if r[0] == first_band and r[1] == "minima"]
    x_name = _series_name(cfg.leadlag_x, "x")
    y_name = _series_name(cfg.leadlag_y, "y")
    runner.figure("report", "fig_matched_minima.svg",
                  reporting.plot_matched_extrema, band_months, x_vals, y_vals,
                  pairs, first_band, x_name, y_name)

    sheader, srows = _read_artifact_rows(runner.path("leadlag_summary.csv"))
    metric = "signed_mean" if cfg.report_metric == "signed" else "abs_mean"
    col = sheader.index(metric)
    values = {}
    for r in srows:
        cell = r[col]
        values[(r[0], r[2])] = None if cell == reporting.MISSING else float(cell)
    runner.figure("report", "fig_leadlag_bars.svg",
                  reporting.plot_leadlag_bars,
                  [b.label for b in cfg.bands], values,
                  "signed mean" if metric == "signed_mean" else "mean absolute")


STAGES = {
    "score": stage_score,
    "index": stage_index,
    "regress": stage_regress,
    "bounded": stage_bounded,
    "leadlag": stage_leadlag,
    "report": stage_report,
}


def _input_digests(cfg: RunConfig) -> dict[str, str]:
    paths: list[Path] = []
    if cfg.corpus is not None:
        if cfg.corpus.is_dir():
            paths.extend(sorted(cfg.corpus.glob("*.txt")))
        else:
            paths.append(cfg.corpus)
    paths.extend(cfg.lexicons)
    for p in (cfg.keywords, cfg.concentrated, cfg.external_scores, cfg.macro):
        if p is not None:
            paths.append(p)
    for selector in (cfg.leadlag_x, cfg.leadlag_y):
        if selector and _looks_like_path(selector):
            paths.append(cfg.resolve(selector))
    out = {}
    for p in paths:
        try:
            key = str(p.relative_to(cfg.base))
        except ValueError:
            key = str(p)
        out[key] = _sha256(p)
    return out


def run_stages(config: RunConfig, stages: tuple[str, ...]) -> Runner:
    """Execute the named stages in order under the output-directory lock."""
    runner = Runner(config)
    with _Lock(config.output):
        try:
            for name in stages:
                try:
                    STAGES[name](runner)
                except BanktoneError as exc:
                    raise type(exc)(f"stage {name}: {exc}") from exc
        except BaseException:
            runner.quarantine()
            raise
    return runner


def run(config: RunConfig) -> dict:
    """Full pipeline; writes run_manifest.json and returns its contents."""
    started = time.perf_counter()
    runner = run_stages(config, STAGE_ORDER)
    manifest = {
        "config_digest": config.digest,
        "version": __version__,
        "inputs": _input_digests(config),
        "stages": {stage: dict(sorted(counts.items()))
                   for stage, counts in sorted(runner.counts.items())},
        "wall_time_seconds": round(time.perf_counter() - started, 3),
    }
    manifest_path = config.output / "run_manifest.json"
    manifest_path.write_text(json.dumps(manifest, indent=2, sort_keys=True)
                             + "\n", encoding="utf-8")
    return manifest
