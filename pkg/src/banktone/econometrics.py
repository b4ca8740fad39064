"""Sentiment-discount regressions and the bounded-expectation inflation model.

Two halves. The regression half estimates how last month's sentiment index
moves the gap between realized inflation and next-month expected inflation,
with optional macro controls. The model half plugs an estimated sentiment
coefficient into a bounded expectation

    E_BR[t] = m * E[pi, t+1] + alpha * SC[t-1]

and a Phillips-curve fitted value

    pi_BR[t] = beta * E_BR[t] + kappa * y[t]

then reports the gap pi - pi_BR per month.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy import stats

from .corpus import MacroTable
from .errors import (
    AlignmentError,
    DegenerateSeriesError,
    InsufficientDataError,
    ParameterError,
    SingularDesignError,
)
from .indexer import standardize
from .months import month_label
from .series import MonthlyIndex, align

VARIANT_CONTROLS = {
    1: (),
    2: ("GDP", "MBAS", "FEDIR", "EXC"),
    3: ("GDP", "MBAS", "FEDIR", "EXC", "UNEM", "PCE", "COIL"),
}

STAR_THRESHOLDS = ((0.01, "***"), (0.05, "**"), (0.1, "*"))


@dataclass(frozen=True)
class CalibratedParams:
    m: float = 0.85
    beta: float = 0.985
    kappa: float = -0.25

    def __post_init__(self):
        if not 0 < self.m <= 1:
            raise ParameterError(f"cognitive discount m={self.m} outside (0, 1]")
        if not 0 < self.beta < 1.05:
            raise ParameterError(f"discount beta={self.beta} outside (0, 1.05)")
        if not np.isfinite(self.kappa):
            raise ParameterError("Phillips-curve slope kappa must be finite")


@dataclass(frozen=True)
class RegressionSpec:
    """Dependent label plus (regressor label, lag) pairs and a month window."""

    dependent: str
    regressors: tuple[tuple[str, int], ...]
    intercept: bool = True
    window: tuple[int, int] | None = None

    def __post_init__(self):
        if not self.regressors:
            raise ParameterError("regression needs at least one regressor")
        for label, lag in self.regressors:
            if lag < 0:
                raise ParameterError(f"regressor {label!r}: negative lag {lag}")


@dataclass(frozen=True)
class Design:
    """Materialized regression data: y and the (standardized) design matrix."""

    y: np.ndarray
    matrix: np.ndarray
    names: tuple[str, ...]
    window: tuple[int, int]
    intercept: bool


def _column_name(label: str, lag: int) -> str:
    return f"{label}(-{lag})" if lag else label


def _source_range(label: str, series: dict[str, MonthlyIndex],
                  macro: MacroTable | None) -> tuple[int, int]:
    if label in series:
        src = series[label]
        return src.start, src.end
    if macro is not None and label in macro.columns:
        col = macro.columns[label]
        ok = np.flatnonzero(~np.isnan(col))
        if len(ok) == 0:
            raise AlignmentError(f"macro column {label!r} is entirely missing")
        return macro.start + int(ok[0]), macro.start + int(ok[-1])
    raise AlignmentError(f"no series or macro column named {label!r}")


def _extract(label: str, start: int, end: int, series: dict[str, MonthlyIndex],
             macro: MacroTable | None) -> np.ndarray:
    if label in series:
        return series[label].window(start, end)
    return macro.window(label, start, end)


def regression_design(spec: RegressionSpec, series: dict[str, MonthlyIndex],
                      macro: MacroTable | None = None) -> Design:
    """Assemble y and X over the widest window all terms cover.

    Regressor columns are z-standardized inside the window so coefficients
    are comparable across sentiment methods; the dependent stays in its
    natural units.
    """
    lo, hi = _source_range(spec.dependent, series, macro)
    for label, lag in spec.regressors:
        s, e = _source_range(label, series, macro)
        lo, hi = max(lo, s + lag), min(hi, e + lag)
    if spec.window is not None:
        lo, hi = spec.window
    if hi < lo:
        raise InsufficientDataError(
            f"no months where {spec.dependent!r} and all regressors overlap"
        )
    y = np.asarray(_extract(spec.dependent, lo, hi, series, macro), dtype=float)
    columns = []
    names = []
    if spec.intercept:
        columns.append(np.ones(len(y)))
        names.append("const")
    for label, lag in spec.regressors:
        raw = _extract(label, lo - lag, hi - lag, series, macro)
        try:
            columns.append(standardize(raw))
        except DegenerateSeriesError:
            raise DegenerateSeriesError(
                f"regressor {label!r} is constant over "
                f"{month_label(lo)}..{month_label(hi)}"
            ) from None
        names.append(_column_name(label, lag))
    return Design(y, np.column_stack(columns), tuple(names), (lo, hi),
                  spec.intercept)


@dataclass(frozen=True)
class RegressionFit:
    names: tuple[str, ...]
    coefficients: np.ndarray
    standard_errors: np.ndarray
    t_stats: np.ndarray
    p_values: np.ndarray
    stars: tuple[str, ...]
    r_squared: float
    n: int
    df_resid: int
    residuals: np.ndarray
    window: tuple[int, int]

    def _at(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise ParameterError(f"fit has no term {name!r}") from None

    def coefficient(self, name: str) -> float:
        return float(self.coefficients[self._at(name)])

    def p_value(self, name: str) -> float:
        return float(self.p_values[self._at(name)])

    def star(self, name: str) -> str:
        return self.stars[self._at(name)]


def significance_stars(p: float) -> str:
    for threshold, marker in STAR_THRESHOLDS:
        if p < threshold:
            return marker
    return ""


def ols_fit(design: Design) -> RegressionFit:
    """Ordinary least squares with classical (homoskedastic) standard errors."""
    y, x = design.y, design.matrix
    n, p = x.shape
    if n <= p:
        raise InsufficientDataError(
            f"{n} observations cannot identify {p} coefficients"
        )
    if np.linalg.matrix_rank(x) < p:
        raise SingularDesignError(
            f"design matrix is rank-deficient (columns: {', '.join(design.names)})"
        )
    coef, _, _, _ = np.linalg.lstsq(x, y, rcond=None)
    residuals = y - x @ coef
    rss = float(residuals @ residuals)
    df = n - p
    sigma2 = rss / df
    cov = sigma2 * np.linalg.inv(x.T @ x)
    se = np.sqrt(np.diag(cov))
    with np.errstate(divide="ignore", invalid="ignore"):
        t = np.where(se > 0, coef / np.where(se > 0, se, 1.0), np.inf * np.sign(coef))
    t = np.where((se == 0) & (coef == 0), 0.0, t)
    pvals = 2 * stats.t.sf(np.abs(t), df)
    if design.intercept:
        tss = float(np.sum((y - y.mean()) ** 2))
        r2 = 0.0 if tss == 0 else 1 - rss / tss
        r2 = min(1.0, max(0.0, r2))
    else:
        tss = float(y @ y)
        r2 = 0.0 if tss == 0 else 1 - rss / tss
    return RegressionFit(
        names=design.names,
        coefficients=coef,
        standard_errors=se,
        t_stats=t,
        p_values=pvals,
        stars=tuple(significance_stars(pv) for pv in pvals),
        r_squared=r2,
        n=n,
        df_resid=df,
        residuals=residuals,
        window=design.window,
    )


def macro_index(macro: MacroTable, name: str, label: str | None = None,
                ) -> MonthlyIndex:
    """A macro column as a MonthlyIndex, trimmed of missing edges."""
    col = macro.column(name)
    ok = np.flatnonzero(~np.isnan(col))
    if len(ok) == 0:
        raise AlignmentError(f"macro column {name!r} is entirely missing")
    lo, hi = int(ok[0]), int(ok[-1])
    chunk = col[lo:hi + 1]
    if np.isnan(chunk).any():
        gap = lo + int(np.flatnonzero(np.isnan(chunk))[0])
        raise AlignmentError(
            f"macro column {name!r} has a gap at {month_label(macro.start + gap)}"
        )
    return MonthlyIndex(label or name, macro.start + lo, chunk)


@dataclass(frozen=True)
class ModelData:
    """Realized inflation, its one-month-ahead expectation, and the output gap."""

    pi: MonthlyIndex
    expected: MonthlyIndex
    output_gap: MonthlyIndex


def perfect_foresight_expectation(pi: MonthlyIndex) -> MonthlyIndex:
    """Proxy E_t[pi_{t+1}] by the realized next-month value."""
    if len(pi) < 2:
        raise InsufficientDataError("perfect foresight needs at least 2 months")
    return MonthlyIndex("E[pi+1]", pi.start, pi.values[1:])


def rational_gap(pi: MonthlyIndex, expected: MonthlyIndex) -> MonthlyIndex:
    """phi_t = pi_t - E_t[pi_{t+1}] on identical grids."""
    _require_same_grid(pi, expected)
    return MonthlyIndex("phi", pi.start, pi.values - expected.values)


def _require_same_grid(*indices: MonthlyIndex):
    first = indices[0]
    for ix in indices[1:]:
        if ix.start != first.start or len(ix) != len(first):
            raise AlignmentError(
                f"{ix.method!r} grid {month_label(ix.start)}+{len(ix)} does not "
                f"match {first.method!r} grid {month_label(first.start)}"
                f"+{len(first)}"
            )


def bounded_expectation(expected: MonthlyIndex, sc_lagged: MonthlyIndex,
                        alpha: float, m: float) -> MonthlyIndex:
    """E_BR_t = m * E_t[pi_{t+1}] + alpha * SC_{t-1}."""
    _require_same_grid(expected, sc_lagged)
    return MonthlyIndex("E_BR", expected.start,
                        m * expected.values + alpha * sc_lagged.values)


def bounded_inflation(e_br: MonthlyIndex, output_gap: MonthlyIndex,
                      params: CalibratedParams) -> MonthlyIndex:
    """pi_BR_t = beta * E_BR_t + kappa * y_t (fitted value, shock omitted)."""
    _require_same_grid(e_br, output_gap)
    return MonthlyIndex("pi_BR", e_br.start,
                        params.beta * e_br.values
                        + params.kappa * output_gap.values)


def bounded_gap(pi: MonthlyIndex, pi_br: MonthlyIndex) -> MonthlyIndex:
    """gap_t = pi_t - pi_BR_t."""
    _require_same_grid(pi, pi_br)
    return MonthlyIndex("gap", pi.start, pi.values - pi_br.values)


@dataclass(frozen=True)
class BoundedPath:
    """Monthly E_BR, pi_BR, and gap for one method and one alpha."""

    method: str
    start: int
    pi: np.ndarray
    e_br: np.ndarray
    pi_br: np.ndarray
    gap: np.ndarray
    alpha: float
    m: float

    def __post_init__(self):
        lengths = {len(self.pi), len(self.e_br), len(self.pi_br), len(self.gap)}
        if len(lengths) != 1:
            raise AlignmentError("bounded path series have differing lengths")

    def __len__(self) -> int:
        return len(self.gap)

    def month_labels(self) -> list[str]:
        return [month_label(self.start + i) for i in range(len(self))]


def bounded_path(data: ModelData, sc: MonthlyIndex, alpha: float,
                 params: CalibratedParams, m: float | None = None) -> BoundedPath:
    """Run the bounded model over the common month range.

    `m` overrides params.m for robustness sweeps and may reach 1.05 there,
    slightly past the calibrated ceiling.
    """
    m_eff = params.m if m is None else m
    if not 0 < m_eff <= 1.05:
        raise ParameterError(f"cognitive discount m={m_eff} outside (0, 1.05]")
    pi, expected, y, sc_lagged = align(data.pi, data.expected, data.output_gap,
                                       sc.lagged(1))
    e_br = bounded_expectation(expected, sc_lagged, alpha, m_eff)
    pi_br = bounded_inflation(e_br, y, params)
    gap = bounded_gap(pi, pi_br)
    return BoundedPath(sc.method, pi.start, pi.values, e_br.values,
                       pi_br.values, gap.values, alpha, m_eff)


def phi_series(data: ModelData) -> MonthlyIndex:
    """The regression dependent: rational gap over the common grid."""
    pi, expected = align(data.pi, data.expected)
    return rational_gap(pi, expected)


def alpha_spec(method: str, variant: int,
               window: tuple[int, int] | None = None) -> RegressionSpec:
    """Regression layout for one model variant: lag-1 sentiment plus controls."""
    if variant not in VARIANT_CONTROLS:
        raise ParameterError(f"model variant must be 1, 2, or 3, got {variant}")
    regressors = ((method, 1),) + tuple(
        (c, 0) for c in VARIANT_CONTROLS[variant])
    return RegressionSpec("phi", regressors, intercept=True, window=window)


def estimate_alpha(sc: MonthlyIndex, variant: int, data: ModelData,
                   macro: MacroTable | None = None,
                   window: tuple[int, int] | None = None) -> RegressionFit:
    """Fit the sentiment discount factor for one method and variant."""
    spec = alpha_spec(sc.method, variant, window)
    phi = phi_series(data)
    design = regression_design(spec, {"phi": phi, sc.method: sc}, macro)
    return ols_fit(design)


@dataclass(frozen=True)
class SummaryStats:
    mean: float
    median: float
    maximum: float
    minimum: float
    value_range: float


def summarize(values: Sequence[float]) -> SummaryStats:
    values = np.asarray(values, dtype=float)
    if len(values) == 0:
        raise InsufficientDataError("cannot summarize an empty series")
    return SummaryStats(
        mean=float(np.mean(values)),
        median=float(np.median(values)),
        maximum=float(np.max(values)),
        minimum=float(np.min(values)),
        value_range=float(np.max(values) - np.min(values)),
    )


@dataclass(frozen=True)
class SignedContribution:
    value: float
    pattern: str


def sign_structure_check(alpha: float, sc_value: float) -> SignedContribution:
    """Classify the sign of the sentiment contribution alpha * SC.

    Negative alpha with negative sentiment lifts expected inflation (reading
    the index as an expert signal of imminent policy action); positive alpha
    with negative sentiment lowers it (reading the index at face value).
    """
    value = alpha * sc_value
    if value == 0:
        pattern = "neutral"
    elif alpha < 0 and sc_value < 0:
        pattern = "expert"
    elif alpha > 0 and sc_value < 0:
        pattern = "non-expert"
    else:
        pattern = "unclassified"
    return SignedContribution(value, pattern)


@dataclass(frozen=True)
class SweepRow:
    m: float
    method: str
    alpha: float
    path: BoundedPath
    gap_stats: SummaryStats


def robustness_sweep(m_grid: Sequence[float],
                     cells: dict[str, tuple[MonthlyIndex, float]],
                     data: ModelData,
                     params: CalibratedParams = CalibratedParams(),
                     ) -> list[SweepRow]:
    """Bounded paths for every (m, method) pair, ordered by (m, method)."""
    for m in m_grid:
        if not 0 < m <= 1.05:
            raise ParameterError(f"sweep value m={m} outside (0, 1.05]")
    rows = []
    for m in sorted(m_grid):
        for method in sorted(cells):
            sc, alpha = cells[method]
            path = bounded_path(data, sc, alpha, params, m=m)
            rows.append(SweepRow(m, method, alpha, path, summarize(path.gap)))
    return rows
