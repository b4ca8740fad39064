"""Meeting-frequency to monthly-index conversion, smoothing, standardization.

The default pipeline is linear interpolation to the month grid, a
Savitzky-Golay pass (window 5, quadratic, periodic edges), then
z-standardization. Fourier resampling (step-fill plus low-pass) and a raw
no-smoothing path are available as alternatives.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.signal import savgol_filter

from .errors import DegenerateSeriesError, InsufficientDataError, ParameterError
from .months import month_of
from .series import MeetingSeries, MonthlyIndex
from .spectral import dft, idft, lowpass

EDGE_MODES = ("wrap", "mirror")


@dataclass(frozen=True)
class SGParams:
    window: int = 5
    polyorder: int = 2
    deriv: int = 0
    delta: float = 1.0
    mode: str = "wrap"

    def __post_init__(self):
        if self.window < 1 or self.window % 2 == 0:
            raise ParameterError(f"window must be odd and positive, got {self.window}")
        if not 0 <= self.polyorder < self.window:
            raise ParameterError(
                f"polyorder {self.polyorder} must be in [0, window {self.window})"
            )
        if self.deriv < 0:
            raise ParameterError("derivative order must be nonnegative")
        if self.delta <= 0:
            raise ParameterError("sample spacing must be positive")
        if self.mode not in EDGE_MODES:
            raise ParameterError(f"edge mode must be one of {EDGE_MODES}")


def _meeting_months(series: MeetingSeries) -> tuple[np.ndarray, np.ndarray]:
    """Month index and value per meeting month; same-month meetings average."""
    months: list[int] = []
    buckets: list[list[float]] = []
    for date, value in zip(series.dates, series.values):
        m = month_of(date)
        if months and months[-1] == m:
            buckets[-1].append(float(value))
        else:
            months.append(m)
            buckets.append([float(value)])
    values = np.array([float(np.mean(b)) for b in buckets])
    return np.array(months), values


def _grid(months: np.ndarray, start: int | None, end: int | None) -> np.ndarray:
    lo = int(months[0]) if start is None else start
    hi = int(months[-1]) if end is None else end
    if hi < lo:
        raise ParameterError("month grid end precedes start")
    return np.arange(lo, hi + 1)


def to_monthly_linear(series: MeetingSeries, start: int | None = None,
                      end: int | None = None) -> MonthlyIndex:
    """Linear interpolation between meeting months; flat beyond the ends."""
    if len(series) < 2:
        raise InsufficientDataError(
            f"series {series.method!r}: interpolation needs at least 2 meetings"
        )
    months, values = _meeting_months(series)
    grid = _grid(months, start, end)
    out = np.interp(grid, months, values)
    return MonthlyIndex(series.method, int(grid[0]), out)


def to_monthly_step(series: MeetingSeries, start: int | None = None,
                    end: int | None = None) -> MonthlyIndex:
    """Each month takes the most recent meeting value (first value before any)."""
    if len(series) < 2:
        raise InsufficientDataError(
            f"series {series.method!r}: a monthly index needs at least 2 meetings"
        )
    months, values = _meeting_months(series)
    grid = _grid(months, start, end)
    slot = np.searchsorted(months, grid, side="right") - 1
    return MonthlyIndex(series.method, int(grid[0]),
                        values[np.maximum(slot, 0)])


def to_monthly_fourier(series: MeetingSeries, keep_harmonics: int,
                       start: int | None = None,
                       end: int | None = None) -> MonthlyIndex:
    """Step-fill to the month grid, then keep only low harmonics.

    Harmonics above keep_harmonics are zeroed; a cutoff at or beyond
    Nyquist leaves the step-filled series unchanged.
    """
    if len(series) < 4:
        raise InsufficientDataError(
            f"series {series.method!r}: spectral resampling needs at least "
            f"4 meetings"
        )
    stepped = to_monthly_step(series, start, end)
    smoothed = idft(lowpass(dft(stepped.values), keep_harmonics))
    return MonthlyIndex(series.method, stepped.start, smoothed)


def sg_filter(values: Sequence[float], params: SGParams = SGParams()) -> np.ndarray:
    """Least-squares local polynomial smoothing with periodic or mirror edges."""
    values = np.asarray(values, dtype=float)
    if len(values) < params.window:
        raise InsufficientDataError(
            f"filter window {params.window} exceeds series length {len(values)}"
        )
    return savgol_filter(values, window_length=params.window,
                         polyorder=params.polyorder, deriv=params.deriv,
                         delta=params.delta, mode=params.mode)


def standardize(values: Sequence[float]) -> np.ndarray:
    """Center to mean 0 and scale to sample standard deviation 1."""
    values = np.asarray(values, dtype=float)
    if len(values) < 2:
        raise DegenerateSeriesError("standardization needs at least 2 values")
    sd = float(np.std(values, ddof=1))
    if sd == 0.0:
        raise DegenerateSeriesError("cannot standardize a constant series")
    return (values - np.mean(values)) / sd


def build_monthly_index(series: MeetingSeries, resample: str = "linear",
                        sg: SGParams | None = SGParams(),
                        keep_harmonics: int = 6,
                        start: int | None = None, end: int | None = None,
                        scale: bool = True) -> MonthlyIndex:
    """Meeting series to (optionally smoothed, standardized) monthly index."""
    if resample == "linear":
        index = to_monthly_linear(series, start, end)
    elif resample == "fourier":
        index = to_monthly_fourier(series, keep_harmonics, start, end)
    elif resample == "none":
        index = to_monthly_step(series, start, end)
    else:
        raise ParameterError(f"unknown resample method {resample!r}")
    values = index.values
    if sg is not None:
        values = sg_filter(values, sg)
    if scale:
        values = standardize(values)
    return MonthlyIndex(index.method, index.start, values)
