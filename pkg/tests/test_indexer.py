import datetime as dt
import random

import numpy as np
import pytest

from banktone.errors import (
    DegenerateSeriesError,
    InsufficientDataError,
    ParameterError,
)
from banktone.indexer import (
    SGParams,
    build_monthly_index,
    sg_filter,
    standardize,
    to_monthly_fourier,
    to_monthly_linear,
    to_monthly_step,
)
from banktone.months import month_index
from banktone.series import MeetingSeries


def _series(pairs, method="SC"):
    dates = tuple(dt.date.fromisoformat(d) for d, _ in pairs)
    return MeetingSeries(method, dates, np.array([v for _, v in pairs], float))


def quadratic_smooth_oracle(values, window, polyorder):
    """Savitzky-Golay by explicit least squares with periodic padding.

    For each point, fit a degree-`polyorder` polynomial to the window by
    solving the normal equations directly and evaluate it at the center.
    """
    values = np.asarray(values, float)
    half = window // 2
    padded = np.concatenate([values[-half:], values, values[:half]])
    offsets = np.arange(-half, half + 1)
    design = np.vander(offsets, polyorder + 1, increasing=True)
    out = np.empty_like(values)
    for i in range(len(values)):
        chunk = padded[i:i + window]
        coef = np.linalg.solve(design.T @ design, design.T @ chunk)
        out[i] = coef[0]
    return out


def test_sg_window5_quadratic_weights():
    # The 5-point quadratic smoother has a known closed-form kernel; derive
    # it from the normal equations and confirm the filter applies it.
    offsets = np.arange(-2, 3)
    design = np.vander(offsets, 3, increasing=True)
    kernel = np.linalg.solve(design.T @ design, design.T)[0]
    assert np.allclose(kernel, np.array([-3, 12, 17, 12, -3]) / 35, atol=1e-12)

    impulse = np.zeros(11)
    impulse[5] = 1.0
    response = sg_filter(impulse, SGParams())
    assert np.abs(response[3:8] - kernel).max() < 1e-12


def test_sg_matches_least_squares_oracle_with_wrap():
    rng = np.random.default_rng(42)
    for _ in range(20):
        n = int(rng.integers(7, 40))
        x = rng.normal(size=n)
        got = sg_filter(x, SGParams(window=5, polyorder=2, mode="wrap"))
        want = quadratic_smooth_oracle(x, 5, 2)
        assert np.abs(got - want).max() < 1e-10


def test_sg_constant_reproduced():
    out = sg_filter(np.full(9, 3.25), SGParams())
    assert np.allclose(out, 3.25, atol=1e-12)


def test_sg_quadratic_exact_away_from_edges():
    t = np.arange(20, dtype=float)
    x = 0.3 * t ** 2 - 1.2 * t + 0.7
    out = sg_filter(x, SGParams())
    assert np.abs(out[2:-2] - x[2:-2]).max() < 1e-9


def test_sg_linearity_and_shift_equivariance():
    rng = np.random.default_rng(7)
    x = rng.normal(size=24)
    y = rng.normal(size=24)
    params = SGParams()
    combined = sg_filter(2.5 * x + y, params)
    assert np.abs(combined - (2.5 * sg_filter(x, params) + sg_filter(y, params))
                  ).max() < 1e-10
    rolled = sg_filter(np.roll(x, 5), params)
    assert np.abs(rolled - np.roll(sg_filter(x, params), 5)).max() < 1e-10


def test_sg_parameter_validation():
    with pytest.raises(ParameterError):
        SGParams(window=4)
    with pytest.raises(ParameterError):
        SGParams(window=5, polyorder=5)
    with pytest.raises(ParameterError):
        SGParams(mode="nearest")
    with pytest.raises(InsufficientDataError):
        sg_filter(np.zeros(3), SGParams(window=5))


def test_standardize_two_points():
    out = standardize([1.0, 3.0])
    assert out == pytest.approx([-0.7071067811865475, 0.7071067811865475])


def test_standardize_idempotent_and_degenerate():
    rng = np.random.default_rng(3)
    x = rng.normal(size=30)
    once = standardize(x)
    assert np.abs(standardize(once) - once).max() < 1e-12
    assert np.mean(once) == pytest.approx(0, abs=1e-12)
    assert np.std(once, ddof=1) == pytest.approx(1, abs=1e-12)
    with pytest.raises(DegenerateSeriesError):
        standardize(np.full(5, 2.0))
    with pytest.raises(DegenerateSeriesError):
        standardize([1.0])


def test_linear_interpolation_between_meeting_months():
    idx = to_monthly_linear(_series([("2006-01-15", 0.0), ("2006-03-20", 2.0)]))
    assert idx.start == month_index("2006-01")
    assert idx.values.tolist() == [0.0, 1.0, 2.0]

    idx = to_monthly_linear(_series([("2006-01-10", 5.0), ("2006-02-10", 5.0)]))
    assert idx.values.tolist() == [5.0, 5.0]

    idx = to_monthly_linear(_series([("2006-01-05", 0.0), ("2006-04-05", 3.0)]))
    assert idx.values.tolist() == [0.0, 1.0, 2.0, 3.0]


def test_linear_passes_through_meeting_values_and_extends_flat():
    pairs = [("2006-01-12", 0.4), ("2006-03-07", -1.0), ("2006-06-21", 2.0)]
    idx = to_monthly_linear(_series(pairs),
                            start=month_index("2005-11"),
                            end=month_index("2006-08"))
    assert idx.value_at(month_index("2006-01")) == 0.4
    assert idx.value_at(month_index("2006-03")) == -1.0
    assert idx.value_at(month_index("2006-06")) == 2.0
    assert idx.value_at(month_index("2005-11")) == 0.4
    assert idx.value_at(month_index("2006-08")) == 2.0


def test_same_month_meetings_average():
    idx = to_monthly_linear(_series([("2006-01-05", 1.0), ("2006-01-25", 3.0),
                                     ("2006-02-15", 0.0)]))
    assert idx.values.tolist() == [2.0, 0.0]


def test_linear_needs_two_meetings():
    with pytest.raises(InsufficientDataError):
        to_monthly_linear(_series([("2006-01-15", 1.0)]))


def test_step_fill_takes_most_recent_meeting():
    idx = to_monthly_step(_series([("2006-02-10", 1.0), ("2006-05-10", 4.0)]),
                          start=month_index("2006-01"),
                          end=month_index("2006-07"))
    assert idx.values.tolist() == [1.0, 1.0, 1.0, 1.0, 4.0, 4.0, 4.0]


def _monthly_meetings(values, start="2006-01-15"):
    d0 = dt.date.fromisoformat(start)
    pairs = []
    y, m = d0.year, d0.month
    for v in values:
        pairs.append((f"{y:04d}-{m:02d}-15", float(v)))
        m += 1
        if m == 13:
            y, m = y + 1, 1
    return _series(pairs)


def test_fourier_constant_untouched():
    idx = to_monthly_fourier(_monthly_meetings([2.0] * 12), keep_harmonics=3)
    assert np.allclose(idx.values, 2.0, atol=1e-12)


def test_fourier_nyquist_cutoff_is_identity():
    rng = np.random.default_rng(5)
    vals = rng.normal(size=24)
    series = _monthly_meetings(vals)
    idx = to_monthly_fourier(series, keep_harmonics=12)
    assert np.abs(idx.values - vals).max() < 1e-9


def test_fourier_removes_high_harmonic():
    t = np.arange(24)
    vals = np.cos(2 * np.pi * 5 * t / 24)
    idx = to_monthly_fourier(_monthly_meetings(list(vals)), keep_harmonics=3)
    assert np.abs(idx.values).max() < 1e-8


def test_fourier_needs_four_meetings():
    with pytest.raises(InsufficientDataError):
        to_monthly_fourier(_series([("2006-01-15", 1.0), ("2006-03-15", 2.0),
                                    ("2006-05-15", 0.5)]), keep_harmonics=2)


def test_build_monthly_index_default_pipeline_matches_composition():
    rng = random.Random(17)
    pairs = []
    for k in range(16):
        year = 2006 + k // 8
        month = 1 + (k % 8) + (k % 8) // 2
        pairs.append((f"{year:04d}-{month:02d}-10", rng.uniform(-2, 2)))
    series = _series(pairs)
    built = build_monthly_index(series)
    manual = standardize(sg_filter(to_monthly_linear(series).values, SGParams()))
    assert np.abs(built.values - manual).max() < 1e-12
    assert built.start == to_monthly_linear(series).start


def test_build_monthly_index_rejects_unknown_method():
    series = _monthly_meetings([1.0, 2.0, 0.5, 1.5])
    with pytest.raises(ParameterError):
        build_monthly_index(series, resample="spline")


def test_transforms_deterministic():
    vals = np.linspace(-1, 1, 18) ** 3
    series = _monthly_meetings(list(vals))
    a = build_monthly_index(series)
    b = build_monthly_index(series)
    assert a.values.tolist() == b.values.tolist()
