import numpy as np
import pytest

from banktone.errors import (
    AlignmentError,
    InsufficientDataError,
    ParameterError,
)
from banktone.spectral import (
    DEFAULT_BANDS,
    BandSpec,
    ExtremaSet,
    SymmetryWarning,
    Spectrum,
    band_reconstruct,
    band_series,
    dft,
    find_extrema,
    idft,
    leadlag,
    leadlag_report,
    lowpass,
    match_nearest,
)


def test_dft_constant_is_dc_only():
    spec = dft(np.full(8, 2.5))
    assert spec.coefficients[0] == pytest.approx(8 * 2.5)
    assert np.abs(spec.coefficients[1:]).max() < 1e-10


def test_dft_pure_harmonic_amplitude():
    t = np.arange(24)
    spec = dft(np.cos(2 * np.pi * 3 * t / 24))
    mags = np.abs(spec.coefficients)
    assert mags[3] == pytest.approx(12, abs=1e-8)
    assert mags[21] == pytest.approx(12, abs=1e-8)
    others = np.delete(mags, [3, 21])
    assert others.max() < 1e-8


def test_dft_linearity():
    rng = np.random.default_rng(123)
    x = rng.normal(size=32)
    y = rng.normal(size=32)
    lhs = dft(3.0 * x + y).coefficients
    rhs = 3.0 * dft(x).coefficients + dft(y).coefficients
    assert np.abs(lhs - rhs).max() < 1e-9


def test_dft_needs_two_samples():
    with pytest.raises(InsufficientDataError):
        dft([1.0])


def test_idft_round_trip_up_to_4096():
    rng = np.random.default_rng(2026)
    for n in (2, 3, 17, 256, 4096):
        x = rng.normal(size=n)
        back = idft(dft(x))
        assert np.abs(back - x).max() < 1e-9 * max(1.0, np.abs(x).max())


def test_idft_dc_only_spectrum():
    spec = Spectrum(np.array([6 * 1.75, 0, 0, 0, 0, 0], dtype=complex))
    assert np.allclose(idft(spec), 1.75, atol=1e-12)


def test_idft_warns_on_asymmetric_spectrum():
    coeffs = np.zeros(8, dtype=complex)
    coeffs[1] = 1.0 + 0.5j  # partner bin left at zero
    with pytest.warns(SymmetryWarning):
        out = idft(Spectrum(coeffs))
    assert out.dtype == float


def test_conjugate_symmetry_detector():
    rng = np.random.default_rng(8)
    real_input = dft(rng.normal(size=20))
    assert real_input.is_conjugate_symmetric()
    broken = real_input.coefficients.copy()
    broken[2] += 1.0j
    assert not Spectrum(broken).is_conjugate_symmetric()


def test_lowpass_noop_at_nyquist_and_beyond():
    rng = np.random.default_rng(9)
    spec = dft(rng.normal(size=16))
    for cutoff in (8, 9, 100):
        out = lowpass(spec, cutoff)
        assert np.array_equal(out.coefficients, spec.coefficients)


def test_lowpass_kills_harmonic_above_cutoff():
    t = np.arange(24)
    spec = lowpass(dft(np.cos(2 * np.pi * 5 * t / 24)), 3)
    assert np.abs(spec.coefficients).max() < 1e-8
    assert np.abs(idft(spec)).max() < 1e-8


def test_lowpass_zero_keeps_only_mean():
    rng = np.random.default_rng(10)
    x = rng.normal(size=30)
    out = idft(lowpass(dft(x), 0))
    assert np.allclose(out, x.mean(), atol=1e-12)


def test_lowpass_idempotent_and_mean_preserving():
    rng = np.random.default_rng(11)
    x = rng.normal(size=40)
    spec = dft(x)
    once = lowpass(spec, 4)
    twice = lowpass(once, 4)
    assert np.array_equal(once.coefficients, twice.coefficients)
    for cutoff in (0, 3, 6, 12):
        recon = idft(lowpass(spec, cutoff))
        assert recon.mean() == pytest.approx(x.mean(), abs=1e-12)


def test_band_nesting_exact():
    rng = np.random.default_rng(12)
    spec = dft(rng.normal(size=60))
    direct = lowpass(spec, 3)
    nested = lowpass(lowpass(spec, 6), 3)
    assert np.array_equal(direct.coefficients, nested.coefficients)


def test_band_reconstruct_superposition():
    t = np.arange(48)
    low = np.cos(2 * np.pi * 2 * t / 48)
    high = 0.4 * np.sin(2 * np.pi * 9 * t / 48)
    x = low + high
    got = band_reconstruct(x, BandSpec("long", 3))
    assert np.abs(got - low).max() < 1e-8
    const = band_reconstruct(np.full(30, 1.5), BandSpec("long", 3))
    assert np.allclose(const, 1.5, atol=1e-12)


def test_band_series_disjoint_splits_harmonic_ranges():
    t = np.arange(48)
    x = (np.cos(2 * np.pi * 2 * t / 48)
         + np.cos(2 * np.pi * 5 * t / 48)
         + np.cos(2 * np.pi * 9 * t / 48))
    nested = band_series(x, DEFAULT_BANDS)
    disjoint = band_series(x, DEFAULT_BANDS, disjoint=True)
    assert np.abs(disjoint["mid"] - (nested["mid"] - nested["long"])).max() < 1e-12
    assert np.abs(disjoint["mid"] - np.cos(2 * np.pi * 5 * t / 48)).max() < 1e-8
    assert np.abs(disjoint["short"] - np.cos(2 * np.pi * 9 * t / 48)).max() < 1e-8


def test_band_reconstruct_length_guard():
    with pytest.raises(InsufficientDataError):
        band_reconstruct(np.zeros(6), BandSpec("long", 3))
    with pytest.raises(ParameterError):
        BandSpec("bad", 0)


def test_find_extrema_basic_shapes():
    assert find_extrema([0, 1, 0]) == ExtremaSet((), (1,))
    assert find_extrema([3, 2, 1, 0]) == ExtremaSet((), ())
    assert find_extrema([0, 1, 1, 0]) == ExtremaSet((), ())
    got = find_extrema([0, -1, 0, 2, 0])
    assert got.minima == (1,) and got.maxima == (3,)
    with pytest.raises(InsufficientDataError):
        find_extrema([1, 2])


def test_find_extrema_endpoints_never_qualify():
    got = find_extrema([5, 1, 4])
    assert got.minima == (1,) and got.maxima == ()


def test_find_extrema_invariant_under_shift_and_positive_scale():
    rng = np.random.default_rng(13)
    for _ in range(50):
        x = rng.normal(size=25)
        base = find_extrema(x)
        assert find_extrema(x + 7.5) == base
        assert find_extrema(3.0 * x) == base


def test_match_nearest_rules():
    assert match_nearest([4, 9], [4, 9]) == [(4, 4), (9, 9)]
    assert match_nearest([5], [3, 9]) == [(5, 3)]
    assert match_nearest([6], [4, 8]) == [(6, 4)]
    assert match_nearest([], [1, 2]) == []
    assert match_nearest([1, 2], []) == []
    # one y-extremum can serve several x-extrema
    assert match_nearest([1, 2, 3], [2]) == [(1, 2), (2, 2), (3, 2)]


def test_leadlag_hand_values():
    cell = leadlag([(5, 3), (10, 9)])
    assert cell.count == 2
    assert cell.signed_mean == pytest.approx(1.5)
    assert cell.abs_mean == pytest.approx(1.5)
    assert cell.pairs == ((5, 3, 2), (10, 9, 1))

    empty = leadlag([])
    assert empty.count == 0
    assert empty.signed_mean is None and empty.abs_mean is None


def test_leadlag_shifted_harmonic_gives_minus_two():
    t = np.arange(48)
    x = np.cos(2 * np.pi * 2 * t / 48)
    y = np.roll(x, 2)  # y_t = x_{t-2}: features appear 2 steps later in y
    for kind in ("minima", "maxima"):
        pairs = match_nearest(find_extrema(x).of_kind(kind),
                              find_extrema(y).of_kind(kind))
        cell = leadlag(pairs)
        assert cell.count > 0
        assert all(d == -2 for _, _, d in cell.pairs)
        assert cell.signed_mean == -2.0
        assert cell.abs_mean == 2.0


def test_leadlag_report_self_is_zero():
    rng = np.random.default_rng(14)
    x = rng.normal(size=60)
    report = leadlag_report(x, x)
    for band in DEFAULT_BANDS:
        for kind in ("minima", "maxima"):
            cell = report.cell(band.label, kind)
            assert cell.count > 0
            assert cell.signed_mean == 0.0
            assert cell.abs_mean == 0.0


def test_leadlag_report_constant_counterpart_has_no_extrema():
    rng = np.random.default_rng(15)
    x = rng.normal(size=60)
    report = leadlag_report(x, np.zeros(60))
    for band in DEFAULT_BANDS:
        for kind in ("minima", "maxima"):
            assert report.cell(band.label, kind).count == 0


def test_leadlag_report_three_month_shift_in_every_cell():
    t = np.arange(60)
    x = np.cos(2 * np.pi * 2 * (t - 8) / 60)
    y = np.roll(x, 3)
    report = leadlag_report(x, y)
    for band in DEFAULT_BANDS:
        for kind in ("minima", "maxima"):
            cell = report.cell(band.label, kind)
            assert cell.count == 2
            assert cell.abs_mean == 3.0
            assert cell.signed_mean == -3.0


def test_leadlag_report_antisymmetric_on_clean_shift():
    t = np.arange(60)
    x = np.cos(2 * np.pi * 2 * (t - 8) / 60)
    y = np.roll(x, 3)
    fwd = leadlag_report(x, y)
    rev = leadlag_report(y, x)
    for band in DEFAULT_BANDS:
        for kind in ("minima", "maxima"):
            assert (fwd.cell(band.label, kind).signed_mean
                    == -rev.cell(band.label, kind).signed_mean)


def test_leadlag_report_length_mismatch():
    with pytest.raises(AlignmentError):
        leadlag_report(np.zeros(30), np.zeros(31))
