"""Frequency-band decomposition and lead-lag distances between two series.

The pipeline: transform a series, zero the harmonics above a cutoff,
reconstruct per band, locate strict local extrema, match each extremum of
x to the nearest same-kind extremum of y, and average the index distances.

Sign convention for a matched pair: dt = t_x - t_y, and positive dt is
reported as "x leads y". Note this is inverted relative to the common
reading (an earlier turning point in x gives negative dt here); both the
signed and the absolute means are emitted so either reading is available.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import AlignmentError, InsufficientDataError, ParameterError

IMAG_TOLERANCE = 1e-9


class SymmetryWarning(UserWarning):
    """Spectrum handed to idft was not conjugate-symmetric."""


@dataclass(frozen=True)
class Spectrum:
    """Complex DFT coefficients X_0..X_{N-1} of a length-N series."""

    coefficients: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "coefficients",
                           np.asarray(self.coefficients, dtype=complex))

    @property
    def n(self) -> int:
        return len(self.coefficients)

    def is_conjugate_symmetric(self, tol: float = IMAG_TOLERANCE) -> bool:
        c = self.coefficients
        scale = max(1.0, float(np.abs(c).max())) if len(c) else 1.0
        return bool(np.abs(c - np.conj(c[-np.arange(self.n) % self.n])).max()
                    <= tol * scale)


@dataclass(frozen=True)
class BandSpec:
    """A named low-pass band keeping harmonics 0..cutoff."""

    label: str
    cutoff: int

    def __post_init__(self):
        if self.cutoff <= 0:
            raise ParameterError(f"band {self.label!r}: cutoff must be positive")


DEFAULT_BANDS = (BandSpec("long", 3), BandSpec("mid", 6), BandSpec("short", 12))


def dft(values: Sequence[float]) -> Spectrum:
    """Forward transform, X_k = sum_t x_t exp(-i 2 pi k t / N)."""
    values = np.asarray(values, dtype=float)
    if len(values) < 2:
        raise InsufficientDataError("transform needs at least 2 samples")
    return Spectrum(np.fft.fft(values))


def idft(spectrum: Spectrum) -> np.ndarray:
    """Inverse transform with 1/N normalization; returns the real part.

    A spectrum that is not conjugate-symmetric cannot come from a real
    series; that case raises SymmetryWarning and still returns the real
    part of the inverse.
    """
    out = np.fft.ifft(spectrum.coefficients)
    scale = max(1.0, float(np.abs(out.real).max()))
    if np.abs(out.imag).max() > IMAG_TOLERANCE * scale:
        warnings.warn("spectrum is not conjugate-symmetric; imaginary part "
                      "discarded", SymmetryWarning, stacklevel=2)
    return out.real


def lowpass(spectrum: Spectrum, cutoff: int) -> Spectrum:
    """Zero every coefficient whose harmonic index min(k, N-k) exceeds cutoff."""
    if cutoff < 0:
        raise ParameterError("cutoff must be nonnegative")
    n = spectrum.n
    k = np.arange(n)
    harmonic = np.minimum(k, n - k)
    kept = spectrum.coefficients.copy()
    kept[harmonic > cutoff] = 0
    return Spectrum(kept)


def band_reconstruct(values: Sequence[float], band: BandSpec) -> np.ndarray:
    """Low-pass reconstruction of the series for one band."""
    values = np.asarray(values, dtype=float)
    if len(values) <= 2 * band.cutoff:
        raise InsufficientDataError(
            f"band {band.label!r} (cutoff {band.cutoff}) needs more than "
            f"{2 * band.cutoff} samples, got {len(values)}"
        )
    return idft(lowpass(dft(values), band.cutoff))


@dataclass(frozen=True)
class ExtremaSet:
    """Strict interior extrema of one series, as time indices."""

    minima: tuple[int, ...]
    maxima: tuple[int, ...]

    def __post_init__(self):
        for name, idx in (("minima", self.minima), ("maxima", self.maxima)):
            if any(b <= a for a, b in zip(idx, idx[1:])):
                raise ParameterError(f"{name} indices not strictly increasing")
        if set(self.minima) & set(self.maxima):
            raise ParameterError("an index cannot be both a minimum and a maximum")

    def of_kind(self, kind: str) -> tuple[int, ...]:
        if kind == "minima":
            return self.minima
        if kind == "maxima":
            return self.maxima
        raise ParameterError(f"unknown extremum kind {kind!r}")


def find_extrema(values: Sequence[float]) -> ExtremaSet:
    """Strict local extrema: x[t] above (below) both neighbors.

    Endpoints never qualify, and plateaus produce no extremum because the
    comparisons are strict.
    """
    values = np.asarray(values, dtype=float)
    if len(values) < 3:
        raise InsufficientDataError("extrema detection needs at least 3 samples")
    left = values[1:-1] - values[:-2]
    right = values[1:-1] - values[2:]
    interior = np.arange(1, len(values) - 1)
    maxima = interior[(left > 0) & (right > 0)]
    minima = interior[(left < 0) & (right < 0)]
    return ExtremaSet(tuple(int(i) for i in minima),
                      tuple(int(i) for i in maxima))


def match_nearest(x_extrema: Sequence[int],
                  y_extrema: Sequence[int]) -> list[tuple[int, int]]:
    """Pair each x-extremum with the nearest y-extremum of the same kind.

    Ties break toward the earlier y index; a y-extremum may be matched by
    several x-extrema. Either side empty yields no pairs.
    """
    if not x_extrema or not y_extrema:
        return []
    pairs = []
    for tx in x_extrema:
        ty = min(y_extrema, key=lambda t: (abs(tx - t), t))
        pairs.append((int(tx), int(ty)))
    return pairs


@dataclass(frozen=True)
class LeadLagCell:
    """Matched-pair statistics for one (band, extremum kind) cell."""

    count: int
    signed_mean: float | None
    abs_mean: float | None
    pairs: tuple[tuple[int, int, int], ...]

    def __post_init__(self):
        if self.count != len(self.pairs):
            raise ParameterError("pair count does not match pair list")
        if self.count and abs(self.signed_mean) > self.abs_mean + 1e-12:
            raise ParameterError("|signed mean| exceeds absolute mean")


def leadlag(pairs: Sequence[tuple[int, int]]) -> LeadLagCell:
    """Distance statistics dt = t_x - t_y over matched pairs."""
    triples = tuple((tx, ty, tx - ty) for tx, ty in pairs)
    if not triples:
        return LeadLagCell(0, None, None, ())
    deltas = np.array([d for _, _, d in triples], dtype=float)
    return LeadLagCell(len(triples), float(deltas.mean()),
                       float(np.abs(deltas).mean()), triples)


@dataclass(frozen=True)
class LeadLagSummary:
    """Cells for every band x extremum kind, Table-style."""

    bands: tuple[BandSpec, ...]
    cells: dict = field(default_factory=dict)

    def cell(self, band_label: str, kind: str) -> LeadLagCell:
        return self.cells[(band_label, kind)]


KINDS = ("minima", "maxima")


def band_series(values: Sequence[float], bands: Sequence[BandSpec],
                disjoint: bool = False) -> dict[str, np.ndarray]:
    """Per-band reconstructions; disjoint subtracts the next-lower band.

    Nested mode gives the low-pass reconstructions themselves. Disjoint
    mode keeps the lowest band as-is and reports differences between
    consecutive cutoffs for the rest, so each series holds only its own
    harmonic range.
    """
    ordered = sorted(bands, key=lambda b: b.cutoff)
    recon = {b.label: band_reconstruct(values, b) for b in ordered}
    if not disjoint:
        return recon
    out = {ordered[0].label: recon[ordered[0].label]}
    for lower, upper in zip(ordered, ordered[1:]):
        out[upper.label] = recon[upper.label] - recon[lower.label]
    return out


def leadlag_report(x: Sequence[float], y: Sequence[float],
                   bands: Sequence[BandSpec] = DEFAULT_BANDS,
                   disjoint: bool = False) -> LeadLagSummary:
    """Full decomposition-extrema-matching pipeline for two aligned series."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if len(x) != len(y):
        raise AlignmentError(f"series lengths differ: {len(x)} vs {len(y)}")
    x_bands = band_series(x, bands, disjoint)
    y_bands = band_series(y, bands, disjoint)
    cells = {}
    for band in bands:
        x_ext = find_extrema(x_bands[band.label])
        y_ext = find_extrema(y_bands[band.label])
        for kind in KINDS:
            pairs = match_nearest(x_ext.of_kind(kind), y_ext.of_kind(kind))
            cells[(band.label, kind)] = leadlag(pairs)
    return LeadLagSummary(tuple(bands), cells)
