"""Orthonormal Haar pyramid and per-octave coefficient moments."""

from __future__ import annotations

import csv
from dataclasses import dataclass

import numpy as np

from . import _kernels


class SeriesTooShort(ValueError):
    def __init__(self, max_octave, length):
        self.max_octave = max_octave
        self.length = length
        super().__init__(
            f"series of length {length} has no detail coefficients at octave {max_octave} "
            f"(needs at least {2 ** max_octave} samples)"
        )


@dataclass
class WaveletDecomposition:
    """Detail coefficients d(j, k) for octaves j = 1..max_octave.

    At each level the approximation path is paired as (even, odd) with
    detail (even - odd)/sqrt(2) and approximation (even + odd)/sqrt(2).  An odd
    trailing sample is set aside in ``tails`` rather than paired, so
    ``n_j = floor(N / 2**j)`` and the energy identity reads

        sum d**2 + sum approx**2 + sum tails**2 == sum x**2.
    """

    details_flat: np.ndarray
    offsets: np.ndarray
    approx: np.ndarray
    tails: np.ndarray
    has_tail: np.ndarray
    length: int
    sample_interval: float = 1.0
    wavelet_id: str = "haar"

    @property
    def max_octave(self) -> int:
        return len(self.offsets) - 1

    @property
    def counts(self) -> np.ndarray:
        return np.diff(self.offsets)

    def details(self, j: int) -> np.ndarray:
        if not 1 <= j <= self.max_octave:
            raise IndexError(f"octave {j} outside 1..{self.max_octave}")
        return self.details_flat[self.offsets[j - 1] : self.offsets[j]]

    def energy(self) -> float:
        return float(
            np.dot(self.details_flat, self.details_flat)
            + np.dot(self.approx, self.approx)
            + np.dot(self.tails, self.tails)
        )

    def scaled(self, factors) -> "WaveletDecomposition":
        """Copy with octave j's details multiplied by ``factors[j-1]``."""
        flat = self.details_flat.copy()
        for j, f in enumerate(factors, start=1):
            flat[self.offsets[j - 1] : self.offsets[j]] *= f
        return WaveletDecomposition(flat, self.offsets, self.approx, self.tails, self.has_tail,
                                    self.length, self.sample_interval, self.wavelet_id)

    def to_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["octave", "k", "coefficient"])
            for j in range(1, self.max_octave + 1):
                for k, d in enumerate(self.details(j)):
                    w.writerow([j, k, repr(float(d))])


def max_octave_for(length: int) -> int:
    return int(length).bit_length() - 1 if length > 0 else 0


def haar_dwt(series, max_octave: int = 14, sample_interval: float = 1.0) -> WaveletDecomposition:
    values = getattr(series, "values", series)
    x = np.asarray(values, dtype=np.float64)
    if x.ndim != 1:
        raise ValueError("haar_dwt expects a 1-D series")
    if max_octave < 1:
        raise ValueError("max_octave must be >= 1")
    if (x.shape[0] >> max_octave) < 1:
        raise SeriesTooShort(max_octave, x.shape[0])
    details, offsets, approx, tails, has_tail = _kernels.haar_pyramid(x, max_octave)
    return WaveletDecomposition(details, offsets, approx, tails, has_tail, x.shape[0], float(sample_interval))


@dataclass
class MomentTable:
    order: float
    octaves: np.ndarray
    values: np.ndarray  # S_n(j)
    counts: np.ndarray  # n_j


def moment(decomp: WaveletDecomposition, order: float = 2) -> MomentTable:
    """S_n(j) = mean_k |d(j, k)|**n for every octave."""
    if order < 1:
        raise ValueError("moment order must be >= 1")
    vals = np.empty(decomp.max_octave)
    for j in range(1, decomp.max_octave + 1):
        d = np.abs(decomp.details(j))
        vals[j - 1] = np.mean(d * d) if order == 2 else np.mean(d ** order)
    return MomentTable(float(order), np.arange(1, decomp.max_octave + 1), vals, decomp.counts.copy())
