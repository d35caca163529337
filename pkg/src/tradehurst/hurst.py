"""Logscale diagrams and the weighted minimum-variance slope estimator."""

from __future__ import annotations

import csv
import math
import warnings
from dataclasses import dataclass, field
from datetime import date

import numpy as np

from .special import digamma, hurwitz_zeta2
from .wavelet import SeriesTooShort, WaveletDecomposition, haar_dwt, max_octave_for, moment

LN2 = math.log(2.0)
MIN_FIT_POINTS = 3
HIGH_FREQ_RANGE = (1, 10)


class EstimationError(ValueError):
    pass


class EmptyRange(EstimationError):
    pass


class AllOctavesDegenerate(EstimationError):
    pass


class TooFewOctaves(EstimationError):
    pass


class BoundaryWarning(UserWarning):
    pass


def octave_variance(n_j) -> float:
    """Variance of log2 S_2(j) for n_j coefficients: zeta(2, n_j/2) / ln(2)**2."""
    if n_j < 1:
        raise ValueError(f"octave variance needs n_j >= 1, got {n_j}")
    return hurwitz_zeta2(n_j / 2.0) / (LN2 * LN2)


def log_moment_bias(n_j) -> float:
    """E[log2 S_2(j)] - log2 E[S_2(j)] for n_j independent Gaussian coefficients."""
    v = n_j / 2.0
    return digamma(v) / LN2 - math.log2(v)


@dataclass
class LogscaleDiagram:
    octaves: np.ndarray
    y: np.ndarray  # log2 S_2(j); -inf where the moment vanished
    counts: np.ndarray
    sigma2: np.ndarray
    included: np.ndarray
    bias_corrected: bool = False
    symbol: str = ""
    session_date: date | None = None

    @property
    def excluded_octaves(self) -> list:
        return [int(j) for j, ok in zip(self.octaves, self.included) if not ok]

    def fit_points(self):
        m = self.included
        return self.octaves[m].astype(np.float64), self.y[m], self.sigma2[m]

    def to_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["octave", "y_j", "n_j", "sigma_sq", "included_flag"])
            for j, y, n, s, ok in zip(self.octaves, self.y, self.counts, self.sigma2, self.included):
                w.writerow([int(j), repr(float(y)), int(n), repr(float(s)), int(bool(ok))])


def build_logscale(decomp: WaveletDecomposition, j1: int = 1, j2: int = 10, *,
                   bias_correction: bool = False, symbol: str = "", session_date=None) -> LogscaleDiagram:
    """Logscale diagram over octaves j1..j2.

    With ``bias_correction`` (off by default) each y_j has the expected
    log-of-mean bias for Gaussian coefficients subtracted.
    """
    if j1 < 1 or j2 < j1 or j2 > decomp.max_octave:
        raise EmptyRange(f"octave range [{j1}, {j2}] invalid for a {decomp.max_octave}-octave decomposition")
    counts = decomp.counts[j1 - 1 : j2]
    if counts[-1] < 1:
        raise EmptyRange(f"octave {j2} has no coefficients")
    s2 = moment(decomp, 2).values[j1 - 1 : j2]
    included = s2 > 0
    if not included.any():
        raise AllOctavesDegenerate(f"every octave in [{j1}, {j2}] has zero energy")
    with np.errstate(divide="ignore"):
        y = np.log2(s2)
    if bias_correction:
        y = y - np.array([log_moment_bias(n) for n in counts])
    sigma2 = np.array([octave_variance(n) for n in counts])
    return LogscaleDiagram(np.arange(j1, j2 + 1), y, counts.copy(), sigma2, included,
                           bias_correction, symbol, session_date)


@dataclass
class SlopeEstimate:
    alpha_hat: float
    variance: float
    intercept: float
    octave_range: tuple
    octaves: np.ndarray
    weights: np.ndarray

    @property
    def std_error(self) -> float:
        return math.sqrt(self.variance)


def _weighted_fit(j, y, sigma2, octave_range):
    # w_j = (S j - S_j) / sigma_j^2 / (S S_jj - S_j^2), written about the
    # weighted mean octave S_j/S so the sums do not cancel
    inv = 1.0 / sigma2
    S = inv.sum()
    ref = j[np.argmax(inv)]  # integer offsets from the heaviest octave are exact
    shift = ((j - ref) * inv).sum() / S
    dj = (j - ref) - shift
    w = dj * inv / (dj * dj * inv).sum()
    alpha = float(np.dot(w, y))
    intercept = float((y * inv).sum() / S - alpha * (ref + shift))
    var = float(np.dot(sigma2, w * w))
    return SlopeEstimate(alpha, var, intercept, octave_range, j.astype(np.int64), w)


def weighted_slope(diagram: LogscaleDiagram, min_points: int = MIN_FIT_POINTS) -> SlopeEstimate:
    j, y, sigma2 = diagram.fit_points()
    if len(j) < max(min_points, 2):
        raise TooFewOctaves(f"{len(j)} usable octaves, need {max(min_points, 2)}")
    rng = (int(diagram.octaves[0]), int(diagram.octaves[-1]))
    return _weighted_fit(j, y, sigma2, rng)


def alpha_to_hurst(alpha: float) -> float:
    return (alpha + 1.0) / 2.0


@dataclass
class HurstEstimate:
    H: float
    ci_low: float
    ci_high: float
    slope: SlopeEstimate
    symbol: str = ""
    session_date: date | None = None
    flags: list = field(default_factory=list)

    @property
    def half_width(self) -> float:
        return (self.ci_high - self.ci_low) / 2.0

    @property
    def in_unit_interval(self) -> bool:
        return 0.0 < self.H < 1.0

    def as_row(self) -> dict:
        j1, j2 = self.slope.octave_range
        return {
            "symbol": self.symbol,
            "date": self.session_date.isoformat() if self.session_date else "",
            "H": self.H,
            "ci_low": self.ci_low,
            "ci_high": self.ci_high,
            "alpha_hat": self.slope.alpha_hat,
            "var_alpha": self.slope.variance,
            "j1": j1,
            "j2": j2,
        }


def hurst_from_slope(slope: SlopeEstimate, symbol: str = "", session_date=None, flags=()) -> HurstEstimate:
    # 95% interval: two standard deviations on alpha, halved by H = (alpha + 1)/2
    H = alpha_to_hurst(slope.alpha_hat)
    half = slope.std_error
    flags = list(flags)
    if not 0.0 < H < 1.0:
        flags.append("H_outside_unit_interval")
    return HurstEstimate(H, H - half, H + half, slope, symbol, session_date, flags)


def estimate_session(series, j1: int = 1, j2: int = 10, max_octave: int = 14, *,
                     bias_correction: bool = False) -> HurstEstimate:
    """Daily pipeline: Haar DWT, second moments, logscale diagram, weighted fit."""
    values = getattr(series, "values", series)
    n = len(values)
    if (n >> j2) < 1:
        raise SeriesTooShort(j2, n)
    J = max(j2, min(max_octave, max_octave_for(n)))
    decomp = haar_dwt(values, J, getattr(series, "delta_t", 1.0))
    symbol = getattr(series, "symbol", "")
    sdate = getattr(series, "session_date", None)
    diagram = build_logscale(decomp, j1, j2, bias_correction=bias_correction, symbol=symbol, session_date=sdate)
    slope = weighted_slope(diagram)
    flags = [f"octave_{j}_zero_moment" for j in diagram.excluded_octaves]
    if bias_correction:
        flags.append("bias_corrected")
    return hurst_from_slope(slope, symbol, sdate, flags)


@dataclass
class BiscalingReport:
    high: SlopeEstimate
    low: SlopeEstimate | None
    low_points: int
    low_indicative: bool

    def compatible(self, n_sigma: float = 3.0) -> bool:
        if self.low is None:
            return True
        diff = abs(self.high.alpha_hat - self.low.alpha_hat)
        return diff <= n_sigma * math.sqrt(self.high.variance + self.low.variance)


def biscaling_report(decomp: WaveletDecomposition, split: int = HIGH_FREQ_RANGE[1]) -> BiscalingReport:
    """Separate fits over [1, split] and [split+1, max_octave].

    The coarse region is marked indicative when it has fewer than three
    points; with a single point no slope is fitted.
    """
    high = weighted_slope(build_logscale(decomp, 1, split))
    if decomp.max_octave <= split:
        return BiscalingReport(high, None, 0, True)
    low_diag = build_logscale(decomp, split + 1, decomp.max_octave)
    npts = int(low_diag.included.sum())
    low = weighted_slope(low_diag, min_points=2) if npts >= 2 else None
    return BiscalingReport(high, low, npts, npts < MIN_FIT_POINTS)


def tail_alpha_to_hurst(tail_alpha: float) -> float:
    """H = (3 - tail_alpha)/2 for a tail law P[v >= V] ~ V**-tail_alpha.

    This tail exponent is unrelated to the logscale slope ``alpha_hat``.
    """
    if not 0.0 < tail_alpha <= 2.0:
        raise ValueError(f"tail_alpha must lie in (0, 2), got {tail_alpha}")
    if tail_alpha == 2.0:
        warnings.warn("tail_alpha = 2 sits on the boundary of the heavy-tail range", BoundaryWarning, stacklevel=2)
    return (3.0 - tail_alpha) / 2.0
