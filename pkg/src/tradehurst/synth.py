"""Synthetic series with known self-similarity.

Random streams come from numpy's Philox4x32-10 counter-based generator,
keyed by ``numpy.random.SeedSequence(seed)``; independent components of a
superposition use ``SeedSequence(seed).spawn(2)``.  A stream is therefore
fixed by the pair (Philox, seed).
"""

from __future__ import annotations

from dataclasses import asdict, dataclass
from decimal import Decimal

import numpy as np

from . import _kernels
from .ingest import SESSION_OPEN, TradeRecord, TradeTape

KINDS = ("white", "fgn", "superposition")


class EmbeddingError(ValueError):
    pass


@dataclass(frozen=True)
class SynthSpec:
    kind: str = "fgn"
    target_H: float = 0.5
    length: int = 23400
    seed: int = 0
    mix_weight: float = 1.0

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"kind: must be one of {KINDS}, got {self.kind!r}")
        if not 0.0 < self.target_H < 1.0:
            raise ValueError(f"target_H: must lie in (0, 1), got {self.target_H}")
        if int(self.length) != self.length or self.length < 2:
            raise ValueError(f"length: must be an integer >= 2, got {self.length}")
        if not 0.0 <= self.mix_weight <= 1.0:
            raise ValueError(f"mix_weight: must lie in [0, 1], got {self.mix_weight}")
        if not 0 <= int(self.seed) < 2 ** 64:
            raise ValueError(f"seed: must fit in 64 unsigned bits, got {self.seed}")

    def as_dict(self) -> dict:
        return asdict(self)


def make_rng(seed) -> np.random.Generator:
    seq = seed if isinstance(seed, np.random.SeedSequence) else np.random.SeedSequence(int(seed))
    return np.random.Generator(np.random.Philox(seq))


def fgn_autocovariance(H: float, k) -> np.ndarray:
    k = np.abs(np.asarray(k, dtype=np.float64))
    h2 = 2.0 * H
    return 0.5 * (np.abs(k + 1) ** h2 - 2.0 * k ** h2 + np.abs(k - 1) ** h2)


def _circulant_eigenvalues(H, n):
    gamma = fgn_autocovariance(H, np.arange(n + 1))
    row = np.concatenate([gamma, gamma[-2:0:-1]])  # length 2n
    return np.fft.rfft(row).real, row.shape[0]


def fgn(H: float, n: int, rng: np.random.Generator, tol: float = 1e-10) -> np.ndarray:
    """Exact-covariance fractional Gaussian noise (Davies-Harte circulant embedding).

    Unit variance, autocovariance 0.5(|k+1|^2H - 2|k|^2H + |k-1|^2H).
    """
    eig, m = _circulant_eigenvalues(H, n)
    if eig.min() < -tol * eig.max():
        raise EmbeddingError(f"circulant embedding not non-negative for H={H}, N={n} (min eigenvalue {eig.min():.3g})")
    eig = np.clip(eig, 0.0, None)
    # Hermitian-symmetric complex Gaussian vector with E|W_k|^2 = eig_k * m
    half = m // 2
    w = np.empty(half + 1, dtype=np.complex128)
    z = rng.standard_normal(m)
    w[0] = np.sqrt(eig[0] * m) * z[0]
    w[half] = np.sqrt(eig[half] * m) * z[1]
    a = z[2 : half + 1]
    b = z[half + 1 :]
    w[1:half] = np.sqrt(eig[1:half] * m / 2.0) * (a + 1j * b)
    return np.fft.irfft(w, n=m)[:n]


def fgn_generate(spec: SynthSpec) -> np.ndarray:
    if spec.kind == "superposition":
        raise ValueError("kind: use superpose() for superposition specs")
    rng = make_rng(spec.seed)
    if spec.kind == "white":
        return rng.standard_normal(spec.length)
    return fgn(spec.target_H, spec.length, rng)


def superpose(spec: SynthSpec) -> np.ndarray:
    """sqrt(1 - w) * white + sqrt(w) * fGn(target_H), independent components."""
    if spec.kind != "superposition":
        raise ValueError("kind: superpose() needs a superposition spec")
    white_seq, fgn_seq = np.random.SeedSequence(int(spec.seed)).spawn(2)
    w = spec.mix_weight
    white = make_rng(white_seq).standard_normal(spec.length)
    frac = fgn(spec.target_H, spec.length, make_rng(fgn_seq))
    return np.sqrt(1.0 - w) * white + np.sqrt(w) * frac


def generate(spec: SynthSpec) -> np.ndarray:
    return superpose(spec) if spec.kind == "superposition" else fgn_generate(spec)


def shuffle(series, seed) -> np.ndarray:
    """Fisher-Yates permutation, deterministic per seed."""
    x = np.asarray(getattr(series, "values", series), dtype=np.float64)
    n = x.shape[0]
    if n < 2:
        return x.copy()
    rng = make_rng(seed)
    draws = rng.integers(0, np.arange(n, 1, -1))  # draws[s] uniform on [0, n-1-s]
    return _kernels.fisher_yates(x, draws)


def tape_from_values(values, symbol: str = "SYN", session_date=None, *, size: int = 100,
                     base_price: float = 50.0, price_scale: float = 5.0, exchange_tag: str = "N",
                     start: float = SESSION_OPEN) -> TradeTape:
    """One trade per second whose traded value is affine in ``values``.

    Price is ``base_price + price_scale * x`` rounded to cents; it must stay
    positive.
    """
    x = np.asarray(values, dtype=np.float64)
    prices = np.round(base_price + price_scale * x, 2)
    if prices.min() <= 0:
        raise ValueError("synthetic prices must stay positive; raise base_price or lower price_scale")
    recs = [TradeRecord(start + i, Decimal(f"{p:.2f}"), size, "@", 0, exchange_tag) for i, p in enumerate(prices)]
    tape = TradeTape(symbol, session_date, recs)
    tape.parsed_count = len(recs)
    return tape


def merge_tapes(*tapes: TradeTape) -> TradeTape:
    first = tapes[0]
    recs = sorted((r for t in tapes for r in t.records), key=lambda r: r.timestamp)
    tape = TradeTape(first.symbol, first.session_date, recs)
    tape.parsed_count = len(recs)
    return tape
