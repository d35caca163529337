"""Traded-value series, size partitions and monthly roll-ups."""

from __future__ import annotations

import math
from collections import OrderedDict, defaultdict
from dataclasses import dataclass, field
from datetime import date
from decimal import Decimal

import numpy as np

from . import _kernels
from .ingest import FilterPolicy, TradeRecord, TradeTape

UNASSIGNED = "unassigned"


@dataclass
class ValueSeries:
    symbol: str
    session_date: date | None
    delta_t: float
    origin: float
    values: np.ndarray
    covered_trades: int = 0

    def __len__(self):
        return len(self.values)

    def bucket_starts(self) -> np.ndarray:
        return self.origin + self.delta_t * np.arange(len(self.values))


def traded_value(rec: TradeRecord) -> Decimal:
    """Price times shares, exact in decimal."""
    return rec.price * rec.size


def series_length(policy: FilterPolicy, delta_t: float, trim: float = 0) -> int:
    return int(math.floor((policy.session_end - policy.session_start - trim) / delta_t + 1e-9))


def bucketize(tape: TradeTape, delta_t: float = 1.0, policy: FilterPolicy = FilterPolicy(),
              trim: float | None = None) -> ValueSeries:
    """Sum traded value into half-open buckets ``[origin + b*dt, origin + (b+1)*dt)``.

    ``trim`` defaults to the tape's venue trim (30 s for NASDAQ-style tags).
    """
    if delta_t <= 0:
        raise ValueError("delta_t must be positive")
    if trim is None:
        trim = tape.trim_tail_seconds(policy)
    n = series_length(policy, delta_t, trim)
    times = np.fromiter((r.timestamp for r in tape.records), dtype=np.float64, count=len(tape.records))
    units, scale = _value_units(tape.records)
    values, covered = _kernels.bucket_sum(times, units, float(policy.session_start), float(delta_t), n)
    if scale != 1:
        values = values / scale
    return ValueSeries(tape.symbol, tape.session_date, float(delta_t), float(policy.session_start), values, covered)


_EXACT_LIMIT = 2.0 ** 53


def _value_units(records):
    """Traded values as integer multiples of the finest price tick on the tape.

    Integer-valued float64 sums below 2**53 are exact, so bucket totals do
    not depend on the order of trades.  Falls back to plain floats otherwise.
    """
    if not records:
        return np.zeros(0), 1
    digits = max(0, max(-r.price.as_tuple().exponent for r in records))
    if digits <= 8:
        scale = 10 ** digits
        units = np.array([int(traded_value(r) * scale) for r in records], dtype=np.float64)
        if units.sum() < _EXACT_LIMIT:
            return units, scale
    return np.array([float(traded_value(r)) for r in records], dtype=np.float64), 1


def block_sum(series: ValueSeries, factor: int) -> ValueSeries:
    """Coarsen by an integer factor; a partial final block is dropped."""
    m = len(series.values) // factor
    coarse = series.values[: m * factor].reshape(m, factor).sum(axis=1)
    return ValueSeries(series.symbol, series.session_date, series.delta_t * factor, series.origin, coarse)


@dataclass(frozen=True)
class SizeBucket:
    label: str
    min_size: int
    max_size: int | None = None  # None means open-ended

    def contains(self, size: int) -> bool:
        return size >= self.min_size and (self.max_size is None or size <= self.max_size)


@dataclass(frozen=True)
class SizeBucketConfig:
    buckets: tuple = (
        SizeBucket("<250", 1, 249),
        SizeBucket("250-500", 250, 500),
        SizeBucket("750-1000", 750, 1000),
        SizeBucket("1500+", 1500, None),
    )

    def __post_init__(self):
        labels = [b.label for b in self.buckets]
        if len(set(labels)) != len(labels) or UNASSIGNED in labels:
            raise ValueError("bucket labels must be unique and not 'unassigned'")
        for b in self.buckets:
            if b.max_size is not None and b.max_size < b.min_size:
                raise ValueError(f"bucket {b.label!r}: max_size < min_size")
        ordered = sorted(self.buckets, key=lambda b: b.min_size)
        for lo, hi in zip(ordered, ordered[1:]):
            if lo.max_size is None or hi.min_size <= lo.max_size:
                raise ValueError(f"size buckets {lo.label!r} and {hi.label!r} overlap")

    @property
    def labels(self):
        return [b.label for b in self.buckets]

    def assign(self, size: int) -> str:
        for b in self.buckets:
            if b.contains(size):
                return b.label
        return UNASSIGNED

    @classmethod
    def parse(cls, text: str):
        """Parse ``"<250:1-249;1500+:1500-"`` style text."""
        buckets = []
        for item in filter(None, (s.strip() for s in text.split(";"))):
            label, _, rng = item.rpartition(":")
            lo, _, hi = rng.partition("-")
            buckets.append(SizeBucket(label.strip(), int(lo), int(hi) if hi.strip() else None))
        return cls(tuple(buckets))

    def to_text(self) -> str:
        return ";".join(f"{b.label}:{b.min_size}-{'' if b.max_size is None else b.max_size}" for b in self.buckets)


def partition_by_size(tape: TradeTape, config: SizeBucketConfig = SizeBucketConfig()) -> OrderedDict:
    """Split a tape into one tape per size label; non-matching trades go under ``"unassigned"``."""
    parts = OrderedDict((label, TradeTape(tape.symbol, tape.session_date)) for label in config.labels)
    parts[UNASSIGNED] = TradeTape(tape.symbol, tape.session_date)
    for rec in tape.records:
        parts[config.assign(rec.size)].records.append(rec)
    for p in parts.values():
        p.parsed_count = len(p.records)
    return parts


def size_bucket_proportions(tape: TradeTape, config: SizeBucketConfig = SizeBucketConfig()) -> OrderedDict:
    counts = OrderedDict((label, 0) for label in config.labels)
    counts[UNASSIGNED] = 0
    for rec in tape.records:
        counts[config.assign(rec.size)] += 1
    total = len(tape.records)
    return OrderedDict((k, (v / total if total else 0.0)) for k, v in counts.items())


def mean_trade_size(tape: TradeTape) -> float:
    """Average shares per trade (trade-count mean)."""
    if not tape.records:
        return float("nan")
    return sum(r.size for r in tape.records) / len(tape.records)


@dataclass
class MonthlySummary:
    month: str  # YYYY-MM
    mean_H: float
    ci_low: float
    ci_high: float
    day_count: int
    daily: list = field(default_factory=list)


def monthly_summary(daily, ci_mode: str = "percentile") -> list:
    """Roll (date, H) pairs up into calendar months.

    ``ci_mode="percentile"`` reports the 2.5/97.5 empirical percentiles of the
    month's daily values; ``"gaussian"`` reports mean +/- 2 sample SD.
    """
    if ci_mode not in ("percentile", "gaussian"):
        raise ValueError(f"unknown ci_mode {ci_mode!r}")
    by_month = defaultdict(list)
    for d, h in daily:
        if not math.isfinite(h):
            raise ValueError(f"non-finite H on {d}")
        by_month[f"{d.year:04d}-{d.month:02d}"].append((d, float(h)))
    out = []
    for month in sorted(by_month):
        rows = sorted(by_month[month], key=lambda r: r[0])
        hs = np.array([h for _, h in rows])
        mean = float(hs.mean())
        if ci_mode == "percentile":
            lo, hi = (float(v) for v in np.percentile(hs, [2.5, 97.5]))
        else:
            sd = float(hs.std(ddof=1)) if len(hs) > 1 else 0.0
            lo, hi = mean - 2 * sd, mean + 2 * sd
        # percentiles of a very skewed month can miss the mean
        out.append(MonthlySummary(month, mean, min(lo, mean), max(hi, mean), len(hs), rows))
    return out
