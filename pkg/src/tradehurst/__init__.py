"""Wavelet Hurst-exponent estimation for tick-level traded-value series."""

__version__ = "0.1.0"

from ._kernels import BACKEND
from .hurst import (BiscalingReport, HurstEstimate, LogscaleDiagram, SlopeEstimate, alpha_to_hurst,
                    biscaling_report, build_logscale, estimate_session, octave_variance, tail_alpha_to_hurst,
                    weighted_slope)
from .ingest import DropReason, FilterPolicy, TapeSchema, TradeRecord, TradeTape, filter_trade, load_session, \
    parse_trade_line
from .series import SizeBucketConfig, ValueSeries, bucketize, monthly_summary, partition_by_size, \
    size_bucket_proportions, traded_value
from .synth import SynthSpec, fgn_generate, generate, shuffle, superpose
from .wavelet import SeriesTooShort, WaveletDecomposition, haar_dwt, moment

__all__ = [
    "BACKEND", "BiscalingReport", "DropReason", "FilterPolicy", "HurstEstimate", "LogscaleDiagram",
    "SeriesTooShort", "SizeBucketConfig", "SlopeEstimate", "SynthSpec", "TapeSchema", "TradeRecord",
    "TradeTape", "ValueSeries", "WaveletDecomposition", "alpha_to_hurst", "biscaling_report", "bucketize",
    "build_logscale", "estimate_session", "fgn_generate", "filter_trade", "generate", "haar_dwt",
    "load_session", "moment", "monthly_summary", "octave_variance", "parse_trade_line", "partition_by_size",
    "shuffle", "size_bucket_proportions", "superpose", "tail_alpha_to_hurst", "traded_value", "weighted_slope",
]
