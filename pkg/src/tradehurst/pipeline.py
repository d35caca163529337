"""Per-session work units used by the CLI.

Each function takes a file path and a validated RunConfig and returns a plain
dict, so sessions can be farmed out to worker processes.
"""

from __future__ import annotations

import re
import zlib
from datetime import date
from pathlib import Path

import numpy as np

from .hurst import EstimationError, estimate_session
from .ingest import load_session
from .series import UNASSIGNED, bucketize, mean_trade_size, partition_by_size, size_bucket_proportions
from .synth import shuffle
from .wavelet import SeriesTooShort

_NAME_RE = re.compile(r"^(?P<symbol>[A-Za-z][A-Za-z0-9.]*)[_-](?P<date>\d{4}-?\d{2}-?\d{2})")


def session_identity(path) -> tuple:
    """``SYMBOL_YYYYMMDD.csv`` or ``SYMBOL_YYYY-MM-DD.csv`` -> (symbol, date)."""
    stem = Path(path).stem
    m = _NAME_RE.match(stem)
    if not m:
        return stem, None
    digits = m.group("date").replace("-", "")
    return m.group("symbol").upper(), date(int(digits[:4]), int(digits[4:6]), int(digits[6:8]))


def _load(path, cfg):
    symbol, sdate = session_identity(path)
    return load_session(path, symbol, sdate, cfg.filter_policy(), cfg.tape_schema())


def _estimate(values, cfg, symbol, sdate):
    est = estimate_session(values, cfg.j1, cfg.j2, cfg.max_octave, bias_correction=cfg.bias_correction)
    est.symbol, est.session_date = symbol, sdate
    return est


def ingest_file(path, cfg) -> dict:
    tape = _load(path, cfg)
    series = bucketize(tape, cfg.delta_t, cfg.filter_policy())
    return {
        "symbol": tape.symbol,
        "date": tape.session_date,
        "parsed": tape.parsed_count,
        "kept": len(tape),
        "drops": dict(sorted(tape.drop_log.items())),
        "mean_trade_size": mean_trade_size(tape),
        "series": series,
    }


def analyze_file(path, cfg) -> dict:
    tape = _load(path, cfg)
    series = bucketize(tape, cfg.delta_t, cfg.filter_policy())
    est = _estimate(series, cfg, tape.symbol, tape.session_date)
    return {"symbol": tape.symbol, "date": tape.session_date, "estimate": est,
            "kept": len(tape), "drops": dict(sorted(tape.drop_log.items()))}


def buckets_file(path, cfg) -> dict:
    tape = _load(path, cfg)
    policy = cfg.filter_policy()
    bcfg = cfg.bucket_config()
    trim = tape.trim_tail_seconds(policy)
    rows = []
    for label, part in partition_by_size(tape, bcfg).items():
        if label == UNASSIGNED:
            continue
        row = {"label": label, "trade_count": len(part), "estimate": None, "status": "ok"}
        if not part.records:
            row["status"] = "skipped: no trades"
        else:
            series = bucketize(part, cfg.delta_t, policy, trim=trim)
            try:
                row["estimate"] = _estimate(series, cfg, tape.symbol, tape.session_date)
            except (EstimationError, SeriesTooShort) as err:
                row["status"] = f"skipped: {err}"
        rows.append(row)
    return {"symbol": tape.symbol, "date": tape.session_date, "buckets": rows,
            "proportions": size_bucket_proportions(tape, bcfg)}


def shuffle_seed(cfg, path) -> np.random.SeedSequence:
    # keyed by file name so results do not depend on input order
    return np.random.SeedSequence([int(cfg.seed), zlib.crc32(Path(path).name.encode())])


def shuffle_file(path, cfg) -> dict:
    tape = _load(path, cfg)
    series = bucketize(tape, cfg.delta_t, cfg.filter_policy())
    original = _estimate(series, cfg, tape.symbol, tape.session_date)
    shuffled = _estimate(shuffle(series.values, shuffle_seed(cfg, path)), cfg, tape.symbol, tape.session_date)
    return {"symbol": tape.symbol, "date": tape.session_date, "original": original, "shuffled": shuffled}
