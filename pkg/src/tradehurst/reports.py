"""Deterministic CSV/JSON writers for CLI outputs."""

from __future__ import annotations

import csv
import json
import math
from datetime import date
from pathlib import Path

ESTIMATE_COLUMNS = ["symbol", "date", "H", "ci_low", "ci_high", "alpha_hat", "var_alpha", "j1", "j2"]
MONTHLY_COLUMNS = ["symbol", "month", "mean_H", "ci_low", "ci_high", "day_count"]
SERIES_COLUMNS = ["bucket_index", "t_start_seconds", "traded_value"]


def _cell(v):
    if isinstance(v, float):
        return "nan" if math.isnan(v) else repr(v)
    if isinstance(v, date):
        return v.isoformat()
    if v is None:
        return ""
    return str(v)


def _json_value(v):
    if isinstance(v, float) and not math.isfinite(v):
        return None
    if isinstance(v, date):
        return v.isoformat()
    return v


def write_table(rows, columns, path, fmt="csv") -> Path:
    """Write ``rows`` (dicts) to ``path`` with the extension set by ``fmt``."""
    path = Path(path).with_suffix("." + fmt)
    path.parent.mkdir(parents=True, exist_ok=True)
    if fmt == "json":
        payload = [{c: _json_value(r.get(c)) for c in columns} for r in rows]
        path.write_text(json.dumps(payload, indent=2) + "\n", encoding="utf-8")
    else:
        with path.open("w", newline="", encoding="utf-8") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(columns)
            for r in rows:
                w.writerow([_cell(r.get(c)) for c in columns])
    return path


def write_series(series, path) -> Path:
    starts = series.bucket_starts()
    rows = ({"bucket_index": i, "t_start_seconds": float(t), "traded_value": float(v)}
            for i, (t, v) in enumerate(zip(starts, series.values)))
    return write_table(rows, SERIES_COLUMNS, path, "csv")


def write_column(values, path, header="value") -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", encoding="utf-8") as fh:
        fh.write(header + "\n")
        for v in values:
            fh.write(repr(float(v)) + "\n")
    return path


def read_column(path) -> list:
    with Path(path).open(encoding="utf-8") as fh:
        lines = [ln.strip() for ln in fh if ln.strip()]
    try:
        float(lines[0])
    except (IndexError, ValueError):
        lines = lines[1:]
    return [float(v) for v in lines]


def write_json(obj, path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(obj, indent=2, sort_keys=True, default=_json_value) + "\n", encoding="utf-8")
    return path
