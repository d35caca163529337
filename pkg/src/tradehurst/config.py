"""Run configuration: flat ``key = value`` files plus command-line overrides."""

from __future__ import annotations

import glob
import hashlib
import json
from dataclasses import dataclass, field, fields, replace
from pathlib import Path

from .ingest import (ALLOWED_CORRECTIONS, EXCLUDED_CONDITIONS, NASDAQ_TAGS, NASDAQ_TAIL_TRIM, SESSION_CLOSE,
                     SESSION_OPEN, FilterPolicy, TapeSchema)
from .series import SizeBucketConfig


class ConfigError(ValueError):
    def __init__(self, key, message):
        self.key = key
        super().__init__(f"{key}: {message}")


def _tokens(text):
    return [t.strip() for t in str(text).replace(";", ",").split(",") if t.strip()]


@dataclass
class RunConfig:
    inputs: list = field(default_factory=list)
    schema: str = ",".join(TapeSchema().columns)
    delimiter: str = ","
    excluded_conditions: str = ",".join(sorted(EXCLUDED_CONDITIONS))
    allowed_corrections: str = ",".join(str(c) for c in sorted(ALLOWED_CORRECTIONS))
    session_start: float = SESSION_OPEN
    session_end: float = SESSION_CLOSE
    nasdaq_trim_seconds: int = NASDAQ_TAIL_TRIM
    nasdaq_tags: str = ",".join(sorted(NASDAQ_TAGS))
    delta_t: float = 1.0
    j1: int = 1
    j2: int = 10
    max_octave: int = 14
    size_buckets: str = SizeBucketConfig().to_text()
    monthly_ci: str = "percentile"
    bias_correction: bool = False
    out: str = "out"
    format: str = "csv"
    seed: int = 0
    workers: int = 1

    # --- derived objects -------------------------------------------------

    def filter_policy(self) -> FilterPolicy:
        return FilterPolicy(
            excluded_conditions=frozenset(t.upper() for t in _tokens(self.excluded_conditions)),
            allowed_corrections=frozenset(int(t) for t in _tokens(self.allowed_corrections)),
            session_start=float(self.session_start),
            session_end=float(self.session_end),
            nasdaq_trim_seconds=int(self.nasdaq_trim_seconds),
            nasdaq_tags=frozenset(t.upper() for t in _tokens(self.nasdaq_tags)),
        )

    def tape_schema(self) -> TapeSchema:
        return TapeSchema.from_string(self.schema, self.delimiter)

    def bucket_config(self) -> SizeBucketConfig:
        return SizeBucketConfig.parse(self.size_buckets)

    def input_files(self) -> list:
        files = []
        for pattern in self.inputs:
            p = Path(pattern)
            if p.is_dir():
                files.extend(sorted(str(f) for f in p.iterdir() if f.suffix == ".csv"))
            else:
                matches = sorted(glob.glob(pattern))
                files.extend(matches if matches else [pattern])
        return list(dict.fromkeys(files))

    def digest(self) -> str:
        payload = json.dumps(self.as_dict(), sort_keys=True).encode()
        return hashlib.sha256(payload).hexdigest()

    def as_dict(self) -> dict:
        return {f.name: getattr(self, f.name) for f in fields(self)}

    # --- validation ------------------------------------------------------

    def validate(self) -> "RunConfig":
        """Coerce types and check ranges; raises ConfigError naming the key."""
        kw = {}
        for f in fields(self):
            val = getattr(self, f.name)
            try:
                if f.name == "inputs":
                    val = [val] if isinstance(val, str) else list(val)
                elif f.type == "int":
                    val = int(val)
                elif f.type == "float":
                    val = float(val)
                elif f.type == "bool":
                    val = val if isinstance(val, bool) else str(val).strip().lower() in ("1", "true", "yes", "on")
                else:
                    val = str(val)
            except (TypeError, ValueError):
                raise ConfigError(f.name, f"cannot interpret {val!r} as {f.type}") from None
            kw[f.name] = val
        cfg = replace(self, **kw)
        if cfg.delta_t <= 0:
            raise ConfigError("delta_t", "must be positive")
        if cfg.j1 < 1:
            raise ConfigError("j1", "must be >= 1")
        if cfg.j2 < cfg.j1 + 2:
            raise ConfigError("j2", "range [j1, j2] needs at least three octaves")
        if cfg.max_octave < cfg.j2:
            raise ConfigError("max_octave", "must be >= j2")
        if cfg.format not in ("csv", "json"):
            raise ConfigError("format", "must be csv or json")
        if cfg.monthly_ci not in ("percentile", "gaussian"):
            raise ConfigError("monthly_ci", "must be percentile or gaussian")
        if cfg.workers < 1:
            raise ConfigError("workers", "must be >= 1")
        if cfg.seed < 0:
            raise ConfigError("seed", "must be non-negative")
        for key, build in (("schema", cfg.tape_schema), ("size_buckets", cfg.bucket_config)):
            try:
                build()
            except ValueError as err:
                raise ConfigError(key, str(err)) from None
        try:
            cfg.filter_policy()
        except ValueError as err:
            raise ConfigError("session_end", str(err)) from None
        return cfg


KEYS = {f.name for f in fields(RunConfig)}


def read_config_file(path) -> dict:
    """Parse ``key = value`` lines; ``#`` starts a comment."""
    out = {}
    for lineno, raw in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        key = key.strip().replace("-", "_")
        if not sep:
            raise ConfigError(key or f"line {lineno}", "expected key = value")
        if key not in KEYS:
            raise ConfigError(key, "unknown configuration key")
        value = value.strip()
        if key == "inputs":
            out.setdefault("inputs", []).extend(_tokens(value))
        else:
            out[key] = value
    return out


def build_config(file_values: dict | None = None, overrides: dict | None = None) -> RunConfig:
    """File values first, then overrides (flags win); ``None`` overrides are ignored."""
    merged = dict(file_values or {})
    merged.update({k: v for k, v in (overrides or {}).items() if v is not None})
    unknown = set(merged) - KEYS
    if unknown:
        raise ConfigError(sorted(unknown)[0], "unknown configuration key")
    return RunConfig(**merged).validate()
