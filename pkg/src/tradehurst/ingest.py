"""Tick-data parsing and trade exclusion rules."""

from __future__ import annotations

import enum
import logging
from collections import Counter
from dataclasses import dataclass, field
from datetime import date
from decimal import Decimal, InvalidOperation
from pathlib import Path

logger = logging.getLogger(__name__)

SESSION_OPEN = 34200  # 09:30:00
SESSION_CLOSE = 57600  # 16:00:00

EXCLUDED_CONDITIONS = frozenset("BDGJKLMNOPQRTUWZ46")
# "4" and "6" only disqualify trades on NASDAQ-style venues
NASDAQ_ONLY_CONDITIONS = frozenset({"4", "6"})
ALLOWED_CORRECTIONS = frozenset({0, 1, 2})
NASDAQ_TAGS = frozenset({"Q", "T", "NASDAQ"})
NASDAQ_TAIL_TRIM = 30

COLUMNS = ("time", "price", "size", "sale_condition", "correction", "exchange_tag")


class TradeParseError(ValueError):
    """A row could not be decoded; ``field`` names the offending column."""

    def __init__(self, field, message, line=None, lineno=None):
        self.field = field
        self.reason = message
        self.line = line
        self.lineno = lineno
        where = f" (line {lineno})" if lineno is not None else ""
        super().__init__(f"{field}: {message}{where}")


class DropReason(str, enum.Enum):
    EXCLUDED_CONDITION = "ExcludedCondition"
    BAD_CORRECTION = "BadCorrection"
    NON_POSITIVE_PRICE = "NonPositivePrice"
    NON_POSITIVE_SIZE = "NonPositiveSize"
    OUTSIDE_SESSION = "OutsideSession"
    TAIL_TRIM = "TailTrim"


@dataclass(frozen=True)
class TradeRecord:
    timestamp: float  # seconds since midnight, exchange local time
    price: Decimal
    size: int
    sale_condition: str = ""
    correction_indicator: int = 0
    exchange_tag: str = "N"


@dataclass(frozen=True)
class FilterPolicy:
    excluded_conditions: frozenset = EXCLUDED_CONDITIONS
    allowed_corrections: frozenset = ALLOWED_CORRECTIONS
    session_start: float = SESSION_OPEN
    session_end: float = SESSION_CLOSE
    nasdaq_trim_seconds: int = NASDAQ_TAIL_TRIM
    nasdaq_tags: frozenset = NASDAQ_TAGS

    def __post_init__(self):
        if self.session_end <= self.session_start:
            raise ValueError("session_end must be after session_start")
        if self.nasdaq_trim_seconds < 0:
            raise ValueError("nasdaq_trim_seconds must be non-negative")

    def is_nasdaq(self, tag: str) -> bool:
        return tag.upper() in self.nasdaq_tags

    def trim_tail_seconds(self, tag: str) -> int:
        return self.nasdaq_trim_seconds if self.is_nasdaq(tag) else 0


@dataclass(frozen=True)
class TapeSchema:
    """Column order of a delimited tape file."""

    columns: tuple = COLUMNS
    delimiter: str = ","

    def __post_init__(self):
        missing = set(COLUMNS) - set(self.columns)
        if missing:
            raise ValueError(f"schema lacks columns: {sorted(missing)}")

    @classmethod
    def from_string(cls, text: str, delimiter: str = ","):
        return cls(tuple(c.strip() for c in text.split(",") if c.strip()), delimiter)


DEFAULT_SCHEMA = TapeSchema()


@dataclass
class TradeTape:
    symbol: str
    session_date: date | None
    records: list = field(default_factory=list)
    drop_log: Counter = field(default_factory=Counter)
    parsed_count: int = 0

    def __len__(self):
        return len(self.records)

    def trim_tail_seconds(self, policy: FilterPolicy) -> int:
        tags = {r.exchange_tag for r in self.records}
        return max((policy.trim_tail_seconds(t) for t in tags), default=0)


def parse_clock(text: str) -> float:
    """``HH:MM:SS[.fff]`` to seconds since midnight."""
    parts = text.strip().split(":")
    if len(parts) != 3:
        raise TradeParseError("time", f"expected HH:MM:SS, got {text!r}")
    try:
        hh, mm = int(parts[0]), int(parts[1])
        ss = Decimal(parts[2])
    except (ValueError, InvalidOperation):
        raise TradeParseError("time", f"unparseable timestamp {text!r}") from None
    if not (0 <= mm < 60 and 0 <= ss < 61 and hh >= 0):
        raise TradeParseError("time", f"out-of-range timestamp {text!r}")
    return float(hh * 3600 + mm * 60 + ss)


def format_clock(seconds: float) -> str:
    micros = round(seconds * 1_000_000)
    whole, frac = divmod(micros, 1_000_000)
    hh, rem = divmod(whole, 3600)
    mm, ss = divmod(rem, 60)
    out = f"{hh:02d}:{mm:02d}:{ss:02d}"
    if frac:
        out += ("." + f"{frac:06d}").rstrip("0")
    return out


def _split(line: str, schema: TapeSchema) -> dict:
    cells = line.rstrip("\r\n").split(schema.delimiter)
    if len(cells) < len(schema.columns):
        missing = schema.columns[len(cells)]
        raise TradeParseError(missing, f"missing column (got {len(cells)} of {len(schema.columns)})")
    return {name: cells[i].strip() for i, name in enumerate(schema.columns)}


def parse_trade_line(line: str, schema: TapeSchema = DEFAULT_SCHEMA) -> TradeRecord:
    cells = _split(line, schema)
    t = parse_clock(cells["time"])
    try:
        price = Decimal(cells["price"])
        if not price.is_finite():
            raise InvalidOperation
    except InvalidOperation:
        raise TradeParseError("price", f"unparseable number {cells['price']!r}") from None
    try:
        size = int(cells["size"])
    except ValueError:
        raise TradeParseError("size", f"unparseable integer {cells['size']!r}") from None
    corr_text = cells["correction"]
    try:
        corr = int(corr_text) if corr_text else 0
    except ValueError:
        raise TradeParseError("correction", f"unparseable integer {corr_text!r}") from None
    return TradeRecord(t, price, size, cells["sale_condition"].upper(), corr, cells["exchange_tag"])


def format_trade_line(rec: TradeRecord, schema: TapeSchema = DEFAULT_SCHEMA) -> str:
    cells = {
        "time": format_clock(rec.timestamp),
        "price": str(rec.price),
        "size": str(rec.size),
        "sale_condition": rec.sale_condition,
        "correction": str(rec.correction_indicator),
        "exchange_tag": rec.exchange_tag,
    }
    return schema.delimiter.join(cells[c] for c in schema.columns)


def filter_trade(rec: TradeRecord, policy: FilterPolicy = FilterPolicy()) -> DropReason | None:
    """Return ``None`` to keep the record, otherwise the first failing rule."""
    nasdaq = policy.is_nasdaq(rec.exchange_tag)
    cond = rec.sale_condition
    if cond in policy.excluded_conditions and (nasdaq or cond not in NASDAQ_ONLY_CONDITIONS):
        return DropReason.EXCLUDED_CONDITION
    if rec.correction_indicator not in policy.allowed_corrections:
        return DropReason.BAD_CORRECTION
    if rec.price <= 0:
        return DropReason.NON_POSITIVE_PRICE
    if rec.size <= 0:
        return DropReason.NON_POSITIVE_SIZE
    if not policy.session_start <= rec.timestamp <= policy.session_end:
        return DropReason.OUTSIDE_SESSION
    trim = policy.trim_tail_seconds(rec.exchange_tag)
    if trim and rec.timestamp >= policy.session_end - trim:
        return DropReason.TAIL_TRIM
    return None


def _is_header(line: str, schema: TapeSchema) -> bool:
    try:
        cells = _split(line, schema)
        Decimal(cells["price"])
    except (TradeParseError, InvalidOperation):
        return True
    return False


def parse_lines(lines, schema: TapeSchema = DEFAULT_SCHEMA):
    """Yield TradeRecords from an iterable of rows, skipping a header and blanks."""
    first = True
    for lineno, line in enumerate(lines, start=1):
        if not line.strip():
            continue
        if first:
            first = False
            if _is_header(line, schema):
                continue
        try:
            yield parse_trade_line(line, schema)
        except TradeParseError as err:
            raise TradeParseError(err.field, err.reason, line, lineno) from None


def build_tape(records, symbol: str, session_date=None, policy: FilterPolicy = FilterPolicy()) -> TradeTape:
    tape = TradeTape(symbol, session_date)
    kept = []
    for rec in records:
        tape.parsed_count += 1
        reason = filter_trade(rec, policy)
        if reason is None:
            kept.append(rec)
        else:
            tape.drop_log[reason.value] += 1
    kept.sort(key=lambda r: r.timestamp)  # stable
    tape.records = kept
    return tape


def load_session(path, symbol: str, session_date=None, policy: FilterPolicy = FilterPolicy(),
                 schema: TapeSchema = DEFAULT_SCHEMA) -> TradeTape:
    path = Path(path)
    with path.open(encoding="utf-8") as fh:
        tape = build_tape(parse_lines(fh, schema), symbol, session_date, policy)
    logger.debug("%s: kept %d of %d rows, drops %s", path.name, len(tape), tape.parsed_count, dict(tape.drop_log))
    return tape


def write_tape(tape: TradeTape, path, schema: TapeSchema = DEFAULT_SCHEMA, header: bool = True) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", encoding="utf-8", newline="") as fh:
        if header:
            fh.write(schema.delimiter.join(schema.columns) + "\n")
        for rec in tape.records:
            fh.write(format_trade_line(rec, schema) + "\n")
