"""Trade-log files (CSV / JSON-lines) and strategy configuration files.

Field names, column order, and timestamp conventions are fixed so that
fixtures and journals are deterministic: serializing any valid trade
sequence and parsing it back yields an identical sequence. Config files
are schema-validated strictly; unknown fields are rejected rather than
dropped, protecting the integrity of committed beliefs.
"""

from __future__ import annotations

import csv
import io
import json
import math
from datetime import datetime, timezone
from pathlib import Path
from typing import Iterable, Sequence

import jsonschema

from .bounds import Bounds, UNIT_BOUNDS
from .metrics import MetricKind, MetricSpec, TradeRecord, TradeValidationError
from .monitor import (
    AdverseDirection,
    ConfigError,
    DEFAULT_THRESHOLDS,
    MetricBelief,
    SignalTier,
    StrategyConfig,
)

__all__ = [
    "ParseError",
    "InvalidConfigError",
    "CSV_COLUMNS",
    "parse_trades",
    "write_trades",
    "trade_to_dict",
    "trade_from_dict",
    "load_config",
    "config_from_dict",
    "config_to_dict",
    "CONFIG_SCHEMA",
]

CSV_COLUMNS = (
    "trade_id",
    "entry_time",
    "exit_time",
    "side",
    "entry_price",
    "exit_price",
    "quantity",
    "transaction_costs",
    "exit_reason",
)

_NUMERIC_FIELDS = ("entry_price", "exit_price", "quantity", "transaction_costs")
_TIME_FIELDS = ("entry_time", "exit_time")


class ParseError(ValueError):
    """A trade-log file is malformed; message names the line and field."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


class InvalidConfigError(ValueError):
    """A strategy config file fails schema or semantic validation."""


def _parse_timestamp(raw: str, field: str) -> datetime:
    if not isinstance(raw, str) or not raw:
        raise ValueError(f"field {field!r}: expected an ISO-8601 UTC timestamp, got {raw!r}")
    text = raw[:-1] + "+00:00" if raw.endswith("Z") else raw
    try:
        dt = datetime.fromisoformat(text)
    except ValueError:
        raise ValueError(f"field {field!r}: invalid ISO-8601 timestamp {raw!r}")
    if dt.tzinfo is None:
        raise ValueError(f"field {field!r}: timestamp {raw!r} must carry a UTC offset")
    return dt.astimezone(timezone.utc)


def _format_timestamp(dt: datetime) -> str:
    return dt.astimezone(timezone.utc).isoformat().replace("+00:00", "Z")


def _parse_number(raw, field: str) -> float:
    if isinstance(raw, bool) or raw is None:
        raise ValueError(f"field {field!r}: expected a number, got {raw!r}")
    try:
        value = float(raw)
    except (TypeError, ValueError):
        raise ValueError(f"field {field!r}: expected a number, got {raw!r}")
    if math.isnan(value) or math.isinf(value):
        raise ValueError(f"field {field!r}: expected a finite number, got {raw!r}")
    return value


def trade_from_dict(row: dict, line: int | None = None) -> TradeRecord:
    """Build a validated TradeRecord from one parsed row/object."""
    keys = set(row)
    expected = set(CSV_COLUMNS)
    if keys != expected:
        missing = sorted(expected - keys)
        unknown = sorted(keys - expected)
        parts = []
        if missing:
            parts.append(f"missing fields {missing}")
        if unknown:
            parts.append(f"unknown fields {unknown}")
        raise ParseError("; ".join(parts), line)
    try:
        return TradeRecord(
            trade_id=str(row["trade_id"]),
            entry_time=_parse_timestamp(row["entry_time"], "entry_time"),
            exit_time=_parse_timestamp(row["exit_time"], "exit_time"),
            side=row["side"],
            entry_price=_parse_number(row["entry_price"], "entry_price"),
            exit_price=_parse_number(row["exit_price"], "exit_price"),
            quantity=_parse_number(row["quantity"], "quantity"),
            transaction_costs=_parse_number(row["transaction_costs"], "transaction_costs"),
            exit_reason=row["exit_reason"],
        )
    except (ValueError, TradeValidationError) as exc:
        raise ParseError(str(exc), line)


def trade_to_dict(trade: TradeRecord) -> dict:
    return {
        "trade_id": trade.trade_id,
        "entry_time": _format_timestamp(trade.entry_time),
        "exit_time": _format_timestamp(trade.exit_time),
        "side": trade.side.value,
        "entry_price": trade.entry_price,
        "exit_price": trade.exit_price,
        "quantity": trade.quantity,
        "transaction_costs": trade.transaction_costs,
        "exit_reason": trade.exit_reason.value,
    }


def _detect_format(path: Path, fmt: str | None) -> str:
    if fmt is not None:
        if fmt not in ("csv", "jsonl"):
            raise ValueError(f"unknown trade-log format {fmt!r}")
        return fmt
    suffix = path.suffix.lower()
    if suffix == ".csv":
        return "csv"
    if suffix in (".jsonl", ".ndjson"):
        return "jsonl"
    raise ValueError(f"cannot infer trade-log format from {path.name!r}; pass fmt explicitly")


def parse_trades(path: str | Path, fmt: str | None = None) -> list[TradeRecord]:
    """Parse a trade log in file order; duplicate trade ids are rejected."""
    path = Path(path)
    fmt = _detect_format(path, fmt)
    text = path.read_text(encoding="utf-8")
    if fmt == "csv":
        trades = _parse_csv(text)
    else:
        trades = _parse_jsonl(text)
    seen: set[str] = set()
    for i, trade in enumerate(trades):
        if trade.trade_id in seen:
            raise ParseError(f"duplicate trade_id {trade.trade_id!r}", line=_data_line(fmt, i))
        seen.add(trade.trade_id)
    return trades


def _data_line(fmt: str, index: int) -> int:
    return index + 2 if fmt == "csv" else index + 1  # CSV line 1 is the header


def _parse_csv(text: str) -> list[TradeRecord]:
    reader = csv.reader(io.StringIO(text))
    try:
        header = next(reader)
    except StopIteration:
        return []  # empty file: valid, zero trades
    if tuple(header) != CSV_COLUMNS:
        raise ParseError(
            f"header must be exactly {','.join(CSV_COLUMNS)}; got {','.join(header)}", line=1
        )
    trades = []
    for line_no, row in enumerate(reader, start=2):
        if not row:
            continue
        if len(row) != len(CSV_COLUMNS):
            raise ParseError(f"expected {len(CSV_COLUMNS)} fields, got {len(row)}", line_no)
        trades.append(trade_from_dict(dict(zip(CSV_COLUMNS, row)), line_no))
    return trades


def _parse_jsonl(text: str) -> list[TradeRecord]:
    trades = []
    for line_no, raw in enumerate(text.splitlines(), start=1):
        if not raw.strip():
            continue
        try:
            obj = json.loads(raw)
        except json.JSONDecodeError as exc:
            raise ParseError(f"invalid JSON: {exc.msg}", line_no)
        if not isinstance(obj, dict):
            raise ParseError(f"expected a JSON object, got {type(obj).__name__}", line_no)
        trades.append(trade_from_dict(obj, line_no))
    return trades


def write_trades(path: str | Path, trades: Iterable[TradeRecord], fmt: str | None = None) -> None:
    """Serialize trades; parsing the output reproduces the input exactly."""
    path = Path(path)
    fmt = _detect_format(path, fmt)
    rows = [trade_to_dict(t) for t in trades]
    with open(path, "w", newline="", encoding="utf-8") as fh:
        if fmt == "csv":
            writer = csv.writer(fh)
            writer.writerow(CSV_COLUMNS)
            for row in rows:
                writer.writerow([_csv_cell(row[c]) for c in CSV_COLUMNS])
        else:
            for row in rows:
                fh.write(json.dumps(row) + "\n")


def _csv_cell(value) -> str:
    if isinstance(value, float):
        return repr(value)
    return str(value)


CONFIG_SCHEMA = {
    "type": "object",
    "additionalProperties": False,
    "required": ["strategy_id", "metrics"],
    "properties": {
        "strategy_id": {"type": "string", "pattern": "^[A-Za-z0-9._-]+$"},
        "metrics": {
            "type": "array",
            "minItems": 1,
            "items": {
                "type": "object",
                "additionalProperties": False,
                "required": ["kind", "committed_mu"],
                "properties": {
                    "kind": {"enum": ["W", "P", "U", "D", "M"]},
                    "name": {"type": "string", "minLength": 1},
                    "committed_mu": {"type": "number"},
                    "adverse_direction": {"enum": ["shortfall", "excess"]},
                    "bounds": {
                        "type": "array",
                        "items": {"type": "number"},
                        "minItems": 2,
                        "maxItems": 2,
                    },
                    "rule": {"type": "string"},
                    "params": {"type": "object"},
                },
            },
        },
        "thresholds": {
            "type": "array",
            "minItems": 1,
            "items": {
                "type": "array",
                "minItems": 2,
                "maxItems": 2,
                "items": [{"type": "number"}, {"type": "string"}],
            },
        },
        "window_policy": {
            "type": "object",
            "additionalProperties": False,
            "required": ["policy"],
            "properties": {
                "policy": {"enum": ["since_inception", "rolling"]},
                "length": {"type": "integer", "minimum": 1},
            },
        },
        "driving_bound": {"enum": ["exponential", "tight"]},
        "discount_rate": {"type": "number", "minimum": 0},
        "seed": {"type": "integer"},
    },
}

_VALIDATOR = jsonschema.Draft7Validator(CONFIG_SCHEMA)


def config_from_dict(doc: dict) -> StrategyConfig:
    """Validate a config document (strict schema) and build a StrategyConfig."""
    errors = sorted(_VALIDATOR.iter_errors(doc), key=lambda e: list(e.absolute_path))
    if errors:
        first = errors[0]
        where = "/".join(str(p) for p in first.absolute_path) or "<root>"
        raise InvalidConfigError(f"config invalid at {where}: {first.message}")
    beliefs = []
    for entry in doc["metrics"]:
        kind = MetricKind(entry["kind"])
        if kind is MetricKind.CUSTOM:
            if "bounds" not in entry:
                raise InvalidConfigError(
                    f"metric {entry.get('name', 'M')!r}: custom metrics must declare explicit bounds"
                )
            if "rule" not in entry:
                raise InvalidConfigError(
                    f"metric {entry.get('name', 'M')!r}: custom metrics must name an extraction rule"
                )
        bounds = UNIT_BOUNDS
        if "bounds" in entry:
            try:
                bounds = Bounds(float(entry["bounds"][0]), float(entry["bounds"][1]))
            except ValueError as exc:
                raise InvalidConfigError(str(exc))
        direction = entry.get("adverse_direction")
        try:
            spec = MetricSpec(
                kind=kind,
                name=entry.get("name", ""),
                bounds=bounds,
                rule=entry.get("rule"),
                params=entry.get("params", {}),
            )
            beliefs.append(
                MetricBelief(
                    spec=spec,
                    committed_mu=entry["committed_mu"],
                    direction=AdverseDirection(direction) if direction else None,
                )
            )
        except (ValueError, TradeValidationError, ConfigError) as exc:
            raise InvalidConfigError(str(exc))
    thresholds = DEFAULT_THRESHOLDS
    if "thresholds" in doc:
        try:
            thresholds = tuple(
                (float(p), SignalTier.from_label(label)) for p, label in doc["thresholds"]
            )
        except ConfigError as exc:
            raise InvalidConfigError(str(exc))
    window = doc.get("window_policy", {"policy": "since_inception"})
    try:
        return StrategyConfig(
            strategy_id=doc["strategy_id"],
            beliefs=tuple(beliefs),
            thresholds=thresholds,
            window_policy=window["policy"],
            window_length=window.get("length"),
            driving_bound=doc.get("driving_bound", "exponential"),
            discount_rate=doc.get("discount_rate", 0.0),
            seed=doc.get("seed"),
        )
    except ConfigError as exc:
        raise InvalidConfigError(str(exc))


def config_to_dict(config: StrategyConfig) -> dict:
    doc: dict = {"strategy_id": config.strategy_id, "metrics": []}
    for belief in config.beliefs:
        entry: dict = {
            "kind": belief.spec.kind.value,
            "committed_mu": belief.committed_mu,
            "adverse_direction": belief.direction.value,
        }
        if belief.spec.name != belief.spec.kind.value:
            entry["name"] = belief.spec.name
        if belief.spec.kind is MetricKind.CUSTOM:
            entry["bounds"] = [belief.spec.bounds.a, belief.spec.bounds.b]
            entry["rule"] = belief.spec.rule
            if belief.spec.params:
                entry["params"] = dict(belief.spec.params)
        doc["metrics"].append(entry)
    doc["thresholds"] = [[p, tier.label] for p, tier in config.thresholds]
    window: dict = {"policy": config.window_policy}
    if config.window_length is not None:
        window["length"] = config.window_length
    doc["window_policy"] = window
    doc["driving_bound"] = config.driving_bound
    doc["discount_rate"] = config.discount_rate
    if config.seed is not None:
        doc["seed"] = config.seed
    return doc


def load_config(path: str | Path) -> StrategyConfig:
    """Load and validate a strategy config JSON file."""
    path = Path(path)
    try:
        doc = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise InvalidConfigError(f"{path.name}: invalid JSON: {exc.msg} (line {exc.lineno})")
    if not isinstance(doc, dict):
        raise InvalidConfigError(f"{path.name}: config must be a JSON object")
    return config_from_dict(doc)
