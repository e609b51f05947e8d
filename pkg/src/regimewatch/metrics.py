"""Round-trip trade records and the bounded performance rates extracted from them.

A strategy's observable unit is one completed round-trip trade. Each
configured metric maps a trade to a bounded outcome: the built-in rates
(win, net profit, target exit, stop loss) are 0/1 indicators on [0, 1];
custom metrics apply a named extraction rule and must declare their own
bounds (e.g. return on equity confined by automatic exits).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from datetime import datetime, timezone
from enum import Enum
from typing import Callable, Mapping, Sequence

from .bounds import UNIT_BOUNDS, Bounds

__all__ = [
    "TradeValidationError",
    "BoundednessError",
    "Side",
    "ExitReason",
    "TradeRecord",
    "MetricKind",
    "MetricSpec",
    "RateSnapshot",
    "register_rule",
    "trade_outcome",
    "compute_rates",
]

DAYS_PER_YEAR = 365.25


class TradeValidationError(ValueError):
    """A trade record violates a structural invariant."""


class BoundednessError(ValueError):
    """A metric outcome escaped the metric's declared bounds."""

    def __init__(self, trade_id: str, metric: str, value: float, bounds: Bounds):
        self.trade_id = trade_id
        self.metric = metric
        self.value = value
        super().__init__(
            f"trade {trade_id!r}: {metric} outcome {value!r} outside "
            f"declared bounds [{bounds.a}, {bounds.b}]"
        )


class Side(str, Enum):
    LONG = "long"
    SHORT = "short"


class ExitReason(str, Enum):
    TARGET_HIT = "target_hit"
    STOP_HIT = "stop_hit"
    RULE_EXIT = "rule_exit"
    MANUAL = "manual"


def _positive(value: float, name: str) -> float:
    v = float(value)
    if math.isnan(v) or math.isinf(v) or v <= 0.0:
        raise TradeValidationError(f"{name} must be a positive finite number, got {value!r}")
    return v


def _non_negative(value: float, name: str) -> float:
    v = float(value)
    if math.isnan(v) or math.isinf(v) or v < 0.0:
        raise TradeValidationError(f"{name} must be a non-negative finite number, got {value!r}")
    return v


def _utc(value: datetime, name: str) -> datetime:
    if not isinstance(value, datetime):
        raise TradeValidationError(f"{name} must be a datetime, got {value!r}")
    if value.tzinfo is None:
        raise TradeValidationError(f"{name} must carry a timezone (UTC), got naive {value!r}")
    return value.astimezone(timezone.utc)


@dataclass(frozen=True)
class TradeRecord:
    """One completed round-trip trade."""

    trade_id: str
    entry_time: datetime
    exit_time: datetime
    side: Side
    entry_price: float
    exit_price: float
    quantity: float
    transaction_costs: float
    exit_reason: ExitReason

    def __post_init__(self) -> None:
        if not isinstance(self.trade_id, str) or not self.trade_id:
            raise TradeValidationError(f"trade_id must be a non-empty string, got {self.trade_id!r}")
        object.__setattr__(self, "side", Side(self.side))
        object.__setattr__(self, "exit_reason", ExitReason(self.exit_reason))
        object.__setattr__(self, "entry_time", _utc(self.entry_time, "entry_time"))
        object.__setattr__(self, "exit_time", _utc(self.exit_time, "exit_time"))
        object.__setattr__(self, "entry_price", _positive(self.entry_price, "entry_price"))
        object.__setattr__(self, "exit_price", _positive(self.exit_price, "exit_price"))
        object.__setattr__(self, "quantity", _positive(self.quantity, "quantity"))
        object.__setattr__(
            self, "transaction_costs", _non_negative(self.transaction_costs, "transaction_costs")
        )
        if self.exit_time < self.entry_time:
            raise TradeValidationError(
                f"trade {self.trade_id!r}: exit_time precedes entry_time"
            )

    @property
    def holding_years(self) -> float:
        return (self.exit_time - self.entry_time).total_seconds() / (DAYS_PER_YEAR * 86400.0)

    def gross_pnl(self) -> float:
        """Signed notional gain before costs: entry-to-exit move times quantity."""
        move = self.exit_price - self.entry_price
        if self.side is Side.SHORT:
            move = -move
        return move * self.quantity

    def net_pnl(self, discount_rate: float = 0.0) -> float:
        """Profit after transaction costs, with exit-leg cash flows discounted to entry time.

        ``discount_rate`` is a continuously compounded annual rate; the
        default 0 reduces this to gross PnL minus costs.
        """
        if discount_rate == 0.0:
            return self.gross_pnl() - self.transaction_costs
        discount = math.exp(-discount_rate * self.holding_years)
        exit_value = self.exit_price * self.quantity * discount
        entry_value = self.entry_price * self.quantity
        if self.side is Side.SHORT:
            return entry_value - exit_value - self.transaction_costs
        return exit_value - entry_value - self.transaction_costs

    def return_on_equity(self, discount_rate: float = 0.0, compounding: str = "simple") -> float:
        """Net PnL relative to the entry notional; optionally continuously compounded."""
        r = self.net_pnl(discount_rate) / (self.entry_price * self.quantity)
        if compounding == "continuous":
            if r <= -1.0:
                raise TradeValidationError(
                    f"trade {self.trade_id!r}: return {r} <= -100%, log return undefined"
                )
            return math.log1p(r)
        if compounding != "simple":
            raise TradeValidationError(f"unknown compounding {compounding!r}")
        return r


class MetricKind(str, Enum):
    WIN = "W"
    NET_PROFIT = "P"
    TARGET_EXIT = "U"
    STOP_LOSS = "D"
    CUSTOM = "M"


# Named extraction rules for CUSTOM metrics: (trade, params, discount_rate) -> outcome.
MetricRule = Callable[[TradeRecord, Mapping[str, object], float], float]
_RULES: dict[str, MetricRule] = {}


def register_rule(name: str) -> Callable[[MetricRule], MetricRule]:
    def deco(fn: MetricRule) -> MetricRule:
        _RULES[name] = fn
        return fn

    return deco


@register_rule("bounded_return")
def _rule_bounded_return(trade: TradeRecord, params: Mapping[str, object], discount_rate: float) -> float:
    compounding = str(params.get("compounding", "simple"))
    return trade.return_on_equity(discount_rate, compounding)


@register_rule("return_above")
def _rule_return_above(trade: TradeRecord, params: Mapping[str, object], discount_rate: float) -> float:
    threshold = float(params["threshold"])
    return 1.0 if trade.return_on_equity(discount_rate) >= threshold else 0.0


@register_rule("return_below")
def _rule_return_below(trade: TradeRecord, params: Mapping[str, object], discount_rate: float) -> float:
    threshold = float(params["threshold"])
    return 1.0 if trade.return_on_equity(discount_rate) <= threshold else 0.0


@dataclass(frozen=True)
class MetricSpec:
    """Definition of one bounded performance metric.

    The built-in rate kinds are pinned to [0, 1]; CUSTOM metrics name an
    extraction rule and declare their own bounds.
    """

    kind: MetricKind
    name: str = ""
    bounds: Bounds = UNIT_BOUNDS
    rule: str | None = None
    params: Mapping[str, object] = field(default_factory=dict)

    def __post_init__(self) -> None:
        object.__setattr__(self, "kind", MetricKind(self.kind))
        if not self.name:
            object.__setattr__(self, "name", self.kind.value)
        if self.kind is MetricKind.CUSTOM:
            if not self.rule:
                raise TradeValidationError("CUSTOM metrics must name an extraction rule")
            if self.rule not in _RULES:
                raise TradeValidationError(
                    f"unknown metric rule {self.rule!r}; registered: {sorted(_RULES)}"
                )
        else:
            if self.bounds != UNIT_BOUNDS:
                raise TradeValidationError(
                    f"{self.kind.value} metrics are rates on [0, 1]; got bounds "
                    f"[{self.bounds.a}, {self.bounds.b}]"
                )
            if self.rule is not None:
                raise TradeValidationError(
                    f"{self.kind.value} metrics do not take an extraction rule"
                )


@dataclass(frozen=True)
class RateSnapshot:
    """Observed mean of one metric over a window of trades."""

    metric: MetricSpec
    window: tuple[int, int]
    n: int
    observed_mean: float


def trade_outcome(trade: TradeRecord, metric: MetricSpec, discount_rate: float = 0.0) -> float:
    """Bounded outcome of a single trade under one metric definition."""
    kind = metric.kind
    if kind is MetricKind.WIN:
        return 1.0 if trade.gross_pnl() > 0.0 else 0.0
    if kind is MetricKind.NET_PROFIT:
        return 1.0 if trade.net_pnl(discount_rate) > 0.0 else 0.0
    if kind is MetricKind.TARGET_EXIT:
        return 1.0 if trade.exit_reason is ExitReason.TARGET_HIT else 0.0
    if kind is MetricKind.STOP_LOSS:
        return 1.0 if trade.exit_reason is ExitReason.STOP_HIT else 0.0
    value = _RULES[metric.rule](trade, metric.params, discount_rate)  # type: ignore[index]
    if not metric.bounds.contains(value):
        raise BoundednessError(trade.trade_id, metric.name, value, metric.bounds)
    return value


def compute_rates(
    trades: Sequence[TradeRecord],
    window: tuple[int, int],
    specs: Sequence[MetricSpec],
    discount_rate: float = 0.0,
) -> list[RateSnapshot]:
    """Observed mean of each metric over the inclusive trade-index window [i, j]."""
    i, j = window
    if not trades:
        raise ValueError("no trades: window is empty")
    if not (0 <= i <= j < len(trades)):
        raise ValueError(
            f"window [{i}, {j}] invalid for {len(trades)} trades (inclusive indices)"
        )
    selected = trades[i : j + 1]
    n = len(selected)
    out = []
    for spec in specs:
        mean = math.fsum(trade_outcome(t, spec, discount_rate) for t in selected) / n
        out.append(RateSnapshot(metric=spec, window=(i, j), n=n, observed_mean=mean))
    return out
