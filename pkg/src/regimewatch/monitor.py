"""Stateful per-strategy engine: committed beliefs in, signal tiers out.

The trader commits an expected value for each configured metric before
monitoring starts. After every completed round-trip trade the engine
recomputes, per metric, the maximum probability that the observed
adverse gap arose by chance under the persistence hypothesis, and maps
that probability to a signal tier. Reports are always derived from the
trade journal, so replaying a journal reproduces them exactly.
"""

from __future__ import annotations

import enum
import math
import re
from dataclasses import dataclass
from datetime import datetime
from typing import Iterable, Mapping, Sequence

from .bounds import exp_bound, normalize, shortfall_tight_bound, tight_bound
from .metrics import (
    BoundednessError,
    MetricKind,
    MetricSpec,
    TradeRecord,
    trade_outcome,
)

__all__ = [
    "DuplicateTradeError",
    "NoTradesError",
    "ConfigError",
    "SignalTier",
    "AdverseDirection",
    "DEFAULT_THRESHOLDS",
    "MetricBelief",
    "StrategyConfig",
    "BoundReport",
    "RegimeMonitor",
    "assign_tier",
]


class DuplicateTradeError(ValueError):
    """A trade with this id is already in the journal."""


class NoTradesError(ValueError):
    """No completed trades are available under the window policy."""


class ConfigError(ValueError):
    """A strategy configuration violates an invariant."""


class SignalTier(enum.IntEnum):
    """Actionable tiers, totally ordered by severity."""

    NORMAL = 0
    WATCH = 1
    SIGNIFICANT_RISK = 2
    REGIME_CHANGE = 3

    @property
    def label(self) -> str:
        return _TIER_LABELS[self]

    @classmethod
    def from_label(cls, label: str) -> "SignalTier":
        try:
            return _TIERS_BY_LABEL[label]
        except KeyError:
            raise ConfigError(f"unknown signal tier {label!r}; expected one of {sorted(_TIERS_BY_LABEL)}")


_TIER_LABELS = {
    SignalTier.NORMAL: "Normal",
    SignalTier.WATCH: "Watch",
    SignalTier.SIGNIFICANT_RISK: "SignificantRisk",
    SignalTier.REGIME_CHANGE: "RegimeChange",
}
_TIERS_BY_LABEL = {v: k for k, v in _TIER_LABELS.items()}


class AdverseDirection(str, enum.Enum):
    SHORTFALL = "shortfall"  # observed mean below the committed mean is bad
    EXCESS = "excess"  # observed mean above the committed mean is bad


# Observed below-belief rates are adverse for win/profit/target metrics;
# a rising stop-loss rate is adverse from above.
_DEFAULT_DIRECTIONS = {
    MetricKind.WIN: AdverseDirection.SHORTFALL,
    MetricKind.NET_PROFIT: AdverseDirection.SHORTFALL,
    MetricKind.TARGET_EXIT: AdverseDirection.SHORTFALL,
    MetricKind.STOP_LOSS: AdverseDirection.EXCESS,
}

DEFAULT_THRESHOLDS: tuple[tuple[float, SignalTier], ...] = (
    (0.50, SignalTier.WATCH),
    (0.25, SignalTier.SIGNIFICANT_RISK),
    (0.10, SignalTier.REGIME_CHANGE),
)

_STRATEGY_ID_RE = re.compile(r"^[A-Za-z0-9._-]+$")


@dataclass(frozen=True)
class MetricBelief:
    """One metric plus the trader's committed expectation for it."""

    spec: MetricSpec
    committed_mu: float
    direction: AdverseDirection | None = None

    def __post_init__(self) -> None:
        mu = float(self.committed_mu)
        if math.isnan(mu) or not self.spec.bounds.contains(mu):
            raise ConfigError(
                f"committed mu {self.committed_mu!r} outside {self.spec.name} bounds "
                f"[{self.spec.bounds.a}, {self.spec.bounds.b}]"
            )
        object.__setattr__(self, "committed_mu", mu)
        if self.direction is None:
            default = _DEFAULT_DIRECTIONS.get(self.spec.kind)
            if default is None:
                raise ConfigError(
                    f"metric {self.spec.name!r}: CUSTOM metrics must declare an adverse direction"
                )
            object.__setattr__(self, "direction", default)
        else:
            object.__setattr__(self, "direction", AdverseDirection(self.direction))


@dataclass(frozen=True)
class StrategyConfig:
    """The trader's committed beliefs plus engine options."""

    strategy_id: str
    beliefs: tuple[MetricBelief, ...]
    thresholds: tuple[tuple[float, SignalTier], ...] = DEFAULT_THRESHOLDS
    window_policy: str = "since_inception"
    window_length: int | None = None
    driving_bound: str = "exponential"
    discount_rate: float = 0.0
    seed: int | None = None

    def __post_init__(self) -> None:
        if not isinstance(self.strategy_id, str) or not _STRATEGY_ID_RE.match(self.strategy_id):
            raise ConfigError(
                f"strategy_id must match [A-Za-z0-9._-]+, got {self.strategy_id!r}"
            )
        object.__setattr__(self, "beliefs", tuple(self.beliefs))
        if not self.beliefs:
            raise ConfigError("at least one metric belief is required")
        names = [b.spec.name for b in self.beliefs]
        if len(set(names)) != len(names):
            raise ConfigError(f"metric names must be unique, got {names}")
        thresholds = tuple((float(p), SignalTier(t)) for p, t in self.thresholds)
        if not thresholds:
            raise ConfigError("at least one threshold is required")
        for p, _ in thresholds:
            if not 0.0 < p < 1.0:
                raise ConfigError(f"thresholds must lie in (0, 1), got {p}")
        probs = [p for p, _ in thresholds]
        if any(b >= a for a, b in zip(probs, probs[1:])):
            raise ConfigError(f"thresholds must be strictly descending, got {probs}")
        object.__setattr__(self, "thresholds", thresholds)
        if self.window_policy not in ("since_inception", "rolling"):
            raise ConfigError(f"unknown window policy {self.window_policy!r}")
        if self.window_policy == "rolling":
            if not isinstance(self.window_length, int) or self.window_length < 1:
                raise ConfigError("rolling window requires an integer length >= 1")
        elif self.window_length is not None:
            raise ConfigError("window_length only applies to the rolling policy")
        if self.driving_bound not in ("exponential", "tight"):
            raise ConfigError(f"driving_bound must be 'exponential' or 'tight', got {self.driving_bound!r}")
        if math.isnan(self.discount_rate) or self.discount_rate < 0.0:
            raise ConfigError(f"discount_rate must be >= 0, got {self.discount_rate!r}")

    def belief_for(self, name: str) -> MetricBelief:
        for b in self.beliefs:
            if b.spec.name == name:
                return b
        raise KeyError(f"no metric named {name!r} in strategy {self.strategy_id!r}")


def assign_tier(
    p: float, thresholds: Sequence[tuple[float, SignalTier]] = DEFAULT_THRESHOLDS
) -> SignalTier:
    """Most severe tier whose threshold strictly exceeds p; Normal otherwise.

    "Drops below" is strict: a probability exactly at a threshold does
    not trigger that tier.
    """
    matched = [tier for threshold, tier in thresholds if p < threshold]
    return max(matched, default=SignalTier.NORMAL)


@dataclass(frozen=True)
class BoundReport:
    """Chance-probability bounds and tier for one metric at one instant."""

    metric: str
    kind: str
    n: int
    observed_mean: float
    committed_mu: float
    tolerance_t: float
    p_exp: float
    p_tight: float
    tier: SignalTier
    timestamp: datetime

    def as_dict(self) -> dict:
        return {
            "metric": self.metric,
            "kind": self.kind,
            "n": self.n,
            "observed_mean": self.observed_mean,
            "committed_mu": self.committed_mu,
            "tolerance_t": self.tolerance_t,
            "p_exp": self.p_exp,
            "p_tight": self.p_tight,
            "tier": self.tier.label,
            "timestamp": self.timestamp.isoformat().replace("+00:00", "Z"),
        }


def _build_report(
    belief: MetricBelief,
    outcomes: Sequence[float],
    committed_mu: float,
    timestamp: datetime,
    thresholds: Sequence[tuple[float, SignalTier]],
    driving_bound: str,
) -> BoundReport:
    n = len(outcomes)
    observed = math.fsum(outcomes) / n
    if belief.direction is AdverseDirection.SHORTFALL:
        t = max(0.0, committed_mu - observed)
    else:
        t = max(0.0, observed - committed_mu)
    pair = normalize(committed_mu, t, belief.spec.bounds)
    p_exp = exp_bound(pair.t_dot, n)
    if belief.direction is AdverseDirection.SHORTFALL:
        p_tight = shortfall_tight_bound(pair, n)
    else:
        p_tight = tight_bound(pair, n)
    driving = p_exp if driving_bound == "exponential" else p_tight
    return BoundReport(
        metric=belief.spec.name,
        kind=belief.spec.kind.value,
        n=n,
        observed_mean=observed,
        committed_mu=committed_mu,
        tolerance_t=t,
        p_exp=float(p_exp),
        p_tight=float(p_tight),
        tier=assign_tier(driving, thresholds),
        timestamp=timestamp,
    )


class RegimeMonitor:
    """Holds one strategy's journal and recomputes bound reports per trade.

    Updates must be serialized per strategy (one writer at a time);
    reads of the returned report lists are safe anywhere since reports
    are immutable snapshots.
    """

    def __init__(self, config: StrategyConfig, trades: Iterable[TradeRecord] = ()):
        self.config = config
        self._journal: list[TradeRecord] = []
        self._ids: set[str] = set()
        self._latest: list[BoundReport] = []
        for trade in trades:
            self.update(trade)

    @property
    def journal(self) -> tuple[TradeRecord, ...]:
        return tuple(self._journal)

    @property
    def trade_count(self) -> int:
        return len(self._journal)

    @property
    def latest_reports(self) -> list[BoundReport]:
        return list(self._latest)

    def update(self, trade: TradeRecord) -> list[BoundReport]:
        """Fold one completed trade into the journal and recompute all reports.

        Rejection (duplicate id, invalid trade, out-of-bounds outcome)
        leaves the state untouched.
        """
        if trade.trade_id in self._ids:
            raise DuplicateTradeError(f"trade {trade.trade_id!r} already in journal")
        candidate = self._journal + [trade]
        reports = self._evaluate_journal(candidate)
        self._journal = candidate
        self._ids.add(trade.trade_id)
        self._latest = reports
        return list(reports)

    def evaluate(self) -> list[BoundReport]:
        """Recompute all reports from the journal; idempotent."""
        return list(self._evaluate_journal(self._journal))

    def what_if(
        self,
        extra_outcomes: Mapping[str, Sequence[float]] | None = None,
        alternative_mu: Mapping[str, float] | None = None,
    ) -> list[BoundReport]:
        """Reports for a hypothetical scenario; the live state is untouched.

        ``extra_outcomes`` appends hypothetical per-metric outcome values
        (keyed by metric name) after the window policy is applied;
        ``alternative_mu`` overrides committed means. Empty hypotheticals
        reproduce :meth:`evaluate`.
        """
        extra = dict(extra_outcomes or {})
        overrides = dict(alternative_mu or {})
        for name in list(extra) + list(overrides):
            self.config.belief_for(name)  # raises KeyError for unknown metrics
        for name, values in extra.items():
            belief = self.config.belief_for(name)
            for v in values:
                if math.isnan(float(v)) or not belief.spec.bounds.contains(float(v)):
                    raise BoundednessError("<hypothetical>", name, float(v), belief.spec.bounds)
        for name, mu in overrides.items():
            belief = self.config.belief_for(name)
            if math.isnan(float(mu)) or not belief.spec.bounds.contains(float(mu)):
                raise ConfigError(
                    f"alternative mu {mu!r} outside {name} bounds "
                    f"[{belief.spec.bounds.a}, {belief.spec.bounds.b}]"
                )
        return list(self._evaluate_journal(self._journal, extra, overrides))

    def _windowed(self, journal: Sequence[TradeRecord]) -> Sequence[TradeRecord]:
        if self.config.window_policy == "rolling":
            return journal[-self.config.window_length :]
        return journal

    def _evaluate_journal(
        self,
        journal: Sequence[TradeRecord],
        extra_outcomes: Mapping[str, Sequence[float]] | None = None,
        mu_overrides: Mapping[str, float] | None = None,
    ) -> list[BoundReport]:
        window = self._windowed(journal)
        if not window:
            raise NoTradesError(
                f"strategy {self.config.strategy_id!r}: no completed trades"
            )
        timestamp = window[-1].exit_time
        extra_outcomes = extra_outcomes or {}
        mu_overrides = mu_overrides or {}
        reports = []
        for belief in self.config.beliefs:
            outcomes = [
                trade_outcome(t, belief.spec, self.config.discount_rate) for t in window
            ]
            extras = extra_outcomes.get(belief.spec.name)
            if extras:
                outcomes.extend(float(v) for v in extras)
                if self.config.window_policy == "rolling":
                    outcomes = outcomes[-self.config.window_length :]
            mu = float(mu_overrides.get(belief.spec.name, belief.committed_mu))
            reports.append(
                _build_report(
                    belief,
                    outcomes,
                    mu,
                    timestamp,
                    self.config.thresholds,
                    self.config.driving_bound,
                )
            )
        return reports
