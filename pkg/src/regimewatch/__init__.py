"""Sequential regime-change monitoring for trading strategies.

Commit an expected value for each bounded performance metric, fold in
every completed round-trip trade, and read off the maximum probability
that the observed shortfall arose by chance, tiered into actionable
signals.
"""

from .bounds import (
    Bounds,
    BoundValue,
    DomainError,
    NormalizedPair,
    SampleCount,
    UNIT_BOUNDS,
    UnitInterval,
    a4_rhs,
    exp_bound,
    geometric_mean,
    lemma1_line_bound,
    normalize,
    optimal_h,
    shortfall_tight_bound,
    tight_bound,
    two_sided_exp_bound,
    variance_cap,
)
from .metrics import (
    BoundednessError,
    ExitReason,
    MetricKind,
    MetricSpec,
    RateSnapshot,
    Side,
    TradeRecord,
    TradeValidationError,
    compute_rates,
    trade_outcome,
)
from .monitor import (
    AdverseDirection,
    BoundReport,
    ConfigError,
    DEFAULT_THRESHOLDS,
    DuplicateTradeError,
    MetricBelief,
    NoTradesError,
    RegimeMonitor,
    SignalTier,
    StrategyConfig,
    assign_tier,
)

__version__ = "0.1.0"

__all__ = [
    "Bounds",
    "BoundValue",
    "DomainError",
    "NormalizedPair",
    "SampleCount",
    "UNIT_BOUNDS",
    "UnitInterval",
    "a4_rhs",
    "exp_bound",
    "geometric_mean",
    "lemma1_line_bound",
    "normalize",
    "optimal_h",
    "shortfall_tight_bound",
    "tight_bound",
    "two_sided_exp_bound",
    "variance_cap",
    "BoundednessError",
    "ExitReason",
    "MetricKind",
    "MetricSpec",
    "RateSnapshot",
    "Side",
    "TradeRecord",
    "TradeValidationError",
    "compute_rates",
    "trade_outcome",
    "AdverseDirection",
    "BoundReport",
    "ConfigError",
    "DEFAULT_THRESHOLDS",
    "DuplicateTradeError",
    "MetricBelief",
    "NoTradesError",
    "RegimeMonitor",
    "SignalTier",
    "StrategyConfig",
    "assign_tier",
    "__version__",
]
