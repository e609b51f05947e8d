from __future__ import annotations

import json
from datetime import datetime, timedelta, timezone

import pytest

from regimewatch import MetricBelief, MetricKind, MetricSpec, StrategyConfig, TradeRecord
from regimewatch.tradelog import write_trades

BASE_TIME = datetime(2024, 1, 2, 14, 0, tzinfo=timezone.utc)

# 12 trades, exactly 5 winners: the worked committed-belief scenario
# (committed win rate 0.6, observed 5/12).
BOX_B_WIN_INDICES = frozenset({0, 3, 5, 8, 10})


def make_trade(
    i: int,
    win: bool,
    side: str = "long",
    costs: float = 0.25,
    exit_reason: str | None = None,
) -> TradeRecord:
    if exit_reason is None:
        exit_reason = "target_hit" if win else "stop_hit"
    if side == "long":
        exit_price = 105.0 if win else 97.0
    else:
        exit_price = 95.0 if win else 103.0
    return TradeRecord(
        trade_id=f"T{i + 1:03d}",
        entry_time=BASE_TIME + timedelta(hours=2 * i),
        exit_time=BASE_TIME + timedelta(hours=2 * i + 1),
        side=side,
        entry_price=100.0,
        exit_price=exit_price,
        quantity=1.0,
        transaction_costs=costs,
        exit_reason=exit_reason,
    )


def make_box_b_trades() -> list[TradeRecord]:
    return [make_trade(i, win=i in BOX_B_WIN_INDICES) for i in range(12)]


@pytest.fixture
def box_b_trades() -> list[TradeRecord]:
    return make_box_b_trades()


@pytest.fixture
def box_b_config() -> StrategyConfig:
    return StrategyConfig(
        strategy_id="boxb",
        beliefs=(MetricBelief(spec=MetricSpec(kind=MetricKind.WIN), committed_mu=0.6),),
    )


BOX_B_CONFIG_DOC = {"strategy_id": "boxb", "metrics": [{"kind": "W", "committed_mu": 0.6}]}


@pytest.fixture
def box_b_files(tmp_path, box_b_trades):
    """(config_path, trades_csv_path) on disk for CLI-level tests."""
    config_path = tmp_path / "boxb.json"
    config_path.write_text(json.dumps(BOX_B_CONFIG_DOC))
    trades_path = tmp_path / "boxb.csv"
    write_trades(trades_path, box_b_trades)
    return config_path, trades_path
