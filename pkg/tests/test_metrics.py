"""Trade-record validation and bounded-rate extraction tests."""

from __future__ import annotations

import math
from datetime import timedelta

import numpy as np
import pytest

from regimewatch.bounds import Bounds, UNIT_BOUNDS
from regimewatch.metrics import (
    BoundednessError,
    ExitReason,
    MetricKind,
    MetricSpec,
    Side,
    TradeRecord,
    TradeValidationError,
    compute_rates,
    trade_outcome,
)

from conftest import BASE_TIME, make_box_b_trades, make_trade


def _trade(**overrides) -> TradeRecord:
    kwargs = dict(
        trade_id="T1",
        entry_time=BASE_TIME,
        exit_time=BASE_TIME + timedelta(hours=1),
        side="long",
        entry_price=100.0,
        exit_price=105.0,
        quantity=1.0,
        transaction_costs=0.0,
        exit_reason="target_hit",
    )
    kwargs.update(overrides)
    return TradeRecord(**kwargs)


W = MetricSpec(kind=MetricKind.WIN)
P = MetricSpec(kind=MetricKind.NET_PROFIT)
U = MetricSpec(kind=MetricKind.TARGET_EXIT)
D = MetricSpec(kind=MetricKind.STOP_LOSS)


class TestTradeRecord:
    def test_enums_coerced_from_strings(self):
        t = _trade(side="short", exit_reason="manual")
        assert t.side is Side.SHORT
        assert t.exit_reason is ExitReason.MANUAL

    def test_gross_pnl_signs(self):
        assert _trade().gross_pnl() == pytest.approx(5.0)
        assert _trade(side="short", exit_price=95.0).gross_pnl() == pytest.approx(5.0)
        assert _trade(side="short", exit_price=103.0).gross_pnl() == pytest.approx(-3.0)
        assert _trade(quantity=2.5).gross_pnl() == pytest.approx(12.5)

    def test_net_pnl_deducts_costs(self):
        assert _trade(transaction_costs=1.5).net_pnl() == pytest.approx(3.5)

    def test_net_pnl_discounting_reduces_long_gains(self):
        t = _trade(exit_time=BASE_TIME + timedelta(days=365), exit_price=101.0)
        assert t.net_pnl() == pytest.approx(1.0)
        discounted = t.net_pnl(discount_rate=0.05)
        # exit proceeds a year out are worth less at entry time
        assert discounted < 1.0
        assert discounted == pytest.approx(
            101.0 * math.exp(-0.05 * t.holding_years) - 100.0, rel=1e-9
        )

    def test_return_on_equity(self):
        t = _trade(quantity=2.0, transaction_costs=1.0)
        assert t.return_on_equity() == pytest.approx((10.0 - 1.0) / 200.0)
        assert t.return_on_equity(compounding="continuous") == pytest.approx(
            math.log1p(9.0 / 200.0)
        )

    @pytest.mark.parametrize(
        "overrides",
        [
            {"entry_price": 0.0},
            {"exit_price": -5.0},
            {"quantity": 0.0},
            {"transaction_costs": -1.0},
            {"trade_id": ""},
            {"side": "sideways"},
            {"exit_reason": "vibes"},
            {"exit_time": BASE_TIME - timedelta(hours=1)},
            {"entry_time": BASE_TIME.replace(tzinfo=None)},
        ],
    )
    def test_invariant_violations_rejected(self, overrides):
        with pytest.raises((TradeValidationError, ValueError)):
            _trade(**overrides)


class TestMetricSpec:
    def test_builtin_kinds_pinned_to_unit_bounds(self):
        with pytest.raises(TradeValidationError):
            MetricSpec(kind=MetricKind.WIN, bounds=Bounds(0.0, 2.0))
        with pytest.raises(TradeValidationError):
            MetricSpec(kind=MetricKind.STOP_LOSS, rule="bounded_return")

    def test_custom_requires_rule(self):
        with pytest.raises(TradeValidationError):
            MetricSpec(kind=MetricKind.CUSTOM, bounds=Bounds(-0.1, 0.1))
        with pytest.raises(TradeValidationError):
            MetricSpec(kind=MetricKind.CUSTOM, rule="nope", bounds=Bounds(-0.1, 0.1))

    def test_name_defaults_to_kind(self):
        assert MetricSpec(kind=MetricKind.WIN).name == "W"
        spec = MetricSpec(kind=MetricKind.CUSTOM, name="roe", rule="bounded_return",
                          bounds=Bounds(-0.1, 0.1))
        assert spec.name == "roe"


class TestTradeOutcome:
    def test_win_on_gross_profit(self):
        assert trade_outcome(_trade(), W) == 1.0
        assert trade_outcome(_trade(exit_price=97.0), W) == 0.0

    def test_costs_flip_net_profit(self):
        # gross +4 minus costs 5 is a net loss
        t = _trade(exit_price=104.0, transaction_costs=5.0)
        assert trade_outcome(t, W) == 1.0
        assert trade_outcome(t, P) == 0.0

    def test_exit_flag_passthrough(self):
        assert trade_outcome(_trade(exit_reason="stop_hit"), D) == 1.0
        assert trade_outcome(_trade(exit_reason="stop_hit"), U) == 0.0
        assert trade_outcome(_trade(exit_reason="target_hit"), U) == 1.0

    def test_bounded_return_rule(self):
        spec = MetricSpec(kind=MetricKind.CUSTOM, name="roe", rule="bounded_return",
                          bounds=Bounds(-0.1, 0.1))
        assert trade_outcome(_trade(), spec) == pytest.approx(0.05)

    def test_bounded_return_violation_names_trade(self):
        spec = MetricSpec(kind=MetricKind.CUSTOM, name="roe", rule="bounded_return",
                          bounds=Bounds(-0.02, 0.02))
        with pytest.raises(BoundednessError) as err:
            trade_outcome(_trade(trade_id="T042"), spec)
        assert err.value.trade_id == "T042"
        assert "T042" in str(err.value)

    def test_threshold_rules(self):
        above = MetricSpec(kind=MetricKind.CUSTOM, name="big_win", rule="return_above",
                           params={"threshold": 0.04})
        below = MetricSpec(kind=MetricKind.CUSTOM, name="bad_loss", rule="return_below",
                           params={"threshold": -0.02})
        assert trade_outcome(_trade(), above) == 1.0  # +5%
        assert trade_outcome(_trade(exit_price=103.0), above) == 0.0
        assert trade_outcome(_trade(exit_price=97.0), below) == 1.0  # -3%
        assert trade_outcome(_trade(exit_price=99.0), below) == 0.0


class TestComputeRates:
    def test_box_b_win_rate(self):
        trades = make_box_b_trades()
        [snap] = compute_rates(trades, (0, 11), [W])
        assert snap.n == 12
        assert snap.observed_mean == pytest.approx(5 / 12)
        assert snap.observed_mean == pytest.approx(0.41667, abs=5e-6)

    def test_single_winning_trade(self):
        [snap] = compute_rates([make_trade(0, win=True)], (0, 0), [W])
        assert (snap.n, snap.observed_mean) == (1, 1.0)

    def test_stop_rate_counting(self):
        trades = [make_trade(i, win=i >= 3) for i in range(10)]  # 3 stops
        [snap] = compute_rates(trades, (0, 9), [D])
        assert snap.observed_mean == pytest.approx(0.3)
        assert snap.n == 10

    def test_subwindow(self):
        trades = make_box_b_trades()
        [snap] = compute_rates(trades, (0, 5), [W])
        assert snap.n == 6
        assert snap.window == (0, 5)

    def test_errors(self):
        trades = make_box_b_trades()
        with pytest.raises(ValueError):
            compute_rates([], (0, 0), [W])
        with pytest.raises(ValueError):
            compute_rates(trades, (5, 3), [W])
        with pytest.raises(ValueError):
            compute_rates(trades, (0, 12), [W])

    def test_matches_naive_resummation(self):
        rng = np.random.default_rng(11)
        trades = [
            make_trade(i, win=bool(rng.integers(0, 2)), costs=float(rng.uniform(0, 2)))
            for i in range(30)
        ]
        snaps = compute_rates(trades, (4, 21), [W, P, U, D])
        for snap in snaps:
            naive = sum(trade_outcome(t, snap.metric) for t in trades[4:22]) / 18
            assert snap.observed_mean == pytest.approx(naive, rel=1e-12)

    def test_means_stay_within_bounds(self):
        rng = np.random.default_rng(3)
        trades = [make_trade(i, win=bool(rng.integers(0, 2))) for i in range(25)]
        for snap in compute_rates(trades, (0, 24), [W, P, U, D]):
            assert UNIT_BOUNDS.contains(snap.observed_mean)

    def test_net_profit_never_beats_win_rate(self):
        # with zero discounting and non-negative costs, net profit implies gross profit
        rng = np.random.default_rng(5)
        for _ in range(20):
            trades = [
                make_trade(i, win=bool(rng.integers(0, 2)), costs=float(rng.uniform(0, 3)))
                for i in range(12)
            ]
            w, p = compute_rates(trades, (0, 11), [W, P])
            assert w.observed_mean >= p.observed_mean

    def test_target_and_stop_rates_sum_at_most_one(self):
        rng = np.random.default_rng(9)
        reasons = ["target_hit", "stop_hit", "rule_exit", "manual"]
        for _ in range(20):
            trades = [
                make_trade(i, win=True, exit_reason=reasons[int(rng.integers(0, 4))])
                for i in range(15)
            ]
            u, d = compute_rates(trades, (0, 14), [U, D])
            assert u.observed_mean + d.observed_mean <= 1.0
