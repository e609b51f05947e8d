"""File-format tests: CSV/JSONL round trips, strict parsing, config schema."""

from __future__ import annotations

import json

import pytest

from regimewatch.metrics import MetricKind
from regimewatch.monitor import SignalTier
from regimewatch.tradelog import (
    CSV_COLUMNS,
    InvalidConfigError,
    ParseError,
    config_from_dict,
    config_to_dict,
    load_config,
    parse_trades,
    trade_from_dict,
    trade_to_dict,
    write_trades,
)

from conftest import BOX_B_CONFIG_DOC, make_box_b_trades, make_trade


class TestRoundTrip:
    @pytest.mark.parametrize("suffix", ["csv", "jsonl"])
    def test_serialize_parse_identity(self, tmp_path, suffix):
        trades = make_box_b_trades()
        path = tmp_path / f"log.{suffix}"
        write_trades(path, trades)
        assert parse_trades(path) == trades

    def test_awkward_floats_survive(self, tmp_path):
        trades = [
            make_trade(0, win=True, costs=0.1),
            make_trade(1, win=False, costs=1.0 / 3.0),
            make_trade(2, win=True, costs=1e-7),
        ]
        for suffix in ("csv", "jsonl"):
            path = tmp_path / f"odd.{suffix}"
            write_trades(path, trades)
            assert parse_trades(path) == trades

    def test_fixture_row_count(self, tmp_path):
        path = tmp_path / "boxb.csv"
        write_trades(path, make_box_b_trades())
        assert len(parse_trades(path)) == 12

    def test_empty_files_are_valid(self, tmp_path):
        empty_csv = tmp_path / "empty.csv"
        empty_csv.write_text("")
        assert parse_trades(empty_csv) == []
        header_only = tmp_path / "header.csv"
        header_only.write_text(",".join(CSV_COLUMNS) + "\n")
        assert parse_trades(header_only) == []
        empty_jsonl = tmp_path / "empty.jsonl"
        empty_jsonl.write_text("")
        assert parse_trades(empty_jsonl) == []


def _row(i: int = 1, **overrides) -> dict:
    row = trade_to_dict(make_trade(i - 1, win=True))
    row.update(overrides)
    return row


def _write_csv(tmp_path, rows):
    lines = [",".join(CSV_COLUMNS)]
    for row in rows:
        lines.append(",".join(str(row[c]) for c in CSV_COLUMNS))
    path = tmp_path / "log.csv"
    path.write_text("\n".join(lines) + "\n")
    return path


class TestStrictParsing:
    def test_header_must_match_exactly(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text("trade_id,entry_time\nT1,2024-01-01T00:00:00Z\n")
        with pytest.raises(ParseError, match="line 1"):
            parse_trades(path)

    def test_time_inversion_names_line(self, tmp_path):
        rows = [_row(1), _row(2, entry_time="2024-03-01T12:00:00Z",
                              exit_time="2024-03-01T11:00:00Z")]
        with pytest.raises(ParseError, match="line 3") as err:
            parse_trades(_write_csv(tmp_path, rows))
        assert "exit_time" in str(err.value)

    def test_bad_number_names_field_and_line(self, tmp_path):
        rows = [_row(1, entry_price="not-a-price")]
        with pytest.raises(ParseError, match="line 2") as err:
            parse_trades(_write_csv(tmp_path, rows))
        assert "entry_price" in str(err.value)

    def test_naive_timestamp_rejected(self, tmp_path):
        rows = [_row(1, exit_time="2024-01-02T16:00:00")]
        with pytest.raises(ParseError, match="exit_time"):
            parse_trades(_write_csv(tmp_path, rows))

    def test_duplicate_id_rejected(self, tmp_path):
        rows = [_row(1), _row(2, trade_id="T001")]
        with pytest.raises(ParseError, match="duplicate trade_id"):
            parse_trades(_write_csv(tmp_path, rows))

    def test_jsonl_unknown_field_rejected(self, tmp_path):
        row = _row(1)
        row["bonus"] = 1
        path = tmp_path / "log.jsonl"
        path.write_text(json.dumps(row) + "\n")
        with pytest.raises(ParseError, match="unknown fields"):
            parse_trades(path)

    def test_jsonl_missing_field_rejected(self, tmp_path):
        row = _row(1)
        del row["quantity"]
        path = tmp_path / "log.jsonl"
        path.write_text(json.dumps(row) + "\n")
        with pytest.raises(ParseError, match="missing fields"):
            parse_trades(path)

    def test_jsonl_invalid_json_names_line(self, tmp_path):
        path = tmp_path / "log.jsonl"
        path.write_text(json.dumps(_row(1)) + "\n{broken\n")
        with pytest.raises(ParseError, match="line 2"):
            parse_trades(path)

    def test_unknown_extension_needs_explicit_format(self, tmp_path):
        path = tmp_path / "log.dat"
        path.write_text("")
        with pytest.raises(ValueError, match="format"):
            parse_trades(path)
        assert parse_trades(path, fmt="jsonl") == []

    def test_offset_timestamps_normalized_to_utc(self):
        row = _row(1, entry_time="2024-01-02T15:00:00+01:00",
                   exit_time="2024-01-02T16:00:00+01:00")
        trade = trade_from_dict(row)
        assert trade.entry_time.isoformat() == "2024-01-02T14:00:00+00:00"


class TestConfigFiles:
    def test_minimal_config(self):
        config = config_from_dict(BOX_B_CONFIG_DOC)
        assert config.strategy_id == "boxb"
        assert config.beliefs[0].committed_mu == 0.6
        assert config.driving_bound == "exponential"

    def test_full_config_round_trip(self):
        doc = {
            "strategy_id": "full.v1",
            "metrics": [
                {"kind": "W", "committed_mu": 0.6},
                {"kind": "D", "committed_mu": 0.15, "adverse_direction": "excess"},
                {
                    "kind": "M",
                    "name": "roe",
                    "committed_mu": 0.01,
                    "adverse_direction": "shortfall",
                    "bounds": [-0.1, 0.1],
                    "rule": "bounded_return",
                    "params": {"compounding": "simple"},
                },
            ],
            "thresholds": [[0.4, "Watch"], [0.2, "SignificantRisk"], [0.05, "RegimeChange"]],
            "window_policy": {"policy": "rolling", "length": 30},
            "driving_bound": "tight",
            "discount_rate": 0.02,
            "seed": 99,
        }
        config = config_from_dict(doc)
        assert config.window_length == 30
        assert config.thresholds[0] == (0.4, SignalTier.WATCH)
        assert config.beliefs[2].spec.kind is MetricKind.CUSTOM
        assert config_from_dict(config_to_dict(config)) == config

    def test_unknown_top_level_field_rejected(self):
        doc = dict(BOX_B_CONFIG_DOC, surprise=1)
        with pytest.raises(InvalidConfigError, match="surprise"):
            config_from_dict(doc)

    def test_unknown_metric_field_rejected(self):
        doc = {"strategy_id": "s", "metrics": [{"kind": "W", "committed_mu": 0.6, "mean": 0.5}]}
        with pytest.raises(InvalidConfigError):
            config_from_dict(doc)

    def test_custom_metric_requires_bounds_and_rule(self):
        base = {"kind": "M", "name": "roe", "committed_mu": 0.0, "adverse_direction": "shortfall"}
        doc = {"strategy_id": "s", "metrics": [dict(base, rule="bounded_return")]}
        with pytest.raises(InvalidConfigError, match="bounds"):
            config_from_dict(doc)
        doc = {"strategy_id": "s", "metrics": [dict(base, bounds=[-0.1, 0.1])]}
        with pytest.raises(InvalidConfigError, match="rule"):
            config_from_dict(doc)

    def test_semantic_errors_surface(self):
        with pytest.raises(InvalidConfigError):
            config_from_dict({"strategy_id": "s",
                              "metrics": [{"kind": "W", "committed_mu": 1.5}]})
        with pytest.raises(InvalidConfigError):
            config_from_dict(dict(BOX_B_CONFIG_DOC,
                                  thresholds=[[0.2, "Watch"], [0.5, "RegimeChange"]]))
        with pytest.raises(InvalidConfigError):
            config_from_dict(dict(BOX_B_CONFIG_DOC, thresholds=[[0.5, "Panic"]]))

    def test_load_config_errors(self, tmp_path):
        missing_comma = tmp_path / "bad.json"
        missing_comma.write_text('{"strategy_id": "s" "metrics": []}')
        with pytest.raises(InvalidConfigError, match="invalid JSON"):
            load_config(missing_comma)
        as_list = tmp_path / "list.json"
        as_list.write_text("[1, 2]")
        with pytest.raises(InvalidConfigError, match="JSON object"):
            load_config(as_list)

    def test_load_config_file(self, tmp_path):
        path = tmp_path / "s.json"
        path.write_text(json.dumps(BOX_B_CONFIG_DOC))
        assert load_config(path).strategy_id == "boxb"
