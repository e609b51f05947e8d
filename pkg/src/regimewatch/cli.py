"""Command-line interface: one-off bound math, batch replay, what-ifs, simulation, serving.

Subcommands:

- ``bounds``    one-off bound values for a given (mu, t or xbar, N, [a, b])
- ``monitor``   replay a trade log against a strategy config
- ``whatif``    hypothetical appended outcomes / alternative committed means
- ``simulate``  run the Monte Carlo verification suite
- ``serve``     start the HTTP service

All validation failures exit nonzero with a message on stderr. The
``REGIMEWATCH_CONFIG`` environment variable supplies a default
``--config`` path.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from .bounds import (
    Bounds,
    DomainError,
    NormalizedPair,
    exp_bound,
    normalize,
    optimal_h,
    shortfall_tight_bound,
    tight_bound,
    two_sided_exp_bound,
)
from .monitor import BoundReport, RegimeMonitor
from .tradelog import load_config, parse_trades

CONFIG_ENV = "REGIMEWATCH_CONFIG"


def _fail(message: str) -> int:
    print(f"error: {message}", file=sys.stderr)
    return 1


def _report_table(reports: list[BoundReport], prefix: str = "") -> str:
    lines = [
        f"{prefix}{'metric':<10} {'n':>4} {'observed':>9} {'mu':>7} {'t':>8} "
        f"{'p_exp':>8} {'p_tight':>8} tier"
    ]
    for r in reports:
        lines.append(
            f"{prefix}{r.metric:<10} {r.n:>4} {r.observed_mean:>9.5f} {r.committed_mu:>7.4f} "
            f"{r.tolerance_t:>8.5f} {r.p_exp:>8.5f} {r.p_tight:>8.5f} {r.tier.label}"
        )
    return "\n".join(lines)


def _add_config_arg(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--config",
        default=os.environ.get(CONFIG_ENV),
        help=f"strategy config JSON (default: ${CONFIG_ENV})",
    )


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="regimewatch",
        description="Sequential regime-change monitor for bounded trading metrics.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_bounds = sub.add_parser("bounds", help="one-off bound values")
    p_bounds.add_argument("--mu", type=float, help="committed mean (enables the tight bound)")
    p_bounds.add_argument("--xbar", type=float, help="observed mean; t = adverse gap from mu")
    p_bounds.add_argument("--t", type=float, help="tolerance, if given directly")
    p_bounds.add_argument("--n", type=int, required=True, help="number of completed trades")
    p_bounds.add_argument("--a", type=float, default=0.0, help="lower bound (default 0)")
    p_bounds.add_argument("--b", type=float, default=1.0, help="upper bound (default 1)")
    p_bounds.add_argument(
        "--direction",
        choices=["shortfall", "excess"],
        default="shortfall",
        help="adverse direction used with --xbar and for the tight bound",
    )
    p_bounds.add_argument("--json", action="store_true", help="machine-readable output")

    p_monitor = sub.add_parser("monitor", help="replay a trade log against a config")
    _add_config_arg(p_monitor)
    p_monitor.add_argument("--trades", required=True, help="trade log (.csv or .jsonl)")
    p_monitor.add_argument("--json", action="store_true", help="machine-readable output")
    p_monitor.add_argument(
        "--final-only", action="store_true", help="print only the final reports"
    )

    p_whatif = sub.add_parser("whatif", help="hypothetical outcomes / alternative mu")
    _add_config_arg(p_whatif)
    p_whatif.add_argument("--trades", required=True, help="trade log (.csv or .jsonl)")
    p_whatif.add_argument(
        "--outcomes",
        action="append",
        default=[],
        metavar="METRIC=V1,V2,...",
        help="append hypothetical outcomes to a metric (repeatable)",
    )
    p_whatif.add_argument(
        "--mu",
        action="append",
        default=[],
        metavar="METRIC=MU",
        help="override a committed mean (repeatable)",
    )
    p_whatif.add_argument("--json", action="store_true", help="machine-readable output")

    p_sim = sub.add_parser("simulate", help="Monte Carlo verification suite")
    p_sim.add_argument("--reps", type=int, default=100_000, help="replications per grid point")
    p_sim.add_argument("--seed", type=int, default=2024, help="master seed")
    p_sim.add_argument("--csv", help="write the per-point CSV report here")

    p_serve = sub.add_parser("serve", help="start the HTTP service")
    p_serve.add_argument("--host", default="127.0.0.1")
    p_serve.add_argument("--port", type=int, default=int(os.environ.get("REGIMEWATCH_PORT", "8000")))
    p_serve.add_argument("--data-dir", default=None, help="journal/config directory")
    p_serve.add_argument("--ui-dir", default=None, help="static dashboard directory")

    return parser


def _cmd_bounds(args: argparse.Namespace) -> int:
    try:
        bounds = Bounds(args.a, args.b)
        if args.t is not None:
            if args.xbar is not None:
                return _fail("give either --t or --xbar, not both")
            t = args.t
        elif args.xbar is not None:
            if args.mu is None:
                return _fail("--xbar requires --mu")
            gap = args.mu - args.xbar if args.direction == "shortfall" else args.xbar - args.mu
            t = max(0.0, gap)
        else:
            return _fail("give a tolerance via --t, or --mu with --xbar")

        if args.mu is not None:
            pair = normalize(args.mu, t, bounds)
            t_dot = pair.t_dot
        else:
            pair = None
            t_dot = t / bounds.width

        result: dict = {
            "n": args.n,
            "t": t,
            "t_dot": t_dot,
            "p_exp": float(exp_bound(t_dot, args.n)),
            "p_exp_two_sided": float(two_sided_exp_bound(t_dot, args.n)),
        }
        if pair is not None:
            result["mu"] = args.mu
            result["mu_dot"] = float(pair.mu_dot)
            if args.direction == "shortfall":
                result["p_tight"] = float(shortfall_tight_bound(pair, args.n))
                tight_pair = NormalizedPair(1.0 - pair.mu_dot, pair.t_dot)
            else:
                result["p_tight"] = float(tight_bound(pair, args.n))
                tight_pair = pair
            if 0.0 < tight_pair.mu_dot < 1.0 and 0.0 < tight_pair.t_dot < 1.0 - tight_pair.mu_dot:
                result["h0"] = optimal_h(tight_pair)
    except DomainError as exc:
        return _fail(str(exc))

    if args.json:
        print(json.dumps(result))
    else:
        print(f"t = {result['t']:.5f} (normalized {result['t_dot']:.5f}), n = {args.n}")
        print(f"p_exp       = {result['p_exp']:.5f}")
        print(f"p_two_sided = {result['p_exp_two_sided']:.5f}")
        if "p_tight" in result:
            print(f"p_tight     = {result['p_tight']:.5f}")
    return 0


def _load_monitor(args: argparse.Namespace):
    if not args.config:
        raise ValueError(f"no config given and ${CONFIG_ENV} not set")
    config = load_config(args.config)
    trades = parse_trades(args.trades)
    return config, trades


def _cmd_monitor(args: argparse.Namespace) -> int:
    try:
        config, trades = _load_monitor(args)
        monitor = RegimeMonitor(config)
        updates = []
        for trade in trades:
            reports = monitor.update(trade)
            updates.append((trade.trade_id, reports))
    except ValueError as exc:
        return _fail(str(exc))
    if not updates:
        return _fail("trade log is empty: nothing to monitor")

    if args.json:
        payload = {
            "strategy_id": config.strategy_id,
            "updates": [
                {"trade_id": tid, "reports": [r.as_dict() for r in reports]}
                for tid, reports in updates
            ],
            "final": [r.as_dict() for r in updates[-1][1]],
        }
        print(json.dumps(payload))
        return 0

    if not args.final_only:
        for tid, reports in updates:
            print(f"after trade {tid}:")
            print(_report_table(reports, prefix="  "))
    print(f"final ({len(trades)} trades):")
    print(_report_table(updates[-1][1], prefix="  "))
    return 0


def _parse_kv(pairs: list[str], what: str) -> dict[str, str]:
    out = {}
    for pair in pairs:
        if "=" not in pair:
            raise ValueError(f"{what} must look like METRIC=..., got {pair!r}")
        key, _, value = pair.partition("=")
        out[key] = value
    return out


def _cmd_whatif(args: argparse.Namespace) -> int:
    try:
        config, trades = _load_monitor(args)
        monitor = RegimeMonitor(config, trades)
        outcomes = {
            k: [float(x) for x in v.split(",") if x != ""]
            for k, v in _parse_kv(args.outcomes, "--outcomes").items()
        }
        mu = {k: float(v) for k, v in _parse_kv(args.mu, "--mu").items()}
        current = monitor.evaluate()
        hypothetical = monitor.what_if(extra_outcomes=outcomes, alternative_mu=mu)
    except (ValueError, KeyError) as exc:
        return _fail(str(exc))

    if args.json:
        print(
            json.dumps(
                {
                    "strategy_id": config.strategy_id,
                    "current": [r.as_dict() for r in current],
                    "hypothetical": [r.as_dict() for r in hypothetical],
                }
            )
        )
        return 0
    print("current:")
    print(_report_table(current, prefix="  "))
    print("hypothetical:")
    print(_report_table(hypothetical, prefix="  "))
    return 0


def _cmd_simulate(args: argparse.Namespace) -> int:
    from .mc import run_exceedance_suite, summarize_results, write_exceedance_csv

    try:
        results = run_exceedance_suite(reps=args.reps, master_seed=args.seed)
    except ValueError as exc:
        return _fail(str(exc))
    if args.csv:
        write_exceedance_csv(results, args.csv)
        print(f"wrote {args.csv}")
    print(summarize_results(results))
    return 0 if all(r.passed for r in results) else 1


def _cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    from .service import create_app

    ui_dir = args.ui_dir
    if ui_dir is None:
        candidate = Path(__file__).resolve().parents[2] / "frontend" / "dist"
        if candidate.is_dir():
            ui_dir = candidate
    app = create_app(data_dir=args.data_dir, ui_dir=ui_dir)
    uvicorn.run(app, host=args.host, port=args.port, log_level="info")
    return 0


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    handler = {
        "bounds": _cmd_bounds,
        "monitor": _cmd_monitor,
        "whatif": _cmd_whatif,
        "simulate": _cmd_simulate,
        "serve": _cmd_serve,
    }[args.command]
    return handler(args)


if __name__ == "__main__":
    sys.exit(main())
