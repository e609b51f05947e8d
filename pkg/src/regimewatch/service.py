"""JSON-over-HTTP service exposing strategies, trade submission, reports, and what-ifs.

State is an in-memory registry of monitors backed by append-only
JSON-lines journals, one per strategy. Reports are never stored: after a
restart, replaying the journals reproduces them exactly. Updates to one
strategy are serialized through a per-strategy lock; different
strategies never share state.

This is a single-node operator tool: no auth, loopback bind by default.
"""

from __future__ import annotations

import json
import os
import threading
from dataclasses import dataclass, field
from pathlib import Path

from fastapi import FastAPI, HTTPException, Request
from fastapi.responses import JSONResponse, RedirectResponse
from fastapi.staticfiles import StaticFiles

from .bounds import Bounds, DomainError, exp_bound, normalize, shortfall_tight_bound, tight_bound
from .metrics import BoundednessError, TradeValidationError
from .monitor import (
    BoundReport,
    ConfigError,
    DuplicateTradeError,
    NoTradesError,
    RegimeMonitor,
)
from .tradelog import (
    InvalidConfigError,
    ParseError,
    config_from_dict,
    config_to_dict,
    load_config,
    trade_from_dict,
    trade_to_dict,
)

__all__ = ["create_app", "DEFAULT_DATA_DIR"]

DEFAULT_DATA_DIR = "regimewatch-data"


@dataclass
class _Entry:
    monitor: RegimeMonitor
    journal_path: Path
    lock: threading.Lock = field(default_factory=threading.Lock)


def _reports_payload(strategy_id: str, trade_count: int, reports: list[BoundReport]) -> dict:
    return {
        "strategy_id": strategy_id,
        "trade_count": trade_count,
        "reports": [r.as_dict() for r in reports],
    }


async def _json_body(request: Request) -> dict:
    raw = await request.body()
    try:
        doc = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise HTTPException(status_code=400, detail=f"malformed JSON: {exc.msg}")
    if not isinstance(doc, dict):
        raise HTTPException(status_code=400, detail="request body must be a JSON object")
    return doc


def create_app(data_dir: str | Path | None = None, ui_dir: str | Path | None = None) -> FastAPI:
    """Build the service; loads any strategies already persisted under data_dir."""
    data_path = Path(data_dir or os.environ.get("REGIMEWATCH_DATA_DIR", DEFAULT_DATA_DIR))
    data_path.mkdir(parents=True, exist_ok=True)

    app = FastAPI(title="regimewatch", version="0.1.0")
    registry: dict[str, _Entry] = {}
    registry_lock = threading.Lock()

    def _journal_path(strategy_id: str) -> Path:
        return data_path / f"{strategy_id}.trades.jsonl"

    def _config_path(strategy_id: str) -> Path:
        return data_path / f"{strategy_id}.config.json"

    def _load_existing() -> None:
        for config_file in sorted(data_path.glob("*.config.json")):
            config = load_config(config_file)
            journal = _journal_path(config.strategy_id)
            trades = []
            if journal.exists():
                for line_no, raw in enumerate(journal.read_text(encoding="utf-8").splitlines(), 1):
                    if raw.strip():
                        trades.append(trade_from_dict(json.loads(raw), line_no))
            registry[config.strategy_id] = _Entry(
                monitor=RegimeMonitor(config, trades), journal_path=journal
            )

    _load_existing()

    def _entry(strategy_id: str) -> _Entry:
        entry = registry.get(strategy_id)
        if entry is None:
            raise HTTPException(status_code=404, detail=f"unknown strategy {strategy_id!r}")
        return entry

    @app.get("/healthz")
    async def healthz() -> dict:
        return {"status": "ok", "strategies": len(registry)}

    @app.post("/strategies", status_code=201)
    async def create_strategy(request: Request) -> dict:
        doc = await _json_body(request)
        try:
            config = config_from_dict(doc)
        except InvalidConfigError as exc:
            raise HTTPException(status_code=422, detail=str(exc))
        with registry_lock:
            if config.strategy_id in registry:
                raise HTTPException(
                    status_code=409, detail=f"strategy {config.strategy_id!r} already exists"
                )
            _config_path(config.strategy_id).write_text(
                json.dumps(config_to_dict(config), indent=2) + "\n", encoding="utf-8"
            )
            registry[config.strategy_id] = _Entry(
                monitor=RegimeMonitor(config), journal_path=_journal_path(config.strategy_id)
            )
        return {"strategy_id": config.strategy_id}

    @app.post("/strategies/{strategy_id}/trades")
    async def post_trade(strategy_id: str, request: Request) -> dict:
        entry = _entry(strategy_id)
        doc = await _json_body(request)
        try:
            trade = trade_from_dict(doc)
        except (ParseError, TradeValidationError) as exc:
            raise HTTPException(status_code=422, detail=str(exc))
        with entry.lock:
            try:
                reports = entry.monitor.update(trade)
            except DuplicateTradeError as exc:
                raise HTTPException(status_code=409, detail=str(exc))
            except (BoundednessError, TradeValidationError, DomainError) as exc:
                raise HTTPException(status_code=422, detail=str(exc))
            with open(entry.journal_path, "a", encoding="utf-8") as fh:
                fh.write(json.dumps(trade_to_dict(trade)) + "\n")
                fh.flush()
                os.fsync(fh.fileno())
            count = entry.monitor.trade_count
        return _reports_payload(strategy_id, count, reports)

    @app.get("/strategies/{strategy_id}/report")
    async def get_report(strategy_id: str) -> dict:
        entry = _entry(strategy_id)
        try:
            reports = entry.monitor.evaluate()
        except NoTradesError:
            return _reports_payload(strategy_id, 0, [])
        return _reports_payload(strategy_id, entry.monitor.trade_count, reports)

    @app.post("/strategies/{strategy_id}/whatif")
    async def what_if(strategy_id: str, request: Request) -> dict:
        entry = _entry(strategy_id)
        doc = await _json_body(request)
        unknown = set(doc) - {"outcomes", "mu"}
        if unknown:
            raise HTTPException(status_code=422, detail=f"unknown what-if fields {sorted(unknown)}")
        outcomes = doc.get("outcomes") or {}
        mu = doc.get("mu") or {}
        if not isinstance(outcomes, dict) or not isinstance(mu, dict):
            raise HTTPException(
                status_code=422, detail="'outcomes' and 'mu' must map metric names to values"
            )
        try:
            reports = entry.monitor.what_if(extra_outcomes=outcomes, alternative_mu=mu)
        except KeyError as exc:
            raise HTTPException(status_code=422, detail=str(exc.args[0]))
        except NoTradesError as exc:
            raise HTTPException(status_code=409, detail=str(exc))
        except (BoundednessError, ConfigError, DomainError, ValueError) as exc:
            raise HTTPException(status_code=422, detail=str(exc))
        return _reports_payload(strategy_id, entry.monitor.trade_count, reports)

    @app.get("/bounds")
    async def bounds_curve(
        mu: float,
        t: float,
        a: float = 0.0,
        b: float = 1.0,
        n_min: int = 1,
        n_max: int = 100,
        direction: str = "shortfall",
    ) -> dict:
        """Exponential and product-form bound values versus N at fixed tolerance.

        Serves the dashboard's curve view so clients never do bound math.
        """
        if not 1 <= n_min <= n_max or n_max - n_min > 10_000:
            raise HTTPException(status_code=422, detail="need 1 <= n_min <= n_max (span <= 10000)")
        if direction not in ("shortfall", "excess"):
            raise HTTPException(status_code=422, detail="direction must be 'shortfall' or 'excess'")
        tight = shortfall_tight_bound if direction == "shortfall" else tight_bound
        try:
            pair = normalize(mu, t, Bounds(a, b))
            points = [
                {
                    "n": n,
                    "p_exp": float(exp_bound(pair.t_dot, n)),
                    "p_tight": float(tight(pair, n)),
                }
                for n in range(n_min, n_max + 1)
            ]
        except DomainError as exc:
            raise HTTPException(status_code=422, detail=str(exc))
        return {"mu": mu, "t": t, "a": a, "b": b, "direction": direction, "points": points}

    @app.exception_handler(Exception)
    async def unhandled(request: Request, exc: Exception):  # pragma: no cover
        if isinstance(exc, HTTPException):
            raise exc
        return JSONResponse(status_code=500, content={"detail": f"internal error: {exc}"})

    ui_path = Path(ui_dir) if ui_dir else None
    if ui_path is None:
        env_ui = os.environ.get("REGIMEWATCH_UI_DIR")
        if env_ui:
            ui_path = Path(env_ui)
    if ui_path is not None and ui_path.is_dir():
        app.mount("/ui", StaticFiles(directory=ui_path, html=True), name="ui")

        @app.get("/")
        async def index() -> RedirectResponse:
            return RedirectResponse(url="/ui/")

    return app
