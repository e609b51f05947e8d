/** Bootstrap: wire the forms to the service and keep the views fresh. */

import { ApiClient, ServiceError, type RawResponse } from "./api.js";
import { offendingField } from "./format.js";
import type {
  AdverseDirection,
  MetricConfigWire,
  MetricKind,
  ReportPayload,
  StrategyConfigWire,
  TradeWire,
} from "./types.js";
import {
  bannerState,
  buildCurveView,
  buildReportCards,
  outcomesFromCounts,
  whatIfComparison,
  type ReportCard,
} from "./viewmodel.js";
import {
  clearError,
  highlightField,
  renderBanner,
  renderCards,
  renderCurve,
  renderWhatIfRows,
  showError,
} from "./ui.js";

const api = new ApiClient("");

interface AppState {
  strategyId: string | null;
  metrics: MetricConfigWire[];
  cards: ReportCard[];
  tradeSeq: number;
}

const state: AppState = { strategyId: null, metrics: [], cards: [], tradeSeq: 1 };

const $ = <T extends HTMLElement>(id: string): T => {
  const el = document.getElementById(id);
  if (!el) throw new Error(`missing element #${id}`);
  return el as T;
};

const TRADE_FIELDS = [
  "trade_id",
  "entry_time",
  "exit_time",
  "side",
  "entry_price",
  "exit_price",
  "quantity",
  "transaction_costs",
  "exit_reason",
];

function defaultDirection(kind: MetricKind): AdverseDirection {
  return kind === "D" ? "excess" : "shortfall";
}

async function refreshReport(): Promise<void> {
  if (!state.strategyId) return;
  const response = await api.getReport(state.strategyId);
  applyReport(response);
}

function applyReport(response: RawResponse<ReportPayload>): void {
  state.cards = buildReportCards(response);
  renderCards($("cards"), state.cards, response.data.trade_count);
  renderBanner($("banner"), state.cards.length ? bannerState(state.cards) : null);
  refreshWhatIfSelectors();
}

function refreshWhatIfSelectors(): void {
  const select = $<HTMLSelectElement>("whatif-metric");
  const current = select.value;
  select.innerHTML = state.metrics
    .map((m) => {
      const name = m.name ?? m.kind;
      return `<option value="${name}" ${name === current ? "selected" : ""}>${name}</option>`;
    })
    .join("");
  const curveSelect = $<HTMLSelectElement>("curve-metric");
  curveSelect.innerHTML = select.innerHTML;
  if (curveSelect.value === "" && state.metrics.length) {
    curveSelect.value = state.metrics[0].name ?? state.metrics[0].kind;
  }
}

function metricRowsFromForm(): MetricConfigWire[] {
  const rows = Array.from(document.querySelectorAll<HTMLElement>("#metric-rows .metric-row"));
  return rows.map((row) => {
    const kind = row.querySelector<HTMLSelectElement>("[name=kind]")!.value as MetricKind;
    const mu = Number(row.querySelector<HTMLInputElement>("[name=committed_mu]")!.value);
    return { kind, committed_mu: mu, adverse_direction: defaultDirection(kind) };
  });
}

function addMetricRow(kind: MetricKind = "W", mu = 0.6): void {
  const container = $("metric-rows");
  const row = document.createElement("div");
  row.className = "metric-row";
  row.innerHTML = `
    <select name="kind">
      <option value="W">W · win rate</option>
      <option value="P">P · net-profit rate</option>
      <option value="U">U · target-exit rate</option>
      <option value="D">D · stop-loss rate</option>
    </select>
    <label>committed μ <input name="committed_mu" type="number" min="0" max="1" step="0.01" value="${mu}"></label>
    <button type="button" class="remove-metric" title="remove">×</button>`;
  row.querySelector<HTMLSelectElement>("[name=kind]")!.value = kind;
  row.querySelector<HTMLButtonElement>(".remove-metric")!.addEventListener("click", () => {
    row.remove();
  });
  container.appendChild(row);
}

function nowLocalISO(offsetMinutes = 0): string {
  const when = new Date(Date.now() + offsetMinutes * 60_000);
  return when.toISOString().slice(0, 16);
}

function resetTradeForm(): void {
  const form = $<HTMLFormElement>("trade-form");
  (form.elements.namedItem("trade_id") as HTMLInputElement).value =
    `T${String(state.tradeSeq).padStart(3, "0")}`;
  (form.elements.namedItem("entry_time") as HTMLInputElement).value = nowLocalISO(-60);
  (form.elements.namedItem("exit_time") as HTMLInputElement).value = nowLocalISO();
}

function tradeFromForm(form: HTMLFormElement): TradeWire {
  const get = (name: string) => (form.elements.namedItem(name) as HTMLInputElement).value;
  const toUtc = (value: string) => {
    const parsed = new Date(value);
    if (Number.isNaN(parsed.getTime())) return value; // let the service reject it verbatim
    return parsed.toISOString().replace(/\.\d{3}Z$/, "Z");
  };
  return {
    trade_id: get("trade_id"),
    entry_time: toUtc(get("entry_time")),
    exit_time: toUtc(get("exit_time")),
    side: get("side") as TradeWire["side"],
    entry_price: Number(get("entry_price")),
    exit_price: Number(get("exit_price")),
    quantity: Number(get("quantity")),
    transaction_costs: Number(get("transaction_costs")),
    exit_reason: get("exit_reason") as TradeWire["exit_reason"],
  };
}

async function onCreateStrategy(event: Event): Promise<void> {
  event.preventDefault();
  const form = $<HTMLFormElement>("setup-form");
  const errorBox = $("setup-error");
  clearError(errorBox);
  const config: StrategyConfigWire = {
    strategy_id: (form.elements.namedItem("strategy_id") as HTMLInputElement).value,
    metrics: metricRowsFromForm(),
  };
  try {
    await api.createStrategy(config);
    state.strategyId = config.strategy_id;
    state.metrics = config.metrics;
    state.tradeSeq = 1;
    $("setup-panel").classList.add("collapsed");
    $("live-panels").classList.remove("hidden");
    $("strategy-title").textContent = config.strategy_id;
    resetTradeForm();
    await refreshReport();
  } catch (err) {
    if (err instanceof ServiceError) {
      showError(errorBox, err.detail);
      highlightField(form, offendingField(err.detail, ["strategy_id", "committed_mu", "metrics"]));
    } else throw err;
  }
}

async function onPostTrade(event: Event): Promise<void> {
  event.preventDefault();
  if (!state.strategyId) return;
  const form = $<HTMLFormElement>("trade-form");
  const errorBox = $("trade-error");
  clearError(errorBox);
  highlightField(form, null);
  try {
    const response = await api.postTrade(state.strategyId, tradeFromForm(form));
    state.tradeSeq += 1;
    resetTradeForm();
    applyReport(response);
  } catch (err) {
    if (err instanceof ServiceError) {
      showError(errorBox, err.detail);
      highlightField(form, offendingField(err.detail, TRADE_FIELDS));
    } else throw err;
  }
}

async function onWhatIfInput(): Promise<void> {
  if (!state.strategyId || state.cards.length === 0) return;
  const errorBox = $("whatif-error");
  clearError(errorBox);
  const metric = $<HTMLSelectElement>("whatif-metric").value;
  const losses = Number($<HTMLInputElement>("whatif-losses").value);
  const wins = Number($<HTMLInputElement>("whatif-wins").value);
  const useAltMu = $<HTMLInputElement>("whatif-alt-mu-on").checked;
  const altMu = Number($<HTMLInputElement>("whatif-alt-mu").value);
  $("whatif-losses-label").textContent = String(losses);
  $("whatif-wins-label").textContent = String(wins);
  $("whatif-alt-mu-label").textContent = altMu.toFixed(2);

  const body: { outcomes?: Record<string, number[]>; mu?: Record<string, number> } = {};
  const outcomes = outcomesFromCounts(losses, wins);
  if (outcomes.length) body.outcomes = { [metric]: outcomes };
  if (useAltMu) body.mu = { [metric]: altMu };
  try {
    const response = await api.whatIf(state.strategyId, body);
    renderWhatIfRows($("whatif-rows"), whatIfComparison(state.cards, buildReportCards(response)));
  } catch (err) {
    if (err instanceof ServiceError) showError(errorBox, err.detail);
    else throw err;
  }
}

async function onCurveRefresh(): Promise<void> {
  const metricName = $<HTMLSelectElement>("curve-metric").value;
  const card = state.cards.find((c) => c.metric === metricName);
  const config = state.metrics.find((m) => (m.name ?? m.kind) === metricName);
  const errorBox = $("curve-error");
  clearError(errorBox);
  if (!card || !config) {
    renderCurve($("curve"), null);
    return;
  }
  try {
    const response = await api.boundsCurve({
      mu: Number(card.committedMu),
      t: Number(card.tolerance),
      n_max: Math.max(50, 2 * Number(card.n)),
      direction: config.adverse_direction ?? defaultDirection(config.kind),
    });
    renderCurve($("curve"), buildCurveView(response, 400, 200));
  } catch (err) {
    if (err instanceof ServiceError) showError(errorBox, err.detail);
    else throw err;
  }
}

function init(): void {
  addMetricRow("W", 0.6);
  $("add-metric").addEventListener("click", () => addMetricRow("D", 0.15));
  $("setup-form").addEventListener("submit", (e) => void onCreateStrategy(e));
  $("trade-form").addEventListener("submit", (e) => void onPostTrade(e));
  for (const id of ["whatif-metric", "whatif-losses", "whatif-wins", "whatif-alt-mu-on", "whatif-alt-mu"]) {
    $(id).addEventListener("input", () => void onWhatIfInput());
  }
  $("curve-refresh").addEventListener("click", () => void onCurveRefresh());
  $("curve-metric").addEventListener("change", () => void onCurveRefresh());
  renderBanner($("banner"), null);
}

document.addEventListener("DOMContentLoaded", init);
