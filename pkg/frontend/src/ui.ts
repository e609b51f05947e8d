/** DOM rendering: thin templates over the viewmodel data. */

import { escapeHtml } from "./format.js";
import type { BannerState, CurveView, ReportCard, WhatIfRow } from "./viewmodel.js";

export function renderBanner(el: HTMLElement, state: BannerState | null): void {
  if (!state) {
    el.innerHTML = `<div class="banner empty">no completed trades</div>`;
    return;
  }
  el.innerHTML = `
    <div class="banner" style="border-color:${state.color}">
      <span class="tier-chip" style="background:${state.color}">${state.tier}</span>
      <span class="banner-msg">${escapeHtml(state.message)}</span>
    </div>`;
}

export function renderCards(el: HTMLElement, cards: ReportCard[], tradeCount: number): void {
  if (cards.length === 0) {
    el.innerHTML = `<div class="empty-msg">no completed trades</div>`;
    return;
  }
  const html = cards
    .map(
      (card) => `
    <div class="card" style="border-top-color:${card.color}">
      <div class="card-head">
        <span class="card-metric">${escapeHtml(card.metric)}</span>
        <span class="tier-chip" style="background:${card.color}">${card.tier}</span>
      </div>
      <table class="card-table">
        <tr><td>trades N</td><td class="num">${card.n}</td></tr>
        <tr><td>observed X̄</td><td class="num">${card.observedMean}</td></tr>
        <tr><td>committed μ</td><td class="num">${card.committedMu}</td></tr>
        <tr><td>adverse gap t</td><td class="num">${card.tolerance}</td></tr>
        <tr><td>p (exponential)</td><td class="num prob">${card.pExp}</td></tr>
        <tr><td>p (tight)</td><td class="num prob">${card.pTight}</td></tr>
      </table>
    </div>`,
    )
    .join("");
  el.innerHTML = `<div class="cards">${html}</div>
    <div class="muted">${tradeCount} completed trades · thresholds: Watch &lt; 0.50, SignificantRisk &lt; 0.25, RegimeChange &lt; 0.10</div>`;
}

export function renderWhatIfRows(el: HTMLElement, rows: WhatIfRow[]): void {
  if (rows.length === 0) {
    el.innerHTML = "";
    return;
  }
  const body = rows
    .map(
      (row) => `
    <tr class="${row.changed ? "changed" : ""}">
      <td>${escapeHtml(row.metric)}</td>
      <td><span class="tier-chip" style="background:${row.currentColor}">${row.currentTier}</span>
          <span class="num prob">${row.currentPExp}</span></td>
      <td><span class="tier-chip" style="background:${row.hypotheticalColor}">${row.hypotheticalTier}</span>
          <span class="num prob">${row.hypotheticalPExp}</span></td>
    </tr>`,
    )
    .join("");
  el.innerHTML = `
    <table class="whatif-table">
      <thead><tr><th>metric</th><th>live</th><th>hypothetical</th></tr></thead>
      <tbody>${body}</tbody>
    </table>`;
}

export function renderCurve(el: HTMLElement, view: CurveView | null): void {
  if (!view || !view.expPoints) {
    el.innerHTML = `<div class="empty-msg">no curve yet</div>`;
    return;
  }
  el.innerHTML = `
    <svg viewBox="-4 -4 408 208" class="curve-svg">
      <rect x="0" y="0" width="400" height="200" class="curve-bg"/>
      <line x1="0" y1="100" x2="400" y2="100" class="gridline"/>
      <polyline points="${view.expPoints}" class="curve exp"/>
      <polyline points="${view.tightPoints}" class="curve tight"/>
    </svg>
    <div class="legend">
      <span><i class="swatch exp"></i>exponential → <span class="num prob">${view.finalPExp}</span></span>
      <span><i class="swatch tight"></i>tight → <span class="num prob">${view.finalPTight}</span></span>
      <span class="muted">at N = ${view.maxN}</span>
    </div>`;
}

export function showError(el: HTMLElement, message: string): void {
  el.innerHTML = `<div class="error-box">${escapeHtml(message)}</div>`;
}

export function clearError(el: HTMLElement): void {
  el.innerHTML = "";
}

export function highlightField(form: HTMLElement, field: string | null): void {
  form.querySelectorAll(".field-error").forEach((node) => node.classList.remove("field-error"));
  if (field) {
    const input = form.querySelector(`[name="${field}"]`);
    if (input) input.classList.add("field-error");
  }
}
