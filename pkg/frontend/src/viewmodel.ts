/**
 * Pure presentation logic: service responses in, renderable data out.
 *
 * Every number a card displays is the exact literal from the service
 * body (see json-literals). This module never computes a probability.
 */

import type { RawResponse } from "./api.js";
import { literalAt } from "./json-literals.js";
import { TIER_COLORS, TIER_MESSAGES, mostSevereTier } from "./format.js";
import type { CurvePayload, ReportPayload, TierLabel } from "./types.js";

export interface ReportCard {
  metric: string;
  kind: string;
  n: string;
  observedMean: string;
  committedMu: string;
  tolerance: string;
  pExp: string;
  pTight: string;
  tier: TierLabel;
  color: string;
  timestamp: string;
}

export function buildReportCards(response: RawResponse<ReportPayload>): ReportCard[] {
  return response.data.reports.map((report, index) => {
    const at = (field: string, value: number) =>
      literalAt(response.parsed, `/reports/${index}/${field}`, value);
    return {
      metric: report.metric,
      kind: report.kind,
      n: at("n", report.n),
      observedMean: at("observed_mean", report.observed_mean),
      committedMu: at("committed_mu", report.committed_mu),
      tolerance: at("tolerance_t", report.tolerance_t),
      pExp: at("p_exp", report.p_exp),
      pTight: at("p_tight", report.p_tight),
      tier: report.tier,
      color: TIER_COLORS[report.tier],
      timestamp: report.timestamp,
    };
  });
}

export interface BannerState {
  tier: TierLabel;
  color: string;
  message: string;
}

export function bannerState(cards: ReportCard[]): BannerState {
  const tier = mostSevereTier(cards.map((c) => c.tier));
  return { tier, color: TIER_COLORS[tier], message: TIER_MESSAGES[tier] };
}

export interface WhatIfRow {
  metric: string;
  currentTier: TierLabel;
  currentColor: string;
  currentPExp: string;
  hypotheticalTier: TierLabel;
  hypotheticalColor: string;
  hypotheticalPExp: string;
  changed: boolean;
}

/** Side-by-side live-vs-hypothetical rows, matched by metric name. */
export function whatIfComparison(current: ReportCard[], hypothetical: ReportCard[]): WhatIfRow[] {
  const byMetric = new Map(hypothetical.map((card) => [card.metric, card]));
  return current.flatMap((live) => {
    const scratch = byMetric.get(live.metric);
    if (!scratch) return [];
    return [
      {
        metric: live.metric,
        currentTier: live.tier,
        currentColor: live.color,
        currentPExp: live.pExp,
        hypotheticalTier: scratch.tier,
        hypotheticalColor: scratch.color,
        hypotheticalPExp: scratch.pExp,
        changed: live.tier !== scratch.tier,
      },
    ];
  });
}

export interface CurveView {
  /** SVG polyline points, one "x,y" pair per sample size. */
  expPoints: string;
  tightPoints: string;
  /** Literals for the endpoints, shown in the legend. */
  finalPExp: string;
  finalPTight: string;
  maxN: number;
}

/**
 * Map curve values onto an SVG viewport. The geometry is layout; the
 * legend digits are the service's own literals.
 */
export function buildCurveView(
  response: RawResponse<CurvePayload>,
  width: number,
  height: number,
): CurveView {
  const points = response.data.points;
  if (points.length === 0) {
    return { expPoints: "", tightPoints: "", finalPExp: "", finalPTight: "", maxN: 0 };
  }
  const maxN = points[points.length - 1].n;
  const minN = points[0].n;
  const spanN = Math.max(maxN - minN, 1);
  const x = (n: number) => ((n - minN) / spanN) * width;
  const y = (p: number) => (1 - p) * height;
  const toPath = (key: "p_exp" | "p_tight") =>
    points.map((pt) => `${x(pt.n).toFixed(1)},${y(pt[key]).toFixed(1)}`).join(" ");
  const last = points.length - 1;
  return {
    expPoints: toPath("p_exp"),
    tightPoints: toPath("p_tight"),
    finalPExp: literalAt(response.parsed, `/points/${last}/p_exp`, points[last].p_exp),
    finalPTight: literalAt(response.parsed, `/points/${last}/p_tight`, points[last].p_tight),
    maxN,
  };
}

/** Hypothetical win/loss counts -> the outcome list the what-if route expects. */
export function outcomesFromCounts(losses: number, wins: number): number[] {
  return [...Array(losses).fill(0), ...Array(wins).fill(1)];
}
