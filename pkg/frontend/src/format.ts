/** Tier colors, severity ordering, and error-field matching. */

import type { TierLabel } from "./types.js";

export const TIER_COLORS: Record<TierLabel, string> = {
  Normal: "#3fb950",
  Watch: "#d29922",
  SignificantRisk: "#f0883e",
  RegimeChange: "#f85149",
};

export const TIER_SEVERITY: Record<TierLabel, number> = {
  Normal: 0,
  Watch: 1,
  SignificantRisk: 2,
  RegimeChange: 3,
};

export const TIER_MESSAGES: Record<TierLabel, string> = {
  Normal: "observed performance is consistent with the committed beliefs",
  Watch: "more likely than not that current beliefs are not completely correct",
  SignificantRisk: "significant risk that the committed beliefs are no longer justified",
  RegimeChange: "almost certain the market regime has changed; halt and re-evaluate",
};

export function mostSevereTier(tiers: TierLabel[]): TierLabel {
  let worst: TierLabel = "Normal";
  for (const tier of tiers) {
    if (TIER_SEVERITY[tier] > TIER_SEVERITY[worst]) worst = tier;
  }
  return worst;
}

/**
 * Pick the form field a service error message complains about, so the UI
 * can highlight it while showing the message verbatim.
 */
export function offendingField(detail: string, candidates: string[]): string | null {
  for (const name of candidates) {
    if (detail.includes(`'${name}'`) || detail.includes(`"${name}"`) || detail.includes(name)) {
      return name;
    }
  }
  return null;
}

export function escapeHtml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}
