import { describe, expect, it } from "vitest";

import type { RawResponse } from "../src/api.js";
import { parseWithLiterals } from "../src/json-literals.js";
import type { CurvePayload, ReportPayload } from "../src/types.js";
import {
  bannerState,
  buildCurveView,
  buildReportCards,
  outcomesFromCounts,
  whatIfComparison,
} from "../src/viewmodel.js";

function rawResponse<T>(text: string): RawResponse<T> {
  const parsed = parseWithLiterals(text);
  return { data: parsed.value as T, text, parsed };
}

const REPORT_TEXT =
  '{"strategy_id": "s", "trade_count": 12, "reports": [' +
  '{"metric": "W", "kind": "W", "n": 12, "observed_mean": 0.4166666666666667, ' +
  '"committed_mu": 0.6, "tolerance_t": 0.1833333333333333, "p_exp": 0.446343400625713, ' +
  '"p_tight": 0.4413822274348197, "tier": "Watch", "timestamp": "2024-01-03T13:00:00Z"}, ' +
  '{"metric": "D", "kind": "D", "n": 12, "observed_mean": 0.0, "committed_mu": 0.15, ' +
  '"tolerance_t": 0.0, "p_exp": 1.0, "p_tight": 1.0, "tier": "Normal", ' +
  '"timestamp": "2024-01-03T13:00:00Z"}]}';

describe("buildReportCards", () => {
  const cards = buildReportCards(rawResponse<ReportPayload>(REPORT_TEXT));

  it("copies the wire literals digit-for-digit", () => {
    expect(cards[0].pExp).toBe("0.446343400625713");
    expect(cards[0].pTight).toBe("0.4413822274348197");
    expect(cards[0].observedMean).toBe("0.4166666666666667");
    expect(cards[0].tolerance).toBe("0.1833333333333333");
    expect(cards[0].n).toBe("12");
    // String(1.0) would be "1"; the wire literal must be preserved
    expect(cards[1].pExp).toBe("1.0");
  });

  it("colors cards by tier", () => {
    expect(cards[0].tier).toBe("Watch");
    expect(cards[0].color).toBe("#d29922");
    expect(cards[1].color).toBe("#3fb950");
  });
});

describe("bannerState", () => {
  it("shows the most severe tier across metrics", () => {
    const cards = buildReportCards(rawResponse<ReportPayload>(REPORT_TEXT));
    const banner = bannerState(cards);
    expect(banner.tier).toBe("Watch");
    expect(banner.color).toBe("#d29922");
    expect(banner.message).toContain("more likely than not");
  });
});

describe("whatIfComparison", () => {
  it("pairs live and hypothetical cards by metric and flags changes", () => {
    const live = buildReportCards(rawResponse<ReportPayload>(REPORT_TEXT));
    const hypothetical = buildReportCards(
      rawResponse<ReportPayload>(
        REPORT_TEXT.replace('"tier": "Watch"', '"tier": "SignificantRisk"').replace(
          "0.446343400625713",
          "0.11844183",
        ),
      ),
    );
    const rows = whatIfComparison(live, hypothetical);
    expect(rows).toHaveLength(2);
    expect(rows[0].metric).toBe("W");
    expect(rows[0].currentTier).toBe("Watch");
    expect(rows[0].hypotheticalTier).toBe("SignificantRisk");
    expect(rows[0].hypotheticalPExp).toBe("0.11844183");
    expect(rows[0].changed).toBe(true);
    expect(rows[1].changed).toBe(false);
  });
});

describe("buildCurveView", () => {
  it("maps service points into the viewport and keeps endpoint literals", () => {
    const text =
      '{"mu": 0.6, "t": 0.2, "a": 0, "b": 1, "direction": "shortfall", "points": [' +
      '{"n": 1, "p_exp": 0.9231163463866358, "p_tight": 0.9210113856478458}, ' +
      '{"n": 2, "p_exp": 0.8521437889662113, "p_tight": 0.8482619706797144}, ' +
      '{"n": 3, "p_exp": 0.7866278610665535, "p_tight": 0.7812531684346743}]}';
    const view = buildCurveView(rawResponse<CurvePayload>(text), 400, 200);
    const expPoints = view.expPoints.split(" ");
    expect(expPoints).toHaveLength(3);
    expect(expPoints[0].startsWith("0.0,")).toBe(true);
    expect(expPoints[2].startsWith("400.0,")).toBe(true);
    // higher probability sits higher in the viewport (smaller y)
    const ys = expPoints.map((p) => Number(p.split(",")[1]));
    expect(ys[0]).toBeLessThan(ys[1]);
    expect(view.finalPExp).toBe("0.7866278610665535");
    expect(view.finalPTight).toBe("0.7812531684346743");
    expect(view.maxN).toBe(3);
  });

  it("degrades gracefully with no points", () => {
    const view = buildCurveView(
      rawResponse<CurvePayload>(
        '{"mu": 0.6, "t": 0.2, "a": 0, "b": 1, "direction": "shortfall", "points": []}',
      ),
      400,
      200,
    );
    expect(view.expPoints).toBe("");
  });
});

describe("outcomesFromCounts", () => {
  it("builds the outcome list the what-if route expects", () => {
    expect(outcomesFromCounts(3, 0)).toEqual([0, 0, 0]);
    expect(outcomesFromCounts(1, 2)).toEqual([0, 1, 1]);
    expect(outcomesFromCounts(0, 0)).toEqual([]);
  });
});
