/** Wire types mirroring the monitoring service's JSON responses. */

export type TierLabel = "Normal" | "Watch" | "SignificantRisk" | "RegimeChange";

export type MetricKind = "W" | "P" | "U" | "D" | "M";

export type AdverseDirection = "shortfall" | "excess";

export interface BoundReportWire {
  metric: string;
  kind: MetricKind;
  n: number;
  observed_mean: number;
  committed_mu: number;
  tolerance_t: number;
  p_exp: number;
  p_tight: number;
  tier: TierLabel;
  timestamp: string;
}

export interface ReportPayload {
  strategy_id: string;
  trade_count: number;
  reports: BoundReportWire[];
}

export interface TradeWire {
  trade_id: string;
  entry_time: string;
  exit_time: string;
  side: "long" | "short";
  entry_price: number;
  exit_price: number;
  quantity: number;
  transaction_costs: number;
  exit_reason: "target_hit" | "stop_hit" | "rule_exit" | "manual";
}

export interface MetricConfigWire {
  kind: MetricKind;
  name?: string;
  committed_mu: number;
  adverse_direction?: AdverseDirection;
  bounds?: [number, number];
  rule?: string;
  params?: Record<string, unknown>;
}

export interface StrategyConfigWire {
  strategy_id: string;
  metrics: MetricConfigWire[];
  thresholds?: [number, string][];
}

export interface WhatIfRequest {
  outcomes?: Record<string, number[]>;
  mu?: Record<string, number>;
}

export interface CurvePointWire {
  n: number;
  p_exp: number;
  p_tight: number;
}

export interface CurvePayload {
  mu: number;
  t: number;
  a: number;
  b: number;
  direction: AdverseDirection;
  points: CurvePointWire[];
}
