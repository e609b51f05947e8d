/** Typed client for the monitoring service. All displayed numbers originate here. */

import { parseWithLiterals, type ParsedJson } from "./json-literals.js";
import type {
  CurvePayload,
  ReportPayload,
  StrategyConfigWire,
  TradeWire,
  WhatIfRequest,
} from "./types.js";

export class ServiceError extends Error {
  constructor(
    public readonly status: number,
    public readonly detail: string,
  ) {
    super(detail);
    this.name = "ServiceError";
  }
}

/** A parsed response that keeps the raw body and exact number literals. */
export interface RawResponse<T> {
  data: T;
  text: string;
  parsed: ParsedJson;
}

async function request<T>(
  baseUrl: string,
  method: string,
  path: string,
  body?: unknown,
): Promise<RawResponse<T>> {
  const response = await fetch(baseUrl + path, {
    method,
    headers: body === undefined ? undefined : { "content-type": "application/json" },
    body: body === undefined ? undefined : JSON.stringify(body),
  });
  const text = await response.text();
  if (!response.ok) {
    let detail = text;
    try {
      const doc = JSON.parse(text) as { detail?: unknown };
      if (typeof doc.detail === "string") detail = doc.detail;
    } catch {
      // non-JSON error body: surface it verbatim
    }
    throw new ServiceError(response.status, detail);
  }
  const parsed = parseWithLiterals(text);
  return { data: parsed.value as T, text, parsed };
}

export class ApiClient {
  constructor(private readonly baseUrl: string = "") {}

  health(): Promise<RawResponse<{ status: string }>> {
    return request(this.baseUrl, "GET", "/healthz");
  }

  createStrategy(config: StrategyConfigWire): Promise<RawResponse<{ strategy_id: string }>> {
    return request(this.baseUrl, "POST", "/strategies", config);
  }

  postTrade(strategyId: string, trade: TradeWire): Promise<RawResponse<ReportPayload>> {
    return request(this.baseUrl, "POST", `/strategies/${strategyId}/trades`, trade);
  }

  getReport(strategyId: string): Promise<RawResponse<ReportPayload>> {
    return request(this.baseUrl, "GET", `/strategies/${strategyId}/report`);
  }

  whatIf(strategyId: string, body: WhatIfRequest): Promise<RawResponse<ReportPayload>> {
    return request(this.baseUrl, "POST", `/strategies/${strategyId}/whatif`, body);
  }

  boundsCurve(params: {
    mu: number;
    t: number;
    a?: number;
    b?: number;
    n_min?: number;
    n_max?: number;
    direction?: string;
  }): Promise<RawResponse<CurvePayload>> {
    const query = new URLSearchParams();
    for (const [key, value] of Object.entries(params)) {
      if (value !== undefined) query.set(key, String(value));
    }
    return request(this.baseUrl, "GET", `/bounds?${query.toString()}`);
  }
}
