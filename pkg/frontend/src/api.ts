/** Thin HTTP client for the planning service.
 *
 * Every number the console displays comes from one of these responses;
 * the client performs no computation beyond JSON decoding.
 */

import {
  CatalogDoc,
  PlanResponse,
  RunRecord,
  ScenarioDraft,
} from "./types.js";

export type FetchLike = (
  input: string,
  init?: { method?: string; headers?: Record<string, string>; body?: string },
) => Promise<{ ok: boolean; status: number; json(): Promise<unknown> }>;

export class ApiError extends Error {
  constructor(
    public readonly status: number,
    public readonly detail: string,
  ) {
    super(`service responded ${status}: ${detail}`);
  }
}

export class ApiClient {
  constructor(
    private readonly baseUrl: string,
    private readonly fetchImpl: FetchLike,
  ) {}

  private async request<T>(path: string, body?: unknown): Promise<T> {
    const response = await this.fetchImpl(this.baseUrl + path, {
      method: body === undefined ? "GET" : "POST",
      headers: { "content-type": "application/json" },
      body: body === undefined ? undefined : JSON.stringify(body),
    });
    const payload = (await response.json()) as Record<string, unknown>;
    if (!response.ok) {
      throw new ApiError(response.status, String(payload["detail"] ?? ""));
    }
    return payload as T;
  }

  getCatalog(): Promise<CatalogDoc> {
    return this.request<CatalogDoc>("/catalog");
  }

  postPlan(draft: ScenarioDraft): Promise<PlanResponse> {
    return this.request<PlanResponse>("/plan", draft);
  }

  getRun(runId: number): Promise<RunRecord> {
    return this.request<RunRecord>(`/runs/${runId}`);
  }

  listRuns(): Promise<{ runs: RunRecord[] }> {
    return this.request<{ runs: RunRecord[] }>("/runs");
  }
}
