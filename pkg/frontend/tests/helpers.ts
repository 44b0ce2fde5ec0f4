import { FetchLike } from "../src/api.js";
import { PlanDoc, RunRecord, ScenarioDraft } from "../src/types.js";
import { StorageLike } from "../src/session.js";

export const USE_CASE_DRAFT: ScenarioDraft = {
  workload_users: 1500,
  response_bound_ms: 2000,
  legs: [
    {
      location_id: "A",
      allowed_modalities: ["aerial", "ground", "underwater"],
      dwell_s: 60,
      distance_from_prev_m: 200,
    },
    {
      location_id: "B",
      allowed_modalities: ["aerial", "ground"],
      dwell_s: 60,
      distance_from_prev_m: 200,
    },
  ],
};

export function planDoc(overrides: Partial<PlanDoc> = {}): PlanDoc {
  return {
    certificate: "optimal",
    assignments: [
      {
        uav: "romeo",
        cloudlet: "cat4_type3",
        count: 2,
        legs: ["A", "B"],
        round_trip_s: 520,
        endurance_budget_s: 6000,
      },
    ],
    total_cost: 10,
    capacity_total: 1760,
    mean_response_ms: 1930,
    slack: {},
    run_id: 1,
    ...overrides,
  };
}

export interface MockCall {
  url: string;
  method: string;
  body?: unknown;
}

/** A scripted fetch: every service interaction is recorded and stubbed. */
export class MockService {
  calls: MockCall[] = [];
  private planQueue: unknown[] = [];
  runs = new Map<number, RunRecord>();

  queuePlanResponse(doc: unknown): void {
    this.planQueue.push(doc);
  }

  storeRun(id: number, result: Record<string, unknown>): void {
    this.runs.set(id, {
      run_id: id,
      kind: "plan",
      input_digest: "x",
      inputs: {},
      result,
      toolkit_version: "0.1.0",
    });
  }

  fetch: FetchLike = (url, init) => {
    const method = init?.method ?? "GET";
    const body = init?.body ? JSON.parse(init.body) : undefined;
    this.calls.push({ url, method, body });
    const respond = (status: number, payload: unknown) =>
      Promise.resolve({
        ok: status < 400,
        status,
        json: () => Promise.resolve(payload),
      });
    if (url.endsWith("/plan") && method === "POST") {
      const next = this.planQueue.shift();
      if (next === undefined) {
        return respond(500, { detail: "no scripted plan response" });
      }
      return respond(200, next);
    }
    const runMatch = url.match(/\/runs\/(\d+)$/);
    if (runMatch) {
      const record = this.runs.get(Number(runMatch[1]));
      return record
        ? respond(200, record)
        : respond(404, { detail: `no run ${runMatch[1]}` });
    }
    return respond(404, { detail: `unscripted ${method} ${url}` });
  };
}

export class MemoryStorage implements StorageLike {
  private data = new Map<string, string>();

  getItem(key: string): string | null {
    return this.data.has(key) ? (this.data.get(key) as string) : null;
  }

  setItem(key: string, value: string): void {
    this.data.set(key, value);
  }
}
