/** Operator session: scenario draft, plan history, and replanning.
 *
 * The session never computes plan numbers itself.  Plans are requested
 * from the service, history is a list of run ids resolved back through
 * GET /runs/{id}, and only the ids are persisted locally so the history
 * survives a page reload.
 */

import { ApiClient } from "./api.js";
import { diffPlans, PlanDiff } from "./diff.js";
import { validateDraft, ValidationResult } from "./validation.js";
import {
  InfeasibilityDoc,
  isInfeasible,
  PlanDoc,
  ScenarioDraft,
} from "./types.js";

export interface StorageLike {
  getItem(key: string): string | null;
  setItem(key: string, value: string): void;
}

const HISTORY_KEY = "geese-console/plan-history";

export interface ReplanOutcome {
  kind: "plan";
  plan: PlanDoc;
  diff: PlanDiff | null;
}

export interface InfeasibleOutcome {
  kind: "infeasible";
  infeasibility: InfeasibilityDoc;
}

export type SubmitOutcome = ReplanOutcome | InfeasibleOutcome;

export class ConsoleSession {
  draft: ScenarioDraft;
  history: PlanDoc[] = [];
  private inFlight = false;

  constructor(
    private readonly api: ApiClient,
    private readonly storage: StorageLike,
    initialDraft: ScenarioDraft,
  ) {
    this.draft = initialDraft;
  }

  validate(): ValidationResult {
    return validateDraft(this.draft);
  }

  get submitEnabled(): boolean {
    return this.validate().valid && !this.inFlight;
  }

  get latestPlan(): PlanDoc | null {
    return this.history.length ? this.history[this.history.length - 1] : null;
  }

  /** Submit the current draft; history grows only on an optimal plan. */
  async submit(): Promise<SubmitOutcome> {
    if (!this.validate().valid) {
      throw new Error("draft is invalid; submission is disabled");
    }
    if (this.inFlight) {
      throw new Error("a plan request is already in flight");
    }
    this.inFlight = true;
    try {
      const response = await this.api.postPlan(this.draft);
      if (isInfeasible(response)) {
        return { kind: "infeasible", infeasibility: response };
      }
      const prior = this.latestPlan;
      this.history.push(response);
      this.persistHistory();
      return {
        kind: "plan",
        plan: response,
        diff: prior ? diffPlans(prior, response) : null,
      };
    } finally {
      this.inFlight = false;
    }
  }

  /** Update the legs (the crowd moved) and request a re-plan. */
  async replanOnMove(legs: ScenarioDraft["legs"]): Promise<SubmitOutcome> {
    if (!this.latestPlan) {
      throw new Error("no prior plan to re-plan from");
    }
    this.draft = { ...this.draft, legs };
    return this.submit();
  }

  private persistHistory(): void {
    const ids = this.history.map((p) => p.run_id);
    this.storage.setItem(HISTORY_KEY, JSON.stringify(ids));
  }

  /** Rebuild the history from persisted run ids via the service. */
  async restoreHistory(): Promise<void> {
    const raw = this.storage.getItem(HISTORY_KEY);
    if (!raw) {
      return;
    }
    const ids = (JSON.parse(raw) as number[]).slice().sort((a, b) => a - b);
    const plans: PlanDoc[] = [];
    for (const id of ids) {
      const record = await this.api.getRun(id);
      if (record.kind !== "plan") {
        continue;
      }
      const doc = record.result as unknown as PlanDoc;
      plans.push({ ...doc, run_id: id });
    }
    this.history = plans;
  }
}
