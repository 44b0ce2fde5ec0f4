/** Pure view-model helpers; all displayed values come from service docs. */

import { PlanDiff } from "./diff.js";
import { InfeasibilityDoc, PlanDoc } from "./types.js";

export interface ShortfallBar {
  constraint: string;
  shortfall: number;
  /** Bar length relative to the largest shortfall, in [0, 1]. */
  fraction: number;
}

export function infeasibilityBars(doc: InfeasibilityDoc): ShortfallBar[] {
  const max = Math.max(...doc.violated.map((v) => Math.abs(v.shortfall)), 1);
  return doc.violated.map((v) => ({
    constraint: v.constraint,
    shortfall: v.shortfall,
    fraction: Math.abs(v.shortfall) / max,
  }));
}

export function planSummaryLines(plan: PlanDoc): string[] {
  const lines = plan.assignments.map(
    (a) => `${a.count} x ${a.uav} carrying ${a.cloudlet}`,
  );
  lines.push(`total cost ${plan.total_cost}`);
  lines.push(`capacity ${plan.capacity_total} users`);
  lines.push(`mean response ${plan.mean_response_ms} ms`);
  return lines;
}

export function diffLines(diff: PlanDiff): string[] {
  if (diff.empty) {
    return ["no changes"];
  }
  const lines = diff.entries.map((e) => {
    const sign = e.delta > 0 ? "+" : "";
    return `${sign}${e.delta} ${e.uav}/${e.cloudlet} (${e.before} -> ${e.after})`;
  });
  const sign = diff.costDelta > 0 ? "+" : "";
  lines.push(`cost ${sign}${diff.costDelta}`);
  return lines;
}
