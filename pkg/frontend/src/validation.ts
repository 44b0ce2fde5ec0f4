/** Form-level validation mirroring the server's request invariants.
 *
 * The console never silently coerces values: every violation becomes an
 * inline diagnostic keyed by field path, and submission stays disabled
 * until the draft is clean.
 */

import { MODALITIES, ScenarioDraft } from "./types.js";

export interface FieldDiagnostic {
  field: string;
  message: string;
}

export interface ValidationResult {
  valid: boolean;
  diagnostics: FieldDiagnostic[];
  /** Non-blocking notices, e.g. a zero workload yielding an empty plan. */
  notices: string[];
}

export function validateDraft(draft: ScenarioDraft): ValidationResult {
  const diagnostics: FieldDiagnostic[] = [];
  const notices: string[] = [];

  if (!Number.isInteger(draft.workload_users)) {
    diagnostics.push({
      field: "workload_users",
      message: "must be a whole number of users",
    });
  } else if (draft.workload_users < 0) {
    diagnostics.push({ field: "workload_users", message: "must be >= 0" });
  } else if (draft.workload_users === 0) {
    notices.push("empty plan expected: workload is zero");
  }

  if (!(draft.response_bound_ms > 0)) {
    diagnostics.push({
      field: "response_bound_ms",
      message: "must be > 0 milliseconds",
    });
  }

  if (draft.legs.length === 0) {
    diagnostics.push({ field: "legs", message: "at least one leg is required" });
  }
  draft.legs.forEach((leg, i) => {
    const at = `legs[${i}]`;
    if (!leg.location_id) {
      diagnostics.push({ field: `${at}.location_id`, message: "required" });
    }
    if (leg.allowed_modalities.length === 0) {
      diagnostics.push({
        field: `${at}.allowed_modalities`,
        message: "allow at least one modality",
      });
    }
    for (const m of leg.allowed_modalities) {
      if (!MODALITIES.includes(m)) {
        diagnostics.push({
          field: `${at}.allowed_modalities`,
          message: `unknown modality '${m}'`,
        });
      }
    }
    if (!(leg.dwell_s >= 0)) {
      diagnostics.push({ field: `${at}.dwell_s`, message: "must be >= 0" });
    }
    if (!(leg.distance_from_prev_m >= 0)) {
      diagnostics.push({
        field: `${at}.distance_from_prev_m`,
        message: "must be >= 0",
      });
    }
  });

  return { valid: diagnostics.length === 0, diagnostics, notices };
}
