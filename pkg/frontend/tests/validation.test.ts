import { describe, expect, it } from "vitest";

import { validateDraft } from "../src/validation.js";
import { USE_CASE_DRAFT } from "./helpers.js";

describe("scenario draft validation", () => {
  it("accepts the two-location crowd scenario", () => {
    const result = validateDraft(USE_CASE_DRAFT);
    expect(result.valid).toBe(true);
    expect(result.diagnostics).toEqual([]);
  });

  it("flags a zero workload as an expected empty plan, still valid", () => {
    const result = validateDraft({ ...USE_CASE_DRAFT, workload_users: 0 });
    expect(result.valid).toBe(true);
    expect(result.notices.join(" ")).toContain("empty plan expected");
  });

  it("rejects a negative response bound with an inline diagnostic", () => {
    const result = validateDraft({ ...USE_CASE_DRAFT, response_bound_ms: -1 });
    expect(result.valid).toBe(false);
    expect(result.diagnostics[0].field).toBe("response_bound_ms");
  });

  it("rejects negative and fractional workloads", () => {
    expect(validateDraft({ ...USE_CASE_DRAFT, workload_users: -5 }).valid).toBe(false);
    expect(validateDraft({ ...USE_CASE_DRAFT, workload_users: 1.5 }).valid).toBe(false);
  });

  it("requires at least one leg and one modality per leg", () => {
    expect(validateDraft({ ...USE_CASE_DRAFT, legs: [] }).valid).toBe(false);
    const noModality = validateDraft({
      ...USE_CASE_DRAFT,
      legs: [{ ...USE_CASE_DRAFT.legs[0], allowed_modalities: [] }],
    });
    expect(noModality.valid).toBe(false);
    expect(noModality.diagnostics[0].field).toBe("legs[0].allowed_modalities");
  });

  it("rejects negative dwell and distance without coercion", () => {
    const result = validateDraft({
      ...USE_CASE_DRAFT,
      legs: [{ ...USE_CASE_DRAFT.legs[0], dwell_s: -1, distance_from_prev_m: -2 }],
    });
    expect(result.diagnostics.map((d) => d.field)).toEqual([
      "legs[0].dwell_s",
      "legs[0].distance_from_prev_m",
    ]);
  });
});
