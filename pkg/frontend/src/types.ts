/** Documents exchanged with the planning service; mirrors its JSON shapes. */

export type Modality = "aerial" | "ground" | "underwater";

export const MODALITIES: Modality[] = ["aerial", "ground", "underwater"];

export interface LegDraft {
  location_id: string;
  allowed_modalities: Modality[];
  dwell_s: number;
  distance_from_prev_m: number;
}

export interface ScenarioDraft {
  workload_users: number;
  response_bound_ms: number;
  legs: LegDraft[];
  response_metric?: "image" | "web";
}

export interface AssignmentDoc {
  uav: string;
  cloudlet: string;
  count: number;
  legs: string[];
  round_trip_s: number;
  endurance_budget_s: number;
}

export interface PlanDoc {
  certificate: "optimal";
  assignments: AssignmentDoc[];
  total_cost: number;
  capacity_total: number;
  mean_response_ms: number;
  slack: Record<string, unknown>;
  run_id: number;
}

export interface ViolationDoc {
  constraint: string;
  shortfall: number;
}

export interface InfeasibilityDoc {
  certificate: "infeasible";
  violated: ViolationDoc[];
}

export type PlanResponse = PlanDoc | InfeasibilityDoc;

export function isInfeasible(doc: PlanResponse): doc is InfeasibilityDoc {
  return doc.certificate === "infeasible";
}

export interface RunRecord {
  run_id: number;
  kind: string;
  input_digest: string;
  inputs: Record<string, unknown>;
  result: Record<string, unknown>;
  toolkit_version: string;
}

export interface CatalogDoc {
  schema_version: number;
  devices: unknown[];
  cloudlets: unknown[];
  uavs: { id: string; modality: Modality }[];
  fleet_bound: Record<string, number>;
}
