/** Browser entry point: wires the session to a minimal form UI. */

import { ApiClient } from "./api.js";
import { diffLines, infeasibilityBars, planSummaryLines } from "./render.js";
import { ConsoleSession } from "./session.js";
import { LegDraft, Modality, MODALITIES, ScenarioDraft } from "./types.js";

const DEFAULT_DRAFT: ScenarioDraft = {
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

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (text !== undefined) {
    node.textContent = text;
  }
  return node;
}

function legEditor(leg: LegDraft, onChange: () => void): HTMLElement {
  const box = el("fieldset");
  box.appendChild(el("legend", `leg ${leg.location_id}`));
  for (const m of MODALITIES) {
    const label = el("label", m);
    const check = el("input");
    check.type = "checkbox";
    check.checked = leg.allowed_modalities.includes(m);
    check.addEventListener("change", () => {
      leg.allowed_modalities = check.checked
        ? [...leg.allowed_modalities, m as Modality]
        : leg.allowed_modalities.filter((x) => x !== m);
      onChange();
    });
    label.prepend(check);
    box.appendChild(label);
  }
  return box;
}

export function mount(root: HTMLElement, baseUrl: string): ConsoleSession {
  const session = new ConsoleSession(
    new ApiClient(baseUrl, (input, init) => fetch(input, init)),
    window.localStorage,
    structuredClone(DEFAULT_DRAFT),
  );

  const form = el("form");
  const diagnosticsBox = el("ul");
  const resultBox = el("pre");
  const historyBox = el("ol");
  const submit = el("button", "request plan");
  submit.type = "submit";

  const workload = el("input");
  workload.type = "number";
  workload.value = String(session.draft.workload_users);
  const bound = el("input");
  bound.type = "number";
  bound.value = String(session.draft.response_bound_ms);

  const refresh = () => {
    const result = session.validate();
    submit.disabled = !result.valid;
    diagnosticsBox.replaceChildren(
      ...result.diagnostics.map((d) => el("li", `${d.field}: ${d.message}`)),
      ...result.notices.map((n) => el("li", `note: ${n}`)),
    );
  };

  workload.addEventListener("input", () => {
    session.draft.workload_users = Number(workload.value);
    refresh();
  });
  bound.addEventListener("input", () => {
    session.draft.response_bound_ms = Number(bound.value);
    refresh();
  });

  form.addEventListener("submit", (event) => {
    event.preventDefault();
    void session.submit().then((outcome) => {
      if (outcome.kind === "infeasible") {
        const bars = infeasibilityBars(outcome.infeasibility)
          .map((b) => `${b.constraint}: ${"#".repeat(Math.round(b.fraction * 20))} ${b.shortfall}`)
          .join("\n");
        resultBox.textContent = `infeasible\n${bars}`;
        return;
      }
      const lines = planSummaryLines(outcome.plan);
      if (outcome.diff) {
        lines.push("--- changes vs previous plan ---", ...diffLines(outcome.diff));
      }
      resultBox.textContent = lines.join("\n");
      historyBox.appendChild(el("li", `run ${outcome.plan.run_id}`));
    });
  });

  form.append(
    el("label", "workload users"), workload,
    el("label", "response bound (ms)"), bound,
    ...session.draft.legs.map((leg) => legEditor(leg, refresh)),
    submit,
  );
  root.append(form, diagnosticsBox, resultBox, el("h2", "plan history"), historyBox);

  void session.restoreHistory().then(() => {
    historyBox.replaceChildren(
      ...session.history.map((p) => el("li", `run ${p.run_id}`)),
    );
  });
  refresh();
  return session;
}
