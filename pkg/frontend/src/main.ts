// DOM wiring for the what-if calculator.  All domain numbers come from the
// API via the scenario store; this file only moves them into the page.

import { ApiClient, ScenarioInputs, SolveResponse } from "./api.js";
import { allZero, computeDeltas } from "./compare.js";
import { benefit, dollars, money, percentDelta, probability, rate, riskAversion, signedMoney } from "./format.js";
import { ScenarioState, ScenarioStore } from "./state.js";
import { ElicitationWizard, WIZARD_QUESTION } from "./wizard.js";

const API_BASE = (window as { LIFECOVER_API_BASE?: string }).LIFECOVER_API_BASE ?? "http://127.0.0.1:8000";

const FIELDS: Array<{ name: keyof ScenarioInputs; label: string; min: number; max: number; step: number }> = [
  { name: "income_x", label: "Income of earner x ($50k units/yr)", min: 0, max: 6, step: 0.1 },
  { name: "income_y", label: "Income of earner y ($50k units/yr)", min: 0, max: 6, step: 0.1 },
  { name: "lambda_x", label: "Mortality hazard of x (per yr)", min: 0.005, max: 0.2, step: 0.005 },
  { name: "lambda_y", label: "Mortality hazard of y (per yr)", min: 0.005, max: 0.2, step: 0.005 },
  { name: "alpha", label: "Risk aversion", min: 0.1, max: 8, step: 0.1 },
  { name: "loading", label: "Premium loading", min: 0, max: 0.25, step: 0.01 },
  { name: "wealth", label: "Current wealth ($50k units)", min: -50, max: 100, step: 1 },
  { name: "r", label: "Riskless rate", min: 0.005, max: 0.08, step: 0.005 },
  { name: "mu", label: "Risky drift", min: 0.01, max: 0.15, step: 0.005 },
  { name: "sigma", label: "Risky volatility", min: 0.05, max: 0.6, step: 0.05 },
];

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing element ${id}`);
  return node as T;
}

function inputRow(field: (typeof FIELDS)[number], store: ScenarioStore): HTMLElement {
  const row = document.createElement("label");
  row.className = "field";
  const caption = document.createElement("span");
  caption.textContent = field.label;
  const slider = document.createElement("input");
  slider.type = "range";
  slider.min = String(field.min);
  slider.max = String(field.max);
  slider.step = String(field.step);
  const box = document.createElement("input");
  box.type = "number";
  box.step = String(field.step);
  const error = document.createElement("em");
  error.className = "field-error";

  const push = (value: number) => store.setInput(field.name, value);
  slider.addEventListener("input", () => {
    box.value = slider.value;
    push(Number(slider.value));
  });
  box.addEventListener("input", () => push(Number(box.value)));

  store.subscribe((state) => {
    const value = state.inputs[field.name];
    if (document.activeElement !== box) box.value = String(value);
    if (document.activeElement !== slider) slider.value = String(value);
    error.textContent = state.fieldErrors[field.name] ?? "";
  });
  row.append(caption, slider, box, error);
  return row;
}

function renderResults(state: ScenarioState): void {
  const panel = el<HTMLDivElement>("results");
  const resp = state.response;
  panel.classList.toggle("stale", state.dirty || state.pending);
  el<HTMLDivElement>("request-error").textContent = state.error ?? "";
  if (!resp) return;
  const mode = state.unitMode;
  const single = resp.policy.single!;
  const continuous = resp.policy.continuous!;

  el<HTMLElement>("d-single").textContent = benefit(single.d_star_units, single.d_star_dollars, mode);
  el<HTMLElement>("d-continuous").textContent = benefit(continuous.d_star_units, continuous.d_star_dollars, mode);
  el<HTMLElement>("banner").hidden = !single.no_insurance_optimal;

  el<HTMLElement>("quote-single").textContent =
    `${rate(resp.quotes.single!.rate)} per $1 of benefit (loss probability ` +
    `${probability(resp.quotes.single!.loss_probability)})`;
  el<HTMLElement>("quote-continuous").textContent =
    `${rate(resp.quotes.continuous!.rate)} per $1 per year`;

  el<HTMLElement>("jump-x").textContent = signedMoney(single.dc_x_units, single.dc_x_dollars, mode) + "/yr";
  el<HTMLElement>("jump-y").textContent = signedMoney(single.dc_y_units, single.dc_y_dollars, mode) + "/yr";
  el<HTMLElement>("pi-star").textContent = money(resp.policy.pi_star_units, resp.policy.pi_star_dollars, mode);

  const ruin = resp.ruin?.single ?? resp.ruin?.continuous;
  el<HTMLElement>("ruin").textContent = ruin
    ? `${probability(ruin.p_total)} (case ${ruin.case}/${ruin.subcase})`
    : "n/a (no policy bought or consumption already at zero)";
}

function renderCompare(baseline: SolveResponse | null, state: ScenarioState): void {
  const section = el<HTMLDivElement>("compare");
  if (!baseline || !state.response) {
    section.hidden = true;
    return;
  }
  section.hidden = false;
  const deltas = computeDeltas(baseline, state.response);
  el<HTMLElement>("delta-single").textContent = signedMoney(0, deltas.d_star_single_dollars, "dollars");
  el<HTMLElement>("delta-continuous").textContent = signedMoney(0, deltas.d_star_continuous_dollars, "dollars");
  el<HTMLElement>("delta-jump-x").textContent = signedMoney(0, deltas.dc_x_dollars, "dollars") + "/yr";
  el<HTMLElement>("delta-loss").textContent = percentDelta(deltas.loss_probability);
  el<HTMLElement>("delta-ruin").textContent =
    deltas.p_total === null ? "n/a" : deltas.p_total.toExponential(2);
  el<HTMLElement>("delta-note").textContent = allZero(deltas) ? "scenarios are identical" : "";
}

function main(): void {
  const api = new ApiClient(API_BASE);
  const store = new ScenarioStore((inputs) => api.solve(inputs));
  let baseline: SolveResponse | null = null;

  const form = el<HTMLDivElement>("inputs");
  for (const field of FIELDS) form.append(inputRow(field, store));

  store.subscribe((state) => {
    renderResults(state);
    renderCompare(baseline, state);
  });

  el<HTMLSelectElement>("unit-mode").addEventListener("change", (ev) => {
    store.setUnitMode((ev.target as HTMLSelectElement).value as "dollars" | "units");
  });

  el<HTMLButtonElement>("save-baseline").addEventListener("click", () => {
    baseline = store.state.response;
    renderCompare(baseline, store.state);
  });

  // elicitation wizard
  el<HTMLParagraphElement>("wizard-question").textContent = WIZARD_QUESTION;
  const wizard = new ElicitationWizard(api);
  el<HTMLButtonElement>("wizard-submit").addEventListener("click", async () => {
    const value = Number(el<HTMLInputElement>("wizard-answer").value.replace(/[$,]/g, ""));
    const outcome = await wizard.submit(value);
    el<HTMLElement>("wizard-message").textContent = outcome.message;
    if (outcome.kind === "alpha" && outcome.alpha !== null) {
      store.setInput("alpha", outcome.alpha);
      el<HTMLElement>("wizard-alpha").textContent = riskAversion(outcome.alpha);
    }
  });

  el<HTMLElement>("unit-note").textContent = `1 unit = ${dollars(50_000)}`;
  void store.solveNow();
}

main();
