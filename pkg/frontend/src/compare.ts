// Side-by-side deltas between two solved scenarios.  Pure presentation:
// every operand is a number the API returned.

import { SolveResponse } from "./api.js";

export interface ScenarioDeltas {
  d_star_single_dollars: number;
  d_star_continuous_dollars: number;
  single_rate: number;
  continuous_rate: number;
  loss_probability: number;
  dc_x_dollars: number;
  dc_y_dollars: number;
  p_total: number | null;
}

function ruinTotal(resp: SolveResponse): number | null {
  const block = resp.ruin?.single ?? resp.ruin?.continuous;
  return block ? block.p_total : null;
}

export function computeDeltas(baseline: SolveResponse, variant: SolveResponse): ScenarioDeltas {
  const basePolicy = baseline.policy.single!;
  const variantPolicy = variant.policy.single!;
  const baseRuin = ruinTotal(baseline);
  const variantRuin = ruinTotal(variant);
  return {
    d_star_single_dollars: variantPolicy.d_star_dollars - basePolicy.d_star_dollars,
    d_star_continuous_dollars:
      (variant.policy.continuous?.d_star_dollars ?? 0) - (baseline.policy.continuous?.d_star_dollars ?? 0),
    single_rate: (variant.quotes.single?.rate ?? 0) - (baseline.quotes.single?.rate ?? 0),
    continuous_rate: (variant.quotes.continuous?.rate ?? 0) - (baseline.quotes.continuous?.rate ?? 0),
    loss_probability:
      (variant.quotes.single?.loss_probability ?? 0) - (baseline.quotes.single?.loss_probability ?? 0),
    dc_x_dollars: variantPolicy.dc_x_dollars - basePolicy.dc_x_dollars,
    dc_y_dollars: variantPolicy.dc_y_dollars - basePolicy.dc_y_dollars,
    p_total: baseRuin !== null && variantRuin !== null ? variantRuin - baseRuin : null,
  };
}

export function allZero(deltas: ScenarioDeltas, tol = 1e-12): boolean {
  return Object.values(deltas).every((v) => v === null || Math.abs(v) <= tol);
}
