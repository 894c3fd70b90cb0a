// Scenario store: holds the current inputs and the last solve response,
// coalesces rapid input changes into one request, and guarantees the
// displayed response always matches the displayed inputs (stale responses
// are discarded by sequence number; at most one request is in flight).

import { ApiError, ScenarioInputs, SolveResponse } from "./api.js";

export type UnitMode = "dollars" | "units";

export interface ScenarioState {
  inputs: ScenarioInputs;
  response: SolveResponse | null;
  dirty: boolean;
  pending: boolean;
  unitMode: UnitMode;
  error: string | null;
  fieldErrors: Record<string, string>;
}

export const DEFAULT_INPUTS: ScenarioInputs = {
  r: 0.02,
  mu: 0.06,
  sigma: 0.2,
  lambda_x: 0.04,
  lambda_y: 0.03,
  income_x: 2.0,
  income_y: 1.5,
  alpha: 2.0,
  loading: 0.0,
  wealth: 10.0,
};

// client-side sanity rules; anything subtler is the server's call
export function validateInput(name: keyof ScenarioInputs, value: number, inputs: ScenarioInputs): string | null {
  if (!Number.isFinite(value)) return "must be a number";
  switch (name) {
    case "income_x":
    case "income_y":
      return value < 0 ? "income cannot be negative" : null;
    case "loading":
      return value < 0 ? "loading cannot be negative" : null;
    case "r":
      return value <= 0 ? "riskless rate must be positive" : null;
    case "sigma":
      return value <= 0 ? "volatility must be positive" : null;
    case "mu":
      return value <= inputs.r ? "risky drift must exceed the riskless rate" : null;
    case "lambda_x":
    case "lambda_y":
      return value <= 0 ? "mortality hazard must be positive" : null;
    case "alpha":
      return value <= 0 ? "risk aversion must be positive" : null;
    default:
      return null;
  }
}

type Cancel = () => void;
type Schedule = (fn: () => void, ms: number) => Cancel;

const defaultSchedule: Schedule = (fn, ms) => {
  const id = setTimeout(fn, ms);
  return () => clearTimeout(id);
};

export class ScenarioStore {
  state: ScenarioState;
  private listeners: Array<(s: ScenarioState) => void> = [];
  private seq = 0;
  private cancelPending: Cancel | null = null;

  constructor(
    private send: (inputs: ScenarioInputs) => Promise<SolveResponse>,
    private debounceMs = 150,
    private schedule: Schedule = defaultSchedule,
  ) {
    this.state = {
      inputs: { ...DEFAULT_INPUTS },
      response: null,
      dirty: true,
      pending: false,
      unitMode: "dollars",
      error: null,
      fieldErrors: {},
    };
  }

  subscribe(listener: (s: ScenarioState) => void): void {
    this.listeners.push(listener);
  }

  private notify(): void {
    for (const listener of this.listeners) listener(this.state);
  }

  setUnitMode(mode: UnitMode): void {
    this.state.unitMode = mode;
    this.notify();
  }

  setInput(name: keyof ScenarioInputs, value: number): void {
    const problem = validateInput(name, value, this.state.inputs);
    if (problem) {
      // inline error; the stale request (if any) is cancelled and nothing is sent
      this.state.fieldErrors = { ...this.state.fieldErrors, [name]: problem };
      this.cancelPending?.();
      this.cancelPending = null;
      this.notify();
      return;
    }
    const { [name]: _dropped, ...rest } = this.state.fieldErrors;
    this.state.fieldErrors = rest;
    this.state.inputs = { ...this.state.inputs, [name]: value };
    this.state.dirty = true;
    this.scheduleSolve();
    this.notify();
  }

  /** Coalesce input changes; only the last scheduled request survives. */
  private scheduleSolve(): void {
    this.cancelPending?.();
    this.cancelPending = this.schedule(() => {
      this.cancelPending = null;
      void this.solveNow();
    }, this.debounceMs);
  }

  async solveNow(): Promise<void> {
    const mySeq = ++this.seq;
    const inputs = { ...this.state.inputs };
    this.state.pending = true;
    this.notify();
    try {
      const response = await this.send(inputs);
      if (mySeq !== this.seq) return; // superseded: keep the newer request's result
      this.state.response = response;
      this.state.dirty = false;
      this.state.error = null;
      this.state.fieldErrors = {};
    } catch (err) {
      if (mySeq !== this.seq) return;
      if (err instanceof ApiError) {
        this.state.error = err.message;
        for (const fe of err.fieldErrors) {
          this.state.fieldErrors = { ...this.state.fieldErrors, [fe.field]: fe.message };
        }
      } else {
        this.state.error = String(err);
      }
    } finally {
      if (mySeq === this.seq) {
        this.state.pending = false;
        this.notify();
      }
    }
  }
}
