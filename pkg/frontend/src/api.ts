// Typed client for the lifecover v1 JSON API.  The UI performs no domain
// math: every displayed number comes from one of these responses.

export interface QuoteView {
  scheme: string;
  loading: number;
  rate: number;
  loss_probability: number;
}

export interface PolicyView {
  d_star_units: number;
  d_star_dollars: number;
  no_insurance_optimal: boolean;
  ln_k_at_optimum: number;
  k_at_optimum: number;
  delta_units: number | null;
  dc_x_units: number;
  dc_x_dollars: number;
  dc_y_units: number;
  dc_y_dollars: number;
  c0_intercept_units: number;
}

export interface RuinView {
  p_before: number;
  p_between: number;
  p_total: number;
  p_jump_to_negative: number;
  case: string;
  subcase: string;
}

export interface SolveResponse {
  schema: string;
  units: { unit_dollars: number; note: string };
  inputs: Record<string, number>;
  quotes: { single?: QuoteView; continuous?: QuoteView };
  policy: {
    pi_star_units: number;
    pi_star_dollars: number;
    single?: PolicyView;
    continuous?: PolicyView;
  };
  ruin?: {
    wealth_units: number;
    wealth_dollars: number;
    single?: RuinView | null;
    continuous?: RuinView | null;
  };
}

export interface ElicitResponse {
  schema: string;
  alpha: number;
  valid_range_dollars: { min: number; max: number };
}

export interface FieldError {
  field: string;
  message: string;
}

export class ApiError extends Error {
  status: number;
  fieldErrors: FieldError[];

  constructor(status: number, message: string, fieldErrors: FieldError[] = []) {
    super(message);
    this.status = status;
    this.fieldErrors = fieldErrors;
  }
}

export interface ScenarioInputs {
  r: number;
  mu: number;
  sigma: number;
  lambda_x: number;
  lambda_y: number;
  income_x: number;
  income_y: number;
  alpha: number;
  loading: number;
  wealth: number;
}

export function toSolveBody(inputs: ScenarioInputs): object {
  const { loading, wealth, ...market } = inputs;
  return {
    ...market,
    premium: { scheme: "both", loading },
    wealth,
  };
}

type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

export class ApiClient {
  constructor(
    private baseUrl: string = "http://127.0.0.1:8000",
    private fetchFn: FetchLike = (...args) => fetch(...args),
  ) {}

  private async post<T>(path: string, body: object): Promise<T> {
    const resp = await this.fetchFn(`${this.baseUrl}${path}`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(body),
    });
    const doc = await resp.json();
    if (!resp.ok) {
      if (doc.errors) {
        const fields = doc.errors as FieldError[];
        throw new ApiError(resp.status, fields.map((e) => `${e.field}: ${e.message}`).join("; "), fields);
      }
      throw new ApiError(resp.status, doc.error ?? `request failed (${resp.status})`);
    }
    return doc as T;
  }

  solve(inputs: ScenarioInputs): Promise<SolveResponse> {
    return this.post<SolveResponse>("/v1/solve", toSolveBody(inputs));
  }

  elicit(lossDollars: number, probability: number, willingnessToPayDollars: number): Promise<ElicitResponse> {
    return this.post<ElicitResponse>("/v1/elicit", {
      loss_dollars: lossDollars,
      probability,
      willingness_to_pay_dollars: willingnessToPayDollars,
    });
  }
}
