// Risk-aversion elicitation: one plain-language question about insuring a
// $10,000 loss that strikes with 1% probability.  The answer pins down the
// household's risk aversion through the API; the wizard only validates the
// obvious range and phrases the outcome.

import { ApiClient, ApiError } from "./api.js";
import { riskAversion } from "./format.js";

export const WIZARD_LOSS_DOLLARS = 10_000;
export const WIZARD_PROBABILITY = 0.01;
export const WIZARD_EXPECTED_LOSS = WIZARD_LOSS_DOLLARS * WIZARD_PROBABILITY;

export const WIZARD_QUESTION =
  "Imagine a 1-in-100 chance of losing $10,000 this year. What is the most " +
  "you would pay, once, for insurance that fully covers that loss?";

export interface WizardOutcome {
  kind: "alpha" | "risk_neutral" | "invalid";
  alpha: number | null;
  message: string;
}

export class ElicitationWizard {
  constructor(private api: ApiClient) {}

  async submit(willingnessToPayDollars: number): Promise<WizardOutcome> {
    if (!Number.isFinite(willingnessToPayDollars)) {
      return { kind: "invalid", alpha: null, message: "Enter a dollar amount." };
    }
    if (willingnessToPayDollars <= WIZARD_EXPECTED_LOSS) {
      // paying at most the expected loss means essentially no risk aversion
      return {
        kind: "risk_neutral",
        alpha: null,
        message:
          `$${WIZARD_EXPECTED_LOSS.toFixed(0)} is the expected loss, so that answer ` +
          "implies essentially zero risk aversion; answer a little above " +
          `$${WIZARD_EXPECTED_LOSS.toFixed(0)} (and below $${WIZARD_LOSS_DOLLARS.toLocaleString("en-US")}).`,
      };
    }
    if (willingnessToPayDollars >= WIZARD_LOSS_DOLLARS) {
      return {
        kind: "invalid",
        alpha: null,
        message:
          `Nobody pays $${WIZARD_LOSS_DOLLARS.toLocaleString("en-US")} or more to insure a ` +
          `$${WIZARD_LOSS_DOLLARS.toLocaleString("en-US")} loss; answer between ` +
          `$${WIZARD_EXPECTED_LOSS.toFixed(0)} and $${WIZARD_LOSS_DOLLARS.toLocaleString("en-US")}.`,
      };
    }
    try {
      const resp = await this.api.elicit(WIZARD_LOSS_DOLLARS, WIZARD_PROBABILITY, willingnessToPayDollars);
      return {
        kind: "alpha",
        alpha: resp.alpha,
        message: `Risk aversion set to ${riskAversion(resp.alpha)}.`,
      };
    } catch (err) {
      const message = err instanceof ApiError ? err.message : String(err);
      return { kind: "invalid", alpha: null, message };
    }
  }
}
