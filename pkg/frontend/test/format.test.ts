import { describe, expect, it } from "vitest";

import { benefit, benefitDollars, dollars, money, probability, riskAversion, signedMoney } from "../src/format.js";
import fixtures from "./fixtures.json";

describe("benefit display", () => {
  it("shows the base scenario's single-premium benefit as $2,619,000", () => {
    const d = fixtures.base.policy.single.d_star_dollars;
    expect(benefitDollars(d)).toBe("$2,619,000");
  });

  it("shows the base scenario's continuous benefit as $582,000", () => {
    const d = fixtures.base.policy.continuous.d_star_dollars;
    expect(benefitDollars(d)).toBe("$582,000");
  });

  it("switches to unit display on toggle", () => {
    const pol = fixtures.base.policy.single;
    expect(benefit(pol.d_star_units, pol.d_star_dollars, "units")).toBe("52.38 units");
    expect(benefit(pol.d_star_units, pol.d_star_dollars, "dollars")).toBe("$2,619,000");
  });
});

describe("money and signs", () => {
  it("formats plain dollars with separators", () => {
    expect(dollars(1_250_000)).toBe("$1,250,000");
    expect(dollars(-10_122.04)).toBe("-$10,122");
  });

  it("keeps the sign on consumption jumps", () => {
    const pol = fixtures.base.policy.single;
    expect(signedMoney(pol.dc_x_units, pol.dc_x_dollars, "dollars")).toBe("+$27,378");
    expect(signedMoney(pol.dc_y_units, pol.dc_y_dollars, "dollars")).toBe("-$10,122");
  });

  it("respects the unit toggle through money()", () => {
    expect(money(25, 1_250_000, "units")).toBe("25.000 units");
    expect(money(25, 1_250_000, "dollars")).toBe("$1,250,000");
  });
});

describe("scalar formats", () => {
  it("renders elicited risk aversion to two decimals", () => {
    expect(riskAversion(fixtures.elicitBase.alpha)).toBe("2.00");
  });

  it("renders probabilities at a consumer-friendly scale", () => {
    expect(probability(fixtures.base.ruin.single.p_total)).toBe("0.115%");
    expect(probability(0.585)).toBe("58.500%");
    expect(probability(6.85e-8)).toBe("6.85e-8");
    expect(probability(0)).toBe("0");
  });
});
