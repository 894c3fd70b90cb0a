"""Single source of truth for the solve report served by both the CLI and the HTTP API."""
from __future__ import annotations

from .config import PremiumSpec, RunConfig, quotes_from_spec
from .model import UNIT_DOLLARS, HouseholdParams, MarketParams, PremiumQuote, Scheme
from .policy import PolicySolution, ruin_inputs, solve_policy
from .ruin import prob_ruin_total

SCHEMA_VERSION = "v1"
UNITS_NOTE = f"monetary *_units values are consumption units of ${UNIT_DOLLARS:,.0f}"


def _quote_dict(quote: PremiumQuote) -> dict:
    return {
        "scheme": quote.scheme.value,
        "loading": quote.loading,
        "rate": quote.rate,
        "loss_probability": quote.loss_probability,
    }


def _policy_dict(sol: PolicySolution) -> dict:
    return {
        "d_star_units": sol.d_star,
        "d_star_dollars": sol.d_star * UNIT_DOLLARS,
        "no_insurance_optimal": sol.d_star <= 0.0,
        "ln_k_at_optimum": sol.coeff.ln_k,
        "k_at_optimum": sol.coeff.k,
        "delta_units": sol.delta,
        "dc_x_units": sol.dc_x,
        "dc_x_dollars": sol.dc_x * UNIT_DOLLARS,
        "dc_y_units": sol.dc_y,
        "dc_y_dollars": sol.dc_y * UNIT_DOLLARS,
        "c0_intercept_units": sol.c0_intercept,
    }


def solve_report(market: MarketParams, household: HouseholdParams, premium: PremiumSpec,
                 wealth: float | None = None) -> dict:
    """Solve the requested scheme(s) and assemble the canonical report document."""
    quotes = quotes_from_spec(market, household, premium)
    solutions = {scheme: solve_policy(market, household, quote)
                 for scheme, quote in quotes.items()}

    any_sol = next(iter(solutions.values()))
    report = {
        "schema": SCHEMA_VERSION,
        "units": {"unit_dollars": UNIT_DOLLARS, "note": UNITS_NOTE},
        "inputs": {
            "r": market.r, "mu": market.mu, "sigma": market.sigma, "m": market.m,
            "lambda_x": household.lambda_x, "lambda_y": household.lambda_y,
            "income_x": household.income_x, "income_y": household.income_y,
            "alpha": household.alpha,
        },
        "quotes": {scheme.value: _quote_dict(q) for scheme, q in quotes.items()},
        "policy": {
            "pi_star_units": any_sol.pi_star,
            "pi_star_dollars": any_sol.pi_star * UNIT_DOLLARS,
            **{scheme.value: _policy_dict(sol) for scheme, sol in solutions.items()},
        },
    }
    if wealth is not None:
        ruin_block: dict = {"wealth_units": wealth, "wealth_dollars": wealth * UNIT_DOLLARS}
        for scheme, sol in solutions.items():
            if sol.d_star > 0.0 and sol.c0_of_w(wealth) > 0.0:
                ruin_block[scheme.value] = prob_ruin_total(ruin_inputs(sol, wealth)).to_dict()
            else:
                ruin_block[scheme.value] = None
        report["ruin"] = ruin_block
    return report


def solve_report_from_config(cfg: RunConfig, wealth: float | None = None) -> dict:
    return solve_report(cfg.market, cfg.household, cfg.premium, wealth)


def scheme_solutions(cfg: RunConfig) -> dict[Scheme, PolicySolution]:
    """Solved policies for every scheme the config requests."""
    quotes = quotes_from_spec(cfg.market, cfg.household, cfg.premium)
    return {scheme: solve_policy(cfg.market, cfg.household, quote)
            for scheme, quote in quotes.items()}
