"""Regenerate the Monte Carlo and quadrature fixtures used by the test suite.

Run from the repository root:  python tests/fixtures/generate.py
Writes ruin_mc.json and density_cases.json next to this file.  Estimates are
recorded together with their seeds so regressions can re-run them exactly.
"""
from __future__ import annotations

import json
import math
from pathlib import Path

import numpy as np

from lifecover.model import HouseholdParams, MarketParams, calibrate_to_loss_probability, max_loss_probability
from lifecover.policy import ruin_inputs, solve_policy
from lifecover.ruin import prob_ruin_total
from lifecover.simulate import SimConfig, estimate_ruin_probability

HERE = Path(__file__).parent
N_PATHS = 1_000_000
N_RANDOM = 20


def _draw_case(rng: np.random.Generator) -> dict | None:
    r = rng.uniform(0.01, 0.05)
    mkt = MarketParams(r=r, mu=r + rng.uniform(0.01, 0.06), sigma=rng.uniform(0.12, 0.35))
    hh = HouseholdParams(
        lambda_x=rng.uniform(0.01, 0.08), lambda_y=rng.uniform(0.01, 0.08),
        income_x=rng.uniform(0.5, 4.0), income_y=rng.uniform(0.5, 4.0),
        alpha=rng.uniform(0.5, 4.0),
    )
    q = rng.uniform(0.3, 1.0) * max_loss_probability(mkt, hh)
    quote, _ = calibrate_to_loss_probability(mkt, hh, q)
    sol = solve_policy(mkt, hh, quote)
    if sol.d_star <= 0.0:
        return None
    w = rng.uniform(-40.0, 20.0)
    if sol.c0_of_w(w) <= 0.05:
        return None
    return {
        "params": {"r": mkt.r, "mu": mkt.mu, "sigma": mkt.sigma,
                   "lambda_x": hh.lambda_x, "lambda_y": hh.lambda_y,
                   "income_x": hh.income_x, "income_y": hh.income_y, "alpha": hh.alpha},
        "loss_probability": q,
        "wealth": w,
    }


def _record(case: dict, name: str, seed: int) -> dict:
    mkt = MarketParams(case["params"]["r"], case["params"]["mu"], case["params"]["sigma"])
    hh = HouseholdParams(case["params"]["lambda_x"], case["params"]["lambda_y"],
                         case["params"]["income_x"], case["params"]["income_y"],
                         case["params"]["alpha"])
    quote, _ = calibrate_to_loss_probability(mkt, hh, case["loss_probability"])
    sol = solve_policy(mkt, hh, quote)
    report = prob_ruin_total(ruin_inputs(sol, case["wealth"]))
    cfg = SimConfig(n_paths=N_PATHS, seed=seed)
    mc = estimate_ruin_probability(cfg, sol, case["wealth"])
    return {
        "name": name,
        **case,
        "analytic": {"p_before": report.p_before, "p_between": report.p_between,
                     "p_total": report.p_total,
                     "p_jump_to_negative": report.p_jump_to_negative,
                     "case": report.case, "subcase": report.subcase},
        "mc": {"seed": seed, "n_paths": N_PATHS,
               "before": mc.before.estimate, "before_se": mc.before.std_error,
               "between": mc.between.estimate, "between_se": mc.between.std_error,
               "jump_to_negative": mc.jump_to_negative.estimate,
               "total": mc.total.estimate, "total_se": mc.total.std_error},
    }


def make_ruin_fixtures() -> None:
    rng = np.random.default_rng(20250809)
    cases = [{
        "params": {"r": 0.02, "mu": 0.06, "sigma": 0.20, "lambda_x": 0.04, "lambda_y": 0.03,
                   "income_x": 2.0, "income_y": 1.5, "alpha": 2.0},
        "loss_probability": 1.0 - (7.0 / 9.0) ** 3.5,
        "wealth": 10.0,
    }]
    names = ["base_case_w10"]
    while len(cases) < N_RANDOM + 1:
        case = _draw_case(rng)
        if case is not None:
            names.append(f"rand_{len(cases) - 1:02d}")
            cases.append(case)
    out = [_record(case, name, seed=1000 + i)
           for i, (case, name) in enumerate(zip(cases, names))]
    (HERE / "ruin_mc.json").write_text(json.dumps(out, indent=1) + "\n")
    print(f"wrote ruin_mc.json with {len(out)} cases")


def make_density_fixtures() -> None:
    """Random inputs with positive consumption drift, for the density identities."""
    rng = np.random.default_rng(77)
    cases = []
    while len(cases) < 10:
        m = rng.uniform(0.005, 0.06)
        r = rng.uniform(0.01, 0.05)
        alpha = rng.uniform(0.5, 4.0)
        delta = rng.uniform(0.05, 2.0)  # positive drift so the escape mass is < 1
        c0 = rng.uniform(0.2, 5.0)
        lam_x = rng.uniform(0.01, 0.08)
        lam_y = rng.uniform(0.01, 0.08)
        cases.append({"c0": c0, "delta": delta, "m": m, "r": r, "alpha": alpha,
                      "lambda_x": lam_x, "lambda_y": lam_y})
    (HERE / "density_cases.json").write_text(json.dumps(cases, indent=1) + "\n")
    print("wrote density_cases.json")


if __name__ == "__main__":
    make_ruin_fixtures()
    make_density_fixtures()
