"""Stateless HTTP JSON service wrapping the solver for the browser calculator.

Error contract: malformed bodies and unknown/missing fields return 400 with
field-level messages; well-formed bodies that violate model invariants
(e.g. a premium at or above $1 per $1 of benefit) return 422.  Long-running
Monte Carlo work is deliberately not exposed here.
"""
from __future__ import annotations

import numpy as np
from fastapi import FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse
from pydantic import BaseModel, ConfigDict

from .config import parse_config, quotes_from_spec
from .errors import ConfigInvalid, LifecoverError
from .model import UNIT_DOLLARS, elicit_risk_aversion
from .policy import comparative_statics_sweep, ruin_inputs, solve_policy
from .report import SCHEMA_VERSION, solve_report
from .ruin import prob_ruin_total

SWEEP_POINT_CAP = 10_000


class PremiumBody(BaseModel):
    model_config = ConfigDict(extra="forbid")
    scheme: str = "both"
    loading: float | None = None
    loss_probability: float | None = None


class SolveBody(BaseModel):
    """Mirrors the CLI config document, plus optional wealth for ruin output."""

    model_config = ConfigDict(extra="forbid")
    r: float
    mu: float
    sigma: float
    lambda_x: float
    lambda_y: float
    income_x: float
    income_y: float
    alpha: float
    premium: PremiumBody = PremiumBody()
    wealth: float | None = None

    def to_run_config(self):
        raw = self.model_dump(include={"r", "mu", "sigma", "lambda_x", "lambda_y",
                                       "income_x", "income_y", "alpha", "premium"})
        raw["premium"] = {k: v for k, v in raw["premium"].items() if v is not None}
        return parse_config(raw)


class ElicitBody(BaseModel):
    """The insurance-gamble question: dollars at risk, chance of loss, willingness to pay."""

    model_config = ConfigDict(extra="forbid")
    loss_dollars: float
    probability: float
    willingness_to_pay_dollars: float


class SweepBody(SolveBody):
    model_config = ConfigDict(extra="forbid")
    parameter: str = "alpha"
    start: float = 0.5
    stop: float = 4.0
    steps: int = 21


def create_app() -> FastAPI:
    app = FastAPI(title="lifecover", version=SCHEMA_VERSION)
    app.add_middleware(
        CORSMiddleware, allow_origins=["*"], allow_methods=["*"], allow_headers=["*"],
    )

    @app.exception_handler(RequestValidationError)
    async def validation_handler(_: Request, exc: RequestValidationError):
        errors = [{"field": ".".join(str(loc) for loc in err["loc"] if loc != "body"),
                   "message": err["msg"]} for err in exc.errors()]
        return JSONResponse(status_code=400, content={"schema": SCHEMA_VERSION, "errors": errors})

    @app.exception_handler(LifecoverError)
    async def domain_handler(_: Request, exc: LifecoverError):
        body = {"schema": SCHEMA_VERSION, "error": str(exc)}
        if isinstance(exc, ConfigInvalid) and exc.field:
            body["field"] = exc.field
        return JSONResponse(status_code=422, content=body)

    @app.get("/v1/health")
    async def health():
        return {"schema": SCHEMA_VERSION, "status": "ok"}

    @app.post("/v1/solve")
    async def solve(body: SolveBody):
        cfg = body.to_run_config()
        return solve_report(cfg.market, cfg.household, cfg.premium, wealth=body.wealth)

    @app.post("/v1/elicit")
    async def elicit(body: ElicitBody):
        expected = body.probability * body.loss_dollars
        if not (expected < body.willingness_to_pay_dollars < body.loss_dollars):
            raise ConfigInvalid(
                f"willingness to pay must lie strictly between the expected loss "
                f"(${expected:,.2f}) and the full loss (${body.loss_dollars:,.2f})",
                field="willingness_to_pay_dollars")
        alpha = elicit_risk_aversion(
            body.loss_dollars / UNIT_DOLLARS,
            body.probability,
            body.willingness_to_pay_dollars / UNIT_DOLLARS,
        )
        return {
            "schema": SCHEMA_VERSION,
            "alpha": alpha,
            "valid_range_dollars": {"min": expected, "max": body.loss_dollars},
            "inputs": body.model_dump(),
        }

    @app.post("/v1/ruin")
    async def ruin(body: SolveBody):
        if body.wealth is None:
            raise ConfigInvalid("wealth is required for ruin probabilities", field="wealth")
        cfg = body.to_run_config()
        out: dict = {"schema": SCHEMA_VERSION, "wealth_units": body.wealth}
        for scheme, quote in quotes_from_spec(cfg.market, cfg.household, cfg.premium).items():
            sol = solve_policy(cfg.market, cfg.household, quote)
            if sol.d_star > 0.0 and sol.c0_of_w(body.wealth) > 0.0:
                out[scheme.value] = prob_ruin_total(ruin_inputs(sol, body.wealth)).to_dict()
            else:
                out[scheme.value] = None
        return out

    @app.post("/v1/sweep")
    async def sweep(body: SweepBody):
        if body.steps > SWEEP_POINT_CAP:
            raise ConfigInvalid(
                f"sweep capped at {SWEEP_POINT_CAP} grid points, got {body.steps}",
                field="steps")
        if body.steps < 2:
            raise ConfigInvalid("steps must be at least 2", field="steps")
        cfg = body.to_run_config()
        loading = cfg.premium.loading if cfg.premium.loading is not None else 0.0
        table = comparative_statics_sweep(
            cfg.market, cfg.household, body.parameter,
            np.linspace(body.start, body.stop, body.steps), loading=loading)
        return {
            "schema": SCHEMA_VERSION,
            "parameter": table.parameter,
            "flags": table.flags,
            "rows": [{"value": r.value, "d_star": r.d_star, "d_bar_star": r.d_bar_star,
                      "dc_x": r.dc_x, "dc_y": r.dc_y} for r in table.rows],
        }

    return app


app = create_app()
