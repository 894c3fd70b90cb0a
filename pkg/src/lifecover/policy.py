"""Optimal death benefits, consumption/investment policies, and optimality verification.

The optimal death benefit is wealth-independent under exponential utility:

    D*    = max{ (1/(alpha r)) [ ln S - ln(r H / (1 - H)) - H / (1 - H) ], 0 }   (single premium H)
    Dbar* = max{ (1/(alpha (h + r))) [ ln S - ln h - h / r ], 0 }                (continuous rate h)

with S = lambda_x e^{alpha I_x + lambda_x / r} + lambda_y e^{alpha I_y + lambda_y / r}.
"""
from __future__ import annotations

import io
import math
from dataclasses import dataclass, field

import numpy as np

from .coeffs import ValueCoefficient, merton_consumption, merton_investment, solve_k, solve_k_bar
from .errors import InteriorOptimumRequired, InvalidParameter, PremiumNotViable, VerificationFailed
from .model import HouseholdParams, MarketParams, PremiumQuote, Scheme
from .ruin import RuinInputs

_DRIFT_FORM_TOL = 1e-10


def _log_income_hazard_sum(mkt: MarketParams, hh: HouseholdParams, alpha: float | None = None) -> float:
    """ln(lambda_x e^{alpha I_x + lambda_x/r} + lambda_y e^{alpha I_y + lambda_y/r})."""
    al = hh.alpha if alpha is None else alpha
    r = mkt.r
    return float(np.logaddexp(
        math.log(hh.lambda_x) + al * hh.income_x + hh.lambda_x / r,
        math.log(hh.lambda_y) + al * hh.income_y + hh.lambda_y / r,
    ))


def optimal_benefit_single(mkt: MarketParams, hh: HouseholdParams, quote: PremiumQuote) -> float:
    """Optimal single-premium death benefit, clamped at zero."""
    if quote.scheme is not Scheme.SINGLE:
        raise InvalidParameter("quote is not a single-premium quote")
    big_h = quote.rate
    if not (0.0 < big_h < 1.0):
        raise PremiumNotViable(f"single premium must lie in (0, 1), got {big_h}")
    ratio = big_h / (1.0 - big_h)
    bracket = _log_income_hazard_sum(mkt, hh) - math.log(mkt.r * ratio) - ratio
    return max(bracket / (hh.alpha * mkt.r), 0.0)


def optimal_benefit_continuous(mkt: MarketParams, hh: HouseholdParams, quote: PremiumQuote) -> float:
    """Optimal continuously-financed death benefit, clamped at zero."""
    if quote.scheme is not Scheme.CONTINUOUS:
        raise InvalidParameter("quote is not a continuous-premium quote")
    h = quote.rate
    bracket = _log_income_hazard_sum(mkt, hh) - math.log(h) - h / mkt.r
    return max(bracket / (hh.alpha * (h + mkt.r)), 0.0)


def investment_rate(mkt: MarketParams, hh: HouseholdParams) -> float:
    """Optimal risky-asset holding (mu - r)/(alpha r sigma^2); unchanged by the first death."""
    return merton_investment(mkt, hh.alpha)


@dataclass(frozen=True)
class PolicySolution:
    """Solved purchasing/consumption/investment policy for one premium scheme.

    ``delta`` is the drift of optimally controlled wealth before the first
    death; it is None when no insurance is bought (the reduced closed form
    needs an interior optimum).  ``c0_of_w`` maps starting wealth to the
    initial optimal consumption rate, an affine map with slope r.
    """

    scheme: Scheme
    quote: PremiumQuote
    mkt: MarketParams
    hh: HouseholdParams
    d_star: float
    coeff: ValueCoefficient
    pi_star: float
    delta: float | None
    dc_x: float
    dc_y: float
    c0_intercept: float

    def c0_of_w(self, w: float) -> float:
        return self.mkt.r * w + self.c0_intercept


def _jump(mkt: MarketParams, hh: HouseholdParams, coeff: ValueCoefficient, survivor: str) -> float:
    if survivor == "x":
        income_a, hazard_a = hh.income_x, hh.lambda_x
    elif survivor == "y":
        income_a, hazard_a = hh.income_y, hh.lambda_y
    else:
        raise InvalidParameter(f"survivor must be 'x' or 'y', got {survivor!r}")
    al, r = hh.alpha, mkt.r
    return r * coeff.d + income_a + (hazard_a + mkt.m) / (al * r) + coeff.ln_k / al


def solve_policy(mkt: MarketParams, hh: HouseholdParams, quote: PremiumQuote) -> PolicySolution:
    """Assemble the full optimal policy for one quote."""
    if quote.scheme is Scheme.SINGLE:
        d_star = optimal_benefit_single(mkt, hh, quote)
        coeff = solve_k(mkt, hh, d_star)
        c0_intercept = -mkt.r * quote.rate * d_star - coeff.ln_k / hh.alpha
    else:
        d_star = optimal_benefit_continuous(mkt, hh, quote)
        coeff = solve_k_bar(mkt, hh, quote.rate, d_star)
        c0_intercept = -coeff.ln_k / hh.alpha
    delta = _pre_death_drift_forms(mkt, hh, quote, coeff, d_star)[0] if d_star > 0.0 else None
    return PolicySolution(
        scheme=quote.scheme, quote=quote, mkt=mkt, hh=hh,
        d_star=d_star, coeff=coeff, pi_star=investment_rate(mkt, hh), delta=delta,
        dc_x=_jump(mkt, hh, coeff, "x"), dc_y=_jump(mkt, hh, coeff, "y"),
        c0_intercept=c0_intercept,
    )


def consumption_rate(sol: PolicySolution, w: float, survivor: str | None = None) -> float:
    """Optimal consumption rate at wealth w.

    Before the first death (survivor=None) this is ``r w - ln(k)/alpha`` with
    the coefficient at the post-purchase benefit; after it, the surviving
    earner consumes ``r w + I_a + (lambda_a + m)/(alpha r)``.
    """
    mkt, hh = sol.mkt, sol.hh
    if survivor is None:
        return mkt.r * w - sol.coeff.ln_k / hh.alpha
    if survivor == "x":
        return merton_consumption(mkt, hh.alpha, hh.lambda_x, hh.income_x, w)
    if survivor == "y":
        return merton_consumption(mkt, hh.alpha, hh.lambda_y, hh.income_y, w)
    raise InvalidParameter(f"survivor must be 'x', 'y', or None, got {survivor!r}")


def consumption_jump(sol: PolicySolution, survivor: str) -> float:
    """Change in the optimal consumption rate at the first death.

    delta_c(D) = r D + I_a + (lambda_a + m)/(alpha r) + ln(k(D))/alpha, with
    the surviving earner's income and hazard.
    """
    return _jump(sol.mkt, sol.hh, sol.coeff, survivor)


def consumption_jump_at_optimum(mkt: MarketParams, hh: HouseholdParams,
                                quote: PremiumQuote, survivor: str) -> float:
    """Loading-based closed form of the consumption jump at an interior single-premium optimum.

    Only valid for the single scheme with D* > 0; used as an independent
    cross-check of the benefit-based jump formula.
    """
    if quote.scheme is not Scheme.SINGLE:
        raise InvalidParameter("closed-form jump applies to the single-premium scheme")
    if survivor == "x":
        inc_a, haz_a, inc_d, haz_d = hh.income_x, hh.lambda_x, hh.income_y, hh.lambda_y
    elif survivor == "y":
        inc_a, haz_a, inc_d, haz_d = hh.income_y, hh.lambda_y, hh.income_x, hh.lambda_x
    else:
        raise InvalidParameter(f"survivor must be 'x' or 'y', got {survivor!r}")
    lam, theta, r = hh.lambda_total, quote.loading, mkt.r
    mix = haz_d / lam + (haz_a / lam) * math.exp(hh.alpha * (inc_a - inc_d) + (haz_a - haz_d) / r)
    return (math.log(mix) + math.log((r - theta * lam) / (r * (1.0 + theta)))) / hh.alpha


def _pre_death_drift_forms(mkt: MarketParams, hh: HouseholdParams, quote: PremiumQuote,
                           coeff: ValueCoefficient, d_star: float) -> tuple[float, float]:
    """(definitional, reduced) forms of the wealth drift before the first death."""
    al, r, m, lam = hh.alpha, mkt.r, mkt.m, hh.lambda_total
    base = 2.0 * m / (al * r) + hh.income_x + hh.income_y + coeff.ln_k / al
    if quote.scheme is Scheme.SINGLE:
        definitional = base
        reduced = (m - lam) / (al * r) + quote.rate / (1.0 - quote.rate) / al
    else:
        definitional = base - quote.rate * d_star
        reduced = (m - lam) / (al * r) + quote.rate / r / al
    return definitional, reduced


def pre_death_drift(sol: PolicySolution) -> float:
    """Drift of optimally controlled wealth before the first death.

    Computes both the definitional form (from ln k at the optimum) and the
    loading-reduced form and insists they agree to 1e-10; the reduced form
    only holds at an interior optimum, so D* = 0 raises.
    """
    if sol.d_star <= 0.0:
        raise InteriorOptimumRequired("pre-death drift reduction requires D* > 0")
    definitional, reduced = _pre_death_drift_forms(sol.mkt, sol.hh, sol.quote, sol.coeff, sol.d_star)
    if abs(definitional - reduced) > _DRIFT_FORM_TOL * max(1.0, abs(reduced)):
        raise VerificationFailed(
            f"drift forms disagree: definitional={definitional!r}, reduced={reduced!r}")
    return definitional


def alpha_threshold(mkt: MarketParams, hh: HouseholdParams, quote: PremiumQuote) -> float:
    """Risk aversion below which buying no insurance is optimal.

    The D*-bracket is negative as alpha -> 0+ and increases with alpha, so
    it has a unique zero crossing when either income is positive; with no
    earned income the benefit is always zero and the threshold is infinite.
    """
    if quote.scheme is Scheme.SINGLE:
        ratio = quote.rate / (1.0 - quote.rate)
        offset = math.log(mkt.r * ratio) + ratio
    else:
        offset = math.log(quote.rate) + quote.rate / mkt.r

    def bracket(alpha: float) -> float:
        return _log_income_hazard_sum(mkt, hh, alpha) - offset

    if max(hh.income_x, hh.income_y) <= 0.0:
        return math.inf
    lo = 1e-12
    if bracket(lo) >= 0.0:  # pragma: no cover - excluded by H < 1 pricing
        return lo
    hi = 1.0
    while bracket(hi) < 0.0:
        hi *= 2.0
        if hi > 1e15:
            return math.inf
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if bracket(mid) < 0.0:
            lo = mid
        else:
            hi = mid
        if hi - lo <= 1e-12 * hi:
            break
    return 0.5 * (lo + hi)


def ruin_inputs(sol: PolicySolution, w: float) -> RuinInputs:
    """Bundle the zero-consumption inputs implied by a solved policy and starting wealth."""
    if sol.delta is None:
        raise InteriorOptimumRequired("ruin analysis needs a bought policy (D* > 0)")
    return RuinInputs(
        c0=sol.c0_of_w(w), delta=sol.delta, dc_x=sol.dc_x, dc_y=sol.dc_y,
        lambda_x=sol.hh.lambda_x, lambda_y=sol.hh.lambda_y,
        m=sol.mkt.m, r=sol.mkt.r, alpha=sol.hh.alpha,
    )


# ---------------------------------------------------------------------------
# comparative statics
# ---------------------------------------------------------------------------

SWEEPABLE = ("theta", "alpha", "income_x", "income_y", "lambda_x", "lambda_y")


@dataclass
class SweepRow:
    value: float
    d_star: float
    d_bar_star: float
    dc_x: float
    dc_y: float


@dataclass
class SweepTable:
    """Comparative-statics table with monotonicity/shape flags.

    Flags are True/False when the corresponding property is asserted on the
    grid and None when it is not asserted (hazard sweeps, or the concavity
    check outside the comparable-earners precondition).
    """

    parameter: str
    rows: list[SweepRow] = field(default_factory=list)
    flags: dict[str, bool | None] = field(default_factory=dict)

    def to_csv(self) -> str:
        out = io.StringIO()
        out.write("parameter,value,D_star,D_bar_star,dc_x,dc_y\n")
        for row in self.rows:
            out.write(f"{self.parameter},{row.value:.12g},{row.d_star:.12g},"
                      f"{row.d_bar_star:.12g},{row.dc_x:.12g},{row.dc_y:.12g}\n")
        return out.getvalue()


def _grid_flags(parameter: str, values: np.ndarray, d_star: np.ndarray,
                d_bar_star: np.ndarray, hh: HouseholdParams,
                slack: float = 1e-9) -> dict[str, bool | None]:
    flags: dict[str, bool | None] = {}
    comparable = ((hh.income_x - hh.income_y) * (hh.lambda_x - hh.lambda_y) >= 0.0)
    for label, series in (("d_star", d_star), ("d_bar_star", d_bar_star)):
        diffs = np.diff(series)
        if parameter == "theta":
            flags[f"{label}_nonincreasing"] = bool(np.all(diffs <= slack))
        elif parameter == "alpha":
            flags[f"{label}_nondecreasing"] = bool(np.all(diffs >= -slack))
            interior = series > 0.0
            if comparable and interior.sum() >= 3:
                second = np.diff(series[interior], 2)
                flags[f"{label}_concave_in_alpha"] = bool(np.all(second <= slack))
            else:
                flags[f"{label}_concave_in_alpha"] = None
        elif parameter in ("income_x", "income_y"):
            interior = series > 0.0
            flags[f"{label}_nondecreasing"] = bool(np.all(diffs >= -slack))
            if interior.sum() >= 3:
                second = np.diff(series[interior], 2)
                flags[f"{label}_convex_in_income"] = bool(np.all(second >= -slack))
            else:
                flags[f"{label}_convex_in_income"] = None
        else:
            # the sign of the hazard derivative is ambiguous; nothing asserted
            flags[f"{label}_monotone"] = None
    return flags


def comparative_statics_sweep(
    mkt: MarketParams,
    hh: HouseholdParams,
    parameter: str,
    values,
    loading: float = 0.0,
    loading_continuous: float | None = None,
) -> SweepTable:
    """Sweep one parameter, re-solving both schemes at each grid value.

    Premium quotes are re-derived from the (fixed) loadings at every point,
    so hazard sweeps change the price of insurance as well as the demand for
    it.  Consumption jumps are recorded at the single-premium optimum.
    """
    if parameter not in SWEEPABLE:
        raise InvalidParameter(f"parameter must be one of {SWEEPABLE}, got {parameter!r}")
    from .model import continuous_premium, single_premium

    theta_bar = loading if loading_continuous is None else loading_continuous
    vals = np.asarray(list(values), dtype=float)
    if vals.size < 2:
        raise InvalidParameter("sweep grid needs at least two points")
    table = SweepTable(parameter=parameter)
    d_stars = np.empty(vals.size)
    d_bar_stars = np.empty(vals.size)
    for i, v in enumerate(vals):
        hh_i, theta_i, theta_bar_i = hh, loading, theta_bar
        if parameter == "theta":
            theta_i = theta_bar_i = float(v)
        else:
            hh_i = HouseholdParams(**{**_hh_dict(hh), parameter: float(v)})
        quote_s = single_premium(mkt, hh_i, theta_i)
        quote_c = continuous_premium(mkt, hh_i, theta_bar_i)
        sol = solve_policy(mkt, hh_i, quote_s)
        d_bar = optimal_benefit_continuous(mkt, hh_i, quote_c)
        d_stars[i] = sol.d_star
        d_bar_stars[i] = d_bar
        table.rows.append(SweepRow(float(v), sol.d_star, d_bar, sol.dc_x, sol.dc_y))
    table.flags = _grid_flags(parameter, vals, d_stars, d_bar_stars, hh)
    return table


def _hh_dict(hh: HouseholdParams) -> dict:
    return dict(lambda_x=hh.lambda_x, lambda_y=hh.lambda_y,
                income_x=hh.income_x, income_y=hh.income_y, alpha=hh.alpha)


# ---------------------------------------------------------------------------
# numerical optimality verification
# ---------------------------------------------------------------------------

@dataclass
class VerificationReport:
    scheme: Scheme
    passed: bool
    tol: float
    max_hjb_residual: float
    max_gradient_violation: float
    equality_gap_at_optimum: float
    buy_region_max_residual: float
    worst_point: dict
    n_points: int


def default_grids(mkt: MarketParams, hh: HouseholdParams,
                  n_w: int = 201, n_d: int = 161) -> tuple[np.ndarray, np.ndarray]:
    """Default verification grid: w in [-20, 60], D in [0, 1.5 max(I_x, I_y)/r]."""
    d_hi = 1.5 * max(hh.income_x, hh.income_y) / mkt.r
    return np.linspace(-20.0, 60.0, n_w), np.linspace(0.0, max(d_hi, 1.0), n_d)


def _survivor_value_sum(mkt: MarketParams, hh: HouseholdParams, wealth: np.ndarray) -> np.ndarray:
    """lambda_x V(w; lambda_y, I_y) + lambda_y V(w; lambda_x, I_x) at post-benefit wealth."""
    al, r, m = hh.alpha, mkt.r, mkt.m
    vx = -np.exp(-al * r * (wealth + hh.income_y / r + (hh.lambda_y + m) / (al * r * r))) / (al * r)
    vy = -np.exp(-al * r * (wealth + hh.income_x / r + (hh.lambda_x + m) / (al * r * r))) / (al * r)
    return hh.lambda_x * vx + hh.lambda_y * vy


def _operator(mkt: MarketParams, hh: HouseholdParams, u, u_w, u_ww, w, d,
              h_rate: float = 0.0) -> np.ndarray:
    """Generator applied at the analytic maximizers c* = -(ln u_w)/alpha, pi* closed form.

    Passing h_rate adds the continuous premium outflow -h D u_w.
    """
    al, r = hh.alpha, mkt.r
    c_star = -np.log(u_w) / al
    pi_star = investment_rate(mkt, hh)
    drift = (r * w + (mkt.mu - r) * pi_star + hh.income_x + hh.income_y - c_star
             - h_rate * d)
    utility = -u_w / al  # u(c*) = -(1/alpha) e^{-alpha c*} = -u_w / alpha
    return (drift * u_w + 0.5 * mkt.sigma ** 2 * pi_star ** 2 * u_ww + utility
            - (r + hh.lambda_total) * u + _survivor_value_sum(mkt, hh, w + d))


def _k_prime(coeff: ValueCoefficient, mkt: MarketParams, hh: HouseholdParams,
             h_rate: float = 0.0) -> float:
    """Implicit-function derivative of the coefficient in the benefit level."""
    al, r = hh.alpha, mkt.r
    denom = r * coeff.ln_k + coeff.a_lin + r
    if h_rate == 0.0:
        return -al * r * coeff.b_rhs / denom
    return al * r * (h_rate * coeff.k - coeff.b_rhs) / denom


def verify_variational_inequality(
    mkt: MarketParams,
    hh: HouseholdParams,
    quote: PremiumQuote,
    sol: PolicySolution | None = None,
    w_grid: np.ndarray | None = None,
    d_grid: np.ndarray | None = None,
    tol: float = 1e-6,
    raise_on_failure: bool = True,
) -> VerificationReport:
    """Check the dynamic-programming optimality conditions on a (w, D) grid.

    On the hold region (D >= D*): the generator residual at the analytic
    maximizers must vanish to ``tol`` (relative to (r + lam)|U|), and the
    marginal value of extra benefit must not exceed its marginal cost, with
    equality at D*.  On the buy region (D < D*) the value extension makes
    the purchase-gradient bind and the generator residual must be <= tol.
    """
    sol = sol if sol is not None else solve_policy(mkt, hh, quote)
    if w_grid is None or d_grid is None:
        w_def, d_def = default_grids(mkt, hh)
        w_grid = w_def if w_grid is None else np.asarray(w_grid, float)
        d_grid = d_def if d_grid is None else np.asarray(d_grid, float)
    d_grid = np.unique(np.append(np.asarray(d_grid, float), sol.d_star))
    al, r = hh.alpha, mkt.r
    lam = hh.lambda_total
    single = quote.scheme is Scheme.SINGLE
    h_rate = 0.0 if single else quote.rate

    max_res = 0.0
    max_grad = 0.0
    buy_max = 0.0
    worst = {}
    n_pts = 0

    coeff_star = sol.coeff
    for d in d_grid:
        hold = d >= sol.d_star
        if hold:
            coeff = solve_k(mkt, hh, d) if single else solve_k_bar(mkt, hh, h_rate, d)
            u_w = coeff.k * np.exp(-al * r * w_grid)
            u = -u_w / (al * r)
            u_ww = -al * r * u_w
            res = _operator(mkt, hh, u, u_w, u_ww, w_grid, d, h_rate)
            scale = (r + lam) * np.abs(u)
            rel = np.abs(res) / scale
            n_pts += w_grid.size
            i = int(np.argmax(rel))
            if rel[i] > max_res:
                max_res = float(rel[i])
                if rel[i] > tol:
                    worst = {"w": float(w_grid[i]), "d": float(d), "check": "hjb_residual",
                             "value": float(rel[i])}
            kp = _k_prime(coeff, mkt, hh, h_rate)
            u_d = -kp / (al * r) * np.exp(-al * r * w_grid)
            if single:
                grad = u_d - quote.rate * u_w
                gscale = quote.rate * u_w
            else:
                grad = u_d
                gscale = u_w
            grel = grad / gscale
            limit = tol if d > sol.d_star else np.inf  # at D* equality is checked below
            j = int(np.argmax(grel))
            if d > sol.d_star and grel[j] > max_grad:
                max_grad = float(grel[j])
                if grel[j] > limit:
                    worst = {"w": float(w_grid[j]), "d": float(d), "check": "purchase_gradient",
                             "value": float(grel[j])}
        else:
            # buy region: value is the optimally topped-up one
            if single:
                w_hat = w_grid - quote.rate * (sol.d_star - d)
            else:
                w_hat = w_grid
            u_w = coeff_star.k * np.exp(-al * r * w_hat)
            u = -u_w / (al * r)
            u_ww = -al * r * u_w
            res = _operator(mkt, hh, u, u_w, u_ww, w_grid, d, h_rate)
            scale = (r + lam) * np.abs(u)
            rel = res / scale
            n_pts += w_grid.size
            i = int(np.argmax(rel))
            if rel[i] > buy_max:
                buy_max = float(rel[i])
                if rel[i] > tol:
                    worst = {"w": float(w_grid[i]), "d": float(d), "check": "buy_region_residual",
                             "value": float(rel[i])}

    # equality of the purchase gradient at the optimum (interior case)
    if sol.d_star > 0.0:
        kp_star = _k_prime(coeff_star, mkt, hh, h_rate)
        if single:
            eq_gap = abs(-kp_star / (al * r) - quote.rate * coeff_star.k) / (quote.rate * coeff_star.k)
        else:
            eq_gap = abs(kp_star) / (al * r * coeff_star.k)
    else:
        eq_gap = 0.0

    passed = max_res <= tol and max_grad <= tol and buy_max <= tol and eq_gap <= tol
    report = VerificationReport(
        scheme=quote.scheme, passed=passed, tol=tol,
        max_hjb_residual=max_res, max_gradient_violation=max_grad,
        equality_gap_at_optimum=eq_gap, buy_region_max_residual=buy_max,
        worst_point=worst, n_points=n_pts,
    )
    if raise_on_failure and not passed:
        raise VerificationFailed(f"optimality verification failed at {worst}", worst=worst)
    return report


def hold_region_boundary_gap(mkt: MarketParams, hh: HouseholdParams, quote: PremiumQuote,
                             sol: PolicySolution | None = None) -> float:
    """|ln k(D*) - (H/(1-H) - alpha (I_x+I_y) - (lam + m)/r)| for an interior single optimum.

    At D* the hold-region inequality binds with equality; this is the
    tightest closed-form identity the solution must satisfy.
    """
    sol = sol if sol is not None else solve_policy(mkt, hh, quote)
    if quote.scheme is not Scheme.SINGLE:
        raise InvalidParameter("boundary identity is stated for the single-premium scheme")
    if sol.d_star <= 0.0:
        raise InteriorOptimumRequired("boundary identity requires D* > 0")
    ratio = quote.rate / (1.0 - quote.rate)
    rhs = ratio - hh.alpha * (hh.income_x + hh.income_y) - (hh.lambda_total + mkt.m) / mkt.r
    return abs(sol.coeff.ln_k - rhs)


def finite_difference_check(mkt: MarketParams, hh: HouseholdParams, quote: PremiumQuote,
                            w: float, d: float, step_scale: float = 1e-5) -> dict:
    """Central-difference cross-check of the analytic value-function derivatives.

    Returns relative gaps for the wealth gradient, wealth curvature, and
    benefit gradient at (w, d); keeps discretization error separate from the
    closed-form checks used on the main grid.
    """
    single = quote.scheme is Scheme.SINGLE
    h_rate = 0.0 if single else quote.rate
    al, r = hh.alpha, mkt.r

    def u_val(wv: float, dv: float) -> float:
        coeff = solve_k(mkt, hh, dv) if single else solve_k_bar(mkt, hh, h_rate, dv)
        return -math.exp(coeff.ln_k - al * r * wv) / (al * r)

    coeff = solve_k(mkt, hh, d) if single else solve_k_bar(mkt, hh, h_rate, d)
    u_w = coeff.k * math.exp(-al * r * w)
    u_ww = -al * r * u_w
    u_d = -_k_prime(coeff, mkt, hh, h_rate) / (al * r) * math.exp(-al * r * w)

    hw = step_scale * max(1.0, abs(w))
    hd = step_scale * max(1.0, abs(d))
    fd_w = (u_val(w + hw, d) - u_val(w - hw, d)) / (2.0 * hw)
    fd_ww = (u_val(w + hw, d) - 2.0 * u_val(w, d) + u_val(w - hw, d)) / (hw * hw)
    fd_d = (u_val(w, d + hd) - u_val(w, max(d - hd, 0.0))) / (hd + min(d, hd))
    return {
        "u_w": abs(fd_w - u_w) / abs(u_w),
        "u_ww": abs(fd_ww - u_ww) / abs(u_ww),
        "u_d": abs(fd_d - u_d) / max(abs(u_d), 1e-300),
    }


def investment_maximizer_search(mkt: MarketParams, hh: HouseholdParams,
                                coeff: ValueCoefficient, w: float,
                                lo: float = 0.0, hi: float | None = None) -> float:
    """Golden-section maximization of the investment term; oracle for the closed form."""
    al, r = hh.alpha, mkt.r
    u_w = coeff.k * math.exp(-al * r * w)
    u_ww = -al * r * u_w

    def objective(pi: float) -> float:
        return (mkt.mu - r) * pi * u_w + 0.5 * mkt.sigma ** 2 * pi * pi * u_ww

    if hi is None:
        hi = 4.0 * abs(investment_rate(mkt, hh)) + 1.0
    inv_phi = (math.sqrt(5.0) - 1.0) / 2.0
    a, b = lo, hi
    c = b - inv_phi * (b - a)
    d = a + inv_phi * (b - a)
    for _ in range(200):
        if objective(c) > objective(d):
            b = d
        else:
            a = c
        c = b - inv_phi * (b - a)
        d = a + inv_phi * (b - a)
        if b - a < 1e-12 * (1.0 + abs(b)):
            break
    return 0.5 * (a + b)
