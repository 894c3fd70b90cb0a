"""Value-function coefficients k(D) and their exponential-utility value functions.

The maximized utility before the first death has the form
``U(w, D) = -k(D) / (alpha r) * exp(-alpha r w)`` where k(D) solves

    k [ r ln k + A(D) ] = B(D),
    A(D) = alpha r (I_x + I_y) + lambda_x + lambda_y + m   (minus alpha r h D
           when premium is paid continuously at rate h per dollar),
    B(D) = exp(-alpha r D - m/r) [ lambda_x e^{-alpha I_y - lambda_y / r}
                                 + lambda_y e^{-alpha I_x - lambda_x / r} ].

Substituting K = k e^{A/r} reduces this to K ln K = (B/r) e^{A/r}, which has
a unique root K > 1 for a positive right side; we solve y + ln y = ln C for
y = ln K entirely in log space so no intermediate quantity can overflow.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidParameter
from .model import HouseholdParams, MarketParams, Scheme


@dataclass(frozen=True)
class ValueCoefficient:
    """Solved coefficient k at benefit level d, with solver diagnostics.

    ``a_lin`` and ``b_rhs`` are the linear coefficient A and right-hand side
    B of the defining equation; ``residual`` is the relative error of k under
    back-substitution.
    """

    scheme: Scheme
    d: float
    k: float
    ln_k: float
    alpha: float
    r: float
    a_lin: float
    b_rhs: float
    residual: float


def _log_b(mkt: MarketParams, hh: HouseholdParams, d: float) -> float:
    r, m, al = mkt.r, mkt.m, hh.alpha
    t_x = math.log(hh.lambda_x) - al * hh.income_y - hh.lambda_y / r
    t_y = math.log(hh.lambda_y) - al * hh.income_x - hh.lambda_x / r
    return -al * r * d - m / r + float(np.logaddexp(t_x, t_y))


def _a_lin(mkt: MarketParams, hh: HouseholdParams) -> float:
    return hh.alpha * mkt.r * (hh.income_x + hh.income_y) + hh.lambda_total + mkt.m


def _solve_y_plus_log_y(target: float) -> float:
    """Unique y > 0 with y + ln(y) = target, by bracketed Halley iteration.

    The map is strictly increasing, so [lo, hi] below always brackets the
    root; any Halley step leaving the bracket falls back to bisection.
    """
    if target == 1.0:
        return 1.0
    if target > 1.0:
        lo = max(1.0, target - math.log(target))
        hi = target
    else:
        lo = math.exp(max(target, -700.0) - 1.0)
        hi = 1.0
    y = 0.5 * (lo + hi)
    for _ in range(80):
        g = y + math.log(y) - target
        if g > 0.0:
            hi = y
        else:
            lo = y
        gp = 1.0 + 1.0 / y
        gpp = -1.0 / (y * y)
        step = 2.0 * g * gp / (2.0 * gp * gp - g * gpp)
        y_new = y - step
        if not (lo < y_new < hi):
            y_new = 0.5 * (lo + hi)
        if abs(y_new - y) <= 1e-15 * y_new:
            return y_new
        y = y_new
    return 0.5 * (lo + hi)


def _solve(mkt: MarketParams, hh: HouseholdParams, d: float, scheme: Scheme,
           h_rate: float = 0.0) -> ValueCoefficient:
    r, al = mkt.r, hh.alpha
    a_lin = _a_lin(mkt, hh) - al * r * h_rate * d
    log_b = _log_b(mkt, hh, d)
    log_c = log_b - math.log(r) + a_lin / r
    y = _solve_y_plus_log_y(log_c)
    ln_k = y - a_lin / r
    # back-substitution: k (r ln k + A) / B - 1, evaluated in log space
    residual = math.exp(ln_k + math.log(r * y) - log_b) - 1.0
    return ValueCoefficient(
        scheme=scheme, d=d, k=math.exp(ln_k), ln_k=ln_k, alpha=al, r=r,
        a_lin=a_lin, b_rhs=math.exp(log_b), residual=residual,
    )


def solve_k(mkt: MarketParams, hh: HouseholdParams, d: float) -> ValueCoefficient:
    """Coefficient k(d) for single-premium insurance at benefit level d >= 0."""
    if d < 0.0:
        raise InvalidParameter(f"death benefit must be nonnegative, got {d}")
    return _solve(mkt, hh, d, Scheme.SINGLE)


def solve_k_bar(mkt: MarketParams, hh: HouseholdParams, h_rate: float, d: float) -> ValueCoefficient:
    """Coefficient for continuously paid premium at rate h_rate per dollar of benefit.

    Identical to the single-premium equation except the linear coefficient
    picks up ``-alpha r h d``; at d = 0 the two coefficients coincide.
    """
    if d < 0.0:
        raise InvalidParameter(f"death benefit must be nonnegative, got {d}")
    if h_rate <= 0.0:
        raise InvalidParameter(f"premium rate must be positive, got {h_rate}")
    return _solve(mkt, hh, d, Scheme.CONTINUOUS, h_rate=h_rate)


def value_function(coeff: ValueCoefficient, w: float) -> float:
    """Maximized expected utility -k/(alpha r) * exp(-alpha r w); increasing, concave, negative."""
    ar = coeff.alpha * coeff.r
    return -math.exp(coeff.ln_k - ar * w) / ar


def merton_value(mkt: MarketParams, alpha: float, hazard: float, income: float, w: float) -> float:
    """Survivor's maximized utility of lifetime consumption.

    V(w) = -(1/alpha r) exp{-alpha r (w + income/r + (hazard + m)/(alpha r^2))}:
    wealth augmented by the income perpetuity and a mortality/market term.
    """
    if hazard <= 0.0 or income < 0.0:
        raise InvalidParameter(f"need hazard > 0 and income >= 0, got {hazard}, {income}")
    r = mkt.r
    ar = alpha * r
    return -math.exp(-ar * (w + income / r + (hazard + mkt.m) / (alpha * r * r))) / ar


def merton_consumption(mkt: MarketParams, alpha: float, hazard: float, income: float, w: float) -> float:
    """Survivor's optimal consumption rate r w + income + (hazard + m)/(alpha r)."""
    return mkt.r * w + income + (hazard + mkt.m) / (alpha * mkt.r)


def merton_investment(mkt: MarketParams, alpha: float) -> float:
    """Optimal dollar amount in the risky asset, (mu - r)/(alpha r sigma^2); wealth-independent."""
    return (mkt.mu - mkt.r) / (alpha * mkt.r * mkt.sigma ** 2)
