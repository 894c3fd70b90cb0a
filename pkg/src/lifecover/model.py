"""Market/household parameters, insurance pricing, and premium calibration.

All monetary quantities are measured in consumption units of $50,000, which
keeps the absolute risk aversion of a typical household of order one.  A
death benefit of 52.38 units is therefore $2,619,000.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

from .errors import InvalidParameter, LossProbabilityTooHigh, NoSolution, PremiumNotViable

UNIT_DOLLARS = 50_000.0  # dollars per consumption unit


class Scheme(str, Enum):
    """How the life-insurance premium is paid."""

    SINGLE = "single"          # lump sum H per $1 of benefit at purchase
    CONTINUOUS = "continuous"  # rate h per $1 of benefit until the first death


@dataclass(frozen=True)
class MarketParams:
    """Black-Scholes market: riskless force of interest r, risky drift mu, volatility sigma.

    Requires r > 0 strictly: every closed form divides by r, so a zero
    riskless rate is outside the solved regime.
    """

    r: float
    mu: float
    sigma: float

    def __post_init__(self):
        if not (self.r > 0.0):
            raise InvalidParameter(f"riskless rate must be positive, got r={self.r}")
        if not (self.sigma > 0.0):
            raise InvalidParameter(f"volatility must be positive, got sigma={self.sigma}")
        if not (self.mu > self.r):
            raise InvalidParameter(f"risky drift must exceed r, got mu={self.mu} <= r={self.r}")

    @property
    def m(self) -> float:
        """Half the squared Sharpe ratio, ((mu - r) / sigma)^2 / 2."""
        return 0.5 * ((self.mu - self.r) / self.sigma) ** 2


@dataclass(frozen=True)
class HouseholdParams:
    """Two earners with constant mortality hazards, income rates, and CARA risk aversion."""

    lambda_x: float
    lambda_y: float
    income_x: float
    income_y: float
    alpha: float

    def __post_init__(self):
        if not (self.lambda_x > 0.0):
            raise InvalidParameter(f"lambda_x must be positive, got {self.lambda_x}")
        if not (self.lambda_y > 0.0):
            raise InvalidParameter(f"lambda_y must be positive, got {self.lambda_y}")
        if self.income_x < 0.0:
            raise InvalidParameter(f"income_x must be nonnegative, got {self.income_x}")
        if self.income_y < 0.0:
            raise InvalidParameter(f"income_y must be nonnegative, got {self.income_y}")
        if not (self.alpha > 0.0):
            raise InvalidParameter(f"alpha must be positive, got {self.alpha}")

    @property
    def lambda_total(self) -> float:
        return self.lambda_x + self.lambda_y


@dataclass(frozen=True)
class PremiumQuote:
    """A priced insurance offer: payment scheme, loading, per-dollar rate, implied loss probability.

    For the single scheme ``rate`` is the price H per $1 of benefit
    (dimensionless, < 1); for the continuous scheme it is the premium rate h
    per $1 of benefit per year.
    """

    scheme: Scheme
    loading: float
    rate: float
    loss_probability: float


def single_premium(mkt: MarketParams, hh: HouseholdParams, loading: float = 0.0) -> PremiumQuote:
    """Price a first-death benefit paid for by a lump sum: H = (1 + loading) * lam / (lam + r).

    Raises PremiumNotViable when H >= 1, i.e. loading * lam >= r: nobody
    pays a dollar or more per dollar of death benefit.
    """
    if loading < 0.0:
        raise InvalidParameter(f"loading must be nonnegative, got {loading}")
    lam = hh.lambda_total
    rate = (1.0 + loading) * lam / (lam + mkt.r)
    if rate >= 1.0 - 1e-12:
        raise PremiumNotViable(
            f"single premium H={rate:.6g} >= 1 (requires loading < r/(lambda_x+lambda_y) = "
            f"{mkt.r / lam:.6g})"
        )
    q = _loss_probability_single(rate, lam, mkt.r)
    return PremiumQuote(Scheme.SINGLE, loading, rate, q)


def continuous_premium(mkt: MarketParams, hh: HouseholdParams, loading: float = 0.0) -> PremiumQuote:
    """Price a first-death benefit paid continuously: h = (1 + loading) * (lambda_x + lambda_y)."""
    if loading < 0.0:
        raise InvalidParameter(f"loading must be nonnegative, got {loading}")
    lam = hh.lambda_total
    rate = (1.0 + loading) * lam
    q = _loss_probability_continuous(rate, lam, mkt.r)
    return PremiumQuote(Scheme.CONTINUOUS, loading, rate, q)


def max_loss_probability(mkt: MarketParams, hh: HouseholdParams) -> float:
    """Largest admissible per-policy loss probability, attained at zero loading.

    q_max = 1 - (lam / (lam + r)) ** (lam / r).  Targeting any larger q
    would price the policy below its actuarially fair value.
    """
    lam = hh.lambda_total
    return -math.expm1((lam / mkt.r) * math.log(lam / (lam + mkt.r)))


def _loss_probability_single(rate: float, lam: float, r: float) -> float:
    # P(benefit PV exceeds premium) = P(e^{-r tau1} > H) with tau1 ~ Exp(lam)
    return -math.expm1((lam / r) * math.log(rate))


def _loss_probability_continuous(rate: float, lam: float, r: float) -> float:
    return -math.expm1((lam / r) * math.log(rate / (rate + r)))


def implied_loss_probability(quote: PremiumQuote, mkt: MarketParams, hh: HouseholdParams) -> float:
    """Per-policy loss probability implied by a quote's rate."""
    lam = hh.lambda_total
    if quote.scheme is Scheme.SINGLE:
        return _loss_probability_single(quote.rate, lam, mkt.r)
    return _loss_probability_continuous(quote.rate, lam, mkt.r)


def calibrate_to_loss_probability(
    mkt: MarketParams,
    hh: HouseholdParams,
    q: float,
    scheme: Scheme | None = None,
):
    """Back out premium rates that give the insurer loss probability q on each policy.

    Single:     H = (1 - q) ** (r / lam)
    Continuous: h = r H / (1 - H)

    Returns the quote for ``scheme``, or the (single, continuous) pair when
    scheme is None; virtually every comparison of the two payment schemes
    needs both sides of the pair.

    Raises LossProbabilityTooHigh when q exceeds the zero-loading bound.
    """
    if not (0.0 < q <= 1.0):
        raise InvalidParameter(f"loss probability must lie in (0, 1], got {q}")
    lam = hh.lambda_total
    q_max = max_loss_probability(mkt, hh)
    if q > q_max * (1.0 + 1e-12):
        raise LossProbabilityTooHigh(
            f"q={q:.6g} exceeds the zero-loading bound q_max={q_max:.6g}; "
            "the implied premium would be below actuarially fair"
        )
    log_h = (mkt.r / lam) * math.log1p(-q)
    big_h = math.exp(log_h)
    small_h = mkt.r * big_h / -math.expm1(log_h)
    loading_single = big_h * (lam + mkt.r) / lam - 1.0
    loading_cont = small_h / lam - 1.0
    quote_s = PremiumQuote(Scheme.SINGLE, max(loading_single, 0.0), big_h, q)
    quote_c = PremiumQuote(Scheme.CONTINUOUS, max(loading_cont, 0.0), small_h, q)
    if scheme is Scheme.SINGLE:
        return quote_s
    if scheme is Scheme.CONTINUOUS:
        return quote_c
    return quote_s, quote_c


def certainty_premium(alpha: float, loss: float, prob: float) -> float:
    """Most a CARA household pays to insure a loss of size ``loss`` occurring with ``prob``.

    P = (1/alpha) * ln(prob * e^{alpha * loss} + 1 - prob), evaluated in a
    form stable for large alpha * loss.
    """
    if alpha <= 0.0:
        raise InvalidParameter(f"alpha must be positive, got {alpha}")
    al = alpha * loss
    # ln(p e^{al} + 1 - p) = al + ln(p + (1 - p) e^{-al})
    return loss + math.log(prob + (1.0 - prob) * math.exp(-al)) / alpha


def elicit_risk_aversion(loss: float, prob: float, willingness_to_pay: float) -> float:
    """Solve for the alpha at which ``willingness_to_pay`` is the indifference premium.

    The forward premium is strictly increasing in alpha, from prob * loss
    (risk neutral) up to loss, so bracketed bisection is unconditionally
    safe.  Terminates at 1e-12 relative on alpha.

    Raises NoSolution when willingness_to_pay lies outside
    (prob * loss, loss).
    """
    if loss <= 0.0 or not (0.0 < prob < 1.0):
        raise InvalidParameter(f"need loss > 0 and prob in (0, 1), got loss={loss}, prob={prob}")
    expected = prob * loss
    if not (expected < willingness_to_pay < loss):
        raise NoSolution(
            f"willingness to pay {willingness_to_pay:.6g} must lie strictly between the "
            f"expected loss {expected:.6g} and the full loss {loss:.6g}"
        )
    lo = 1e-12
    hi = 1.0
    while certainty_premium(hi, loss, prob) < willingness_to_pay:
        hi *= 2.0
        if hi > 1e12:  # pragma: no cover - unreachable given the bracket check above
            raise NoSolution("failed to bracket alpha")
    while hi - lo > 1e-12 * hi:
        mid = 0.5 * (lo + hi)
        if certainty_premium(mid, loss, prob) < willingness_to_pay:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)
