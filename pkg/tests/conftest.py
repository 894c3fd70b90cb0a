import numpy as np
import pytest

from lifecover.model import (
    HouseholdParams,
    MarketParams,
    calibrate_to_loss_probability,
    continuous_premium,
    max_loss_probability,
    single_premium,
)

# base scenario used throughout: r=2%, mu=6%, sigma=20%, hazards 4%/3%,
# incomes 2 and 1.5 units/yr, alpha=2, zero loadings
BASE_Q = 1.0 - (7.0 / 9.0) ** 3.5


@pytest.fixture(scope="session")
def mkt():
    return MarketParams(r=0.02, mu=0.06, sigma=0.20)


@pytest.fixture(scope="session")
def hh():
    return HouseholdParams(lambda_x=0.04, lambda_y=0.03, income_x=2.0, income_y=1.5, alpha=2.0)


@pytest.fixture(scope="session")
def quote_single(mkt, hh):
    return single_premium(mkt, hh, 0.0)


@pytest.fixture(scope="session")
def quote_continuous(mkt, hh):
    return continuous_premium(mkt, hh, 0.0)


def random_market_household(rng: np.random.Generator):
    """One admissible random parameter draw for property tests."""
    r = rng.uniform(0.01, 0.05)
    mkt = MarketParams(r=r, mu=r + rng.uniform(0.01, 0.06), sigma=rng.uniform(0.12, 0.35))
    hh = HouseholdParams(
        lambda_x=rng.uniform(0.01, 0.08), lambda_y=rng.uniform(0.01, 0.08),
        income_x=rng.uniform(0.3, 4.0), income_y=rng.uniform(0.3, 4.0),
        alpha=rng.uniform(0.3, 4.0),
    )
    return mkt, hh


def random_calibrated(rng: np.random.Generator):
    """Random draw plus a calibrated (single, continuous) quote pair."""
    mkt, hh = random_market_household(rng)
    q = rng.uniform(0.2, 1.0) * max_loss_probability(mkt, hh)
    quote_s, quote_c = calibrate_to_loss_probability(mkt, hh, q)
    return mkt, hh, q, quote_s, quote_c
