"""Optimal life-insurance purchasing for a two-earner household under exponential utility.

Computes optimal death benefits for single-premium and continuously paid
insurance, the accompanying consumption and investment policies, premium
calibration to a target insurer loss probability, and the probability that
optimal consumption ever reaches zero, with Monte Carlo oracles for every
analytic quantity.
"""

__version__ = "0.1.0"

from .coeffs import (
    ValueCoefficient,
    merton_consumption,
    merton_investment,
    merton_value,
    solve_k,
    solve_k_bar,
    value_function,
)
from .config import PremiumSpec, RunConfig, load_config, parse_config, quotes_from_spec
from .errors import (
    ConfigInvalid,
    InteriorOptimumRequired,
    InvalidParameter,
    LifecoverError,
    LossProbabilityTooHigh,
    NoSolution,
    PremiumNotViable,
    SingularParameter,
    VerificationFailed,
)
from .model import (
    UNIT_DOLLARS,
    HouseholdParams,
    MarketParams,
    PremiumQuote,
    Scheme,
    calibrate_to_loss_probability,
    certainty_premium,
    continuous_premium,
    elicit_risk_aversion,
    implied_loss_probability,
    max_loss_probability,
    single_premium,
)
from .policy import (
    PolicySolution,
    alpha_threshold,
    comparative_statics_sweep,
    consumption_jump,
    consumption_jump_at_optimum,
    consumption_rate,
    hold_region_boundary_gap,
    investment_rate,
    optimal_benefit_continuous,
    optimal_benefit_single,
    pre_death_drift,
    ruin_inputs,
    solve_policy,
    verify_variational_inequality,
)
from .report import solve_report, solve_report_from_config
from .ruin import (
    RuinInputs,
    RuinReport,
    prob_jump_to_negative,
    prob_ruin_before_first_death,
    prob_ruin_between_deaths,
    prob_ruin_total,
    ruin_density_before_first_death,
)
from .simulate import (
    ConsumptionPaths,
    RuinSimResult,
    SimConfig,
    SimResult,
    TheoremCheck,
    estimate_insurer_loss_probability,
    estimate_ruin_probability,
    estimate_ruin_probability_stepped,
    scheme_equivalence_check,
    simulate_consumption_paths,
)
