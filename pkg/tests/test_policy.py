import math

import numpy as np
import pytest

from lifecover.coeffs import solve_k, solve_k_bar
from lifecover.errors import InteriorOptimumRequired, PremiumNotViable, VerificationFailed
from lifecover.model import (
    HouseholdParams,
    MarketParams,
    PremiumQuote,
    Scheme,
    calibrate_to_loss_probability,
    continuous_premium,
    single_premium,
)
from lifecover.policy import (
    alpha_threshold,
    comparative_statics_sweep,
    consumption_jump,
    consumption_jump_at_optimum,
    consumption_rate,
    default_grids,
    finite_difference_check,
    hold_region_boundary_gap,
    investment_maximizer_search,
    investment_rate,
    optimal_benefit_continuous,
    optimal_benefit_single,
    pre_death_drift,
    ruin_inputs,
    solve_policy,
    verify_variational_inequality,
)
from conftest import BASE_Q, random_calibrated, random_market_household

D_STAR = 52.37795990003323
D_BAR_STAR = 11.639546644451828
ALPHA_THRESHOLD = 0.902611910933947  # bisection oracle on the benefit bracket


class TestOptimalBenefits:
    def test_base_single_benefit(self, mkt, hh, quote_single):
        d = optimal_benefit_single(mkt, hh, quote_single)
        assert d == pytest.approx(52.38, abs=0.01)
        assert d == pytest.approx(D_STAR, rel=1e-12)

    def test_base_continuous_benefit(self, mkt, hh, quote_continuous):
        d = optimal_benefit_continuous(mkt, hh, quote_continuous)
        assert d == pytest.approx(11.64, abs=0.01)
        assert d == pytest.approx(D_BAR_STAR, rel=1e-12)

    def test_high_loading_clamps_single(self, mkt, hh):
        assert optimal_benefit_single(mkt, hh, single_premium(mkt, hh, 0.28)) == 0.0

    def test_high_loading_clamps_continuous(self, mkt, hh):
        assert optimal_benefit_continuous(mkt, hh, continuous_premium(mkt, hh, 10.0)) == 0.0

    def test_low_risk_aversion_buys_nothing(self, mkt, quote_single):
        hh_timid = HouseholdParams(0.04, 0.03, 2.0, 1.5, alpha=0.01)
        assert optimal_benefit_single(mkt, hh_timid, quote_single) == 0.0

    def test_corrupted_rate_rejected(self, mkt, hh):
        bad = PremiumQuote(Scheme.SINGLE, 0.0, 1.2, 0.5)
        with pytest.raises(PremiumNotViable):
            optimal_benefit_single(mkt, hh, bad)

    def test_calibrated_pair_identities(self, mkt, hh):
        # r H D* = h Dbar* and (1 - H) D* = Dbar* for any common loss probability
        quote_s, quote_c = calibrate_to_loss_probability(mkt, hh, BASE_Q)
        d_s = optimal_benefit_single(mkt, hh, quote_s)
        d_c = optimal_benefit_continuous(mkt, hh, quote_c)
        assert (1.0 - quote_s.rate) * d_s == pytest.approx(d_c, rel=1e-12)
        assert mkt.r * quote_s.rate * d_s == pytest.approx(quote_c.rate * d_c, rel=1e-12)

    def test_benefits_ignore_risky_asset(self, hh, quote_single, quote_continuous):
        base = MarketParams(0.02, 0.06, 0.20)
        moved = MarketParams(0.02, 0.11, 0.45)
        assert optimal_benefit_single(base, hh, quote_single) == pytest.approx(
            optimal_benefit_single(moved, hh, quote_single), rel=1e-12)
        assert optimal_benefit_continuous(base, hh, quote_continuous) == pytest.approx(
            optimal_benefit_continuous(moved, hh, quote_continuous), rel=1e-12)

    def test_upper_bounds_on_random_draws(self):
        rng = np.random.default_rng(5)
        for _ in range(1000):
            mkt, hh = random_market_household(rng)
            theta = rng.uniform(0.0, 0.8) * mkt.r / hh.lambda_total
            quote_s = single_premium(mkt, hh, theta)
            quote_c = continuous_premium(mkt, hh, theta)
            bound = max(hh.income_x, hh.income_y)
            assert optimal_benefit_single(mkt, hh, quote_s) < bound / mkt.r
            assert optimal_benefit_continuous(mkt, hh, quote_c) <= bound / (quote_c.rate + mkt.r) + 1e-12

    def test_optimum_matches_direct_minimization(self, mkt, hh, quote_single, quote_continuous):
        # golden-section minimization of the purchase objective reproduces the closed
        # form; the objective is flat at the optimum, so the oracle runs in mpmath
        # (40 digits) to localize the argmin well below 1e-6
        import mpmath as mp

        mp.mp.dps = 40
        r, al = mp.mpf("0.02"), mp.mpf(2)
        lam_x, lam_y, m = mp.mpf("0.04"), mp.mpf("0.03"), mp.mpf("0.02")
        a_lin = al * r * mp.mpf("3.5") + lam_x + lam_y + m

        def ln_k(d, h_rate=0):
            log_b = (-al * r * d - m / r
                     + mp.log(lam_x * mp.exp(-al * mp.mpf("1.5") - lam_y / r)
                              + lam_y * mp.exp(-al * mp.mpf(2) - lam_x / r)))
            a_eff = a_lin - al * r * h_rate * d
            log_c = log_b - mp.log(r) + a_eff / r
            # y + ln y = log_c is y = W(e^{log_c}); mpmath's W is an independent route
            return mp.lambertw(mp.exp(log_c)) - a_eff / r

        def golden(fn, lo, hi):
            inv_phi = (mp.sqrt(5) - 1) / 2
            a, b = mp.mpf(lo), mp.mpf(hi)
            while b - a > mp.mpf("1e-9"):
                c, d = b - inv_phi * (b - a), a + inv_phi * (b - a)
                if fn(c) < fn(d):
                    b = d
                else:
                    a = c
            return float((a + b) / 2)

        ar_h = al * r * mp.mpf(7) / 9
        d_s = golden(lambda d: ln_k(d) + ar_h * d, 0.0, 150.0)
        assert d_s == pytest.approx(D_STAR, abs=1e-6)
        d_c = golden(lambda d: ln_k(d, h_rate=mp.mpf("0.07")), 0.0, 150.0)
        assert d_c == pytest.approx(D_BAR_STAR, abs=1e-6)


class TestConsumptionAndInvestment:
    def test_survivor_consumption_at_zero_wealth(self, mkt, hh, quote_single):
        sol = solve_policy(mkt, hh, quote_single)
        assert consumption_rate(sol, 0.0, survivor="x") == pytest.approx(3.5, rel=1e-14)

    def test_pre_death_consumption_at_optimum(self, mkt, hh, quote_single):
        # w = 10 with ln k(D*) = -8 gives 0.2 + 4 = 4.2
        sol = solve_policy(mkt, hh, quote_single)
        assert consumption_rate(sol, 10.0) == pytest.approx(4.2, abs=1e-9)

    def test_consumption_affine_slope_r(self, mkt, hh, quote_single):
        sol = solve_policy(mkt, hh, quote_single)
        for survivor in (None, "x", "y"):
            c1 = consumption_rate(sol, 7.0, survivor=survivor)
            c2 = consumption_rate(sol, 8.0, survivor=survivor)
            assert c2 - c1 == pytest.approx(mkt.r, rel=1e-9)

    def test_investment_level_and_scaling(self, mkt, hh):
        assert investment_rate(mkt, hh) == pytest.approx(25.0, rel=1e-14)
        doubled = HouseholdParams(hh.lambda_x, hh.lambda_y, hh.income_x, hh.income_y, 2 * hh.alpha)
        assert investment_rate(mkt, doubled) == pytest.approx(12.5, rel=1e-14)
        # hazards do not enter
        other = HouseholdParams(0.9, 0.8, hh.income_x, hh.income_y, hh.alpha)
        assert investment_rate(mkt, other) == investment_rate(mkt, hh)

    def test_investment_matches_golden_section_search(self, mkt, hh):
        coeff = solve_k(mkt, hh, D_STAR)
        found = investment_maximizer_search(mkt, hh, coeff, w=10.0)
        assert found == pytest.approx(investment_rate(mkt, hh), abs=1e-4)


class TestConsumptionJumps:
    def test_base_scenario_jumps(self, mkt, hh, quote_single):
        sol = solve_policy(mkt, hh, quote_single)
        assert sol.dc_x == pytest.approx(0.5476, abs=1e-4)
        assert sol.dc_y == pytest.approx(-0.2024, abs=1e-4)

    def test_closed_form_matches_benefit_form(self, mkt, hh, quote_single):
        sol = solve_policy(mkt, hh, quote_single)
        for survivor in ("x", "y"):
            assert consumption_jump(sol, survivor) == pytest.approx(
                consumption_jump_at_optimum(mkt, hh, quote_single, survivor), abs=1e-10)

    def test_jumps_identical_across_schemes_when_calibrated(self, mkt, hh):
        quote_s, quote_c = calibrate_to_loss_probability(mkt, hh, BASE_Q)
        sol_s = solve_policy(mkt, hh, quote_s)
        sol_c = solve_policy(mkt, hh, quote_c)
        assert sol_s.dc_x == pytest.approx(sol_c.dc_x, abs=1e-12)
        assert sol_s.dc_y == pytest.approx(sol_c.dc_y, abs=1e-12)

    def test_jump_increases_with_benefit(self, mkt, hh):
        grid = np.linspace(0.0, 80.0, 41)
        jumps = [mkt.r * d + 2.0 + (0.04 + mkt.m) / (hh.alpha * mkt.r)
                 + solve_k(mkt, hh, d).ln_k / hh.alpha for d in grid]
        assert all(b > a for a, b in zip(jumps, jumps[1:]))
        assert jumps[0] < jumps[-1]

    def test_continuous_jump_dominates(self, mkt, hh, quote_continuous):
        # delta_c_bar(D) >= delta_c(D), equality only at D = 0
        for d in (0.0, 1.0, 5.0, 20.0):
            k_s = solve_k(mkt, hh, d)
            k_c = solve_k_bar(mkt, hh, quote_continuous.rate, d)
            gap = (k_c.ln_k - k_s.ln_k) / hh.alpha
            if d == 0.0:
                assert gap == pytest.approx(0.0, abs=1e-14)
            else:
                assert gap > 0.0


class TestPreDeathDrift:
    def test_base_value(self, mkt, hh, quote_single):
        sol = solve_policy(mkt, hh, quote_single)
        assert pre_death_drift(sol) == pytest.approx(0.5, abs=1e-10)

    def test_drift_equal_across_calibrated_schemes(self):
        rng = np.random.default_rng(6)
        count = 0
        while count < 50:
            mkt, hh, q, quote_s, quote_c = random_calibrated(rng)
            sol_s = solve_policy(mkt, hh, quote_s)
            sol_c = solve_policy(mkt, hh, quote_c)
            if sol_s.d_star <= 0.0 or sol_c.d_star <= 0.0:
                continue
            count += 1
            assert pre_death_drift(sol_s) == pytest.approx(pre_death_drift(sol_c), rel=1e-9)

    def test_requires_interior_optimum(self, mkt, quote_single):
        hh_timid = HouseholdParams(0.04, 0.03, 2.0, 1.5, alpha=0.05)
        sol = solve_policy(mkt, hh_timid, quote_single)
        assert sol.d_star == 0.0 and sol.delta is None
        with pytest.raises(InteriorOptimumRequired):
            pre_death_drift(sol)


class TestAlphaThreshold:
    def test_against_bisection_oracle(self, mkt, hh, quote_single, quote_continuous):
        assert alpha_threshold(mkt, hh, quote_single) == pytest.approx(ALPHA_THRESHOLD, rel=1e-10)
        # at zero loading both schemes share the same crossing point
        assert alpha_threshold(mkt, hh, quote_continuous) == pytest.approx(ALPHA_THRESHOLD, rel=1e-10)

    def test_defining_property(self, mkt, hh, quote_single):
        a_th = alpha_threshold(mkt, hh, quote_single)
        at = HouseholdParams(hh.lambda_x, hh.lambda_y, hh.income_x, hh.income_y, a_th)
        above = HouseholdParams(hh.lambda_x, hh.lambda_y, hh.income_x, hh.income_y, a_th * 1.01)
        assert optimal_benefit_single(mkt, at, quote_single) == pytest.approx(0.0, abs=1e-8)
        assert optimal_benefit_single(mkt, above, quote_single) > 0.0

    def test_threshold_increases_with_loading(self, mkt, hh):
        thresholds = [alpha_threshold(mkt, hh, single_premium(mkt, hh, th))
                      for th in (0.0, 0.05, 0.1, 0.2)]
        assert all(b > a for a, b in zip(thresholds, thresholds[1:]))

    def test_no_income_means_no_threshold(self, mkt):
        hh0 = HouseholdParams(0.04, 0.03, 0.0, 0.0, 2.0)
        assert alpha_threshold(mkt, hh0, single_premium(mkt, hh0)) == math.inf


class TestComparativeStatics:
    def test_loading_sweep_decreases_benefit(self, mkt, hh):
        table = comparative_statics_sweep(mkt, hh, "theta", np.linspace(0.0, 0.28, 25))
        d = [row.d_star for row in table.rows]
        assert table.flags["d_star_nonincreasing"] is True
        assert table.flags["d_bar_star_nonincreasing"] is True
        interior = [v for v in d if v > 0.0]
        assert all(b < a for a, b in zip(interior, interior[1:]))
        assert d[-1] == 0.0  # clamp reached within the sweep

    def test_alpha_sweep_monotone_concave_and_limit(self, mkt, hh):
        table = comparative_statics_sweep(mkt, hh, "alpha", np.linspace(1.0, 8.0, 29))
        assert table.flags["d_star_nondecreasing"] is True
        assert table.flags["d_star_concave_in_alpha"] is True
        assert table.flags["d_bar_star_nondecreasing"] is True
        assert table.flags["d_bar_star_concave_in_alpha"] is True
        # benefit approaches the income-perpetuity bound as risk aversion explodes
        huge = HouseholdParams(hh.lambda_x, hh.lambda_y, hh.income_x, hh.income_y, 1e4)
        d_limit = optimal_benefit_single(mkt, huge, single_premium(mkt, huge))
        bound = max(hh.income_x, hh.income_y) / mkt.r
        assert d_limit < bound
        assert d_limit == pytest.approx(bound, rel=5e-3)

    def test_alpha_concavity_not_asserted_without_comparable_earners(self, mkt):
        # income and hazard rankings disagree: (I_x > I_y but lambda_x < lambda_y)
        hh_mixed = HouseholdParams(0.02, 0.06, 3.0, 0.5, 2.0)
        table = comparative_statics_sweep(mkt, hh_mixed, "alpha", np.linspace(1.0, 4.0, 13))
        assert table.flags["d_star_concave_in_alpha"] is None

    def test_income_sweep_increasing_convex(self, mkt, hh):
        table = comparative_statics_sweep(mkt, hh, "income_x", np.linspace(1.0, 4.0, 25))
        assert table.flags["d_star_nondecreasing"] is True
        assert table.flags["d_star_convex_in_income"] is True
        assert table.flags["d_bar_star_nondecreasing"] is True
        assert table.flags["d_bar_star_convex_in_income"] is True
        interior = np.array([row.d_star for row in table.rows if row.d_star > 0.0])
        assert np.all(np.diff(interior, 2) >= -1e-9)

    def test_hazard_sweep_asserts_nothing(self, mkt, hh):
        table = comparative_statics_sweep(mkt, hh, "lambda_x", np.linspace(0.01, 0.08, 8))
        assert table.flags["d_star_monotone"] is None

    def test_csv_contract(self, mkt, hh):
        table = comparative_statics_sweep(mkt, hh, "alpha", [1.0, 2.0, 3.0])
        lines = table.to_csv().strip().splitlines()
        assert lines[0] == "parameter,value,D_star,D_bar_star,dc_x,dc_y"
        assert len(lines) == 4
        assert lines[1].startswith("alpha,1,")


class TestOptimalityVerification:
    def test_base_scenario_passes_default_grid(self, mkt, hh, quote_single, quote_continuous):
        for quote in (quote_single, quote_continuous):
            report = verify_variational_inequality(mkt, hh, quote, tol=1e-6)
            assert report.passed
            assert report.max_hjb_residual < 1e-6
            assert report.equality_gap_at_optimum < 1e-10

    def test_boundary_identity_at_optimum(self, mkt, hh, quote_single):
        assert hold_region_boundary_gap(mkt, hh, quote_single) < 1e-10

    def test_tolerance_flag_respected(self, mkt, hh, quote_single):
        w_grid, d_grid = default_grids(mkt, hh, n_w=21, n_d=17)
        verify_variational_inequality(mkt, hh, quote_single, w_grid=w_grid, d_grid=d_grid,
                                      tol=1e-6)
        with pytest.raises(VerificationFailed):
            verify_variational_inequality(mkt, hh, quote_single, w_grid=w_grid, d_grid=d_grid,
                                          tol=1e-16)

    def test_zero_benefit_case_verifies(self, mkt, quote_single):
        hh_timid = HouseholdParams(0.04, 0.03, 2.0, 1.5, alpha=0.5)
        report = verify_variational_inequality(mkt, hh_timid, quote_single, tol=1e-6)
        assert report.passed

    def test_finite_difference_cross_check(self, mkt, hh, quote_single):
        gaps = finite_difference_check(mkt, hh, quote_single, w=10.0, d=D_STAR + 5.0)
        assert gaps["u_w"] < 1e-7
        assert gaps["u_ww"] < 1e-3  # second difference amplifies solver noise by 1/h^2
        assert gaps["u_d"] < 1e-5

    def test_random_draws_pass_coarse_grid(self):
        rng = np.random.default_rng(7)
        for _ in range(10):
            mkt, hh, q, quote_s, quote_c = random_calibrated(rng)
            w_grid = np.linspace(-10.0, 30.0, 11)
            d_grid = np.linspace(0.0, 1.5 * max(hh.income_x, hh.income_y) / mkt.r, 13)
            for quote in (quote_s, quote_c):
                report = verify_variational_inequality(mkt, hh, quote, w_grid=w_grid,
                                                       d_grid=d_grid, tol=1e-6)
                assert report.passed


class TestRuinInputsBuilder:
    def test_base_inputs(self, mkt, hh, quote_single):
        sol = solve_policy(mkt, hh, quote_single)
        ri = ruin_inputs(sol, 10.0)
        assert ri.c0 == pytest.approx(0.02 * (10.0 - quote_single.rate * sol.d_star) + 4.0, rel=1e-12)
        assert ri.delta == pytest.approx(0.5, abs=1e-12)
        assert ri.dc_x == sol.dc_x and ri.dc_y == sol.dc_y

    def test_requires_purchase(self, mkt, quote_single):
        hh_timid = HouseholdParams(0.04, 0.03, 2.0, 1.5, alpha=0.05)
        sol = solve_policy(mkt, hh_timid, quote_single)
        with pytest.raises(InteriorOptimumRequired):
            ruin_inputs(sol, 10.0)
