"""Analytic probabilities that the optimal consumption rate reaches zero.

Before the first death, consumption is an arithmetic Brownian motion started
at c0 > 0 with drift nu = r * delta and variance rate v^2 = 2 m / alpha^2.
With S = sqrt(nu^2 + (4 m / alpha^2)(lambda_x + lambda_y)) and the decay rates

    a = (S + nu) / v^2,    b = (S - nu) / v^2,

the chance of hitting zero before the first death is exp(-a c0).  Between
the deaths the probability splits by the geometry of (-dc_x, -dc_y, c0) into
six subcases; all six are evaluated through one closed form built from the
resolvent of the killed consumption process, so the subcase boundaries are
continuous by construction.

Convention: ``p_between`` is the probability that consumption hits zero
strictly between the deaths through its diffusion.  A consumption jump that
lands at or below zero at the first death is reported separately as
``p_jump_to_negative`` and is not part of ``p_total``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidParameter, LifecoverError, SingularParameter


@dataclass(frozen=True)
class RuinInputs:
    """Initial consumption rate, drift, first-death jumps, and model constants."""

    c0: float
    delta: float
    dc_x: float
    dc_y: float
    lambda_x: float
    lambda_y: float
    m: float
    r: float
    alpha: float

    def __post_init__(self):
        if not (self.c0 > 0.0):
            raise InvalidParameter(f"initial consumption must be positive, got c0={self.c0}")
        if self.lambda_x <= 0.0 or self.lambda_y <= 0.0:
            raise InvalidParameter("mortality hazards must be positive")
        if self.m <= 0.0 or self.r <= 0.0 or self.alpha <= 0.0:
            raise InvalidParameter("need m > 0, r > 0, alpha > 0")

    @property
    def nu(self) -> float:
        """Drift of the consumption rate before the first death."""
        return self.r * self.delta

    @property
    def v2(self) -> float:
        """Variance rate of the consumption process, 2 m / alpha^2."""
        return 2.0 * self.m / self.alpha ** 2

    @property
    def s_root(self) -> float:
        """S = sqrt(nu^2 + 2 (lambda_x + lambda_y) v^2) >= |nu|."""
        lam = self.lambda_x + self.lambda_y
        s = math.sqrt(self.nu ** 2 + 2.0 * lam * self.v2)
        if s <= 0.0:  # pragma: no cover - impossible for validated inputs
            raise SingularParameter("degenerate inputs: S = 0")
        return s

    @property
    def decay_down(self) -> float:
        """a = (S + nu)/v^2: exponential rate of the pre-first-death ruin probability.

        Written as 2 lam / (S - nu) when nu < 0: S - |nu| cancels
        catastrophically once the mortality term is small next to the drift.
        """
        if self.nu >= 0.0:
            return (self.s_root + self.nu) / self.v2
        lam = self.lambda_x + self.lambda_y
        return 2.0 * lam / (self.s_root - self.nu)

    @property
    def decay_up(self) -> float:
        """b = (S - nu)/v^2: decay rate of the upper tail of the killed process."""
        if self.nu >= 0.0:
            lam = self.lambda_x + self.lambda_y
            return 2.0 * lam / (self.s_root + self.nu)
        return (self.s_root - self.nu) / self.v2


@dataclass(frozen=True)
class RuinReport:
    """Zero-consumption probabilities with the case labels that produced them."""

    p_before: float
    p_between: float
    p_total: float
    p_jump_to_negative: float
    case: str
    subcase: str
    inputs: RuinInputs

    def to_dict(self) -> dict:
        return {
            "p_before": self.p_before,
            "p_between": self.p_between,
            "p_total": self.p_total,
            "p_jump_to_negative": self.p_jump_to_negative,
            "case": self.case,
            "subcase": self.subcase,
            "inputs": {
                "c0": self.inputs.c0, "delta": self.inputs.delta,
                "dc_x": self.inputs.dc_x, "dc_y": self.inputs.dc_y,
                "lambda_x": self.inputs.lambda_x, "lambda_y": self.inputs.lambda_y,
                "m": self.inputs.m, "r": self.inputs.r, "alpha": self.inputs.alpha,
            },
        }


def _expdiff(e_lo: float, u: float, ratio: float) -> float:
    """(exp(e_lo + u) - exp(e_lo)) * ratio / u, stable near u = 0 (including u = 0 exactly).

    Callers pass ratio = u / divisor in closed form so the removable
    singularity at a vanishing divisor never divides by zero.
    """
    if abs(u) < 1e-7:
        return math.exp(e_lo) * ratio * (1.0 + 0.5 * u + u * u / 6.0)
    return (math.exp(e_lo + u) - math.exp(e_lo)) * ratio / u


def _check_range(p: float, label: str) -> float:
    if not (-1e-9 <= p <= 1.0 + 1e-9):
        raise LifecoverError(f"{label} outside [0, 1] beyond tolerance: {p!r}")
    return min(max(p, 0.0), 1.0)


def prob_ruin_before_first_death(ri: RuinInputs) -> float:
    """P(consumption hits zero before the first death) = exp(-a c0)."""
    return _check_range(math.exp(-ri.decay_down * ri.c0), "p_before")


def _survivor_term(ri: RuinInputs, jump: float) -> float:
    """Per-survivor diffusive-ruin factor: resolvent mass against the post-jump hit probability.

    Conditions on surviving to the first death with consumption y > 0, the
    jump landing at y + jump > 0, and the post-death diffusion hitting zero
    before the second death (probability exp(-alpha (y + jump))).
    """
    x, al, s = ri.c0, ri.alpha, ri.s_root
    a, b = ri.decay_down, ri.decay_up
    z = max(-jump, 0.0)
    if z <= x:
        scale = math.exp(-al * max(jump, 0.0))
        t_mid = _expdiff(-a * (x - z), (a - al) * (x - z), x - z)
        t_tail = (math.exp(-al * (x - z)) - math.exp(-a * x - b * z)) / (b + al)
        return scale * (t_mid + t_tail) / s
    return math.exp(-b * (z - x)) * -math.expm1(-(a + b) * x) / ((b + al) * s)


def _jump_mass(ri: RuinInputs, jump: float) -> float:
    """Per-survivor probability that the first-death jump itself lands at or below zero."""
    x, s = ri.c0, ri.s_root
    a, b = ri.decay_down, ri.decay_up
    z = max(-jump, 0.0)
    if z == 0.0:
        return 0.0
    if z <= x:
        m1 = _expdiff(-a * x, a * z, z)
        m2 = math.exp(-a * x) * _expdiff(-b * z, b * z, z)
        return (m1 - m2) / s
    m1 = _expdiff(-a * x, a * x, x)
    m2 = _expdiff(-b * (z - x), b * (z - x), z - x)
    m3 = math.exp(-a * x) * _expdiff(-b * z, b * z, z)
    return (m1 + m2 - m3) / s


def _classify(ri: RuinInputs) -> tuple[str, str]:
    """Master case from the jump signs, subcase from where c0 falls among the thresholds."""
    hi, lo = max(ri.dc_x, ri.dc_y), min(ri.dc_x, ri.dc_y)
    if lo >= 0.0:
        return "I", "A"
    if hi >= 0.0:
        return "II", ("D" if ri.c0 <= -lo else "B")
    if ri.c0 <= -hi:
        return "III", "F"
    return "III", ("E" if ri.c0 <= -lo else "C")


def prob_ruin_between_deaths(ri: RuinInputs) -> tuple[float, str]:
    """P(consumption diffuses to zero strictly between the deaths), with the subcase label.

    The survivor's jump pairs with the other earner's death intensity:
    survivor x arrives at rate lambda_y and vice versa.
    """
    p = ri.lambda_y * _survivor_term(ri, ri.dc_x) + ri.lambda_x * _survivor_term(ri, ri.dc_y)
    return _check_range(p, "p_between"), _classify(ri)[1]


def prob_jump_to_negative(ri: RuinInputs) -> float:
    """P(the consumption jump at the first death lands at or below zero)."""
    p = ri.lambda_y * _jump_mass(ri, ri.dc_x) + ri.lambda_x * _jump_mass(ri, ri.dc_y)
    return _check_range(p, "p_jump_to_negative")


def prob_ruin_total(ri: RuinInputs) -> RuinReport:
    """Total zero-consumption probability report: first-death term plus the applicable subcase."""
    p_before = prob_ruin_before_first_death(ri)
    p_between, subcase = prob_ruin_between_deaths(ri)
    case, _ = _classify(ri)
    return RuinReport(
        p_before=p_before,
        p_between=p_between,
        p_total=_check_range(p_before + p_between, "p_total"),
        p_jump_to_negative=prob_jump_to_negative(ri),
        case=case,
        subcase=subcase,
        inputs=ri,
    )


def ruin_density_before_first_death(ri: RuinInputs, t):
    """Defective first-passage density of the pre-first-death ruin time.

    f(t) = c0 / (v sqrt(2 pi t^3)) * exp(-(c0 + nu t)^2 / (2 v^2 t)); its
    total mass is exp(-2 nu c0 / v^2) when the drift nu is positive (ruin
    can be escaped) and 1 otherwise.
    """
    t_arr = np.asarray(t, dtype=float)
    if np.any(t_arr <= 0.0):
        raise InvalidParameter("density is defined for t > 0")
    v = math.sqrt(ri.v2)
    dens = ri.c0 / (v * np.sqrt(2.0 * math.pi * t_arr ** 3)) * np.exp(
        -((ri.c0 + ri.nu * t_arr) ** 2) / (2.0 * ri.v2 * t_arr))
    return float(dens) if dens.ndim == 0 else dens
