"""Signal-intensity optimization and cutoff/crossing distances.

``optimize_mu`` scans a coarse geometric grid of 16 intensities, then runs a
golden-section search on the bracket around the best grid point. The rate is
assumed unimodal inside that bracket. Decoy intensities are fixed inputs.
"""

from __future__ import annotations

import enum
import math
from collections.abc import Callable
from dataclasses import dataclass

import numpy as np

from decoy_lm05.channel import ChannelParams, IntensitySet, observe
from decoy_lm05.errors import NoPositiveRateError
from decoy_lm05.finite_bounds import Y1UpperMode
from decoy_lm05.key_rates import (
    F_EC,
    RatePoint,
    rate_bb84_infinite,
    rate_finite_a,
    rate_finite_b,
    rate_infinite,
    rate_nondecoy_lm05,
)

INV_PHI = (math.sqrt(5) - 1) / 2
N_SCAN = 16
MU_EPS = 1e-6


class RateFormula(enum.Enum):
    INFINITE = "infinite"
    FINITE_A_INFINITE = "finite_a_infinite"
    FINITE_A_GENUINE = "finite_a_genuine"
    FINITE_B = "finite_b"
    NONDECOY = "nondecoy"
    BB84 = "bb84"
    # e^-mu (mu + mu^2/2): probability of emitting one or two photons
    PROXY = "proxy"

    @property
    def uses_decoys(self) -> bool:
        return self in (RateFormula.FINITE_A_INFINITE, RateFormula.FINITE_A_GENUINE, RateFormula.FINITE_B)


@dataclass(frozen=True)
class OptimizeSpec:
    """Which rate to maximize over ``mu`` and where to look.

    ``mu_min`` defaults to ``max(nu1 + nu2 + 1e-6, 0.01)`` for decoy formulas
    and ``0.01`` otherwise.
    """

    formula: RateFormula = RateFormula.INFINITE
    nu1: float = 0.05
    nu2: float = 0.0
    mu_min: float | None = None
    mu_max: float = 2.0
    tolerance: float = 1e-5
    f_ec: float = F_EC

    def __post_init__(self) -> None:
        if not self.tolerance > 0:
            raise ValueError(f"tolerance must be > 0, got {self.tolerance}")
        lo = self.lower
        if not 0 < lo < self.mu_max:
            raise ValueError(f"empty mu interval [{lo}, {self.mu_max}]")
        if self.formula.uses_decoys and not lo > self.nu1 + self.nu2:
            raise ValueError(f"mu_min={lo} must exceed nu1 + nu2 = {self.nu1 + self.nu2}")

    @property
    def lower(self) -> float:
        if self.mu_min is not None:
            return self.mu_min
        if self.formula.uses_decoys:
            return max(self.nu1 + self.nu2 + MU_EPS, 0.01)
        return 0.01


def rate_at(params: ChannelParams, spec: OptimizeSpec, mu: float) -> float:
    """Evaluate the selected formula at a fixed signal intensity."""
    formula = spec.formula
    if formula is RateFormula.PROXY:
        return math.exp(-mu) * (mu + mu * mu / 2)
    if formula is RateFormula.INFINITE:
        return rate_infinite(params, mu, spec.f_ec)
    if formula is RateFormula.NONDECOY:
        return rate_nondecoy_lm05(params, mu, spec.f_ec)
    if formula is RateFormula.BB84:
        return rate_bb84_infinite(params, mu, spec.f_ec)
    intensities = IntensitySet(mu, spec.nu1, spec.nu2)
    obs = observe(params, intensities)
    if formula is RateFormula.FINITE_B:
        return rate_finite_b(obs, intensities, params, spec.f_ec)
    mode = Y1UpperMode.INFINITE if formula is RateFormula.FINITE_A_INFINITE else Y1UpperMode.GENUINE
    return rate_finite_a(obs, intensities, mode, params, spec.f_ec)


def golden_section_max(
    f: Callable[[float], float], a: float, b: float, tol: float = 1e-5
) -> tuple[float, float]:
    """Maximize a unimodal ``f`` on ``[a, b]``; returns ``(x, f(x))``."""
    a, b = min(a, b), max(a, b)
    c = b - INV_PHI * (b - a)
    d = a + INV_PHI * (b - a)
    fc, fd = f(c), f(d)
    while b - a > tol:
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - INV_PHI * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + INV_PHI * (b - a)
            fd = f(d)
    x = (a + b) / 2
    return x, f(x)


def maximize(
    f: Callable[[float], float], lo: float, hi: float, tol: float = 1e-5, n_scan: int = N_SCAN
) -> tuple[float, float]:
    """Grid pre-scan followed by golden-section refinement on the best bracket."""
    if not lo < hi:
        raise ValueError(f"empty interval [{lo}, {hi}]")
    grid = np.geomspace(lo, hi, n_scan)
    values = [f(float(x)) for x in grid]
    k = int(np.argmax(values))
    a = float(grid[max(k - 1, 0)])
    b = float(grid[min(k + 1, n_scan - 1)])
    x, fx = golden_section_max(f, a, b, tol)
    # the golden result can only lose to the grid if f is not unimodal on [a, b]
    if values[k] > fx:
        return float(grid[k]), values[k]
    return x, fx


def optimize_mu(params: ChannelParams, spec: OptimizeSpec) -> tuple[float, float]:
    """Signal intensity maximizing the selected rate, and that rate.

    A result with a negative rate is returned as is.
    """
    return maximize(lambda mu: rate_at(params, spec, mu), spec.lower, spec.mu_max, spec.tolerance)


def rate_point(params: ChannelParams, spec: OptimizeSpec, distance: float, mu: float | None = None) -> RatePoint:
    """Rate at ``distance``, at a fixed ``mu`` or at the optimal one when ``mu`` is None."""
    at_distance = params.at(distance)
    if mu is None:
        mu, rate = optimize_mu(at_distance, spec)
    else:
        rate = rate_at(at_distance, spec, mu)
    return RatePoint(distance, mu, rate)


def _optimized_rate(params: ChannelParams, spec: OptimizeSpec, distance: float) -> float:
    return optimize_mu(params.at(distance), spec)[1]


def cutoff_distance(
    params: ChannelParams, spec: OptimizeSpec, l_max: float, resolution: float = 0.1
) -> float:
    """Largest distance in ``[0, l_max]`` at which the optimized rate is positive.

    Found by bisection to within ``resolution`` km; returns ``l_max`` when the
    rate never reaches zero inside the range.
    """
    if _optimized_rate(params, spec, 0.0) <= 0:
        raise NoPositiveRateError(f"{spec.formula.value}: optimized rate is not positive at l = 0")
    if _optimized_rate(params, spec, l_max) > 0:
        return l_max
    lo, hi = 0.0, l_max
    while hi - lo > resolution:
        mid = (lo + hi) / 2
        if _optimized_rate(params, spec, mid) > 0:
            lo = mid
        else:
            hi = mid
    return lo


def crossing_distance(
    params: ChannelParams,
    spec_a: OptimizeSpec,
    spec_b: OptimizeSpec,
    l_max: float,
    resolution: float = 0.1,
) -> float | None:
    """Distance where two optimized rate curves intersect, or ``None``.

    Only a sign change of ``rate_a - rate_b`` between ``0`` and ``l_max`` is
    detected.
    """

    def gap(distance: float) -> float:
        return _optimized_rate(params, spec_a, distance) - _optimized_rate(params, spec_b, distance)

    g0, g1 = gap(0.0), gap(l_max)
    if g0 == 0 or g1 == 0 or (g0 > 0) == (g1 > 0):
        return None
    lo, hi = 0.0, l_max
    while hi - lo > resolution:
        mid = (lo + hi) / 2
        if (gap(mid) > 0) == (g0 > 0):
            lo = mid
        else:
            hi = mid
    return (lo + hi) / 2
