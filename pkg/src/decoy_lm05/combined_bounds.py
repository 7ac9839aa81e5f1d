"""Joint lower bound on ``Y1 + Y2`` and the effective single+double gain/error.

Instead of bounding the double-photon yield separately (which needs an upper
bound on ``Y1``), the single- and double-photon contributions are lumped into
one effective gain ``Q12`` with one effective error rate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from decoy_lm05.channel import IntensitySet, Observables
from decoy_lm05.errors import DegenerateBoundError, InvalidIntensityError
from decoy_lm05.finite_bounds import y0_lower, y1_lower


@dataclass(frozen=True)
class CombinedBounds:
    y0_l: float
    y1_l: float
    y12_l: float
    q12_l: float
    eff_err_u: float | None


def y12_lower(obs: Observables, intensities: IntensitySet, y0_l: float, y1_l: float) -> float:
    """Lower bound on ``Y1 + Y2``, reusing the single-photon lower bound."""
    mu, nu1, nu2 = intensities.mu, intensities.nu1, intensities.nu2
    cube = nu1**3 - nu2**3
    denom = nu1 - nu2 - cube / (2 * mu)
    if denom <= 0:
        raise InvalidIntensityError(f"nu1 - nu2 - (nu1^3-nu2^3)/(2mu) = {denom} <= 0")
    am = obs.q_mu * math.exp(mu)
    a1 = obs.q_nu1 * math.exp(nu1)
    a2 = obs.q_nu2 * math.exp(nu2)
    single = y1_l * mu - y1_l * mu**2 / 2
    value = (a1 - a2 - cube / mu**3 * (am - y0_l - single)) / denom
    return min(max(value, 0.0), 1.0)


def q12_lower(y12_l: float, y1_l: float, mu: float) -> float:
    """Effective single+double photon gain lower bound.

    The ``Y1`` term ``Y1 mu - Y1 mu^2/2`` changes sign at ``mu = 2``.
    """
    if mu < 0:
        raise ValueError(f"mu must be >= 0, got {mu}")
    value = (y12_l / 2 * mu**2 + (y1_l * mu - y1_l * mu**2 / 2)) * math.exp(-mu)
    return max(value, 0.0)


def eff_error_upper(
    obs: Observables, intensities: IntensitySet, y0_l: float, q12_l: float, e0: float = 0.5
) -> float:
    """Upper bound on the effective error of the lumped gain, capped at 1/2."""
    if q12_l <= 0:
        raise DegenerateBoundError("effective gain lower bound is zero")
    value = (obs.e_mu * obs.q_mu - e0 * y0_l * math.exp(-intensities.mu)) / q12_l
    return min(max(value, 0.0), 0.5)


def estimate_combined(obs: Observables, intensities: IntensitySet, e0: float = 0.5) -> CombinedBounds:
    y0_l = y0_lower(obs, intensities)
    y1_l = y1_lower(obs, intensities, y0_l)
    y12_l = y12_lower(obs, intensities, y0_l, y1_l)
    q12_l = q12_lower(y12_l, y1_l, intensities.mu)
    eff = eff_error_upper(obs, intensities, y0_l, q12_l, e0) if q12_l > 0 else None
    return CombinedBounds(y0_l=y0_l, y1_l=y1_l, y12_l=y12_l, q12_l=q12_l, eff_err_u=eff)
