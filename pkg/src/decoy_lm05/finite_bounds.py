"""Two-decoy bounds on the single- and double-photon yields and error rates.

Yield lower bounds are clamped to ``[0, 1]`` and error upper bounds to
``[0, 1/2]``. An error bound for a photon number whose yield lower bound is
zero is undefined; those functions raise :class:`DegenerateBoundError` and
:func:`estimate_finite` stores ``None`` instead.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from decoy_lm05.channel import ChannelParams, IntensitySet, Observables, yield_i
from decoy_lm05.errors import DegenerateBoundError, InvalidIntensityError


class Y1UpperMode(enum.Enum):
    """Where the single-photon yield upper bound comes from.

    ``INFINITE`` takes the honest-channel value ``Y1`` (assumes no tampering).
    ``GENUINE`` solves the two-decoy inequality with ``Y2 = 0``, which is a
    true upper bound but in practice zeroes the double-photon estimate.
    """

    INFINITE = "infinite"
    GENUINE = "genuine"


@dataclass(frozen=True)
class FiniteBounds:
    y0_l: float
    y1_l: float
    y1_u: float
    y2_l: float
    e1_u: float | None
    e2_u: float | None
    q1_l: float
    q2_l: float


def _clamp(x: float, lo: float, hi: float) -> float:
    return min(max(x, lo), hi)


def _scaled_gains(obs: Observables, s: IntensitySet) -> tuple[float, float, float]:
    return (
        obs.q_mu * math.exp(s.mu),
        obs.q_nu1 * math.exp(s.nu1),
        obs.q_nu2 * math.exp(s.nu2),
    )


def y0_lower(obs: Observables, intensities: IntensitySet) -> float:
    """Dark-count yield lower bound from the two decoys."""
    nu1, nu2 = intensities.nu1, intensities.nu2
    if nu1 == nu2:
        raise InvalidIntensityError("nu1 == nu2")
    _, a1, a2 = _scaled_gains(obs, intensities)
    return _clamp((nu1 * a2 - nu2 * a1) / (nu1 - nu2), 0.0, 1.0)


def y1_lower(obs: Observables, intensities: IntensitySet, y0_l: float) -> float:
    """Single-photon yield lower bound."""
    mu, nu1, nu2 = intensities.mu, intensities.nu1, intensities.nu2
    denom = mu * (nu1 - nu2) - nu1**2 + nu2**2
    if denom <= 0:
        raise InvalidIntensityError(f"mu(nu1-nu2) - nu1^2 + nu2^2 = {denom} <= 0")
    am, a1, a2 = _scaled_gains(obs, intensities)
    value = mu / denom * (a1 - a2 - (nu1**2 - nu2**2) / mu**2 * (am - y0_l))
    return _clamp(value, 0.0, 1.0)


def y1_upper(
    obs: Observables,
    intensities: IntensitySet,
    mode: Y1UpperMode = Y1UpperMode.GENUINE,
    params: ChannelParams | None = None,
) -> float:
    """Single-photon yield upper bound; ``params`` is needed for ``INFINITE``."""
    if mode is Y1UpperMode.INFINITE:
        if params is None:
            raise ValueError("Y1UpperMode.INFINITE needs channel parameters")
        return yield_i(params, 1)
    nu1, nu2 = intensities.nu1, intensities.nu2
    if nu1 == nu2:
        raise InvalidIntensityError("nu1 == nu2")
    _, a1, a2 = _scaled_gains(obs, intensities)
    return _clamp((a1 - a2) / (nu1 - nu2), 0.0, 1.0)


def y2_lower(obs: Observables, intensities: IntensitySet, y0_l: float, y1_u: float) -> float:
    """Double-photon yield lower bound.

    ``Y1`` enters with a negative sign, so it must be an upper bound here.
    """
    mu, nu1, nu2 = intensities.mu, intensities.nu1, intensities.nu2
    cube = nu1**3 - nu2**3
    denom = (nu1**2 - nu2**2) * mu - cube
    if denom <= 0:
        raise InvalidIntensityError(f"(nu1^2-nu2^2)mu - nu1^3 + nu2^3 = {denom} <= 0")
    am, a1, a2 = _scaled_gains(obs, intensities)
    y1_coeff = (mu**2 * (nu1 - nu2) - cube) / mu**2
    inner = y1_u * y1_coeff + cube / mu**3 * (am - y0_l)
    return _clamp(2 * mu * (a1 - a2 - inner) / denom, 0.0, 1.0)


def _error_differences(obs: Observables, s: IntensitySet) -> tuple[float, float]:
    em = obs.e_mu * obs.q_mu * math.exp(s.mu)
    e1 = obs.e_nu1 * obs.q_nu1 * math.exp(s.nu1)
    e2 = obs.e_nu2 * obs.q_nu2 * math.exp(s.nu2)
    return e1 - e2, em - e2


def e1_upper(obs: Observables, intensities: IntensitySet, y1_l: float) -> float:
    """Single-photon error upper bound, capped at 1/2."""
    if y1_l <= 0:
        raise DegenerateBoundError("single-photon yield lower bound is zero")
    mu, nu1, nu2 = intensities.mu, intensities.nu1, intensities.nu2
    d_nu, d_mu = _error_differences(obs, intensities)
    num = d_nu * (mu**2 - nu2**2) - d_mu * (nu1**2 - nu2**2)
    bracket = (nu1 - nu2) * (mu**2 - nu2**2) - (mu - nu2) * (nu1**2 - nu2**2)
    return _clamp(num / (y1_l * bracket), 0.0, 0.5)


def e2_upper(obs: Observables, intensities: IntensitySet, y2_l: float) -> float:
    """Double-photon error upper bound, capped at 1/2.

    Numerator and bracket are both negative on honest data; the bracket
    factors to ``(nu1-nu2)(mu-nu2)(nu1-mu)/2``.
    """
    if y2_l <= 0:
        raise DegenerateBoundError("double-photon yield lower bound is zero")
    mu, nu1, nu2 = intensities.mu, intensities.nu1, intensities.nu2
    d_nu, d_mu = _error_differences(obs, intensities)
    num = d_nu * (mu - nu2) - d_mu * (nu1 - nu2)
    bracket = (nu1**2 - nu2**2) / 2 * (mu - nu2) - (mu**2 - nu2**2) / 2 * (nu1 - nu2)
    return _clamp(num / (y2_l * bracket), 0.0, 0.5)


def estimate_finite(
    obs: Observables,
    intensities: IntensitySet,
    mode: Y1UpperMode = Y1UpperMode.GENUINE,
    params: ChannelParams | None = None,
) -> FiniteBounds:
    mu = intensities.mu
    y0_l = y0_lower(obs, intensities)
    y1_l = y1_lower(obs, intensities, y0_l)
    y1_u = y1_upper(obs, intensities, mode, params)
    y2_l = y2_lower(obs, intensities, y0_l, y1_u)
    e1_u = e1_upper(obs, intensities, y1_l) if y1_l > 0 else None
    e2_u = e2_upper(obs, intensities, y2_l) if y2_l > 0 else None
    return FiniteBounds(
        y0_l=y0_l,
        y1_l=y1_l,
        y1_u=y1_u,
        y2_l=y2_l,
        e1_u=e1_u,
        e2_u=e2_u,
        q1_l=y1_l * math.exp(-mu) * mu,
        q2_l=y2_l * math.exp(-mu) * mu**2 / 2,
    )
