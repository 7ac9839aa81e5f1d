"""Secure key rates per signal pulse under individual attacks.

LM05 rates carry no sifting prefactor: every run is a message-mode run as far
as these formulas are concerned. Single- and double-photon contributions are
both charged ``tau(e)`` bits of privacy amplification per bit.

Rates are returned raw, including negative values.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

from decoy_lm05.channel import (
    ChannelParams,
    IntensitySet,
    Observables,
    error_i,
    gain_i,
    total_gain_and_qber,
)
from decoy_lm05.combined_bounds import estimate_combined
from decoy_lm05.finite_bounds import Y1UpperMode, estimate_finite

F_EC = 1.22


@dataclass(frozen=True)
class RatePoint:
    distance_km: float
    mu_used: float
    rate: float


def binary_entropy(e: float) -> float:
    if not 0.0 <= e <= 1.0:
        raise ValueError(f"binary entropy needs e in [0, 1], got {e}")
    if e == 0.0 or e == 1.0:
        return 0.0
    return -e * math.log2(e) - (1 - e) * math.log2(1 - e)


def tau(e: float) -> float:
    """Fraction of bits discarded in privacy amplification at error rate ``e``."""
    if not 0.0 <= e <= 1.0:
        raise ValueError(f"tau needs e in [0, 1], got {e}")
    if e >= 0.5:
        return 1.0
    return math.log1p(4 * e - 4 * e * e) / math.log(2)


def _correction_cost(q_mu: float, e_mu: float, f_ec: float) -> float:
    return q_mu * f_ec * binary_entropy(e_mu)


def _secret_fraction(gain: float, error: float | None) -> float:
    # a zero gain lower bound contributes nothing, whatever its error bound
    if gain <= 0 or error is None:
        return 0.0
    return gain * (1 - tau(error))


def rate_infinite(params: ChannelParams, mu: float, f_ec: float = F_EC) -> float:
    """Rate with perfectly known single- and double-photon gains and errors."""
    q_mu, e_mu = total_gain_and_qber(params, mu)
    rate = -_correction_cost(q_mu, e_mu, f_ec)
    for i in (1, 2):
        rate += _secret_fraction(gain_i(params, mu, i), error_i(params, i))
    return rate


def rate_finite_a(
    obs: Observables,
    intensities: IntensitySet,
    mode: Y1UpperMode = Y1UpperMode.GENUINE,
    params: ChannelParams | None = None,
    f_ec: float = F_EC,
) -> float:
    """Two-decoy rate with separate single- and double-photon bounds."""
    b = estimate_finite(obs, intensities, mode, params)
    rate = -_correction_cost(obs.q_mu, obs.e_mu, f_ec)
    rate += _secret_fraction(b.q1_l, b.e1_u)
    rate += _secret_fraction(b.q2_l, b.e2_u)
    return rate


def rate_finite_b(
    obs: Observables,
    intensities: IntensitySet,
    params: ChannelParams | None = None,
    f_ec: float = F_EC,
) -> float:
    """Two-decoy rate from the lumped single+double effective gain."""
    e0 = params.e0 if params is not None else 0.5
    b = estimate_combined(obs, intensities, e0)
    return -_correction_cost(obs.q_mu, obs.e_mu, f_ec) + _secret_fraction(b.q12_l, b.eff_err_u)


def rate_nondecoy_lm05(params: ChannelParams, mu: float, f_ec: float = F_EC) -> float:
    """Rate without decoys: every pulse with three or more photons is conceded.

    ``beta`` is the fraction of detections that can be attributed to pulses of
    at most two photons in the worst case; all errors are charged to them.
    """
    q_mu, e_mu = total_gain_and_qber(params, mu)
    p_multi = -math.expm1(-mu) - math.exp(-mu) * (mu + mu * mu / 2)
    beta = max(0.0, (q_mu - p_multi) / q_mu)
    cost = f_ec * binary_entropy(e_mu)
    if beta == 0.0:
        return -q_mu * cost
    return q_mu * (-cost + beta * (1 - tau(min(e_mu / beta, 1.0))))


def rate_bb84_infinite(params: ChannelParams, mu: float, f_ec: float = F_EC) -> float:
    """Infinite-decoy BB84 rate with 1/2 sifting over a one-way fiber."""
    # halving the length turns the two-way transmittance into the one-way one
    one_way = replace(params, distance_km=params.distance_km / 2)
    q_mu, e_mu = total_gain_and_qber(one_way, mu)
    e1 = error_i(one_way, 1)
    single = gain_i(one_way, mu, 1) * (1 - binary_entropy(min(e1, 1.0)))
    return 0.5 * (-_correction_cost(q_mu, e_mu, f_ec) + single)
