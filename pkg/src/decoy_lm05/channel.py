"""Honest two-way fiber channel.

Bob's pulse crosses the fiber to Alice and back, so the fiber transmittance
carries twice the one-way length. Everything here describes a channel without
an eavesdropper: per-photon-number yields and error rates, and the aggregate
gains/QBERs an experiment would observe for each source intensity.

Defaults for :class:`ChannelParams` are the GYS fiber parameters.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

from decoy_lm05.errors import DegenerateChannelError, InvalidIntensityError

GYS_ALPHA = 0.21
GYS_ETA_AB = 0.045
GYS_Y0 = 1.7e-6
GYS_E_DET = 0.033


@dataclass(frozen=True)
class ChannelParams:
    """Physical setup of the fiber link.

    Attributes:
        alpha: Fiber loss coefficient in dB/km.
        eta_ab: Lumped detection/apparatus efficiency; encoding is lossless.
        y0: Dark-count yield per pulse.
        e_det: Probability that a signal photon lands in the wrong detector.
        e0: Error probability of a dark count.
        distance_km: One-way fiber length between Bob and Alice.
    """

    alpha: float = GYS_ALPHA
    eta_ab: float = GYS_ETA_AB
    y0: float = GYS_Y0
    e_det: float = GYS_E_DET
    e0: float = 0.5
    distance_km: float = 0.0

    def __post_init__(self) -> None:
        if not self.alpha > 0:
            raise ValueError(f"alpha must be > 0, got {self.alpha}")
        if not 0 < self.eta_ab <= 1:
            raise ValueError(f"eta_ab must lie in (0, 1], got {self.eta_ab}")
        if not 0 <= self.y0 < 1:
            raise ValueError(f"y0 must lie in [0, 1), got {self.y0}")
        if not 0 <= self.e_det < 0.5:
            raise ValueError(f"e_det must lie in [0, 1/2), got {self.e_det}")
        if not 0 <= self.e0 <= 1:
            raise ValueError(f"e0 must lie in [0, 1], got {self.e0}")
        if not self.distance_km >= 0:
            raise ValueError(f"distance_km must be >= 0, got {self.distance_km}")

    def at(self, distance_km: float) -> ChannelParams:
        """Same setup at another fiber length."""
        return replace(self, distance_km=distance_km)


@dataclass(frozen=True)
class IntensitySet:
    """Signal intensity ``mu`` and the two decoy intensities ``nu1 > nu2``."""

    mu: float
    nu1: float
    nu2: float = 0.0

    def __post_init__(self) -> None:
        if not self.mu > self.nu1 > self.nu2 >= 0:
            raise InvalidIntensityError(
                f"need mu > nu1 > nu2 >= 0, got mu={self.mu}, nu1={self.nu1}, nu2={self.nu2}"
            )
        if not self.nu1 + self.nu2 < self.mu:
            raise InvalidIntensityError(
                f"need nu1 + nu2 < mu, got {self.nu1} + {self.nu2} >= {self.mu}"
            )
        if not self.nu1 + self.nu2 < 1:
            raise InvalidIntensityError(f"need nu1 + nu2 < 1, got {self.nu1 + self.nu2}")


@dataclass(frozen=True)
class Observables:
    """Measured gains and QBERs for the signal and the two decoys."""

    q_mu: float
    e_mu: float
    q_nu1: float
    e_nu1: float
    q_nu2: float
    e_nu2: float


def transmittance(params: ChannelParams) -> float:
    """Overall single-photon survival probability ``t * eta_ab``.

    The fiber is traversed twice, so ``t = 10**(-alpha * 2l / 10)``.
    """
    t = 10.0 ** (-params.alpha * 2.0 * params.distance_km / 10.0)
    return t * params.eta_ab


def _eta_i(eta: float, i: int) -> float:
    # 1 - (1 - eta)**i without cancellation for small eta
    if eta >= 1.0:
        return 1.0 if i > 0 else 0.0
    return -math.expm1(i * math.log1p(-eta))


def yield_i(params: ChannelParams, i: int) -> float:
    """Detection probability given an ``i``-photon pulse was sent."""
    if i < 0:
        raise ValueError(f"photon number must be >= 0, got {i}")
    eta_i = _eta_i(transmittance(params), i)
    return params.y0 + eta_i - params.y0 * eta_i


def error_i(params: ChannelParams, i: int) -> float:
    """QBER conditioned on an ``i``-photon pulse."""
    if i < 0:
        raise ValueError(f"photon number must be >= 0, got {i}")
    eta_i = _eta_i(transmittance(params), i)
    y_i = params.y0 + eta_i - params.y0 * eta_i
    if y_i == 0:
        raise DegenerateChannelError(f"yield of the {i}-photon component is zero")
    return (params.e0 * params.y0 + params.e_det * eta_i) / y_i


def poisson_weight(intensity: float, i: int) -> float:
    """``exp(-intensity) * intensity**i / i!``."""
    if i == 0:
        return math.exp(-intensity)
    if intensity == 0:
        return 0.0
    return math.exp(-intensity + i * math.log(intensity) - math.lgamma(i + 1))


def gain_i(params: ChannelParams, intensity: float, i: int) -> float:
    """Joint probability of emitting ``i`` photons and getting a click."""
    return yield_i(params, i) * poisson_weight(intensity, i)


def total_gain_and_qber(params: ChannelParams, intensity: float) -> tuple[float, float]:
    """Overall gain ``Q`` and QBER ``E`` for a Poisson source.

    Both are the exact Poisson sums of the per-photon-number yields and
    errors: ``Q = 1 - (1 - Y0) exp(-eta mu)`` and
    ``E Q = e0 Y0 + e_det (1 - exp(-eta mu))``.
    """
    if intensity < 0:
        raise ValueError(f"intensity must be >= 0, got {intensity}")
    eta = transmittance(params)
    clicked = -math.expm1(-eta * intensity)
    q = clicked + params.y0 * math.exp(-eta * intensity)
    if q == 0:
        raise DegenerateChannelError("total gain is zero (no dark counts, no signal)")
    e = (params.e0 * params.y0 + params.e_det * clicked) / q
    return q, e


def observe(params: ChannelParams, intensities: IntensitySet) -> Observables:
    """The six quantities an honest experiment reports."""
    q_mu, e_mu = total_gain_and_qber(params, intensities.mu)
    q_nu1, e_nu1 = total_gain_and_qber(params, intensities.nu1)
    q_nu2, e_nu2 = total_gain_and_qber(params, intensities.nu2)
    return Observables(q_mu, e_mu, q_nu1, e_nu1, q_nu2, e_nu2)
