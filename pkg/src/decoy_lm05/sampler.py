"""Monte-Carlo finite-statistics observables.

Each pulse gets a Poisson photon number, clicks with probability ``Y_n`` and
errs with probability ``e_n``. Pulses are not simulated one by one: the
photon-number histogram of ``N`` pulses is drawn as one multinomial, then
clicks and errors per photon number as binomials. That is the same joint
distribution at a cost independent of ``N``.

Randomness comes from numpy's PCG64 bit generator seeded with ``seed``,
whose output stream is fixed across platforms. The signal, decoy 1 and
decoy 2 streams are spawned from one ``SeedSequence`` so they are independent
and each is reproducible on its own.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from decoy_lm05.channel import ChannelParams, IntensitySet, Observables, error_i, poisson_weight, yield_i

log = logging.getLogger(__name__)

N_MAX = 50


@dataclass(frozen=True)
class SampleSpec:
    pulses_per_intensity: int
    seed: int = 0

    def __post_init__(self) -> None:
        if self.pulses_per_intensity < 1:
            raise ValueError(f"pulses_per_intensity must be >= 1, got {self.pulses_per_intensity}")
        if not 0 <= self.seed < 2**64:
            raise ValueError(f"seed must be a 64-bit unsigned integer, got {self.seed}")


@dataclass(frozen=True)
class SampleCounts:
    """Raw counts per intensity, in the order (mu, nu1, nu2)."""

    pulses: int
    detections: tuple[int, int, int]
    errors: tuple[int, int, int]

    @property
    def empty(self) -> tuple[bool, bool, bool]:
        """Intensities without a single click (their QBER is reported as 0)."""
        return tuple(d == 0 for d in self.detections)

    def observables(self) -> Observables:
        n = self.pulses
        q = [d / n for d in self.detections]
        e = [err / d if d else 0.0 for d, err in zip(self.detections, self.errors)]
        return Observables(q[0], e[0], q[1], e[1], q[2], e[2])


def _photon_number_probs(intensity: float) -> np.ndarray:
    p = np.array([poisson_weight(intensity, n) for n in range(N_MAX + 1)])
    # tail beyond N_MAX is < 1e-60 for intensity <= 2; fold it into the last bin
    p[-1] += max(0.0, 1.0 - p.sum())
    return p / p.sum()


def _sample_one(rng: np.random.Generator, params: ChannelParams, intensity: float, n: int) -> tuple[int, int]:
    histogram = rng.multinomial(n, _photon_number_probs(intensity))
    yields = np.array([yield_i(params, k) for k in range(N_MAX + 1)])
    clicks = rng.binomial(histogram, yields)
    errors_n = np.array([error_i(params, k) if yields[k] > 0 else 0.0 for k in range(N_MAX + 1)])
    errs = rng.binomial(clicks, errors_n)
    return int(clicks.sum()), int(errs.sum())


def sample_counts(params: ChannelParams, intensities: IntensitySet, spec: SampleSpec) -> SampleCounts:
    streams = np.random.SeedSequence(spec.seed).spawn(3)
    detections, errors = [], []
    for stream, intensity in zip(streams, (intensities.mu, intensities.nu1, intensities.nu2)):
        rng = np.random.Generator(np.random.PCG64(stream))
        d, e = _sample_one(rng, params, intensity, spec.pulses_per_intensity)
        detections.append(d)
        errors.append(e)
    return SampleCounts(spec.pulses_per_intensity, tuple(detections), tuple(errors))


def sample_observables(params: ChannelParams, intensities: IntensitySet, spec: SampleSpec) -> Observables:
    """Empirical gains and QBERs from ``spec.pulses_per_intensity`` pulses each."""
    counts = sample_counts(params, intensities, spec)
    for name, empty in zip(("mu", "nu1", "nu2"), counts.empty):
        if empty:
            log.warning("no detections for intensity %s; its QBER is set to 0", name)
    return counts.observables()
