"""Decoy-state secure key rates for the two-way LM05 QKD protocol."""

from decoy_lm05.channel import ChannelParams, IntensitySet, Observables, observe
from decoy_lm05.combined_bounds import CombinedBounds, estimate_combined
from decoy_lm05.finite_bounds import FiniteBounds, Y1UpperMode, estimate_finite
from decoy_lm05.key_rates import (
    rate_bb84_infinite,
    rate_finite_a,
    rate_finite_b,
    rate_infinite,
    rate_nondecoy_lm05,
)
from decoy_lm05.optimizer import OptimizeSpec, RateFormula, crossing_distance, cutoff_distance, optimize_mu

__all__ = [
    "ChannelParams",
    "CombinedBounds",
    "FiniteBounds",
    "IntensitySet",
    "Observables",
    "OptimizeSpec",
    "RateFormula",
    "Y1UpperMode",
    "crossing_distance",
    "cutoff_distance",
    "estimate_combined",
    "estimate_finite",
    "observe",
    "optimize_mu",
    "rate_bb84_infinite",
    "rate_finite_a",
    "rate_finite_b",
    "rate_infinite",
    "rate_nondecoy_lm05",
]
