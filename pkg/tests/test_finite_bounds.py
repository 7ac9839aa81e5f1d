import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from decoy_lm05.channel import ChannelParams, IntensitySet, Observables, observe, yield_i
from decoy_lm05.errors import DegenerateBoundError
from decoy_lm05.finite_bounds import (
    FiniteBounds,
    Y1UpperMode,
    e1_upper,
    e2_upper,
    estimate_finite,
    y0_lower,
    y1_lower,
    y1_upper,
    y2_lower,
)
from oracles import leq, random_intensities, random_params, truth

FIG1 = IntensitySet(0.45, 0.05, 0.0)


def blocked(y0: float) -> Observables:
    """Nothing but dark counts reaches the detectors."""
    return Observables(y0, 0.5, y0, 0.5, y0, 0.5)


def honest(params, s):
    return observe(params, s), truth(params, s.mu)


def test_y0_lower_is_exact_with_vacuum_decoy(gys):
    obs = observe(gys.at(20), FIG1)
    assert y0_lower(obs, FIG1) == gys.y0


def test_y0_lower_below_true_dark_count(gys):
    s = IntensitySet(0.45, 0.05, 0.01)
    assert y0_lower(observe(gys.at(20), s), s) <= gys.y0


def test_y0_lower_clamps_negative_quotient():
    s = IntensitySet(0.45, 0.05, 0.01)
    obs = Observables(1e-3, 0.03, 1e-2, 0.03, 1e-9, 0.03)
    assert y0_lower(obs, s) == 0.0


def test_y1_lower_below_true_yield(gys):
    obs, t = honest(gys.at(20), FIG1)
    y1_l = y1_lower(obs, FIG1, y0_lower(obs, FIG1))
    assert 0 < y1_l <= t.y1


def test_y1_lower_tightens_as_decoy_vanishes(gys):
    p = gys.at(20)
    y1 = yield_i(p, 1)
    ratios = []
    for nu1 in (0.1, 0.05, 0.01, 1e-3, 1e-4):
        s = IntensitySet(0.45, nu1, 0.0)
        obs = observe(p, s)
        ratios.append(y1_lower(obs, s, y0_lower(obs, s)) / y1)
    assert all(r <= 1 for r in ratios)
    assert all(a <= b for a, b in zip(ratios, ratios[1:]))
    assert ratios[3] > 0.99


def test_y1_lower_on_blocked_channel():
    assert y1_lower(blocked(0.0), FIG1, 0.0) == 0.0
    # the true single-photon yield of a blocked channel is the dark count itself
    assert 0 <= y1_lower(blocked(1e-6), FIG1, 1e-6) <= 1e-6


def test_y1_upper_modes(gys):
    p = gys.at(20)
    obs = observe(p, FIG1)
    assert y1_upper(obs, FIG1, Y1UpperMode.INFINITE, p) == yield_i(p, 1)
    genuine = y1_upper(obs, FIG1, Y1UpperMode.GENUINE)
    assert genuine == pytest.approx((obs.q_nu1 * math.exp(0.05) - gys.y0) / 0.05, rel=1e-13)
    assert genuine >= yield_i(p, 1)
    with pytest.raises(ValueError):
        y1_upper(obs, FIG1, Y1UpperMode.INFINITE)


def test_y2_lower_below_true_yield(gys):
    obs, t = honest(gys.at(20), FIG1)
    y0_l = y0_lower(obs, FIG1)
    for mode in Y1UpperMode:
        y1_u = y1_upper(obs, FIG1, mode, gys.at(20))
        assert y2_lower(obs, FIG1, y0_l, y1_u) <= t.y2


def test_y2_lower_clamps_on_blocked_channel():
    obs = blocked(1e-6)
    y1_u = y1_upper(obs, FIG1, Y1UpperMode.GENUINE)
    assert y2_lower(obs, FIG1, 1e-6, y1_u) == 0.0


def test_error_bounds_vanish_on_error_free_channel():
    p = ChannelParams(y0=0.0, e_det=0.0, distance_km=10)
    s = IntensitySet(0.45, 0.05, 0.01)
    b = estimate_finite(observe(p, s), s, Y1UpperMode.INFINITE, p)
    assert b.e1_u == pytest.approx(0.0, abs=1e-12)
    assert b.e2_u == pytest.approx(0.0, abs=1e-12)


def test_error_bounds_need_positive_yield(gys):
    obs = observe(gys, FIG1)
    with pytest.raises(DegenerateBoundError):
        e1_upper(obs, FIG1, 0.0)
    with pytest.raises(DegenerateBoundError):
        e2_upper(obs, FIG1, 0.0)


def test_estimate_finite_matches_individual_calls(gys):
    p = gys.at(20)
    obs = observe(p, FIG1)
    b = estimate_finite(obs, FIG1, Y1UpperMode.INFINITE, p)
    y0_l = y0_lower(obs, FIG1)
    y1_l = y1_lower(obs, FIG1, y0_l)
    y1_u = y1_upper(obs, FIG1, Y1UpperMode.INFINITE, p)
    y2_l = y2_lower(obs, FIG1, y0_l, y1_u)
    assert b == FiniteBounds(
        y0_l=y0_l,
        y1_l=y1_l,
        y1_u=y1_u,
        y2_l=y2_l,
        e1_u=e1_upper(obs, FIG1, y1_l),
        e2_u=e2_upper(obs, FIG1, y2_l),
        q1_l=y1_l * 0.45 * math.exp(-0.45),
        q2_l=y2_l * 0.45**2 / 2 * math.exp(-0.45),
    )


def test_estimate_finite_orderings_at_fig1_point(gys):
    p = gys.at(20)
    obs, t = honest(p, FIG1)
    b = estimate_finite(obs, FIG1, Y1UpperMode.INFINITE, p)
    assert b.y0_l <= t.y0
    assert b.y1_l <= t.y1
    assert leq(t.y1, b.y1_u)
    assert 0 < b.y2_l <= t.y2
    assert b.e1_u >= t.e1
    assert b.e2_u >= t.e2
    assert b.q1_l <= t.q1 and b.q2_l <= t.q2


def test_genuine_mode_drops_double_photon_estimate(gys):
    p = gys.at(20)
    obs = observe(p, FIG1)
    b = estimate_finite(obs, FIG1, Y1UpperMode.GENUINE, p)
    assert b.y2_l == 0.0
    assert b.e2_u is None and b.q2_l == 0.0


def test_soundness_sweep():
    rng = np.random.default_rng(7)
    for _ in range(2000):
        p = random_params(rng)
        s = random_intensities(rng)
        obs, t = honest(p, s)
        g = estimate_finite(obs, s, Y1UpperMode.GENUINE, p)
        inf = estimate_finite(obs, s, Y1UpperMode.INFINITE, p)
        assert leq(g.y0_l, t.y0)
        assert leq(g.y1_l, t.y1)
        assert leq(t.y1, g.y1_u)
        assert leq(g.y2_l, t.y2)
        assert leq(inf.y2_l, t.y2)
        assert leq(g.y2_l, inf.y2_l)
        if g.e1_u is not None:
            assert leq(t.e1, g.e1_u)
        if inf.e2_u is not None:
            assert leq(t.e2, inf.e2_u)


def test_e2_bracket_factorization():
    rng = np.random.default_rng(11)
    for _ in range(10_000):
        s = random_intensities(rng)
        mu, nu1, nu2 = s.mu, s.nu1, s.nu2
        bracket = (nu1**2 - nu2**2) / 2 * (mu - nu2) - (mu**2 - nu2**2) / 2 * (nu1 - nu2)
        factored = (nu1 - nu2) * (mu - nu2) * (nu1 - mu) / 2
        assert bracket < 0
        assert bracket == pytest.approx(factored, rel=1e-9, abs=1e-15)


@given(
    st.floats(0.0, 1.0),
    st.floats(0.0, 1.0),
    st.integers(4, 40),
)
def test_cubic_difference_dominates_higher_powers(x, y, i):
    # a = nu1/mu, b = nu2/mu with mu > nu1 + nu2, hence a + b < 1
    a, b = max(x, y), min(x, y)
    if a == b or a + b > 1:
        return
    assert a**3 - b**3 >= a**i - b**i - 1e-15


@given(
    st.floats(0.0, 0.45),
    st.floats(1e-3, 0.5),
    st.floats(1e-3, 2.0),
)
def test_y1_coefficient_positive_when_mu_exceeds_decoy_sum(nu2, gap, extra):
    nu1 = nu2 + gap
    mu = nu1 + nu2 + extra
    assert mu**2 * (nu1 - nu2) - (nu1**3 - nu2**3) > 0
