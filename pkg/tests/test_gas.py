import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from glimmep.errors import DomainError, VacuumError
from glimmep.gas import (GasContext, Invariants, Region, State, classify_region, eigenvalues,
                         from_invariants, invariants_array, sound_speed, to_invariants)

mp.mp.dps = 40


def mp_invariants(gamma, rho, u):
    g = mp.mpf(gamma)
    e = (g - 1) / 2
    h = mp.sqrt(g) * (mp.mpf(rho) ** e - 1) / e
    return mp.mpf(u) - h, mp.mpf(u) + h


def test_gamma_range():
    for g in (1.0, 2.0, 0.5):
        with pytest.raises(DomainError):
            GasContext(g)


@pytest.mark.parametrize("gamma, rho, expected", [
    (1.4, 1.0, math.sqrt(1.4)),
    (1.02, 1.0, math.sqrt(1.02)),
])
def test_sound_speed_at_unit_density(gamma, rho, expected):
    assert sound_speed(GasContext(gamma), rho) == pytest.approx(expected, rel=1e-15)


def test_sound_speed_oracle():
    c = sound_speed(GasContext(1.2), 2.0)
    assert c == pytest.approx(float(mp.sqrt(mp.mpf("1.2")) * mp.mpf(2) ** mp.mpf("0.1")), rel=1e-14)


def test_sound_speed_rejects_vacuum():
    with pytest.raises(VacuumError):
        sound_speed(GasContext(1.4), 0.0)


def test_eigenvalues():
    ctx = GasContext(1.4)
    assert eigenvalues(ctx, State(1.0, 0.0)) == pytest.approx((-math.sqrt(1.4), math.sqrt(1.4)))
    assert eigenvalues(ctx, State(1.0, 3.0)) == pytest.approx((3 - math.sqrt(1.4), 3 + math.sqrt(1.4)))
    l1, l2 = eigenvalues(GasContext(1.1), State(0.5, -1.0))
    c = float(mp.sqrt(mp.mpf("1.1")) * mp.mpf("0.5") ** mp.mpf("0.05"))
    assert l1 == pytest.approx(-1 - c, rel=1e-14)
    assert l2 == pytest.approx(-1 + c, rel=1e-14)


def test_invariants_examples():
    for g in (1.01, 1.4, 1.9):
        inv = to_invariants(GasContext(g), State(1.0, 5.0))
        assert (inv.r, inv.s) == (5.0, 5.0)
    inv = to_invariants(GasContext(1.2), State(2.0, 1.0))
    r, s = mp_invariants("1.2", 2, 1)
    assert inv.r == pytest.approx(float(r), rel=1e-14)
    assert inv.s == pytest.approx(float(s), rel=1e-14)
    assert inv.s - inv.r > 0


def test_from_invariants_fixed_points():
    ctx = GasContext(1.4)
    assert from_invariants(ctx, Invariants(0.0, 0.0)) == State(1.0, 0.0)
    assert from_invariants(ctx, Invariants(5.0, 5.0)) == State(1.0, 5.0)


def test_from_invariants_vacuum():
    ctx = GasContext(1.4)
    with pytest.raises(VacuumError):
        from_invariants(ctx, Invariants(0.0, ctx.vacuum_gap))


def test_small_eps_precision():
    # eps = 5e-4: naive (rho**eps - 1)/eps loses ~4 digits
    ctx = GasContext(1.001)
    for rho in (0.3, 1.0001, 7.0):
        inv = to_invariants(ctx, State(rho, 0.0))
        r, s = mp_invariants("1.001", rho, 0)
        assert inv.s == pytest.approx(float(s), rel=1e-14, abs=1e-300)


def test_round_trip_random(rng):
    for g in (1.01, 1.1, 1.3, 1.6):
        ctx = GasContext(g)
        scale = ctx.sqrt_gamma / ctx.eps
        r = rng.uniform(-5, 5, 10_000)
        gap = rng.uniform(ctx.vacuum_gap * 0.9, 3 * scale, 10_000)
        s = r + gap
        for k in range(0, 10_000, 7):
            st = from_invariants(ctx, Invariants(r[k], s[k]))
            inv = to_invariants(ctx, st)
            assert abs(inv.r - r[k]) <= 1e-10 * max(1.0, abs(r[k]), scale)
            assert abs(inv.s - s[k]) <= 1e-10 * max(1.0, abs(s[k]), scale)


@settings(max_examples=200, deadline=None)
@given(st.floats(1.01, 1.9), st.floats(1e-3, 1e3), st.floats(-10, 10))
def test_invariants_array_matches_scalar(g, rho, u):
    ctx = GasContext(g)
    r, s = invariants_array(ctx, np.array([rho]), np.array([u]))
    inv = to_invariants(ctx, State(rho, u))
    assert r[0] == pytest.approx(inv.r, rel=1e-14, abs=1e-14)
    assert s[0] == pytest.approx(inv.s, rel=1e-14, abs=1e-14)


def test_regions():
    assert classify_region(GasContext(1.4), State(1, 0), State(1, 0)) == Region.III
    for g in (1.05, 1.2, 1.4):
        assert classify_region(GasContext(g), State(1, 0), State(1, -1)) == Region.I
    assert classify_region(GasContext(1.2), State(1, 0), State(1, 1)) == Region.III
    assert classify_region(GasContext(1.4), State(2, 0), State(1, 0)) == Region.II
    assert classify_region(GasContext(1.4), State(1, 0), State(2, 0)) == Region.IV


def test_region_agrees_with_solver(rng):
    from glimmep.riemann import solve
    from conftest import random_pairs

    ctx = GasContext(1.2)
    for rl, ul, rr, ur in random_pairs(ctx, rng, 300):
        left, right = State(rl, ul), State(rr, ur)
        assert classify_region(ctx, left, right) == solve(ctx, left, right).region


def test_classify_vacuum():
    ctx = GasContext(1.2)
    with pytest.raises(VacuumError):
        classify_region(ctx, State(1, 0), State(1, 2 * ctx.sqrt_gamma / ctx.eps))
