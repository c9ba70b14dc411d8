import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from glimmep.diagnostics import (GrowthConstants, build_mesh_curve, check_growth,
                                 curve_from_waves, glimm_F, glimm_Q, glimm_V, step_verdict,
                                 techimp_holds, total_variation)
from glimmep.gas import GasContext, State, invariants_array
from glimmep.riemann import solve_many


def brute_Q(waves):
    """Pairwise definition: same family, or a 2-shock left of a 1-shock."""
    sh = [w for w in waves if w[2] and w[3] > 0]
    sh.sort(key=lambda w: (w[0], w[1]))
    q = 0.0
    for i in range(len(sh)):
        for j in range(i + 1, len(sh)):
            a, b = sh[i], sh[j]
            if a[1] == b[1] or (a[1] == 2 and b[1] == 1):
                q += a[3] * b[3]
    return q


def test_empty_and_constant_row():
    ctx = GasContext(1.4)
    rho, u = np.full(6, 1.2), np.full(6, 0.3)
    b = solve_many(ctx, rho[:-1], u[:-1], rho[1:], u[1:])
    c = build_mesh_curve(0, b.strength1, b.strength2, b.shock1, b.shock2)
    assert len(c) == 0
    assert glimm_V(c) == 0.0 and glimm_Q(c) == 0.0


def test_single_two_shock():
    ctx = GasContext(1.4)
    # 2-shock from (1, 0) down to rho = 0.5
    from glimmep.wave_curves import shock_u
    left = State(1.0, 0.0)
    ur = shock_u(ctx, 2, left, 0.5)
    rho = np.array([1.0, 1.0, 0.5, 0.5])
    u = np.array([0.0, 0.0, ur, ur])
    b = solve_many(ctx, rho[:-1], u[:-1], rho[1:], u[1:])
    c = build_mesh_curve(0, b.strength1, b.strength2, b.shock1, b.shock2)
    shocks = c.strength[c.shock & (c.strength > 1e-10)]
    assert shocks.shape[0] == 1


def test_wave_count_recount(rng):
    s1 = np.where(rng.random(50) < 0.3, 0.0, rng.random(50))
    s2 = np.where(rng.random(50) < 0.3, 0.0, rng.random(50))
    c = build_mesh_curve(3, s1, s2, rng.random(50) < 0.5, rng.random(50) < 0.5)
    assert len(c) == np.count_nonzero(s1) + np.count_nonzero(s2)
    assert np.all(np.diff(c.position) >= 0)


def test_V_examples():
    assert glimm_V(curve_from_waves([(0, 1, False, 0.4)])) == 0.0
    assert glimm_V(curve_from_waves([(0, 1, True, 0.4), (3, 2, True, 0.25)])) == 0.65


def test_Q_examples():
    assert glimm_Q(curve_from_waves([(2, 1, True, 0.7)])) == 0.0
    assert glimm_Q(curve_from_waves([(0, 2, True, 0.3), (4, 1, True, 0.5)])) == pytest.approx(0.15)
    assert glimm_Q(curve_from_waves([(0, 1, True, 0.3), (4, 2, True, 0.5)])) == 0.0
    # same family approaches
    assert glimm_Q(curve_from_waves([(0, 1, True, 0.3), (4, 1, True, 0.5)])) == pytest.approx(0.15)


@settings(max_examples=200, deadline=None)
@given(st.lists(st.tuples(st.integers(0, 30), st.sampled_from([1, 2]), st.booleans(),
                          st.floats(0, 5)), max_size=40, unique_by=lambda w: (w[0], w[1])))
def test_Q_and_V_against_brute_force(waves):
    c = curve_from_waves(waves)
    assert glimm_Q(c) == pytest.approx(brute_Q(waves), rel=1e-14, abs=1e-14)
    assert glimm_V(c) == pytest.approx(math.fsum(w[3] for w in waves if w[2]), rel=1e-14, abs=1e-14)


def test_F():
    c = curve_from_waves([(0, 2, True, 0.3), (4, 1, True, 0.5)])
    assert glimm_F(c, 0.0) == glimm_V(c)
    assert glimm_F(c, 2.0) == pytest.approx(0.8 + 0.3)
    with pytest.raises(ValueError):
        glimm_F(c, -1.0)


def test_initial_F_bound():
    # F <= 2V <= 2 TV(r0, s0) on a row of small jumps with K = 4 C eps
    from glimmep.interaction_lab import estimate_C_hat

    ctx = GasContext(1.2)
    rng = np.random.default_rng(3)
    rho = np.exp(rng.normal(0, 0.05, 40))
    u = rng.normal(0, 0.05, 40)
    r, s = invariants_array(ctx, rho, u)
    tv = total_variation(r) + total_variation(s)
    C = estimate_C_hat(ctx, (rho.min(), rho.max()), samples=500)
    K = 4 * C * ctx.eps
    assert K * tv <= 1.0
    b = solve_many(ctx, rho[:-1], u[:-1], rho[1:], u[1:])
    c = build_mesh_curve(0, b.strength1, b.strength2, b.shock1, b.shock2)
    assert glimm_F(c, K) <= 2 * glimm_V(c) + 1e-15 <= 2 * tv + 1e-12


def test_F_additive_for_separated_departing_groups():
    # group A: only 1-shocks; group B right of it: only 2-shocks -> nothing approaches across
    a = [(0, 1, True, 0.2), (2, 1, True, 0.1)]
    b = [(10, 2, True, 0.3), (12, 2, True, 0.05)]
    K = 1.7
    ca, cb, cab = curve_from_waves(a), curve_from_waves(b), curve_from_waves(a + b)
    assert glimm_F(cab, K) == pytest.approx(glimm_F(ca, K) + glimm_F(cb, K), rel=1e-15)


def test_total_variation():
    assert total_variation(np.full(5, 2.0)) == 0.0
    assert total_variation([0.0, 0.0, 1.5, 1.5]) == 1.5
    assert total_variation([1.0]) == 0.0


def test_tv_invariants_vs_primitive(rng):
    # monotone data: TV(r)+TV(s) lies within the Lipschitz bounds of the transform
    ctx = GasContext(1.4)
    rho = np.sort(rng.uniform(0.5, 2.0, 30))
    u = np.sort(rng.uniform(-1, 1, 30))
    r, s = invariants_array(ctx, rho, u)
    cmin, cmax = ctx.sqrt_gamma * 0.5 ** ctx.eps, ctx.sqrt_gamma * 2.0 ** ctx.eps
    tv_rs = total_variation(r) + total_variation(s)
    lip_hi = 2 * total_variation(u) + 2 * (cmax / 0.5) * total_variation(rho)
    lip_lo = 2 * max(total_variation(u), (cmin / 2.0) * total_variation(rho))
    assert lip_lo - 1e-12 <= tv_rs <= lip_hi + 1e-12


def test_constants_against_hand_computation():
    gc = GrowthConstants(lam=0.25, dt=0.001, T=0.5, L=1.004, sigma_sup=0.1, sigma_tv=0.0,
                         C_T=0.2, C_prime_T=0.6, q_m=0.2)
    assert gc.L1 == pytest.approx(2 * 1.004 + 2 * 0.5 / 0.25)
    assert gc.A == pytest.approx(3.2)
    assert gc.A1 == pytest.approx(1.6)
    assert gc.B(2.0) == pytest.approx(8 * 0.8 * 0.1 + 8 * 0.2 * (2.0 * 0.1 * 0.001 + 2.0))
    assert gc.B1(2.0, 0.5) == pytest.approx(4 * 0.6 * 0.1 + 4 * 0.2 * 0.5)
    gc2 = GrowthConstants(0.25, 0.001, 0.5, 1.0, 0.1, 0.3, 0.2, 0.6, 0.2)
    x = 0.25 * gc2.A * gc2.L1
    assert gc2.A1 == pytest.approx(4 * math.exp(x) * 0.3 + 16 * 0.1)


def test_zero_sources_reduce_to_monotone_F():
    F = [1.0, 0.9, 0.9, 0.8]
    v = check_growth(F, [0.0] * 4, 0.0, 0.01, 0.03)
    assert v.all_pass
    v = check_growth([1.0, 1.1], [0.0, 0.0], 0.0, 0.01, 0.01)
    assert not v.all_pass and v.step == [False]


def test_step_verdict_and_forms():
    assert step_verdict(1.0, 1.0 * (1 + 2 * 0.01) + 3 * 0.01, 2.0, 3.0, 0.01)
    assert not step_verdict(1.0, 1.0 * (1 + 2 * 0.01) + 3 * 0.01 + 1e-6, 2.0, 3.0, 0.01)
    # growth exactly at the per-step rate passes every cumulative form
    A1, B1, dt, N = 2.0, 3.0, 0.01, 50
    F = [1.0]
    for _ in range(N):
        F.append(F[-1] * (1 + A1 * dt) + B1 * dt)
    v = check_growth(F, [B1] * (N + 1), A1, dt, N * dt)
    assert v.all_pass


def test_techimp():
    assert techimp_holds(1.0, 0.2, 0.3)
    assert not techimp_holds(1.2, 0.2, 0.3)
