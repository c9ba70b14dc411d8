import math

import mpmath as mp
import numpy as np
import pytest

from glimmep.errors import DomainError
from glimmep.gas import GasContext, Invariants, State, sound_speed, to_invariants
from glimmep.wave_curves import (g1, g1_derivatives, g2, g2_derivatives, inverse_shock_curve,
                                 rarefaction_u, shock_ratio, shock_speed, shock_u)

mp.mp.dps = 45


def mp_drops(gamma, rho0, alpha):
    """(r-drop, s-drop) along the Hugoniot locus rho = alpha rho0 (mpmath)."""
    g = mp.mpf(gamma)
    e = (g - 1) / 2
    rho0 = mp.mpf(rho0)
    rho = alpha * rho0
    du = mp.sqrt((rho ** g - rho0 ** g) * (rho - rho0) / (rho * rho0))
    dh = mp.sqrt(g) * (rho ** e - rho0 ** e) / e
    return du + dh, du - dh


def mp_g(family, gamma, a, rho0):
    """Bisection on the monotone alpha-map; independent of the t-inversion."""
    a = mp.mpf(a)
    if family == 1:
        lo, hi = mp.mpf(1), mp.mpf(2)
        while mp_drops(gamma, rho0, hi)[0] < a:
            hi *= 2
        f = lambda al: mp_drops(gamma, rho0, al)[0] - a
    else:
        lo, hi = mp.mpf("0.5"), mp.mpf(1)
        while mp_drops(gamma, rho0, lo)[1] < a:
            lo /= 2
        f = lambda al: mp_drops(gamma, rho0, al)[1] - a
    for _ in range(200):
        mid = (lo + hi) / 2
        v = f(mid)
        if family == 1:
            lo, hi = (mid, hi) if v < 0 else (lo, mid)
        else:
            lo, hi = (lo, mid) if v < 0 else (mid, hi)
        if hi - lo < mp.mpf(10) ** -40:
            break
    r_drop, s_drop = mp_drops(gamma, rho0, (lo + hi) / 2)
    return s_drop if family == 1 else r_drop


def test_shock_u_examples():
    ctx = GasContext(1.2)
    assert shock_u(ctx, 1, State(1, 0), 1.0 + 1e-14) == pytest.approx(0.0, abs=1e-6)
    want = -math.sqrt((2 ** 1.2 - 1) * (2 - 1) / 2)
    assert shock_u(ctx, 1, State(1, 0), 2.0) == pytest.approx(want, rel=1e-14)
    want2 = -math.sqrt((2 ** 1.4 - 1) * (2 - 1) / 2)
    assert shock_u(GasContext(1.4), 2, State(2, 0), 1.0) == pytest.approx(want2, rel=1e-14)
    with pytest.raises(DomainError):
        shock_u(ctx, 1, State(1, 0), 0.5)


def test_shock_speed_rankine_hugoniot():
    ctx = GasContext(1.2)
    left = State(1.0, 0.0)
    right = State(2.0, shock_u(ctx, 1, left, 2.0))
    sig = shock_speed(ctx, 1, left, right)
    assert sig == pytest.approx(2 * right.u, rel=1e-13)
    mom = lambda s: s.rho * s.u ** 2 + s.rho ** 1.2
    assert abs(sig * (2 * right.u - 0) - (mom(right) - mom(left))) < 1e-10
    # reflection (rho, u) -> (rho, -u), x -> -x maps 1-shocks onto 2-shocks
    sig2 = shock_speed(ctx, 2, State(2.0, -right.u), State(1.0, 0.0))
    assert sig2 == pytest.approx(-sig, rel=1e-13)


def test_weak_shock_speed_limit():
    ctx = GasContext(1.4)
    left = State(1.3, 0.2)
    right = State(1.3 * (1 + 1e-9), shock_u(ctx, 1, left, 1.3 * (1 + 1e-9)))
    lam1 = left.u - sound_speed(ctx, left.rho)
    assert shock_speed(ctx, 1, left, right) == pytest.approx(lam1, abs=1e-8)


def test_rarefaction_u():
    ctx = GasContext(1.4)
    assert rarefaction_u(ctx, 1, State(1, 0), 0.5) == pytest.approx(
        -(2 * math.sqrt(1.4) / 0.4) * (0.5 ** 0.2 - 1), rel=1e-14)
    assert rarefaction_u(ctx, 2, State(1, 0), 2.0) == pytest.approx(
        (2 * math.sqrt(1.4) / 0.4) * (2 ** 0.2 - 1), rel=1e-14)
    # s constant along a 1-rarefaction, r along a 2-rarefaction
    st = State(0.5, rarefaction_u(ctx, 1, State(1, 0), 0.5))
    assert to_invariants(ctx, st).s == pytest.approx(0.0, abs=1e-15)
    assert rarefaction_u(ctx, 2, State(1.5, 0.3), 1.5) == 0.3


@pytest.mark.parametrize("gamma", ["1.01", "1.1", "1.2", "1.3"])
@pytest.mark.parametrize("rho0", [0.1, 1.0, 10.0])
def test_g_against_bisection_oracle(gamma, rho0):
    ctx = GasContext(float(gamma))
    for a in (1e-6, 1e-3, 0.1, 1.0, 10.0):
        for fam, fn in ((1, g1), (2, g2)):
            want = mp_g(fam, gamma, a, rho0)
            assert fn(ctx, a, rho0) == pytest.approx(float(want), rel=1e-12)


def test_g_zero():
    ctx = GasContext(1.3)
    for rho in (0.1, 1.0, 10.0):
        assert g1(ctx, 0.0, rho) == 0.0
        assert g2(ctx, 0.0, rho) == 0.0


def test_g_ratio_bounds():
    for gam in (1.01, 1.1, 1.3):
        ctx = GasContext(gam)
        a = np.array([1e-3, 1e-2, 1e-1, 1.0, 10.0, 100.0, 1000.0])
        for rho in (0.1, 1.0, 10.0):
            for fn in (g1, g2):
                r = fn(ctx, a, rho) / a
                assert np.all(r >= 0.0) and np.all(r < 1.0)


def test_g2_reflection():
    # reflecting a 2-shock gives a 1-shock read from the other end
    ctx = GasContext(1.2)
    for a in (0.01, 1.0, 5.0):
        for rho in (0.1, 1.0, 10.0):
            rho_r = rho * shock_ratio(ctx, 2, a, rho)
            assert g2(ctx, a, rho) == pytest.approx(g1(ctx, a, rho_r), rel=1e-12)


def test_g_derivative_signs():
    ctx = GasContext(1.1)
    a = np.geomspace(1e-4, 1e3, 60)
    for fn in (g1_derivatives, g2_derivatives):
        for rho in (0.1, 1.0, 10.0):
            _, d1, d2 = fn(ctx, a, rho)
            assert np.all(d1 >= 0.0) and np.all(d1 <= 1.0 - 1e-9)
            assert np.all(d2 >= -1e-8)


def test_inverse_shock_curve_round_trip():
    ctx = GasContext(1.2)
    base = Invariants(0.0, 0.0)   # rho = 1, u = 0
    p = inverse_shock_curve(ctx, 2, base, 1.0, 0.5)
    from glimmep.gas import from_invariants
    start = from_invariants(ctx, p)
    u_end = shock_u(ctx, 2, start, 1.0)
    assert abs(u_end - 0.0) < 1e-9
    assert inverse_shock_curve(ctx, 1, base, 1.0, 0.0) == base
    prev = base
    for d in np.linspace(0.01, 2.0, 40):
        q = inverse_shock_curve(ctx, 2, base, 1.0, d)
        assert q.r >= prev.r and q.s >= prev.s
        prev = q
