"""Shock and rarefaction curves, and the Nishida-Smoller functions g1, g2.

Along an admissible 1-shock from a state with density rho0 the density ratio
alpha = rho/rho0 runs over [1, inf); along a 2-shock over (0, 1].  With
t = ln(alpha) both drops in Riemann-invariant coordinates are

    rho0**eps * (S(t) +- W(t)),
    S(t) = sqrt(expm1(t) * expm1(gamma t) * exp(-t)),
    W(t) = sqrt(gamma) * expm1(eps t) / eps,

the "+" combination being the drop of the invariant that labels the family
(r for 1-shocks, s for 2-shocks).  g_i maps that drop to the other one, so it
is evaluated by inverting the "+" map in t.  Everything is vectorised over
numpy arrays; scalars come back as floats.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import DomainError, NumericalError
from .gas import GasContext, Invariants, State, sound_speed

MAX_ITER = 200


def _check_family(family):
    if family not in (1, 2):
        raise DomainError(f"wave family must be 1 or 2, got {family!r}")


def _shock_du(ctx: GasContext, rho0, rho):
    """|u - u0| along the Hugoniot locus, sqrt((rho^g - rho0^g)(rho - rho0)/(rho rho0))."""
    lg = math.log(rho / rho0)
    return math.sqrt(rho0 ** ctx.gamma * math.expm1(ctx.gamma * lg) * math.expm1(lg) / rho)


def shock_u(ctx: GasContext, family: int, left: State, rho: float) -> float:
    """Velocity on the admissible ``family``-shock curve through ``left``.

    Lax shocks are compressive for both families, so u drops across them.
    """
    _check_family(family)
    if not rho > 0.0:
        raise DomainError(f"density must be positive, got {rho!r}")
    if (family == 1 and rho < left.rho) or (family == 2 and rho > left.rho):
        raise DomainError(
            f"rho={rho!r} is on the rarefaction side of the {family}-curve "
            f"through rho={left.rho!r}")
    if rho == left.rho:
        return left.u
    return left.u - _shock_du(ctx, left.rho, rho)


def rarefaction_u(ctx: GasContext, family: int, left: State, rho: float) -> float:
    _check_family(family)
    if not rho > 0.0:
        raise DomainError(f"density must be positive, got {rho!r}")
    if (family == 1 and rho > left.rho) or (family == 2 and rho < left.rho):
        raise DomainError(
            f"rho={rho!r} is on the shock side of the {family}-curve "
            f"through rho={left.rho!r}")
    e = ctx.eps
    # (rho^e - rho0^e) = rho0^e * expm1(e ln(rho/rho0))
    du = ctx.sqrt_gamma / e * left.rho ** e * math.expm1(e * math.log(rho / left.rho))
    return left.u + (du if family == 2 else -du)


def _speed_factor(ctx: GasContext, rho_a, rho_b):
    """sqrt((rho_b/rho_a) rho_a^(g-1) R) with R = expm1(g L)/expm1(L), L = ln(rho_b/rho_a).

    This is |sigma - u_a| for the shock joining a low-density state a
    (behind: rho_b > rho_a) with mass flux continuity written stably.
    """
    lg = math.log(rho_b / rho_a)
    ratio = ctx.gamma if lg == 0.0 else math.expm1(ctx.gamma * lg) / math.expm1(lg)
    return math.sqrt((rho_b / rho_a) * rho_a ** (ctx.gamma - 1.0) * ratio)


def shock_speed(ctx: GasContext, family: int, left: State, right: State,
                rtol: float = 1e-8) -> float:
    """Rankine-Hugoniot speed of the ``family``-shock joining left to right."""
    _check_family(family)
    if family == 1 and right.rho < left.rho or family == 2 and right.rho > left.rho:
        raise DomainError(f"{left} -> {right} is not an admissible {family}-shock")
    u_curve = shock_u(ctx, family, left, right.rho)
    scale = abs(left.u) + abs(right.u) + sound_speed(ctx, left.rho) + sound_speed(ctx, right.rho)
    if abs(u_curve - right.u) > rtol * scale:
        raise DomainError(
            f"{right} is off the {family}-shock curve through {left} "
            f"(u mismatch {u_curve - right.u:.3e})")
    if left.rho == right.rho:
        lam = sound_speed(ctx, left.rho)
        return left.u - lam if family == 1 else left.u + lam
    if family == 1:
        return left.u - _speed_factor(ctx, left.rho, right.rho)
    return right.u + _speed_factor(ctx, right.rho, left.rho)


# ---------------------------------------------------------------- g1 / g2 ---

def _terms(ctx: GasContext, t, sgn):
    """S, W and their t-derivatives at t >= 0, ln(alpha) = sgn * t."""
    g, e, sg = ctx.gamma, ctx.eps, ctx.sqrt_gamma
    ell = sgn * t
    A = -np.expm1(-ell)
    B = np.expm1(g * ell)
    p = A * B
    S = np.sqrt(p)
    W = sgn * sg * np.expm1(e * ell) / e
    Wp = sg * np.exp(e * ell)
    Wpp = sgn * e * Wp
    with np.errstate(divide="ignore", invalid="ignore"):
        # d p / d ell = (1 - A) B + g A (1 + B)
        dp = (1.0 - A) * B + g * A * (1.0 + B)
        Sp = sgn * dp / (2.0 * S)
        N = -(B - g * A) ** 2 + (A * B * (1.0 - g)) ** 2 + 2.0 * g * A * B * (B - A)
        Spp = N / (4.0 * p * S)
    return S, W, Sp, Wp, Spp, Wpp


def _invert_drop(ctx: GasContext, target, sgn):
    """t >= 0 with S(t) + W(t) = target (>= 0), elementwise.

    Safeguarded Newton on log(S + W) - log(target), which is close to linear
    in t both for weak (F ~ 2 sqrt(g) t) and strong (F ~ exp(g t / 2)) waves.
    """
    target = np.asarray(target, dtype=float)
    t = np.zeros_like(target)
    live = target > 0.0
    if not np.any(live):
        return t
    a = target[live]
    sg = ctx.sqrt_gamma
    # weak-wave guess, capped by the strong-wave asymptote
    guess = np.minimum(a / (2.0 * sg), 2.0 * np.log1p(a) / ctx.gamma + 1.0)
    lo = np.zeros_like(a)
    hi = np.maximum(guess, 1e-300)
    for _ in range(MAX_ITER):
        S, W, *_ = _terms(ctx, hi, sgn)
        short = (S + W) < a
        if not np.any(short):
            break
        hi = np.where(short, 2.0 * hi, hi)
    else:
        raise NumericalError("could not bracket the shock-curve inversion")
    x = np.clip(guess, lo, hi)
    la = np.log(a)
    done = np.zeros(a.shape, dtype=bool)
    for _ in range(MAX_ITER):
        S, W, Sp, Wp, *_ = _terms(ctx, x, sgn)
        F = S + W
        with np.errstate(divide="ignore", invalid="ignore"):
            res = np.log(F) - la
        lo = np.where(res < 0.0, x, lo)
        hi = np.where(res > 0.0, x, hi)
        with np.errstate(divide="ignore", invalid="ignore"):
            step = res * F / (Sp + Wp)
            xn = x - step
        bad = ~np.isfinite(xn) | (xn <= lo) | (xn >= hi)
        xn = np.where(bad, 0.5 * (lo + hi), xn)
        conv = (res == 0.0) | (np.abs(xn - x) <= 4e-16 * np.abs(x)) | (hi - lo <= 4e-16 * hi)
        x = np.where(done, x, xn)
        done |= conv
        if np.all(done):
            break
    else:
        raise NumericalError("shock-curve inversion did not converge")
    t[live] = x
    return t


# S^2 - W^2 = e^{g l} + e^{-l} - e^{(g-1) l} - 1 - (g/eps^2)(e^{eps l} - 1)^2 has
# vanishing Taylor coefficients up to l^3; below |l| = 1 it is summed from
# its series to avoid the cancellation in S - W for weak waves.
_SERIES_CUT = 1.0
_SERIES_TERMS = 36


def _diff_series(ctx: GasContext):
    g, e = ctx.gamma, ctx.eps
    b = np.zeros(_SERIES_TERMS + 1)
    for k in range(4, _SERIES_TERMS + 1):
        c = g ** k + (-1.0) ** k - (g - 1.0) ** k - g * e ** (k - 2) * (2.0 ** k - 2.0)
        b[k] = c / math.factorial(k)
    return b


def _diff_terms(ctx: GasContext, ell):
    """(D, dD/dl, d2D/dl2) with D = S^2 - W^2, from the series."""
    b = _diff_series(ctx)
    k = np.arange(b.shape[0])
    P = np.polynomial.polynomial
    return P.polyval(ell, b), P.polyval(ell, (k * b)[1:]), P.polyval(ell, (k * (k - 1) * b)[2:])


def _g_eval(ctx: GasContext, a, rho0, sgn, derivs):
    a_arr = np.asarray(a, dtype=float)
    if np.any(a_arr < 0.0) or np.any(~np.isfinite(a_arr)):
        raise DomainError("wave strength must be finite and >= 0")
    rho0_arr = np.asarray(rho0, dtype=float)
    if np.any(~(rho0_arr > 0.0)):
        raise DomainError("base density must be positive")
    scale = np.exp(ctx.eps * np.log(rho0_arr))
    t = _invert_drop(ctx, a_arr / scale, sgn)
    S, W, Sp, Wp, Spp, Wpp = _terms(ctx, t, sgn)
    zero = t == 0.0
    F, Ft, Ftt = S + W, Sp + Wp, Spp + Wpp
    G, Gt, Gtt = S - W, Sp - Wp, Spp - Wpp
    small = (t < _SERIES_CUT) & ~zero
    if np.any(small):
        D, Dl, Dll = _diff_terms(ctx, sgn * t)
        Dt = sgn * Dl
        with np.errstate(divide="ignore", invalid="ignore"):
            Gs = D / F
            num = Dt * F - D * Ft
            Gts = num / F ** 2
            Gtts = (Dll * F - D * Ftt) / F ** 2 - 2.0 * Ft * num / F ** 3
        G = np.where(small, Gs, G)
        Gt = np.where(small, Gts, Gt)
        Gtt = np.where(small, Gtts, Gtt)
    g = np.where(zero, 0.0, scale * G)
    if not derivs:
        return g if g.ndim else float(g)
    with np.errstate(divide="ignore", invalid="ignore"):
        d1 = Gt / Ft
        d2 = (Gtt * Ft - Gt * Ftt) / Ft ** 3 / scale
    d1 = np.where(zero, 0.0, d1)
    d2 = np.where(zero, 0.0, d2)
    if g.ndim:
        return g, d1, d2
    return float(g), float(d1), float(d2)


def g1(ctx: GasContext, a, rho_minus):
    """s-drop along the 1-shock curve whose r-drop is ``a``."""
    return _g_eval(ctx, a, rho_minus, 1.0, False)


def g2(ctx: GasContext, a, rho_minus):
    """r-drop along the 2-shock curve whose s-drop is ``a``."""
    return _g_eval(ctx, a, rho_minus, -1.0, False)


def g1_derivatives(ctx: GasContext, a, rho_minus):
    """(g1, dg1/da, d2g1/da2)."""
    return _g_eval(ctx, a, rho_minus, 1.0, True)


def g2_derivatives(ctx: GasContext, a, rho_minus):
    return _g_eval(ctx, a, rho_minus, -1.0, True)


def shock_ratio(ctx: GasContext, family: int, a, rho_minus):
    """Density ratio alpha at the end of a ``family``-shock of strength ``a``."""
    _check_family(family)
    sgn = 1.0 if family == 1 else -1.0
    scale = math.exp(ctx.eps * math.log(rho_minus))
    t = _invert_drop(ctx, np.asarray(a, dtype=float) / scale, sgn)
    out = np.exp(sgn * t)
    return out if out.ndim else float(out)


def inverse_shock_curve(ctx: GasContext, family: int, base: Invariants,
                        rho_base: float, delta: float) -> Invariants:
    """Point from which a forward ``family``-shock of strength delta lands on base."""
    _check_family(family)
    if not delta >= 0.0:
        raise DomainError(f"delta must be >= 0, got {delta!r}")
    if family == 2:
        return Invariants(base.r + g1(ctx, delta, rho_base), base.s + delta)
    return Invariants(base.r + delta, base.s + g2(ctx, delta, rho_base))
