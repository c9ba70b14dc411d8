"""gamma-law gas: pressure p = rho**gamma, characteristic speeds and
Riemann invariants

    r = u - sqrt(gamma) * (rho**eps - 1) / eps
    s = u + sqrt(gamma) * (rho**eps - 1) / eps,      eps = (gamma - 1) / 2.

Powers close to one are evaluated as ``expm1(eps * log(rho))`` so that
``eps`` down to 1e-3 keeps full relative precision.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError, VacuumError

# relative guard on the vacuum boundary s - r = -2 sqrt(gamma)/eps
VACUUM_GUARD = 1e-12


@dataclass(frozen=True)
class GasContext:
    gamma: float
    eps: float = field(init=False)
    sqrt_gamma: float = field(init=False)

    def __post_init__(self):
        g = float(self.gamma)
        if not (1.0 < g < 2.0):
            raise DomainError(f"gamma must satisfy 1 < gamma < 2, got {g!r}")
        object.__setattr__(self, "gamma", g)
        object.__setattr__(self, "eps", (g - 1.0) / 2.0)
        object.__setattr__(self, "sqrt_gamma", math.sqrt(g))

    @property
    def vacuum_gap(self):
        """Limit of s - r as rho -> 0 (negative)."""
        return -2.0 * self.sqrt_gamma / self.eps


@dataclass(frozen=True)
class State:
    rho: float
    u: float

    def __post_init__(self):
        if not self.rho > 0.0:
            raise VacuumError(f"density must be positive, got rho={self.rho!r}")


@dataclass(frozen=True)
class Invariants:
    r: float
    s: float


class Region(enum.IntEnum):
    """Wave pattern of a Riemann problem seen from its left state."""

    I = 1    # 1-shock + 2-shock
    II = 2   # 1-rarefaction + 2-shock
    III = 3  # 1-rarefaction + 2-rarefaction
    IV = 4   # 1-shock + 2-rarefaction

    def __str__(self):
        return self.name

    @property
    def shocks(self):
        return {Region.I: (True, True), Region.II: (False, True),
                Region.III: (False, False), Region.IV: (True, False)}[self]


def _check_rho(rho):
    if not rho > 0.0:
        raise VacuumError(f"density must be positive, got rho={rho!r}")


def enthalpy_term(ctx: GasContext, rho):
    """sqrt(gamma) * (rho**eps - 1) / eps, i.e. (s - r) / 2."""
    return ctx.sqrt_gamma * np.expm1(ctx.eps * np.log(rho)) / ctx.eps


def sound_speed(ctx: GasContext, rho: float) -> float:
    _check_rho(rho)
    return ctx.sqrt_gamma * math.exp(ctx.eps * math.log(rho))


def eigenvalues(ctx: GasContext, st: State):
    c = sound_speed(ctx, st.rho)
    return st.u - c, st.u + c


def to_invariants(ctx: GasContext, st: State) -> Invariants:
    _check_rho(st.rho)
    h = ctx.sqrt_gamma * math.expm1(ctx.eps * math.log(st.rho)) / ctx.eps
    return Invariants(st.u - h, st.u + h)


def from_invariants(ctx: GasContext, inv: Invariants) -> State:
    gap = inv.s - inv.r
    scale = ctx.sqrt_gamma / ctx.eps
    if gap <= ctx.vacuum_gap + VACUUM_GUARD * scale:
        raise VacuumError(
            f"s - r = {gap!r} is at or below the vacuum limit {ctx.vacuum_gap!r}")
    # rho**eps = 1 + eps*(s - r)/(2 sqrt(gamma))
    rho = math.exp(math.log1p(ctx.eps * gap / (2.0 * ctx.sqrt_gamma)) / ctx.eps)
    if rho == 0.0:
        raise VacuumError(f"density underflows for s - r = {gap!r}")
    return State(rho, 0.5 * (inv.r + inv.s))


def invariants_array(ctx: GasContext, rho, u):
    """Vectorised (r, s) of arrays of densities and velocities."""
    rho = np.asarray(rho, dtype=float)
    if np.any(~(rho > 0.0)):
        raise VacuumError("non-positive density in array")
    h = enthalpy_term(ctx, rho)
    u = np.asarray(u, dtype=float)
    return u - h, u + h


def states_from_invariants_array(ctx: GasContext, r, s):
    gap = np.asarray(s, dtype=float) - np.asarray(r, dtype=float)
    if np.any(gap <= ctx.vacuum_gap + VACUUM_GUARD * ctx.sqrt_gamma / ctx.eps):
        raise VacuumError("vacuum in invariant array")
    rho = np.exp(np.log1p(ctx.eps * gap / (2.0 * ctx.sqrt_gamma)) / ctx.eps)
    return rho, 0.5 * (np.asarray(r) + np.asarray(s))


def classify_region(ctx: GasContext, left: State, right: State) -> Region:
    """Region of ``right`` in the (r, s) plane relative to ``left``.

    The boundary curves are the forward S1 and S2 shock curves from ``left``.
    Points on a boundary go to the shock-bearing side (I before II/IV, II/IV
    before III); identical states are a zero-strength fan, tagged III.
    """
    from .riemann import solvable
    from .wave_curves import g1, g2

    if not solvable(ctx, left, right):
        raise VacuumError(
            f"Riemann problem {left} | {right} contains vacuum: "
            f"u+ - u- >= (sqrt(gamma)/eps)(rho-^eps + rho+^eps)")
    if left == right:
        return Region.III
    lo = to_invariants(ctx, left)
    ri = to_invariants(ctx, right)
    r0, s0, r, s = lo.r, lo.s, ri.r, ri.s
    if r <= r0 and s <= s0:
        below_s2 = r <= r0 - g2(ctx, s0 - s, left.rho)
        below_s1 = s <= s0 - g1(ctx, r0 - r, left.rho)
        if below_s2 and below_s1:
            return Region.I
        if below_s1:
            return Region.II
        return Region.IV
    if s <= s0:
        return Region.II
    if r <= r0:
        return Region.IV
    return Region.III
