"""Exact Riemann solver for the isentropic gamma-law p-system."""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import NumericalError, VacuumError
from .gas import GasContext, Invariants, Region, State, to_invariants

SHOCK = "shock"
RAREFACTION = "rarefaction"

# relative density tie below which a wave counts as a zero-strength shock
_TIE = 1e-14


@dataclass(frozen=True)
class Wave:
    family: int
    kind: str
    strength: float
    head: float
    tail: float

    @property
    def is_shock(self):
        return self.kind == SHOCK


@dataclass(frozen=True)
class WaveFan:
    left: State
    middle: State
    right: State
    wave1: Wave
    wave2: Wave
    region: Region
    gamma: float

    def sample(self, xi: float) -> State:
        l, m, r = self.left, self.middle, self.right
        rho, u = kernels.sample_fan(self.gamma, l.rho, l.u, m.rho, m.u, r.rho, r.u, float(xi))
        return State(rho, u)

    def max_speed(self):
        return max(abs(self.wave1.head), abs(self.wave1.tail),
                   abs(self.wave2.head), abs(self.wave2.tail))


def vacuum_margin(ctx: GasContext, left: State, right: State) -> float:
    """(sqrt(g)/eps)(rho_l^eps + rho_r^eps) - (u_r - u_l); positive iff solvable."""
    e = ctx.eps
    return ctx.sqrt_gamma / e * (left.rho ** e + right.rho ** e) - (right.u - left.u)


def solvable(ctx: GasContext, left: State, right: State) -> bool:
    return right.u - left.u < ctx.sqrt_gamma / ctx.eps * (left.rho ** ctx.eps + right.rho ** ctx.eps)


def _region(shock1, shock2):
    if shock1:
        return Region.I if shock2 else Region.IV
    return Region.II if shock2 else Region.III


def solve(ctx: GasContext, left: State, right: State) -> WaveFan:
    if not solvable(ctx, left, right):
        raise VacuumError(
            f"Riemann problem {left} | {right} contains vacuum: u+ - u- = "
            f"{right.u - left.u!r} >= (sqrt(gamma)/eps)(rho-^eps + rho+^eps) = "
            f"{right.u - left.u + vacuum_margin(ctx, left, right)!r}")
    g = ctx.gamma
    rm, um = kernels.middle_state(g, left.rho, left.u, right.rho, right.u)
    if not (rm > 0.0 and math.isfinite(um)):
        raise NumericalError(f"middle-state iteration failed for {left} | {right}")
    if rm < 1e-8 * min(left.rho, right.rho):
        warnings.warn(f"near-vacuum middle state rho_m={rm:.3e}", RuntimeWarning, stacklevel=2)
    middle = State(rm, um)
    h1, t1, h2, t2, _, _ = kernels.wave_speeds(g, left.rho, left.u, rm, um, right.rho, right.u)
    if left == right:
        sh1 = sh2 = False
    else:
        sh1 = rm >= left.rho * (1.0 - _TIE)
        sh2 = rm >= right.rho * (1.0 - _TIE)
    il, im, ir = (to_invariants(ctx, s) for s in (left, middle, right))
    w1 = Wave(1, SHOCK if sh1 else RAREFACTION, abs(il.r - im.r), h1, t1)
    w2 = Wave(2, SHOCK if sh2 else RAREFACTION, abs(im.s - ir.s), h2, t2)
    return WaveFan(left, middle, right, w1, w2, _region(sh1, sh2), g)


def sample(ctx: GasContext, fan: WaveFan, xi: float) -> State:
    return fan.sample(xi)


@dataclass
class FanBatch:
    """Column arrays for many Riemann problems solved at once."""

    rho_m: np.ndarray
    u_m: np.ndarray
    strength1: np.ndarray
    strength2: np.ndarray
    shock1: np.ndarray
    shock2: np.ndarray

    @property
    def region(self):
        out = np.full(self.rho_m.shape, int(Region.III), dtype=np.int8)
        out[self.shock1 & self.shock2] = int(Region.I)
        out[~self.shock1 & self.shock2] = int(Region.II)
        out[self.shock1 & ~self.shock2] = int(Region.IV)
        return out


def solve_many(ctx: GasContext, rl, ul, rr, ur) -> FanBatch:
    """Vectorised ``solve``; raises VacuumError if any pair is unsolvable."""
    rl, ul, rr, ur = (np.ascontiguousarray(a, dtype=float) for a in (rl, ul, rr, ur))
    rm = np.empty_like(rl)
    um = np.empty_like(rl)
    kernels.batch_middle(ctx.gamma, rl, ul, rr, ur, rm, um)
    if np.any(~(rm > 0.0)):
        k = int(np.flatnonzero(~(rm > 0.0))[0])
        raise VacuumError(f"pair {k} ({rl[k]}, {ul[k]}) | ({rr[k]}, {ur[k]}) has no solution")
    e, sg = ctx.eps, ctx.sqrt_gamma
    hl = sg * np.expm1(e * np.log(rl)) / e
    hm = sg * np.expm1(e * np.log(rm)) / e
    hr = sg * np.expm1(e * np.log(rr)) / e
    same = (rl == rr) & (ul == ur)
    return FanBatch(
        rm, um,
        np.abs((ul - hl) - (um - hm)),
        np.abs((um + hm) - (ur + hr)),
        (rm >= rl * (1.0 - _TIE)) & ~same,
        (rm >= rr * (1.0 - _TIE)) & ~same,
    )
