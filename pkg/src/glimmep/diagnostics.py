"""Glimm functional on mesh curves, total variation, growth constants and
the bound verdicts monitored during a run.

Strengths are measured in Riemann-invariant units: |r_l - r_m| for the
1-wave and |s_m - s_r| for the 2-wave of each fan.  Only shocks enter V and
Q.  Waves on a mesh curve are ordered by fan index, 1-wave before 2-wave.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, fields

import numpy as np

# relative slack for floating-point rounding in the verdicts
ROUND = 1e-12


@dataclass
class MeshCurve:
    n: int
    position: np.ndarray   # fan index
    family: np.ndarray     # 1 or 2
    shock: np.ndarray      # bool
    strength: np.ndarray

    def __len__(self):
        return int(self.strength.shape[0])


def build_mesh_curve(n, str1, str2, shock1, shock2) -> MeshCurve:
    """Collect the nonzero waves of all fans of layer n in spatial order."""
    str1, str2 = np.asarray(str1, dtype=float), np.asarray(str2, dtype=float)
    k = str1.shape[0]
    strength = np.empty(2 * k)
    strength[0::2] = str1
    strength[1::2] = str2
    shock = np.empty(2 * k, dtype=bool)
    shock[0::2] = np.asarray(shock1, dtype=bool)
    shock[1::2] = np.asarray(shock2, dtype=bool)
    family = np.tile(np.array([1, 2], dtype=np.int8), k)
    position = np.repeat(np.arange(k), 2)
    keep = strength > 0.0
    return MeshCurve(n, position[keep], family[keep], shock[keep], strength[keep])


def curve_from_waves(waves, n=0) -> MeshCurve:
    """MeshCurve from (position, family, is_shock, strength) tuples."""
    waves = sorted(waves, key=lambda w: (w[0], w[1]))
    if not waves:
        return MeshCurve(n, np.zeros(0, int), np.zeros(0, np.int8), np.zeros(0, bool), np.zeros(0))
    pos, fam, sh, st = zip(*waves)
    st = np.asarray(st, dtype=float)
    keep = st > 0.0
    return MeshCurve(n, np.asarray(pos)[keep], np.asarray(fam, dtype=np.int8)[keep],
                     np.asarray(sh, dtype=bool)[keep], st[keep])


def glimm_V(curve: MeshCurve) -> float:
    return math.fsum(curve.strength[curve.shock].tolist())


def _exclusive_cumsum(a):
    out = np.zeros_like(a)
    if a.shape[0] > 1:
        out[1:] = np.cumsum(a[:-1])
    return out


def glimm_Q(curve: MeshCurve) -> float:
    """Sum of |a||b| over approaching shock pairs.

    A pair approaches when both are of the same family, or when the 2-shock
    lies left of the 1-shock.
    """
    s1 = np.where(curve.shock & (curve.family == 1), curve.strength, 0.0)
    s2 = np.where(curve.shock & (curve.family == 2), curve.strength, 0.0)
    b1 = _exclusive_cumsum(s1)
    b2 = _exclusive_cumsum(s2)
    return math.fsum((s1 * (b1 + b2) + s2 * b2).tolist())


def glimm_F(curve: MeshCurve, K: float) -> float:
    if K < 0.0:
        raise ValueError(f"K must be >= 0, got {K}")
    return glimm_V(curve) + K * glimm_Q(curve)


def total_variation(values) -> float:
    v = np.asarray(values, dtype=float)
    if v.shape[0] < 2:
        return 0.0
    return math.fsum(np.abs(np.diff(v)).tolist())


def _expm1_over(a, x):
    """(e^{a x} - 1)/a, equal to x at a = 0; inf on overflow."""
    if a == 0.0:
        return x
    if a * x > 700.0:
        return math.inf
    return math.expm1(a * x) / a


@dataclass(frozen=True)
class GrowthConstants:
    """A, A1 and the Psi-dependent B, B1 of the layer-to-layer estimate."""

    lam: float
    dt: float
    T: float
    L: float
    sigma_sup: float
    sigma_tv: float
    C_T: float
    C_prime_T: float
    q_m: float

    @property
    def L1(self):
        return 2.0 * self.L + 2.0 * self.T / self.lam

    @property
    def A(self):
        return 32.0 * self.sigma_sup

    @property
    def A1(self):
        x = self.lam * self.A * self.L1
        e = math.inf if x > 700.0 else math.exp(x)
        if self.sigma_tv == 0.0:
            return 16.0 * self.sigma_sup
        return 4.0 * e * self.sigma_tv + 16.0 * self.sigma_sup

    def B(self, psi_sup):
        return (8.0 * (self.C_T + self.C_prime_T) * self.sigma_sup
                + 8.0 * self.q_m * (psi_sup * self.sigma_sup * self.dt + psi_sup))

    def B1(self, psi_sup, psi_tv):
        tv = self.sigma_tv
        grow = 0.0 if tv == 0.0 else 4.0 * self.B(psi_sup) * _expm1_over(self.A, self.lam * self.L1) * tv
        return (4.0 * self.C_T * tv + grow + 4.0 * self.C_prime_T * self.sigma_sup
                + 4.0 * self.q_m * psi_sup * tv * self.dt + 4.0 * self.q_m * psi_tv)


@dataclass
class GlimmReport:
    n: int
    t: float
    V: float
    Q: float
    F: float
    K: float
    TV_r: float
    TV_s: float
    TV_u: float
    TV_rho: float
    min_rho: float
    max_rho: float
    cfl_margin: float
    n_waves: int
    delta: float
    gamma_corr: float
    xi_l1: float
    xi_integral: float
    psi_sup: float
    psi_tv: float
    psi_end_mismatch: float
    xi_balance_residual: float
    source_shift: float
    B1: float
    techimp_ok: bool
    field_ok: bool
    cone_ok: bool
    density_ok: bool
    step_ok: bool = True

    @classmethod
    def columns(cls):
        return [f.name for f in fields(cls)]

    def row(self):
        return [getattr(self, c) for c in self.columns()]


def techimp_holds(TV_u, V, C_prime_T):
    return TV_u <= 4.0 * V + C_prime_T + 1e-9


def step_verdict(F_prev, F_next, A1, B1, dt):
    bound = F_prev * (1.0 + A1 * dt) + B1 * dt
    return F_next <= bound + ROUND * (1.0 + abs(bound))


@dataclass
class GrowthVerdicts:
    step: list = field(default_factory=list)        # n = 1..N
    literal: list = field(default_factory=list)     # n = 0..N
    with_dt: list = field(default_factory=list)
    supercru: list = field(default_factory=list)

    @property
    def all_pass(self):
        return all(self.step) and all(self.with_dt) and all(self.supercru) and all(self.literal)

    def summary(self):
        frac = lambda v: (sum(v) / len(v)) if v else 1.0
        return {"step": frac(self.step), "literal": frac(self.literal),
                "with_dt": frac(self.with_dt), "supercru": frac(self.supercru)}


def _mul(a, b):
    # inf * 0 counts as 0 in the bounds
    return 0.0 if a == 0.0 or b == 0.0 else a * b


def check_growth(F, B1, A1, dt, T) -> GrowthVerdicts:
    """Verdicts of the per-step and cumulative growth bounds.

    ``F[n]`` is F(O^n) for n = 0..N; ``B1[n]`` is evaluated with Psi at level
    n (B1[0] is unused).  The cumulative forms use the running max of B1.
    """
    F = list(F)
    N = len(F) - 1
    out = GrowthVerdicts()
    bmax = 0.0
    geo = 0.0  # sum_{k<n} (1 + A1 dt)^k
    eT = math.inf if A1 * T > 700.0 else math.exp(A1 * T)
    tail_T = _expm1_over(A1, T)
    for n in range(N + 1):
        if n >= 1:
            out.step.append(step_verdict(F[n - 1], F[n], A1, B1[n], dt))
            bmax = max(bmax, B1[n])
            geo = geo * (1.0 + A1 * dt) + 1.0
        en = math.inf if A1 * n * dt > 700.0 else math.exp(A1 * n * dt)
        lit = _mul(en, F[0]) + _mul(bmax, geo)
        wdt = _mul(en, F[0]) + _mul(bmax * dt, geo)
        sup = _mul(eT, F[0]) + _mul(bmax, tail_T)
        tol = lambda b: ROUND * (1.0 + abs(b))
        out.literal.append(F[n] <= lit + tol(lit))
        out.with_dt.append(F[n] <= wdt + tol(wdt))
        out.supercru.append(F[n] <= sup + tol(sup))
    return out


@dataclass(frozen=True)
class StartupChecks:
    """A-priori quantities computed before the first step."""

    C_hat: float
    K: float
    tv_rs0: float
    smallness: float        # 4 C eps TV(r0, s0)
    smallness_ok: bool
    C_star: float
    D: float                # sup s0 - inf r0 + 2 C* T
    density_ok: bool        # eps D < sqrt(gamma)
    rho_floor: float        # implied lower density bound (0 if none)
    psi_bar: float
    eps2_lhs: float         # reported only

    def as_dict(self):
        return {f.name: getattr(self, f.name) for f in fields(self)}


def startup_checks(ctx, r0, s0, u0_sup, C_hat, K, C_T, C_prime_T, sigma_sup, q_m, psi_bar, T,
                   gc: GrowthConstants, B1_est) -> StartupChecks:
    tv = total_variation(r0) + total_variation(s0)
    small = 4.0 * C_hat * ctx.eps * tv
    # |u| <= |u^-| + TV(u) <= C_T + 4V + C'_T with V <= F <= 2 TV(r0, s0)
    U = max(C_T, u0_sup) + C_prime_T + 8.0 * tv
    C_star = sigma_sup * U + q_m * psi_bar
    D = float(np.max(s0) - np.min(r0)) + 2.0 * C_star * T
    dens_ok = ctx.eps * D < ctx.sqrt_gamma
    base = 1.0 - ctx.eps * D / (2.0 * ctx.sqrt_gamma)
    floor = math.exp(math.log(base) / ctx.eps) if base > 0.0 else 0.0
    A1 = gc.A1
    eA1T = math.inf if A1 * T > 700.0 else math.exp(A1 * T)
    x = gc.lam * gc.L1
    eL = math.inf if x > 700.0 else math.exp(x)
    eps2 = 4.0 * C_hat * ctx.eps * (eL * eA1T * tv
                                    + gc.B(psi_bar) * _expm1_over(gc.A, x) * eA1T
                                    + B1_est * _expm1_over(A1, T))
    return StartupChecks(C_hat, K, tv, small, small <= 1.0, C_star, D, dens_ok, floor,
                         psi_bar, eps2)
