"""Glimm random-choice scheme with operator splitting for the friction and
field source.

One step n -> n+1:

1. hyperbolic step: solve every neighbour Riemann problem of row n and
   sample each fan at x/t = theta_n / lambda;
2. corrector (delta, gamma), charge xi and potential Psi at level n+1;
3. source step u <- u exp(-sigma dt) - (q/m) phi(sigma) Psi;
4. far-field values come from the precomputed series.

The GlimmReport of level n (functional on the fans of row n, TV of row n,
field data of level n) is written during step n.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field

import numpy as np

from . import field as fld
from . import kernels
from .config import RunConfig
from .diagnostics import (GlimmReport, GrowthConstants, build_mesh_curve, check_growth,
                          glimm_Q, glimm_V, startup_checks, step_verdict, techimp_holds,
                          total_variation)
from .errors import BoundViolation, CFLError, ConfigError, VacuumError
from .gas import GasContext, invariants_array
from .mesh import Mesh, snap_support

log = logging.getLogger(__name__)


def van_der_corput(k: int, base: int = 2) -> float:
    q, denom = 0.0, 1.0
    while k:
        k, digit = divmod(k, base)
        denom *= base
        q += digit / denom
    return q


class ThetaSequence:
    """Sampling positions theta_n in [-1, 1], one per time step."""

    def __init__(self, kind: str = "van_der_corput", seed: int = 0, values=()):
        if kind not in ("van_der_corput", "random", "list"):
            raise ConfigError(f"unknown theta source {kind!r}")
        self.kind, self.seed, self.values = kind, int(seed), tuple(values)

    @classmethod
    def from_spec(cls, spec):
        return cls(spec.kind, spec.seed, spec.values)

    def take(self, n: int) -> np.ndarray:
        if self.kind == "van_der_corput":
            return np.array([2.0 * van_der_corput(k + 1) - 1.0 for k in range(n)])
        if self.kind == "random":
            return np.random.default_rng(self.seed).uniform(-1.0, 1.0, n)
        if len(self.values) < n:
            raise ConfigError(f"theta list has {len(self.values)} values, run needs {n}")
        return np.array(self.values[:n], dtype=float)


@dataclass
class GridState:
    n: int
    rho: np.ndarray
    u: np.ndarray
    mesh: Mesh

    @property
    def parity(self):
        return self.n % 2

    @property
    def x(self):
        return self.mesh.centers(self.n)

    @property
    def t(self):
        return self.n * self.mesh.dt


@dataclass
class LayerWaves:
    """Strengths and shock flags of every fan of one row, plus max speed."""

    strength1: np.ndarray
    strength2: np.ndarray
    shock1: np.ndarray
    shock2: np.ndarray
    vmax: float


@dataclass
class Snapshot:
    n: int
    t: float
    x: np.ndarray
    rho: np.ndarray
    u: np.ndarray
    r: np.ndarray
    s: np.ndarray
    psi: np.ndarray
    xi: np.ndarray

    COLUMNS = ("x_center", "rho", "u", "r", "s", "psi", "xi")

    def columns(self):
        return [self.x, self.rho, self.u, self.r, self.s, self.psi, self.xi]


def choose_lambda(cfg: RunConfig) -> float:
    if not cfg.auto_cfl:
        return cfg.lam
    ctx = GasContext(cfg.gamma)
    cmax = ctx.sqrt_gamma * max(cfg.rho0.values) ** ctx.eps
    lam = 0.9 / (cfg.cfl_factor * (cfg.u0.sup + cmax))
    log.info("auto-CFL: lambda = %.6g (speed estimate %.6g x factor %.3g)",
             lam, cfg.u0.sup + cmax, cfg.cfl_factor)
    return lam


def build_mesh(cfg: RunConfig) -> Mesh:
    l = snap_support(cfg.L, cfg.dx)
    if abs(l * cfg.dx - cfg.L) > 1e-12 * cfg.L:
        log.info("support half-width L snapped from %.17g to %.17g (%d cells of dx)",
                 cfg.L, l * cfg.dx, l)
    return Mesh(cfg.dx, l, choose_lambda(cfg))


def discretize_initial(cfg: RunConfig, mesh: Mesh | None = None):
    """(GridState at level 0, sigma on its cells, mu on its half-cells)."""
    mesh = mesh or build_mesh(cfg)
    x = mesh.centers(0)
    rho = np.asarray(cfg.rho0(x), dtype=float)
    u = np.asarray(cfg.u0(x), dtype=float)
    # far cells carry the far-field constants exactly
    rho[0], rho[-1] = cfg.rho0.left, cfg.rho0.right
    u[0], u[-1] = cfg.u0.left, cfg.u0.right
    return (GridState(0, rho, u, mesh), mesh.sigma_cells(cfg.sigma, 0),
            mesh.mu_halves(cfg.mu, 0))


def hyperbolic_step(ctx: GasContext, grid: GridState, theta: float, kern=kernels):
    """Row n+1/2 (densities final, velocities before the source) and the fans of row n."""
    m = grid.rho.shape[0]
    rho = np.empty(m + 1)
    u = np.empty(m + 1)
    s1 = np.empty(m - 1)
    s2 = np.empty(m - 1)
    h1 = np.zeros(m - 1, dtype=np.int8)
    h2 = np.zeros(m - 1, dtype=np.int8)
    rho[0], u[0] = grid.rho[0], grid.u[0]
    rho[m], u[m] = grid.rho[m - 1], grid.u[m - 1]
    xi = theta / grid.mesh.lam
    status, vmax = kern.glimm_row(ctx.gamma, np.ascontiguousarray(grid.rho),
                                  np.ascontiguousarray(grid.u), xi, rho[1:m], u[1:m],
                                  s1, s2, h1, h2)
    if status != kernels.OK:
        k = int(status)
        raise VacuumError(
            f"step {grid.n}: Riemann problem between cells {k} and {k + 1} "
            f"(rho, u) = ({grid.rho[k]!r}, {grid.u[k]!r}) | ({grid.rho[k + 1]!r}, "
            f"{grid.u[k + 1]!r}) contains vacuum")
    if not grid.mesh.lam * vmax < 1.0:
        raise CFLError(
            f"step {grid.n}: CFL violated, lambda * max speed = {grid.mesh.lam:.6g} * "
            f"{vmax:.6g} = {grid.mesh.lam * vmax:.6g} >= 1")
    return GridState(grid.n + 1, rho, u, grid.mesh), LayerWaves(s1, s2, h1, h2, vmax)


def solve_layer(ctx: GasContext, grid: GridState, kern=kernels) -> LayerWaves:
    """Fans of a row without advancing it."""
    return hyperbolic_step(ctx, grid, 0.0, kern)[1]


def source_factors(sigma_cells, dt: float, q_m: float):
    """Per-cell exp(-sigma dt) and (q/m) phi(sigma), one scalar evaluation per distinct sigma."""
    dec = np.empty_like(sigma_cells)
    qphi = np.empty_like(sigma_cells)
    for s in np.unique(sigma_cells):
        d, p = fld.decay_factors(float(s), dt)
        mask = sigma_cells == s
        dec[mask] = d
        qphi[mask] = q_m * p
    return dec, qphi


def source_step(half: GridState, psi_cells, sigma_cells, dt: float, q_m: float):
    """(GridState at n+1, max |u_{n+1} - u_{n+1/2}|); rho is untouched."""
    dec, qphi = source_factors(sigma_cells, dt, q_m)
    u = half.u * dec - qphi * psi_cells
    shift = float(np.max(np.abs(u - half.u))) if u.size else 0.0
    return GridState(half.n, half.rho, u, half.mesh), shift


@dataclass
class RunResult:
    config: RunConfig
    ctx: GasContext
    mesh: Mesh
    n_steps: int
    thetas: np.ndarray
    reports: list
    snapshots: list
    startup: object
    constants: GrowthConstants
    growth: object
    far_field: fld.FarFieldSeries
    grid: GridState
    field_state: fld.FieldState
    bounds: dict = field(default_factory=dict)

    @property
    def dt(self):
        return self.mesh.dt


def _snapshot(ctx, grid: GridState, fs: fld.FieldState) -> Snapshot:
    r, s = invariants_array(ctx, grid.rho, grid.u)
    return Snapshot(grid.n, grid.t, grid.x, grid.rho.copy(), grid.u.copy(), r, s,
                    fs.psi_cells.copy(), fs.xi_cells())


def run(cfg: RunConfig, backend: str | None = None, theta=None) -> RunResult:
    """Run the scheme to T.  ``theta`` overrides the configured sequence."""
    kern = kernels.get_backend(backend)
    ctx = GasContext(cfg.gamma)
    mesh = build_mesh(cfg)
    dx, dt, lam = mesh.dx, mesh.dt, mesh.lam
    N = math.ceil(cfg.T / dt - 1e-9)
    thetas = np.asarray(theta, dtype=float)[:N] if theta is not None else \
        ThetaSequence.from_spec(cfg.theta).take(N)
    if thetas.shape[0] < N:
        raise ConfigError(f"theta sequence has {thetas.shape[0]} values, run needs {N}")
    q_e, q_m = cfg.q_e, cfg.q_m
    log.info("mesh: dx = %.6g, lambda = %.6g, dt = %.6g, L = %.6g, steps = %d, backend = %s",
             dx, lam, dt, mesh.L, N, "python" if kern.__name__.endswith("_py") else "compiled")

    grid, _, mu_h = discretize_initial(cfg, mesh)
    rho_act = grid.rho[1:-1]
    ff0 = fld.init_far_field(cfg, np.repeat(rho_act, 2), mu_h, dx)
    series = fld.far_field_series(ctx, cfg, ff0, N, dt)
    delta0 = fld.initial_delta(rho_act, dx)
    xi0 = fld.compute_xi(1.0, rho_act, mu_h, q_e)
    psi0, mis0 = fld.compute_psi(xi0, ff0.psi_minus, ff0.psi_plus, dx)
    fs = fld.FieldState(0, delta0, 1.0, xi0, psi0, mesh.cone(0), mis0)

    # level-0 coefficient data on the whole sampled mesh
    nodes = np.arange(-(mesh.l + 1), mesh.l + 2, 2)
    sig_nodes = np.asarray(cfg.sigma(nodes * dx), dtype=float)
    mu_nodes = np.asarray(cfg.mu(nodes * dx), dtype=float)
    sigma_sup, sigma_tv = float(np.max(np.abs(sig_nodes))), total_variation(sig_nodes)
    mu_sup = float(np.max(np.abs(mu_nodes)))
    psi_minus_sup = float(np.max(np.abs(series.psi_minus)))
    bounds = fld.field_bounds(cfg, series, fs.xi_l1(dx), delta0, mu_sup, psi_minus_sup)
    gc = GrowthConstants(lam, dt, cfg.T, mesh.L, sigma_sup, sigma_tv, series.C_T,
                         series.C_prime_T, q_m)

    from .interaction_lab import estimate_C_hat

    rho_lo, rho_hi = float(np.min(grid.rho)), float(np.max(grid.rho))
    C_hat = estimate_C_hat(ctx, (rho_lo, rho_hi), samples=cfg.nishida_samples)
    K = cfg.K if cfg.K is not None else 4.0 * C_hat * ctx.eps
    r0, s0 = invariants_array(ctx, grid.rho, grid.u)
    psi_bar = bounds["psi_sup"](N, dx, mesh.L)
    B1_est = gc.B1(psi_bar, bounds["psi_tv"](N, dx, mesh.L))
    st = startup_checks(ctx, r0, s0, cfg.u0.sup, C_hat, K, series.C_T, series.C_prime_T,
                        sigma_sup, q_m, psi_bar, cfg.T, gc, B1_est)
    log.info("far field: C_T = %.6g, E_T = %.6g, C'_T = %.6g", series.C_T, series.E_T,
             series.C_prime_T)
    log.info("constants: A = %.6g, A1 = %.6g, L1 = %.6g, K = %.6g (C-hat = %.6g)",
             gc.A, gc.A1, gc.L1, K, C_hat)
    log.info("startup: 4 C eps TV(r0,s0) = %.6g (%s), C* = %.6g, eps D = %.6g vs sqrt(gamma) "
             "= %.6g, density floor = %.6g, eps2 expression = %.6g",
             st.smallness, "ok" if st.smallness_ok else "NOT satisfied", st.C_star,
             ctx.eps * st.D, ctx.sqrt_gamma, st.rho_floor, st.eps2_lhs)
    if not st.density_ok:
        raise ConfigError(
            f"density lower-bound hypothesis violated: eps (sup s0 - inf r0 + 2 C* T) = "
            f"{ctx.eps * st.D:.6g} >= sqrt(gamma) = {ctx.sqrt_gamma:.6g}")
    if not st.smallness_ok:
        log.warning("smallness condition 4 C eps TV(r0, s0) <= 1 fails (%.6g); growth "
                    "verdicts are reported without the premise", st.smallness)

    snap_steps = sorted({min(N, max(0, round(t / dt))) for t in cfg.snapshot_times})
    snapshots = []
    reports = []
    F_series, B1_series = [], []
    xi_balance, shift, cone_ok = 0.0, 0.0, True

    def level_report(grid, fs, layer):
        curve = build_mesh_curve(grid.n, layer.strength1, layer.strength2,
                                 layer.shock1, layer.shock2)
        V, Q = glimm_V(curve), glimm_Q(curve)
        F = V + K * Q
        r, s = invariants_array(ctx, grid.rho, grid.u)
        TV_u = total_variation(grid.u)
        psi_sup = float(np.max(np.abs(fs.psi_cells)))
        psi_tv = total_variation(fs.psi_cells)
        xi_l1 = fs.xi_l1(dx)
        n = grid.n
        field_ok = (0.0 <= fs.delta <= bounds["delta"](n, dx) * (1 + 1e-12)
                    and xi_l1 <= bounds["xi_l1"](n, dx, mesh.L) * (1 + 1e-12)
                    and psi_tv <= xi_l1 * (1 + 1e-12) + 1e-14
                    and psi_sup <= bounds["psi_sup"](n, dx, mesh.L) * (1 + 1e-12)
                    and xi_balance <= 1e-12 and fs.psi_end_mismatch < 1e-10)
        B1 = gc.B1(psi_sup, psi_tv)
        ok = True
        if F_series:
            ok = step_verdict(F_series[-1], F, gc.A1, B1, dt)
        F_series.append(F)
        B1_series.append(B1)
        min_rho = float(np.min(grid.rho))
        rep = GlimmReport(
            n=n, t=grid.t, V=V, Q=Q, F=F, K=K,
            TV_r=total_variation(r), TV_s=total_variation(s), TV_u=TV_u,
            TV_rho=total_variation(grid.rho), min_rho=min_rho, max_rho=float(np.max(grid.rho)),
            cfl_margin=1.0 - lam * layer.vmax, n_waves=len(curve), delta=fs.delta,
            gamma_corr=fs.gamma, xi_l1=xi_l1, xi_integral=fs.xi_integral(dx),
            psi_sup=psi_sup, psi_tv=psi_tv, psi_end_mismatch=fs.psi_end_mismatch,
            xi_balance_residual=xi_balance, source_shift=shift, B1=B1,
            techimp_ok=techimp_holds(TV_u, V, series.C_prime_T),
            field_ok=bool(field_ok), cone_ok=cone_ok,
            density_ok=min_rho >= st.rho_floor and shift <= st.C_star * dt * (1 + 1e-12),
            step_ok=ok)
        reports.append(rep)
        if cfg.abort_on_bound_failure and not (rep.step_ok and rep.field_ok and rep.techimp_ok
                                               and rep.density_ok):
            raise BoundViolation(f"bound verdict failed at step {n}: {rep}")
        return rep

    if 0 in snap_steps:
        snapshots.append(_snapshot(ctx, grid, fs))
    for n in range(N):
        half, layer = hyperbolic_step(ctx, grid, float(thetas[n]), kern)
        level_report(grid, fs, layer)
        ff_n, ff_next = series.states[n], series.states[n + 1]
        rho_act = half.rho[1:-1]
        delta, gcorr = fld.update_corrector(fs, ff_n, rho_act, dt, dx)
        if delta < 0.0:
            raise CFLError(f"step {n}: corrector mass delta = {delta!r} < 0; lambda too large "
                           f"for the far-field velocities (C_T = {series.C_T:.6g})")
        xi = fld.compute_xi(gcorr, rho_act, mesh.mu_halves(cfg.mu, n + 1), q_e)
        psi, mis = fld.compute_psi(xi, ff_next.psi_minus, ff_next.psi_plus, dx)
        fs_next = fld.FieldState(n + 1, delta, gcorr, xi, psi, mesh.cone(n + 1), mis)
        xi_balance = abs(fs_next.xi_integral(dx) - fs.xi_integral(dx)
                   - q_e * dt * (ff_n.mu_plus * ff_n.u_plus - ff_n.mu_minus * ff_n.u_minus))
        grid, shift = source_step(half, psi, mesh.sigma_cells(cfg.sigma, n + 1), dt, q_m)
        fs = fs_next
        cone_ok = (grid.rho[0] == ff_next.mu_minus and grid.rho[-1] == ff_next.mu_plus
                   and grid.u[0] == ff_next.u_minus and grid.u[-1] == ff_next.u_plus)
        if n + 1 in snap_steps:
            snapshots.append(_snapshot(ctx, grid, fs))
    level_report(grid, fs, solve_layer(ctx, grid, kern))

    growth = check_growth(F_series, B1_series, gc.A1, dt, cfg.T)
    log.info("growth verdicts: %s", growth.summary())
    if cfg.abort_on_bound_failure and not growth.all_pass:
        raise BoundViolation(f"cumulative growth bound failed: {growth.summary()}")
    return RunResult(cfg, ctx, mesh, N, thetas, reports, snapshots, st, gc, growth, series,
                     grid, fs, bounds)
