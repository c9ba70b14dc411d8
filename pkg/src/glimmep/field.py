"""Discrete electric field: far-field recursions, mass corrector, charge
density xi and the potential Psi.

Per step the order is: densities at n+1 are known, then the corrector
(delta_{n+1}, gamma_{n+1}), then xi_{n+1} on half-cells, then the prefix sum
Psi_{n+1}.  The far-field series (Psi^+-, u^+-) does not depend on the
interior and is computed for the whole run up front.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .errors import ConsistencyError

# relative tolerance for the Psi right-end match
PSI_END_TOL = 1e-10


def decay_factors(sigma: float, dt: float):
    """(exp(-sigma dt), (1 - exp(-sigma dt)) / sigma) with the sigma -> 0 limit."""
    x = sigma * dt
    if x < 1e-6:
        # 4-term series of (1 - e^-x)/x
        phi = dt * (1.0 - x / 2.0 + x * x / 6.0 - x * x * x / 24.0)
    else:
        phi = -math.expm1(-x) / sigma
    return math.exp(-x), phi


@dataclass(frozen=True)
class FarField:
    n: int
    psi_minus: float
    psi_plus: float
    u_minus: float
    u_plus: float
    mu_minus: float
    mu_plus: float
    sigma_minus: float
    sigma_plus: float
    q_e: float = 1.0
    q_m: float = 1.0


def init_far_field(cfg, rho0_halves, mu_halves, dx: float) -> FarField:
    """Level-0 far field; Psi^+_0 = Psi^-_0 - (q/e) int(rho0 - mu)."""
    excess = math.fsum((np.asarray(rho0_halves) - np.asarray(mu_halves)).tolist()) * dx
    psi_m = cfg.psi_minus(0.0)
    return FarField(0, psi_m, psi_m - cfg.q_e * excess, cfg.u0.left, cfg.u0.right,
                    cfg.mu.left, cfg.mu.right, cfg.sigma.left, cfg.sigma.right,
                    cfg.q_e, cfg.q_m)


def step_far_field(ff: FarField, dt: float, psi_minus_next: float) -> FarField:
    psi_p = (ff.psi_plus + ff.q_e * (ff.mu_plus * ff.u_plus - ff.mu_minus * ff.u_minus) * dt
             + psi_minus_next - ff.psi_minus)
    dm, pm = decay_factors(ff.sigma_minus, dt)
    dp, pp = decay_factors(ff.sigma_plus, dt)
    # same operation order as the interior source step, so the cone is exact
    um = ff.u_minus * dm - (ff.q_m * pm) * psi_minus_next
    up = ff.u_plus * dp - (ff.q_m * pp) * psi_p
    return replace(ff, n=ff.n + 1, psi_minus=psi_minus_next, psi_plus=psi_p,
                   u_minus=um, u_plus=up)


@dataclass
class FarFieldSeries:
    psi_minus: np.ndarray
    psi_plus: np.ndarray
    u_minus: np.ndarray
    u_plus: np.ndarray
    r_minus: np.ndarray
    r_plus: np.ndarray
    s_minus: np.ndarray
    s_plus: np.ndarray
    states: list

    @property
    def C_T(self):
        return float(max(np.max(np.abs(self.u_minus)), np.max(np.abs(self.u_plus))))

    @property
    def E_T(self):
        return float(max(np.max(np.abs(self.psi_minus)), np.max(np.abs(self.psi_plus))))

    @property
    def C_prime_T(self):
        return float(np.max(np.abs(self.r_plus - self.r_minus) + np.abs(self.s_plus - self.s_minus)))


def far_field_series(ctx, cfg, ff0: FarField, n_steps: int, dt: float) -> FarFieldSeries:
    from .gas import enthalpy_term

    states = [ff0]
    for n in range(n_steps):
        states.append(step_far_field(states[-1], dt, cfg.psi_minus((n + 1) * dt)))
    col = lambda name: np.array([getattr(s, name) for s in states])
    um, up = col("u_minus"), col("u_plus")
    hm = float(enthalpy_term(ctx, ff0.mu_minus))
    hp = float(enthalpy_term(ctx, ff0.mu_plus))
    return FarFieldSeries(col("psi_minus"), col("psi_plus"), um, up,
                          um - hm, up - hp, um + hm, up + hp, states)


@dataclass
class FieldState:
    n: int
    delta: float
    gamma: float
    xi: np.ndarray           # half-cell values inside the cone
    psi_cells: np.ndarray    # one value per row cell, far cells included
    L_n: float
    psi_end_mismatch: float = 0.0

    def xi_integral(self, dx):
        return math.fsum(self.xi.tolist()) * dx

    def xi_l1(self, dx):
        return math.fsum(np.abs(self.xi).tolist()) * dx

    def xi_cells(self):
        """Cell averages of xi on the full row (0 on the far cells)."""
        out = np.zeros(self.psi_cells.shape[0])
        out[1:-1] = 0.5 * (self.xi[0::2] + self.xi[1::2])
        return out


def mass_integral(rho_active, dx):
    """int (1 + rho) over the cone, exact for cell-constant rho."""
    return math.fsum((1.0 + np.asarray(rho_active)).tolist()) * 2.0 * dx


def initial_delta(rho0_active, dx):
    return mass_integral(rho0_active, dx)


def update_corrector(fs: FieldState, ff: FarField, rho_next_active, dt: float, dx: float):
    """(delta_{n+1}, gamma_{n+1}) from the level-n far field and new densities."""
    delta = (fs.delta + (1.0 + ff.mu_minus) * dx + (1.0 + ff.mu_plus) * dx
             + dt * (ff.mu_minus * ff.u_minus - ff.mu_plus * ff.u_plus))
    return delta, delta / mass_integral(rho_next_active, dx)


def compute_xi(gamma_corr: float, rho_active, mu_halves, q_e: float):
    """xi = -(q/e)((1 + rho) gamma - (1 + mu)) on half-cells."""
    rho_h = np.repeat(np.asarray(rho_active, dtype=float), 2)
    return -q_e * ((1.0 + rho_h) * gamma_corr - (1.0 + np.asarray(mu_halves)))


def compute_psi(xi_halves, psi_minus: float, psi_plus: float, dx: float):
    """Psi on every row cell: Psi^- plus the xi-integral up to the cell's right edge.

    Returns (psi_cells, mismatch) where mismatch is the right-end defect
    against Psi^+ before it is snapped.
    """
    xi = np.asarray(xi_halves, dtype=float)
    n_active = xi.shape[0] // 2
    csum = np.cumsum(xi * dx)
    out = np.empty(n_active + 2)
    out[0] = psi_minus
    out[1:-1] = psi_minus + csum[1::2]
    end = out[-2] if n_active else psi_minus
    mismatch = abs(end - psi_plus)
    scale = max(1.0, abs(psi_plus), abs(psi_minus), float(np.sum(np.abs(xi))) * dx)
    if mismatch > PSI_END_TOL * scale:
        raise ConsistencyError(
            f"Psi right end {end!r} does not match Psi^+ = {psi_plus!r} "
            f"(defect {mismatch:.3e}); corrector or far-field recursion broken")
    out[-1] = psi_plus
    return out, mismatch


def field_bounds(cfg, series: FarFieldSeries, xi0_l1: float, delta0: float, mu_sup: float,
                 psi_minus_sup: float):
    """Closures for the a-priori field bounds at level n."""
    T, q_e = cfg.T, cfg.q_e
    mm, mp = series.states[0].mu_minus, series.states[0].mu_plus
    C_T = series.C_T
    delta_T = delta0 + (mm + mp) * T * C_T
    xi_T = xi0_l1 + q_e * T * (mm + mp) * C_T

    def delta_bound(n, dx):
        return delta_T + (2.0 + mm + mp) * n * dx

    def xi_bound(n, dx, L):
        return xi_T + 4.0 * q_e * (1.0 + mu_sup) * (L + n * dx)

    def psi_sup_bound(n, dx, L):
        return psi_minus_sup + xi_bound(n, dx, L)

    return {"delta_T": delta_T, "xi_T": xi_T, "delta": delta_bound,
            "xi_l1": xi_bound, "psi_tv": xi_bound, "psi_sup": psi_sup_bound}
