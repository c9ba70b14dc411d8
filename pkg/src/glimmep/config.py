"""Run configuration: TOML text -> validated ``RunConfig``.

Layout (all sections optional except ``[grid]`` and ``[initial]``)::

    [gas]         gamma
    [physics]     q, m, e            (charge, electron mass, permittivity)
    [grid]        dx, T, L, lambda | auto_cfl (+ cfl_factor)
    [initial]     rho, u             piecewise-constant data
    [coefficients] sigma, mu         piecewise-constant data
    [field]       psi_minus = number | {times = [...], values = [...]}
    [theta]       kind = "van_der_corput" | "random" | "list", seed, values
    [output]      snapshot_times
    [diagnostics] K, abort_on_bound_failure, nishida_samples

A piecewise-constant datum is a number or ``{breaks = [...], values = [...]}``
with ``len(values) == len(breaks) + 1``; value ``values[i]`` holds on
``[breaks[i-1], breaks[i])``.  Breaks must lie in [-L, L], so the outer
values are the far-field constants.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field

import numpy as np

try:
    import tomllib
except ModuleNotFoundError:  # python < 3.11
    import tomli as tomllib

from .errors import ConfigError

log = logging.getLogger(__name__)

THETA_KINDS = ("van_der_corput", "random", "list")


@dataclass(frozen=True)
class PiecewiseConstant:
    breaks: tuple
    values: tuple

    def __post_init__(self):
        if len(self.values) != len(self.breaks) + 1:
            raise ConfigError(
                f"piecewise data needs len(values) == len(breaks) + 1, got "
                f"{len(self.values)} values and {len(self.breaks)} breaks")
        if any(b1 >= b2 for b1, b2 in zip(self.breaks, self.breaks[1:])):
            raise ConfigError(f"breaks must be strictly increasing: {list(self.breaks)}")
        if not all(math.isfinite(v) for v in self.values + self.breaks):
            raise ConfigError("piecewise data must be finite")

    @classmethod
    def constant(cls, v):
        return cls((), (float(v),))

    def __call__(self, x):
        idx = np.searchsorted(np.asarray(self.breaks, dtype=float), x, side="right")
        out = np.asarray(self.values, dtype=float)[idx]
        return out if out.ndim else float(out)

    @property
    def left(self):
        return self.values[0]

    @property
    def right(self):
        return self.values[-1]

    @property
    def sup(self):
        return max(abs(v) for v in self.values)

    @property
    def tv(self):
        return math.fsum(abs(b - a) for a, b in zip(self.values, self.values[1:]))

    def is_constant(self):
        return all(v == self.values[0] for v in self.values)


@dataclass(frozen=True)
class ThetaSpec:
    kind: str = "van_der_corput"
    seed: int = 0
    values: tuple = ()


@dataclass(frozen=True)
class RunConfig:
    gamma: float
    dx: float
    T: float
    L: float
    rho0: PiecewiseConstant
    u0: PiecewiseConstant
    sigma: PiecewiseConstant
    mu: PiecewiseConstant
    q: float = 1.0
    m_e: float = 1.0
    e_perm: float = 1.0
    lam: float | None = None
    auto_cfl: bool = False
    cfl_factor: float = 2.0
    psi_times: tuple = (0.0,)
    psi_values: tuple = (0.0,)
    theta: ThetaSpec = field(default_factory=ThetaSpec)
    snapshot_times: tuple = ()
    K: float | None = None
    abort_on_bound_failure: bool = False
    nishida_samples: int = 4000

    @property
    def q_e(self):
        return self.q / self.e_perm

    @property
    def q_m(self):
        return self.q / self.m_e

    def psi_minus(self, t):
        """Psi^-(t), piecewise constant between samples."""
        k = int(np.searchsorted(np.asarray(self.psi_times), t, side="right")) - 1
        return float(self.psi_values[max(k, 0)])

    @property
    def decoupled(self):
        """True when the field cannot act on the gas."""
        no_drive = self.sigma.is_constant() and self.sigma.left == 0.0 and \
            all(v == 0.0 for v in self.psi_values)
        neutral = self.q == 0.0 or (
            self.rho0.is_constant() and self.mu.is_constant()
            and self.rho0.left == self.mu.left and self.u0.is_constant())
        return no_drive and neutral


def _piecewise(sec, key, where, default=None):
    if key not in sec:
        if default is None:
            raise ConfigError(f"[{where}] is missing '{key}'")
        return default
    v = sec[key]
    if isinstance(v, (int, float)) and not isinstance(v, bool):
        return PiecewiseConstant.constant(v)
    if isinstance(v, dict):
        try:
            return PiecewiseConstant(tuple(float(b) for b in v.get("breaks", [])),
                                     tuple(float(x) for x in v["values"]))
        except KeyError:
            raise ConfigError(f"[{where}].{key} needs 'values'") from None
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"[{where}].{key}: {exc}") from None
    raise ConfigError(f"[{where}].{key} must be a number or a breaks/values table")


def _num(sec, key, where, default=None):
    if key not in sec:
        if default is None:
            raise ConfigError(f"[{where}] is missing '{key}'")
        return default
    v = sec[key]
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise ConfigError(f"[{where}].{key} must be a number, got {v!r}")
    return float(v)


def parse_config(text: str) -> RunConfig:
    try:
        raw = tomllib.loads(text)
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"config is not valid TOML: {exc}") from None
    gas = raw.get("gas", {})
    phys = raw.get("physics", {})
    grid = raw.get("grid")
    init = raw.get("initial")
    if grid is None:
        raise ConfigError("missing [grid] section")
    if init is None:
        raise ConfigError("missing [initial] section")
    coef = raw.get("coefficients", {})
    fld = raw.get("field", {})
    th = raw.get("theta", {})
    out = raw.get("output", {})
    diag = raw.get("diagnostics", {})

    gamma = _num(gas, "gamma", "gas", 1.4)
    if not 1.0 < gamma < 2.0:
        raise ConfigError(f"gamma must satisfy 1 < gamma < 2 (gamma = 1 + 2 eps, eps > 0), got {gamma}")
    dx = _num(grid, "dx", "grid")
    T = _num(grid, "T", "grid")
    L = _num(grid, "L", "grid")
    if not dx > 0.0:
        raise ConfigError(f"dx must be > 0, got {dx}")
    if not T > 0.0:
        raise ConfigError(f"T must be > 0, got {T}")
    if not L > 0.0:
        raise ConfigError(f"L must be > 0, got {L}")
    auto = bool(grid.get("auto_cfl", False))
    lam = None if auto else _num(grid, "lambda", "grid")
    if lam is not None and not lam > 0.0:
        raise ConfigError(f"lambda must be > 0, got {lam}")
    cfl_factor = _num(grid, "cfl_factor", "grid", 2.0)

    rho0 = _piecewise(init, "rho", "initial")
    u0 = _piecewise(init, "u", "initial")
    sigma = _piecewise(coef, "sigma", "coefficients", PiecewiseConstant.constant(0.0))
    mu = _piecewise(coef, "mu", "coefficients",
                    PiecewiseConstant((), (rho0.left,)) if rho0.left == rho0.right else None)

    q = _num(phys, "q", "physics", 1.0)
    m_e = _num(phys, "m", "physics", 1.0)
    e_perm = _num(phys, "e", "physics", 1.0)
    if q < 0.0 or not m_e > 0.0 or not e_perm > 0.0:
        raise ConfigError(f"need q >= 0, m > 0, e > 0; got q={q}, m={m_e}, e={e_perm}")

    for name, pc in (("rho", rho0), ("u", u0), ("sigma", sigma), ("mu", mu)):
        if pc.breaks and (pc.breaks[0] < -L or pc.breaks[-1] > L):
            raise ConfigError(
                f"{name} breaks {list(pc.breaks)} leave [-L, L] = [{-L}, {L}]; data must be "
                f"constant beyond +-L (far-field condition)")
    if min(rho0.values) <= 0.0:
        raise ConfigError(f"initial density must satisfy rho0 >= rho_min > 0 (no vacuum), "
                          f"got min {min(rho0.values)}")
    if min(sigma.values) < 0.0:
        raise ConfigError(f"friction must satisfy sigma >= 0, got min {min(sigma.values)}")
    if min(mu.values) < 0.0:
        raise ConfigError(f"background density must satisfy mu >= 0, got min {min(mu.values)}")
    if rho0.left != mu.left or rho0.right != mu.right:
        raise ConfigError(
            f"far-field condition rho0 = mu beyond +-L violated: rho0 -> ({rho0.left}, "
            f"{rho0.right}), mu -> ({mu.left}, {mu.right})")

    psi = fld.get("psi_minus", 0.0)
    if isinstance(psi, dict):
        times = tuple(float(t) for t in psi.get("times", []))
        values = tuple(float(v) for v in psi.get("values", []))
        if not times or len(times) != len(values):
            raise ConfigError("[field].psi_minus needs equal-length non-empty times/values")
        if times[0] != 0.0 or any(a >= b for a, b in zip(times, times[1:])):
            raise ConfigError("[field].psi_minus times must start at 0 and increase")
    elif isinstance(psi, (int, float)) and not isinstance(psi, bool):
        times, values = (0.0,), (float(psi),)
    else:
        raise ConfigError("[field].psi_minus must be a number or a times/values table")

    kind = th.get("kind", "van_der_corput")
    if kind not in THETA_KINDS:
        raise ConfigError(f"[theta].kind must be one of {THETA_KINDS}, got {kind!r}")
    tvals = tuple(float(v) for v in th.get("values", []))
    if any(not -1.0 <= v <= 1.0 for v in tvals):
        raise ConfigError("theta values must lie in [-1, 1]")
    if kind == "list" and not tvals:
        raise ConfigError("[theta] kind = 'list' needs 'values'")
    theta = ThetaSpec(kind, int(th.get("seed", 0)), tvals)

    snaps = tuple(float(t) for t in out.get("snapshot_times", []))
    if any(t < 0.0 or t > T for t in snaps):
        raise ConfigError(f"snapshot times must lie in [0, T={T}], got {list(snaps)}")

    K = diag.get("K")
    if K is not None:
        K = float(K)
        if K < 0.0:
            raise ConfigError(f"K must be >= 0, got {K}")

    cfg = RunConfig(
        gamma=gamma, dx=dx, T=T, L=L, rho0=rho0, u0=u0, sigma=sigma, mu=mu,
        q=q, m_e=m_e, e_perm=e_perm, lam=lam, auto_cfl=auto, cfl_factor=cfl_factor,
        psi_times=times, psi_values=values, theta=theta, snapshot_times=snaps, K=K,
        abort_on_bound_failure=bool(diag.get("abort_on_bound_failure", False)),
        nishida_samples=int(diag.get("nishida_samples", 4000)),
    )
    log.info("data bounds: M = max|u0| = %.6g, rho_min = %.6g, rho_max = %.6g",
             u0.sup, min(rho0.values), max(rho0.values))
    if cfg.decoupled:
        log.info("field decoupled")
    return cfg


def load_config(path) -> RunConfig:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    return parse_config(text)
