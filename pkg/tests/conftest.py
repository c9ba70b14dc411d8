import math
from pathlib import Path

import numpy as np
import pytest

from glimmep.gas import GasContext

ROOT = Path(__file__).resolve().parents[1]
CONFIGS = ROOT / "configs"


@pytest.fixture(params=[1.01, 1.1, 1.3])
def ctx(request):
    return GasContext(request.param)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def rel(a, b):
    return abs(a - b) / max(1.0, abs(b))


def random_pairs(ctx, rng, n, rho=(0.2, 5.0), umax=3.0):
    """n solvable (rl, ul, rr, ur) tuples, densities log-uniform."""
    out = []
    e, sg = ctx.eps, ctx.sqrt_gamma
    while len(out) < n:
        rl, rr = np.exp(rng.uniform(math.log(rho[0]), math.log(rho[1]), 2))
        ul, ur = rng.uniform(-umax, umax, 2)
        if ur - ul < sg / e * (rl ** e + rr ** e):
            out.append((float(rl), float(ul), float(rr), float(ur)))
    return out


def toml_value(v):
    if isinstance(v, dict):
        return "{ " + ", ".join(f"{k} = {toml_value(x)}" for k, x in v.items()) + " }"
    if isinstance(v, (list, tuple)):
        return "[" + ", ".join(toml_value(x) for x in v) + "]"
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, str):
        return f'"{v}"'
    return repr(v)


BASE = {
    "gas": {"gamma": 1.4},
    "physics": {"q": 0.0},
    "grid": {"dx": 0.02, "lambda": 0.25, "T": 0.1, "L": 0.5},
    "initial": {"rho": 1.0, "u": 0.0},
    "coefficients": {"sigma": 0.0},
    "field": {"psi_minus": 0.0},
}


def config_text(**sections):
    """TOML text from BASE with per-section overrides, e.g. grid={"dx": 0.01}."""
    data = {k: dict(v) for k, v in BASE.items()}
    for name, upd in sections.items():
        if upd is None:
            data.pop(name, None)
        else:
            data.setdefault(name, {}).update(upd)
    out = []
    for name, sec in data.items():
        out.append(f"[{name}]")
        out += [f"{k} = {toml_value(v)}" for k, v in sec.items()]
        out.append("")
    return "\n".join(out)


def make_config(**sections):
    from glimmep.config import parse_config

    return parse_config(config_text(**sections))
