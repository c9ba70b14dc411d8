"""Compiled vs pure-Python Riemann kernels.

    python3 benchmarks/bench_kernels.py [--cells 2000] [--repeat 5]

Times one Glimm row sweep, a batch of middle-state solves and a full
regression run on each backend, and checks that the outputs agree bitwise.
"""

import argparse
import time
from pathlib import Path

import numpy as np

from glimmep import _kernels_py
from glimmep.config import load_config
from glimmep.scheme import run

try:
    from glimmep import _kernels as _compiled
except ImportError:
    _compiled = None

ROOT = Path(__file__).resolve().parents[1]


def best_of(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def row_data(cells, seed=0):
    rng = np.random.default_rng(seed)
    rho = np.exp(rng.normal(0.0, 0.3, cells))
    u = rng.normal(0.0, 0.3, cells)
    return rho, u


def sweep(kern, gamma, rho, u, xi):
    m = rho.shape[0]
    out = [np.empty(m - 1), np.empty(m - 1), np.empty(m - 1), np.empty(m - 1),
           np.zeros(m - 1, np.int8), np.zeros(m - 1, np.int8)]
    status, vmax = kern.glimm_row(gamma, rho, u, xi, *out)
    return status, vmax, out


def batch(kern, gamma, rho, u):
    n = rho.shape[0] - 1
    rm, um = np.empty(n), np.empty(n)
    kern.batch_middle(gamma, rho[:-1], u[:-1], rho[1:], u[1:], rm, um)
    return rm, um


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--cells", type=int, default=2000)
    p.add_argument("--repeat", type=int, default=5)
    p.add_argument("--gamma", type=float, default=1.1)
    args = p.parse_args()
    if _compiled is None:
        raise SystemExit("compiled extension not built; run `pip install -e . --no-build-isolation`")

    rho, u = row_data(args.cells)
    g = args.gamma
    rows = []
    for label, fn in (
        ("glimm_row", lambda k: sweep(k, g, rho, u, 0.3)),
        ("batch_middle", lambda k: batch(k, g, rho, u)),
    ):
        tc, oc = best_of(lambda: fn(_compiled), args.repeat)
        tp, op = best_of(lambda: fn(_kernels_py), max(1, args.repeat // 2))
        if label == "glimm_row":
            same = oc[0] == op[0] and oc[1] == op[1] and all(
                np.array_equal(a, b) for a, b in zip(oc[2], op[2]))
        else:
            same = all(np.array_equal(a, b) for a, b in zip(oc, op))
        rows.append((f"{label} ({args.cells} cells)", tc, tp, same))

    cfg = load_config(ROOT / "configs" / "regression.toml")
    tc, rc = best_of(lambda: run(cfg, backend="compiled"), 1)
    tp, rp = best_of(lambda: run(cfg, backend="python"), 1)
    same = np.array_equal(rc.grid.rho, rp.grid.rho) and np.array_equal(rc.grid.u, rp.grid.u)
    rows.append((f"regression run ({rc.n_steps} steps)", tc, tp, same))

    print(f"{'case':<32}{'compiled [s]':>14}{'python [s]':>14}{'speedup':>10}  bitwise")
    for name, tc, tp, same in rows:
        print(f"{name:<32}{tc:>14.4g}{tp:>14.4g}{tp / tc:>10.1f}  {'yes' if same else 'NO'}")


if __name__ == "__main__":
    main()
