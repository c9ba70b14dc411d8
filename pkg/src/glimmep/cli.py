"""Command-line entry point: ``glimmep {run,riemann,interactions,check}``.

Exit codes: 0 success, 2 config error, 3 CFL violation, 4 vacuum,
5 bound-verdict failure (with the abort flag), 1 anything else.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

import numpy as np

from . import fileio
from .errors import GlimmError

log = logging.getLogger("glimmep")

CAMPAIGNS = ("left-shift", "right-shift", "two-sided-shift", "nishida-smoller", "g-shape",
             "diamond")


def _cmd_check(args):
    from .config import load_config
    from .scheme import build_mesh

    cfg = load_config(args.config)
    mesh = build_mesh(cfg)
    print(f"config ok: gamma = {cfg.gamma}, dx = {mesh.dx}, lambda = {mesh.lam}, "
          f"L = {mesh.L}, T = {cfg.T}")
    return 0


def _cmd_run(args):
    from .config import load_config
    from .scheme import run

    cfg = load_config(args.config)
    res = run(cfg, backend=args.backend)
    out = Path(args.out)
    for snap in res.snapshots:
        fileio.emit_snapshot(snap, out / f"snapshot_{snap.n:06d}.csv")
    fileio.emit_diagnostics(res.reports, out / "diagnostics.csv")
    summary = {
        "steps": res.n_steps, "dt": res.dt, "lambda": res.mesh.lam, "L": res.mesh.L,
        "startup": res.startup.as_dict(),
        "constants": {"A": res.constants.A, "A1": res.constants.A1, "L1": res.constants.L1,
                      "C_T": res.far_field.C_T, "E_T": res.far_field.E_T,
                      "C_prime_T": res.far_field.C_prime_T},
        "growth": res.growth.summary(),
        "all_verdicts_pass": res.growth.all_pass and all(
            r.techimp_ok and r.field_ok and r.cone_ok and r.density_ok for r in res.reports),
    }
    fileio.atomic_write(out / "summary.json", json.dumps(summary, indent=2, sort_keys=True) + "\n")
    print(json.dumps(summary["growth"], sort_keys=True))
    print(f"wrote {len(res.snapshots)} snapshot(s) and diagnostics to {out}")
    return 0


def riemann_text(fan, ctx, rays: int, xi_range=None) -> str:
    from .gas import invariants_array

    if xi_range is None:
        w = 1.25 * fan.max_speed() + 1e-3
        xi_range = (-w, w)
    xi = np.linspace(xi_range[0], xi_range[1], rays)
    st = [fan.sample(x) for x in xi]
    rho = np.array([s.rho for s in st])
    u = np.array([s.u for s in st])
    r, s = invariants_array(ctx, rho, u)
    meta = {"gamma": fan.gamma, "rho_left": fan.left.rho, "u_left": fan.left.u,
            "rho_middle": fan.middle.rho, "u_middle": fan.middle.u,
            "rho_right": fan.right.rho, "u_right": fan.right.u}
    lines = [f"# region = {fan.region.name}"]
    for w in (fan.wave1, fan.wave2):
        lines.append(f"# wave{w.family} = {w.kind} strength {fileio.fmt(w.strength)} "
                     f"head {fileio.fmt(w.head)} tail {fileio.fmt(w.tail)}")
    body = fileio._table(meta, ("xi", "rho", "u", "r", "s"), [xi, rho, u, r, s])
    return "\n".join(lines) + "\n" + body


def _cmd_riemann(args):
    from .gas import GasContext
    from .riemann import solve

    gamma, left, right, opts = fileio.read_riemann_case(args.case)
    ctx = GasContext(gamma)
    fan = solve(ctx, left, right)
    rays = args.rays if args.rays is not None else int(opts.get("rays", 21))
    xi_range = tuple(opts["xi_range"]) if "xi_range" in opts else None
    text = riemann_text(fan, ctx, rays, xi_range)
    if args.out:
        fileio.atomic_write(args.out, text)
    else:
        sys.stdout.write(text)
    return 0


def _cmd_interactions(args):
    from . import interaction_lab as lab
    from .gas import GasContext

    ctx = GasContext(args.gamma)
    wanted = set(args.campaign)
    if "all" in wanted:
        wanted = set(CAMPAIGNS)
    n = args.samples
    runs = {
        "left-shift": lambda: lab.check_lemma_41(ctx, n, args.seed),
        "right-shift": lambda: lab.check_lemma_42(ctx, n, args.seed),
        "two-sided-shift": lambda: lab.check_lemma_43(ctx, n, args.seed),
        "nishida-smoller": lambda: lab.check_nishida_smoller(ctx, min(n, 4000), args.seed),
        "g-shape": lambda: lab.check_g_properties(ctx),
        "diamond": lambda: lab.check_diamond_estimate(ctx, min(n, 20000), seed=args.seed),
    }
    ok = True
    for name in sorted(wanted):
        v = runs[name]()
        ok &= v.passed
        summ = {k: val for k, val in v.summary().items() if not isinstance(val, dict)}
        print(json.dumps(summ, sort_keys=True, default=str))
        if args.witness_dir:
            wdir = Path(args.witness_dir)
            for i, w in enumerate(v.violations):
                if "left" in w:
                    fileio.write_witness(w, wdir / f"{name}_{i:03d}.toml", name)
            gap = v.notes.get("strict_gap_witness")
            if gap:
                fileio.write_witness(gap, wdir / f"{name}_strict_gap.toml", name)
    if not ok and args.strict:
        return 5
    return 0


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("-v", "--verbose", action="store_true", default=argparse.SUPPRESS,
                        help="debug logging")
    common.add_argument("-q", "--quiet", action="store_true", default=argparse.SUPPRESS,
                        help="warnings only")
    p = argparse.ArgumentParser(prog="glimmep", description=__doc__.splitlines()[0],
                                parents=[common])
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("check", help="validate a run config", parents=[common])
    c.add_argument("config")
    c.set_defaults(func=_cmd_check)

    r = sub.add_parser("run", help="run the scheme and write snapshots and diagnostics",
                       parents=[common])
    r.add_argument("config")
    r.add_argument("-o", "--out", default="out")
    r.add_argument("--backend", choices=("compiled", "python"), default=None)
    r.set_defaults(func=_cmd_run)

    m = sub.add_parser("riemann", help="solve one Riemann problem and sample its fan",
                       parents=[common])
    m.add_argument("case", help="TOML with gamma, [left], [right] (witness files work)")
    m.add_argument("-n", "--rays", type=int, default=None)
    m.add_argument("-o", "--out", default=None)
    m.set_defaults(func=_cmd_riemann)

    i = sub.add_parser("interactions", help="sampling campaigns for the interaction estimates",
                       parents=[common])
    i.add_argument("--gamma", type=float, default=1.2)
    i.add_argument("--campaign", nargs="+", default=["all"], choices=("all",) + CAMPAIGNS)
    i.add_argument("--samples", type=int, default=100_000)
    i.add_argument("--seed", type=int, default=0)
    i.add_argument("--witness-dir", default=None)
    i.add_argument("--strict", action="store_true", help="exit 5 when any verdict fails")
    i.set_defaults(func=_cmd_interactions)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    verbose, quiet = getattr(args, "verbose", False), getattr(args, "quiet", False)
    level = logging.DEBUG if verbose else logging.WARNING if quiet else logging.INFO
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr)
    try:
        return args.func(args)
    except GlimmError as exc:
        log.error("%s: %s", type(exc).__name__, exc)
        return exc.exit_code
    except OSError as exc:
        log.error("I/O error: %s", exc)
        return 1


if __name__ == "__main__":
    sys.exit(main())
