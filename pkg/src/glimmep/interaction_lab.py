"""Randomised checks of the wave-curve and wave-interaction estimates.

Every campaign draws states from a seeded generator, solves the Riemann
problems exactly (vectorised through ``riemann.solve_many``) and compares
outgoing strengths with the stated bounds.  A case violates a bound when it
exceeds it by more than ``tol = 1e-9 (1 + |beta| + |gamma|)``.

Two-sided shift cases are named by the region pair "before->after", where
"before" is the region of the right state relative to the left state and
"after" the same after both states are shifted by (delta_-, delta_-) and
(delta_+, delta_+) in invariant coordinates (a velocity shift).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .diagnostics import curve_from_waves, glimm_F
from .gas import GasContext, Region, enthalpy_term
from .riemann import solve_many
from .wave_curves import g1, g1_derivatives, g2, g2_derivatives

TOL = 1e-9
RHO_RANGE = (0.2, 5.0)
U_MAX = 3.0
MAX_WITNESSES = 20

I, II, III, IV = (int(r) for r in (Region.I, Region.II, Region.III, Region.IV))
_NAMES = {I: "I", II: "II", III: "III", IV: "IV"}

# (before, sign of delta_+ - delta_-) -> after regions that cannot occur
IMPOSSIBLE = {
    (I, -1): (II, III, IV),
    (II, +1): (I, IV),
    (II, -1): (III, IV),
    (III, +1): (I, II, IV),
    (IV, +1): (I, II),
    (IV, -1): (II, III),
}

CASES_43 = ("I->I", "IV->I", "II->I", "III->I", "I->II", "II->II", "III->II",
            "I->IV", "III->IV", "IV->IV")


@dataclass
class LemmaVerdict:
    lemma: str
    cases: int = 0
    violations: list = field(default_factory=list)
    n_violations: int = 0
    max_slack: float = -math.inf     # max of (lhs - rhs); <= tol means pass
    constant: float | None = None
    counts: dict = field(default_factory=dict)
    notes: dict = field(default_factory=dict)

    @property
    def passed(self):
        return self.n_violations == 0

    def record(self, excess, tol, witness_fn, label):
        """Fold an array of (lhs - rhs) into the verdict."""
        if excess.size == 0:
            return
        self.max_slack = max(self.max_slack, float(np.max(excess)))
        bad = np.flatnonzero(excess > tol)
        self.n_violations += int(bad.size)
        for k in bad[:max(0, MAX_WITNESSES - len(self.violations))]:
            w = witness_fn(int(k))
            w["bound"] = label
            w["excess"] = float(excess[k])
            self.violations.append(w)

    def summary(self):
        out = {"lemma": self.lemma, "cases": self.cases, "violations": self.n_violations,
               "max_slack": self.max_slack, "passed": self.passed}
        if self.constant is not None:
            out["constant"] = self.constant
        out.update(self.notes)
        return out


def _draw_states(rng, n, rho_range=RHO_RANGE, u_max=U_MAX):
    lo, hi = rho_range
    rho = np.exp(rng.uniform(math.log(lo), math.log(hi), n))
    return rho, rng.uniform(-u_max, u_max, n)


def _solvable(ctx, rl, ul, rr, ur):
    e = ctx.eps
    return ur - ul < ctx.sqrt_gamma / e * (rl ** e + rr ** e)


def _witness(ctx, rl, ul, rr, ur, **extra):
    def make(k):
        w = {"gamma": ctx.gamma, "left": (float(rl[k]), float(ul[k])),
             "right": (float(rr[k]), float(ur[k]))}
        for key, val in extra.items():
            w[key] = float(val[k]) if isinstance(val, np.ndarray) else val
        return w
    return make


# ---------------------------------------------------------- one-sided shifts --

def _shift_campaign(ctx, samples, seed, which, rho_range, u_max, delta_max=2.0):
    name = "left-shift" if which == "left" else "right-shift"
    v = LemmaVerdict(name)
    rng = np.random.default_rng(seed)
    gap_best = (-math.inf, None)
    translation_fail = 0
    while v.cases < samples:
        m = 4 * (samples - v.cases) + 64
        rl, ul = _draw_states(rng, m, rho_range, u_max)
        rr, ur = _draw_states(rng, m, rho_range, u_max)
        d = rng.uniform(0.0, delta_max, m)
        d = np.where(d == 0.0, delta_max, d)
        ul2 = ul + d if which == "left" else ul
        ur2 = ur + d if which == "right" else ur
        ok = _solvable(ctx, rl, ul, rr, ur) & _solvable(ctx, rl, ul2, rr, ur2)
        rl, ul, rr, ur, ul2, ur2, d = (a[ok] for a in (rl, ul, rr, ur, ul2, ur2, d))
        before = solve_many(ctx, rl, ul, rr, ur)
        keep = before.region == I
        after = solve_many(ctx, rl[keep], ul2[keep], rr[keep], ur2[keep])
        b, g = before.strength1[keep], before.strength2[keep]
        b2, g2_ = after.strength1, after.strength2
        rl, ul, rr, ur, ul2, ur2, d = (a[keep] for a in (rl, ul, rr, ur, ul2, ur2, d))
        if which == "right":
            sel = after.region == I
            b, g, b2, g2_, rl, ul, rr, ur, ul2, ur2, d = (
                a[sel] for a in (b, g, b2, g2_, rl, ul, rr, ur, ul2, ur2, d))
        else:
            # translation invariance: right stays in Omega_I of the shifted left
            translation_fail += int(np.sum(after.region != I))
        take = min(samples - v.cases, b.shape[0])
        b, g, b2, g2_, rl, ul, rr, ur, ul2, ur2, d = (
            a[:take] for a in (b, g, b2, g2_, rl, ul, rr, ur, ul2, ur2, d))
        tol = TOL * (1.0 + b + g)
        wit = _witness(ctx, rl, ul2, rr, ur2, delta=d, beta=b, gamma_=g)
        v.record(b2 - (b + d), tol, wit, "|beta'| <= |beta| + delta")
        v.record(g2_ - (g + d), tol, wit, "|gamma'| <= |gamma| + delta")
        if take:
            gap = np.maximum(b2 - b, g2_ - g)
            k = int(np.argmax(gap))
            if gap[k] > gap_best[0]:
                gap_best = (float(gap[k]), wit(k))
        v.cases += take
    v.notes["strict_gap_witness"] = gap_best[1]
    v.notes["strict_gap"] = gap_best[0]
    if which == "left":
        v.notes["translation_failures"] = translation_fail
        v.n_violations += translation_fail
    return v


def check_lemma_41(ctx: GasContext, samples: int = 100_000, seed: int = 0,
                   rho_range=RHO_RANGE, u_max=U_MAX) -> LemmaVerdict:
    """Left state shifted by delta > 0 in both invariants, right in Omega_I."""
    return _shift_campaign(ctx, samples, seed, "left", rho_range, u_max)


def check_lemma_42(ctx: GasContext, samples: int = 100_000, seed: int = 0,
                   rho_range=RHO_RANGE, u_max=U_MAX) -> LemmaVerdict:
    """Right state shifted by delta > 0, staying in Omega_I."""
    return _shift_campaign(ctx, samples, seed, "right", rho_range, u_max)


# ---------------------------------------------------------- two-sided shifts --

def check_lemma_43(ctx: GasContext, samples: int = 1_000_000, seed: int = 0,
                   rho_range=RHO_RANGE, u_max=U_MAX, delta_max=2.0,
                   batch: int = 200_000) -> LemmaVerdict:
    """All ten before->after cases plus the non-occurrence of impossible pairs.

    ``samples`` is the number of solvable attempts drawn.
    """
    v = LemmaVerdict("two-sided-shift")
    rng = np.random.default_rng(seed)
    counts = {c: 0 for c in CASES_43}
    impossible_hits = {}
    minus_form_fail = 0
    unsigned_iv_fail = 0
    attempts = 0
    while attempts < samples:
        m = min(batch, samples - attempts)
        rl, ul = _draw_states(rng, m, rho_range, u_max)
        rr, ur = _draw_states(rng, m, rho_range, u_max)
        dm = rng.uniform(-delta_max, delta_max, m)
        dp = rng.uniform(-delta_max, delta_max, m)
        ok = _solvable(ctx, rl, ul, rr, ur) & _solvable(ctx, rl, ul + dm, rr, ur + dp)
        rl, ul, rr, ur, dm, dp = (a[ok] for a in (rl, ul, rr, ur, dm, dp))
        attempts += m
        bf = solve_many(ctx, rl, ul, rr, ur)
        af = solve_many(ctx, rl, ul + dm, rr, ur + dp)
        rb, ra = bf.region, af.region
        b, g = bf.strength1, bf.strength2
        b2, g2_ = af.strength1, af.strength2
        d = np.abs(dp - dm)
        sgn = np.sign(dp - dm)
        tol = TOL * (1.0 + b + g)
        wit = _witness(ctx, rl, ul + dm, rr, ur + dp, delta_minus=dm, delta_plus=dp,
                       beta=b, gamma_=g)

        for (before, s), bad_after in IMPOSSIBLE.items():
            for after in bad_after:
                hit = np.flatnonzero((rb == before) & (sgn == s) & (ra == after))
                if hit.size:
                    key = f"{_NAMES[before]}->{_NAMES[after]} (sign {s:+d})"
                    impossible_hits[key] = impossible_hits.get(key, 0) + int(hit.size)
                    for k in hit[:2]:
                        w = wit(int(k))
                        w["bound"] = "impossible " + key
                        w["excess"] = math.nan
                        if len(v.violations) < MAX_WITNESSES:
                            v.violations.append(w)

        def case(before, after):
            sel = np.flatnonzero((rb == before) & (ra == after))
            counts[f"{_NAMES[before]}->{_NAMES[after]}"] += int(sel.size)
            return sel

        def chk(sel, excess, label):
            v.record(excess, tol[sel], lambda k: wit(int(sel[k])), label)

        s = case(I, I)
        chk(s, b2[s] - (b[s] + d[s]), "I->I |beta'| <= |beta| + d")
        chk(s, g2_[s] - (g[s] + d[s]), "I->I |gamma'| <= |gamma| + d")
        s = case(IV, I)
        chk(s, b2[s] - (b[s] + d[s]), "IV->I |beta'| <= |beta| + d")
        chk(s, g2_[s] - d[s], "IV->I |gamma'| <= d")
        s = case(II, I)
        chk(s, g2_[s] - (g[s] + d[s]), "II->I |gamma'| <= |gamma| + d")
        chk(s, b2[s] - d[s], "II->I |beta'| <= d")
        s = case(III, I)
        chk(s, b2[s] + g2_[s] - 2.0 * d[s], "III->I |beta'| + |gamma'| <= 2d")
        s = case(I, II)
        chk(s, g2_[s] - (b[s] + g[s] + d[s]), "I->II |gamma'| <= |beta| + |gamma| + d")
        s = case(II, II)
        chk(s, np.abs(g2_[s] - (g[s] + dm[s] - dp[s])), "II->II gamma' = gamma + delta_- - delta_+")
        s = case(III, II)
        chk(s, g2_[s] - d[s], "III->II |gamma'| <= d")
        s = case(I, IV)
        chk(s, b2[s] - (b[s] + g[s] + d[s]), "I->IV |beta'| <= |beta| + |gamma| + d")
        minus_form_fail += int(np.sum(b2[s] > b[s] + g[s] - d[s] + tol[s]))
        s = case(III, IV)
        chk(s, b2[s] - d[s], "III->IV |beta'| <= d")
        s = case(IV, IV)
        chk(s, np.abs(b2[s] - (b[s] + dm[s] - dp[s])), "IV->IV beta' = beta + delta_- - delta_+")
        unsigned_iv_fail += int(np.sum(np.abs(b2[s] - (b[s] + d[s])) > tol[s]))

    v.counts = counts
    v.cases = sum(counts.values())
    v.n_violations += sum(impossible_hits.values())
    v.notes.update({
        "attempts": attempts,
        "impossible_hits": impossible_hits,
        "missing_cases": [c for c, n in counts.items() if n == 0],
        "I->IV_minus_form_failures": minus_form_fail,
        "I->IV_cases": counts["I->IV"],
        "IV->IV_unsigned_equality_failures": unsigned_iv_fail,
        "IV->IV_cases": counts["IV->IV"],
    })
    return v


# ------------------------------------------------------ Nishida-Smoller ----

def nishida_smoller_samples(ctx: GasContext, samples: int, seed: int = 0,
                            rho_range=(0.5, 2.0), a_max: float = 10.0):
    """(excess, ratio) arrays for pairs of 1-shocks from a common r_-.

    excess = (s'_- - s'_+) - (s_- - s_+) with rho_- > rho'_-; ratio is the
    excess over eps (s_- - s'_-) (r_- - r_+).
    """
    rng = np.random.default_rng(seed)
    lo, hi = rho_range
    x = np.exp(rng.uniform(math.log(lo), math.log(hi), (2, samples)))
    rho, rho_p = np.max(x, axis=0), np.min(x, axis=0)
    keep = rho > rho_p
    rho, rho_p = rho[keep], rho_p[keep]
    a = a_max * (1.0 - rng.uniform(0.0, 1.0, rho.shape[0]))   # (0, a_max]
    d = g1(ctx, a, rho)
    dp = g1(ctx, a, rho_p)
    excess = dp - d
    ds = 2.0 * (enthalpy_term(ctx, rho) - enthalpy_term(ctx, rho_p))
    ratio = excess / (ctx.eps * ds * a)
    return excess, ratio, rho, rho_p, a, d, dp


def check_nishida_smoller(ctx: GasContext, samples: int = 4000, seed: int = 0,
                          rho_range=(0.5, 2.0), a_max: float = 10.0) -> LemmaVerdict:
    """Lower bound asserted; C-hat = max ratio, with a doubling stability check."""
    v = LemmaVerdict("nishida-smoller")
    excess, ratio, rho, rho_p, a, d, dp = nishida_smoller_samples(
        ctx, samples, seed, rho_range, a_max)
    v.cases = int(excess.shape[0])
    scale = 1e-12 * (1.0 + d + dp)
    wit = lambda k: {"gamma": ctx.gamma, "rho_minus": float(rho[k]),
                     "rho_minus_prime": float(rho_p[k]), "a": float(a[k])}
    v.record(-excess, scale, wit, "(s'_- - s'_+) - (s_- - s_+) >= 0")
    c1 = float(np.max(ratio))
    c2 = float(np.max(nishida_smoller_samples(ctx, 2 * samples, seed + 1, rho_range, a_max)[1]))
    v.constant = c1
    v.notes.update({"C_hat": c1, "C_hat_doubled": c2, "rho_range": tuple(rho_range),
                    "stable": bool(math.isfinite(c1) and abs(c2 - c1) <= 0.2 * c1)})
    if not v.notes["stable"]:
        v.n_violations += 1
    return v


def estimate_C_hat(ctx: GasContext, rho_range, samples: int = 4000, seed: int = 0) -> float:
    lo, hi = rho_range
    if not hi > lo:
        lo, hi = 0.5 * lo, 2.0 * hi
    return check_nishida_smoller(ctx, samples, seed, (lo, hi)).constant


# ------------------------------------------------------------- g1 / g2 -----

A_GRID = (1e-3, 1e-2, 1e-1, 1.0, 10.0, 100.0, 1000.0)
RHO_GRID = (0.1, 1.0, 10.0)


def _richardson(f, a, h):
    d1 = (f(a + h) - f(a - h)) / (2.0 * h)
    d2 = (f(a + h / 2) - f(a - h / 2)) / h
    return (4.0 * d2 - d1) / 3.0


def check_g_properties(ctx: GasContext, a_grid=A_GRID, rho_grid=RHO_GRID,
                       rel: float = 1e-6) -> LemmaVerdict:
    """Shape bounds 0 <= g' < 1, g'' >= 0 and analytic vs. finite differences."""
    v = LemmaVerdict("g-shape")
    worst = 0.0
    for name, g, gd in (("g1", g1, g1_derivatives), ("g2", g2, g2_derivatives)):
        for rho in rho_grid:
            for a in a_grid:
                val, d1, d2 = gd(ctx, a, rho)
                h = 1e-3 * a
                fd1 = _richardson(lambda x: g(ctx, x, rho), a, h)
                fd2 = _richardson(lambda x: gd(ctx, x, rho)[1], a, h)
                e1 = abs(fd1 - d1) / abs(d1)
                e2 = abs(fd2 - d2) / abs(d2)
                worst = max(worst, e1, e2)
                v.cases += 1
                w = {"function": name, "a": a, "rho_minus": rho, "g": val, "g1": d1, "g2": d2,
                     "fd1": fd1, "fd2": fd2}
                for ok, label in ((0.0 <= d1 <= 1.0 - 1e-9, "0 <= g' <= 1 - 1e-9"),
                                  (d2 >= -1e-8, "g'' >= -1e-8"),
                                  (e1 <= rel, "g' matches finite difference"),
                                  (e2 <= rel, "g'' matches finite difference")):
                    if not ok:
                        v.n_violations += 1
                        v.violations.append(dict(w, bound=label))
    v.max_slack = worst
    v.notes["max_fd_rel_error"] = worst
    return v


# ---------------------------------------------------------------- diamond --

def _fan_waves(batch, k, pos):
    return [(pos, 1, bool(batch.shock1[k]), float(batch.strength1[k])),
            (pos, 2, bool(batch.shock2[k]), float(batch.strength2[k]))]


def check_diamond_estimate(ctx: GasContext, samples: int = 20_000, K: float | None = None,
                           seed: int = 0, shift_max: float = 0.05, n_outside: int = 3,
                           rho_range=(0.5, 2.0), u_max: float = 1.0) -> LemmaVerdict:
    """F(J2) <= F(J1) + 2d + 2 K d sum_outside |beta| on synthesised diamonds.

    J1 crosses the fans (U_L, U_B) and (U_B, U_R); J2 crosses the fan of the
    shifted pair (U_L + delta_k, U_R + delta_k+2).  Shocks outside the
    diamond are shared by both curves.  Only diamonds with K F(J1) <= 1 are
    kept (the small-functional regime).
    """
    if K is None:
        K = 4.0 * estimate_C_hat(ctx, rho_range, seed=seed) * ctx.eps
    v = LemmaVerdict("diamond")
    rng = np.random.default_rng(seed)
    m = samples
    rL, uL = _draw_states(rng, m, rho_range, u_max)
    rB, uB = _draw_states(rng, m, rho_range, u_max)
    rR, uR = _draw_states(rng, m, rho_range, u_max)
    dk = rng.uniform(-shift_max, shift_max, m)
    dk2 = rng.uniform(-shift_max, shift_max, m)
    zero = rng.uniform(0.0, 1.0, m) < 0.25
    dk2 = np.where(zero, dk, dk2)   # a quarter of the diamonds are Galilean
    ok = (_solvable(ctx, rL, uL, rB, uB) & _solvable(ctx, rB, uB, rR, uR)
          & _solvable(ctx, rL, uL + dk, rR, uR + dk2))
    rL, uL, rB, uB, rR, uR, dk, dk2 = (a[ok] for a in (rL, uL, rB, uB, rR, uR, dk, dk2))
    f_lb = solve_many(ctx, rL, uL, rB, uB)
    f_br = solve_many(ctx, rB, uB, rR, uR)
    f_out = solve_many(ctx, rL, uL + dk, rR, uR + dk2)
    excess_all, filtered, homog_fail = [], 0, 0
    for k in range(rL.shape[0]):
        outside = []
        for side, pos0 in ((-1, -10), (1, 10)):
            for j in range(int(rng.integers(0, n_outside + 1))):
                outside.append((pos0 + side * j, int(rng.integers(1, 3)), True,
                                float(rng.uniform(0.0, 0.3))))
        j1 = curve_from_waves(outside + _fan_waves(f_lb, k, 0) + _fan_waves(f_br, k, 1))
        F1 = glimm_F(j1, K)
        if K * F1 > 1.0:
            filtered += 1
            continue
        j2 = curve_from_waves(outside + _fan_waves(f_out, k, 0))
        F2 = glimm_F(j2, K)
        d = abs(dk2[k] - dk[k])
        side_sum = math.fsum(w[3] for w in outside)
        rhs = F1 + 2.0 * d + 2.0 * K * d * side_sum
        ex = F2 - rhs
        excess_all.append(ex)
        tol = TOL * (1.0 + F1)
        if ex > tol:
            v.n_violations += 1
            if len(v.violations) < MAX_WITNESSES:
                v.violations.append({"gamma": ctx.gamma, "left": (float(rL[k]), float(uL[k] + dk[k])),
                                     "right": (float(rR[k]), float(uR[k] + dk2[k])),
                                     "bottom": (float(rB[k]), float(uB[k])),
                                     "delta_k": float(dk[k]), "delta_k2": float(dk2[k]),
                                     "F1": F1, "F2": F2, "excess": ex, "bound": "diamond"})
            if d == 0.0:
                homog_fail += 1
        v.cases += 1
    ex = np.asarray(excess_all)
    v.max_slack = float(np.max(ex)) if ex.size else -math.inf
    v.constant = K
    v.notes.update({
        "K": K, "filtered_out": filtered, "homogeneous_failures": homog_fail,
        "slack_quantiles": [float(q) for q in np.quantile(ex, [0.0, 0.5, 0.9, 0.99, 1.0])]
        if ex.size else [],
    })
    return v
