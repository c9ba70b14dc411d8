"""Pure-Python Riemann kernels.  Same signatures as the compiled ``_kernels``.

All routines work on bare floats (gamma, densities, velocities) so that the
compiled twin can mirror them line by line.
"""

import math

MAX_ITER = 200

OK = -1


def _phi(gamma, eps, sg, rk, rho):
    """Velocity drop from state k to density rho along its forward wave curve.

    Returns (phi, dphi/dln(rho)).  rho > rk is the shock branch.
    """
    lg = math.log(rho / rk)
    if lg > 0.0:
        em = math.expm1(lg)
        eg = math.expm1(gamma * lg)
        rkg = rk ** gamma
        phi = math.sqrt(rkg * eg * em / rho)
        dphi = rkg * (gamma * (eg + 1.0) * em + eg) / (2.0 * rho * phi)
        return phi, dphi
    rke = rk ** eps
    return sg / eps * rke * math.expm1(eps * lg), sg * rke * math.exp(eps * lg)


def solvable(gamma, rl, ul, rr, ur):
    eps = 0.5 * (gamma - 1.0)
    return ur - ul < math.sqrt(gamma) / eps * (rl ** eps + rr ** eps)


def middle_state(gamma, rl, ul, rr, ur):
    """(rho_m, u_m) of the Riemann problem, or (nan, nan) if it contains vacuum."""
    if rl == rr and ul == ur:
        return rl, ul
    eps = 0.5 * (gamma - 1.0)
    sg = math.sqrt(gamma)
    if not ur - ul < sg / eps * (rl ** eps + rr ** eps):
        return math.nan, math.nan
    du = ul - ur
    # exact when both waves are rarefactions
    base = 0.5 * (rl ** eps + rr ** eps) + eps * du / (2.0 * sg)
    y = math.log(base) / eps
    phl, dl = _phi(gamma, eps, sg, rl, math.exp(y))
    phr, dr = _phi(gamma, eps, sg, rr, math.exp(y))
    f = du - phl - phr
    if f == 0.0:
        return math.exp(y), 0.5 * (ul - phl + ur + phr)
    # bracket [lo, hi] with f(lo) > 0 > f(hi)
    step = 0.5
    if f > 0.0:
        lo = y
        hi = y + step
        for _ in range(MAX_ITER):
            rho = math.exp(hi)
            if du - _phi(gamma, eps, sg, rl, rho)[0] - _phi(gamma, eps, sg, rr, rho)[0] < 0.0:
                break
            lo = hi
            step *= 2.0
            hi = y + step
    else:
        hi = y
        lo = y - step
        for _ in range(MAX_ITER):
            rho = math.exp(lo)
            if du - _phi(gamma, eps, sg, rl, rho)[0] - _phi(gamma, eps, sg, rr, rho)[0] > 0.0:
                break
            hi = lo
            step *= 2.0
            lo = y - step
    for _ in range(MAX_ITER):
        rho = math.exp(y)
        phl, dl = _phi(gamma, eps, sg, rl, rho)
        phr, dr = _phi(gamma, eps, sg, rr, rho)
        f = du - phl - phr
        if f > 0.0:
            lo = y
        elif f < 0.0:
            hi = y
        else:
            break
        yn = y + f / (dl + dr)
        if not (lo < yn < hi):
            yn = 0.5 * (lo + hi)
        if abs(yn - y) <= 2e-16 * max(1.0, abs(y)) or hi - lo <= 2e-16 * max(1.0, abs(y)):
            y = yn
            rho = math.exp(y)
            phl = _phi(gamma, eps, sg, rl, rho)[0]
            phr = _phi(gamma, eps, sg, rr, rho)[0]
            break
        y = yn
    else:
        return math.nan, math.nan
    return rho, 0.5 * (ul - phl + ur + phr)


def _speed_factor(gamma, ra, rb):
    lg = math.log(rb / ra)
    ratio = gamma if lg == 0.0 else math.expm1(gamma * lg) / math.expm1(lg)
    return math.sqrt((rb / ra) * ra ** (gamma - 1.0) * ratio)


def wave_speeds(gamma, rl, ul, rm, um, rr, ur):
    """(head1, tail1, head2, tail2, shock1, shock2) of a solved fan."""
    sg = math.sqrt(gamma)
    eps = 0.5 * (gamma - 1.0)
    if rl == rr and ul == ur:
        c = sg * rl ** eps
        return ul - c, ul - c, ul + c, ul + c, 0, 0
    if rm >= rl:
        sh1 = 1
        h1 = t1 = ul - _speed_factor(gamma, rl, rm)
    else:
        sh1 = 0
        h1 = ul - sg * rl ** eps
        t1 = um - sg * rm ** eps
    if rm >= rr:
        sh2 = 1
        h2 = t2 = ur + _speed_factor(gamma, rr, rm)
    else:
        sh2 = 0
        h2 = um + sg * rm ** eps
        t2 = ur + sg * rr ** eps
    return h1, t1, h2, t2, sh1, sh2


def sample_fan(gamma, rl, ul, rm, um, rr, ur, xi):
    """State at ray x/t = xi of the fan (left, middle, right)."""
    h1, t1, h2, t2, sh1, sh2 = wave_speeds(gamma, rl, ul, rm, um, rr, ur)
    eps = 0.5 * (gamma - 1.0)
    sg = math.sqrt(gamma)
    if xi < h1:
        return rl, ul
    if xi < t1:
        # inside the 1-fan, s = s_l
        s = ul + sg * math.expm1(eps * math.log(rl)) / eps
        c = (eps * (s - xi) + sg) / (1.0 + eps)
        rho = math.exp(math.log1p(eps * (s - xi - sg) / ((1.0 + eps) * sg)) / eps)
        return rho, xi + c
    if xi < h2:
        return rm, um
    if xi < t2:
        r = ur - sg * math.expm1(eps * math.log(rr)) / eps
        c = (eps * (xi - r) + sg) / (1.0 + eps)
        rho = math.exp(math.log1p(eps * (xi - r - sg) / ((1.0 + eps) * sg)) / eps)
        return rho, xi - c
    return rr, ur


def _strengths(gamma, rl, ul, rm, um, rr, ur):
    eps = 0.5 * (gamma - 1.0)
    sg = math.sqrt(gamma)
    hl = sg * math.expm1(eps * math.log(rl)) / eps
    hm = sg * math.expm1(eps * math.log(rm)) / eps
    hr = sg * math.expm1(eps * math.log(rr)) / eps
    return abs((ul - hl) - (um - hm)), abs((um + hm) - (ur + hr))


def glimm_row(gamma, rho, u, xi, rho_out, u_out, str1, str2, shock1, shock2):
    """Solve every neighbour pair of the row and sample each fan at ray xi.

    Pair k is (rho[k], u[k]) | (rho[k+1], u[k+1]); its sample goes to
    ``*_out[k]``.  Returns (status, max_speed) where status is OK or the index
    of the first pair that contains vacuum.
    """
    n = len(rho) - 1
    vmax = 0.0
    for k in range(n):
        rl, ul, rr, ur = rho[k], u[k], rho[k + 1], u[k + 1]
        if rl == rr and ul == ur:
            rho_out[k] = rl
            u_out[k] = ul
            str1[k] = 0.0
            str2[k] = 0.0
            shock1[k] = 0
            shock2[k] = 0
            c = math.sqrt(gamma) * rl ** (0.5 * (gamma - 1.0))
            vmax = max(vmax, abs(ul) + c)
            continue
        rm, um = middle_state(gamma, rl, ul, rr, ur)
        if rm != rm:
            return k, vmax
        h1, t1, h2, t2, sh1, sh2 = wave_speeds(gamma, rl, ul, rm, um, rr, ur)
        vmax = max(vmax, abs(h1), abs(t1), abs(h2), abs(t2))
        rho_out[k], u_out[k] = sample_fan(gamma, rl, ul, rm, um, rr, ur, xi)
        str1[k], str2[k] = _strengths(gamma, rl, ul, rm, um, rr, ur)
        shock1[k] = sh1
        shock2[k] = sh2
    return OK, vmax


def batch_middle(gamma, rl, ul, rr, ur, rm, um):
    """middle_state over arrays; vacuum pairs get nan."""
    for k in range(len(rl)):
        rm[k], um[k] = middle_state(gamma, rl[k], ul[k], rr[k], ur[k])
