# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled Riemann kernels.  Mirrors ``_kernels_py`` line by line."""

from libc.math cimport sqrt, exp, log, expm1, log1p, pow, fabs, NAN

cdef enum:
    MAX_ITER = 200

OK = -1


cdef inline void _phi(double gamma, double eps, double sg, double rk, double rho,
                      double* phi, double* dphi) noexcept nogil:
    cdef double lg = log(rho / rk)
    cdef double em, eg, rkg, rke
    if lg > 0.0:
        em = expm1(lg)
        eg = expm1(gamma * lg)
        rkg = pow(rk, gamma)
        phi[0] = sqrt(rkg * eg * em / rho)
        dphi[0] = rkg * (gamma * (eg + 1.0) * em + eg) / (2.0 * rho * phi[0])
    else:
        rke = pow(rk, eps)
        phi[0] = sg / eps * rke * expm1(eps * lg)
        dphi[0] = sg * rke * exp(eps * lg)


cdef inline double _f(double gamma, double eps, double sg, double rl, double rr,
                      double du, double y) noexcept nogil:
    cdef double rho = exp(y), pl, pr, d
    _phi(gamma, eps, sg, rl, rho, &pl, &d)
    _phi(gamma, eps, sg, rr, rho, &pr, &d)
    return du - pl - pr


cdef int _middle(double gamma, double rl, double ul, double rr, double ur,
                 double* rm, double* um) noexcept nogil:
    """0 on success, 1 on vacuum, 2 on non-convergence."""
    cdef double eps, sg, du, base, y, yn, lo, hi, step, rho, phl, phr, dl, dr, f
    cdef int it
    if rl == rr and ul == ur:
        rm[0] = rl
        um[0] = ul
        return 0
    eps = 0.5 * (gamma - 1.0)
    sg = sqrt(gamma)
    if not (ur - ul < sg / eps * (pow(rl, eps) + pow(rr, eps))):
        rm[0] = NAN
        um[0] = NAN
        return 1
    du = ul - ur
    base = 0.5 * (pow(rl, eps) + pow(rr, eps)) + eps * du / (2.0 * sg)
    y = log(base) / eps
    rho = exp(y)
    _phi(gamma, eps, sg, rl, rho, &phl, &dl)
    _phi(gamma, eps, sg, rr, rho, &phr, &dr)
    f = du - phl - phr
    if f == 0.0:
        rm[0] = rho
        um[0] = 0.5 * (ul - phl + ur + phr)
        return 0
    step = 0.5
    if f > 0.0:
        lo = y
        hi = y + step
        for it in range(MAX_ITER):
            if _f(gamma, eps, sg, rl, rr, du, hi) < 0.0:
                break
            lo = hi
            step *= 2.0
            hi = y + step
    else:
        hi = y
        lo = y - step
        for it in range(MAX_ITER):
            if _f(gamma, eps, sg, rl, rr, du, lo) > 0.0:
                break
            hi = lo
            step *= 2.0
            lo = y - step
    for it in range(MAX_ITER):
        rho = exp(y)
        _phi(gamma, eps, sg, rl, rho, &phl, &dl)
        _phi(gamma, eps, sg, rr, rho, &phr, &dr)
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
        if fabs(yn - y) <= 2e-16 * max(1.0, fabs(y)) or hi - lo <= 2e-16 * max(1.0, fabs(y)):
            y = yn
            rho = exp(y)
            _phi(gamma, eps, sg, rl, rho, &phl, &dl)
            _phi(gamma, eps, sg, rr, rho, &phr, &dr)
            break
        y = yn
    else:
        rm[0] = NAN
        um[0] = NAN
        return 2
    rm[0] = rho
    um[0] = 0.5 * (ul - phl + ur + phr)
    return 0


cdef inline double _speed_factor(double gamma, double ra, double rb) noexcept nogil:
    cdef double lg = log(rb / ra)
    cdef double ratio
    if lg == 0.0:
        ratio = gamma
    else:
        ratio = expm1(gamma * lg) / expm1(lg)
    return sqrt((rb / ra) * pow(ra, gamma - 1.0) * ratio)


cdef void _speeds(double gamma, double rl, double ul, double rm, double um,
                  double rr, double ur, double* out, int* sh) noexcept nogil:
    cdef double sg = sqrt(gamma), eps = 0.5 * (gamma - 1.0), c
    if rl == rr and ul == ur:
        c = sg * pow(rl, eps)
        out[0] = ul - c
        out[1] = ul - c
        out[2] = ul + c
        out[3] = ul + c
        sh[0] = 0
        sh[1] = 0
        return
    if rm >= rl:
        sh[0] = 1
        out[0] = ul - _speed_factor(gamma, rl, rm)
        out[1] = out[0]
    else:
        sh[0] = 0
        out[0] = ul - sg * pow(rl, eps)
        out[1] = um - sg * pow(rm, eps)
    if rm >= rr:
        sh[1] = 1
        out[2] = ur + _speed_factor(gamma, rr, rm)
        out[3] = out[2]
    else:
        sh[1] = 0
        out[2] = um + sg * pow(rm, eps)
        out[3] = ur + sg * pow(rr, eps)


cdef void _sample(double gamma, double rl, double ul, double rm, double um,
                  double rr, double ur, double xi, double* ro, double* uo) noexcept nogil:
    cdef double sp[4]
    cdef int sh[2]
    cdef double eps = 0.5 * (gamma - 1.0), sg = sqrt(gamma), s, r, c
    _speeds(gamma, rl, ul, rm, um, rr, ur, sp, sh)
    if xi < sp[0]:
        ro[0] = rl
        uo[0] = ul
    elif xi < sp[1]:
        s = ul + sg * expm1(eps * log(rl)) / eps
        c = (eps * (s - xi) + sg) / (1.0 + eps)
        ro[0] = exp(log1p(eps * (s - xi - sg) / ((1.0 + eps) * sg)) / eps)
        uo[0] = xi + c
    elif xi < sp[2]:
        ro[0] = rm
        uo[0] = um
    elif xi < sp[3]:
        r = ur - sg * expm1(eps * log(rr)) / eps
        c = (eps * (xi - r) + sg) / (1.0 + eps)
        ro[0] = exp(log1p(eps * (xi - r - sg) / ((1.0 + eps) * sg)) / eps)
        uo[0] = xi - c
    else:
        ro[0] = rr
        uo[0] = ur


def solvable(double gamma, double rl, double ul, double rr, double ur):
    cdef double eps = 0.5 * (gamma - 1.0)
    return ur - ul < sqrt(gamma) / eps * (pow(rl, eps) + pow(rr, eps))


def middle_state(double gamma, double rl, double ul, double rr, double ur):
    cdef double rm, um
    _middle(gamma, rl, ul, rr, ur, &rm, &um)
    return rm, um


def wave_speeds(double gamma, double rl, double ul, double rm, double um,
                double rr, double ur):
    cdef double sp[4]
    cdef int sh[2]
    _speeds(gamma, rl, ul, rm, um, rr, ur, sp, sh)
    return sp[0], sp[1], sp[2], sp[3], sh[0], sh[1]


def sample_fan(double gamma, double rl, double ul, double rm, double um,
               double rr, double ur, double xi):
    cdef double ro, uo
    _sample(gamma, rl, ul, rm, um, rr, ur, xi, &ro, &uo)
    return ro, uo


def glimm_row(double gamma, const double[::1] rho, const double[::1] u, double xi,
              double[::1] rho_out, double[::1] u_out, double[::1] str1,
              double[::1] str2, signed char[::1] shock1, signed char[::1] shock2):
    cdef Py_ssize_t n = rho.shape[0] - 1, k
    cdef double rl, ul, rr, ur, rm, um, vmax = 0.0, c
    cdef int j
    cdef double eps = 0.5 * (gamma - 1.0), sg = sqrt(gamma), hl, hm, hr
    cdef double sp[4]
    cdef int sh[2]
    cdef Py_ssize_t bad = OK
    with nogil:
        for k in range(n):
            rl = rho[k]
            ul = u[k]
            rr = rho[k + 1]
            ur = u[k + 1]
            if rl == rr and ul == ur:
                rho_out[k] = rl
                u_out[k] = ul
                str1[k] = 0.0
                str2[k] = 0.0
                shock1[k] = 0
                shock2[k] = 0
                c = sg * pow(rl, eps)
                vmax = max(vmax, fabs(ul) + c)
                continue
            if _middle(gamma, rl, ul, rr, ur, &rm, &um) != 0:
                bad = k
                break
            _speeds(gamma, rl, ul, rm, um, rr, ur, sp, sh)
            for j in range(4):
                vmax = max(vmax, fabs(sp[j]))
            _sample(gamma, rl, ul, rm, um, rr, ur, xi, &rho_out[k], &u_out[k])
            hl = sg * expm1(eps * log(rl)) / eps
            hm = sg * expm1(eps * log(rm)) / eps
            hr = sg * expm1(eps * log(rr)) / eps
            str1[k] = fabs((ul - hl) - (um - hm))
            str2[k] = fabs((um + hm) - (ur + hr))
            shock1[k] = sh[0]
            shock2[k] = sh[1]
    return bad, vmax


def batch_middle(double gamma, const double[::1] rl, const double[::1] ul,
                 const double[::1] rr, const double[::1] ur,
                 double[::1] rm, double[::1] um):
    cdef Py_ssize_t k, n = rl.shape[0]
    with nogil:
        for k in range(n):
            _middle(gamma, rl[k], ul[k], rr[k], ur[k], &rm[k], &um[k])
