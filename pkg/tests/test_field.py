import math

import mpmath as mp
import numpy as np
import pytest

from conftest import make_config
from glimmep import field as fld
from glimmep.errors import ConsistencyError
from glimmep.scheme import build_mesh, discretize_initial


def far_field_for(cfg):
    mesh = build_mesh(cfg)
    grid, _, mu_h = discretize_initial(cfg, mesh)
    return fld.init_far_field(cfg, np.repeat(grid.rho[1:-1], 2), mu_h, mesh.dx), mesh, grid, mu_h


def test_decay_factors():
    d, p = fld.decay_factors(0.0, 0.1)
    assert d == 1.0 and p == 0.1
    d, p = fld.decay_factors(1.0, 1.0)
    assert d == pytest.approx(math.exp(-1.0), rel=1e-15)
    assert p == pytest.approx(1 - math.exp(-1.0), rel=1e-15)
    # the small-x series joins the closed form smoothly
    for x in (0.99e-6, 1.01e-6):
        _, p = fld.decay_factors(x, 1.0)
        with mp.workdps(40):
            want = float(-mp.expm1(-mp.mpf(x)) / x)
        assert p == pytest.approx(want, rel=1e-15)


def test_neutral_initial_data():
    cfg = make_config(physics={"q": 1.0}, field={"psi_minus": 0.3})
    ff, *_ = far_field_for(cfg)
    assert ff.psi_plus == ff.psi_minus == 0.3


def test_rectangle_excess():
    cfg = make_config(physics={"q": 1.0}, grid={"L": 1.0, "dx": 0.1},
                      initial={"rho": {"breaks": [-1.0, 1.0], "values": [1.0, 2.0, 1.0]}},
                      coefficients={"mu": 1.0}, field={"psi_minus": 0.5})
    ff, *_ = far_field_for(cfg)
    assert ff.psi_plus == pytest.approx(0.5 - 2.0, abs=1e-14)


def test_regression_excess_vs_quadrature():
    from conftest import CONFIGS
    from glimmep.config import load_config

    cfg = load_config(CONFIGS / "regression.toml")
    ff, mesh, grid, mu_h = far_field_for(cfg)
    # midpoint-exact integral over [-L, L] with fine independent quadrature
    x = np.linspace(-mesh.L, mesh.L, 200_001)
    xm = 0.5 * (x[1:] + x[:-1])
    excess = np.sum(cfg.rho0(xm) - cfg.mu(xm)) * (x[1] - x[0])
    want = cfg.psi_minus(0.0) - cfg.q_e * excess
    assert ff.psi_plus == pytest.approx(want, abs=1e-4)


def test_far_field_step_examples():
    ff = fld.FarField(0, 0.2, 0.7, 0.4, -0.3, 0.0, 0.0, 0.0, 0.0, 1.0, 1.0)
    nxt = fld.step_far_field(ff, 0.01, 0.2)
    assert nxt.psi_plus == 0.7
    assert nxt.u_minus == pytest.approx(0.4 - 0.01 * 0.2, rel=1e-15)
    assert nxt.u_plus == pytest.approx(-0.3 - 0.01 * 0.7, rel=1e-15)
    assert nxt.n == 1


def test_far_field_local_error_is_second_order():
    mp.mp.dps = 30
    sm, sp, mm, mpl, qe, qm = 0.7, 0.3, 1.0, 1.4, 0.8, 1.3
    psi_m, psi_p0, um0, up0 = 0.25, -0.4, 0.6, -0.2

    def exact(dt):
        f = lambda t, y: [qe * (mpl * y[2] - mm * y[1]), -sm * y[1] - qm * psi_m,
                          -sp * y[2] - qm * y[0]]
        sol = mp.odefun(f, 0, [psi_p0, um0, up0])
        return [float(v) for v in sol(dt)]

    errs = []
    for dt in (1e-2, 1e-3, 1e-4):
        ff = fld.FarField(0, psi_m, psi_p0, um0, up0, mm, mpl, sm, sp, qe, qm)
        nxt = fld.step_far_field(ff, dt, psi_m)
        ex = exact(dt)
        errs.append(max(abs(nxt.psi_plus - ex[0]), abs(nxt.u_minus - ex[1]),
                        abs(nxt.u_plus - ex[2])))
    slopes = np.log10(np.array(errs[:-1]) / np.array(errs[1:]))
    assert np.all(slopes > 1.8), (errs, slopes)


def test_corrector_formulas():
    fs = fld.FieldState(0, 3.0, 1.0, np.zeros(4), np.zeros(4), 0.2)
    ff = fld.FarField(0, 0.0, 0.0, 2.0, -5.0, 0.0, 0.0, 0.0, 0.0)
    delta, g = fld.update_corrector(fs, ff, np.array([1.0, 1.0, 1.0]), 0.1, 0.05)
    assert delta == pytest.approx(3.0 + 2 * 0.05)
    # conserved discrete mass gives gamma = 1
    rho = np.full(4, 1.3)   # the cone gains one cell per step
    fs = fld.FieldState(0, fld.mass_integral(rho[:3], 0.1), 1.0, np.zeros(6), np.zeros(5), 0.3)
    ff = fld.FarField(0, 0.0, 0.0, 0.0, 0.0, 1.3, 1.3, 0.0, 0.0)
    delta, g = fld.update_corrector(fs, ff, rho, 0.01, 0.1)
    assert g == pytest.approx(1.0, rel=1e-15)


def test_xi_neutral_and_sign():
    mu = np.full(8, 1.2)
    xi = fld.compute_xi(1.0, np.full(4, 1.2), mu, 1.0)
    assert np.all(xi == 0.0)
    xi = fld.compute_xi(1.0, np.full(4, 1.5), mu, 2.0)
    assert np.all(xi < 0.0)


def test_psi_prefix_sum():
    cells, mis = fld.compute_psi(np.zeros(6), 0.4, 0.4, 0.1)
    assert np.all(cells == 0.4) and mis == 0.0
    xi = np.zeros(6)
    xi[2:4] = 3.0          # one cell of charge 3, width 2 dx
    cells, _ = fld.compute_psi(xi, 0.0, 3.0 * 0.2, 0.1)
    assert cells[1] == 0.0
    assert cells[2] == pytest.approx(0.6) and cells[-1] == pytest.approx(0.6)
    with pytest.raises(ConsistencyError):
        fld.compute_psi(xi, 0.0, 1.0, 0.1)


def test_field_bounds_monotone_in_n():
    from conftest import CONFIGS
    from glimmep.config import load_config

    cfg = load_config(CONFIGS / "regression.toml")
    ff0, mesh, grid, mu_h = far_field_for(cfg)
    from glimmep.gas import GasContext
    series = fld.far_field_series(GasContext(cfg.gamma), cfg, ff0, 10, mesh.dt)
    b = fld.field_bounds(cfg, series, 0.1, 4.0, 1.2, 0.1)
    assert b["delta"](5, mesh.dx) > b["delta"](0, mesh.dx) >= b["delta_T"]
    assert b["xi_l1"](5, mesh.dx, mesh.L) > b["xi_T"]
    assert series.C_T >= abs(cfg.u0.left)
