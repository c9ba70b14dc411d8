import numpy as np
import pytest

from glimmep.config import PiecewiseConstant
from glimmep.mesh import Mesh, snap_support


@pytest.mark.parametrize("L, dx, l", [(1.0, 0.01, 101), (1.0, 0.004, 251), (0.5, 0.1, 5),
                                      (0.55, 0.1, 7), (0.01, 1.0, 1)])
def test_snap_support(L, dx, l):
    assert snap_support(L, dx) == l
    assert snap_support(L, dx) * dx >= L - 1e-12


def test_rows_and_cone():
    m = Mesh(0.1, 5, 0.25)
    for n in range(6):
        idx = m.center_index(n)
        assert idx.shape[0] == m.n_cells(n) == 5 + n + 2
        assert np.all((idx + n) % 2 == 0)
        # far cells sit just outside the cone
        assert (idx[1] - 1) * m.dx == pytest.approx(-m.cone(n))
        assert (idx[-2] + 1) * m.dx == pytest.approx(m.cone(n))
        assert m.half_index(n).shape[0] == 2 * (m.n_cells(n) - 2)
    assert m.dt == pytest.approx(0.025)


def test_level_relation():
    # each new cell k sits between old cells k-1 and k
    m = Mesh(0.1, 5, 0.25)
    for n in range(4):
        old, new = m.center_index(n), m.center_index(n + 1)
        assert np.array_equal(new[1:-1], 0.5 * (old[:-1] + old[1:]))


def test_coefficient_sampling():
    m = Mesh(0.1, 5, 0.25)
    sig = PiecewiseConstant((0.0,), (1.0, 2.0))
    s0 = m.sigma_cells(sig, 0)
    s1 = m.sigma_cells(sig, 1)
    # odd-level cell centred at x = 0 (an even node) takes the level-0 cell there
    x1 = m.centers(1)
    assert s1[np.argmin(np.abs(x1))] == 2.0
    assert s0[0] == 1.0 and s0[-1] == 2.0
    mu = m.mu_halves(sig, 0)
    # half-cells left of 0 see the level-0 cell centred at 0 when their left node is odd
    assert mu.shape[0] == 10
    assert np.all(np.isin(mu, [1.0, 2.0]))


def test_odd_l_required():
    with pytest.raises(ValueError):
        Mesh(0.1, 4, 0.25)
