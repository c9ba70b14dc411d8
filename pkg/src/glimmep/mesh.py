"""Staggered mesh geometry.

Nodes sit at x_j = j dx.  At level n the cells are I_{n,i} = (x_{i-1}, x_{i+1})
with n + i even.  The support half-width is L = l dx with l odd, so the cone
edges +-(L + n dx) are cell edges at every level.  A row at level n holds the
l + n cells inside the cone plus one far-field cell on each side.

Coefficient data (sigma, mu) is sampled once on the level-0 cells.  mu is
evaluated on half-cells [m dx, (m+1) dx], which never straddle a level-0
cell, so integrals of mu are exact sums.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np


def snap_support(L: float, dx: float) -> int:
    """Smallest odd l with l dx >= L (up to rounding)."""
    l = math.ceil(L / dx - 1e-9)
    if l % 2 == 0:
        l += 1
    return max(l, 1)


@dataclass(frozen=True)
class Mesh:
    dx: float
    l: int
    lam: float

    def __post_init__(self):
        if self.l % 2 != 1:
            raise ValueError(f"support index l must be odd, got {self.l}")

    @property
    def L(self):
        return self.l * self.dx

    @property
    def dt(self):
        return self.lam * self.dx

    def n_cells(self, n):
        return self.l + n + 2

    def center_index(self, n):
        """Node index of every cell centre of the level-n row."""
        return 2 * np.arange(self.n_cells(n)) - (self.l + 1 + n)

    def centers(self, n):
        return self.center_index(n) * self.dx

    def half_index(self, n):
        """Left node m of each half-cell inside the level-n cone."""
        return np.arange(-(self.l + n), self.l + n)

    def cone(self, n):
        return (self.l + n) * self.dx

    def sigma_cells(self, sigma, n):
        """sigma on the level-n cells via the level-0 cell to the right."""
        i = self.center_index(n)
        j = np.where(i % 2 == 0, i, i + 1)
        return np.asarray(sigma(j * self.dx), dtype=float)

    def mu_halves(self, mu, n):
        m = self.half_index(n)
        j = np.where(m % 2 == 0, m, m + 1)
        return np.asarray(mu(j * self.dx), dtype=float)

    def level0_nodes(self):
        """Node indices of the level-0 cells inside [-L, L]."""
        return np.arange(-(self.l - 1), self.l, 2)
