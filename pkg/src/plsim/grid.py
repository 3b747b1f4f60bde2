"""Uniform 1-D grid and the shared finite-difference operators.

Two operator families live here:

* nodal stencils (centered interior, 3-point one-sided ends) used by the
  residual evaluators and diagnostics, and
* staggered node/cell operators (forward difference to cell midpoints and
  its adjoint divergence) used by the assemblies, where summation-by-parts
  structure matters.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp


class GridError(ValueError):
    pass


@dataclass(frozen=True)
class Grid:
    """Uniform grid on [0, L] with N cells and N+1 nodes."""

    length: float
    n_cells: int

    def __post_init__(self):
        if self.length <= 0:
            raise GridError("length must be > 0")
        if self.n_cells < 8:
            raise GridError("grid too coarse: need at least 8 cells")

    @property
    def h_x(self) -> float:
        return self.length / self.n_cells

    @property
    def node_count(self) -> int:
        return self.n_cells + 1

    @property
    def nodes(self) -> np.ndarray:
        return np.linspace(0.0, self.length, self.node_count)

    @property
    def cell_midpoints(self) -> np.ndarray:
        return (np.arange(self.n_cells) + 0.5) * self.h_x

    def trapezoid_weights(self) -> np.ndarray:
        w = np.full(self.node_count, self.h_x)
        w[0] = w[-1] = 0.5 * self.h_x
        return w


def build_grid(length, n_cells) -> Grid:
    return Grid(float(length), int(n_cells))


# ---------------------------------------------------------------------------
# nodal stencils (diagnostics / residual evaluators)

def first_derivative(f, h):
    """Nodal d/dx: centered interior, second-order one-sided at both ends."""
    f = np.asarray(f, dtype=float)
    g = np.empty_like(f)
    g[1:-1] = (f[2:] - f[:-2]) / (2 * h)
    g[0] = (-3 * f[0] + 4 * f[1] - f[2]) / (2 * h)
    g[-1] = (3 * f[-1] - 4 * f[-2] + f[-3]) / (2 * h)
    return g


def second_derivative(f, h):
    """Nodal d2/dx2: centered interior, one-sided (4-point) at both ends."""
    f = np.asarray(f, dtype=float)
    g = np.empty_like(f)
    g[1:-1] = (f[2:] - 2 * f[1:-1] + f[:-2]) / h**2
    g[0] = (2 * f[0] - 5 * f[1] + 4 * f[2] - f[3]) / h**2
    g[-1] = (2 * f[-1] - 5 * f[-2] + 4 * f[-3] - f[-4]) / h**2
    return g


# ---------------------------------------------------------------------------
# staggered operators (assemblies)

def cell_difference_matrix(grid: Grid) -> sp.csr_matrix:
    """Forward difference mapping node values to cell midpoints, O(h^2) there."""
    N, h = grid.n_cells, grid.h_x
    rows = np.repeat(np.arange(N), 2)
    cols = np.ravel(np.column_stack([np.arange(N), np.arange(1, N + 1)]))
    vals = np.tile([-1.0 / h, 1.0 / h], N)
    return sp.csr_matrix((vals, (rows, cols)), shape=(N, N + 1))


def cell_average_matrix(grid: Grid) -> sp.csr_matrix:
    """Two-point average mapping node values to cell midpoints."""
    N = grid.n_cells
    rows = np.repeat(np.arange(N), 2)
    cols = np.ravel(np.column_stack([np.arange(N), np.arange(1, N + 1)]))
    vals = np.full(2 * N, 0.5)
    return sp.csr_matrix((vals, (rows, cols)), shape=(N, N + 1))


def drop_left_node(M: sp.spmatrix) -> sp.csr_matrix:
    """Remove the x=0 column (field constrained to zero there)."""
    return sp.csr_matrix(M)[:, 1:]
