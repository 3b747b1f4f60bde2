"""Discrete generator of the first-order evolution U_t = (A0 - B) U on the
five-field state U = (v, z, u1, u2, u3).

Layout and structure
--------------------
v, z, u1, u2 live on grid nodes 1..N (their x=0 values vanish and are
eliminated); u3 lives on cell midpoints.  All first derivatives are staggered
cell differences, whose only null vector is the constant, so no grid-scale
component can decouple from the damping.  The undamped part is assembled as
A0 = H^{-1} S with S exactly skew-symmetric and H the Gram matrix of the
state-space energy inner product

    ||U||^2 = alpha ||v_x||^2 + rho ||z||^2 + mu ||u1||^2
              + xi eps3 ||u2||^2 + eps3 ||u3||^2,

so the computed undamped spectrum is purely imaginary up to roundoff and the
damped spectrum has nonpositive real parts exactly.  The boundary relations
at x = L (the dynamic Robin relation coupling the elastic flux to u3, and the
vanishing of u1 there) are enforced weakly through the flux/adjoint
structure; the x = 0 relations are enforced strongly.  The weak treatment at
x = L is what lets the resonant eigenmode, whose u1 and u2 do not vanish
there, be represented on the grid.

The state-space compatibility constraint

    xi u2_x - u3 + (gamma/eps3) v_x = 0

is imposed on every cell, eliminating the u3 block; the reduced operator is
expressed in an orthonormal basis of the constraint manifold, so its 2-norm
resolvent equals the energy-norm resolvent.
"""

from __future__ import annotations

import os
from dataclasses import dataclass

import numpy as np
import scipy.linalg as sla
import scipy.sparse as sp

from .grid import Grid, cell_difference_matrix, drop_left_node
from .params import DampingConfig, PhysicalParams

_STATE_BLOCKS = ("v", "z", "u1", "u2", "u3")


class DimensionError(ValueError):
    pass


@dataclass(frozen=True)
class GeneratorMatrix:
    grid: Grid
    params: PhysicalParams
    damping: DampingConfig
    gram: sp.csr_matrix            # H
    skew: sp.csr_matrix            # S = H A0, exactly skew
    damping_gram: sp.csr_matrix    # H B, symmetric positive semidefinite
    basis: sp.csr_matrix           # Z: compatibility-manifold basis (columns)
    cholesky: np.ndarray           # R with R^T R = Z^T H Z
    matrix: np.ndarray             # reduced operator, orthonormal coordinates
    dof_map: dict

    @property
    def dimension(self) -> int:
        return self.matrix.shape[0]

    @property
    def product_dimension(self) -> int:
        return self.gram.shape[0]

    def block(self, name) -> slice:
        lo, hi = self.dof_map[name]
        return slice(lo, hi)

    def product_matrix(self) -> np.ndarray:
        """A0 - B on the unconstrained product space (dense)."""
        H = self.gram.toarray()
        return np.linalg.solve(H, (self.skew - self.damping_gram).toarray())

    def damping_block_diagonal(self) -> np.ndarray:
        """Diagonal of B = H^{-1} (H B); entries a/rho, b, c on z, u2, u3."""
        H = self.gram.toarray()
        return np.diag(np.linalg.solve(H, self.damping_gram.toarray()))

    def reduce_coordinates(self, v, z, u1, u2) -> np.ndarray:
        """Orthonormal coordinates of the constrained state determined by its
        free blocks; u3 follows from the compatibility relation."""
        return self.cholesky @ np.concatenate([v, z, u1, u2])

    def product_state(self, v, z, u1, u2) -> np.ndarray:
        """Full five-block state with u3 filled in from compatibility."""
        return self.basis @ np.concatenate([v, z, u1, u2])

    def energy(self, y_product) -> float:
        """State-space energy (half the squared energy norm) of a product state."""
        return 0.5 * float(np.real(np.conj(y_product) @ (self.gram @ y_product)))


def assemble_generator(params: PhysicalParams, damping: DampingConfig,
                       grid: Grid, max_n_cells: int = None) -> GeneratorMatrix:
    if max_n_cells is None:
        max_n_cells = int(os.environ.get("PLSIM_MAX_DENSE_N", "400"))
    if grid.n_cells > max_n_cells:
        raise DimensionError(
            f"n_cells={grid.n_cells} exceeds dense-eigenwork cap {max_n_cells}")

    p, d = params, damping
    N, h = grid.n_cells, grid.h_x
    w1 = grid.trapezoid_weights()[1:]

    Dc1 = drop_left_node(cell_difference_matrix(grid))
    nf = N
    dof_map = {name: (i * nf, (i + 1) * nf) for i, name in enumerate(_STATE_BLOCKS)}

    K = (Dc1.T @ (sp.diags(np.full(N, h)) @ Dc1)).tocsr()
    W1 = sp.diags(w1)
    Ch = sp.diags(np.full(N, h))
    Zb = sp.csr_matrix((nf, nf))

    H = sp.block_diag([p.alpha * K, p.rho * W1, p.mu * W1,
                       p.xi * p.eps3 * W1, p.eps3 * Ch], format="csr")

    # S = H A0 built pairwise; skewness exact by construction:
    #   v_t = z;  z_t = div(alpha v_x + gamma u3)/rho;
    #   u1_t = u2 - u3_x;  u2_t = -(mu/(xi eps3)) u1;
    #   u3_t = -(mu/eps3) u1_x + (gamma/eps3) z_x
    gDT = (p.gamma * Ch @ Dc1).T.tocsr()
    mDT = (p.mu * Ch @ Dc1).T.tocsr()
    rows = [
        [Zb, p.alpha * K, Zb, Zb, Zb],
        [-p.alpha * K, Zb, Zb, Zb, -gDT],
        [Zb, Zb, Zb, p.mu * W1, mDT],
        [Zb, Zb, -p.mu * W1, Zb, Zb],
        [Zb, (p.gamma * Ch @ Dc1), -(p.mu * Ch @ Dc1), Zb, Zb],
    ]
    S = sp.bmat(rows, format="csr")

    Sigma = sp.block_diag([Zb, d.a * W1, Zb, d.b * p.xi * p.eps3 * W1,
                           d.c * p.eps3 * Ch], format="csr")

    # compatibility on cells: u3 = xi Dc u2 + (gamma/eps3) Dc v
    I = sp.eye(nf, format="csr")
    Z = sp.bmat([
        [I, Zb, Zb, Zb],
        [Zb, I, Zb, Zb],
        [Zb, Zb, I, Zb],
        [Zb, Zb, Zb, I],
        [(p.gamma / p.eps3) * Dc1, Zb, Zb, p.xi * Dc1],
    ], format="csr")

    G = (Z.T @ H @ Z).toarray()
    R = sla.cholesky(G, lower=False)
    Rinv = sla.solve_triangular(R, np.eye(4 * nf), lower=False)
    A_red = Rinv.T @ ((Z.T @ (S - Sigma) @ Z).toarray()) @ Rinv

    return GeneratorMatrix(grid, params, damping, H, S, Sigma, Z, R, A_red,
                           dof_map)


def evolve_semigroup_energy(gen: GeneratorMatrix, y0_product, dt, t_end,
                            bootstrap="trapezoidal"):
    """Advance the five-field product state with the same implicit two-step
    recurrence the time-domain solver uses, in the Gram-weighted form
    (3 H - 2 dt M) y^{n+1} = H (4 y^n - y^{n-1}), M = S - H B.

    Returns (times, energies).  This is the evolution route for states that
    are not representable by boundary-compatible time-domain fields, such as
    the resonant eigenmode.
    """
    from scipy.sparse.linalg import splu

    M = (gen.skew - gen.damping_gram).tocsc()
    H = gen.gram.tocsc()
    nsteps = int(round(t_end / dt))
    lu = splu((3.0 * H - 2.0 * dt * M).tocsc())
    if bootstrap == "trapezoidal":
        lu0 = splu((H - 0.5 * dt * M).tocsc())
    else:
        lu0 = splu((H - dt * M).tocsc())

    y = np.asarray(y0_product)
    is_complex = np.iscomplexobj(y)
    energies = np.empty(nsteps + 1)
    times = dt * np.arange(nsteps + 1)

    def solve(fac, rhs):
        if is_complex:
            return fac.solve(rhs.real) + 1j * fac.solve(rhs.imag)
        return fac.solve(rhs)

    energies[0] = gen.energy(y)
    if nsteps >= 1:
        rhs = H @ y + (0.5 * dt * (M @ y) if bootstrap == "trapezoidal" else 0.0)
        ym, y = y, solve(lu0, rhs)
        energies[1] = gen.energy(y)
        for k in range(2, nsteps + 1):
            ym, y = y, solve(lu, H @ (4.0 * y - ym))
            energies[k] = gen.energy(y)
    return times, energies
