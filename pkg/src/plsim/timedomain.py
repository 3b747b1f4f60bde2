"""Semi-discrete time-domain system: y' = L_h y for the 8-field formulation.

Spatial discretization is second-order: centered stencils in the interior,
ghost-point closures at the boundaries (Neumann reflection for phi and eta,
elimination of the dynamic Robin relation alpha v_x + gamma (phi + eta_t) = 0
at x = L).  The stretching flux and the gamma-coupling are assembled in
flux (divergence) form so that the discrete energy pairing with the
diagnostics module telescopes; at x = L the flux row coincides with the
classical ghost-elimination row for the elastic part and couples the
boundary row to phi and eta_t as the Robin relation requires.

Dirichlet unknowns (v at x=0, theta at both ends, and their velocities) are
eliminated from the matrix, not penalized.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from .grid import (Grid, cell_average_matrix, cell_difference_matrix,
                   drop_left_node)
from .model import FieldState, ShapeError
from .params import DampingConfig, PhysicalParams

_BLOCKS = ("v", "phi", "theta", "eta", "v_t", "phi_t", "theta_t", "eta_t")


@dataclass(frozen=True)
class SemiDiscreteSystem:
    grid: Grid
    params: PhysicalParams
    damping: DampingConfig
    matrix: sp.csc_matrix
    dof_map: dict

    @property
    def dimension(self) -> int:
        return self.matrix.shape[0]

    def state_to_vector(self, state: FieldState) -> np.ndarray:
        if state.grid.node_count != self.grid.node_count:
            raise ShapeError("state grid does not match system grid")
        y = np.zeros(self.dimension)
        for name in _BLOCKS:
            arr = getattr(self, "_slice_field")(name)
            y[arr] = getattr(state, name)[self._kept_nodes(name)]
        return y

    def vector_to_state(self, y, time=0.0) -> FieldState:
        n = self.grid.node_count
        fields = {}
        for name in _BLOCKS:
            full = np.zeros(n)
            full[self._kept_nodes(name)] = y[self._slice_field(name)]
            fields[name] = full
        return FieldState(self.grid, time=time, **fields)

    def _kept_nodes(self, name):
        n = self.grid.node_count
        base = name[:-2] if name.endswith("_t") else name
        if base == "v":
            return slice(1, n)
        if base == "theta":
            return slice(1, n - 1)
        return slice(0, n)

    def _slice_field(self, name):
        lo, hi = self.dof_map[name]
        return slice(lo, hi)


def _neumann_laplacian(N, h):
    """Second derivative with ghost reflection f_{-1}=f_1, f_{N+1}=f_{N-1}."""
    main = np.full(N + 1, -2.0)
    off = np.ones(N)
    D2 = sp.diags([off, main, off], [-1, 0, 1], format="lil")
    D2[0, 1] = 2.0
    D2[N, N - 1] = 2.0
    return (D2 / h**2).tocsr()


def _interior_laplacian(N, h):
    """Second derivative on interior nodes for a field vanishing at both ends."""
    n = N - 1
    main = np.full(n, -2.0)
    off = np.ones(n - 1)
    return (sp.diags([off, main, off], [-1, 0, 1]) / h**2).tocsr()


def _centered_first(N, h):
    """Centered first derivative at interior nodes, mapping all N+1 nodes."""
    rows = np.repeat(np.arange(1, N), 2)
    cols = np.ravel(np.column_stack([np.arange(0, N - 1), np.arange(2, N + 1)]))
    vals = np.tile([-1.0 / (2 * h), 1.0 / (2 * h)], N - 1)
    return sp.csr_matrix((vals, (rows, cols)), shape=(N + 1, N + 1))


def assemble_time_domain(params: PhysicalParams, damping: DampingConfig,
                         grid: Grid) -> SemiDiscreteSystem:
    p, d = params, damping
    N, h = grid.n_cells, grid.h_x
    n = N + 1

    Dc = cell_difference_matrix(grid)
    Pc = cell_average_matrix(grid)
    Dv = drop_left_node(Dc)                # v-like fields: value 0 at x=0
    Pv = drop_left_node(Pc)
    w = grid.trapezoid_weights()
    Winv = sp.diags(1.0 / w)
    Wv_inv = sp.diags(1.0 / w[1:])
    Hcell = sp.diags(np.full(N, h))

    # divergence of a cell flux into v rows (nodes 1..N); weak flux(L)=0
    div_v = -Wv_inv @ Dv.T @ Hcell
    # natural nodal derivative of a v-like field (exact adjoint partner)
    Dnat_v = Winv @ Pc.T @ Hcell @ Dv

    Ev = sp.eye(N, format="csr")           # v-like identity (nodes 1..N)
    En = sp.eye(n, format="csr")
    Et = sp.eye(N - 1, format="csr")
    Zn = sp.csr_matrix((n, n))

    def Z(r, c):
        return sp.csr_matrix((r, c))

    # --- v acceleration: (1/rho) div sigma - (a/rho) v_t,
    #     sigma = alpha Dv v + gamma Pc (phi + eta_t)
    A_v_v = (p.alpha / p.rho) * (div_v @ Dv)
    A_v_phi = (p.gamma / p.rho) * (div_v @ Pc)
    A_v_etat = A_v_phi.copy()
    A_v_vt = -(d.a / p.rho) * Ev

    # --- phi acceleration
    vx_op = _centered_first(N, h)[:, 1:].tolil()       # acts on v (nodes 1..N)
    vx_op[0, 0] = 4 / (2 * h)                          # one-sided with v0 = 0
    vx_op[0, 1] = -1 / (2 * h)
    vx_op = vx_op.tocsr()
    cvx = p.gamma * p.mu / (p.xi * p.eps3**2)
    A_phi_phi = ((p.mu / p.eps3) * _neumann_laplacian(N, h)
                 - p.mu / (p.xi * p.eps3) * En)
    # Robin substitution v_x(L) = -(gamma/alpha)(phi_N + eta_t_N)
    robin = sp.lil_matrix((n, n))
    robin[N, N] = -p.gamma / p.alpha
    A_phi_v = cvx * vx_op
    A_phi_phi = A_phi_phi + cvx * robin.tocsr()
    A_phi_etat = cvx * robin.tocsr()

    # --- theta acceleration (interior nodes only)
    phix_int = _centered_first(N, h)[1:N, :]           # phi_x at nodes 1..N-1
    A_th_th = ((p.mu / p.eps3) * _interior_laplacian(N, h)
               - p.mu / (p.xi * p.eps3) * Et)
    A_th_tht = -d.b * Et
    A_th_phi = -d.b * phix_int

    # --- eta acceleration
    A_eta_eta = ((p.mu / p.eps3) * _neumann_laplacian(N, h)
                 - p.mu / (p.xi * p.eps3) * En)
    A_eta_vt = (p.gamma / p.eps3) * Dnat_v
    A_eta_etat = -d.c * En
    A_eta_phi = -d.c * En

    blocks = [
        # v        phi        theta      eta        v_t        phi_t  theta_t  eta_t
        [Z(N, N),  Z(N, n),   Z(N, N-1), Z(N, n),   Ev,        Z(N, n), Z(N, N-1), Z(N, n)],
        [Z(n, N),  Zn,        Z(n, N-1), Zn,        Z(n, N),   En,    Z(n, N-1), Zn],
        [Z(N-1, N), Z(N-1, n), Z(N-1, N-1), Z(N-1, n), Z(N-1, N), Z(N-1, n), Et, Z(N-1, n)],
        [Z(n, N),  Zn,        Z(n, N-1), Zn,        Z(n, N),   Zn,    Z(n, N-1), En],
        [A_v_v,    A_v_phi,   Z(N, N-1), Z(N, n),   A_v_vt,    Z(N, n), Z(N, N-1), A_v_etat],
        [A_phi_v,  A_phi_phi, Z(n, N-1), Zn,        Z(n, N),   Zn,    Z(n, N-1), A_phi_etat],
        [Z(N-1, N), A_th_phi, A_th_th,   Z(N-1, n), Z(N-1, N), Z(N-1, n), A_th_tht, Z(N-1, n)],
        [Z(n, N),  A_eta_phi, Z(n, N-1), A_eta_eta, A_eta_vt,  Zn,    Z(n, N-1), A_eta_etat],
    ]
    L = sp.bmat(blocks, format="csc")

    sizes = [N, n, N - 1, n, N, n, N - 1, n]
    dof_map, offset = {}, 0
    for name, size in zip(_BLOCKS, sizes):
        dof_map[name] = (offset, offset + size)
        offset += size

    return SemiDiscreteSystem(grid, params, damping, L, dof_map)
