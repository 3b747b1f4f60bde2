"""Eigenvalue, resolvent-norm, and resonance analysis of the discrete generator.

The resolvent 2-norm along the imaginary axis is estimated as 1/sigma_min of
the shifted matrix via inverse iteration on one LU factorization per sample;
the scan grid refines itself around local maxima because resolvent peaks near
weakly damped eigenvalues are sharp.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.linalg as sla

from .generator import GeneratorMatrix
from .grid import Grid
from .model import FieldState
from .params import DampingConfig, PhysicalParams


class EigensolveError(RuntimeError):
    pass


class ResonanceError(ValueError):
    pass


@dataclass(frozen=True)
class SpectrumReport:
    eigenvalues: np.ndarray     # sorted by real part, descending
    damping_case: str
    n_cells: int

    @property
    def spectral_abscissa(self) -> float:
        return float(self.eigenvalues[0].real)


def spectrum(gen: GeneratorMatrix) -> SpectrumReport:
    """All eigenvalues of the reduced generator (dense solve)."""
    try:
        ev = sla.eigvals(gen.matrix)
    except sla.LinAlgError as exc:   # pragma: no cover - LAPACK convergence
        raise EigensolveError(f"eigenvalue iteration failed: {exc}")
    order = np.argsort(-ev.real)
    return SpectrumReport(ev[order], gen.damping.case_label, gen.grid.n_cells)


@dataclass(frozen=True)
class ResolventScan:
    lambda_samples: np.ndarray
    norms: np.ndarray           # math.inf marks numerically singular shifts

    @property
    def sup_norm(self) -> float:
        return float(np.max(self.norms))

    @property
    def sup_location(self) -> float:
        return float(self.lambda_samples[int(np.argmax(self.norms))])


def _resolvent_norm(A, lam, tol=1e-6, min_iter=10, max_iter=200):
    """2-norm of (i lam I - A)^{-1} as 1/sigma_min, by inverse iteration on
    the normal equations of the factored shift."""
    n = A.shape[0]
    M = 1j * lam * np.eye(n) - A
    try:
        lu, piv = sla.lu_factor(M)
    except sla.LinAlgError:
        return math.inf
    diag = np.abs(np.diag(lu))
    if diag.min() <= 1e-14 * max(diag.max(), 1.0):
        return math.inf
    rng = np.random.default_rng(7)
    x = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    x /= np.linalg.norm(x)
    est = 0.0
    for it in range(max_iter):
        y = sla.lu_solve((lu, piv), x)
        y = sla.lu_solve((lu, piv), y, trans=2)     # conjugate transpose solve
        new = np.linalg.norm(y)                      # -> 1/sigma_min^2
        if not np.isfinite(new):
            return math.inf
        x = y / new
        prev, est = est, math.sqrt(new)
        if it + 1 >= min_iter and abs(est - prev) <= tol * est:
            break
    return est


def resolvent_scan(gen: GeneratorMatrix, lambda_max, samples=400,
                   refine_levels=3, refine_factor=10) -> ResolventScan:
    """Scan ||(i lam I - A)^{-1}|| over lam in [0, lambda_max].

    Conjugation symmetry of the real operator makes the positive half-axis
    sufficient.  Around each local maximum the grid is refined
    ``refine_levels`` times with ``refine_factor`` x local density.
    """
    if samples < 16:
        raise ValueError("need at least 16 samples")
    A = gen.matrix
    lams = list(np.linspace(0.0, lambda_max, samples))
    norms = [_resolvent_norm(A, lam) for lam in lams]

    for _ in range(refine_levels):
        finite = [(l, v) for l, v in zip(lams, norms)]
        finite.sort(key=lambda t: t[0])
        ls = np.array([t[0] for t in finite])
        vs = np.array([t[1] for t in finite])
        peaks = []
        for i in range(1, len(ls) - 1):
            if vs[i] >= vs[i - 1] and vs[i] >= vs[i + 1] and np.isfinite(vs[i]):
                peaks.append(i)
        if vs[-1] > vs[-2]:
            peaks.append(len(ls) - 1)
        best = sorted(peaks, key=lambda i: -vs[i])[:3]
        new_pts = []
        for i in best:
            lo = ls[max(i - 1, 0)]
            hi = ls[min(i + 1, len(ls) - 1)]
            local = np.linspace(lo, hi, 2 * refine_factor + 1)
            new_pts.extend(float(l) for l in local)
        fresh = [l for l in new_pts if all(abs(l - l0) > 1e-12 for l0 in lams)]
        lams.extend(fresh)
        norms.extend(_resolvent_norm(A, l) for l in fresh)

    order = np.argsort(lams)
    return ResolventScan(np.asarray(lams)[order], np.asarray(norms)[order])


# ---------------------------------------------------------------------------
# resonance

def resonance_frequency(params: PhysicalParams, n: int) -> float:
    """The candidate undamped frequency lambda = (2n+1) pi/(2L) sqrt(alpha/rho)."""
    p = params
    return (2 * n + 1) * np.pi / (2 * p.length) * math.sqrt(p.alpha / p.rho)


def resonance_check(params: PhysicalParams, n_max: int, tol: float):
    """Smallest n in [0, n_max] with mu rho/(xi eps3 alpha) within ``tol``
    of (2n+1)^2 pi^2 / (4 L^2), or None."""
    if n_max < 0 or tol <= 0:
        raise ValueError("need n_max >= 0 and tol > 0")
    p = params
    ratio = p.mu * p.rho / (p.xi * p.eps3 * p.alpha)
    for n in range(n_max + 1):
        target = (2 * n + 1) ** 2 * np.pi**2 / (4 * p.length**2)
        if abs(ratio - target) <= tol:
            return n
    return None


@dataclass(frozen=True)
class ResonantMode:
    """Nodal sampling of the undamped eigenmode at a resonant parameter set:
    eigenvalue i*lam with U = (v, i lam v, i lam (gamma/mu) v,
    -(gamma/(eps3 xi)) v, 0) and v = sin(lam sqrt(rho/alpha) x)."""

    n: int
    lam: float
    grid: Grid
    v: np.ndarray
    z: np.ndarray
    u1: np.ndarray
    u2: np.ndarray
    u3: np.ndarray


def resonant_eigenmode(params: PhysicalParams, n: int, grid: Grid,
                       tol: float = 1e-9) -> ResonantMode:
    if resonance_check(params, n, tol) != n:
        raise ResonanceError(
            f"parameters are not resonant at index n={n}; run resonance_check first")
    p = params
    lam = resonance_frequency(params, n)
    k = lam * math.sqrt(p.rho / p.alpha)
    x = grid.nodes
    v = np.sin(k * x)
    return ResonantMode(
        n=n, lam=lam, grid=grid,
        v=v,
        z=1j * lam * v,
        u1=1j * lam * (p.gamma / p.mu) * v,
        u2=-(p.gamma / (p.eps3 * p.xi)) * v,
        u3=np.zeros_like(v),
    )


def eigenmode_residual(gen: GeneratorMatrix, mode: ResonantMode) -> float:
    """Relative residual ||(i lam I - A_h) U_h|| / ||U_h|| in the energy norm."""
    y = gen.reduce_coordinates(mode.v[1:], mode.z[1:], mode.u1[1:], mode.u2[1:])
    r = (1j * mode.lam) * y - gen.matrix @ y
    return float(np.linalg.norm(r) / np.linalg.norm(y))


def eigenmode_field_state(params: PhysicalParams, mode: ResonantMode) -> FieldState:
    """Time-domain fields realizing the eigenmode at t = 0.

    The real part of e^{i lam t} U and its analytic time derivative fix the
    velocities; phi, theta, eta are rebuilt from the gauge relations.  At the
    resonant frequency theta vanishes identically and

        eta_hat = -i lam (gamma/mu) F,  phi_hat = -i lam eta_hat,
        F(x) = (1 - cos(k x))/k,

    which reproduces u1 = theta - eta_x, u2 = theta_t + phi_x, u3 = 0.  The
    resulting fields satisfy the x = 0 conditions exactly; their Neumann
    values at x = L are nonzero, which is intrinsic to the mode.
    """
    p = params
    lam = mode.lam
    k = lam * math.sqrt(p.rho / p.alpha)
    x = mode.grid.nodes
    F = (1.0 - np.cos(k * x)) / k
    zero = np.zeros_like(x)
    return FieldState(
        mode.grid,
        v=mode.v.real.copy(),
        phi=-lam**2 * (p.gamma / p.mu) * F,
        theta=zero.copy(),
        eta=zero.copy(),
        v_t=zero.copy(),
        phi_t=zero.copy(),
        theta_t=zero.copy(),
        eta_t=lam**2 * (p.gamma / p.mu) * F,
    )


# ---------------------------------------------------------------------------
# verdicts

@dataclass(frozen=True)
class StabilityVerdict:
    """Report combining case label, resonance search, and the computed
    near-axis spectrum.  A report, never a proof."""

    verdict: str                  # strongly-stable-expected | resonance-obstruction | undamped
    damping_case: str
    resonance_index: object       # int or None
    min_abs_real: float           # over eigenvalues with |Im| <= lambda_max
    lambda_max: float


def strong_stability_verdict(params: PhysicalParams, damping: DampingConfig,
                             grid: Grid, tol: float = 1e-9,
                             lambda_max: float = 50.0,
                             n_max: int = 64) -> StabilityVerdict:
    from .generator import assemble_generator

    case = damping.case_label
    if case == "undamped":
        return StabilityVerdict("undamped", case, None, 0.0, lambda_max)

    res_n = None
    if case == "00c":
        res_n = resonance_check(params, n_max, tol)

    gen = assemble_generator(params, damping, grid)
    ev = spectrum(gen).eigenvalues
    band = ev[np.abs(ev.imag) <= lambda_max]
    min_abs_real = float(np.min(np.abs(band.real))) if len(band) else math.nan

    verdict = "resonance-obstruction" if res_n is not None else "strongly-stable-expected"
    return StabilityVerdict(verdict, case, res_n, min_abs_real, lambda_max)
