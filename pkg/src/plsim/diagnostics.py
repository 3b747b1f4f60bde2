"""Discrete energy functional, dissipation identity, and decay-rate fitting.

The energy components mirror the solver's discretization: derivative-bearing
integrands (v_x, theta - eta_x, theta_t + phi_x) are evaluated on cell
midpoints with the same staggered differences the assemblies use, so the
semi-discrete balance identity holds to scheme order; the derivative-free
integrands use composite trapezoid on the nodes.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .model import FieldState
from .params import DampingConfig, PhysicalParams


@dataclass(frozen=True)
class EnergyBreakdown:
    kinetic: float
    potential: float
    magnetic: float
    electrical: float

    @property
    def total(self) -> float:
        return self.kinetic + self.potential + self.magnetic + self.electrical


def _cell_diff(f, h):
    return np.diff(f) / h


def _cell_avg(f):
    return 0.5 * (f[:-1] + f[1:])


def energy(state: FieldState, params: PhysicalParams) -> EnergyBreakdown:
    """Energy of a field state: kinetic + potential + magnetic + electrical."""
    p = params
    g = state.grid
    h = g.h_x
    w = g.trapezoid_weights()

    kinetic = 0.5 * p.rho * np.sum(w * state.v_t**2)
    potential = 0.5 * p.alpha * h * np.sum(_cell_diff(state.v, h) ** 2)
    u1c = _cell_avg(state.theta) - _cell_diff(state.eta, h)
    magnetic = 0.5 * p.mu * h * np.sum(u1c**2)
    u2c = _cell_avg(state.theta_t) + _cell_diff(state.phi, h)
    u3 = state.eta_t + state.phi
    electrical = 0.5 * (p.xi * p.eps3 * h * np.sum(u2c**2)
                        + p.eps3 * np.sum(w * u3**2))
    return EnergyBreakdown(kinetic, potential, magnetic, electrical)


def dissipation_rate(state: FieldState, params: PhysicalParams,
                     damping: DampingConfig) -> float:
    """Instantaneous dissipation a||v_t||^2 + b xi eps3 ||u2||^2 + c eps3 ||u3||^2."""
    p, d = params, damping
    g = state.grid
    h = g.h_x
    w = g.trapezoid_weights()
    u2c = _cell_avg(state.theta_t) + _cell_diff(state.phi, h)
    u3 = state.eta_t + state.phi
    return (d.a * np.sum(w * state.v_t**2)
            + d.b * p.xi * p.eps3 * h * np.sum(u2c**2)
            + d.c * p.eps3 * np.sum(w * u3**2))


def energy_balance_residual(trajectory, params=None, damping=None) -> np.ndarray:
    """Residual r^n = dE/dt + dissipation along a trajectory.

    The time derivative is the centered difference of the per-step energy
    series; endpoints are returned as NaN.  ``params``/``damping`` default to
    the trajectory's own; passing different ones is a configuration error.
    """
    if params is not None and params != trajectory.params:
        raise ValueError("parameter mismatch with trajectory")
    if damping is not None and damping != trajectory.damping:
        raise ValueError("damping mismatch with trajectory")
    E = trajectory.energy_total
    D = trajectory.dissipation
    if len(E) < 3:
        raise ValueError("need at least 3 energy samples")
    dt = trajectory.times[1] - trajectory.times[0]
    r = np.full_like(E, np.nan)
    r[1:-1] = (E[2:] - E[:-2]) / (2 * dt) + D[1:-1]
    return r


@dataclass(frozen=True)
class DecayFit:
    """Least-squares exponential fit of an energy tail.

    ``epsilon_hat`` follows the state-norm convention ||U(t)|| <= M e^{-eps t};
    since the energy is the squared norm, the fitted log-energy slope equals
    -2 epsilon_hat and is reported separately as ``energy_slope``.
    """

    epsilon_hat: float
    m_hat: float
    r_squared: float
    window: tuple
    energy_slope: float
    valid: bool = True


def fit_decay_rate(times, energy_series, window) -> DecayFit:
    """Fit log E(t) = log m - 2 eps t on ``window`` = (t_lo, t_hi).

    Nonpositive energies inside the window flag the fit as invalid instead of
    raising.
    """
    times = np.asarray(times, dtype=float)
    E = np.asarray(energy_series, dtype=float)
    t_lo, t_hi = window
    if t_lo >= t_hi or t_lo < times[0] - 1e-12 or t_hi > times[-1] + 1e-12:
        raise ValueError(f"window {window} outside series [{times[0]}, {times[-1]}]")
    mask = (times >= t_lo) & (times <= t_hi)
    t, e = times[mask], E[mask]
    if len(t) < 2 or np.any(e <= 0):
        return DecayFit(np.nan, np.nan, np.nan, (t_lo, t_hi), np.nan, valid=False)
    logv = np.log(e)
    A = np.column_stack([t, np.ones_like(t)])
    (slope, intercept), *_ = np.linalg.lstsq(A, logv, rcond=None)
    fitted = A @ [slope, intercept]
    ss_res = float(np.sum((logv - fitted) ** 2))
    ss_tot = float(np.sum((logv - logv.mean()) ** 2))
    r2 = 1.0 if ss_tot == 0 else 1.0 - ss_res / ss_tot
    return DecayFit(epsilon_hat=-0.5 * slope, m_hat=float(np.exp(intercept)),
                    r_squared=r2, window=(t_lo, t_hi), energy_slope=slope)
