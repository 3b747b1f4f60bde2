"""plsim: simulation and spectral-stability laboratory for a damped
piezoelectric beam model with fully dynamic electromagnetic coupling."""

from .bounds import (BoundConfig, BoundReport, bound_vs_measurement,
                     coercivity_constant, resolvent_bound)
from .diagnostics import (DecayFit, EnergyBreakdown, energy,
                          energy_balance_residual, fit_decay_rate)
from .generator import GeneratorMatrix, assemble_generator
from .grid import Grid, build_grid
from .integrate import IntegratorConfig, Trajectory, convergence_study, simulate
from .model import (DerivedFields, FieldState, compatibility_residual,
                    derived_fields, lorenz_gauge_residual, pde_residual,
                    standard_initial_state)
from .params import DampingConfig, PhysicalParams, derive_xi
from .spectral import (ResolventScan, ResonantMode, SpectrumReport,
                       StabilityVerdict, eigenmode_field_state,
                       eigenmode_residual, resonance_check, resonant_eigenmode,
                       resolvent_scan, spectrum, strong_stability_verdict)
from .timedomain import SemiDiscreteSystem, assemble_time_domain

__version__ = "0.1.0"
