"""Named benchmark presets: the six damped cases, the undamped reference, and
the open-problem pattern, all with unit parameters on [0, 1] x [0, 100]."""

from __future__ import annotations

from .params import DampingConfig, PhysicalParams

UNIT_PARAMS = PhysicalParams()

#: the six enumerated damping cases
SIX_CASES = {
    "case1": DampingConfig(1, 1, 1),
    "case2": DampingConfig(0, 1, 1),
    "case3": DampingConfig(1, 0, 1),
    "case4": DampingConfig(1, 1, 0),
    "case5": DampingConfig(1, 0, 0),
    "case6": DampingConfig(0, 0, 1),
}

UNDAMPED = DampingConfig(0, 0, 0)
OPEN_PROBLEM = DampingConfig(0, 1, 0)

REPRODUCE_TARGETS = ("figure-case1", "figure-case5", "figure-Et", "open-problem")


def run_config_dict(damping: DampingConfig, n_cells=200, dt=1e-3, t_end=100.0,
                    out_dir="out"):
    return {
        "damping": {"a": damping.a, "b": damping.b, "c": damping.c},
        "grid": {"n_cells": n_cells},
        "integrator": {"dt": dt, "t_end": t_end},
        "initial_conditions": "paper-section-9",
        "outputs": {"directory": out_dir, "formats": ["csv", "json"]},
    }
