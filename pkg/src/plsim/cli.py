"""Command-line front end.

    plsim simulate  [--config FILE] [--out DIR] [--n-cells N] [--dt DT] ...
    plsim reproduce --target {figure-case1|figure-case5|figure-Et|open-problem}
    plsim spectrum | resolvent | bounds | resonance | sweep

Exit codes: 0 success, 2 invalid configuration or unknown target,
3 diverged simulation.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from . import presets
from .bounds import (BoundConfig, CaseMismatchError, InvalidConfigError,
                     coercivity_constant, resolvent_bound)
from .config import ConfigError, RunConfig, SweepConfig
from .diagnostics import energy_balance_residual, fit_decay_rate
from .generator import assemble_generator
from .grid import build_grid
from .integrate import DivergenceError, IntegratorConfig, simulate
from .io import read_csv, write_csv, write_json, write_svg_lines
from .model import (FieldState, compatibility_residual, derived_fields,
                    lorenz_gauge_residual, standard_initial_state)
from .params import DampingConfig, PhysicalParams
from .spectral import (ResonanceError, eigenmode_field_state, resonance_check,
                       resonant_eigenmode, resolvent_scan, spectrum)
from .timedomain import assemble_time_domain

_SNAPSHOT_HEADER = ["x", "v", "phi", "theta", "eta",
                    "v_t", "phi_t", "theta_t", "eta_t"]


def _load_run_config(args) -> RunConfig:
    doc = {}
    if args.config:
        with open(args.config) as fh:
            doc = json.load(fh)
    cfg = RunConfig.from_dict(doc)
    # command-line overrides
    doc = cfg.to_dict()
    if getattr(args, "n_cells", None) is not None:
        doc["grid"]["n_cells"] = args.n_cells
    if getattr(args, "dt", None) is not None:
        doc["integrator"]["dt"] = args.dt
    if getattr(args, "t_end", None) is not None:
        doc["integrator"]["t_end"] = args.t_end
    if getattr(args, "out", None) is not None:
        doc["outputs"]["directory"] = args.out
    for name in ("a", "b", "c"):
        if getattr(args, name, None) is not None:
            doc["damping"][name] = getattr(args, name)
    return RunConfig.from_dict(doc)


def _initial_state(cfg: RunConfig, grid) -> FieldState:
    ic = cfg.initial_conditions
    if ic == "paper-section-9":
        return standard_initial_state(grid)
    if isinstance(ic, dict) and "eigenmode" in ic:
        mode = resonant_eigenmode(cfg.params, ic["eigenmode"], grid, tol=1e-6)
        return eigenmode_field_state(cfg.params, mode)
    if isinstance(ic, dict) and "file" in ic:
        header, cols = read_csv(ic["file"])
        if header != _SNAPSHOT_HEADER:
            raise ConfigError(f"initial-state file needs columns {_SNAPSHOT_HEADER}")
        if len(cols[0]) != grid.node_count:
            raise ConfigError("initial-state file does not match the grid")
        named = dict(zip(header, cols))
        return FieldState(grid, **{k: named[k] for k in _SNAPSHOT_HEADER[1:]})
    raise ConfigError(f"unsupported initial_conditions: {ic!r}")


def run_simulation(cfg: RunConfig, write_outputs=True):
    """Run one configured simulation; returns (trajectory, summary dict)."""
    grid = build_grid(cfg.params.length, cfg.n_cells)
    system = assemble_time_domain(cfg.params, cfg.damping, grid)
    initial = _initial_state(cfg, grid)
    traj = simulate(system, initial, cfg.integrator)

    balance = energy_balance_residual(traj)
    finite = balance[np.isfinite(balance)]
    t_end = traj.times[-1]
    window = (0.5 * t_end, t_end)
    fit = fit_decay_rate(traj.times, traj.energy_total, window)

    df = derived_fields(initial)
    compat0 = compatibility_residual(initial.v, df.u2, df.u3, cfg.params,
                                     h=grid.h_x)
    gauge0 = lorenz_gauge_residual(initial, cfg.params)

    summary = {
        "damping_case": cfg.damping.case_label,
        "damping": {"a": cfg.damping.a, "b": cfg.damping.b, "c": cfg.damping.c},
        "n_cells": cfg.n_cells,
        "dt": cfg.integrator.dt,
        "E_initial": float(traj.energy_total[0]),
        "E_final": float(traj.energy_total[-1]),
        "max_relative_drift": float(np.max(np.abs(traj.energy_total
                                                  - traj.energy_total[0]))
                                    / traj.energy_total[0])
        if traj.energy_total[0] > 0 else 0.0,
        "balance_residual_max": float(np.max(np.abs(finite))) if len(finite) else 0.0,
        "decay_fit": {
            "window": list(fit.window),
            "epsilon_hat": None if not fit.valid else fit.epsilon_hat,
            "energy_slope": None if not fit.valid else fit.energy_slope,
            "m_hat": None if not fit.valid else fit.m_hat,
            "r_squared": None if not fit.valid else fit.r_squared,
        },
        "initial_compatibility_residual_max": float(np.max(np.abs(compat0))),
        "initial_gauge_residual_max": float(np.max(np.abs(gauge0))),
    }

    if write_outputs:
        out = cfg.out_dir
        if "csv" in cfg.formats:
            write_csv(os.path.join(out, "energy.csv"),
                      ["t", "E_total", "E_kinetic", "E_potential",
                       "E_magnetic", "E_electrical", "balance_residual"],
                      [traj.times, traj.energy_total, traj.energy_kinetic,
                       traj.energy_potential, traj.energy_magnetic,
                       traj.energy_electrical, balance])
            for t, snap in zip(traj.snapshot_times, traj.snapshots):
                write_csv(os.path.join(out, "snapshots", f"t{t:012.6f}.csv"),
                          _SNAPSHOT_HEADER,
                          [grid.nodes] + [getattr(snap, k)
                                          for k in _SNAPSHOT_HEADER[1:]])
        if "json" in cfg.formats:
            write_json(os.path.join(out, "summary.json"), summary)
        if "svg" in cfg.formats:
            write_svg_lines(os.path.join(out, "energy.svg"), traj.times,
                            [traj.energy_total], ["E(t)"],
                            title=f"energy, case {cfg.damping.case_label}")
            last = traj.snapshots[-1]
            write_svg_lines(os.path.join(out, "final_state.svg"), grid.nodes,
                            [last.v, last.phi, last.theta, last.eta],
                            ["v", "phi", "theta", "eta"],
                            title=f"fields at t={t_end:g}")
    return traj, summary


def _cmd_simulate(args):
    cfg = _load_run_config(args)
    if args.dump_config:
        print(json.dumps(cfg.to_dict(), indent=2, sort_keys=True))
        return 0
    _, summary = run_simulation(cfg)
    print(json.dumps(summary, indent=2, sort_keys=True))
    return 0


def _cmd_reproduce(args):
    target = args.target
    out = args.out or f"out-{target}"
    params = presets.UNIT_PARAMS
    if target not in presets.REPRODUCE_TARGETS:
        print(f"unknown target {target!r}; choose from "
              f"{presets.REPRODUCE_TARGETS}", file=sys.stderr)
        return 2

    if target in ("figure-case1", "figure-case5"):
        damping = (presets.UNDAMPED if target == "figure-case1"
                   else presets.SIX_CASES["case5"])
        doc = presets.run_config_dict(damping, n_cells=args.n_cells,
                                      dt=args.dt, out_dir=out)
        doc["outputs"]["formats"] = ["csv", "json", "svg"]
        _, summary = run_simulation(RunConfig.from_dict(doc))
        print(json.dumps(summary, indent=2, sort_keys=True))
        return 0

    if target == "figure-Et":
        columns, names = [], []
        times = None
        for name in sorted(presets.SIX_CASES):
            doc = presets.run_config_dict(presets.SIX_CASES[name],
                                          n_cells=args.n_cells, dt=args.dt,
                                          out_dir=out)
            traj, _ = run_simulation(RunConfig.from_dict(doc),
                                     write_outputs=False)
            times = traj.times
            columns.append(traj.energy_total)
            names.append(f"E_{name}")
        write_csv(os.path.join(out, "energy_all_cases.csv"),
                  ["t"] + names, [times] + columns)
        write_svg_lines(os.path.join(out, "energy_all_cases.svg"), times,
                        columns, names, title="energy, six damped cases",
                        logy=True)
        print(f"wrote {out}/energy_all_cases.csv")
        return 0

    # open problem: report both the energy history and the abscissa table
    doc = presets.run_config_dict(presets.OPEN_PROBLEM, n_cells=args.n_cells,
                                  dt=args.dt, out_dir=out)
    doc["outputs"]["formats"] = ["csv", "json", "svg"]
    _, summary = run_simulation(RunConfig.from_dict(doc))
    table = []
    for n in (50, 100, 200):
        gen = assemble_generator(params, presets.OPEN_PROBLEM,
                                 build_grid(params.length, n))
        table.append({"n_cells": n,
                      "spectral_abscissa": spectrum(gen).spectral_abscissa})
    write_json(os.path.join(out, "abscissa_vs_n.json"),
               {"damping_case": presets.OPEN_PROBLEM.case_label,
                "note": "reported without a stability verdict",
                "table": table})
    print(json.dumps({"summary": summary, "abscissa_vs_n": table},
                     indent=2, sort_keys=True))
    return 0


def _cmd_spectrum(args):
    cfg = _load_run_config(args)
    gen = assemble_generator(cfg.params, cfg.damping,
                             build_grid(cfg.params.length, cfg.n_cells))
    rep = spectrum(gen)
    out = args.out or "out-spectrum"
    write_csv(os.path.join(out, "spectrum.csv"), ["re", "im"],
              [rep.eigenvalues.real, rep.eigenvalues.imag])
    print(json.dumps({"damping_case": rep.damping_case,
                      "n_cells": rep.n_cells,
                      "spectral_abscissa": rep.spectral_abscissa,
                      "dimension": len(rep.eigenvalues)}, indent=2))
    return 0


def _cmd_resolvent(args):
    cfg = _load_run_config(args)
    gen = assemble_generator(cfg.params, cfg.damping,
                             build_grid(cfg.params.length, cfg.n_cells))
    scan = resolvent_scan(gen, args.lambda_max, args.samples)
    out = args.out or "out-resolvent"
    write_csv(os.path.join(out, "resolvent_scan.csv"),
              ["lambda", "resolvent_norm"],
              [scan.lambda_samples, scan.norms])
    print(json.dumps({"sup_norm": scan.sup_norm,
                      "sup_location": scan.sup_location,
                      "samples": len(scan.lambda_samples)}, indent=2))
    return 0


def _cmd_bounds(args):
    cfg = _load_run_config(args)
    bc = BoundConfig(poincare_constant=args.poincare_constant)
    try:
        report = resolvent_bound(cfg.params, cfg.damping, bc)
    except CaseMismatchError as exc:
        print(str(exc), file=sys.stderr)
        return 2
    k, C = coercivity_constant(cfg.params, bc)
    payload = report.as_dict()
    payload["coercivity"] = {"k": k, "C": C}
    out = args.out or "out-bounds"
    write_json(os.path.join(out, "bounds.json"), payload)
    print(json.dumps(payload, indent=2, sort_keys=True))
    return 0


def _cmd_resonance(args):
    cfg = _load_run_config(args)
    n = resonance_check(cfg.params, args.n_max, args.tol)
    payload = {"resonance_index": n}
    if n is not None and args.emit_mode:
        grid = build_grid(cfg.params.length, cfg.n_cells)
        mode = resonant_eigenmode(cfg.params, n, grid, tol=args.tol)
        out = args.out or "out-resonance"
        write_csv(os.path.join(out, "eigenmode.csv"),
                  ["x", "v", "z_im", "u1_im", "u2", "u3"],
                  [grid.nodes, mode.v, mode.z.imag, mode.u1.imag,
                   mode.u2.real, mode.u3.real])
        payload["lambda"] = mode.lam
        payload["eigenmode_csv"] = os.path.join(out, "eigenmode.csv")
    print(json.dumps(payload, indent=2))
    return 0


def _run_sweep_point(item):
    label, cfg = item
    _, summary = run_simulation(cfg)
    return label, summary


def _cmd_sweep(args):
    with open(args.config) as fh:
        sweep = SweepConfig.from_dict(json.load(fh))
    out = args.out or "out-sweep"
    jobs = []
    for label, cfg in sweep.points():
        doc = cfg.to_dict()
        doc["outputs"]["directory"] = os.path.join(out, label)
        jobs.append((label, RunConfig.from_dict(doc)))
    if max(sweep.parallelism, args.workers or 1) > 1:
        workers = args.workers or sweep.parallelism
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_run_sweep_point, jobs))
    else:
        results = [_run_sweep_point(j) for j in jobs]
    index = {label: summary for label, summary in results}
    write_json(os.path.join(out, "sweep_index.json"), index)
    print(f"completed {len(results)} runs under {out}")
    return 0


def _add_common(p, damping=True):
    p.add_argument("--config", help="JSON configuration file")
    p.add_argument("--out", help="output directory")
    p.add_argument("--n-cells", dest="n_cells", type=int, default=None)
    p.add_argument("--dt", type=float, default=None)
    p.add_argument("--t-end", dest="t_end", type=float, default=None)
    if damping:
        for name in ("a", "b", "c"):
            p.add_argument(f"--{name}", type=float, default=None,
                           help=f"damping coefficient {name}")


def build_parser():
    ap = argparse.ArgumentParser(
        prog="plsim",
        description="Simulation and spectral-stability laboratory for the "
                    "damped piezoelectric beam model")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="run one configured simulation")
    _add_common(p)
    p.add_argument("--dump-config", action="store_true",
                   help="print the resolved configuration and exit")
    p.set_defaults(func=_cmd_simulate)

    p = sub.add_parser("reproduce", help="run a pinned benchmark target")
    p.add_argument("--target", required=True)
    p.add_argument("--out")
    p.add_argument("--n-cells", dest="n_cells", type=int, default=200)
    p.add_argument("--dt", type=float, default=1e-3)
    p.set_defaults(func=_cmd_reproduce)

    p = sub.add_parser("spectrum", help="eigenvalues of the discrete generator")
    _add_common(p)
    p.set_defaults(func=_cmd_spectrum)

    p = sub.add_parser("resolvent", help="resolvent-norm scan along i*lambda")
    _add_common(p)
    p.add_argument("--lambda-max", dest="lambda_max", type=float, default=200.0)
    p.add_argument("--samples", type=int, default=400)
    p.set_defaults(func=_cmd_resolvent)

    p = sub.add_parser("bounds", help="closed-form resolvent-bound constants")
    _add_common(p)
    p.add_argument("--poincare-constant", dest="poincare_constant",
                   type=float, default=None)
    p.set_defaults(func=_cmd_bounds)

    p = sub.add_parser("resonance", help="resonance condition check")
    _add_common(p)
    p.add_argument("--n-max", dest="n_max", type=int, default=64)
    p.add_argument("--tol", type=float, default=1e-9)
    p.add_argument("--emit-mode", action="store_true",
                   help="write the eigenmode sampling when resonant")
    p.set_defaults(func=_cmd_resonance)

    p = sub.add_parser("sweep", help="cartesian parameter sweep")
    p.add_argument("--config", required=True)
    p.add_argument("--out")
    p.add_argument("--workers", type=int, default=None)
    p.set_defaults(func=_cmd_sweep)

    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, InvalidConfigError, ResonanceError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except DivergenceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
