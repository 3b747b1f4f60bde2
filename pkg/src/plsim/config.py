"""Run and sweep configuration: strict JSON parsing with full round-tripping."""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass

from .integrate import IntegratorConfig
from .params import DampingConfig, PhysicalParams


class ConfigError(ValueError):
    pass


_PARAM_KEYS = {"rho", "alpha", "gamma", "eps1", "eps3", "mu", "h_thickness",
               "length", "xi", "xi_mode"}
_DAMPING_KEYS = {"a", "b", "c"}
_GRID_KEYS = {"n_cells"}
_INTEGRATOR_KEYS = {"dt", "t_end", "bootstrap", "snapshot_stride"}
_OUTPUT_KEYS = {"directory", "formats"}
_TOP_KEYS = {"params", "damping", "grid", "integrator", "initial_conditions",
             "outputs"}

DEFAULT_N_CELLS = 200
DEFAULT_DT = 1e-3
DEFAULT_T_END = 100.0


def _reject_unknown(d, allowed, context):
    unknown = set(d) - allowed
    if unknown:
        raise ConfigError(f"unknown keys in {context}: {sorted(unknown)}")


@dataclass(frozen=True)
class RunConfig:
    params: PhysicalParams
    damping: DampingConfig
    n_cells: int
    integrator: IntegratorConfig
    initial_conditions: object     # "paper-section-9" | {"eigenmode": n} | {"file": path}
    out_dir: str = "out"
    formats: tuple = ("csv", "json")

    @classmethod
    def from_dict(cls, doc) -> "RunConfig":
        if not isinstance(doc, dict):
            raise ConfigError("configuration must be a JSON object")
        _reject_unknown(doc, _TOP_KEYS, "configuration")

        pd = dict(doc.get("params", {}))
        _reject_unknown(pd, _PARAM_KEYS, "params")
        try:
            params = PhysicalParams(**pd)
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"bad params: {exc}")

        dd = dict(doc.get("damping", {}))
        _reject_unknown(dd, _DAMPING_KEYS, "damping")
        try:
            damping = DampingConfig(**dd)
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"bad damping: {exc}")

        gd = dict(doc.get("grid", {}))
        _reject_unknown(gd, _GRID_KEYS, "grid")
        n_cells = int(gd.get("n_cells", DEFAULT_N_CELLS))

        it = dict(doc.get("integrator", {}))
        _reject_unknown(it, _INTEGRATOR_KEYS, "integrator")
        it.setdefault("dt", DEFAULT_DT)
        it.setdefault("t_end", DEFAULT_T_END)
        try:
            integrator = IntegratorConfig(**it)
        except ValueError as exc:
            raise ConfigError(f"bad integrator: {exc}")

        ic = doc.get("initial_conditions", "paper-section-9")
        _validate_ic(ic)

        od = dict(doc.get("outputs", {}))
        _reject_unknown(od, _OUTPUT_KEYS, "outputs")
        out_dir = od.get("directory", "out")
        formats = tuple(od.get("formats", ["csv", "json"]))
        for f in formats:
            if f not in ("csv", "json", "svg"):
                raise ConfigError(f"unknown output format {f!r}")

        return cls(params, damping, n_cells, integrator, ic, out_dir, formats)

    @classmethod
    def from_json(cls, text: str) -> "RunConfig":
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"invalid JSON: {exc}")
        return cls.from_dict(doc)

    def to_dict(self) -> dict:
        p = self.params
        return {
            "params": {
                "rho": p.rho, "alpha": p.alpha, "gamma": p.gamma,
                "eps1": p.eps1, "eps3": p.eps3, "mu": p.mu,
                "h_thickness": p.h_thickness, "length": p.length,
                "xi": p.xi, "xi_mode": p.xi_mode,
            },
            "damping": {"a": self.damping.a, "b": self.damping.b,
                        "c": self.damping.c},
            "grid": {"n_cells": self.n_cells},
            "integrator": {
                "dt": self.integrator.dt, "t_end": self.integrator.t_end,
                "bootstrap": self.integrator.bootstrap,
                "snapshot_stride": self.integrator.snapshot_stride,
            },
            "initial_conditions": self.initial_conditions,
            "outputs": {"directory": self.out_dir,
                        "formats": list(self.formats)},
        }


def _validate_ic(ic):
    if ic == "paper-section-9":
        return
    if isinstance(ic, dict) and set(ic) == {"eigenmode"}:
        if not isinstance(ic["eigenmode"], int) or ic["eigenmode"] < 0:
            raise ConfigError("eigenmode index must be a nonnegative integer")
        return
    if isinstance(ic, dict) and set(ic) == {"file"}:
        return
    raise ConfigError(
        "initial_conditions must be 'paper-section-9', {'eigenmode': n}, "
        "or {'file': path}")


@dataclass(frozen=True)
class SweepConfig:
    base: RunConfig
    axes: dict                 # name -> list of values; names like "damping.a"
    parallelism: int = 1
    max_points: int = 256

    @classmethod
    def from_dict(cls, doc) -> "SweepConfig":
        _reject_unknown(doc, {"base", "axes", "parallelism", "max_points"},
                        "sweep")
        base = RunConfig.from_dict(doc.get("base", {}))
        axes = doc.get("axes", {})
        if not isinstance(axes, dict) or not axes:
            raise ConfigError("sweep needs a nonempty 'axes' object")
        out = cls(base, {k: list(v) for k, v in axes.items()},
                  int(doc.get("parallelism", 1)),
                  int(doc.get("max_points", 256)))
        if out.size > out.max_points:
            raise ConfigError(
                f"sweep size {out.size} exceeds cap {out.max_points}")
        return out

    @property
    def size(self) -> int:
        n = 1
        for vals in self.axes.values():
            n *= len(vals)
        return n

    def points(self):
        """Yield (label, RunConfig) pairs over the cartesian product."""
        names = sorted(self.axes)
        for combo in itertools.product(*(self.axes[n] for n in names)):
            doc = self.base.to_dict()
            tags = []
            for name, value in zip(names, combo):
                section, _, key = name.partition(".")
                if not key or section not in doc or key not in doc[section]:
                    raise ConfigError(f"unknown sweep axis {name!r}")
                doc[section][key] = value
                tags.append(f"{key}{value:g}" if isinstance(value, float)
                            else f"{key}{value}")
            yield "_".join(tags), RunConfig.from_dict(doc)
