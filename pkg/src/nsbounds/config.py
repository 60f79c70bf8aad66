"""Flat ``key = value`` run configuration with dotted keys.

Example::

    # seed geometry
    channel.L = 1
    box.a = 0.8
    box.b = 0.8
    box.c = 0.8
    obstacle.volume = 3.1
    fluid.viscosity = 1
    inflow.type = analytic
    inflow.amplitude = 1e-6
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace
from pathlib import Path

from .geometry import ChannelGeometry
from .inflow import DEFAULT_COMPAT_TOL, AnalyticInflow, InflowDatum, SampledInflow

__all__ = ["ConfigError", "SweepSpec", "RunConfig", "parse_config", "load_config", "SWEEP_PARAMS"]

SWEEP_PARAMS = ("amplitude", "viscosity", "obstacle.volume", "box.a")

_NUMERIC = {
    "channel.L", "box.a", "box.b", "box.c", "obstacle.volume",
    "fluid.viscosity", "inflow.amplitude", "inflow.compat_tol",
    "stokes.forcing_norm", "sweep.lo", "sweep.hi", "sweep.steps",
    "verify.eig_n",
}
_TEXT = {"inflow.type", "inflow.grid_file", "sweep.param", "output.path"}
_REQUIRED = ("channel.L", "box.a", "box.b", "box.c", "obstacle.volume", "fluid.viscosity")


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class SweepSpec:
    param: str
    lo: float
    hi: float
    steps: int

    def values(self) -> list[float]:
        return [self.lo + (self.hi - self.lo) * i / (self.steps - 1) for i in range(self.steps)]


@dataclass(frozen=True)
class RunConfig:
    geometry: ChannelGeometry
    viscosity: float
    inflow_type: str = "analytic"
    amplitude: float | None = None
    grid_file: Path | None = None
    compat_tol: float = DEFAULT_COMPAT_TOL
    stokes_forcing: float | None = None
    sweep: SweepSpec | None = None
    output_path: Path | None = None
    eig_n: int = 64

    def inflow(self) -> InflowDatum:
        if self.inflow_type == "analytic":
            return AnalyticInflow(self.amplitude)
        return SampledInflow.from_csv(self.grid_file, self.geometry.L, self.compat_tol)

    def with_param(self, name: str, value: float) -> "RunConfig":
        if name == "amplitude":
            return replace(self, amplitude=value)
        if name == "viscosity":
            return replace(self, viscosity=value)
        if name == "obstacle.volume":
            return replace(self, geometry=replace(self.geometry, vol_K=value))
        if name == "box.a":
            return replace(self, geometry=replace(self.geometry, a=value))
        raise ConfigError(f"cannot sweep over {name!r}")


def _parse_lines(text: str, origin: str) -> tuple[dict, dict]:
    values, where = {}, {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{origin}:{lineno}: expected 'key = value', got {raw.strip()!r}")
        key, value = (s.strip() for s in line.split("=", 1))
        if key not in _NUMERIC and key not in _TEXT:
            raise ConfigError(f"{origin}:{lineno}: unknown key {key!r}")
        if key in values:
            raise ConfigError(f"{origin}:{lineno}: duplicate key {key!r} (first on line {where[key]})")
        if key in _NUMERIC:
            try:
                parsed = float(value)
            except ValueError:
                raise ConfigError(f"{origin}:{lineno}: key {key!r}: not a number: {value!r}") from None
            if not math.isfinite(parsed):
                raise ConfigError(f"{origin}:{lineno}: key {key!r}: must be finite")
            value = parsed
        values[key] = value
        where[key] = lineno
    return values, where


def parse_config(text: str, origin: str = "<config>", base_dir: Path | None = None) -> RunConfig:
    """Parse config text; relative file paths resolve against ``base_dir``."""
    v, where = _parse_lines(text, origin)

    def loc(key):
        return f"{origin}:{where[key]}" if key in where else origin

    missing = [k for k in _REQUIRED if k not in v]
    if missing:
        raise ConfigError(f"{origin}: missing required key(s): {', '.join(missing)}")
    geom = ChannelGeometry(v["channel.L"], v["box.a"], v["box.b"], v["box.c"], v["obstacle.volume"])
    kind = v.get("inflow.type", "analytic")
    if kind not in ("analytic", "sampled"):
        raise ConfigError(f"{loc('inflow.type')}: inflow.type must be 'analytic' or 'sampled'")
    grid_file = None
    if kind == "analytic":
        if "inflow.amplitude" not in v:
            raise ConfigError(f"{origin}: analytic inflow needs inflow.amplitude")
        if v["inflow.amplitude"] < 0:
            raise ConfigError(f"{loc('inflow.amplitude')}: inflow.amplitude must be >= 0")
    else:
        if "inflow.grid_file" not in v:
            raise ConfigError(f"{origin}: sampled inflow needs inflow.grid_file")
        grid_file = Path(v["inflow.grid_file"])
        if base_dir is not None and not grid_file.is_absolute():
            grid_file = base_dir / grid_file
        if not grid_file.is_file():
            raise ConfigError(f"{loc('inflow.grid_file')}: grid file not found: {grid_file}")
    sweep = None
    if "sweep.param" in v:
        for k in ("sweep.lo", "sweep.hi", "sweep.steps"):
            if k not in v:
                raise ConfigError(f"{origin}: sweep block needs {k}")
        if v["sweep.param"] not in SWEEP_PARAMS:
            raise ConfigError(
                f"{loc('sweep.param')}: sweep.param must be one of {', '.join(SWEEP_PARAMS)}"
            )
        steps = v["sweep.steps"]
        if steps != int(steps) or steps < 2:
            raise ConfigError(f"{loc('sweep.steps')}: sweep.steps must be an integer >= 2")
        if not v["sweep.lo"] < v["sweep.hi"]:
            raise ConfigError(f"{loc('sweep.lo')}: sweep.lo must be < sweep.hi")
        sweep = SweepSpec(v["sweep.param"], v["sweep.lo"], v["sweep.hi"], int(steps))
    eig_n = v.get("verify.eig_n", 64)
    if eig_n != int(eig_n) or eig_n < 8:
        raise ConfigError(f"{loc('verify.eig_n')}: verify.eig_n must be an integer >= 8")
    out = v.get("output.path")
    return RunConfig(
        geometry=geom,
        viscosity=v["fluid.viscosity"],
        inflow_type=kind,
        amplitude=v.get("inflow.amplitude"),
        grid_file=grid_file,
        compat_tol=v.get("inflow.compat_tol", DEFAULT_COMPAT_TOL),
        stokes_forcing=v.get("stokes.forcing_norm"),
        sweep=sweep,
        output_path=Path(out) if out else None,
        eig_n=int(eig_n),
    )


def load_config(path) -> RunConfig:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc.strerror}") from None
    return parse_config(text, str(path), path.parent)
