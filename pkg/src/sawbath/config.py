"""Run configuration: flat dotted-key files with physical-unit suffixes.

A config file holds lines like

    drive.omega = 8.47 MHz
    grid.n_omega = 41
    rates.gamma1 = 2.46 1/us

Frequencies take Hz/kHz/MHz/GHz, rates 1/s or 1/us, times s/ms/us/ns and
lengths m/mm/um/nm; bare numbers are SI base units.  Every key must be in
the registry below: a misspelled physics parameter is a hard error, never
a silent default.  Defaults reproduce the paper-style operating point
(4.001 GHz qubit, 8.47 MHz drive detuned by -10 MHz) and a 41 x 51
steady-state grid.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .errors import ConfigError
from .lindblad import GAMMA0_POLICIES, Drive
from .saw import LossModel, SawGeometry

__all__ = [
    "GridSpec",
    "TraceSpec",
    "SpectrumSpec",
    "RunConfig",
    "load_config",
    "parse_assignments",
    "parse_quantity",
]

_FREQUENCY_UNITS = {"hz": 1.0, "khz": 1e3, "mhz": 1e6, "ghz": 1e9}
_RATE_UNITS = {"1/s": 1.0, "1/us": 1e6}
_TIME_UNITS = {"s": 1.0, "ms": 1e-3, "us": 1e-6, "ns": 1e-9}
_LENGTH_UNITS = {"m": 1.0, "mm": 1e-3, "um": 1e-6, "nm": 1e-9}

_UNIT_TABLES = {
    "frequency": _FREQUENCY_UNITS,
    "rate": _RATE_UNITS,
    "time": _TIME_UNITS,
    "length": _LENGTH_UNITS,
}

_NUMBER_RE = re.compile(
    r"^\s*([-+]?(?:\d+\.?\d*|\.\d+)(?:[eE][-+]?\d+)?)\s*(\S*)\s*$")

# key -> value kind; the registry is the single source of accepted keys
_REGISTRY = {
    "geometry.lambda_idt": "length",
    "geometry.lambda_mirror": "length",
    "geometry.n_pairs": "int",
    "geometry.overlap_w": "length",
    "geometry.l_mirror": "length",
    "geometry.l_idt": "length",
    "geometry.v_sound": "float",
    "geometry.eta": "float",
    "geometry.r_idt": "complex",
    "geometry.r_mirror": "complex",
    "geometry.gap": "length",
    "loss.q_internal": "float",
    "loss.gamma0": "rate",
    "loss.n_pairs": "int",
    "loss.f_s": "frequency",
    "qubit_freq": "frequency",
    "drive.omega": "frequency",
    "drive.delta": "frequency",
    "drive.f_drive": "frequency",
    "rates.gamma1": "rate",
    "rates.gamma_phi": "rate",
    "rates.gamma0_policy": "str",
    "rates.gamma0": "rate",
    "grid.omega_min": "frequency",
    "grid.omega_max": "frequency",
    "grid.delta_min": "frequency",
    "grid.delta_max": "frequency",
    "grid.n_omega": "int",
    "grid.n_delta": "int",
    "trace.t_max": "time",
    "trace.n_steps": "int",
    "com_spectrum.f_min": "frequency",
    "com_spectrum.f_max": "frequency",
    "com_spectrum.n_points": "int",
    "com_spectrum.normalization": "str",
    "loss_spectrum.f_min": "frequency",
    "loss_spectrum.f_max": "frequency",
    "loss_spectrum.n_points": "int",
    "output_dir": "str",
}

_GEOMETRY_FIELDS = ("lambda_idt", "lambda_mirror", "n_pairs", "overlap_w",
                    "l_mirror", "l_idt", "v_sound", "eta", "r_idt", "r_mirror")
_LOSS_FIELDS = ("q_internal", "gamma0", "n_pairs", "f_s")


def _defaults() -> dict:
    geom = SawGeometry()
    loss = LossModel()
    table = {f"geometry.{name}": getattr(geom, name) for name in _GEOMETRY_FIELDS}
    table.update({f"loss.{name}": getattr(loss, name) for name in _LOSS_FIELDS})
    table.update({
        "geometry.gap": None,
        "qubit_freq": 4.001e9,
        "drive.omega": 8.47e6,
        "drive.delta": -10e6,
        "drive.f_drive": 0.0,
        "rates.gamma1": 2.46e6,
        "rates.gamma_phi": 1.48e6,
        "rates.gamma0_policy": "carrier",
        "rates.gamma0": 0.0,
        "grid.omega_min": 1e6,
        "grid.omega_max": 15e6,
        "grid.delta_min": -25e6,
        "grid.delta_max": 25e6,
        "grid.n_omega": 41,
        "grid.n_delta": 51,
        "trace.t_max": 2e-6,
        "trace.n_steps": 201,
        "com_spectrum.f_min": 4.40e9,
        "com_spectrum.f_max": 4.52e9,
        "com_spectrum.n_points": 20001,
        "com_spectrum.normalization": "peak-unity",
        "loss_spectrum.f_min": 3.961e9,
        "loss_spectrum.f_max": 4.041e9,
        "loss_spectrum.n_points": 801,
        "output_dir": ".",
    })
    return table


def parse_quantity(text: str, kind: str, context: str = "value") -> float:
    """Number with an optional unit suffix; bare numbers are SI base units.

    kind is one of "frequency", "rate", "time", "length".  The suffix may
    be attached ("8.47MHz") or spaced ("8.47 MHz").
    """
    match = _NUMBER_RE.match(text.strip())
    if match is None:
        raise ConfigError(f"{context}: expected a number, got {text!r}")
    value = float(match.group(1))
    suffix = match.group(2)
    if not suffix:
        return value
    factor = _UNIT_TABLES[kind].get(suffix.lower())
    if factor is None:
        allowed = "|".join(sorted(_UNIT_TABLES[kind]))
        raise ConfigError(
            f"{context}: unit {suffix!r} invalid for a {kind} ({allowed})")
    return value * factor


def _parse_value(key: str, text: str):
    kind = _REGISTRY[key]
    text = text.strip()
    if not text:
        raise ConfigError(f"{key}: empty value")
    if kind == "str":
        return text
    if kind == "int":
        try:
            return int(text)
        except ValueError:
            raise ConfigError(f"{key}: expected an integer, got {text!r}") from None
    if kind == "complex":
        try:
            return complex(text)
        except ValueError:
            raise ConfigError(f"{key}: expected a complex number, got {text!r}") from None
    if kind == "float":
        match = _NUMBER_RE.match(text)
        if match is None or match.group(2):
            raise ConfigError(f"{key}: expected a bare number, got {text!r}")
        return float(match.group(1))
    return parse_quantity(text, kind, context=key)


@dataclass(frozen=True)
class GridSpec:
    """Rectangular (Omega, Delta) sweep in Hz."""

    omega_min: float
    omega_max: float
    delta_min: float
    delta_max: float
    n_omega: int
    n_delta: int

    def __post_init__(self) -> None:
        if self.n_omega < 2 or self.n_delta < 2:
            raise ValueError("grid counts must be >= 2")
        if not self.omega_min <= self.omega_max:
            raise ValueError("omega_min must not exceed omega_max")
        if not self.delta_min <= self.delta_max:
            raise ValueError("delta_min must not exceed delta_max")
        if self.omega_min < 0:
            raise ValueError("omega_min must be >= 0")


@dataclass(frozen=True)
class TraceSpec:
    """Uniform time grid from 0 to t_max with n_steps rows."""

    t_max: float
    n_steps: int

    def __post_init__(self) -> None:
        if not self.t_max > 0:
            raise ValueError("t_max must be positive")
        if self.n_steps < 2:
            raise ValueError("n_steps must be >= 2")


@dataclass(frozen=True)
class SpectrumSpec:
    """Uniform frequency grid in Hz."""

    f_min: float
    f_max: float
    n_points: int

    def __post_init__(self) -> None:
        if not 0 < self.f_min < self.f_max:
            raise ValueError("need 0 < f_min < f_max")
        if self.n_points < 2:
            raise ValueError("n_points must be >= 2")


@dataclass(frozen=True)
class RunConfig:
    """Everything a run needs, resolved to SI units."""

    geometry: SawGeometry
    loss: LossModel
    qubit_freq: float
    drive_omega: float
    drive_delta: float
    drive_f: float  # 0 means derive as qubit_freq + drive_delta
    gamma1: float
    gamma_phi: float
    gamma0_policy: str
    gamma0_value: float
    grid: GridSpec
    trace: TraceSpec
    com_spectrum: SpectrumSpec
    loss_spectrum: SpectrumSpec
    com_normalization: str
    gap: float | None
    output_dir: str

    def __post_init__(self) -> None:
        if not self.qubit_freq > 0:
            raise ValueError("qubit_freq must be positive")
        if self.gamma0_policy not in GAMMA0_POLICIES:
            raise ValueError(f"gamma0_policy must be one of {GAMMA0_POLICIES}")
        if self.gamma1 < 0 or self.gamma_phi < 0 or self.gamma0_value < 0:
            raise ValueError("rates must be >= 0")
        if self.com_normalization not in ("peak-unity", "raw"):
            raise ValueError("normalization must be 'peak-unity' or 'raw'")
        if self.gap is not None and self.gap < 0:
            raise ValueError("gap must be >= 0")

    def drive(self, omega: float | None = None,
              delta: float | None = None) -> Drive:
        """Drive at the configured operating point, or a grid point of it."""
        om = self.drive_omega if omega is None else omega
        dl = self.drive_delta if delta is None else delta
        f_drive = self.drive_f if self.drive_f > 0 else self.qubit_freq + dl
        return Drive(omega_rabi=om, detuning=dl, f_drive=f_drive)


def parse_assignments(pairs, source: str = "--set") -> dict:
    """Parse `key=value` strings (CLI overrides) against the registry."""
    table = {}
    for raw in pairs:
        if "=" not in raw:
            raise ConfigError(f"{source}: expected key=value, got {raw!r}")
        key, text = raw.split("=", 1)
        key = key.strip()
        if key not in _REGISTRY:
            raise ConfigError(f"{source}: unknown key {key!r}")
        table[key] = _parse_value(key, text)
    return table


def _parse_file(path: str) -> dict:
    table = {}
    try:
        with open(path, "r", encoding="utf-8") as handle:
            lines = handle.readlines()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    for lineno, line in enumerate(lines, start=1):
        body = line.split("#", 1)[0].strip()
        if not body:
            continue
        if "=" not in body:
            raise ConfigError(f"{path}:{lineno}: expected key = value")
        key, text = body.split("=", 1)
        key = key.strip()
        if key not in _REGISTRY:
            raise ConfigError(f"{path}:{lineno}: unknown key {key!r}")
        table[key] = _parse_value(key, text)
    return table


def load_config(path: str | None = None, overrides=()) -> RunConfig:
    """Defaults, then the config file, then `--set` overrides, in that order."""
    table = _defaults()
    if path is not None:
        table.update(_parse_file(path))
    table.update(parse_assignments(overrides))

    def section(prefix: str, fields) -> dict:
        return {name: table[f"{prefix}.{name}"] for name in fields}

    try:
        return RunConfig(
            geometry=SawGeometry(**section("geometry", _GEOMETRY_FIELDS)),
            loss=LossModel(**section("loss", _LOSS_FIELDS)),
            qubit_freq=table["qubit_freq"],
            drive_omega=table["drive.omega"],
            drive_delta=table["drive.delta"],
            drive_f=table["drive.f_drive"],
            gamma1=table["rates.gamma1"],
            gamma_phi=table["rates.gamma_phi"],
            gamma0_policy=table["rates.gamma0_policy"],
            gamma0_value=table["rates.gamma0"],
            grid=GridSpec(
                omega_min=table["grid.omega_min"],
                omega_max=table["grid.omega_max"],
                delta_min=table["grid.delta_min"],
                delta_max=table["grid.delta_max"],
                n_omega=table["grid.n_omega"],
                n_delta=table["grid.n_delta"],
            ),
            trace=TraceSpec(t_max=table["trace.t_max"],
                            n_steps=table["trace.n_steps"]),
            com_spectrum=SpectrumSpec(
                f_min=table["com_spectrum.f_min"],
                f_max=table["com_spectrum.f_max"],
                n_points=table["com_spectrum.n_points"],
            ),
            loss_spectrum=SpectrumSpec(
                f_min=table["loss_spectrum.f_min"],
                f_max=table["loss_spectrum.f_max"],
                n_points=table["loss_spectrum.n_points"],
            ),
            com_normalization=table["com_spectrum.normalization"],
            gap=table["geometry.gap"],
            output_dir=table["output_dir"],
        )
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
