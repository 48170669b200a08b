"""Experiment orchestration: time traces, steady-state maps, spectra, I/O.

Runners turn a RunConfig into small immutable tables; emit_csv writes them
with fixed 9-significant-digit formatting so identical configs produce
byte-identical files, and emit_plot renders a static SVG chart.  Grid
points are independent; execution here is serial and row order is part of
the contract (delta-major, omega-minor for maps).
"""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass

import numpy as np

from .config import RunConfig
from .errors import SawBathError
from .lindblad import (DensityMatrix, Drive, build_liouvillian, dressed_frame,
                       effective_temperature, evolve, observables,
                       sample_dressed_rates, steady_state)
from .saw import cascaded_conductance, qubit_loss

__all__ = [
    "Table",
    "SteadyRecord",
    "run_time_trace",
    "run_steady_map",
    "run_com_spectrum",
    "run_loss_spectrum",
    "emit_csv",
    "emit_plot",
]


@dataclass(frozen=True)
class Table:
    """Column names plus rows of floats (or short status strings)."""

    columns: tuple
    rows: tuple

    def __post_init__(self) -> None:
        width = len(self.columns)
        for row in self.rows:
            if len(row) != width:
                raise ValueError("row width does not match columns")
        object.__setattr__(self, "columns", tuple(self.columns))
        object.__setattr__(self, "rows", tuple(tuple(row) for row in self.rows))


@dataclass(frozen=True)
class SteadyRecord:
    """One steady-state grid point.

    t_eff may be +/-inf or nan; status is "ok", "unphysical-population",
    or the error class name for points where the solve failed (all
    numeric fields nan in that case).
    """

    omega: float
    delta: float
    x: float
    y: float
    z: float
    purity: float
    t_eff: float
    status: str = "ok"

    def __post_init__(self) -> None:
        if math.isfinite(self.purity):
            if not 0.5 - 1e-9 <= self.purity <= 1.0 + 1e-9:
                raise ValueError("purity must lie in [0.5, 1]")


def _resolved_rates(cfg: RunConfig, drive: Drive):
    sampled = sample_dressed_rates(cfg.loss, drive, cfg.gamma0_policy,
                                   cfg.gamma0_value or None)
    return dataclasses.replace(sampled, gamma_1=cfg.gamma1,
                               gamma_phi=cfg.gamma_phi)


def run_time_trace(cfg: RunConfig) -> Table:
    """Evolve |g><g| at the configured operating point.

    One row per time step: (t, <sigma_x>, <sigma_y>, <sigma_z>, purity).
    """
    drive = cfg.drive()
    frame = dressed_frame(drive)
    times = np.linspace(0.0, cfg.trace.t_max, cfg.trace.n_steps)
    try:
        rates = _resolved_rates(cfg, drive)
        liouvillian = build_liouvillian(drive, rates)
    except (SawBathError, ValueError) as exc:
        raise type(exc)(
            f"{exc} [at omega={drive.omega_rabi:.9g} Hz, "
            f"delta={drive.detuning:.9g} Hz]") from exc
    rho0 = DensityMatrix.ground()
    rows = []
    for t in times:
        try:
            bloch, purity, _ = observables(evolve(rho0, liouvillian, float(t)),
                                           frame)
        except (SawBathError, ValueError) as exc:
            raise type(exc)(
                f"{exc} [at omega={drive.omega_rabi:.9g} Hz, "
                f"delta={drive.detuning:.9g} Hz, t={t:.9g} s]") from exc
        rows.append((float(t), bloch.x, bloch.y, bloch.z, purity))
    return Table(("t", "sigma_x", "sigma_y", "sigma_z", "purity"), tuple(rows))


def _steady_point(cfg: RunConfig, omega: float, delta: float) -> SteadyRecord:
    drive = Drive(omega_rabi=omega, detuning=delta,
                  f_drive=cfg.qubit_freq + delta)
    frame = dressed_frame(drive)
    try:
        rates = _resolved_rates(cfg, drive)
        rho = steady_state(build_liouvillian(drive, rates))
        bloch, purity, sz_dressed = observables(rho, frame)
        if abs(sz_dressed) >= 1.0 or frame.omega_r <= 0:
            t_eff, status = math.nan, "unphysical-population"
        else:
            report = effective_temperature(sz_dressed, frame.omega_r)
            t_eff, status = report.kelvin, report.status
        return SteadyRecord(omega, delta, bloch.x, bloch.y, bloch.z,
                            purity, t_eff, status)
    except (SawBathError, ValueError) as exc:
        return SteadyRecord(omega, delta, math.nan, math.nan, math.nan,
                            math.nan, math.nan, type(exc).__name__)


def run_steady_map(cfg: RunConfig) -> Table:
    """Steady-state observables over the (Omega, Delta) grid.

    The drive frequency tracks each grid detuning as qubit_freq + delta.
    Row order is delta-major, omega-minor.  Failed points keep their row
    with nan fields and the error class in the status column.
    """
    omegas = np.linspace(cfg.grid.omega_min, cfg.grid.omega_max,
                         cfg.grid.n_omega)
    deltas = np.linspace(cfg.grid.delta_min, cfg.grid.delta_max,
                         cfg.grid.n_delta)
    rows = []
    for delta in deltas:
        for omega in omegas:
            record = _steady_point(cfg, float(omega), float(delta))
            rows.append((record.omega, record.delta, record.x, record.y,
                         record.z, record.purity, record.t_eff, record.status))
    return Table(("omega", "delta", "sigma_x", "sigma_y", "sigma_z",
                  "purity", "t_eff", "status"), tuple(rows))


def run_com_spectrum(cfg: RunConfig) -> Table:
    """Cascaded resonator conductance on the configured frequency grid."""
    grid = np.linspace(cfg.com_spectrum.f_min, cfg.com_spectrum.f_max,
                       cfg.com_spectrum.n_points)
    spectrum = cascaded_conductance(cfg.geometry, grid, gap=cfg.gap,
                                    normalization=cfg.com_normalization)
    rows = tuple((float(f), float(v))
                 for f, v in zip(spectrum.frequencies, spectrum.values))
    return Table(("frequency", "conductance"), rows)


def run_loss_spectrum(cfg: RunConfig) -> Table:
    """Qubit loss rate over the configured frequency range."""
    grid = np.linspace(cfg.loss_spectrum.f_min, cfg.loss_spectrum.f_max,
                       cfg.loss_spectrum.n_points)
    values = qubit_loss(cfg.loss, grid)
    rows = tuple((float(f), float(v)) for f, v in zip(grid, values))
    return Table(("frequency", "loss_rate"), rows)


def _format_cell(value) -> str:
    if isinstance(value, str):
        return value
    return format(float(value), ".9g")


def emit_csv(table: Table, path) -> None:
    """Write the table as CSV: header row, 9 significant digits, LF endings."""
    try:
        with open(path, "w", encoding="utf-8", newline="") as handle:
            handle.write(",".join(table.columns) + "\n")
            for row in table.rows:
                handle.write(",".join(_format_cell(cell) for cell in row) + "\n")
    except OSError as exc:
        raise OSError(f"cannot write CSV {path}: {exc}") from exc


def emit_plot(table: Table, path) -> None:
    """Render the table to a self-contained SVG chart.

    Maps (omega/delta grids) become a purity heat map; anything else is
    drawn as lines against the first column.
    """
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(6.0, 4.2))
    try:
        if table.columns[:2] == ("omega", "delta") and "purity" in table.columns:
            _plot_map(ax, fig, table)
        else:
            _plot_lines(ax, table)
        fig.tight_layout()
        fig.savefig(path, format="svg")
    except OSError as exc:
        raise OSError(f"cannot write plot {path}: {exc}") from exc
    finally:
        plt.close(fig)


def _plot_map(ax, fig, table: Table) -> None:
    omegas = sorted({row[0] for row in table.rows})
    deltas = sorted({row[1] for row in table.rows})
    index = table.columns.index("purity")
    grid = np.full((len(omegas), len(deltas)), np.nan)
    omega_pos = {v: i for i, v in enumerate(omegas)}
    delta_pos = {v: i for i, v in enumerate(deltas)}
    for row in table.rows:
        grid[omega_pos[row[0]], delta_pos[row[1]]] = row[index]
    mesh = ax.pcolormesh(np.array(deltas) / 1e6, np.array(omegas) / 1e6,
                         grid, shading="nearest", vmin=0.5, vmax=1.0)
    fig.colorbar(mesh, ax=ax, label="purity")
    ax.set_xlabel("detuning (MHz)")
    ax.set_ylabel("Rabi frequency (MHz)")


def _plot_lines(ax, table: Table) -> None:
    x = np.array([row[0] for row in table.rows], dtype=float)
    for j in range(1, len(table.columns)):
        if any(isinstance(row[j], str) for row in table.rows):
            continue
        y = np.array([row[j] for row in table.rows], dtype=float)
        ax.plot(x, y, label=table.columns[j], linewidth=1.2)
    ax.set_xlabel(table.columns[0])
    if len(table.columns) > 2:
        ax.legend(loc="best", fontsize=8)
    ax.grid(alpha=0.3)
