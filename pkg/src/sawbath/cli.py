"""Command-line front end.

Subcommands regenerate the paper-style artifacts at desk scale:

    com-spectrum    cascaded resonator conductance CSV
    loss-spectrum   qubit loss rate CSV over a frequency range
    evolve          time trace of Bloch components and purity
    steady-map      steady-state observables over the drive grid
    fit-loss        fit the loss model to a CSV of (frequency, rate) rows
    rabi-fit        fit the amplitude calibration to (amplitude, frequency)
    dephasing       pure dephasing rate from T1 and T2*

Each accepts --config FILE, --out DIR, repeated --set key=value overrides
and --plot.  Exit codes: 0 success, 2 configuration error, 3 numerical
failure, 4 I/O error.
"""

from __future__ import annotations

import argparse
import logging
import os
import sys

import numpy as np

from .analysis import CoherenceTimes, fit_rabi_calibration, pure_dephasing
from .config import load_config, parse_quantity
from .errors import ConfigError, NumericalError
from .harness import (emit_csv, emit_plot, run_com_spectrum, run_loss_spectrum,
                      run_steady_map, run_time_trace)
from .saw import fit_loss_model

_RUNNERS = {
    "com-spectrum": (run_com_spectrum, "com_spectrum"),
    "loss-spectrum": (run_loss_spectrum, "loss_spectrum"),
    "evolve": (run_time_trace, "time_trace"),
    "steady-map": (run_steady_map, "steady_map"),
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", metavar="PATH",
                        help="config file of key = value lines")
    common.add_argument("--out", metavar="DIR",
                        help="output directory (default: config output_dir)")
    common.add_argument("--set", metavar="KEY=VALUE", action="append",
                        default=[], dest="overrides",
                        help="override one config key; repeatable")
    common.add_argument("--plot", action="store_true",
                        help="also write an SVG chart next to the CSV")

    parser = argparse.ArgumentParser(
        prog="sawbath",
        description="SAW-resonator bath engineering simulator")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("com-spectrum", parents=[common],
                   help="cascaded resonator conductance")
    sub.add_parser("loss-spectrum", parents=[common],
                   help="qubit loss rate versus frequency")
    sub.add_parser("evolve", parents=[common],
                   help="time trace at the configured operating point")
    sub.add_parser("steady-map", parents=[common],
                   help="steady-state sweep over the drive grid")
    fit = sub.add_parser("fit-loss", parents=[common],
                         help="fit the loss model to sampled rates")
    fit.add_argument("input", help="CSV of frequency,rate rows")
    rabi = sub.add_parser("rabi-fit", parents=[common],
                          help="fit the drive-amplitude calibration")
    rabi.add_argument("input", help="CSV of amplitude,frequency rows")
    deph = sub.add_parser("dephasing", parents=[common],
                          help="pure dephasing rate from T1 and T2*")
    deph.add_argument("--t1", required=True,
                      help="energy relaxation time, e.g. 18.3us")
    deph.add_argument("--t2star", required=True,
                      help="Ramsey decay time, e.g. 4.8us")
    return parser


def _read_pairs(path: str) -> np.ndarray:
    """Two-column CSV; a non-numeric first row is treated as a header."""
    with open(path, "r", encoding="utf-8") as handle:
        first = handle.readline()
    skip = 0
    try:
        [float(cell) for cell in first.strip().split(",")]
    except ValueError:
        skip = 1
    data = np.loadtxt(path, delimiter=",", skiprows=skip, ndmin=2)
    if data.ndim != 2 or data.shape[1] != 2:
        raise ValueError(f"{path}: expected two columns")
    return data


def _output_dir(args, cfg_dir: str) -> str:
    out = args.out if args.out is not None else cfg_dir
    os.makedirs(out, exist_ok=True)
    return out


def _run_table_command(args) -> int:
    cfg = load_config(args.config, args.overrides)
    runner, stem = _RUNNERS[args.command]
    table = runner(cfg)
    out = _output_dir(args, cfg.output_dir)
    csv_path = os.path.join(out, stem + ".csv")
    emit_csv(table, csv_path)
    print(f"wrote {csv_path}")
    if args.plot:
        svg_path = os.path.join(out, stem + ".svg")
        emit_plot(table, svg_path)
        print(f"wrote {svg_path}")
    return 0


def _run_fit_loss(args) -> int:
    cfg = load_config(args.config, args.overrides)
    samples = _read_pairs(args.input)
    model = fit_loss_model(samples, n_pairs=cfg.loss.n_pairs)
    print(f"q_internal = {model.q_internal:.9g}")
    print(f"gamma0 = {model.gamma0:.9g} 1/s")
    print(f"f_s = {model.f_s:.9g} Hz")
    print(f"n_pairs = {model.n_pairs}")
    idt_freq = cfg.geometry.idt_frequency
    deviation = abs(idt_freq - model.f_s) / model.f_s
    print(f"idt_frequency = {idt_freq:.9g} Hz (deviation {deviation:.3%})")
    return 0


def _run_rabi_fit(args) -> int:
    points = _read_pairs(args.input)
    cal = fit_rabi_calibration(points)
    print(f"slope = {cal.slope:.9g} Hz/V")
    print(f"intercept = {cal.intercept:.9g} Hz")
    print(f"residual_norm = {cal.residual_norm:.9g}")
    return 0


def _run_dephasing(args) -> int:
    t1 = parse_quantity(args.t1, "time", "--t1")
    t2 = parse_quantity(args.t2star, "time", "--t2star")
    rate = pure_dephasing(CoherenceTimes(t1=t1, t2_star=t2))
    print(f"gamma_phi = {rate:.9g} 1/s")
    return 0


def main(argv=None) -> int:
    logging.basicConfig(level=logging.WARNING, format="%(message)s")
    args = build_parser().parse_args(argv)
    try:
        if args.command in _RUNNERS:
            return _run_table_command(args)
        if args.command == "fit-loss":
            return _run_fit_loss(args)
        if args.command == "rabi-fit":
            return _run_rabi_fit(args)
        return _run_dephasing(args)
    except (ConfigError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except NumericalError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3
    except OSError as exc:
        print(f"i/o failure: {exc}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())
