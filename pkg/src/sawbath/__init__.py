"""Phonon bath engineering for a SAW-coupled qubit.

A coupling-of-modes model of a Bragg-mirrored surface-acoustic-wave
resonator sets the frequency dependence of qubit energy loss; driving the
qubit then samples that loss at the Mollow sidebands, and the resulting
Lindblad dynamics stabilize dressed states whose purity and effective
temperature this package computes.
"""

from .analysis import (CoherenceTimes, RabiCalibration, density_from_bloch,
                       extract_rabi_frequency, fit_rabi_calibration,
                       pure_dephasing, tomography_phase)
from .config import (GridSpec, RunConfig, SpectrumSpec, TraceSpec, load_config,
                     parse_quantity)
from .errors import (ConfigError, DegenerateCascadeError, FitConvergenceError,
                     NumericalError, SawBathError, SteadyStateError)
from .harness import (SteadyRecord, Table, emit_csv, emit_plot,
                      run_com_spectrum, run_loss_spectrum, run_steady_map,
                      run_time_trace)
from .lindblad import (BlochVector, DensityMatrix, DressedFrame, Drive,
                       EffectiveTemperature, Liouvillian, RateSet,
                       build_liouvillian, dressed_frame, dressed_states,
                       effective_temperature, evolve, hamiltonian, observables,
                       sample_dressed_rates, steady_state)
from .saw import (ConductanceSpectrum, LorentzianFit, LossModel, PMatrix,
                  SawGeometry, cascaded_conductance, fit_lorentzian,
                  fit_loss_model, gap_pmatrix, idt_conductance, idt_pmatrix,
                  mirror_pmatrix, mirror_reflection, mirror_transmission,
                  qubit_loss)

__version__ = "0.1.0"

__all__ = [
    "BlochVector",
    "CoherenceTimes",
    "ConductanceSpectrum",
    "ConfigError",
    "DegenerateCascadeError",
    "DensityMatrix",
    "DressedFrame",
    "Drive",
    "EffectiveTemperature",
    "FitConvergenceError",
    "GridSpec",
    "Liouvillian",
    "LorentzianFit",
    "LossModel",
    "NumericalError",
    "PMatrix",
    "RabiCalibration",
    "RateSet",
    "RunConfig",
    "SawBathError",
    "SawGeometry",
    "SpectrumSpec",
    "SteadyRecord",
    "SteadyStateError",
    "Table",
    "TraceSpec",
    "build_liouvillian",
    "cascaded_conductance",
    "density_from_bloch",
    "dressed_frame",
    "dressed_states",
    "effective_temperature",
    "emit_csv",
    "emit_plot",
    "evolve",
    "extract_rabi_frequency",
    "fit_lorentzian",
    "fit_loss_model",
    "fit_rabi_calibration",
    "gap_pmatrix",
    "hamiltonian",
    "idt_conductance",
    "idt_pmatrix",
    "load_config",
    "mirror_pmatrix",
    "mirror_reflection",
    "mirror_transmission",
    "observables",
    "parse_quantity",
    "pure_dephasing",
    "qubit_loss",
    "run_com_spectrum",
    "run_loss_spectrum",
    "run_steady_map",
    "run_time_trace",
    "sample_dressed_rates",
    "steady_state",
    "tomography_phase",
]
