"""Shared property checks.

Each helper runs one invariant suite and returns its worst observed
deviation, so the unit tests and the acceptance gate can assert the same
computations without duplicating them.
"""

from __future__ import annotations

import dataclasses

import numpy as np

from sawbath.analysis import fit_rabi_calibration
from sawbath.lindblad import (DensityMatrix, Drive, RateSet, SIGMA_Z,
                              _propagate, build_liouvillian, dressed_frame,
                              dressed_states, evolve, hamiltonian, observables,
                              steady_state)
from sawbath.saw import (ConductanceSpectrum, LossModel, fit_lorentzian,
                         fit_loss_model, qubit_loss)
from sawbath.saw import _lorentzian

_BASIS = []
for _i in range(2):
    for _j in range(2):
        _m = np.zeros((2, 2), dtype=complex)
        _m[_i, _j] = 1.0
        _BASIS.append(_m)


def trace_distance(a: np.ndarray, b: np.ndarray) -> float:
    return 0.5 * float(np.sum(np.abs(np.linalg.eigvalsh(a - b))))


def random_density(rng) -> DensityMatrix:
    a = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
    rho = a @ a.conj().T
    return DensityMatrix(rho / np.trace(rho))


def random_drive(rng) -> Drive:
    return Drive(omega_rabi=float(rng.uniform(0, 20e6)),
                 detuning=float(rng.uniform(-25e6, 25e6)))


def random_rates(rng) -> RateSet:
    # zero out a random subset so degenerate corners get exercised too
    values = rng.uniform(0, 5e6, size=5) * (rng.random(size=5) > 0.25)
    return RateSet(*[float(v) for v in values])


def _direct_dissipator(op: np.ndarray, rho: np.ndarray) -> np.ndarray:
    ada = op.conj().T @ op
    return op @ rho @ op.conj().T - 0.5 * (ada @ rho + rho @ ada)


def superop_oracle_worst(drive: Drive, rates: RateSet) -> float:
    """Term-by-term comparison of the assembled generator with direct
    2x2 evaluation of each right-hand-side term, on all four basis
    matrices.  Returns the worst relative deviation."""
    frame = dressed_frame(drive)
    ground, excited = dressed_states(frame)
    sz_d = np.outer(excited, excited.conj()) - np.outer(ground, ground.conj())
    sp_d = np.outer(excited, ground.conj())
    sm_d = sp_d.conj().T
    ham = hamiltonian(drive)
    cos2 = np.cos(frame.theta) ** 2
    sin2 = np.sin(frame.theta) ** 2
    sigma_minus = np.array([[0.0, 1.0], [0.0, 0.0]], dtype=complex)

    zero = RateSet()
    base = build_liouvillian(drive, zero).matrix
    terms = [
        (base, lambda r: 1j * (r @ ham - ham @ r)),
    ]
    single = [
        (RateSet(gamma_0=1e6),
         lambda r: 1e6 * cos2 * sin2 * _direct_dissipator(sz_d, r)),
        (RateSet(gamma_minus=1e6),
         lambda r: 1e6 * sin2**2 * _direct_dissipator(sp_d, r)),
        (RateSet(gamma_plus=1e6),
         lambda r: 1e6 * cos2**2 * _direct_dissipator(sm_d, r)),
        (RateSet(gamma_1=1e6),
         lambda r: 1e6 * _direct_dissipator(sigma_minus, r)),
        (RateSet(gamma_phi=1e6),
         lambda r: 0.5e6 * _direct_dissipator(SIGMA_Z, r)),
    ]
    for rset, direct in single:
        terms.append((build_liouvillian(drive, rset).matrix - base, direct))
    # and the fully assembled generator against the summed right-hand side
    full = build_liouvillian(drive, rates).matrix

    def full_direct(r):
        out = 1j * (r @ ham - ham @ r)
        out += rates.gamma_0 * cos2 * sin2 * _direct_dissipator(sz_d, r)
        out += rates.gamma_minus * sin2**2 * _direct_dissipator(sp_d, r)
        out += rates.gamma_plus * cos2**2 * _direct_dissipator(sm_d, r)
        out += rates.gamma_1 * _direct_dissipator(sigma_minus, r)
        out += 0.5 * rates.gamma_phi * _direct_dissipator(SIGMA_Z, r)
        return out

    terms.append((full, full_direct))

    worst = 0.0
    for superop, direct in terms:
        scale = max(1.0, float(np.max(np.abs(superop))))
        for basis in _BASIS:
            lhs = (superop @ basis.reshape(4)).reshape(2, 2)
            rhs = direct(basis)
            worst = max(worst, float(np.max(np.abs(lhs - rhs))) / scale)
    return worst


def cptp_worst(n: int, seed: int) -> dict:
    """Random evolutions: raw (pre-cleanup) trace and Hermiticity drift,
    and the most negative eigenvalue seen."""
    rng = np.random.default_rng(seed)
    worst = {"trace": 0.0, "herm": 0.0, "eigmin": 0.0}
    for _ in range(n):
        drive = random_drive(rng)
        rates = random_rates(rng)
        gen = build_liouvillian(drive, rates).matrix
        rho0 = random_density(rng)
        gamma_max = max(rates.max_rate, 1e5)
        t = float(rng.uniform(0, 10.0 / gamma_max))
        raw = _propagate(gen, rho0.matrix.reshape(4), t).reshape(2, 2)
        worst["trace"] = max(worst["trace"], abs(float(np.trace(raw).real) - 1.0),
                             abs(float(np.trace(raw).imag)))
        worst["herm"] = max(worst["herm"],
                            float(np.max(np.abs(raw - raw.conj().T))))
        herm = 0.5 * (raw + raw.conj().T)
        herm = herm / np.trace(herm).real
        worst["eigmin"] = min(worst["eigmin"],
                              float(np.linalg.eigvalsh(herm).min()))
        evolve(rho0, build_liouvillian(drive, rates), t)  # must not raise
    return worst


def semigroup_worst(n: int, seed: int) -> float:
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(n):
        drive = random_drive(rng)
        rates = random_rates(rng)
        liouvillian = build_liouvillian(drive, rates)
        rho0 = random_density(rng)
        gamma_max = max(rates.max_rate, 1e5)
        t1 = float(rng.uniform(0, 5.0 / gamma_max))
        t2 = float(rng.uniform(0, 5.0 / gamma_max))
        stepped = evolve(evolve(rho0, liouvillian, t1), liouvillian, t2)
        direct = evolve(rho0, liouvillian, t1 + t2)
        worst = max(worst, trace_distance(stepped.matrix, direct.matrix))
    return worst


def detailed_balance_worst(n: int, seed: int) -> float:
    """Only gamma_+- active: steady dressed populations must satisfy
    p_e/p_g = (gamma_- sin^4 t)/(gamma_+ cos^4 t)."""
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(n):
        drive = Drive(omega_rabi=float(rng.uniform(1e6, 20e6)),
                      detuning=float(rng.uniform(-20e6, 20e6)))
        rates = RateSet(gamma_plus=float(rng.uniform(0.5e6, 5e6)),
                        gamma_minus=float(rng.uniform(0.1e6, 5e6)))
        frame = dressed_frame(drive)
        ground, excited = dressed_states(frame)
        rho = steady_state(build_liouvillian(drive, rates)).matrix
        p_g = float((ground.conj() @ rho @ ground).real)
        p_e = float((excited.conj() @ rho @ excited).real)
        sin4 = np.sin(frame.theta) ** 4
        cos4 = np.cos(frame.theta) ** 4
        expected = rates.gamma_minus * sin4 / (rates.gamma_plus * cos4)
        worst = max(worst, abs(p_e / p_g - expected) / expected)
    return worst


def resonant_rabi_worst(omega: float = 5e6, cycles: float = 10.0) -> float:
    drive = Drive(omega_rabi=omega, detuning=0.0)
    liouvillian = build_liouvillian(drive, RateSet())
    rho0 = DensityMatrix.ground()
    worst = 0.0
    for t in np.linspace(0.0, cycles / omega, 101):
        rho = evolve(rho0, liouvillian, float(t))
        z = float(np.trace(SIGMA_Z @ rho.matrix).real)
        worst = max(worst, abs(z + np.cos(2.0 * np.pi * omega * t)))
    return worst


def fitter_roundtrip_worst() -> dict:
    """Noiseless fitter round-trips; returns worst relative errors."""
    out = {}
    freq = np.linspace(4.45e9, 4.47e9, 801)
    truth = dict(center=4.4608e9, fwhm=0.64e6, amplitude=0.95, offset=0.013)
    spectrum = ConductanceSpectrum(freq, _lorentzian(freq, **truth),
                                   normalization="raw")
    fit = fit_lorentzian(spectrum, (4.452e9, 4.468e9))
    out["lorentzian"] = max(
        abs(fit.center - truth["center"]) / truth["center"],
        abs(fit.fwhm - truth["fwhm"]) / truth["fwhm"],
        abs(fit.amplitude - truth["amplitude"]) / truth["amplitude"],
        abs(fit.offset - truth["offset"]) / abs(truth["offset"]))

    model = LossModel()
    freq = np.linspace(4.3e9, 4.7e9, 200)
    fit_model = fit_loss_model(np.column_stack([freq, qubit_loss(model, freq)]))
    out["loss_model"] = max(
        abs(fit_model.q_internal - model.q_internal) / model.q_internal,
        abs(fit_model.gamma0 - model.gamma0) / model.gamma0,
        abs(fit_model.f_s - model.f_s) / model.f_s)

    amps = np.linspace(0.1, 1.0, 10)
    cal = fit_rabi_calibration(np.column_stack([amps, 10e6 * amps]))
    out["rabi_calibration"] = max(abs(cal.slope - 10e6) / 10e6,
                                  abs(cal.intercept) / 10e6)
    return out
