"""Data reductions for qubit tomography and drive calibration.

Converts measured Bloch components into valid density matrices,
compensates the deterministic tomography phase a detuned drive imprints,
maps drive amplitude to Rabi frequency, pulls oscillation frequencies out
of Rabi traces, and extracts pure dephasing from coherence times.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .constants import TWO_PI
from .errors import NumericalError
from .lindblad import SIGMA_X, SIGMA_Y, SIGMA_Z, DensityMatrix

__all__ = [
    "RabiCalibration",
    "CoherenceTimes",
    "density_from_bloch",
    "tomography_phase",
    "fit_rabi_calibration",
    "extract_rabi_frequency",
    "pure_dephasing",
]


@dataclass(frozen=True)
class RabiCalibration:
    """Linear amplitude-to-frequency map Omega(a) = slope*a + intercept.

    slope in Hz per drive-amplitude unit, intercept in Hz.  residual_norm
    is the fit residual norm relative to the data norm (0 for an exact
    line).
    """

    slope: float
    intercept: float
    residual_norm: float

    def __post_init__(self) -> None:
        if not self.slope > 0:
            raise ValueError("calibration slope must be positive")
        if self.residual_norm < 0:
            raise ValueError("residual_norm must be >= 0")

    def predict(self, amplitude: float) -> float:
        """Rabi frequency (Hz) at the given drive amplitude."""
        return self.slope * amplitude + self.intercept


@dataclass(frozen=True)
class CoherenceTimes:
    """Energy relaxation time t1 and Ramsey decay time t2_star, seconds."""

    t1: float
    t2_star: float

    def __post_init__(self) -> None:
        if not self.t1 > 0:
            raise ValueError("t1 must be positive")
        if not self.t2_star > 0:
            raise ValueError("t2_star must be positive")
        # equality is the lifetime limit; tiny excess is measurement noise
        if self.t2_star > 2.0 * self.t1 + 1e-12:
            raise ValueError("t2_star cannot exceed 2*t1")


def density_from_bloch(x: float, y: float, z: float) -> DensityMatrix:
    """State reconstruction rho = (1 + x*sx + y*sy + z*sz)/2.

    A vector longer than 1 (readout miscalibration) is rescaled uniformly
    to unit length, preserving its direction, before building rho.
    """
    if not all(math.isfinite(v) for v in (x, y, z)):
        raise ValueError("Bloch components must be finite")
    length = math.sqrt(x * x + y * y + z * z)
    if length > 1.0:
        x, y, z = x / length, y / length, z / length
    rho = 0.5 * (np.eye(2, dtype=complex) + x * SIGMA_X + y * SIGMA_Y + z * SIGMA_Z)
    return DensityMatrix(rho)


def tomography_phase(detuning: float, t_drive: float) -> float:
    """Phase 2*pi*detuning*t_drive accumulated under a detuned drive.

    Reduced modulo a full turn into [0, 2*pi); tomography pulses are
    rotated by this much before projective readout.
    """
    if t_drive < 0:
        raise ValueError("t_drive must be >= 0")
    turns = detuning * t_drive
    phase = (turns % 1.0) * TWO_PI
    return phase if phase < TWO_PI else 0.0


def fit_rabi_calibration(points) -> RabiCalibration:
    """Least-squares line through (drive amplitude, Rabi frequency) pairs."""
    arr = np.asarray(points, dtype=float)
    if arr.ndim != 2 or arr.shape[1] != 2:
        raise ValueError("points must be an (n, 2) array of (amplitude, frequency)")
    if arr.shape[0] < 2 or not np.all(np.isfinite(arr)):
        raise ValueError("need at least 2 finite calibration points")
    amps = arr[:, 0]
    freqs = arr[:, 1]
    if np.unique(amps).size < 2:
        raise ValueError("under-determined calibration: all amplitudes equal")
    slope, intercept = np.polyfit(amps, freqs, 1)
    residual = np.linalg.norm(slope * amps + intercept - freqs)
    scale = max(float(np.linalg.norm(freqs)), 1e-300)
    return RabiCalibration(slope=float(slope), intercept=float(intercept),
                           residual_norm=float(residual / scale))


def extract_rabi_frequency(trace) -> float:
    """Dominant oscillation frequency (Hz) of a (t, p_excited) trace.

    Needs at least 8 uniformly spaced samples.  The mean-subtracted,
    Hann-windowed trace is Fourier transformed; the tallest nonzero bin
    is refined on an 8x zero-padded spectrum by parabolic interpolation.
    A spectrum whose peak is not at least 3x its median is rejected as
    featureless.
    """
    arr = np.asarray(trace, dtype=float)
    if arr.ndim != 2 or arr.shape[1] != 2:
        raise ValueError("trace must be an (n, 2) array of (time, population)")
    n = arr.shape[0]
    if n < 8 or not np.all(np.isfinite(arr)):
        raise ValueError("need at least 8 finite samples")
    t = arr[:, 0]
    steps = np.diff(t)
    dt = steps.mean()
    if dt <= 0 or np.max(np.abs(steps - dt)) > 1e-6 * dt:
        raise ValueError("time samples must be uniformly increasing")

    signal = (arr[:, 1] - arr[:, 1].mean()) * np.hanning(n)
    magnitude = np.abs(np.fft.rfft(signal))
    magnitude[0] = 0.0
    peak = int(np.argmax(magnitude))
    median = float(np.median(magnitude[1:]))
    floor = 1e-12 * max(float(np.linalg.norm(signal)), 1.0)
    if peak == 0 or magnitude[peak] < max(3.0 * median, floor):
        raise NumericalError("no oscillation detected")

    # refine on a zero-padded spectrum; the raw bin only locates the peak
    pad = 8 * n
    fine = np.abs(np.fft.rfft(signal, n=pad))
    fine[0] = 0.0
    peak = int(np.argmax(fine))
    df = 1.0 / (pad * dt)
    shift = 0.0
    if 1 <= peak < fine.size - 1:
        left, mid, right = fine[peak - 1 : peak + 2]
        denom = left - 2.0 * mid + right
        if denom != 0.0:
            shift = float(np.clip(0.5 * (left - right) / denom, -0.5, 0.5))
    return (peak + shift) * df


def pure_dephasing(times: CoherenceTimes) -> float:
    """Pure dephasing rate 1/t2_star - 1/(2*t1), clipped at zero (1/s)."""
    rate = 1.0 / times.t2_star - 0.5 / times.t1
    return max(rate, 0.0)
