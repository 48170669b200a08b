"""Coupling-of-modes model of a two-port SAW resonator.

A transducer sits between two Bragg mirrors on a piezoelectric surface.
This module computes the mirror reflection spectrum from the uniform
grating closed form, the transducer's sinc^2 radiation conductance, and
the conductance of the full mirror-gap-IDT-gap-mirror cascade, whose
confined mode shows up as a narrow peak inside the mirror stopband.  It
also carries the phenomenological qubit loss model: an internal-Q floor
plus the phonon emission lobe shaped by the same sinc^2 response.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import least_squares

from .constants import TWO_PI
from .errors import DegenerateCascadeError, FitConvergenceError, NumericalError

__all__ = [
    "SawGeometry",
    "ConductanceSpectrum",
    "PMatrix",
    "LorentzianFit",
    "LossModel",
    "mirror_reflection",
    "mirror_transmission",
    "idt_conductance",
    "mirror_pmatrix",
    "idt_pmatrix",
    "gap_pmatrix",
    "cascaded_conductance",
    "fit_lorentzian",
    "qubit_loss",
    "fit_loss_model",
]


@dataclass(frozen=True)
class SawGeometry:
    """Physical layout of the resonator. Lengths in m, velocity in m/s.

    ``eta`` is the amplitude propagation loss in Np/m.  ``r_idt`` and
    ``r_mirror`` are the per-strip reflectivities; the imaginary default
    encodes the quarter-wave phase of reflection off a shorted strip.
    ``r_idt`` is stored for completeness but the transducer is treated
    as reflectionless (its response is the bare sinc^2 conductance).
    """

    lambda_idt: float = 800e-9
    lambda_mirror: float = 816e-9
    n_pairs: int = 16
    overlap_w: float = 35e-6
    l_mirror: float = 240.72e-6
    l_idt: float = 12e-6
    v_sound: float = 3638.0
    eta: float = 500.0
    r_idt: complex = -0.005j
    r_mirror: complex = -0.005j

    def __post_init__(self) -> None:
        for name in ("lambda_idt", "lambda_mirror", "overlap_w", "l_mirror",
                     "l_idt", "v_sound"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive")
        if not (isinstance(self.n_pairs, int) and self.n_pairs >= 1):
            raise ValueError("n_pairs must be a positive integer")
        if self.eta < 0:
            raise ValueError("eta must be non-negative")
        for name in ("r_idt", "r_mirror"):
            if not abs(getattr(self, name)) < 1.0:
                raise ValueError(f"|{name}| must be < 1")

    @property
    def bragg_frequency(self) -> float:
        """Mirror stopband center v/lambda_mirror in Hz."""
        return self.v_sound / self.lambda_mirror

    @property
    def idt_frequency(self) -> float:
        """Transducer conductance peak v/lambda_idt in Hz."""
        return self.v_sound / self.lambda_idt

    @property
    def mirror_coupling(self) -> float:
        """Grating coupling kappa = |r_mirror| per half wavelength, 1/m."""
        return abs(self.r_mirror) / (self.lambda_mirror / 2.0)

    @property
    def stopband_half_width(self) -> float:
        """Half width kappa*v/(2*pi) of the mirror stopband in Hz."""
        return self.mirror_coupling * self.v_sound / TWO_PI

    @property
    def mirror_strips(self) -> int:
        """Number of reflective strips, two per mirror wavelength."""
        return round(2.0 * self.l_mirror / self.lambda_mirror)


@dataclass(frozen=True)
class LossModel:
    """Qubit energy decay versus frequency: internal floor plus phonon lobe.

    gamma_q(f) = f/q_internal + gamma0 * sinc^2(pi*n_pairs*(f - f_s)/f_s)
    with the unnormalized sinc.  Rates in 1/s, frequencies in Hz.
    """

    q_internal: float = 1.67e3
    gamma0: float = 0.252e9
    n_pairs: int = 16
    f_s: float = 4.504e9

    def __post_init__(self) -> None:
        if not self.q_internal > 0:
            raise ValueError("q_internal must be positive")
        if self.gamma0 < 0:
            raise ValueError("gamma0 must be non-negative")
        if not (isinstance(self.n_pairs, int) and self.n_pairs >= 1):
            raise ValueError("n_pairs must be a positive integer")
        if not self.f_s > 0:
            raise ValueError("f_s must be positive")


@dataclass(frozen=True)
class ConductanceSpectrum:
    """Real conductance sampled on an ascending frequency grid."""

    frequencies: np.ndarray
    values: np.ndarray
    normalization: str = "peak-unity"

    def __post_init__(self) -> None:
        freq = np.array(self.frequencies, dtype=float)
        vals = np.array(self.values, dtype=float)
        if freq.ndim != 1 or freq.shape != vals.shape:
            raise ValueError("frequencies and values must be matching 1-d arrays")
        if freq.size == 0:
            raise ValueError("spectrum must contain at least one sample")
        if np.any(np.diff(freq) <= 0):
            raise ValueError("frequencies must be strictly increasing")
        if np.any(vals < 0):
            raise ValueError("conductance values must be non-negative")
        if self.normalization not in ("peak-unity", "raw"):
            raise ValueError("normalization must be 'peak-unity' or 'raw'")
        freq.setflags(write=False)
        vals.setflags(write=False)
        object.__setattr__(self, "frequencies", freq)
        object.__setattr__(self, "values", vals)


@dataclass(frozen=True)
class PMatrix:
    """Three-port scattering element: two acoustic ports and one electrical.

    p11..p22 relate incident and outgoing acoustic amplitudes, p13/p23
    couple the drive voltage to the launched waves, and p33 is the
    electrical admittance in normalized units.  The current pickup obeys
    reciprocity p31 = -2*p13, p32 = -2*p23 and is left implicit.
    """

    p11: complex
    p12: complex
    p21: complex
    p22: complex
    p13: complex = 0j
    p23: complex = 0j
    p33: complex = 0j

    def __post_init__(self) -> None:
        scale = max(1.0, abs(self.p12))
        if abs(self.p12 - self.p21) > 1e-12 * scale:
            raise ValueError("acoustic reciprocity requires p12 == p21")
        if abs(self.p11) ** 2 + abs(self.p21) ** 2 > 1.0 + 1e-9:
            raise ValueError("acoustic passivity requires |p11|^2 + |p21|^2 <= 1")


@dataclass(frozen=True)
class LorentzianFit:
    """Least-squares Lorentzian peak parameters."""

    center: float
    fwhm: float
    amplitude: float
    offset: float
    residual_norm: float
    converged: bool = True

    def __post_init__(self) -> None:
        if not self.fwhm > 0:
            raise ValueError("fwhm must be positive")
        if not self.amplitude > 0:
            raise ValueError("amplitude must be positive")


def _as_frequency_array(f) -> tuple[np.ndarray, bool]:
    arr = np.asarray(f, dtype=float)
    if np.any(arr <= 0) or not np.all(np.isfinite(arr)):
        raise ValueError("frequencies must be positive and finite")
    return arr, arr.ndim == 0


def _grating_response(geom: SawGeometry, f: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Reflection and transmission of the uniform grating, phase factor aside.

    Closed form for coupled counter-propagating envelopes with detuning
    delta = 2*pi*(f - f_B)/v - i*eta and coupling kappa:

        Gamma = kappa*sinh(sL) / (s*cosh(sL) + i*delta*sinh(sL))
        T     = s / (s*cosh(sL) + i*delta*sinh(sL)),   s^2 = kappa^2 - delta^2

    Both are even in s, so the branch of the square root is irrelevant.
    The tanh rewrite keeps sinh/cosh from overflowing at large |Re(sL)|.
    """
    delta = TWO_PI * (f - geom.bragg_frequency) / geom.v_sound - 1j * geom.eta
    kappa = geom.mirror_coupling
    length = geom.l_mirror
    if kappa == 0.0:
        # transparent grating: pure envelope propagation
        return np.zeros_like(delta), np.exp(-1j * delta * length)
    s = np.sqrt(kappa**2 - delta**2 + 0j)
    sl = s * length
    th = np.tanh(sl)
    with np.errstate(invalid="ignore", divide="ignore", over="ignore"):
        refl = kappa * th / (s + 1j * delta * th)
        tran = (s / np.cosh(sl)) / (s + 1j * delta * th)
    small = np.abs(sl) < 1e-6
    if np.any(small):
        # s -> 0 limit (band edges of a lossless grating): tanh(sL)/sL -> 1
        refl_limit = kappa * length / (1.0 + 1j * delta * length)
        tran_limit = 1.0 / (1.0 + 1j * delta * length)
        refl = np.where(small, refl_limit, refl)
        tran = np.where(small, tran_limit, tran)
    return refl, tran


def _strip_phase(reflectivity: complex) -> complex:
    # unit phase factor of the per-strip reflectivity; transparent -> 1
    mag = abs(reflectivity)
    return reflectivity / mag if mag > 0 else 1.0 + 0j


def mirror_reflection(geom: SawGeometry, f):
    """Complex reflection coefficient of one Bragg mirror at frequency f (Hz).

    Accepts a scalar or array; |Gamma| <= 1 with equality never reached for
    finite gratings.  At the Bragg frequency of a lossless grating
    |Gamma| = tanh(kappa*L).
    """
    arr, scalar = _as_frequency_array(f)
    refl, _ = _grating_response(geom, arr)
    out = _strip_phase(geom.r_mirror) * refl
    return out.item() if scalar else out


def mirror_transmission(geom: SawGeometry, f):
    """Complex transmission coefficient of one Bragg mirror at f (Hz)."""
    arr, scalar = _as_frequency_array(f)
    _, tran = _grating_response(geom, arr)
    return tran.item() if scalar else tran


def idt_conductance(geom: SawGeometry, f):
    """Peak-normalized radiation conductance sinc^2(pi*N_p*(f-f0)/f0).

    f0 = v/lambda_idt; the sinc is the unnormalized sin(x)/x.  Mirrors are
    ignored here; see :func:`cascaded_conductance` for the loaded response.
    """
    arr, scalar = _as_frequency_array(f)
    f0 = geom.idt_frequency
    out = np.sinc(geom.n_pairs * (arr - f0) / f0) ** 2
    return out.item() if scalar else out


def mirror_pmatrix(geom: SawGeometry, f: float) -> PMatrix:
    """Acoustic two-port of one mirror (no electrical coupling)."""
    gamma = mirror_reflection(geom, f)
    tran = mirror_transmission(geom, f)
    return PMatrix(p11=gamma, p12=tran, p21=tran, p22=gamma)


def gap_pmatrix(geom: SawGeometry, f: float, length: float) -> PMatrix:
    """Lossy delay line of the given length: phase 2*pi*f*d/v, decay e^(-eta*d)."""
    if length < 0:
        raise ValueError("gap length must be non-negative")
    beta = TWO_PI * f / geom.v_sound
    tran = np.exp(-(1j * beta + geom.eta) * length)
    return PMatrix(p11=0j, p12=tran, p21=tran, p22=0j)


def idt_pmatrix(geom: SawGeometry, f: float, conductance_scale: float = 1.0) -> PMatrix:
    """Reflectionless transducer with sinc^2 conductance.

    For a lossless substrate |p13|^2 + |p23|^2 = Re(p33): a free
    transducer radiates exactly the power it draws.  Emission is
    referenced to the element midpoint, hence the half-length propagation
    factor; with eta > 0 the port amplitudes are correspondingly smaller.
    """
    g_a = idt_conductance(geom, f) * conductance_scale
    beta = TWO_PI * f / geom.v_sound
    prop = np.exp(-(1j * beta + geom.eta) * geom.l_idt)
    half = np.exp(-(1j * beta + geom.eta) * geom.l_idt / 2.0)
    mu = 1j * np.sqrt(g_a / 2.0) * half
    return PMatrix(p11=0j, p12=prop, p21=prop, p22=0j, p13=mu, p23=mu, p33=g_a + 0j)


def cascaded_conductance(
    geom: SawGeometry,
    frequencies,
    gap: float | None = None,
    normalization: str = "peak-unity",
    conductance_scale: float = 1.0,
) -> ConductanceSpectrum:
    """Electrical conductance of the mirror-gap-IDT-gap-mirror cascade.

    Each mirror reflection, as seen from the transducer edge, picks up the
    round-trip gap propagation; the returning waves are retransduced with
    the reciprocity pickup p31 = -2*p13.  Solving the two-bounce linear
    system for the outgoing amplitudes gives the loaded admittance

        Y = p33 - 2*mu*(G_L*b1 + G_R*b2),   b_i = mu*(1 + tau*G_j)/D,
        D = 1 - tau^2*G_L*G_R,

    whose real part is returned.  With transparent mirrors this reduces
    exactly to the bare sinc^2 conductance.

    gap defaults to lambda_idt/2 on each side.  normalization is
    "peak-unity" (divide by the grid maximum) or "raw"; conductance_scale
    multiplies the raw transducer conductance before cascading.
    """
    arr, _ = _as_frequency_array(frequencies)
    if arr.ndim != 1 or arr.size == 0:
        raise ValueError("frequencies must be a non-empty 1-d array")
    if np.any(np.diff(arr) <= 0):
        raise ValueError("frequencies must be strictly increasing")
    if normalization not in ("peak-unity", "raw"):
        raise ValueError("normalization must be 'peak-unity' or 'raw'")
    d = geom.lambda_idt / 2.0 if gap is None else float(gap)
    if d < 0:
        raise ValueError("gap length must be non-negative")

    refl, _ = _grating_response(geom, arr)
    gamma_m = _strip_phase(geom.r_mirror) * refl
    beta = TWO_PI * arr / geom.v_sound
    t_gap = np.exp(-(1j * beta + geom.eta) * d)
    gamma_l = gamma_r = t_gap**2 * gamma_m

    g_a = idt_conductance(geom, arr) * conductance_scale
    tau = np.exp(-(1j * beta + geom.eta) * geom.l_idt)
    mu = 1j * np.sqrt(g_a / 2.0) * np.exp(-(1j * beta + geom.eta) * geom.l_idt / 2.0)

    den = 1.0 - tau**2 * gamma_l * gamma_r
    bad = np.abs(den) < 1e-14
    if np.any(bad):
        f_bad = arr[bad][0]
        raise DegenerateCascadeError(
            f"cascade round trip is numerically singular at {f_bad:.9g} Hz"
        )
    b1 = mu * (1.0 + tau * gamma_r) / den
    b2 = mu * (1.0 + tau * gamma_l) / den
    y = g_a - 2.0 * mu * (gamma_l * b1 + gamma_r * b2)

    vals = np.real(y)
    floor = -1e-9 * max(np.max(np.abs(vals)), 1e-300)
    if np.any(vals < floor):
        raise NumericalError("cascade produced a negative conductance")
    vals = np.maximum(vals, 0.0)
    if normalization == "peak-unity":
        peak = vals.max()
        if peak <= 0:
            raise NumericalError("cannot peak-normalize an all-zero spectrum")
        vals = vals / peak
    return ConductanceSpectrum(arr, vals, normalization)


def _lorentzian(f, center, fwhm, amplitude, offset):
    half = 0.5 * fwhm
    return offset + amplitude * half**2 / ((f - center) ** 2 + half**2)


def fit_lorentzian(spectrum: ConductanceSpectrum, window: tuple[float, float],
                   max_nfev: int = 2000) -> LorentzianFit:
    """Fit offset + amplitude*(w/2)^2 / ((f-c)^2 + (w/2)^2) inside a window.

    The window must contain at least five samples and an interior maximum.
    If the iteration budget runs out the best parameters so far are
    returned with ``converged=False``.
    """
    lo, hi = window
    if not lo < hi:
        raise ValueError("window must satisfy lo < hi")
    mask = (spectrum.frequencies >= lo) & (spectrum.frequencies <= hi)
    x = spectrum.frequencies[mask]
    y = spectrum.values[mask]
    if x.size < 5:
        raise ValueError("window must contain at least 5 samples")
    imax = int(np.argmax(y))
    if imax == 0 or imax == x.size - 1:
        raise NumericalError("no interior maximum in window")

    span = hi - lo
    offset0 = float(y.min())
    amp0 = max(float(y[imax] - offset0), 1e-12 * max(abs(offset0), 1.0))
    half_level = offset0 + 0.5 * amp0
    above = y >= half_level
    left = imax
    while left > 0 and above[left - 1]:
        left -= 1
    right = imax
    while right < x.size - 1 and above[right + 1]:
        right += 1
    fwhm0 = x[right] - x[left] if right > left else span / 5.0

    p0 = np.array([x[imax], fwhm0, amp0, offset0])
    lower = [lo - span, 1e-9 * span, 1e-12 * amp0, -np.inf]
    upper = [hi + span, 10.0 * span, np.inf, np.inf]
    p0 = np.clip(p0, lower, upper)

    def residuals(p):
        return _lorentzian(x, *p) - y

    result = least_squares(residuals, p0, bounds=(lower, upper), max_nfev=max_nfev)
    return LorentzianFit(
        center=float(result.x[0]),
        fwhm=float(result.x[1]),
        amplitude=float(result.x[2]),
        offset=float(result.x[3]),
        residual_norm=float(np.linalg.norm(result.fun)),
        converged=result.status > 0,
    )


def qubit_loss(model: LossModel, f_q, phonon_only: bool = False):
    """Qubit energy decay rate (1/s) at qubit frequency f_q (Hz).

    phonon_only drops the internal f/Q floor and returns just the phonon
    emission lobe, which is what the dressed-rate sampling uses.
    """
    arr, scalar = _as_frequency_array(f_q)
    phonon = model.gamma0 * np.sinc(model.n_pairs * (arr - model.f_s) / model.f_s) ** 2
    out = phonon if phonon_only else arr / model.q_internal + phonon
    return out.item() if scalar else out


def fit_loss_model(samples, n_pairs: int = 16, max_nfev: int = 5000) -> LossModel:
    """Recover (q_internal, gamma0, f_s) from (frequency, rate) samples.

    n_pairs is held fixed.  Starting values: f_s at the largest observed
    rate, gamma0 from the peak height, q_internal from the far-detuned
    floor.  Raises if the samples cannot determine the parameters or the
    fit does not converge.
    """
    arr = np.asarray(samples, dtype=float)
    if arr.ndim != 2 or arr.shape[1] != 2:
        raise ValueError("samples must be an (n, 2) array of (frequency, rate)")
    if arr.shape[0] < 4:
        raise ValueError("need at least 4 samples")
    f = arr[:, 0]
    g = arr[:, 1]
    if np.any(f <= 0) or np.any(g < 0) or not np.all(np.isfinite(arr)):
        raise ValueError("samples must be finite with positive frequencies")
    if np.ptp(g) == 0.0:
        raise NumericalError("under-determined fit: all rates are equal")

    fs0 = float(f[np.argmax(g)])
    floor = float(max(g.min(), 1e-300))
    gamma00 = float(max(g.max() - g.min(), 1e-300))
    qi0 = float(f[np.argmin(g)] / floor)

    def residuals(p):
        qi, g0, fs = p
        return f / qi + g0 * np.sinc(n_pairs * (f - fs) / fs) ** 2 - g

    lower = [1.0, 0.0, 0.5 * f.min()]
    upper = [np.inf, np.inf, 2.0 * f.max()]
    p0 = np.clip([qi0, gamma00, fs0], lower, upper)
    result = least_squares(residuals, p0, bounds=(lower, upper), max_nfev=max_nfev)
    if result.status <= 0:
        raise FitConvergenceError("loss model fit exhausted its iteration budget")
    qi, g0, fs = result.x
    return LossModel(q_internal=float(qi), gamma0=float(g0),
                     n_pairs=n_pairs, f_s=float(fs))
