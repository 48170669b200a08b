"""Driven-dissipative two-level dynamics in the frame rotating with the drive.

Basis order is (|g>, |e>) and the measured sigma_z is -1 on |g>, +1 on |e>,
so undriven decay traces start at <sigma_z> = -1.  A drive of Rabi frequency
Omega detuned by Delta = f_drive - f_qubit dresses the qubit; transition and
dephasing rates in the dressed basis are sampled from the engineered phonon
loss spectrum at the carrier and the two Mollow sidebands f_drive +- Omega_R.

The master equation is

    drho/dt = i[rho, H] + gamma_0 cos^2(t) sin^2(t) D[sz~] rho
            + gamma_- sin^4(t) D[s+~] rho + gamma_+ cos^4(t) D[s-~] rho
            + gamma_1 D[s-] rho + (gamma_phi/2) D[sz] rho

with D[A] rho = A rho A^dag - {A^dag A, rho}/2 and t the mixing angle.  The
dressed eigenstates are |g~> = cos(t)|g> - sin(t)|e>, |e~> = sin(t)|g> +
cos(t)|e>, so the dressed z operator reads sz~ = sin(2t) sx + cos(2t) sz in
the measurement convention here and H = 2*pi*(Omega/2 sx - Delta/2 sz) =
2*pi*(Omega_R/2) sz~.  Everything is vectorized row-major as
(rho_gg, rho_ge, rho_eg, rho_ee) and propagated by exponentiating the 4x4
generator through its eigendecomposition.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np
from scipy.linalg import expm

from .constants import BOLTZMANN_K, PLANCK_H, TWO_PI
from .errors import NumericalError, SteadyStateError
from .saw import LossModel, qubit_loss

__all__ = [
    "SIGMA_X",
    "SIGMA_Y",
    "SIGMA_Z",
    "SIGMA_MINUS",
    "GAMMA0_POLICIES",
    "Drive",
    "DressedFrame",
    "RateSet",
    "DensityMatrix",
    "Liouvillian",
    "BlochVector",
    "EffectiveTemperature",
    "dressed_frame",
    "dressed_states",
    "hamiltonian",
    "sample_dressed_rates",
    "build_liouvillian",
    "evolve",
    "steady_state",
    "observables",
    "effective_temperature",
]

logger = logging.getLogger(__name__)

SIGMA_X = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
SIGMA_Y = np.array([[0.0, 1.0j], [-1.0j, 0.0]], dtype=complex)
SIGMA_Z = np.array([[-1.0, 0.0], [0.0, 1.0]], dtype=complex)
SIGMA_MINUS = np.array([[0.0, 1.0], [0.0, 0.0]], dtype=complex)
_IDENTITY = np.eye(2, dtype=complex)

GAMMA0_POLICIES = ("carrier", "zero", "explicit")

# condition-number ceiling for the eigenbasis exponential; above it the
# generator is treated as effectively non-diagonalizable.  Purely coherent
# generators have degenerate spectra and land well above this, so they
# take the series path; typical dissipative ones sit near 1.
_EIG_COND_LIMIT = 1e6
_DRIFT_LOG_THRESHOLD = 1e-8


@dataclass(frozen=True)
class Drive:
    """Constant rotating-frame drive.

    omega_rabi is the resonant Rabi frequency Omega (Hz, cycles), detuning
    is Delta = f_drive - f_qubit (Hz, signed).  f_drive is only needed when
    rates are sampled from a loss spectrum; t_drive is carried for
    tomography bookkeeping.
    """

    omega_rabi: float
    detuning: float
    f_drive: float = 0.0
    t_drive: float = 0.0

    def __post_init__(self) -> None:
        if not (self.omega_rabi >= 0 and math.isfinite(self.omega_rabi)):
            raise ValueError("omega_rabi must be finite and >= 0")
        if not math.isfinite(self.detuning):
            raise ValueError("detuning must be finite")
        if not (self.f_drive >= 0 and math.isfinite(self.f_drive)):
            raise ValueError("f_drive must be finite and >= 0")
        if not (self.t_drive >= 0 and math.isfinite(self.t_drive)):
            raise ValueError("t_drive must be finite and >= 0")


@dataclass(frozen=True)
class DressedFrame:
    """Mixing angle theta in [0, pi/2] and generalized Rabi frequency (Hz)."""

    theta: float
    omega_r: float

    def __post_init__(self) -> None:
        if not 0.0 <= self.theta <= math.pi / 2:
            raise ValueError("theta must lie in [0, pi/2]")
        if not self.omega_r >= 0:
            raise ValueError("omega_r must be >= 0")

    @property
    def sin2t(self) -> float:
        return math.sin(2.0 * self.theta)

    @property
    def cos2t(self) -> float:
        return math.cos(2.0 * self.theta)


@dataclass(frozen=True)
class RateSet:
    """Decay rates in 1/s.

    gamma_plus/gamma_minus drive dressed downward/upward transitions,
    gamma_0 is dressed dephasing; gamma_1 and gamma_phi act in the lab
    frame (energy decay and pure dephasing).
    """

    gamma_plus: float = 0.0
    gamma_minus: float = 0.0
    gamma_0: float = 0.0
    gamma_1: float = 0.0
    gamma_phi: float = 0.0

    def __post_init__(self) -> None:
        for name in ("gamma_plus", "gamma_minus", "gamma_0", "gamma_1",
                     "gamma_phi"):
            value = getattr(self, name)
            if not (value >= 0 and math.isfinite(value)):
                raise ValueError(f"{name} must be finite and >= 0")

    @property
    def max_rate(self) -> float:
        return max(self.gamma_plus, self.gamma_minus, self.gamma_0,
                   self.gamma_1, self.gamma_phi)


@dataclass(frozen=True)
class DensityMatrix:
    """Validated 2x2 state in the (|g>, |e>) basis."""

    matrix: np.ndarray

    def __post_init__(self) -> None:
        m = np.array(self.matrix, dtype=complex)
        if m.shape != (2, 2):
            raise ValueError("density matrix must be 2x2")
        if np.max(np.abs(m - m.conj().T)) > 1e-12:
            raise ValueError("density matrix must be Hermitian")
        if abs(np.trace(m) - 1.0) > 1e-12:
            raise ValueError("density matrix must have unit trace")
        if np.linalg.eigvalsh(m).min() < -1e-10:
            raise ValueError("density matrix must be positive semidefinite")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @classmethod
    def ground(cls) -> "DensityMatrix":
        return cls(np.diag([1.0, 0.0]).astype(complex))

    @classmethod
    def excited(cls) -> "DensityMatrix":
        return cls(np.diag([0.0, 1.0]).astype(complex))

    @classmethod
    def maximally_mixed(cls) -> "DensityMatrix":
        return cls(0.5 * np.eye(2, dtype=complex))

    @classmethod
    def pure(cls, ket) -> "DensityMatrix":
        v = np.asarray(ket, dtype=complex).reshape(2)
        n = np.linalg.norm(v)
        if n == 0:
            raise ValueError("ket must be nonzero")
        v = v / n
        return cls(np.outer(v, v.conj()))


@dataclass(frozen=True)
class Liouvillian:
    """4x4 generator on states vectorized as (rho_gg, rho_ge, rho_eg, rho_ee)."""

    matrix: np.ndarray

    def __post_init__(self) -> None:
        m = np.array(self.matrix, dtype=complex)
        if m.shape != (4, 4):
            raise ValueError("Liouvillian must be 4x4")
        scale = max(1.0, float(np.max(np.abs(m))))
        trace_row = np.array([1.0, 0.0, 0.0, 1.0]) @ m
        if np.max(np.abs(trace_row)) > 1e-12 * scale:
            raise ValueError("generator does not preserve trace")
        eigs = np.linalg.eigvals(m)
        radius = max(1.0, float(np.max(np.abs(eigs))))
        if np.max(eigs.real) > 1e-10 * radius:
            raise ValueError("generator has a growing mode")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @property
    def spectral_radius(self) -> float:
        return float(np.max(np.abs(np.linalg.eigvals(self.matrix))))


@dataclass(frozen=True)
class BlochVector:
    """Expectation values (<sigma_x>, <sigma_y>, <sigma_z>)."""

    x: float
    y: float
    z: float

    def __post_init__(self) -> None:
        if self.x**2 + self.y**2 + self.z**2 > 1.0 + 1e-9:
            raise ValueError("Bloch vector length exceeds 1")

    @property
    def length(self) -> float:
        return math.sqrt(self.x**2 + self.y**2 + self.z**2)


@dataclass(frozen=True)
class EffectiveTemperature:
    """Temperature in kelvin plus a physicality tag.

    status is "ok" for a finite positive temperature and
    "unphysical-population" when the dressed excited state is at least as
    populated as the dressed ground state (non-positive or inverted
    temperature).
    """

    kelvin: float
    status: str = "ok"


def dressed_frame(drive: Drive) -> DressedFrame:
    """Mixing angle and generalized Rabi frequency of the driven qubit.

    Omega_R = sqrt(Omega^2 + Delta^2); the branch 2*theta = atan2(Omega,
    -Delta) puts theta in [0, pi/2] with sin(2t) = Omega/Omega_R and
    cos(2t) = -Delta/Omega_R, so the dressed splitting is +Omega_R.  The
    undriven, resonant corner Omega = Delta = 0 maps to theta = 0.
    """
    omega_r = math.hypot(drive.omega_rabi, drive.detuning)
    if omega_r == 0.0:
        return DressedFrame(theta=0.0, omega_r=0.0)
    two_theta = math.atan2(drive.omega_rabi, -drive.detuning)
    return DressedFrame(theta=0.5 * two_theta, omega_r=omega_r)


def dressed_states(frame: DressedFrame) -> tuple[np.ndarray, np.ndarray]:
    """Kets (|g~>, |e~>) of the dressed basis as length-2 arrays."""
    c, s = math.cos(frame.theta), math.sin(frame.theta)
    ground = np.array([c, -s], dtype=complex)
    excited = np.array([s, c], dtype=complex)
    return ground, excited


def hamiltonian(drive: Drive) -> np.ndarray:
    """Rotating-frame Hamiltonian in angular units (rad/s).

    H = 2*pi*(Omega/2 sx - Delta/2 sz); equivalently (2*pi*Omega_R/2) sz~,
    which the dressed-state layout of :func:`dressed_states` diagonalizes.
    """
    return TWO_PI * (0.5 * drive.omega_rabi * SIGMA_X
                     - 0.5 * drive.detuning * SIGMA_Z)


def sample_dressed_rates(model: LossModel, drive: Drive,
                         gamma0_policy: str = "carrier",
                         gamma0_value: float | None = None) -> RateSet:
    """Sideband rates from the phonon loss spectrum.

    gamma_plus and gamma_minus sample the phonon-only loss at
    f_drive + Omega_R and f_drive - Omega_R.  The dressed dephasing rate
    gamma_0 follows the policy: "carrier" samples the spectrum at f_drive,
    "zero" disables it, "explicit" uses gamma0_value.  Lab-frame rates are
    returned as zero; callers overlay their own gamma_1/gamma_phi.
    """
    if gamma0_policy not in GAMMA0_POLICIES:
        raise ValueError(f"gamma0_policy must be one of {GAMMA0_POLICIES}")
    if gamma0_policy == "explicit":
        if gamma0_value is None or gamma0_value < 0:
            raise ValueError("explicit gamma0 policy needs gamma0_value >= 0")
    frame = dressed_frame(drive)
    if drive.f_drive <= frame.omega_r:
        raise ValueError("lower sideband frequency must be positive")
    g_plus = qubit_loss(model, drive.f_drive + frame.omega_r, phonon_only=True)
    g_minus = qubit_loss(model, drive.f_drive - frame.omega_r, phonon_only=True)
    if gamma0_policy == "carrier":
        g_zero = qubit_loss(model, drive.f_drive, phonon_only=True)
    elif gamma0_policy == "zero":
        g_zero = 0.0
    else:
        g_zero = float(gamma0_value)
    return RateSet(gamma_plus=g_plus, gamma_minus=g_minus, gamma_0=g_zero)


def _act_left(a: np.ndarray) -> np.ndarray:
    # vec(A rho) for row-major vec
    return np.kron(a, _IDENTITY)


def _act_right(a: np.ndarray) -> np.ndarray:
    # vec(rho A) for row-major vec
    return np.kron(_IDENTITY, a.T)


def _dissipator(a: np.ndarray) -> np.ndarray:
    """Superoperator of D[A] rho = A rho A^dag - {A^dag A, rho}/2."""
    ada = a.conj().T @ a
    return (np.kron(a, a.conj())
            - 0.5 * (_act_left(ada) + _act_right(ada)))


def _dressed_operators(frame: DressedFrame) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    ground, excited = dressed_states(frame)
    sz = np.outer(excited, excited.conj()) - np.outer(ground, ground.conj())
    sp = np.outer(excited, ground.conj())
    return sz, sp, sp.conj().T


def build_liouvillian(drive: Drive, rates: RateSet) -> Liouvillian:
    """Assemble the 4x4 generator of the dressed-bath master equation."""
    frame = dressed_frame(drive)
    ham = hamiltonian(drive)
    sz_d, sp_d, sm_d = _dressed_operators(frame)
    cos2 = math.cos(frame.theta) ** 2
    sin2 = math.sin(frame.theta) ** 2

    gen = 1j * (_act_right(ham) - _act_left(ham))
    gen += rates.gamma_0 * cos2 * sin2 * _dissipator(sz_d)
    gen += rates.gamma_minus * sin2**2 * _dissipator(sp_d)
    gen += rates.gamma_plus * cos2**2 * _dissipator(sm_d)
    gen += rates.gamma_1 * _dissipator(SIGMA_MINUS)
    gen += 0.5 * rates.gamma_phi * _dissipator(SIGMA_Z)
    return Liouvillian(gen)


def _propagate(gen: np.ndarray, state: np.ndarray, t: float) -> np.ndarray:
    """Apply e^(gen*t) to a vectorized state.

    Eigendecomposition V e^(Dt) V^-1 when the eigenbasis is well
    conditioned, otherwise a scaled power-series exponential; the two
    agree to 1e-9 wherever both are valid.
    """
    eigvals, vecs = np.linalg.eig(gen)
    if np.linalg.cond(vecs) <= _EIG_COND_LIMIT:
        return vecs @ (np.exp(eigvals * t) * np.linalg.solve(vecs, state))
    return expm(gen * t) @ state


def evolve(rho0: DensityMatrix, liouvillian: Liouvillian, t: float) -> DensityMatrix:
    """State at time t >= 0 under the generator, rho(t) = e^(Lt) rho(0).

    The raw propagated matrix is re-Hermitized and trace-renormalized;
    adjustments beyond 1e-8 are logged as numerical drift.
    """
    if t < 0:
        raise ValueError("evolution time must be >= 0")
    if t == 0:
        return rho0
    raw = _propagate(liouvillian.matrix, rho0.matrix.reshape(4), t).reshape(2, 2)
    herm = 0.5 * (raw + raw.conj().T)
    trace = float(np.trace(herm).real)
    if trace <= 0:
        raise NumericalError("propagated state lost its trace")
    drift = max(float(np.max(np.abs(raw - herm))), abs(trace - 1.0))
    if drift > _DRIFT_LOG_THRESHOLD:
        logger.warning("state drift %.3g after t = %.3g s exceeds %g",
                       drift, t, _DRIFT_LOG_THRESHOLD)
    out = herm / trace
    # clip the tiny negative eigenvalue roundoff leaves behind
    eigs, basis = np.linalg.eigh(out)
    if eigs.min() < 0:
        eigs = np.clip(eigs, 0.0, None)
        out = (basis * eigs) @ basis.conj().T
        out = out / float(np.trace(out).real)
    return DensityMatrix(out)


def steady_state(liouvillian: Liouvillian) -> DensityMatrix:
    """Unique fixed point of the generator.

    The kernel must be one-dimensional: exactly one eigenvalue below
    1e-6 of the spectral radius.  The kernel vector is normalized by its
    trace, Hermitized, and checked to satisfy ||L vec(rho)|| <= 1e-9
    times the spectral radius.
    """
    gen = liouvillian.matrix
    eigvals, vecs = np.linalg.eig(gen)
    radius = float(np.max(np.abs(eigvals)))
    if radius == 0.0:
        raise SteadyStateError("no unique steady state: zero generator")
    null = np.abs(eigvals) < 1e-6 * radius
    count = int(np.count_nonzero(null))
    if count != 1:
        raise SteadyStateError(
            f"no unique steady state: kernel dimension {count}")
    vec = vecs[:, int(np.argmax(null))]
    rho = vec.reshape(2, 2)
    trace = np.trace(rho)
    if abs(trace) < 1e-12 * np.linalg.norm(vec):
        raise SteadyStateError("steady-state candidate is traceless")
    rho = rho / trace
    rho = 0.5 * (rho + rho.conj().T)
    rho = rho / float(np.trace(rho).real)
    residual = float(np.linalg.norm(gen @ rho.reshape(4)))
    if residual > 1e-9 * radius:
        raise SteadyStateError(
            f"steady-state residual {residual:.3g} exceeds tolerance")
    eigs, basis = np.linalg.eigh(rho)
    if eigs.min() < 0:
        eigs = np.clip(eigs, 0.0, None)
        rho = (basis * eigs) @ basis.conj().T
        rho = rho / float(np.trace(rho).real)
    return DensityMatrix(rho)


def observables(rho: DensityMatrix,
                frame: DressedFrame) -> tuple[BlochVector, float, float]:
    """Bloch vector, purity Tr(rho^2), and the dressed <sz~>.

    <sz~> = sin(2t) <sx> + cos(2t) <sz> projects the Bloch vector onto the
    dressed quantization axis; it is the population imbalance
    p_e~ - p_g~ fed into the effective-temperature readout.
    """
    m = rho.matrix
    x = float(np.trace(SIGMA_X @ m).real)
    y = float(np.trace(SIGMA_Y @ m).real)
    z = float(np.trace(SIGMA_Z @ m).real)
    purity = float(np.trace(m @ m).real)
    sz_dressed = frame.sin2t * x + frame.cos2t * z
    return BlochVector(x, y, z), purity, sz_dressed


def effective_temperature(sigma_z_dressed: float,
                          omega_r: float) -> EffectiveTemperature:
    """Thermal readout of the dressed two-level system.

    T_eff = -h*omega_r / (2*k_B*atanh(<sz~>)) for a splitting of omega_r
    (Hz, cycles).  Equal populations give +infinity; a non-negative <sz~>
    is tagged "unphysical-population" (infinite or inverted temperature).
    """
    if not omega_r > 0:
        raise ValueError("omega_r must be positive")
    if abs(sigma_z_dressed) >= 1.0:
        raise ValueError("|sigma_z_dressed| must be < 1")
    if sigma_z_dressed == 0.0:
        return EffectiveTemperature(math.inf, "unphysical-population")
    kelvin = -PLANCK_H * omega_r / (2.0 * BOLTZMANN_K * math.atanh(sigma_z_dressed))
    status = "ok" if sigma_z_dressed < 0 else "unphysical-population"
    return EffectiveTemperature(kelvin, status)
