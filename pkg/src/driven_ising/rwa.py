"""Rotating-wave effective theory around the m-photon resonance.

In the frame rotating with ``alpha_m(t) = m omega t / 4 + (g1 / omega) sin(omega t)``
the time-averaged Hamiltonian is an anisotropic XY chain in a transverse
field ``delta = g0 - m omega / 4`` with couplings

    J_z = J/2 [1 + (-1)^m J_m(4 g1 / omega)],  J_y = J/2 [1 - (-1)^m J_m(4 g1 / omega)].

Its single-pair spectrum gives the quasienergies of the driven chain, and
the rotation back to the laboratory frame gives closed-form Floquet modes.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .model import BdgMatrix, ModelParams, NambuSpinor
from .specfun import bessel_j

__all__ = [
    "DEFAULT_PHASE_TOL",
    "DEFAULT_VALIDITY_THRESHOLD",
    "Branch",
    "PhaseLabel",
    "EffectiveCouplings",
    "FloquetModeParams",
    "effective_couplings",
    "effective_bdg_hamiltonian",
    "fold",
    "quasienergy_dispersion",
    "quasienergy_branches",
    "bogoliubov_angle",
    "critical_momentum",
    "rwa_validity",
    "classify_phase",
    "floquet_mode_params",
    "floquet_mode",
    "floquet_mode_components",
]

DEFAULT_PHASE_TOL = 1e-6
DEFAULT_VALIDITY_THRESHOLD = 0.1


class Branch(str, enum.Enum):
    PLUS = "Plus"
    MINUS = "Minus"

    @property
    def sign(self) -> int:
        return 1 if self is Branch.PLUS else -1


class PhaseLabel(str, enum.Enum):
    PARAMAGNETIC = "Paramagnetic"
    FERRO_Z = "FerroZ"
    FERRO_Y = "FerroY"
    ISING_CRITICAL = "IsingCritical"
    ANISOTROPIC_CRITICAL = "AnisotropicCritical"
    OUTSIDE_RWA_VALIDITY = "OutsideRwaValidity"

    @property
    def code(self) -> int:
        """Small integer used when a label has to live in a numeric table."""
        return list(PhaseLabel).index(self)


@dataclass(frozen=True)
class EffectiveCouplings:
    jz: float
    jy: float
    detuning: float
    bessel_factor: float


@dataclass(frozen=True)
class FloquetModeParams:
    phi: float
    branch: Branch
    quasienergy: float


def _parity(m: int) -> float:
    return -1.0 if m % 2 else 1.0


def _bessel_factor(params: ModelParams) -> float:
    return bessel_j(params.m, 4.0 * params.g1 / params.omega)


def effective_couplings(params: ModelParams) -> EffectiveCouplings:
    b = _bessel_factor(params)
    s = _parity(params.m) * b
    half = 0.5 * params.j
    return EffectiveCouplings(half * (1.0 + s), half * (1.0 - s), params.detuning, b)


def effective_bdg_hamiltonian(params: ModelParams, k: float) -> BdgMatrix:
    """Time-independent rotating-frame BdG matrix of one momentum pair."""
    delta = params.detuning
    omega_k = 2.0 * params.j * math.cos(k)
    off = _parity(params.m) * 2.0 * params.j * math.sin(k) * _bessel_factor(params)
    return BdgMatrix(2.0 * delta - 2.0 * omega_k, off, off, -2.0 * delta)


def fold(x, omega: float = 1.0):
    """Map energies into the zone ``[-omega/2, omega/2)``."""
    x = np.asarray(x, dtype=float)
    out = x - omega * np.floor(x / omega + 0.5)
    # rounding can land exactly on the open end
    out = np.where(out >= 0.5 * omega, out - omega, out)
    out = np.where(out < -0.5 * omega, out + omega, out)
    return float(out) if out.ndim == 0 else out


def _scalar_or_array(a):
    return float(a) if np.ndim(a) == 0 else a


def quasienergy_dispersion(params: ModelParams, k, *, bessel_factor: float | None = None):
    """``2 sqrt((delta - J cos k)^2 + (J J_m sin k)^2)``, the RWA pair gap over two."""
    b = _bessel_factor(params) if bessel_factor is None else bessel_factor
    k = np.asarray(k, dtype=float)
    out = 2.0 * np.hypot(params.detuning - params.j * np.cos(k), params.j * b * np.sin(k))
    return _scalar_or_array(out)


def quasienergy_branches(params: ModelParams, k, *, folded: bool = True):
    """Quasienergies ``-omega_k +- eps_{k,m} + m omega / 2``, folded by default."""
    k = np.asarray(k, dtype=float)
    eps = quasienergy_dispersion(params, k)
    centre = -2.0 * params.j * np.cos(k) + 0.5 * params.m * params.omega
    plus, minus = centre + eps, centre - eps
    if folded:
        return fold(plus, params.omega), fold(minus, params.omega)
    return _scalar_or_array(plus), _scalar_or_array(minus)


def bogoliubov_angle(params: ModelParams, k, *, bessel_factor: float | None = None):
    """Rotation angle of the RWA eigenvectors; ``2 phi`` is taken with atan2."""
    b = _bessel_factor(params) if bessel_factor is None else bessel_factor
    k = np.asarray(k, dtype=float)
    # sin(pi) is 1.2e-16 in floating point; the pairing vanishes exactly there
    sin_k = np.where(k == math.pi, 0.0, np.sin(k))
    num = -_parity(params.m) * 2.0 * params.j * sin_k * b
    den = 2.0 * params.detuning - 2.0 * params.j * np.cos(k)
    # + 0.0 turns a signed zero into +0 so that k = 0 is not branch dependent
    return _scalar_or_array(0.5 * np.arctan2(num + 0.0, den))


def critical_momentum(params: ModelParams) -> float | None:
    """Momentum where the RWA gap would close if ``J_m`` vanished.

    This is where every RWA integrand has its sharpest feature; it exists
    only inside the ordered region ``|delta| < J``.
    """
    ratio = params.detuning / params.j
    if abs(ratio) >= 1.0:
        return None
    return math.acos(ratio)


def rwa_validity(params: ModelParams, threshold: float = DEFAULT_VALIDITY_THRESHOLD):
    """Return ``(ratio, valid)`` with ``ratio = max(|delta|, J |J_m|) / omega``."""
    ratio = max(abs(params.detuning), params.j * abs(_bessel_factor(params))) / params.omega
    return ratio, ratio <= threshold


def classify_phase(
    params: ModelParams,
    tol: float = DEFAULT_PHASE_TOL,
    validity_threshold: float = DEFAULT_VALIDITY_THRESHOLD,
) -> PhaseLabel:
    """Phase of the effective XY chain at ``params``.

    ``tol`` is relative to ``J`` for the Ising lines ``|delta| = J`` and
    absolute for the Bessel factor on the anisotropic lines.
    """
    if not rwa_validity(params, validity_threshold)[1]:
        return PhaseLabel.OUTSIDE_RWA_VALIDITY
    delta = abs(params.detuning)
    if abs(delta - params.j) <= tol * params.j:
        return PhaseLabel.ISING_CRITICAL
    if delta > params.j:
        return PhaseLabel.PARAMAGNETIC
    s = _parity(params.m) * _bessel_factor(params)
    if abs(s) <= tol:
        return PhaseLabel.ANISOTROPIC_CRITICAL
    return PhaseLabel.FERRO_Z if s > 0.0 else PhaseLabel.FERRO_Y


def floquet_mode_params(params: ModelParams, k: float, branch: Branch) -> FloquetModeParams:
    plus, minus = quasienergy_branches(params, k)
    eps = plus if Branch(branch) is Branch.PLUS else minus
    return FloquetModeParams(float(bogoliubov_angle(params, k)), Branch(branch), eps)


def _frame_phases(params: ModelParams, t):
    t = np.asarray(t, dtype=float)
    two_alpha = 0.5 * params.m * params.omega * t + 2.0 * params.g1 / params.omega * np.sin(
        params.omega * t
    )
    half_m = 0.5 * params.m * params.omega * t
    return np.exp(-1j * (two_alpha - half_m)), np.exp(1j * (two_alpha + half_m))


def floquet_mode_components(params: ModelParams, k, branch: Branch, t, *, phi=None):
    """Arrays ``(u, v)`` of the T-periodic Floquet mode; broadcasts over ``k`` and ``t``."""
    if phi is None:
        phi = bogoliubov_angle(params, k)
    c, s = np.cos(phi), np.sin(phi)
    up, down = _frame_phases(params, t)
    if Branch(branch) is Branch.PLUS:
        return up * c, -down * s
    return up * s, down * c


def floquet_mode(params: ModelParams, k: float, branch: Branch, t: float) -> NambuSpinor:
    u, v = floquet_mode_components(params, k, branch, t)
    return NambuSpinor(complex(u), complex(v))
