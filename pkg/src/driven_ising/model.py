"""Driven transverse-field Ising chain: parameters and the per-mode BdG problem.

The field is ``g(t) = g0 + g1 cos(omega t)``. After Jordan-Wigner and Fourier
transforms, each momentum pair ``(k, -k)`` in the even-parity sector evolves
in the two-dimensional space spanned by the doubly occupied and the empty
state, under the 2x2 Bogoliubov-de Gennes matrix built by
:func:`bdg_hamiltonian`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .errors import DomainError

__all__ = [
    "ModelParams",
    "BdgMatrix",
    "NambuSpinor",
    "transverse_field",
    "bdg_hamiltonian",
    "excitation_energy",
    "resonance_wavevector",
    "even_subspace_grid",
]


@dataclass(frozen=True)
class ModelParams:
    """Physical parameters of the driven chain.

    Energies and frequencies share one unit; the CLI and the scripts use
    ``omega = 1`` so that ``j``, ``g0``, ``g1`` are ratios to the drive
    frequency.

    Attributes
    ----------
    j : float
        Nearest-neighbour coupling, positive.
    g0 : float
        Static transverse field.
    g1 : float
        Drive amplitude, non-negative.
    omega : float
        Drive angular frequency, positive.
    m : int
        Order of the multiphoton resonance the rotating frame is built around.
    """

    j: float
    g0: float
    g1: float = 0.0
    omega: float = 1.0
    m: int = 0

    def __post_init__(self):
        for name in ("j", "g0", "g1", "omega"):
            value = getattr(self, name)
            if not math.isfinite(value):
                raise DomainError(f"{name} must be finite, got {value!r}")
        if self.j <= 0.0:
            raise DomainError(f"j must be positive, got {self.j!r}")
        if self.omega <= 0.0:
            raise DomainError(f"omega must be positive, got {self.omega!r}")
        if self.g1 < 0.0:
            raise DomainError(f"g1 must be non-negative, got {self.g1!r}")
        if int(self.m) != self.m or self.m < 0:
            raise DomainError(f"m must be a non-negative integer, got {self.m!r}")
        object.__setattr__(self, "m", int(self.m))

    @property
    def period(self) -> float:
        return 2.0 * math.pi / self.omega

    @property
    def detuning(self) -> float:
        """Distance ``g0 - m omega / 4`` from the m-photon resonance."""
        return self.g0 - self.m * self.omega / 4.0

    def with_(self, **changes) -> "ModelParams":
        return replace(self, **changes)


@dataclass(frozen=True)
class BdgMatrix:
    h11: complex
    h12: complex
    h21: complex
    h22: complex

    def __post_init__(self):
        if abs(self.h12 - np.conj(self.h21)) > 1e-14 * (abs(self.h12) + 1.0):
            raise DomainError("BdG matrix must be Hermitian")
        if np.imag(self.h11) != 0.0 or np.imag(self.h22) != 0.0:
            raise DomainError("diagonal of a BdG matrix must be real")

    def as_array(self) -> np.ndarray:
        return np.array([[self.h11, self.h12], [self.h21, self.h22]])


@dataclass(frozen=True)
class NambuSpinor:
    """Amplitudes ``(u, v)`` of the doubly occupied and empty pair states."""

    u: complex
    v: complex

    @classmethod
    def empty(cls) -> "NambuSpinor":
        """The unoccupied pair state ``(0, 1)``; the x-polarised chain."""
        return cls(0j, 1 + 0j)

    @classmethod
    def from_array(cls, a) -> "NambuSpinor":
        return cls(complex(a[0]), complex(a[1]))

    def as_array(self) -> np.ndarray:
        return np.array([self.u, self.v], dtype=complex)

    def norm(self) -> float:
        return math.hypot(abs(self.u), abs(self.v))


def transverse_field(params: ModelParams, t):
    return params.g0 + params.g1 * np.cos(params.omega * t)


def _check_k(k):
    k_arr = np.asarray(k, dtype=float)
    if np.any(k_arr <= 0.0) or np.any(k_arr > math.pi):
        raise DomainError(f"momentum must lie in (0, pi], got {k!r}")


def bdg_hamiltonian(params: ModelParams, k: float, t: float) -> BdgMatrix:
    _check_k(k)
    omega_k = 2.0 * params.j * math.cos(k)
    delta_k = 2.0 * params.j * math.sin(k)
    if k == math.pi:
        delta_k = 0.0
    mu = 2.0 * float(transverse_field(params, t))
    return BdgMatrix(mu - 2.0 * omega_k, delta_k, delta_k, -mu)


def excitation_energy(params: ModelParams, k):
    """Static single-pair excitation energy ``2 sqrt((g0 - J cos k)^2 + (J sin k)^2)``."""
    k = np.asarray(k, dtype=float)
    if np.any(k < 0.0) or np.any(k > math.pi):
        raise DomainError("momentum must lie in [0, pi]")
    out = 2.0 * np.hypot(params.g0 - params.j * np.cos(k), params.j * np.sin(k))
    return float(out) if out.ndim == 0 else out


def resonance_wavevector(params: ModelParams) -> float | None:
    """Momentum where the static gap ``2 eps_k`` equals ``m omega``.

    Returns ``None`` when no such momentum exists in ``[0, pi]``.
    """
    if params.g0 == 0.0:
        raise DomainError("resonance momentum is undefined for g0 = 0")
    quarter = params.m * params.omega / 4.0
    arg = (params.g0**2 + params.j**2 - quarter**2) / (2.0 * params.g0 * params.j)
    if not -1.0 <= arg <= 1.0:
        return None
    return math.acos(arg)


def even_subspace_grid(n_spins: int) -> np.ndarray:
    """Positive antiperiodic momenta ``pi/N, 3 pi/N, ..., (N-1) pi/N``."""
    if int(n_spins) != n_spins or n_spins < 2 or n_spins % 2:
        raise DomainError(f"n_spins must be an even integer >= 2, got {n_spins!r}")
    n = int(n_spins)
    return math.pi * (2.0 * np.arange(n // 2) + 1.0) / n
