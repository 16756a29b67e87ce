"""Observables of the driven chain prepared in the x-polarised state.

Thermodynamic-limit quantities are k-integrals over ``(0, pi)`` evaluated
with :mod:`driven_ising.specfun` quadrature. When no grid is given, a
Gauss-Legendre grid with a panel edge at :func:`rwa.critical_momentum` is
used, because the RWA integrands develop a kink there as ``J_m -> 0``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import rwa
from .dynamics import evolve_modes
from .errors import DomainError, EvaluationError
from .model import ModelParams, even_subspace_grid
from .rwa import Branch
from .specfun import KQuadratureGrid, elliptic_e, gauss_legendre, integrate_k, second_difference

__all__ = [
    "DEFAULT_NODES",
    "RESONANCE_TOL",
    "TimeSeries",
    "SweepRecord",
    "Quantity",
    "adapted_grid",
    "magnetization_rwa",
    "magnetization_rwa_series",
    "magnetization_from_spinors",
    "magnetization_finite",
    "periodic_transient_split",
    "averaged_energy",
    "averaged_energy_resonant",
    "averaged_magnetization",
    "averaged_quasienergy",
    "xy_ground_energy",
    "sweep_with_curvature",
]

DEFAULT_NODES = 256
RESONANCE_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class TimeSeries:
    label: str
    times: np.ndarray  # in units of the drive period
    values: np.ndarray
    params: ModelParams

    def __post_init__(self):
        if self.times.shape != self.values.shape:
            raise ValueError("times and values must align")
        if not np.all(np.isfinite(self.values)):
            raise EvaluationError(f"non-finite values in series {self.label!r}")


@dataclass(frozen=True, eq=False)
class SweepRecord:
    sweep_variable: str
    x: np.ndarray
    values: np.ndarray
    second_derivative: np.ndarray | None = None
    quantity: str = ""
    params: ModelParams | None = field(default=None)

    def __post_init__(self):
        if np.any(np.diff(self.x) <= 0.0):
            raise ValueError("sweep abscissae must be strictly increasing")

    @property
    def points(self) -> list[tuple[float, float]]:
        return list(zip(self.x.tolist(), self.values.tolist()))


class Quantity(str, enum.Enum):
    AVERAGED_ENERGY_MINUS = "AveragedEnergyMinus"
    AVERAGED_MAGNETIZATION_MINUS = "AveragedMagnetizationMinus"


def adapted_grid(params: ModelParams, n: int = DEFAULT_NODES) -> KQuadratureGrid:
    k_star = rwa.critical_momentum(params)
    return gauss_legendre(n, () if k_star is None else (k_star,))


def _rwa_mode_data(params: ModelParams, k):
    b = rwa.effective_couplings(params).bessel_factor
    eps = rwa.quasienergy_dispersion(params, k, bessel_factor=b)
    phi = rwa.bogoliubov_angle(params, k, bessel_factor=b)
    return eps, phi


def magnetization_rwa(params: ModelParams, t: float, grid: KQuadratureGrid | None = None) -> float:
    """Transverse magnetization density ``M_x(t)`` in the thermodynamic limit."""
    if t < 0.0:
        raise DomainError("t must be non-negative")
    grid = adapted_grid(params) if grid is None else grid

    def integrand(k):
        eps, phi = _rwa_mode_data(params, k)
        return np.sin(eps * t) ** 2 * np.sin(2.0 * phi) ** 2

    return 1.0 - 2.0 * integrate_k(integrand, grid) / math.pi


def magnetization_rwa_series(
    params: ModelParams, times: Sequence[float], grid: KQuadratureGrid | None = None
) -> np.ndarray:
    """:func:`magnetization_rwa` on many times at once."""
    grid = adapted_grid(params) if grid is None else grid
    eps, phi = _rwa_mode_data(params, grid.nodes)
    t = np.asarray(times, dtype=float)[:, None]
    integrand = np.sin(eps * t) ** 2 * np.sin(2.0 * phi) ** 2
    return 1.0 - 2.0 * (integrand @ grid.weights) / math.pi


def magnetization_from_spinors(u, v, weights=None) -> np.ndarray:
    """``-sum_k w_k (|u_k|^2 - |v_k|^2)`` over the last axis.

    Without weights this is the finite-chain average ``-(2/N) sum_{k>0}``;
    pass quadrature weights divided by pi for the continuum version.
    """
    sz = np.abs(u) ** 2 - np.abs(v) ** 2
    if weights is None:
        return -np.mean(sz, axis=-1)
    return -(sz @ np.asarray(weights))


def magnetization_finite(params: ModelParams, n_spins: int, t_grid: Sequence[float]) -> TimeSeries:
    """Exact ``M_x(t)`` for an even chain of ``n_spins`` sites.

    ``t_grid`` must be uniform and start at 0; it is in absolute time, the
    returned series is labelled in drive periods.
    """
    ks = even_subspace_grid(n_spins)
    t_grid = np.asarray(t_grid, dtype=float)
    if t_grid.size < 2 or t_grid[0] != 0.0:
        raise DomainError("t_grid needs at least two points and must start at 0")
    spacing = np.diff(t_grid)
    if np.any(spacing <= 0.0) or np.ptp(spacing) > 1e-9 * spacing[0]:
        raise DomainError("t_grid must be uniform and increasing")
    times, states = evolve_modes(params, ks, None, t_grid[-1], t_grid.size)
    values = magnetization_from_spinors(states[..., 0], states[..., 1])
    return TimeSeries(f"mx_finite_{n_spins}", times / params.period, values, params)


def periodic_transient_split(
    params: ModelParams, t: float, grid: KQuadratureGrid | None = None
) -> tuple[float, float]:
    """Split ``M_x(t)`` into its Floquet-synchronised and transient parts.

    Both parts are assembled from the closed-form Floquet modes with
    expansion weights ``A_+ = -sin(phi)``, ``A_- = cos(phi)``.
    """
    if t < 0.0:
        raise DomainError("t must be non-negative")
    grid = adapted_grid(params) if grid is None else grid
    k = grid.nodes
    eps, phi = _rwa_mode_data(params, k)
    up, vp = rwa.floquet_mode_components(params, k, Branch.PLUS, t, phi=phi)
    um, vm = rwa.floquet_mode_components(params, k, Branch.MINUS, t, phi=phi)
    a_plus, a_minus = -np.sin(phi), np.cos(phi)

    # observable -2 sigma^z(k) with the dk / 2 pi measure
    def sz(a1, b1, a2, b2):
        return np.conj(a1) * a2 - np.conj(b1) * b2

    diag = a_plus**2 * sz(up, vp, up, vp).real + a_minus**2 * sz(um, vm, um, vm).real
    cross = a_plus * a_minus * np.exp(2j * eps * t) * sz(up, vp, um, vm)
    periodic = float(np.dot(grid.weights, -2.0 * diag)) / (2.0 * math.pi)
    transient = float(np.dot(grid.weights, -2.0 * cross.real)) / math.pi
    return periodic, transient


def averaged_energy(
    params: ModelParams, branch: Branch, grid: KQuadratureGrid | None = None
) -> float:
    """Cycle-averaged energy in the Floquet state of the given branch."""
    grid = adapted_grid(params) if grid is None else grid
    half_m = 0.5 * params.m * params.omega

    def integrand(k):
        eps, phi = _rwa_mode_data(params, k)
        return eps + half_m * np.cos(2.0 * phi)

    return Branch(branch).sign * integrate_k(integrand, grid) / (2.0 * math.pi)


def averaged_energy_resonant(params: ModelParams) -> tuple[float, float]:
    """Closed form ``+-(2J/pi) E(1 - J_m^2)`` of the averaged energies at ``delta = 0``."""
    if abs(params.detuning) > RESONANCE_TOL * params.omega:
        raise DomainError(
            f"closed form needs exact resonance, detuning is {params.detuning!r}"
        )
    b = rwa.effective_couplings(params).bessel_factor
    value = 2.0 * params.j / math.pi * elliptic_e(max(0.0, 1.0 - b * b))
    return value, -value


def averaged_magnetization(
    params: ModelParams, branch: Branch, grid: KQuadratureGrid | None = None
) -> float:
    """Cycle-averaged transverse magnetization ``-+ int dk/pi cos(2 phi)``."""
    grid = adapted_grid(params) if grid is None else grid

    def integrand(k):
        return np.cos(2.0 * _rwa_mode_data(params, k)[1])

    return -Branch(branch).sign * integrate_k(integrand, grid) / math.pi


def averaged_quasienergy(
    params: ModelParams, branch: Branch, grid: KQuadratureGrid | None = None
) -> float:
    """``int dk / 2 pi`` of the unfolded quasienergy of one branch."""
    grid = adapted_grid(params) if grid is None else grid
    index = 0 if Branch(branch) is Branch.PLUS else 1

    def integrand(k):
        return rwa.quasienergy_branches(params, k, folded=False)[index]

    return integrate_k(integrand, grid) / (2.0 * math.pi)


def xy_ground_energy(j: float, gamma: float) -> float:
    """Ground-state energy per site of the zero-field XY chain with anisotropy ``gamma``."""
    if not j > 0.0:
        raise DomainError("j must be positive")
    if not abs(gamma) <= 1.0:
        raise DomainError(f"anisotropy must satisfy |gamma| <= 1, got {gamma!r}")
    return -2.0 * j / math.pi * elliptic_e(1.0 - gamma * gamma)


_QUANTITIES = {
    Quantity.AVERAGED_ENERGY_MINUS: lambda p, n: averaged_energy(p, Branch.MINUS, adapted_grid(p, n)),
    Quantity.AVERAGED_MAGNETIZATION_MINUS: lambda p, n: averaged_magnetization(
        p, Branch.MINUS, adapted_grid(p, n)
    ),
}


def sweep_with_curvature(
    template: ModelParams,
    variable: str,
    lo: float,
    hi: float,
    n_points: int,
    quantity: Quantity,
    n_nodes: int = DEFAULT_NODES,
    pool=None,
) -> SweepRecord:
    """Evaluate ``quantity`` along ``variable`` in ``[lo, hi]`` and its second derivative.

    The second derivative uses the sweep spacing as the finite-difference
    step; the two endpoints carry NaN. ``pool`` may be any executor with a
    ``map`` method.
    """
    if variable not in ("g0", "g1"):
        raise DomainError(f"can only sweep g0 or g1, not {variable!r}")
    if n_points < 5:
        raise DomainError("a sweep needs at least 5 points")
    if not hi > lo:
        raise DomainError("sweep range must be increasing")
    quantity = Quantity(quantity)
    xs = np.linspace(lo, hi, n_points)
    evaluate = _QUANTITIES[quantity]

    def at(x):
        try:
            return evaluate(template.with_(**{variable: float(x)}), n_nodes)
        except (ArithmeticError, ValueError) as exc:
            raise EvaluationError(f"{quantity.value} failed at {variable} = {x!r}: {exc}") from exc

    mapper = map if pool is None else pool.map
    values = np.fromiter(mapper(at, xs), dtype=float, count=xs.size)
    curvature = second_difference(values, xs[1] - xs[0])
    return SweepRecord(
        f"{variable}/omega", xs, values, curvature, quantity.value, template
    )
