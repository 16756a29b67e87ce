"""Special functions and small numerical primitives.

Integer-order Bessel functions of the first kind, the complete elliptic
integral of the second kind, quadrature over the half Brillouin zone
``(0, pi)`` and a central finite-difference second derivative.
"""

from __future__ import annotations

import enum
import functools
import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .errors import DomainError, EvaluationError

__all__ = [
    "MAX_BESSEL_ORDER",
    "bessel_j",
    "elliptic_e",
    "QuadratureScheme",
    "KQuadratureGrid",
    "uniform_midpoint",
    "gauss_legendre",
    "integrate_k",
    "second_derivative",
    "second_difference",
]

MAX_BESSEL_ORDER = 64
MAX_BESSEL_ARG = 1.0e4

# switch from the ascending series to Miller's downward recurrence
_SERIES_LIMIT = 12.0


def _bessel_series(n: int, x: float) -> float:
    half = 0.5 * x
    term = 1.0
    for i in range(1, n + 1):
        term *= half / i
    terms = [term]
    q = -half * half
    k = 0
    while True:
        k += 1
        term *= q / (k * (k + n))
        terms.append(term)
        if k > half and abs(term) < 1e-18 * abs(terms[0]) + 1e-300:
            break
    return math.fsum(terms)


def _bessel_miller(n: int, x: float) -> float:
    # downward recurrence from well above max(n, x), normalised by
    # J_0 + 2 * sum_k J_2k = 1
    top = max(n, int(x)) + 30 + int(math.sqrt(40.0 * max(n, x)))
    top += top % 2
    two_over_x = 2.0 / x
    f_next, f = 0.0, 1e-280
    norm = 0.0
    result = 0.0
    for j in range(top, 0, -1):
        f_prev = j * two_over_x * f - f_next
        f_next, f = f, f_prev
        # f now holds the unnormalised J_{j-1}
        if abs(f) > 1e250:
            f *= 1e-250
            f_next *= 1e-250
            norm *= 1e-250
            result *= 1e-250
        if j - 1 == n:
            result = f
        if (j - 1) % 2 == 0 and j - 1 > 0:
            norm += 2.0 * f
    norm += f
    return result / norm


def bessel_j(order: int, z: float) -> float:
    """Bessel function of the first kind ``J_order(z)`` for integer order.

    Negative orders use ``J_{-l}(z) = (-1)^l J_l(z)``.
    """
    if int(order) != order:
        raise DomainError(f"Bessel order must be an integer, got {order!r}")
    order = int(order)
    z = float(z)
    if abs(order) > MAX_BESSEL_ORDER:
        raise DomainError(f"Bessel order {order} exceeds {MAX_BESSEL_ORDER}")
    if not math.isfinite(z) or abs(z) > MAX_BESSEL_ARG:
        raise DomainError(f"Bessel argument must be finite with |z| <= 1e4, got {z!r}")
    sign = 1.0
    if order < 0:
        order = -order
        sign = -1.0 if order % 2 else 1.0
    if z < 0.0:
        z = -z
        if order % 2:
            sign = -sign
    if z == 0.0:
        return sign * (1.0 if order == 0 else 0.0)
    if z <= _SERIES_LIMIT:
        return sign * _bessel_series(order, z)
    return sign * _bessel_miller(order, z)


def elliptic_e(parameter: float) -> float:
    """Complete elliptic integral of the second kind, parameter convention.

    ``E(m) = int_0^{pi/2} sqrt(1 - m sin^2 t) dt``, evaluated with the
    arithmetic-geometric mean.
    """
    m = float(parameter)
    if not (0.0 <= m <= 1.0):
        raise DomainError(f"elliptic parameter must lie in [0, 1], got {parameter!r}")
    if m == 1.0:
        return 1.0
    a = 1.0
    b = math.sqrt(1.0 - m)
    c = math.sqrt(m)
    weight = 0.5
    tail = weight * c * c
    # c stalls at about one ulp of a, so stop there rather than at a fixed eps
    for _ in range(64):
        if abs(c) <= 4e-16 * a:
            break
        a, b, c = 0.5 * (a + b), math.sqrt(a * b), 0.5 * (a - b)
        weight *= 2.0
        tail += weight * c * c
    return (math.pi / (2.0 * a)) * (1.0 - tail)


class QuadratureScheme(str, enum.Enum):
    UNIFORM_MIDPOINT = "UniformMidpoint"
    GAUSS_LEGENDRE = "GaussLegendre"


@dataclass(frozen=True, eq=False)
class KQuadratureGrid:
    """Nodes and weights for integrals ``int_0^pi f(k) dk``."""

    nodes: np.ndarray
    weights: np.ndarray
    scheme: QuadratureScheme

    def __post_init__(self):
        nodes = np.asarray(self.nodes, dtype=float)
        weights = np.asarray(self.weights, dtype=float)
        if nodes.ndim != 1 or nodes.shape != weights.shape or nodes.size == 0:
            raise DomainError("nodes and weights must be equal-length 1-D arrays")
        if nodes[0] <= 0.0 or nodes[-1] >= math.pi or np.any(np.diff(nodes) <= 0.0):
            raise DomainError("nodes must be strictly increasing inside (0, pi)")
        if np.any(weights <= 0.0):
            raise DomainError("weights must be positive")
        if abs(math.fsum(weights) - math.pi) > 1e-12 * math.pi:
            raise DomainError("weights must sum to pi")
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "weights", weights)

    def __len__(self):
        return self.nodes.size


def uniform_midpoint(n: int) -> KQuadratureGrid:
    if n < 1:
        raise DomainError("need at least one node")
    h = math.pi / n
    nodes = (np.arange(n) + 0.5) * h
    return KQuadratureGrid(nodes, np.full(n, h), QuadratureScheme.UNIFORM_MIDPOINT)


@functools.lru_cache(maxsize=16)
def _legendre_rule(n: int):
    x, w = np.polynomial.legendre.leggauss(n)
    x.flags.writeable = False
    w.flags.writeable = False
    return x, w


def gauss_legendre(n: int = 256, breakpoints: Sequence[float] = ()) -> KQuadratureGrid:
    """Composite Gauss-Legendre rule on ``(0, pi)``.

    Each panel between consecutive breakpoints gets ``n`` nodes. Put a
    breakpoint where the integrand has a kink so that every panel sees a
    smooth function.
    """
    if n < 1:
        raise DomainError("need at least one node per panel")
    edges = [0.0]
    for b in sorted(float(b) for b in breakpoints):
        # breakpoints too close to an existing edge only produce tiny panels
        if 1e-9 < b < math.pi - 1e-9 and b - edges[-1] > 1e-9:
            edges.append(b)
    edges.append(math.pi)
    x, w = _legendre_rule(int(n))
    nodes, weights = [], []
    for lo, hi in zip(edges[:-1], edges[1:]):
        half = 0.5 * (hi - lo)
        nodes.append(lo + half * (x + 1.0))
        weights.append(half * w)
    return KQuadratureGrid(
        np.concatenate(nodes), np.concatenate(weights), QuadratureScheme.GAUSS_LEGENDRE
    )


def integrate_k(f: Callable[[np.ndarray], np.ndarray], grid: KQuadratureGrid) -> float:
    """``sum(weights * f(nodes))``; ``f`` is called once on the node array."""
    values = np.broadcast_to(np.asarray(f(grid.nodes), dtype=float), grid.nodes.shape)
    bad = ~np.isfinite(values)
    if np.any(bad):
        k = float(grid.nodes[np.argmax(bad)])
        raise EvaluationError(f"integrand is not finite at k = {k!r}")
    return float(np.dot(grid.weights, values))


def second_derivative(f: Callable[[float], float], x: float, h: float) -> float:
    """Central three-point estimate of ``f''(x)``."""
    if not h > 0.0:
        raise DomainError("step must be positive")
    lo, mid, hi = f(x - h), f(x), f(x + h)
    if not all(math.isfinite(v) for v in (lo, mid, hi)):
        raise EvaluationError(f"non-finite function value near x = {x!r}")
    return (hi - 2.0 * mid + lo) / (h * h)


def second_difference(values: Sequence[float], h: float) -> np.ndarray:
    """Three-point second differences of uniformly sampled values.

    Returns an array aligned with ``values``; the two endpoints are NaN.
    """
    y = np.asarray(values, dtype=float)
    out = np.full(y.shape, np.nan)
    if y.size >= 3:
        out[1:-1] = (y[2:] - 2.0 * y[1:-1] + y[:-2]) / (h * h)
    return out
