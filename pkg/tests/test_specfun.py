import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy import special

from driven_ising.errors import DomainError, EvaluationError
from driven_ising.specfun import (
    KQuadratureGrid,
    QuadratureScheme,
    bessel_j,
    elliptic_e,
    gauss_legendre,
    integrate_k,
    second_derivative,
    second_difference,
    uniform_midpoint,
)
from oracles import E_HALF, E_THREE_QUARTERS, J2_AT_4, J2_ZEROS, bessel_mp, elliptic_e_quad


class TestBessel:
    def test_origin(self):
        assert bessel_j(0, 0.0) == 1.0
        assert bessel_j(2, 0.0) == 0.0

    def test_first_zero_of_j2(self):
        assert abs(bessel_j(2, 5.1356223)) <= 1e-7
        for z in J2_ZEROS:
            assert abs(bessel_j(2, z)) <= 1e-12

    def test_frozen_value(self):
        assert bessel_j(2, 4.0) == pytest.approx(J2_AT_4, abs=1e-15)

    @pytest.mark.parametrize("order", [0, 1, 2, 3, 5, 10, 25, 64])
    @pytest.mark.parametrize("z", [0.1, 1.0, 4.0, 11.9, 12.1, 20.0, 57.3, 400.0])
    def test_against_mpmath(self, order, z):
        assert bessel_j(order, z) == pytest.approx(bessel_mp(order, z), abs=1e-12)

    @given(st.integers(0, 64), st.floats(-60.0, 60.0))
    def test_against_scipy(self, order, z):
        assert abs(bessel_j(order, z) - special.jv(order, z)) <= 1e-12

    @given(st.integers(1, 20), st.floats(-30.0, 30.0))
    def test_negative_order_and_argument(self, order, z):
        sign = -1.0 if order % 2 else 1.0
        assert bessel_j(-order, z) == pytest.approx(sign * bessel_j(order, z), abs=1e-15)
        assert bessel_j(order, -z) == pytest.approx(sign * bessel_j(order, z), abs=1e-15)

    @given(st.integers(1, 10), st.floats(0.1, 20.0))
    def test_recurrence(self, order, z):
        residual = bessel_j(order - 1, z) + bessel_j(order + 1, z) - 2 * order / z * bessel_j(order, z)
        assert abs(residual) <= 1e-9

    @pytest.mark.parametrize("z", [0.5, 2.0, 4.0])
    def test_jacobi_anger(self, z):
        ts = np.linspace(0.0, 2 * math.pi, 64, endpoint=False)
        coeffs = {l: bessel_j(l, z) for l in range(-40, 41)}
        for t in ts:
            series = sum(c * np.exp(1j * l * t) for l, c in coeffs.items())
            assert abs(series - np.exp(1j * z * math.sin(t))) <= 1e-10

    def test_neumann_sum(self):
        for z in (0.3, 7.0, 15.0, 30.0):
            total = bessel_j(0, z) + 2 * sum(bessel_j(2 * l, z) for l in range(1, 33))
            assert total == pytest.approx(1.0, abs=1e-12)

    @pytest.mark.parametrize("order,z", [(65, 1.0), (-65, 1.0), (1.5, 1.0), (2, math.inf), (2, math.nan)])
    def test_domain(self, order, z):
        with pytest.raises(DomainError):
            bessel_j(order, z)


class TestElliptic:
    def test_endpoints(self):
        assert elliptic_e(0.0) == pytest.approx(math.pi / 2, abs=1e-12)
        assert elliptic_e(1.0) == pytest.approx(1.0, abs=1e-12)

    def test_frozen_values(self):
        assert elliptic_e(0.5) == pytest.approx(E_HALF, abs=1e-12)
        assert elliptic_e(0.75) == pytest.approx(E_THREE_QUARTERS, abs=1e-12)

    @pytest.mark.parametrize("m", [1e-12, 0.1, 0.3, 0.9, 0.999, 1 - 1e-12])
    def test_against_defining_integral(self, m):
        assert elliptic_e(m) == pytest.approx(elliptic_e_quad(m), abs=1e-12)

    @given(st.floats(0.0, 1.0))
    def test_against_scipy(self, m):
        assert abs(elliptic_e(m) - special.ellipe(m)) <= 1e-12

    @given(st.floats(0.0, 1.0), st.floats(0.0, 1.0))
    def test_monotone_decreasing(self, a, b):
        lo, hi = sorted((a, b))
        assert elliptic_e(lo) >= elliptic_e(hi)

    @pytest.mark.parametrize("m", [-1e-9, 1.0 + 1e-9, math.nan])
    def test_domain(self, m):
        with pytest.raises(DomainError):
            elliptic_e(m)


class TestQuadrature:
    @pytest.mark.parametrize(
        "grid", [uniform_midpoint(7), uniform_midpoint(1024), gauss_legendre(3), gauss_legendre(256, [1.0, 2.0])]
    )
    def test_constant(self, grid):
        assert integrate_k(lambda k: np.ones_like(k), grid) == pytest.approx(math.pi, rel=1e-13)

    def test_sine_midpoint(self):
        assert abs(integrate_k(np.sin, uniform_midpoint(1024)) - 2.0) <= 1e-5

    def test_gauss_legendre_smooth(self):
        exact = math.pi * special.i0(1.0)  # int_0^pi exp(cos k) dk
        value = integrate_k(lambda k: np.exp(np.cos(k)), gauss_legendre(256))
        assert abs(value - exact) <= 1e-10 * exact

    @given(st.lists(st.floats(-1.0, 1.0), min_size=1, max_size=21))
    def test_doubling_cos_polynomials(self, coeffs):
        f = lambda k: np.polynomial.polynomial.polyval(np.cos(k), coeffs)
        a = integrate_k(f, gauss_legendre(128))
        b = integrate_k(f, gauss_legendre(256))
        assert abs(a - b) <= 1e-12

    def test_breakpoint_resolves_kink(self):
        kink = 1.1
        f = lambda k: np.abs(np.cos(k) - math.cos(kink))
        exact = 2 * math.sin(kink) + (math.pi - 2 * kink) * math.cos(kink)
        assert abs(integrate_k(f, gauss_legendre(64, [kink])) - exact) <= 1e-13
        assert abs(integrate_k(f, gauss_legendre(64)) - exact) > 1e-8

    def test_grid_invariants(self):
        grid = gauss_legendre(32, [0.5, 0.5, 2.0, 0.0, math.pi])
        assert grid.scheme is QuadratureScheme.GAUSS_LEGENDRE
        assert len(grid) == 3 * 32
        assert np.all(np.diff(grid.nodes) > 0)
        assert 0 < grid.nodes[0] and grid.nodes[-1] < math.pi

    def test_invalid_grids(self):
        with pytest.raises(DomainError):
            KQuadratureGrid(np.array([0.5, 0.4]), np.array([1.0, math.pi - 1]), QuadratureScheme.UNIFORM_MIDPOINT)
        with pytest.raises(DomainError):
            KQuadratureGrid(np.array([0.5, 1.0]), np.array([1.0, 1.0]), QuadratureScheme.UNIFORM_MIDPOINT)
        with pytest.raises(DomainError):
            uniform_midpoint(0)

    def test_non_finite_names_node(self):
        grid = uniform_midpoint(4)
        with pytest.raises(EvaluationError, match=repr(float(grid.nodes[3]))):
            integrate_k(lambda k: np.where(k > 2.0, np.nan, 1.0), grid)


class TestDerivatives:
    def test_examples(self):
        assert abs(second_derivative(lambda x: x * x, 1.0, 1e-3) - 2.0) <= 1e-6
        assert second_derivative(lambda x: 3.5, 0.2, 1e-2) == 0.0
        assert abs(second_derivative(math.sin, 0.0, 1e-3)) <= 1e-6

    def test_errors(self):
        with pytest.raises(DomainError):
            second_derivative(math.sin, 0.0, 0.0)
        with pytest.raises(EvaluationError):
            second_derivative(lambda x: math.inf if x > 0 else 0.0, 0.0, 0.1)

    @given(st.floats(-3, 3), st.floats(-3, 3), st.floats(-3, 3))
    def test_difference_exact_on_quadratics(self, a, b, c):
        x = np.linspace(-1, 1, 11)
        d2 = second_difference(a * x**2 + b * x + c, x[1] - x[0])
        assert np.isnan(d2[0]) and np.isnan(d2[-1])
        assert np.allclose(d2[1:-1], 2 * a, atol=1e-10)
