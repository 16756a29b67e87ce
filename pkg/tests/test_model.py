import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from driven_ising.errors import DomainError
from driven_ising.model import (
    BdgMatrix,
    ModelParams,
    NambuSpinor,
    bdg_hamiltonian,
    even_subspace_grid,
    excitation_energy,
    resonance_wavevector,
    transverse_field,
)
from oracles import EXCITATION_PI_HALF, K0_FERRO, sorted_eigvals

couplings = st.floats(1e-3, 2.0)
fields = st.floats(-2.0, 2.0)
momenta = st.floats(1e-6, math.pi)
times = st.floats(0.0, 100.0)


class TestParams:
    def test_derived(self):
        p = ModelParams(0.01, 0.505, 1.0, 2.0, 2)
        assert p.period == pytest.approx(math.pi)
        assert p.detuning == pytest.approx(0.505 - 1.0)
        assert p.with_(g1=0.0).g1 == 0.0 and p.g1 == 1.0

    @pytest.mark.parametrize(
        "kwargs",
        [
            dict(j=0.0, g0=0.5),
            dict(j=-1.0, g0=0.5),
            dict(j=0.01, g0=math.nan),
            dict(j=0.01, g0=0.5, omega=0.0),
            dict(j=0.01, g0=0.5, g1=-0.1),
            dict(j=0.01, g0=0.5, m=-1),
            dict(j=0.01, g0=0.5, m=1.5),
        ],
    )
    def test_invalid(self, kwargs):
        with pytest.raises(DomainError):
            ModelParams(**kwargs)

    def test_frozen(self):
        p = ModelParams(0.01, 0.5)
        with pytest.raises(AttributeError):
            p.j = 1.0


class TestField:
    def test_examples(self):
        p = ModelParams(0.01, 0.505, 1.0)
        assert transverse_field(p, 0.0) == pytest.approx(1.505)
        assert transverse_field(p, p.period / 4) == pytest.approx(0.505, abs=1e-15)
        assert transverse_field(p, p.period / 2) == pytest.approx(-0.495)


class TestBdg:
    def test_example(self):
        h = bdg_hamiltonian(ModelParams(0.01, 0.505), math.pi / 2, 0.0).as_array()
        assert np.allclose(h, [[1.01, 0.02], [0.02, -1.01]], atol=1e-15)

    def test_zone_edge(self):
        h = bdg_hamiltonian(ModelParams(0.3, 0.7, 0.2), math.pi, 1.3)
        assert h.h12 == 0.0 and h.h21 == 0.0

    @pytest.mark.parametrize("k", [0.0, -0.1, math.pi + 1e-9])
    def test_domain(self, k):
        with pytest.raises(DomainError):
            bdg_hamiltonian(ModelParams(0.01, 0.5), k, 0.0)

    def test_non_hermitian_rejected(self):
        with pytest.raises(DomainError):
            BdgMatrix(1.0, 0.5, 0.4, -1.0)

    @given(couplings, fields, st.floats(0.0, 2.0), momenta, times)
    def test_hermitian(self, j, g0, g1, k, t):
        h = bdg_hamiltonian(ModelParams(j, g0, g1), k, t).as_array()
        assert np.array_equal(h, h.conj().T)

    @given(couplings, fields, momenta)
    def test_static_spectrum(self, j, g0, k):
        p = ModelParams(j, g0)
        omega_k = 2 * j * math.cos(k)
        eps = excitation_energy(p, k)
        expected = np.array([-omega_k - eps, -omega_k + eps])
        got = sorted_eigvals(bdg_hamiltonian(p, k, 0.37).as_array())
        assert np.allclose(got, expected, atol=1e-12 * (1 + abs(g0) + j))


class TestExcitationEnergy:
    def test_examples(self):
        assert excitation_energy(ModelParams(0.3, 0.3), 0.0) == 0.0
        assert excitation_energy(ModelParams(0.3, 0.7), 0.0) == pytest.approx(0.8)
        assert excitation_energy(ModelParams(0.3, -0.2), 0.0) == pytest.approx(1.0)
        assert excitation_energy(ModelParams(0.01, 0.505), math.pi / 2) == pytest.approx(
            EXCITATION_PI_HALF, abs=1e-15
        )

    def test_vectorised(self):
        p = ModelParams(0.2, 0.5)
        ks = np.linspace(0, math.pi, 9)
        assert np.allclose(excitation_energy(p, ks), [excitation_energy(p, k) for k in ks])

    @given(st.floats(1e-3, 1.0), st.floats(-1.0, 1.0), momenta)
    def test_half_gap(self, j, g0, k):
        p = ModelParams(j, g0)
        lo, hi = sorted_eigvals(bdg_hamiltonian(p, k, 0.0).as_array())
        assert abs(excitation_energy(p, k) - 0.5 * (hi - lo)) <= 1e-12


class TestResonance:
    def test_example(self):
        p = ModelParams(0.01, 0.505, m=2)
        k0 = resonance_wavevector(p)
        assert k0 == pytest.approx(K0_FERRO, abs=1e-14)
        expected = math.acos((0.505**2 + 0.0001 - 0.25) / (2 * 0.505 * 0.01))
        assert k0 == pytest.approx(expected, abs=1e-12)
        assert 2 * excitation_energy(p, k0) == pytest.approx(2.0, rel=1e-10)

    def test_no_crossing(self):
        assert resonance_wavevector(ModelParams(0.01, 0.505, m=7)) is None

    def test_g0_zero(self):
        with pytest.raises(DomainError):
            resonance_wavevector(ModelParams(0.01, 0.0, m=2))

    @given(st.floats(1e-3, 0.05), st.integers(1, 6), st.floats(-1.0, 1.0))
    def test_photon_condition(self, j, m, shift):
        p = ModelParams(j, m / 4 + shift * j, m=m)
        if p.g0 == 0.0:
            return
        k0 = resonance_wavevector(p)
        if k0 is not None:
            assert 2 * excitation_energy(p, k0) == pytest.approx(m * p.omega, rel=1e-10)


class TestGrid:
    def test_examples(self):
        assert np.allclose(even_subspace_grid(4), [math.pi / 4, 3 * math.pi / 4])
        assert np.allclose(even_subspace_grid(2), [math.pi / 2])
        ks = even_subspace_grid(100)
        assert ks.size == 50 and ks.max() == pytest.approx(99 * math.pi / 100)

    @pytest.mark.parametrize("n", [0, -2, 3, 7, 2.5])
    def test_invalid(self, n):
        with pytest.raises(DomainError):
            even_subspace_grid(n)

    @given(st.integers(1, 500))
    def test_antiperiodic(self, half):
        ks = even_subspace_grid(2 * half)
        assert ks.size == half
        # exp(i k N) = -1 for antiperiodic boundary conditions
        assert np.allclose(np.exp(1j * ks * 2 * half), -1.0)


class TestSpinor:
    def test_empty(self):
        s = NambuSpinor.empty()
        assert (s.u, s.v) == (0, 1) and s.norm() == 1.0

    def test_round_trip(self):
        s = NambuSpinor(0.6j, -0.8)
        assert NambuSpinor.from_array(s.as_array()) == s
        assert s.norm() == pytest.approx(1.0)
