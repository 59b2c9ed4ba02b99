"""Gamma algebra, bilinear form, Dirac currents, spinor two-forms."""

import numpy as np
import pytest

from sqk3 import spinors as S
from sqk3.geometry import EPS, SpaceForm


def eta_diag(r):
    return np.array([1.0 - 2.0 * r, 1.0, 1.0])


class TestGammas:
    def test_definitions(self):
        g0 = S.gammas(0)
        assert np.allclose(g0[0], 1j * S.SIGMA[0])
        g1 = S.gammas(1)
        assert np.allclose(g1[0], S.SIGMA[0])
        for r in (0, 1):
            g = S.gammas(r)
            assert np.allclose(g[1], 1j * S.SIGMA[1])
            assert np.allclose(g[2], 1j * S.SIGMA[2])

    @pytest.mark.parametrize("r", [0, 1])
    def test_clifford_relation(self, r):
        g = S.gammas(r)
        eta = np.diag(eta_diag(r))
        for i in range(3):
            for j in range(3):
                acom = g[i] @ g[j] + g[j] @ g[i]
                assert np.array_equal(acom, -2.0 * eta[i, j] * np.eye(2))

    @pytest.mark.parametrize("r", [0, 1])
    def test_commutator_reduction(self, r):
        g = S.gammas(r)
        eps_up = EPS * eta_diag(r)[None, None, :]
        for i in range(3):
            for j in range(3):
                rhs = -2.0 * (-1j) ** r * np.einsum("k,kab->ab", eps_up[i, j], g)
                assert np.allclose(g[i] @ g[j] - g[j] @ g[i], rhs, atol=1e-15)

    @pytest.mark.parametrize("r", [0, 1])
    def test_product_identity(self, r):
        # gamma_i gamma_j = -eta_ij - (-1)^(r-1) i^(r-2) eps_ijk gamma^k
        g = S.gammas(r)
        eta = eta_diag(r)
        coef = -((-1.0) ** (r - 1)) * (1j) ** (r - 2)
        for i in range(3):
            for j in range(3):
                rhs = -eta[i] * (i == j) * np.eye(2) + coef * sum(
                    EPS[i, j, k] * eta[k] * g[k] for k in range(3))
                assert np.allclose(g[i] @ g[j], rhs, atol=1e-15)


class TestClifford:
    def test_reeb_action_riemannian(self):
        out = S.clifford([1.0, 0.0, 0.0], [1.0, 0.0], 0)
        assert np.allclose(out, [0.0, 1j])

    def test_zero_vector_linearity(self):
        out = S.clifford([0.0, 0.0, 0.0], [1.0, 2.0], 1)
        assert np.all(out == 0.0)

    def test_reeb_eigen_spinor_lorentzian(self):
        # (1, 1) is an eigen spinor with eigenvalue +1 = +(-i)^(r-1)
        out = S.clifford([1.0, 0.0, 0.0], [1.0, 1.0], 1)
        assert np.allclose(out, [1.0, 1.0])

    @pytest.mark.parametrize("r", [0, 1])
    def test_reeb_square(self, r):
        psi = np.array([0.3 + 0.2j, -0.8 + 0.1j])
        e1 = [1.0, 0.0, 0.0]
        out = S.clifford(e1, S.clifford(e1, psi, r), r)
        sign = -1.0 if r == 0 else 1.0
        assert np.allclose(out, sign * psi)


class TestBilinear:
    def test_values(self):
        assert S.bilinear([1.0, 0.0], [1.0, 0.0], 0) == 1.0
        assert S.bilinear([1.0, 1.0], [1.0, 1.0], 1) == 2.0
        # Lorentzian signature admits null spinors
        assert S.bilinear([1.0, 0.0], [1.0, 0.0], 1) == 0.0

    @pytest.mark.parametrize("r", [0, 1])
    def test_self_pairing_real(self, r):
        rng = np.random.default_rng(3)
        for _ in range(100):
            psi = rng.normal(size=2) + 1j * rng.normal(size=2)
            assert abs(S.bilinear(psi, psi, r).imag) < 1e-14

    def test_sesquilinear(self):
        rng = np.random.default_rng(4)
        a, b = rng.normal(size=2) + 1j * rng.normal(size=2)
        p1 = rng.normal(size=2) + 1j * rng.normal(size=2)
        p2 = rng.normal(size=2) + 1j * rng.normal(size=2)
        for r in (0, 1):
            lhs = S.bilinear(a * p1, b * p2, r)
            assert np.isclose(lhs, np.conj(a) * b * S.bilinear(p1, p2, r))


class TestDiracCurrent:
    def test_riemannian_value(self):
        assert np.allclose(S.dirac_current([1.0, 0.0], r=0), [0.0, 0.0, -1.0])

    def test_lorentzian_value(self):
        j = S.dirac_current([1.0, 1.0], r=1)
        assert np.allclose(j, [-2.0, 0.0, 0.0])
        # g(J, J) = -4 = -(<psi,psi>)^2
        assert np.isclose(-j[0] ** 2 + j[1] ** 2 + j[2] ** 2, -4.0)

    def test_zero_spinor(self):
        assert np.all(S.dirac_current([0.0, 0.0], r=1) == 0.0)

    @pytest.mark.parametrize("r", [0, 1])
    def test_reality_and_norm_identity(self, r):
        # g(J, J) = (-1)^r <psi, psi>^2; checked over random spinors before
        # any downstream test relies on it
        rng = np.random.default_rng(11)
        g = S.gammas(r)
        eta = eta_diag(r)
        for _ in range(1000):
            psi = rng.normal(size=2) + 1j * rng.normal(size=2)
            raw = np.array([(-1j) ** (r - 1) * eta[i]
                            * S.bilinear(psi, g[i] @ psi, r) for i in range(3)])
            assert np.max(np.abs(raw.imag)) < 1e-14
            j = raw.real
            q = S.bilinear(psi, psi, r).real
            assert abs(float(eta @ (j * j)) - eta[0] * q * q) < 1e-10


class TestBilinearTwoForm:
    def test_zero(self):
        f = S.bilinear_two_form([0.0, 0.0], [0.0, 0.0], 0)
        assert np.all(f == 0.0)

    def test_first_basis_spinor_components(self):
        # only the w1^w2 component survives: <psi, gamma_3 psi> != 0
        f = S.bilinear_two_form([1.0, 0.0], [1.0, 0.0], 0)
        expected = np.zeros((3, 3), dtype=complex)
        expected[0, 1] = 2.0
        expected[1, 0] = -2.0
        assert np.allclose(f, expected)

    @pytest.mark.parametrize("r", [0, 1])
    def test_reduction_identity(self, r):
        rng = np.random.default_rng(5)
        for _ in range(100):
            p1 = rng.normal(size=2) + 1j * rng.normal(size=2)
            p2 = rng.normal(size=2) + 1j * rng.normal(size=2)
            full = S.bilinear_two_form(p1, p2, r)
            red = S.bilinear_two_form_reduced(p1, p2, r)
            assert np.max(np.abs(full - red)) < 1e-12
            assert np.max(np.abs(full + full.T)) < 1e-12


def test_contact_maxwell_components():
    f = S.contact_maxwell(0.3)
    assert f[1, 2] == 0.6 and f[2, 1] == -0.6 and f[0, 1] == 0.0


def test_flat_sharp_roundtrip():
    sf = SpaceForm(1, 0.0)
    v = np.array([0.4, -1.1, 2.0])
    assert np.allclose(S.sharp(sf, S.flat(sf, v)), v)
