import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.special import eval_jacobi

from spinframe.exceptions import InvalidIndex
from spinframe.spinmath import (
    EulerAngles,
    HalfInt,
    check_rotation,
    classical_rotation,
    coherent_state,
    euler_from_rotation,
    hilbert_dim,
    jacobi_poly,
    m_values,
    rotation_angle,
    wigner_D_element,
    wigner_D_matrix,
    wigner_small_d,
)

from .conftest import jx_matrix, jy_matrix, jz_matrix, small_d_expm

angles = st.floats(0, 2 * math.pi, exclude_max=True)
betas = st.floats(0, math.pi)
j_twice = st.integers(0, 6)


class TestHalfInt:
    def test_parse(self):
        assert HalfInt.of("3/2").twice == 3
        assert HalfInt.of(0.5) == HalfInt(1)
        assert HalfInt.of(2).is_integer
        assert str(HalfInt(5)) == "5/2"
        assert float(HalfInt(-1)) == -0.5

    def test_rejects_thirds(self):
        with pytest.raises(InvalidIndex):
            HalfInt.of("1/3")

    def test_arithmetic_and_order(self):
        assert HalfInt(1) + "1/2" == 1
        assert HalfInt(3) - 1 == HalfInt(1)
        assert HalfInt(1) < HalfInt(2)
        assert -HalfInt(3) == HalfInt(-3)


class TestJacobi:
    @pytest.mark.parametrize(
        "n,a,b,x,expected",
        [(0, 0, 0, 0.3, 1.0), (1, 0, 0, 0.7, 0.7), (1, 0, 2, 0.5, 0.0)],
    )
    def test_examples(self, n, a, b, x, expected):
        assert jacobi_poly(n, a, b, x) == pytest.approx(expected, abs=1e-15)

    @pytest.mark.parametrize("n", range(0, 12))
    @pytest.mark.parametrize("a,b", [(0, 0), (0, 3), (2, 5), (4, 1)])
    def test_against_scipy(self, n, a, b):
        x = np.linspace(-1, 1, 17)
        np.testing.assert_allclose(jacobi_poly(n, a, b, x), eval_jacobi(n, a, b, x), rtol=1e-12, atol=1e-12)

    def test_negative_degree(self):
        with pytest.raises(InvalidIndex):
            jacobi_poly(-1, 0, 0, 0.0)


class TestSmallD:
    def test_identity_at_zero(self):
        np.testing.assert_allclose(wigner_small_d("1/2", 0.0), np.eye(2))

    def test_spin_one_top_corner(self):
        chi = 0.83
        assert wigner_small_d(1, chi)[0, 0] == pytest.approx(math.cos(chi / 2) ** 2, abs=1e-15)

    def test_spin_half_pi_over_three(self):
        c, s = math.cos(math.pi / 6), math.sin(math.pi / 6)
        np.testing.assert_allclose(wigner_small_d("1/2", math.pi / 3), [[c, -s], [s, c]], atol=1e-15)

    @pytest.mark.parametrize("tj", range(0, 13))
    def test_matches_matrix_exponential(self, tj):
        for beta in (0.1, 1.3, 2.9, math.pi):
            np.testing.assert_allclose(wigner_small_d(HalfInt(tj), beta), small_d_expm(tj / 2, beta), atol=1e-12)

    @pytest.mark.parametrize("tj", range(0, 13))
    def test_orthogonal_on_grid(self, tj):
        d = wigner_small_d(HalfInt(tj), np.linspace(0, math.pi, 50))
        eye = np.eye(tj + 1)
        dev = np.abs(np.einsum("bij,bkj->bik", d, d) - eye).max()
        assert dev < 1e-10

    @pytest.mark.parametrize("j", range(0, 6))
    def test_diagonal_is_jacobi(self, j):
        chi = np.linspace(0, math.pi, 31)
        d = wigner_small_d(j, chi)
        for m in range(0, j + 1):
            expected = np.cos(chi / 2) ** (2 * m) * eval_jacobi(j - m, 0, 2 * m, np.cos(chi))
            assert np.abs(d[:, j - m, j - m] - expected).max() < 1e-12

    @pytest.mark.parametrize("tj", [1, 3, 5, 7, 9])
    def test_half_integer_diagonal_is_jacobi(self, tj):
        chi = np.linspace(0, math.pi, 31)
        j = tj / 2
        d = wigner_small_d(HalfInt(tj), chi)
        for tm in range(1, tj + 1, 2):
            m = tm / 2
            expected = np.cos(chi / 2) ** (2 * m) * eval_jacobi(int(j - m), 0, 2 * m, np.cos(chi))
            assert np.abs(d[:, (tj - tm) // 2, (tj - tm) // 2] - expected).max() < 1e-12

    def test_large_j_stays_orthogonal(self):
        d = wigner_small_d(40, 1.1)
        assert np.abs(d @ d.T - np.eye(81)).max() < 1e-9


class TestFullD:
    def test_scalar(self):
        assert wigner_D_element(0, 0, 0, (1.0, 2.0, 3.0)) == 1

    def test_pure_phase(self):
        a, g = 0.4, 1.9
        val = wigner_D_element("1/2", "1/2", "1/2", (a, 0.0, g))
        assert val == pytest.approx(np.exp(1j * (a + g) / 2), abs=1e-15)

    def test_invalid_pair(self):
        with pytest.raises(InvalidIndex):
            wigner_D_element(1, "1/2", 0, (0, 0, 0))

    @settings(max_examples=60, deadline=None)
    @given(j_twice, angles, betas, angles)
    def test_unitary(self, tj, a, b, g):
        D = wigner_D_matrix(HalfInt(tj), (a, b, g))
        assert np.abs(D @ D.conj().T - np.eye(tj + 1)).max() < 1e-12

    def test_element_matches_matrix(self):
        D = wigner_D_matrix("3/2", (0.3, 1.2, 2.2))
        assert wigner_D_element("3/2", "1/2", "-3/2", (0.3, 1.2, 2.2)) == pytest.approx(D[1, 3])

    @settings(max_examples=60, deadline=None)
    @given(st.integers(0, 4), angles, betas, angles, angles, betas, angles)
    def test_composition(self, tj, a1, b1, g1, a2, b2, g2):
        g1_, g2_ = (a1, b1, g1), (a2, b2, g2)
        R = classical_rotation(g1_) @ classical_rotation(g2_)
        composed = euler_from_rotation(R)
        lhs = wigner_D_matrix(HalfInt(tj), g1_) @ wigner_D_matrix(HalfInt(tj), g2_)
        rhs = wigner_D_matrix(HalfInt(tj), composed)
        if tj % 2:
            # SU(2) double cover: half-integer spins compose up to a sign
            sign = np.sign(np.real(np.vdot(rhs, lhs)))
            rhs = sign * rhs
        assert np.abs(lhs - rhs).max() < 1e-10

    def test_spin_one_matches_classical_rotation(self):
        # spherical basis e_{+1} = -(x + i y)/sqrt2, e_0 = z, e_{-1} = (x - i y)/sqrt2
        s2 = math.sqrt(2)
        S = np.array([[-1 / s2, -1j / s2, 0], [0, 0, 1], [1 / s2, -1j / s2, 0]])
        for ang in [(0.3, 1.1, 2.0), (5.0, 0.2, 0.7), (1.0, 3.0, 4.0)]:
            D = wigner_D_matrix(1, ang)
            # positive-phase convention is the conjugate representation, which
            # acts on real vectors as the rotation seen through y -> -y
            P = np.diag([1.0, -1.0, 1.0])
            R = P @ (S.T @ D @ S.conj()) @ P
            assert np.abs(R.imag).max() < 1e-12
            assert np.abs(R.real - classical_rotation(ang)).max() < 1e-10


class TestCoherentState:
    def test_no_rotation(self):
        cs = coherent_state(2, 1, 0.0, 0.0)
        np.testing.assert_allclose(cs.amplitudes, [0, 1, 0, 0, 0], atol=1e-15)

    def test_spin_half_down(self):
        cs = coherent_state("1/2", "1/2", math.pi, 0.0)
        np.testing.assert_allclose(np.abs(cs.amplitudes), [0, 1], atol=1e-15)

    @pytest.mark.parametrize("tj,tm", [(1, 1), (2, 0), (2, -2), (3, 1), (4, 2), (5, -3)])
    def test_eigenvector_of_n_dot_J(self, tj, tm):
        j, m = tj / 2, tm / 2
        theta, phi = 1.1, 2.3
        cs = coherent_state(HalfInt(tj), HalfInt(tm), theta, phi)
        n = cs.direction()
        nJ = n[0] * jx_matrix(j) + n[1] * jy_matrix(j) + n[2] * jz_matrix(j)
        assert np.abs(nJ @ cs.amplitudes - m * cs.amplitudes).max() < 1e-10
        assert abs(np.linalg.norm(cs.amplitudes) - 1) < 1e-12

    @pytest.mark.parametrize("tj,tm", [(2, 0), (4, 2), (3, 1), (6, 0)])
    def test_overlap_is_small_d_of_angle_between(self, tj, tm):
        t1, p1, t2, p2 = 0.4, 1.0, 2.0, 4.1
        a = coherent_state(HalfInt(tj), HalfInt(tm), t1, p1)
        b = coherent_state(HalfInt(tj), HalfInt(tm), t2, p2)
        chi = math.acos(float(np.clip(a.direction() @ b.direction(), -1, 1)))
        k = (tj - tm) // 2
        expected = abs(wigner_small_d(HalfInt(tj), chi)[k, k])
        assert abs(np.vdot(a.amplitudes, b.amplitudes)) == pytest.approx(expected, abs=1e-12)


class TestClassicalRotation:
    def test_identity(self):
        np.testing.assert_allclose(classical_rotation((0, 0, 0)), np.eye(3))

    def test_beta_only(self):
        assert classical_rotation((0, 0.7, 0))[2, 2] == pytest.approx(math.cos(0.7))

    @settings(max_examples=200, deadline=None)
    @given(angles, betas, angles)
    def test_euler_identities(self, a, b, g):
        R = check_rotation(classical_rotation((a, b, g)))
        omega = rotation_angle(R)
        assert abs(np.trace(R) - (1 + 2 * math.cos(omega))) < 1e-12
        assert abs(R[2, 2] - math.cos(b)) < 1e-12
        assert abs(R[0, 0] + R[1, 1] - (1 + math.cos(b)) * math.cos(a + g)) < 1e-12

    def test_rotation_angle_examples(self):
        assert rotation_angle(np.eye(3)) == 0.0
        assert rotation_angle(classical_rotation((math.pi, 0, 0))) == pytest.approx(math.pi)

    @settings(max_examples=100, deadline=None)
    @given(angles, betas, angles)
    def test_euler_round_trip(self, a, b, g):
        R = classical_rotation((a, b, g))
        back = classical_rotation(euler_from_rotation(R))
        assert np.abs(R - back).max() < 1e-9

    def test_check_rotation_rejects_reflection(self):
        with pytest.raises(ValueError):
            check_rotation(np.diag([1.0, 1.0, -1.0]))


class TestEulerAngles:
    def test_wraps(self):
        e = EulerAngles(-0.5, 1.0, 7.0)
        assert 0 <= e.alpha < 2 * math.pi and 0 <= e.gamma < 2 * math.pi

    def test_beta_range(self):
        with pytest.raises(ValueError):
            EulerAngles(0, 4.0, 0)


@pytest.mark.parametrize("N,expected", [(1, 2), (2, 4), (3, 6), (4, 9), (5, 12), (10, 36)])
def test_hilbert_dim(N, expected):
    assert hilbert_dim(N) == expected


def test_hilbert_dim_counts_blocks():
    for N in range(1, 21):
        js = np.arange(N % 2, N + 1, 2) / 2
        assert hilbert_dim(N) == int(sum(2 * js + 1))


def test_m_values_order():
    np.testing.assert_array_equal(m_values("3/2"), [1.5, 0.5, -0.5, -1.5])
