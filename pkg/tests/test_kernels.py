import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gauss_reduce.errors import InvalidInput, SingularInput
from gauss_reduce.kernels import (
    ToleranceConfig,
    complete_unitary,
    eigh_symmetric,
    group_degenerate,
    max_abs,
    polar_decompose,
    svd,
    takagi,
    unitarity_residual,
)
from gauss_reduce.bogoliubov import random_transform, to_real_symplectic

from conftest import haar


def test_tolerance_defaults_and_validation():
    tol = ToleranceConfig()
    assert tol.structural_tol == 1e-10 and tol.degeneracy_tol == 1e-8
    with pytest.raises(InvalidInput):
        ToleranceConfig(structural_tol=0.0)
    with pytest.raises(InvalidInput):
        ToleranceConfig(degeneracy_tol=-1.0)


def test_tolerance_env_override(monkeypatch):
    monkeypatch.setenv("GAUSS_REDUCE_TOL", "1e-9")
    assert ToleranceConfig.from_env().structural_tol == 1e-9
    assert ToleranceConfig.from_env(structural_tol=1e-7).structural_tol == 1e-7
    monkeypatch.setenv("GAUSS_REDUCE_TOL", "oops")
    with pytest.raises(InvalidInput):
        ToleranceConfig.from_env()


class TestSVD:
    def test_identity(self):
        U, s, V = svd(np.eye(2))
        assert np.allclose(s, [1, 1])
        assert np.allclose(U @ V.conj().T, np.eye(2))

    def test_diagonal(self):
        _, s, _ = svd(np.diag([1.0, 2.0]))
        assert np.allclose(s, [2, 1])

    def test_qnd_matrix_degenerate(self):
        _, s, _ = svd([[1, -0.5], [0.5, 1]])
        assert np.allclose(s, [np.sqrt(5) / 2] * 2, atol=1e-15)

    def test_gauge_first_entry_real_positive(self):
        M = haar(5, 3) @ np.diag([3, 2, 1, 0.5, 0.1]) @ haar(5, 4)
        U, s, V = svd(M)
        for j in range(5):
            first = U[np.flatnonzero(np.abs(U[:, j]) > 1e-12)[0], j]
            assert abs(first.imag) < 1e-14 and first.real > 0
        assert max_abs(U @ np.diag(s) @ V.conj().T - M) < 1e-13

    def test_rejects_nonfinite(self):
        with pytest.raises(InvalidInput):
            svd([[np.nan, 0], [0, 1]])

    @settings(max_examples=30, deadline=None)
    @given(seed=st.integers(0, 10**6), n=st.integers(1, 16))
    def test_unitary_invariance_of_singular_values(self, seed, n):
        rng = np.random.default_rng(seed)
        M = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
        _, s0, _ = svd(M)
        _, s1, _ = svd(haar(n, seed + 1) @ M @ haar(n, seed + 2))
        assert np.all(np.abs(s1 - s0) <= 1e-12 * max(1.0, s0[0]) * 10)

    def test_deterministic(self):
        M = haar(6, 1) @ np.diag(np.arange(1, 7.0)) @ haar(6, 2)
        a, b = svd(M), svd(M)
        for x, y in zip(a, b):
            assert np.array_equal(x, y)


class TestEigh:
    def test_identity(self):
        w, O = eigh_symmetric(np.eye(3))
        assert np.allclose(w, 1) and np.allclose(O, np.eye(3))

    def test_pauli_x(self):
        w, O = eigh_symmetric([[0.0, 1.0], [1.0, 0.0]])
        assert np.allclose(w, [1, -1])
        assert np.allclose(O[:, 0], [1 / np.sqrt(2), 1 / np.sqrt(2)])
        assert np.allclose(O[:, 1], [1 / np.sqrt(2), -1 / np.sqrt(2)])

    def test_random_round_trip(self, rng):
        X = rng.normal(size=(6, 6))
        M = X + X.T
        w, O = eigh_symmetric(M)
        assert np.all(np.diff(w) <= 0)
        assert max_abs(O @ np.diag(w) @ O.T - M) < 1e-12
        assert max_abs(O.T @ O - np.eye(6)) < 1e-12

    def test_rejects_asymmetric(self):
        with pytest.raises(InvalidInput):
            eigh_symmetric([[0.0, 1.0], [0.0, 0.0]])


class TestPolar:
    def test_orthogonal_input(self):
        c, s = np.cos(0.3), np.sin(0.3)
        R = np.array([[c, -s], [s, c]])
        O, P = polar_decompose(R)
        assert np.allclose(O, R) and np.allclose(P, np.eye(2))

    def test_diagonal(self):
        O, P = polar_decompose(np.diag([2.0, 3.0]))
        assert np.allclose(O, np.eye(2)) and np.allclose(P, np.diag([2, 3]))

    def test_random_symplectic(self):
        S = to_real_symplectic(random_transform(4, 1.5, seed=9))
        O, P = polar_decompose(S)
        assert max_abs(O @ P - S) < 1e-10
        assert max_abs(O.T @ O - np.eye(8)) < 1e-12
        assert max_abs(P @ P - S.T @ S) < 1e-10
        assert np.all(np.linalg.eigvalsh(P) > 0)

    def test_singular(self):
        with pytest.raises(SingularInput):
            polar_decompose(np.array([[1.0, 0.0], [0.0, 0.0]]))


class TestTakagi:
    def test_zero(self):
        _, d = takagi(np.zeros((3, 3)))
        assert np.array_equal(d, np.zeros(3))

    def test_diagonal(self):
        W, d = takagi(np.diag([0.5, 0.2]))
        assert np.allclose(d, [0.5, 0.2]) and np.allclose(W, np.eye(2))

    @pytest.mark.parametrize("d0", [[0.9, 0.6, 0.3, 0.1], [0.7, 0.7, 0.2, 0.0], [0.5, 0.0, 0.0, 0.0]])
    def test_construct_then_factor(self, d0):
        W0 = haar(4, 11)
        M = W0 @ np.diag(d0) @ W0.T
        W, d = takagi(M)
        assert np.allclose(d, d0, atol=1e-10)
        assert max_abs(W @ np.diag(d) @ W.T - M) < 1e-10
        assert unitarity_residual(W) < 1e-12

    def test_rejects_nonsymmetric(self):
        with pytest.raises(InvalidInput):
            takagi([[0, 1], [0, 0]])


@settings(max_examples=25, deadline=None)
@given(seed=st.integers(0, 10**6), n=st.integers(1, 16))
def test_factorization_residuals_random(seed, n):
    rng = np.random.default_rng(seed)
    X = rng.normal(size=(n, n))
    w, O = eigh_symmetric(X + X.T)
    assert max_abs(O @ np.diag(w) @ O.T - (X + X.T)) < 1e-10
    Z = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    W, d = takagi(Z + Z.T)
    assert max_abs(W @ np.diag(d) @ W.T - (Z + Z.T)) < 1e-10
    U, s, V = svd(Z)
    assert max_abs(U @ np.diag(s) @ V.conj().T - Z) < 1e-10


def test_group_degenerate():
    assert group_degenerate([3.0, 3.0 + 1e-12, 2.0, 1.0, 1.0], 1e-8) == [[0, 1], [2], [3, 4]]
    assert group_degenerate([], 1e-8) == []


def test_complete_unitary():
    cols = haar(5, 2)[:, :2]
    U = complete_unitary(cols, 5)
    assert unitarity_residual(U) < 1e-13
    assert np.allclose(U[:, :2], cols)
