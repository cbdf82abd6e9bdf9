import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from kmsbalance.exceptions import NotHermitian, NotPositive, ShapeMismatch, Singular
from kmsbalance.linalg import (
    Tolerances,
    hermitian_eig,
    matrix_function,
    matrix_units,
    orthonormal_basis,
    subspace_gap,
    unvec,
    vec,
)
from kmsbalance.qubit import SIGMA_1, SIGMA_3


def test_eig_identity():
    w, v = hermitian_eig(np.eye(2))
    np.testing.assert_allclose(w, [1, 1])
    np.testing.assert_allclose(v.conj().T @ v, np.eye(2), atol=1e-14)


def test_eig_sigma3_descending():
    w, _ = hermitian_eig(SIGMA_3)
    np.testing.assert_allclose(w, [1, -1])


def test_eig_sigma1_vectors():
    w, v = hermitian_eig(SIGMA_1)
    np.testing.assert_allclose(w, [1, -1])
    expected = np.array([[1, 1], [1, -1]]) / np.sqrt(2)
    for j in range(2):
        assert abs(abs(np.vdot(expected[:, j], v[:, j])) - 1) < 1e-12


def test_eig_rejects_non_hermitian():
    with pytest.raises(NotHermitian):
        hermitian_eig(np.array([[0, 1], [0, 0]]))


def test_matrix_functions():
    np.testing.assert_allclose(matrix_function(np.diag([0.25, 0.75]), "sqrt"), np.diag([0.5, np.sqrt(3) / 2]))
    np.testing.assert_allclose(matrix_function(np.eye(2) / 2, "inv_sqrt"), np.sqrt(2) * np.eye(2))
    np.testing.assert_allclose(matrix_function(np.zeros((2, 2)), "exp"), np.eye(2))


def test_matrix_function_errors():
    with pytest.raises(NotPositive):
        matrix_function(np.diag([1.0, -0.5]), "sqrt")
    with pytest.raises(Singular):
        matrix_function(np.diag([1.0, 0.0]), "inv_sqrt")
    with pytest.raises(ValueError):
        matrix_function(np.eye(2), "log")


def test_vec_column_stacking():
    np.testing.assert_array_equal(vec(np.eye(2)), [1, 0, 0, 1])
    np.testing.assert_array_equal(vec(SIGMA_1), [0, 1, 1, 0])
    np.testing.assert_array_equal(vec(np.array([[1, 2], [3, 4]])), [1, 3, 2, 4])


def test_vec_kron_identity():
    rng = np.random.default_rng(1)
    x = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
    np.testing.assert_allclose(vec(SIGMA_3 @ x @ SIGMA_1), np.kron(SIGMA_1.T, SIGMA_3) @ vec(x))


def test_unvec_rejects_bad_length():
    with pytest.raises(ShapeMismatch):
        unvec(np.zeros(3))


def test_matrix_units_order():
    units = list(matrix_units(2))
    for k, u in enumerate(units):
        np.testing.assert_array_equal(vec(u), np.eye(4)[k])


def test_tolerances_validated():
    with pytest.raises(ValueError):
        Tolerances(eq_tol=0.0)
    assert Tolerances().replace(eq_tol=1e-6).eq_tol == 1e-6


def test_subspace_gap():
    a = np.eye(4)[:, :2]
    assert subspace_gap(a, a @ np.array([[1, 2], [3, 4]]), 1e-10) < 1e-12
    assert abs(subspace_gap(a, np.eye(4)[:, 2:], 1e-10) - 2.0) < 1e-12
    assert orthonormal_basis(np.zeros((3, 2)), 1e-10).shape == (3, 0)


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 5), st.integers(0, 2**32 - 1))
def test_eig_reconstructs(n, seed):
    rng = np.random.default_rng(seed)
    a = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    h = a + a.conj().T
    w, v = hermitian_eig(h)
    assert np.all(np.diff(w) <= 1e-12)
    np.testing.assert_allclose((v * w) @ v.conj().T, h, atol=1e-10)


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 4), st.integers(0, 2**32 - 1))
def test_sqrt_squares_back(n, seed):
    rng = np.random.default_rng(seed)
    a = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    p = a @ a.conj().T + 0.1 * np.eye(n)
    s = matrix_function(p, "sqrt")
    np.testing.assert_allclose(s @ s, p, atol=1e-10)
    np.testing.assert_allclose(s @ matrix_function(p, "inv_sqrt"), np.eye(n), atol=1e-8)
