import numpy as np
import pytest
from _factories import random_generator, random_hermitian, random_state, random_unitary
from hypothesis import given, settings
from hypothesis import strategies as st

from kmsbalance import (
    DensityMatrix,
    GkslGenerator,
    is_special,
    make_special,
    normalize,
    representation_equivalent,
    superoperator_distance,
)
from kmsbalance.exceptions import NotSpecial
from kmsbalance.linalg import fnorm
from kmsbalance.qubit import SIGMA_1, SIGMA_2, SIGMA_3
from kmsbalance.special import gauge_shift, require_special

HALF = DensityMatrix.maximally_mixed(2)
ZERO_H = np.zeros((2, 2))


def test_sigma1_is_special():
    assert is_special(GkslGenerator(ZERO_H, (SIGMA_1,)), HALF).is_special


def test_nonzero_mean_is_not_special():
    rep = is_special(GkslGenerator(ZERO_H, (SIGMA_1 + np.eye(2),)), HALF)
    assert not rep.is_special
    assert abs(rep.zero_mean_residuals[0] - 1.0) < 1e-12


def test_collinear_pair_is_not_special():
    rep = is_special(GkslGenerator(ZERO_H, (SIGMA_1, 2 * SIGMA_1)), HALF)
    assert not rep.is_special
    assert rep.independence_min_singular <= 1e-10
    with pytest.raises(NotSpecial):
        require_special(GkslGenerator(ZERO_H, (SIGMA_1, 2 * SIGMA_1)), HALF)


def test_normalize_fixed_point():
    gen = GkslGenerator(SIGMA_3, (SIGMA_1, SIGMA_2))
    out, log = normalize(gen, HALF)
    assert out.m == 2 and log.kraus_out == log.kraus_in == 2
    assert superoperator_distance(gen, out) <= 1e-12


def test_normalize_removes_mean():
    gen = GkslGenerator(ZERO_H, (SIGMA_1 + np.eye(2),))
    out, log = normalize(gen, HALF)
    assert out.m == 1
    L = out.kraus[0]
    phase = np.trace(L @ SIGMA_1) / 2
    assert fnorm(L - phase * SIGMA_1) <= 1e-12
    # Hermitian L with real mean: the compensating H shift vanishes
    assert log.hamiltonian_shift_norm < 1e-14
    assert superoperator_distance(gen, out) <= 1e-8
    assert is_special(out, HALF).is_special


def test_complex_mean_shifts_hamiltonian():
    gen = GkslGenerator(ZERO_H, (np.array([[0, 1], [0, 0]]) + 0.5j * np.eye(2),))
    out, log = normalize(gen, HALF)
    np.testing.assert_allclose(log.gauge_shifts, [0.5j])
    assert log.hamiltonian_shift_norm > 0.1
    assert superoperator_distance(gen, out) <= 1e-8


def test_normalize_merges_duplicates():
    gen = GkslGenerator(ZERO_H, (SIGMA_1, SIGMA_1))
    out, log = normalize(gen, HALF)
    assert out.m == 1 and log.kraus_in - log.kraus_out == 1
    L = out.kraus[0]
    assert abs(abs(np.trace(L @ SIGMA_1) / 2) - np.sqrt(2)) < 1e-12
    assert superoperator_distance(gen, out) <= 1e-12


def test_gauge_shift_preserves_generator():
    rng = np.random.default_rng(7)
    gen = random_generator(rng, 3, 2)
    shifted = gauge_shift(gen, (0.3 + 0.1j, -0.5j))
    assert superoperator_distance(gen, shifted) <= 1e-12


def test_equivalence_examples():
    gen = GkslGenerator(SIGMA_3, (SIGMA_1,))
    same = representation_equivalent(gen, gen)
    assert same and abs(same.c) < 1e-14
    np.testing.assert_allclose(same.unitary, [[1.0]])
    phase = np.exp(1j * np.pi / 3)
    rot = representation_equivalent(gen, GkslGenerator(SIGMA_3, (phase * SIGMA_1,)))
    assert rot
    np.testing.assert_allclose(rot.unitary, [[phase]], atol=1e-12)
    assert not representation_equivalent(GkslGenerator(ZERO_H, (SIGMA_1,)), GkslGenerator(ZERO_H, (SIGMA_2,)))


def test_equivalence_reports_shift():
    gen = GkslGenerator(SIGMA_3, (SIGMA_1,))
    res = representation_equivalent(gen, GkslGenerator(SIGMA_3 + 0.4 * np.eye(2), (SIGMA_1,)))
    assert res and abs(res.c - 0.4) < 1e-12


@settings(max_examples=30, deadline=None)
@given(st.integers(2, 4), st.integers(1, 5), st.integers(0, 2**32 - 1))
def test_normalize_gives_special_equivalent(n, m, seed):
    rng = np.random.default_rng(seed)
    gen = random_generator(rng, n, min(m, n * n))
    # add a scalar component and a repeated operator to exercise both steps
    kraus = list(gen.kraus) + [gen.kraus[0] + 0.7 * np.eye(n)]
    if len(kraus) > n * n:
        kraus = kraus[1:]
    gen = gen.with_kraus(kraus)
    rho = random_state(rng, n)
    out = make_special(gen, rho)
    assert is_special(out, rho).is_special
    assert representation_equivalent(gen, out)


@settings(max_examples=30, deadline=None)
@given(st.integers(2, 3), st.integers(1, 3), st.integers(0, 2**32 - 1))
def test_unitary_mixing_is_equivalent(n, m, seed):
    rng = np.random.default_rng(seed)
    gen = random_generator(rng, n, m)
    u = random_unitary(rng, m)
    c = float(rng.normal())
    mixed = GkslGenerator(gen.H + c * np.eye(n), tuple(sum(u[l, j] * L for j, L in enumerate(gen.kraus)) for l in range(m)))
    res = representation_equivalent(gen, mixed)
    assert res
    np.testing.assert_allclose(res.unitary, u, atol=1e-8)
    assert abs(res.c - c) < 1e-8
    assert not representation_equivalent(gen, gen.with_hamiltonian(gen.H + random_hermitian(rng, n, 0.5)))
