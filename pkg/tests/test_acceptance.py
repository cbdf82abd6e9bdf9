"""Acceptance gate: one test per criterion, each at its stated tolerance."""
import warnings

import numpy as np
import pytest
from _factories import (
    balanced_jump_instance,
    random_commuting_hermitian,
    random_negative_qubit,
    random_special_instance,
    random_unitary,
)

from kmsbalance import (
    DensityMatrix,
    GkslGenerator,
    TimeReversal,
    build_qdb_theta_form,
    build_standard_form,
    check_kms_symmetric,
    check_sqdb,
    check_sqdb_theta,
    dual_generator,
    gram_triple,
    is_kms_symmetric_oracle,
    map_qdb_to_sqdb_params,
    sample_params,
    semigroup_oracle,
    superoperator_distance,
    verify_dual_relation,
)
from kmsbalance.linalg import fnorm
from kmsbalance.qubit import CASES, SIGMA_1, SIGMA_3

T_GRID = (0.1, 0.5, 1.0)
ORACLE_TOL = 1e-8


def qdb_draw(rng, eta, h3=None):
    nu = float(rng.uniform(0.1, 0.9))
    lam = float(rng.uniform(0.2, 2.0))
    mu = lam * np.sqrt((1 - nu) / nu)
    h3 = float(rng.normal()) if h3 is None else h3
    return nu, lam, mu, eta, h3


def positive_sqdb_theta_instances(rng, count):
    out = []
    cases = list(CASES)
    for k in range(count):
        if k % 3 == 2:
            nu, lam, mu, eta, h3 = qdb_draw(rng, k % 2, h3=0.0 if k % 4 == 2 else None)
            out.append(build_qdb_theta_form(nu, lam, mu, eta, h0=float(rng.normal()), h3=h3))
        else:
            out.append(build_standard_form(sample_params(cases[k % len(cases)], rng)))
    return out


# 1 ------------------------------------------------------------------------------------------


@pytest.mark.criterion(1, "dual soundness (100 random special generators)")
def test_dual_soundness():
    rng = np.random.default_rng(101)
    worst_rel = worst_double = 0.0
    for _ in range(100):
        n = int(rng.integers(2, 5))
        m = int(rng.integers(1, 5))
        gen, rho = random_special_instance(rng, n, m)
        pair = dual_generator(gen, rho)
        worst_rel = max(worst_rel, verify_dual_relation(pair, rho))
        double = dual_generator(pair.dual, rho).dual
        worst_double = max(worst_double, superoperator_distance(gen, double))
    assert worst_rel <= 1e-9
    assert worst_double <= 1e-8


# 2 ------------------------------------------------------------------------------------------


@pytest.mark.criterion(2, "structural checks agree with semigroup oracles (50/50)")
def test_structural_oracle_agreement():
    rng = np.random.default_rng(202)
    instances = [(inst, True) for inst in positive_sqdb_theta_instances(rng, 25)]
    instances += [(random_negative_qubit(rng), False) for _ in range(25)]
    theta_matches = kms_matches = kms_true = 0
    for (gen, rho, theta), expected in instances:
        structural = check_sqdb_theta(gen, rho, theta).verdict
        oracle = semigroup_oracle(gen, rho, "sqdb_theta", T_GRID, theta) <= ORACLE_TOL
        theta_matches += structural == oracle == expected
        kms = check_kms_symmetric(gen, rho).verdict
        kms_matches += kms == is_kms_symmetric_oracle(gen, rho)
        kms_true += kms
    assert theta_matches == 50
    assert kms_matches == 50
    # the positive pool must exercise both KMS verdicts
    assert 0 < kms_true < 50


# 3 ------------------------------------------------------------------------------------------


@pytest.mark.criterion(3, "qubit standard forms pass; v1 perturbation fails via the G-condition")
def test_qubit_case_regression():
    rng = np.random.default_rng(303)
    for case in CASES:
        for _ in range(20):
            p = sample_params(case, rng)
            gen, rho, theta = build_standard_form(p)
            assert check_sqdb_theta(gen, rho, theta).verdict, (case, p)
            if not CASES[case]:
                continue
            delta = 0.1 * p.v1 if abs(p.v1) > 1e-3 else 0.1
            bad = gen.with_hamiltonian(gen.H + delta * SIGMA_1)
            report = check_sqdb_theta(bad, rho, theta, check_invariance=False)
            assert not report.verdict
            assert report.residuals["g_condition"] > 1e-6, (case, report.residuals)


# 4 ------------------------------------------------------------------------------------------


@pytest.mark.criterion(4, "discrimination fixture: kms false, sqdb true, sqdb-theta true")
def test_discrimination_fixture():
    gen = GkslGenerator(SIGMA_3, (SIGMA_1,))
    rho = DensityMatrix.maximally_mixed(2)
    theta = TimeReversal.conjugation(2)
    kms, sqdb, sqdb_t = check_kms_symmetric(gen, rho), check_sqdb(gen, rho), check_sqdb_theta(gen, rho, theta)
    assert (kms.verdict, sqdb.verdict, sqdb_t.verdict) == (False, True, True)
    np.testing.assert_allclose(sqdb.matching_unitary, [[1.0]], atol=1e-12)
    np.testing.assert_allclose(sqdb_t.matching_unitary, [[1.0]], atol=1e-12)
    K = sqdb.K
    scale = np.real(np.trace(K @ SIGMA_3)) / 2
    assert abs(scale) > 0.1
    assert fnorm(K - scale * SIGMA_3) <= 1e-12


# 5 ------------------------------------------------------------------------------------------


@pytest.mark.criterion(5, "diagonal-Hamiltonian family embeds into the standard form")
def test_qdb_theta_embedding():
    rng = np.random.default_rng(505)
    for k in range(20):
        nu, lam, mu, eta, h3 = qdb_draw(rng, k % 2)
        direct = build_qdb_theta_form(nu, lam, mu, eta, h3=h3)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            mapped = build_standard_form(map_qdb_to_sqdb_params(nu, lam, mu, eta, h3=h3))
        assert superoperator_distance(direct[0], mapped[0]) <= 1e-8
        assert check_sqdb_theta(*direct).verdict
        assert check_sqdb_theta(*mapped).verdict


# 6 ------------------------------------------------------------------------------------------


@pytest.mark.criterion(6, "Gram identity for families with equal spans")
def test_gram_identity():
    rng = np.random.default_rng(606)
    for _ in range(100):
        m = int(rng.integers(1, 5))
        dim = int(rng.integers(m, 9))
        xi = rng.normal(size=(dim, m)) + 1j * rng.normal(size=(dim, m))
        mix = rng.normal(size=(m, m)) + 1j * rng.normal(size=(m, m))
        eta = xi @ mix
        g = gram_triple(list(xi.T), list(eta.T))
        assert g.same_span
        assert g.identity_residual <= 1e-9


# 7 ------------------------------------------------------------------------------------------


def _gauge_instances(rng):
    out = []
    for k in range(50):
        if k % 2 == 0:
            out.append(balanced_jump_instance(rng, 2 + k % 3))
        elif k % 4 == 1:
            nu, lam, mu, eta, h3 = qdb_draw(rng, 1)
            out.append(build_qdb_theta_form(nu, lam, mu, eta, h3=h3))
        else:
            out.append(random_negative_qubit(rng))
    return out


@pytest.mark.criterion(7, "sqdb verdict invariant under Kraus mixing and commuting H shifts")
def test_gauge_invariance():
    rng = np.random.default_rng(707)
    flips = 0
    verdicts = []
    for gen, rho, _ in _gauge_instances(rng):
        before = check_sqdb(gen, rho).verdict
        u = random_unitary(rng, gen.m)
        mixed = [sum(u[l, j] * L for j, L in enumerate(gen.kraus)) for l in range(gen.m)]
        moved = GkslGenerator(gen.H + random_commuting_hermitian(rng, rho), tuple(mixed))
        after = check_sqdb(moved, rho).verdict
        flips += before != after
        verdicts.append(before)
    assert flips == 0
    assert any(verdicts) and not all(verdicts)


# 8 ------------------------------------------------------------------------------------------


@pytest.mark.criterion(8, "spectral witness of U_theta and unitary T-symmetric U")
def test_spectral_witness():
    rng = np.random.default_rng(808)
    theta_passing = sqdb_passing = 0
    for gen, rho, theta in positive_sqdb_theta_instances(rng, 40) + _gauge_instances(rng):
        rep = check_sqdb_theta(gen, rho, theta)
        if rep.verdict:
            theta_passing += 1
            for z in rep.spectrum:
                assert min(abs(z - 1), abs(z + 1)) <= 1e-8
        sq = check_sqdb(gen, rho)
        if sq.verdict:
            sqdb_passing += 1
            U = sq.matching_unitary
            assert fnorm(U.conj().T @ U - np.eye(gen.m)) <= 1e-9
            assert fnorm(U - U.T) <= 1e-9
    assert theta_passing > 0 and sqdb_passing > 0
