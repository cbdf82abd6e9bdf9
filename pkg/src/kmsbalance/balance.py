"""Decision procedures for KMS-symmetry, SQDB and SQDB-theta.

All structural checks take a special representation ``(H, L_l)`` with respect
to a faithful invariant state rho and work with the Hilbert-Schmidt families

    X_l = L_l rho^1/2,    Y_l = rho^1/2 L_l^*,    Z_l = rho^1/2 theta L_l^* theta,

and the matrices ``C = <X, X>``, ``B = <X, Y>``, ``R = <X, Z>``.  The
semigroup-level trace identities are provided separately as ground truth.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from .duality import dual_generator, require_invariant
from .exceptions import NotSpecial, ShapeMismatch, ThetaRhoNoncommuting
from .gksl import SCHRODINGER, DensityMatrix, GkslGenerator, TimeReversal, semigroup_matrix
from .linalg import Tolerances, dag, fnorm, matrix_units, resolve_tol, subspace_gap, threshold, unvec, vec
from .special import require_special

DEFAULT_T_GRID = (0.1, 0.5, 1.0)
ORACLE_THRESHOLD = 1e-8


@dataclass(frozen=True)
class CovTriple:
    B: np.ndarray
    C: np.ndarray
    R: np.ndarray | None
    checks: dict = field(default_factory=dict)


@dataclass
class CheckReport:
    """Verdict of one structural check plus everything needed to audit it.

    ``residuals[name] <= thresholds[name]`` for every name exactly when
    ``verdict`` is true.
    """

    condition: str
    verdict: bool
    residuals: dict
    thresholds: dict
    matching_unitary: np.ndarray | None = None
    c_scalar: float | None = None
    K: np.ndarray | None = None
    spectrum: np.ndarray | None = None

    def __bool__(self):
        return self.verdict

    def failed(self) -> list[str]:
        return [k for k, v in self.residuals.items() if not v <= self.thresholds[k]]

    def as_dict(self) -> dict:
        from .io import encode_matrix

        out = {
            "condition": self.condition,
            "verdict": self.verdict,
            "residuals": {k: float(v) for k, v in self.residuals.items()},
            "thresholds": {k: float(v) for k, v in self.thresholds.items()},
            "failed": self.failed(),
        }
        if self.matching_unitary is not None:
            out["matching_unitary"] = encode_matrix(self.matching_unitary)
        if self.c_scalar is not None:
            out["c"] = float(self.c_scalar)
        if self.K is not None:
            out["K"] = encode_matrix(self.K)
        if self.spectrum is not None:
            out["spectrum"] = [[float(z.real), float(z.imag)] for z in self.spectrum]
        return out


def _report(condition, items, **witnesses) -> CheckReport:
    residuals = {k: float(r) for k, (r, _) in items.items()}
    thresholds = {k: float(t) for k, (_, t) in items.items()}
    verdict = all(residuals[k] <= thresholds[k] for k in residuals)
    return CheckReport(condition, verdict, residuals, thresholds, **witnesses)


def theta_rho_compatibility(rho: DensityMatrix, theta: TimeReversal, tol: Tolerances | None = None) -> bool:
    """Whether ``theta rho theta == rho``."""
    tol = resolve_tol(tol)
    if theta.dim != rho.dim:
        raise ShapeMismatch("time reversal and state dimensions differ")
    return fnorm(theta.conjugate(rho.rho) - rho.rho) <= threshold(rho.rho, tol.eq_tol)


def pairing_identity_defect(rho: DensityMatrix, theta: TimeReversal) -> float:
    """Largest ``|tr(s x s y) - tr(s theta y^* theta s theta x^* theta)|`` over matrix-unit pairs, ``s = rho^1/2``."""
    s = rho.sqrt_rho
    units = list(matrix_units(rho.dim))
    worst = 0.0
    for x in units:
        tx = theta.conjugate(dag(x))
        for y in units:
            lhs = np.trace(s @ x @ s @ y)
            rhs = np.trace(s @ theta.conjugate(dag(y)) @ s @ tx)
            worst = max(worst, abs(lhs - rhs))
    return worst


def _require_theta(rho, theta, tol):
    if theta is None:
        raise ValueError("a time reversal is required")
    if not theta_rho_compatibility(rho, theta, tol):
        raise ThetaRhoNoncommuting("time reversal does not commute with the invariant state")


def _preconditions(gen, rho, tol, check_invariance):
    if gen.dim != rho.dim:
        raise ShapeMismatch(f"generator dimension {gen.dim} != state dimension {rho.dim}")
    require_special(gen, rho, tol)
    if check_invariance:
        require_invariant(gen, rho, tol)


def cov_matrices(gen: GkslGenerator, rho: DensityMatrix, theta: TimeReversal | None = None,
                 tol: Tolerances | None = None) -> CovTriple:
    """``b_kj = tr(s L_k^* s L_j^*)``, ``c_kj = tr(rho L_k^* L_j)``, ``R_jk = tr(s L_j^* s theta L_k^* theta)``."""
    tol = resolve_tol(tol)
    require_special(gen, rho, tol)
    s = rho.sqrt_rho
    Ls = gen.kraus
    m = len(Ls)
    B = np.zeros((m, m), dtype=complex)
    C = np.zeros((m, m), dtype=complex)
    for k in range(m):
        for j in range(m):
            B[k, j] = np.trace(s @ dag(Ls[k]) @ s @ dag(Ls[j]))
            C[k, j] = np.trace(rho.rho @ dag(Ls[k]) @ Ls[j])
    R = None
    if theta is not None:
        R = np.zeros((m, m), dtype=complex)
        for j in range(m):
            for k in range(m):
                R[j, k] = np.trace(s @ dag(Ls[j]) @ s @ theta.conjugate(dag(Ls[k])))
    checks = {
        "C_hermitian_defect": fnorm(C - dag(C)),
        "C_min_eigenvalue": float(np.linalg.eigvalsh(0.5 * (C + dag(C)))[0]) if m else np.inf,
        "B_symmetry_defect": fnorm(B - B.T),
    }
    if R is not None:
        checks["R_selfadjoint_defect"] = fnorm(R - dag(R))
    return CovTriple(B, C, R, checks)


def _solve_spd(C, rhs, tol):
    if C.shape[0] == 0:
        return np.zeros((0, 0), dtype=complex)
    if np.linalg.eigvalsh(0.5 * (C + dag(C)))[0] <= tol.rank_tol:
        raise NotSpecial("covariance matrix C is singular; the Kraus family is not independent")
    return scipy.linalg.solve(0.5 * (C + dag(C)), rhs, assume_a="pos")


def _families(gen, rho, theta=None):
    s = rho.sqrt_rho
    X = np.column_stack([vec(L @ s) for L in gen.kraus]) if gen.kraus else np.zeros((gen.dim**2, 0))
    Y = np.column_stack([vec(s @ dag(L)) for L in gen.kraus]) if gen.kraus else np.zeros((gen.dim**2, 0))
    Z = None
    if theta is not None:
        Z = np.column_stack([vec(s @ theta.conjugate(dag(L))) for L in gen.kraus]) if gen.kraus else np.zeros((gen.dim**2, 0))
    return X, Y, Z


def _unitary_items(U, m, tol, symmetric: bool):
    eq = tol.eq_tol
    items = {"unitarity": (fnorm(dag(U) @ U - np.eye(m)), eq * (1 + np.sqrt(m)))}
    if symmetric:
        items["t_symmetry"] = (fnorm(U - U.T), eq * (1 + fnorm(U)))
    else:
        items["self_adjoint"] = (fnorm(U - dag(U)), eq * (1 + fnorm(U)))
    return items


def _sqdb_structure(gen, rho, tol):
    """Span equality of X and Y plus the properties of ``U = C^-1 B``."""
    m = gen.m
    cov = cov_matrices(gen, rho, tol=tol)
    X, Y, _ = _families(gen, rho)
    U = _solve_spd(cov.C, cov.B, tol)
    items = {"span_gap": (subspace_gap(X, Y, tol.rank_tol), tol.eq_tol * (1 + np.sqrt(m)))}
    items.update(_unitary_items(U, m, tol, symmetric=True))
    CB = cov.C @ cov.B
    items["cb_commutation"] = (fnorm(CB - cov.B @ cov.C.T), tol.eq_tol * (1 + fnorm(CB)))
    return U, items


def check_kms_symmetric(gen: GkslGenerator, rho: DensityMatrix, tol: Tolerances | None = None,
                        check_invariance: bool = True) -> CheckReport:
    """``G rho^1/2 = rho^1/2 G^* + i c rho^1/2`` with real ``c``, and
    ``rho^1/2 L_k^* = sum_l u_kl L_l rho^1/2`` with ``u`` unitary and T-symmetric."""
    tol = resolve_tol(tol)
    _preconditions(gen, rho, tol, check_invariance)
    s = rho.sqrt_rho
    G = gen.G
    D = G @ s - s @ dag(G)
    c = np.trace(s @ D) / (1j * np.trace(rho.rho).real)
    items = {
        "g_condition": (fnorm(D - 1j * c.real * s), tol.eq_tol * (1 + fnorm(G @ s))),
        "c_imag": (abs(c.imag), tol.eq_tol),
    }
    U, structure = _sqdb_structure(gen, rho, tol)
    items.update(structure)
    return _report("kms", items, matching_unitary=U, c_scalar=float(c.real))


def check_sqdb(gen: GkslGenerator, rho: DensityMatrix, tol: Tolerances | None = None,
               check_invariance: bool = True) -> CheckReport:
    """Equal HS spans of ``{rho^1/2 L^*}`` and ``{L rho^1/2}``, ``C^-1 B`` unitary and
    T-symmetric, ``CB = BC^T``; then the Hamiltonian witness ``K`` of ``G = G' + 2iK + ic``."""
    tol = resolve_tol(tol)
    _preconditions(gen, rho, tol, check_invariance)
    U, items = _sqdb_structure(gen, rho, tol)
    K = c = None
    if check_invariance:
        dual = dual_generator(gen, rho, tol).dual
        diff = gen.G - dual.G
        c = float(np.imag(np.trace(rho.rho @ diff)))
        K = (diff - 1j * c * np.eye(gen.dim)) / 2j
        scale = tol.eq_tol * (1 + fnorm(K))
        items["k_hermitian"] = (fnorm(K - dag(K)), scale)
        items["k_commutes_rho"] = (fnorm(K @ rho.rho - rho.rho @ K), scale)
    return _report("sqdb", items, matching_unitary=U, c_scalar=c, K=K)


def check_sqdb_theta(gen: GkslGenerator, rho: DensityMatrix, theta: TimeReversal,
                     tol: Tolerances | None = None, check_invariance: bool = True) -> CheckReport:
    """``rho^1/2 theta G^* theta = G rho^1/2``, equal spans of ``{rho^1/2 theta L^* theta}`` and
    ``{L rho^1/2}``, ``C^-1 R`` unitary and self-adjoint, ``CR = RC``."""
    tol = resolve_tol(tol)
    _require_theta(rho, theta, tol)
    _preconditions(gen, rho, tol, check_invariance)
    m = gen.m
    s = rho.sqrt_rho
    G = gen.G
    eq = tol.eq_tol
    items = {"g_condition": (fnorm(s @ theta.conjugate(dag(G)) - G @ s), eq * (1 + fnorm(G @ s)))}
    cov = cov_matrices(gen, rho, theta, tol)
    X, _, Z = _families(gen, rho, theta)
    items["span_gap"] = (subspace_gap(X, Z, tol.rank_tol), eq * (1 + np.sqrt(m)))
    U = _solve_spd(cov.C, cov.R, tol)
    items.update(_unitary_items(U, m, tol, symmetric=False))
    CR = cov.C @ cov.R
    items["cr_commutation"] = (fnorm(CR - cov.R @ cov.C), eq * (1 + fnorm(CR)))
    spectrum = np.linalg.eigvals(U) if m else np.zeros(0, dtype=complex)
    off = max((min(abs(z - 1), abs(z + 1)) for z in spectrum), default=0.0)
    items["spectrum"] = (off, eq * (1 + np.sqrt(m)))
    return _report("sqdb_theta", items, matching_unitary=U, spectrum=np.sort_complex(spectrum))


# -- semigroup-level ground truth ---------------------------------------------------------------


def semigroup_oracle(gen: GkslGenerator, rho: DensityMatrix, condition: str,
                     t_grid=DEFAULT_T_GRID, theta: TimeReversal | None = None,
                     tol: Tolerances | None = None) -> float:
    """Largest defect of the defining trace identity over matrix units and ``t_grid``.

    ``condition="kms"``: ``rho^1/2 T_t(x) rho^1/2 = T_{*t}(rho^1/2 x rho^1/2)``.
    ``condition="sqdb_theta"``:
    ``tr(s x s T_t(y)) = tr(s theta y^* theta s T_t(theta x^* theta))``.
    """
    tol = resolve_tol(tol)
    condition = condition.replace("-", "_")
    n = rho.dim
    s = rho.sqrt_rho
    units = list(matrix_units(n))
    if condition == "sqdb_theta":
        _require_theta(rho, theta, tol)
    elif condition != "kms":
        raise ValueError(f"unknown condition {condition!r}")
    worst = 0.0
    for t in t_grid:
        T = semigroup_matrix(gen, t)
        if condition == "kms":
            Tstar = semigroup_matrix(gen, t, SCHRODINGER)
            for x in units:
                lhs = s @ unvec(T @ vec(x)) @ s
                rhs = unvec(Tstar @ vec(s @ x @ s))
                worst = max(worst, fnorm(lhs - rhs))
        else:
            P = np.array([s @ x @ s for x in units])
            Ty = np.array([unvec(T[:, b]) for b in range(n * n)])
            F = np.array([s @ theta.conjugate(dag(y)) @ s for y in units])
            Q = np.array([unvec(T @ vec(theta.conjugate(dag(x)))) for x in units])
            lhs = np.einsum("aij,bji->ab", P, Ty)
            rhs = np.einsum("bij,aji->ab", F, Q)
            worst = max(worst, float(np.max(np.abs(lhs - rhs))))
    return worst


# -- equal variances --------------------------------------------------------------------------


@dataclass(frozen=True)
class VarianceViolation:
    k: int
    l: int
    coupling: float
    variance_k: float
    variance_l: float


def equal_variance_property(gen: GkslGenerator, rho: DensityMatrix, theta: TimeReversal | None = None,
                            tol: Tolerances | None = None) -> list[VarianceViolation]:
    """Coupled Kraus pairs with unequal variances ``tr(rho L^* L)``.

    The family is first rotated so that the ``L_l rho^1/2`` are HS-orthogonal;
    on SQDB (or SQDB-theta when ``theta`` is given) generators the list is empty.
    """
    tol = resolve_tol(tol)
    cov = cov_matrices(gen, rho, tol=tol)
    if gen.m == 0:
        return []
    _, V = np.linalg.eigh(0.5 * (cov.C + dag(cov.C)))
    rotated = gen.with_kraus([sum(V[n, k] * L for n, L in enumerate(gen.kraus)) for k in range(gen.m)])
    cov = cov_matrices(rotated, rho, theta, tol)
    coupling = cov.B if theta is None else cov.R
    var = np.real(np.diag(cov.C))
    out = []
    for k in range(gen.m):
        for l in range(k + 1, gen.m):
            strength = max(abs(coupling[k, l]), abs(coupling[l, k]))
            if strength > tol.eq_tol and abs(var[k] - var[l]) > tol.eq_tol:
                out.append(VarianceViolation(k, l, float(strength), float(var[k]), float(var[l])))
    return out
