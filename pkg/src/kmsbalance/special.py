"""Special GKSL representations.

A representation ``(H, L_1..L_m)`` is special with respect to a state rho when
every ``L_l`` has zero mean, ``tr(rho L_l) = 0``, and ``{1, L_1, .., L_m}`` is
linearly independent.  Any generator admits one; it is unique up to a real
shift of ``H`` and a unitary mixing of the ``L_l``.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .exceptions import NotSpecial, NumericalFailure, ShapeMismatch
from .gksl import DensityMatrix, GkslGenerator, to_superoperator
from .linalg import Tolerances, dag, fnorm, resolve_tol, threshold, unvec, vec


class BorderlineRankWarning(UserWarning):
    """An eigenvalue of the Kraus Gram operator sits just above ``rank_tol``."""


@dataclass(frozen=True)
class SpecialFormReport:
    zero_mean_residuals: tuple
    independence_min_singular: float
    is_special: bool


@dataclass(frozen=True)
class NormalizationLog:
    gauge_shifts: tuple = ()
    hamiltonian_shift_norm: float = 0.0
    kraus_in: int = 0
    kraus_out: int = 0
    kept_eigenvalues: tuple = ()
    borderline: bool = False
    superoperator_distance: float = 0.0

    def as_dict(self):
        return {
            "gauge_shifts": [[float(c.real), float(c.imag)] for c in self.gauge_shifts],
            "hamiltonian_shift_norm": self.hamiltonian_shift_norm,
            "kraus_in": self.kraus_in,
            "kraus_out": self.kraus_out,
            "pruned": self.kraus_in - self.kraus_out,
            "kept_eigenvalues": list(self.kept_eigenvalues),
            "borderline": self.borderline,
            "superoperator_distance": self.superoperator_distance,
        }


def _check_dims(gen: GkslGenerator, rho: DensityMatrix):
    if gen.dim != rho.dim:
        raise ShapeMismatch(f"generator dimension {gen.dim} != state dimension {rho.dim}")


def kraus_matrix(kraus) -> np.ndarray:
    """Stack ``vec(L_l)`` as columns."""
    if not kraus:
        return np.zeros((0, 0), dtype=complex)
    return np.column_stack([vec(L) for L in kraus])


def is_special(gen: GkslGenerator, rho: DensityMatrix, tol: Tolerances | None = None) -> SpecialFormReport:
    tol = resolve_tol(tol)
    _check_dims(gen, rho)
    n = gen.dim
    residuals = tuple(abs(np.trace(rho.rho @ L)) for L in gen.kraus)
    stacked = np.column_stack([vec(np.eye(n, dtype=complex))] + [vec(L) for L in gen.kraus])
    min_sv = float(np.linalg.svd(stacked, compute_uv=False)[-1]) if stacked.shape[1] <= stacked.shape[0] else 0.0
    ok = all(r <= tol.eq_tol for r in residuals) and min_sv > tol.rank_tol
    return SpecialFormReport(residuals, min_sv, ok)


def require_special(gen: GkslGenerator, rho: DensityMatrix, tol: Tolerances | None = None):
    report = is_special(gen, rho, tol)
    if not report.is_special:
        raise NotSpecial(
            "representation is not special: zero-mean residuals "
            f"{[f'{r:.2e}' for r in report.zero_mean_residuals]}, "
            f"independence singular value {report.independence_min_singular:.2e}"
        )
    return report


def superoperator_distance(gen1: GkslGenerator, gen2: GkslGenerator) -> float:
    return fnorm(to_superoperator(gen1).mat - to_superoperator(gen2).mat)


def gauge_shift(gen: GkslGenerator, shifts) -> GkslGenerator:
    """Replace ``L_l`` by ``L_l - c_l`` and compensate in ``H``; the generated map is unchanged."""
    n = gen.dim
    H = gen.H.copy()
    kraus = []
    for L, c in zip(gen.kraus, shifts):
        H -= (np.conj(c) * L - c * dag(L)) / 2j
        kraus.append(L - c * np.eye(n))
    return GkslGenerator(H, tuple(kraus), gen.tol)


def normalize(gen: GkslGenerator, rho: DensityMatrix, tol: Tolerances | None = None):
    """Special representation of the same generator, together with a log of what changed."""
    tol = resolve_tol(tol)
    _check_dims(gen, rho)
    shifts = tuple(complex(np.trace(rho.rho @ L)) for L in gen.kraus)
    shifted = gauge_shift(gen, shifts)

    kept = ()
    borderline = False
    new_kraus: list = []
    if shifted.kraus:
        # eigenpairs of P = sum vec(L) vec(L)^*  ==  squared SVD of the stacked vecs
        u, s, _ = np.linalg.svd(kraus_matrix(shifted.kraus), full_matrices=False)
        lam = s**2
        keep = lam > tol.rank_tol
        borderline = bool(np.any(keep & (lam < 10 * tol.rank_tol)))
        kept = tuple(float(x) for x in lam[keep])
        new_kraus = [s[j] * unvec(u[:, j]) for j in np.flatnonzero(keep)]
    out = GkslGenerator(shifted.H, tuple(new_kraus), gen.tol)

    dist = superoperator_distance(gen, out)
    if dist > threshold(to_superoperator(gen).mat, 10 * tol.eq_tol):
        raise NumericalFailure(f"normalization changed the generator (superoperator distance {dist:.3e})")
    if borderline:
        warnings.warn("Kraus Gram eigenvalue within a decade of rank_tol", BorderlineRankWarning, stacklevel=2)
    log = NormalizationLog(
        gauge_shifts=shifts,
        hamiltonian_shift_norm=fnorm(out.H - gen.H),
        kraus_in=gen.m,
        kraus_out=out.m,
        kept_eigenvalues=kept,
        borderline=borderline,
        superoperator_distance=dist,
    )
    return out, log


def make_special(gen: GkslGenerator, rho: DensityMatrix, tol: Tolerances | None = None) -> GkslGenerator:
    out, _ = normalize(gen, rho, tol)
    return out


@dataclass(frozen=True)
class EquivalenceResult:
    """Outcome of :func:`representation_equivalent`; truthy when the maps agree.

    When both Kraus families have the same length and are related by
    ``L2_l = sum_j unitary[l, j] L1_j`` and ``H2 = H1 + c``, the witness
    ``(unitary, c)`` is filled in.
    """

    equivalent: bool
    superoperator_distance: float
    unitary: np.ndarray | None = None
    c: float | None = None
    witness_residual: float | None = None

    def __bool__(self):
        return self.equivalent


def representation_equivalent(gen1: GkslGenerator, gen2: GkslGenerator, tol: Tolerances | None = None) -> EquivalenceResult:
    tol = resolve_tol(tol)
    if gen1.dim != gen2.dim:
        raise ShapeMismatch(f"dimensions differ: {gen1.dim} vs {gen2.dim}")
    S1 = to_superoperator(gen1).mat
    dist = superoperator_distance(gen1, gen2)
    equivalent = dist <= threshold(S1, 10 * tol.eq_tol)
    if not equivalent or gen1.m != gen2.m:
        return EquivalenceResult(equivalent, dist)

    n = gen1.dim
    dH = gen2.H - gen1.H
    c = float(np.real(np.trace(dH))) / n
    h_res = fnorm(dH - c * np.eye(n))
    ok = h_res <= threshold(gen1.H, 10 * tol.eq_tol)
    if gen1.m == 0:
        u = np.zeros((0, 0), dtype=complex)
        residual = h_res
    else:
        A1, A2 = kraus_matrix(gen1.kraus), kraus_matrix(gen2.kraus)
        ut, *_ = np.linalg.lstsq(A1, A2, rcond=None)
        u = ut.T
        span_res = fnorm(A1 @ ut - A2)
        unit_res = fnorm(dag(u) @ u - np.eye(gen1.m))
        ok = ok and span_res <= threshold(A2, 10 * tol.eq_tol) and unit_res <= 10 * tol.eq_tol * (1 + np.sqrt(gen1.m))
        residual = h_res + span_res + unit_res
    if not ok:
        return EquivalenceResult(True, dist, witness_residual=residual)
    return EquivalenceResult(True, dist, u, c, residual)
