"""Gram matrices of two vector families spanning a common subspace.

For families ``xi``, ``eta`` with ``a_jk = <xi_j, xi_k>``, ``b_jk = <xi_j, eta_k>``
and ``c_jk = <eta_j, eta_k>``, equal spans of independent families give
``B^* A^-1 B = C``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .exceptions import ShapeMismatch
from .linalg import Tolerances, dag, fnorm, resolve_tol, subspace_gap, threshold


@dataclass(frozen=True)
class GramTriple:
    A: np.ndarray
    B: np.ndarray
    C: np.ndarray
    span_gap: float
    same_span: bool
    identity_residual: float | None
    identity_holds: bool | None

    @property
    def counterexample(self) -> bool:
        """Spans differ and the identity fails, as expected in that case."""
        return not self.same_span and self.identity_holds is False


def _stack(vectors, name):
    cols = [np.asarray(v, dtype=complex).ravel() for v in vectors]
    if not cols:
        return np.zeros((0, 0), dtype=complex)
    if len({c.size for c in cols}) != 1:
        raise ShapeMismatch(f"{name} vectors have different lengths")
    return np.column_stack(cols)


def gram_triple(xi, eta, tol: Tolerances | None = None) -> GramTriple:
    tol = resolve_tol(tol)
    X, Y = _stack(xi, "xi"), _stack(eta, "eta")
    if X.shape[1] != Y.shape[1]:
        raise ShapeMismatch(f"families have different sizes: {X.shape[1]} vs {Y.shape[1]}")
    if X.size and X.shape[0] != Y.shape[0]:
        raise ShapeMismatch(f"ambient dimensions differ: {X.shape[0]} vs {Y.shape[0]}")
    A, B, C = dag(X) @ X, dag(X) @ Y, dag(Y) @ Y
    if X.shape[1] == 0:
        return GramTriple(A, B, C, 0.0, True, 0.0, True)
    gap = subspace_gap(X, Y, tol.rank_tol)
    same = gap <= tol.eq_tol * (1.0 + np.sqrt(X.shape[1]))
    residual = holds = None
    if np.linalg.eigvalsh(A)[0] > tol.rank_tol:
        residual = fnorm(dag(B) @ np.linalg.solve(A, B) - C)
        holds = residual <= threshold(C, tol.eq_tol)
    return GramTriple(A, B, C, gap, bool(same), residual, holds)
