"""KMS-dual and time-reversed generators.

The KMS-dual ``L'`` of ``L`` is fixed by
``rho^1/2 L'(x) rho^1/2 = L_*(rho^1/2 x rho^1/2)``.  For a special
representation it is given in closed form by
``L'_k = rho^1/2 L_k^* rho^-1/2`` and ``G' = rho^1/2 G^* rho^-1/2``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .exceptions import NotInvariant, ShapeMismatch
from .gksl import DensityMatrix, GkslGenerator, TimeReversal, apply_generator, apply_predual
from .invariant import verify_invariance
from .linalg import Tolerances, dag, fnorm, matrix_units, resolve_tol
from .special import require_special


@dataclass(frozen=True)
class DualPair:
    primal: GkslGenerator
    dual: GkslGenerator
    c_shift: float = 0.0


def require_invariant(gen: GkslGenerator, rho: DensityMatrix, tol: Tolerances | None = None) -> float:
    tol = resolve_tol(tol)
    residual = verify_invariance(gen, rho)
    if residual > tol.eq_tol:
        raise NotInvariant(f"state is not invariant (residual {residual:.3e})")
    return residual


def dual_G(gen: GkslGenerator, rho: DensityMatrix) -> np.ndarray:
    return rho.sqrt_rho @ dag(gen.G) @ rho.inv_sqrt_rho


def dual_generator(gen: GkslGenerator, rho: DensityMatrix, tol: Tolerances | None = None) -> DualPair:
    """KMS-dual in the representation with ``G' rho^1/2 = rho^1/2 G^*`` (so ``c = 0``)."""
    tol = resolve_tol(tol)
    if gen.dim != rho.dim:
        raise ShapeMismatch(f"generator dimension {gen.dim} != state dimension {rho.dim}")
    require_special(gen, rho, tol)
    require_invariant(gen, rho, tol)
    s, si = rho.sqrt_rho, rho.inv_sqrt_rho
    kraus = tuple(s @ dag(L) @ si for L in gen.kraus)
    Gp = dual_G(gen, rho)
    Hp = (dag(Gp) - Gp) / 2j
    return DualPair(gen, GkslGenerator(Hp, kraus, gen.tol), 0.0)


def verify_dual_relation(pair: DualPair, rho: DensityMatrix) -> float:
    """Largest ``||rho^1/2 L'(x) rho^1/2 - L_*(rho^1/2 x rho^1/2)||_F`` over matrix units ``x``."""
    if pair.primal.dim != rho.dim or pair.dual.dim != rho.dim:
        raise ShapeMismatch("generator and state dimensions differ")
    s = rho.sqrt_rho
    worst = 0.0
    for x in matrix_units(rho.dim):
        lhs = s @ apply_generator(pair.dual, x) @ s
        rhs = apply_predual(pair.primal, s @ x @ s)
        worst = max(worst, fnorm(lhs - rhs))
    return worst


def theta_dual(gen: GkslGenerator, theta: TimeReversal) -> GkslGenerator:
    """Generator of ``x -> theta L(theta x theta) theta``: ``H -> -theta H theta``, ``L -> theta L theta``."""
    if theta.dim != gen.dim:
        raise ShapeMismatch(f"time reversal acts on dimension {theta.dim}, generator on {gen.dim}")
    return GkslGenerator(-theta.conjugate(gen.H), tuple(theta.conjugate(L) for L in gen.kraus), gen.tol)


def reconstruct_G_adjoint(gen: GkslGenerator, rho: DensityMatrix) -> np.ndarray:
    """``G^*`` column by column from ``G^* u = sum_k rho_k L(|u><e_k|) e_k - tr(rho G) u``."""
    n = gen.dim
    w, vecs = rho.eigenvalues, rho.eigenvectors
    trG = np.trace(rho.rho @ gen.G)
    out = np.zeros((n, n), dtype=complex)
    for j in range(n):
        u = np.zeros(n, dtype=complex)
        u[j] = 1.0
        col = -trG * u
        for rho_k, e in zip(w, vecs.T):
            col = col + rho_k * apply_generator(gen, np.outer(u, np.conj(e))) @ e
        out[:, j] = col
    return out


def verify_g_reconstruction(gen: GkslGenerator, rho: DensityMatrix, tol: Tolerances | None = None) -> float:
    require_special(gen, rho, tol)
    return fnorm(reconstruct_G_adjoint(gen, rho) - dag(gen.G))
