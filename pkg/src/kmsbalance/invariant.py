"""Faithful invariant states."""
from __future__ import annotations

import numpy as np

from .exceptions import NoInvariantState, NotFaithful, ShapeMismatch
from .gksl import SCHRODINGER, DensityMatrix, GkslGenerator, apply_predual, to_superoperator
from .linalg import Tolerances, dag, fnorm, resolve_tol, unvec

ASCENT_ITERATIONS = 50


def verify_invariance(gen: GkslGenerator, rho) -> float:
    """``||G rho + rho G^* + sum L rho L^*||_F``."""
    mat = rho.rho if isinstance(rho, DensityMatrix) else np.asarray(rho)
    if mat.shape != (gen.dim, gen.dim):
        raise ShapeMismatch(f"state has shape {mat.shape}, generator acts on {gen.dim}x{gen.dim}")
    return fnorm(apply_predual(gen, mat))


def is_invariant(gen: GkslGenerator, rho, tol: Tolerances | None = None) -> bool:
    return verify_invariance(gen, rho) <= resolve_tol(tol).eq_tol


def _hermitian_kernel_basis(gen: GkslGenerator, tol: Tolerances) -> list[np.ndarray]:
    n = gen.dim
    S = to_superoperator(gen, SCHRODINGER).mat
    _, s, vh = np.linalg.svd(S)
    cutoff = tol.rank_tol * max(1.0, s[0])
    null = [np.conj(vh[i]) for i in range(len(s)) if s[i] <= cutoff]
    if not null:
        return []
    # the predual preserves Hermiticity, so the kernel is spanned by Hermitian parts
    herm = []
    for v in null:
        X = unvec(v)
        herm.append(0.5 * (X + dag(X)))
        herm.append((X - dag(X)) / 2j)
    real = np.array([np.concatenate([h.real.ravel(), h.imag.ravel()]) for h in herm]).T
    u, sv, _ = np.linalg.svd(real, full_matrices=False)
    basis = []
    for j in np.flatnonzero(sv > tol.rank_tol * max(1.0, sv[0])):
        col = u[:, j]
        basis.append(col[: n * n].reshape(n, n) + 1j * col[n * n :].reshape(n, n))
    return basis


def _min_eig(x):
    w, v = np.linalg.eigh(x)
    return w[0], v[:, 0]


def find_invariant_state(gen: GkslGenerator, tol: Tolerances | None = None) -> DensityMatrix:
    """A faithful invariant state from the kernel of the Schrodinger superoperator.

    If the kernel holds several states, the smallest eigenvalue is pushed up by
    supergradient ascent from the projection of ``I/n`` onto the kernel, so
    fully degenerate cases return ``I/n``.
    """
    tol = resolve_tol(tol)
    n = gen.dim
    basis = _hermitian_kernel_basis(gen, tol)
    if not basis:
        raise NoInvariantState("predual has a trivial kernel")
    traces = np.array([np.trace(K).real for K in basis])
    if np.max(np.abs(traces)) <= tol.rank_tol:
        raise NoInvariantState("kernel contains only traceless operators")

    x0 = sum(t / n * K for t, K in zip(traces, basis))
    x0 = x0 / np.trace(x0).real
    # traceless directions inside the kernel
    _, _, vh = np.linalg.svd(traces[None, :])
    directions = [sum(c * K for c, K in zip(row, basis)) for row in vh[1:]]

    x = 0.5 * (x0 + dag(x0))
    lam, v = _min_eig(x)
    step = 1.0
    for _ in range(ASCENT_ITERATIONS):
        if lam > tol.faithful_tol or not directions:
            break
        grad = np.array([np.real(np.conj(v) @ D @ v) for D in directions])
        if fnorm(grad) == 0:
            break
        while step > 1e-12:
            trial = x + step * sum(g * D for g, D in zip(grad, directions))
            trial = 0.5 * (trial + dag(trial))
            lam_t, v_t = _min_eig(trial)
            if lam_t > lam:
                x, lam, v = trial, lam_t, v_t
                step *= 2.0
                break
            step *= 0.5
        else:
            break

    x = x / np.trace(x).real
    lam = np.linalg.eigvalsh(x)[0]
    if lam < -np.sqrt(tol.eq_tol):
        raise NoInvariantState(f"no positive element in the invariant kernel (min eigenvalue {lam:.3e})")
    if lam <= tol.faithful_tol:
        w, v = np.linalg.eigh(x)
        witness = (v * np.clip(w, 0, None)) @ dag(v)
        raise NotFaithful(f"invariant state is not faithful (min eigenvalue {lam:.3e})", state=witness / np.trace(witness).real)
    rho = DensityMatrix.from_matrix(x, tol)
    residual = verify_invariance(gen, rho)
    if residual > tol.eq_tol:
        raise NoInvariantState(f"kernel element fails invariance check (residual {residual:.3e})")
    return rho
