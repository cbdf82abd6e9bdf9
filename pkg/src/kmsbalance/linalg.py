"""Dense complex linear algebra shared by every other module.

Conventions fixed here and relied on everywhere else:

* matrices are ``numpy`` complex arrays;
* vectorization is column stacking, ``vec(x)[i + n*j] == x[i, j]``, so that
  ``vec(A @ X @ B) == kron(B.T, A) @ vec(X)``;
* closeness is measured with Frobenius norms, ``||a - b|| <= tol * (1 + ||b||)``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .exceptions import NotHermitian, NotPositive, NumericalFailure, ShapeMismatch, Singular

VEC_CONVENTION = "column-stacking"


@dataclass(frozen=True)
class Tolerances:
    """Numerical thresholds.

    Parameters
    ----------
    eq_tol : float
        Equality tolerance on Frobenius norms of residuals, scaled by
        ``1 + ||reference||``.
    rank_tol : float
        Eigenvalue / singular value cutoff used to decide ranks.
    faithful_tol : float
        A state is faithful when its smallest eigenvalue exceeds this.
    """

    eq_tol: float = 1e-9
    rank_tol: float = 1e-10
    faithful_tol: float = 1e-10

    def __post_init__(self):
        for name in ("eq_tol", "rank_tol", "faithful_tol"):
            value = getattr(self, name)
            if not (np.isfinite(value) and value > 0):
                raise ValueError(f"{name} must be a positive finite number, got {value!r}")

    def replace(self, **changes) -> "Tolerances":
        fields = {"eq_tol": self.eq_tol, "rank_tol": self.rank_tol, "faithful_tol": self.faithful_tol}
        fields.update({k: float(v) for k, v in changes.items() if v is not None})
        return Tolerances(**fields)


DEFAULT_TOL = Tolerances()


def resolve_tol(tol: Tolerances | None) -> Tolerances:
    return DEFAULT_TOL if tol is None else tol


def as_cmat(a, name: str = "matrix") -> np.ndarray:
    """Return ``a`` as a finite 2-D complex array (a fresh copy)."""
    arr = np.array(a, dtype=complex)
    if arr.ndim != 2 or arr.shape[0] < 1 or arr.shape[1] < 1:
        raise ShapeMismatch(f"{name} must be a non-empty 2-D array, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} has non-finite entries")
    return arr


def as_square(a, name: str = "matrix") -> np.ndarray:
    arr = as_cmat(a, name)
    if arr.shape[0] != arr.shape[1]:
        raise ShapeMismatch(f"{name} must be square, got shape {arr.shape}")
    return arr


def frozen(arr: np.ndarray) -> np.ndarray:
    arr.flags.writeable = False
    return arr


def dag(a: np.ndarray) -> np.ndarray:
    return a.conj().T


def fnorm(a) -> float:
    return float(np.linalg.norm(a))


def threshold(reference, tol: float) -> float:
    """Absolute acceptance threshold ``tol * (1 + ||reference||_F)``."""
    return tol * (1.0 + fnorm(reference))


def is_close(a, b, tol: float) -> bool:
    return fnorm(np.asarray(a) - np.asarray(b)) <= threshold(b, tol)


def hermitian_defect(a) -> float:
    a = np.asarray(a)
    return fnorm(a - dag(a))


def is_hermitian(a, tol: float = DEFAULT_TOL.eq_tol) -> bool:
    return hermitian_defect(a) <= threshold(a, tol)


def hermitian_eig(a, tol: Tolerances | None = None):
    """Spectral decomposition of a Hermitian matrix.

    Returns
    -------
    eigenvalues : ndarray of float, sorted in descending order
    eigenvectors : ndarray, eigenvectors in the columns, same order
    """
    tol = resolve_tol(tol)
    a = as_square(a)
    if not is_hermitian(a, tol.eq_tol):
        raise NotHermitian(f"matrix is not Hermitian (defect {hermitian_defect(a):.3e})")
    try:
        w, v = np.linalg.eigh(0.5 * (a + dag(a)))
    except np.linalg.LinAlgError as exc:  # pragma: no cover - LAPACK failure
        raise NumericalFailure(f"eigendecomposition did not converge: {exc}") from exc
    return w[::-1].copy(), v[:, ::-1].copy()


def matrix_function(a, f: str, tol: Tolerances | None = None) -> np.ndarray:
    """Apply ``f`` in {"sqrt", "inv_sqrt", "exp"} to a Hermitian matrix spectrally."""
    tol = resolve_tol(tol)
    w, v = hermitian_eig(a, tol)
    if f == "exp":
        fw = np.exp(w)
    elif f in ("sqrt", "inv_sqrt"):
        if w[-1] < -tol.rank_tol:
            raise NotPositive(f"matrix has a negative eigenvalue {w[-1]:.3e}")
        if f == "sqrt":
            fw = np.sqrt(np.clip(w, 0.0, None))
        else:
            if w[-1] <= tol.faithful_tol:
                raise Singular(f"smallest eigenvalue {w[-1]:.3e} too small for inverse square root")
            fw = 1.0 / np.sqrt(w)
    else:
        raise ValueError(f"unknown matrix function {f!r}")
    return (v * fw) @ dag(v)


def vec(x) -> np.ndarray:
    """Column-stack a square matrix into a vector of length ``n**2``."""
    x = np.asarray(x)
    if x.ndim != 2 or x.shape[0] != x.shape[1]:
        raise ShapeMismatch(f"vec expects a square matrix, got shape {x.shape}")
    return x.reshape(-1, order="F")


def unvec(v) -> np.ndarray:
    v = np.asarray(v)
    if v.ndim != 1:
        raise ShapeMismatch(f"unvec expects a 1-D vector, got shape {v.shape}")
    n = int(round(np.sqrt(v.size)))
    if n * n != v.size or n == 0:
        raise ShapeMismatch(f"vector length {v.size} is not a perfect square")
    return v.reshape((n, n), order="F")


def matrix_units(n: int):
    """Yield the ``n**2`` matrix units in ``vec`` order (E_ij has index i + n*j)."""
    for idx in range(n * n):
        e = np.zeros(n * n, dtype=complex)
        e[idx] = 1.0
        yield unvec(e)


def orthonormal_basis(columns: np.ndarray, rank_tol: float) -> np.ndarray:
    """Orthonormal basis (as columns) of the span of ``columns``.

    Singular values below ``rank_tol * max(1, s_max)`` are treated as zero.
    """
    columns = np.asarray(columns, dtype=complex)
    if columns.size == 0 or columns.shape[1] == 0:
        return np.zeros((columns.shape[0], 0), dtype=complex)
    u, s, _ = np.linalg.svd(columns, full_matrices=False)
    cutoff = rank_tol * max(1.0, s[0])
    return u[:, s > cutoff]


def subspace_gap(cols_a: np.ndarray, cols_b: np.ndarray, rank_tol: float) -> float:
    """Frobenius distance between orthogonal projectors onto two column spans."""
    qa = orthonormal_basis(cols_a, rank_tol)
    qb = orthonormal_basis(cols_b, rank_tol)
    return fnorm(qa @ dag(qa) - qb @ dag(qb))
