"""GKSL generators, states, time reversals and their superoperator matrices.

A generator acts in the Heisenberg picture,

    L(x) = i[H, x] - 1/2 sum_l (L_l^* L_l x - 2 L_l^* x L_l + x L_l^* L_l)
         = G^* x + sum_l L_l^* x L_l + x G,      G = -1/2 sum_l L_l^* L_l - iH,

and its predual acts on states, ``L_*(s) = G s + s G^* + sum_l L_l s L_l^*``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Sequence

import numpy as np
import scipy.linalg

from .exceptions import InvalidGenerator, InvalidTimeReversal, NotFaithful, ShapeMismatch
from .linalg import (
    VEC_CONVENTION,
    Tolerances,
    as_square,
    dag,
    fnorm,
    frozen,
    hermitian_defect,
    hermitian_eig,
    resolve_tol,
    threshold,
    unvec,
    vec,
)

HEISENBERG = "heisenberg"
SCHRODINGER = "schrodinger"


@dataclass(frozen=True, eq=False)
class GkslGenerator:
    """Hamiltonian ``H`` plus Kraus-type operators ``kraus``.

    ``G`` is always derived from ``(H, kraus)``; use :meth:`from_G` when the
    input is given in terms of ``G``.
    """

    H: np.ndarray
    kraus: tuple = ()
    tol: Tolerances | None = field(default=None, repr=False)

    def __post_init__(self):
        tol = resolve_tol(self.tol)
        H = as_square(self.H, "H")
        if hermitian_defect(H) > threshold(H, tol.eq_tol):
            raise InvalidGenerator(f"H is not Hermitian (defect {hermitian_defect(H):.3e})")
        n = H.shape[0]
        kraus = []
        for k, L in enumerate(self.kraus):
            L = as_square(L, f"kraus[{k}]")
            if L.shape != (n, n):
                raise ShapeMismatch(f"kraus[{k}] has shape {L.shape}, expected {(n, n)}")
            kraus.append(frozen(L))
        if len(kraus) > n * n:
            raise InvalidGenerator(f"{len(kraus)} Kraus operators exceed n**2 = {n * n}")
        object.__setattr__(self, "H", frozen(0.5 * (H + dag(H))))
        object.__setattr__(self, "kraus", tuple(kraus))

    @classmethod
    def from_G(cls, G, kraus: Sequence = (), tol: Tolerances | None = None) -> "GkslGenerator":
        """Build from ``G`` and Kraus operators, checking ``G + G^* = -sum L^*L``."""
        tol_ = resolve_tol(tol)
        G = as_square(G, "G")
        kraus = [as_square(L) for L in kraus]
        lhs = G + dag(G)
        rhs = -sum((dag(L) @ L for L in kraus), np.zeros_like(G))
        if fnorm(lhs - rhs) > threshold(rhs, tol_.eq_tol):
            raise InvalidGenerator("G + G^* does not equal -sum L^*L")
        H = (dag(G) - G) / 2j
        return cls(H, tuple(kraus), tol)

    @property
    def dim(self) -> int:
        return self.H.shape[0]

    @property
    def m(self) -> int:
        return len(self.kraus)

    @cached_property
    def LdagL(self) -> np.ndarray:
        return sum((dag(L) @ L for L in self.kraus), np.zeros((self.dim, self.dim), complex))

    @cached_property
    def G(self) -> np.ndarray:
        return frozen(-0.5 * self.LdagL - 1j * self.H)

    def with_hamiltonian(self, H) -> "GkslGenerator":
        return GkslGenerator(H, self.kraus, self.tol)

    def with_kraus(self, kraus: Sequence) -> "GkslGenerator":
        return GkslGenerator(self.H, tuple(kraus), self.tol)


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """Faithful state with cached spectral data, square root and inverse square root."""

    rho: np.ndarray
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    sqrt_rho: np.ndarray
    inv_sqrt_rho: np.ndarray

    @classmethod
    def from_matrix(cls, rho, tol: Tolerances | None = None) -> "DensityMatrix":
        tol = resolve_tol(tol)
        rho = as_square(rho, "rho")
        w, v = hermitian_eig(rho, tol)
        if abs(np.sum(w) - 1.0) > tol.eq_tol * (1.0 + fnorm(rho)):
            raise ValueError(f"rho must have unit trace, got {np.sum(w):.12g}")
        if w[-1] <= tol.faithful_tol:
            raise NotFaithful(f"state is not faithful: smallest eigenvalue {w[-1]:.3e}", state=rho)
        rho = frozen(0.5 * (rho + dag(rho)))
        sqrt_rho = frozen((v * np.sqrt(w)) @ dag(v))
        inv_sqrt_rho = frozen((v / np.sqrt(w)) @ dag(v))
        return cls(rho, frozen(w), frozen(v), sqrt_rho, inv_sqrt_rho)

    @classmethod
    def maximally_mixed(cls, n: int) -> "DensityMatrix":
        return cls.from_matrix(np.eye(n) / n)

    @property
    def dim(self) -> int:
        return self.rho.shape[0]


@dataclass(frozen=True, eq=False)
class TimeReversal:
    """Antiunitary involution ``v -> u_theta @ conj(v)`` with ``u_theta`` symmetric unitary."""

    u_theta: np.ndarray

    def __post_init__(self):
        u = as_square(self.u_theta, "u_theta")
        n = u.shape[0]
        if fnorm(dag(u) @ u - np.eye(n)) > 1e-9 * (1 + np.sqrt(n)):
            raise InvalidTimeReversal("u_theta is not unitary")
        if fnorm(u - u.T) > 1e-9 * (1 + fnorm(u)):
            raise InvalidTimeReversal("u_theta is not symmetric, so theta**2 != 1")
        object.__setattr__(self, "u_theta", frozen(u))

    @classmethod
    def conjugation(cls, n: int) -> "TimeReversal":
        return cls(np.eye(n))

    @classmethod
    def commuting_with(cls, rho) -> "TimeReversal":
        """The conjugation in an eigenbasis of ``rho``; it always commutes with ``rho``."""
        rho = rho.rho if isinstance(rho, DensityMatrix) else rho
        _, v = hermitian_eig(rho)
        return cls(v @ v.T)

    @property
    def dim(self) -> int:
        return self.u_theta.shape[0]

    def apply(self, v) -> np.ndarray:
        return self.u_theta @ np.conj(v)

    def conjugate(self, x) -> np.ndarray:
        """The operator ``theta x theta``."""
        return self.u_theta @ np.conj(x) @ dag(self.u_theta)


@dataclass(frozen=True, eq=False)
class Superoperator:
    """``n**2 x n**2`` matrix of a linear map on ``n x n`` matrices (column-stacking vec)."""

    mat: np.ndarray
    picture: str = HEISENBERG
    convention: str = VEC_CONVENTION

    @property
    def dim(self) -> int:
        return int(round(np.sqrt(self.mat.shape[0])))

    def __call__(self, x) -> np.ndarray:
        return unvec(self.mat @ vec(np.asarray(x, dtype=complex)))


def _check_operand(gen: GkslGenerator, x) -> np.ndarray:
    x = np.asarray(x, dtype=complex)
    if x.shape != (gen.dim, gen.dim):
        raise ShapeMismatch(f"operand has shape {x.shape}, generator acts on {gen.dim}x{gen.dim}")
    return x


def apply_generator(gen: GkslGenerator, x) -> np.ndarray:
    """Heisenberg-picture action ``L(x)``."""
    x = _check_operand(gen, x)
    out = 1j * (gen.H @ x - x @ gen.H)
    out -= 0.5 * (gen.LdagL @ x + x @ gen.LdagL)
    for L in gen.kraus:
        out += dag(L) @ x @ L
    return out


def apply_generator_g_form(gen: GkslGenerator, x) -> np.ndarray:
    """``L(x)`` evaluated as ``G^* x + sum L^* x L + x G``."""
    x = _check_operand(gen, x)
    out = dag(gen.G) @ x + x @ gen.G
    for L in gen.kraus:
        out += dag(L) @ x @ L
    return out


def apply_predual(gen: GkslGenerator, sigma) -> np.ndarray:
    """Schrodinger-picture action ``L_*(sigma) = G sigma + sigma G^* + sum L sigma L^*``."""
    sigma = _check_operand(gen, sigma)
    out = gen.G @ sigma + sigma @ dag(gen.G)
    for L in gen.kraus:
        out += L @ sigma @ dag(L)
    return out


def to_superoperator(gen: GkslGenerator, picture: str = HEISENBERG) -> Superoperator:
    n = gen.dim
    eye = np.eye(n)
    G = gen.G
    # vec(A X B) = kron(B.T, A) vec(X)
    mat = np.kron(eye, dag(G)) + np.kron(G.T, eye)
    for L in gen.kraus:
        mat = mat + np.kron(L.T, dag(L))
    if picture == SCHRODINGER:
        # trace-pairing adjoint of a Hermiticity-preserving map is its HS adjoint
        mat = dag(mat)
    elif picture != HEISENBERG:
        raise ValueError(f"unknown picture {picture!r}")
    return Superoperator(frozen(mat), picture)


def semigroup_matrix(gen: GkslGenerator, t: float, picture: str = HEISENBERG) -> np.ndarray:
    if t < 0:
        raise ValueError("t must be nonnegative")
    S = to_superoperator(gen, picture).mat
    if t == 0:
        return np.eye(S.shape[0], dtype=complex)
    return scipy.linalg.expm(t * S)


def evolve(gen: GkslGenerator, x, t: float, picture: str = HEISENBERG) -> np.ndarray:
    """``T_t(x)`` (Heisenberg) or ``T_{*t}(x)`` (Schrodinger)."""
    x = _check_operand(gen, x)
    if t < 0:
        raise ValueError("t must be nonnegative")
    if t == 0:
        return x.copy()
    return unvec(semigroup_matrix(gen, t, picture) @ vec(x))


def kms_gram(rho: DensityMatrix) -> np.ndarray:
    """Gram matrix of ``<x, y> = tr(rho^1/2 x^* rho^1/2 y)`` on matrix units in vec order.

    ``<x, y> == vec(x).conj() @ gram @ vec(y)``.
    """
    s = rho.sqrt_rho
    return np.kron(s.T, s)


def kms_symmetry_defect(gen: GkslGenerator, rho: DensityMatrix) -> tuple[float, float]:
    """Defect ``||Gram S - S^* Gram||_F`` and its acceptance scale ``1 + ||Gram S||_F``."""
    gram = kms_gram(rho)
    S = to_superoperator(gen).mat
    left = gram @ S
    return fnorm(left - dag(S) @ gram), 1.0 + fnorm(left)


def is_kms_symmetric_oracle(gen: GkslGenerator, rho: DensityMatrix, tol: Tolerances | None = None) -> bool:
    tol = resolve_tol(tol)
    defect, scale = kms_symmetry_defect(gen, rho)
    return defect <= tol.eq_tol * scale
