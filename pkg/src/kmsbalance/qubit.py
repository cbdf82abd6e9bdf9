"""Standard forms of qubit generators satisfying SQDB-theta.

The state is ``rho = diag(nu, 1 - nu)``, theta is complex conjugation, and the
Kraus operators are drawn from

    L_k = (1 - 2nu) r_k s0 + r_k s3 + zeta_k s1nu     (k = 1, 2)
    L_3 = r_3 s2nu

with ``H = v1 s1 + v2 s2 + v3 s3`` where ``v1, v2`` are fixed by the Kraus
parameters.  Cases ``o`` to ``e`` select which of ``L_1, L_2, L_3`` are present.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass, replace

import numpy as np

from .exceptions import CaseConstraintViolated, ConstraintViolated
from .gksl import DensityMatrix, GkslGenerator, TimeReversal
from .linalg import DEFAULT_TOL, fnorm

SIGMA_0 = np.eye(2, dtype=complex)
SIGMA_1 = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_2 = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_3 = np.array([[1, 0], [0, -1]], dtype=complex)
SIGMA_PLUS = (SIGMA_1 + 1j * SIGMA_2) / 2
SIGMA_MINUS = (SIGMA_1 - 1j * SIGMA_2) / 2

CASES = {
    "o": (),
    "a": (1,),
    "b": (3,),
    "c": (1, 2),
    "d": (1, 3),
    "e": (1, 2, 3),
}


class DegenerateCaseWarning(UserWarning):
    """Parameters sit on a boundary where a strict case inequality fails."""


def sigma1_nu(nu: float) -> np.ndarray:
    return np.array([[0, np.sqrt(2 * nu)], [np.sqrt(2 * (1 - nu)), 0]], dtype=complex)


def sigma2_nu(nu: float) -> np.ndarray:
    return np.array([[0, -1j * np.sqrt(2 * nu)], [1j * np.sqrt(2 * (1 - nu)), 0]], dtype=complex)


def qubit_state(nu: float) -> DensityMatrix:
    return DensityMatrix.from_matrix(np.diag([nu, 1 - nu]))


def _is_half(nu):
    return abs(nu - 0.5) <= DEFAULT_TOL.eq_tol


@dataclass(frozen=True)
class QubitParams:
    """Parameters of one standard form.

    ``r3`` is stored as a nonnegative-or-real magnitude with ``r3_phase``
    multiplying ``L_3``; phases of single Kraus operators do not change the
    generator.  ``v1_free`` is only used when ``nu == 1/2``, where ``v1`` is
    not fixed.  With ``allow_degenerate`` the strict case inequalities are
    flagged with a warning instead of raising.
    """

    nu: float
    case_tag: str = "e"
    r1: float = 0.0
    r2: float = 0.0
    zeta1: complex = 0.0
    zeta2: complex = 0.0
    r3: float = 0.0
    v3: float = 0.0
    v1_free: float = 0.0
    r3_phase: complex = 1.0
    allow_degenerate: bool = False

    @property
    def present(self) -> tuple:
        return CASES[self.case_tag]

    def _sums(self):
        im = re = 0.0
        for k, r, z in ((1, self.r1, self.zeta1), (2, self.r2, self.zeta2)):
            if k in self.present:
                im += r * complex(z).imag
                re += r * complex(z).real
        return im, re

    @property
    def v1(self) -> float:
        nu = self.nu
        if _is_half(nu):
            return float(self.v1_free)
        if not self.present:
            return 0.0
        a, b = np.sqrt(1 - nu), np.sqrt(nu)
        im, _ = self._sums()
        return float(-np.sqrt(2 * nu * (1 - nu)) * (a + b) ** 2 * im / (a - b))

    @property
    def v2(self) -> float:
        nu = self.nu
        if not self.present:
            return 0.0
        a, b = np.sqrt(1 - nu), np.sqrt(nu)
        _, re = self._sums()
        return float(-np.sqrt(2 * nu * (1 - nu)) * (a - b) ** 2 * re / (a + b))

    def violations(self) -> list[str]:
        """Strict case inequalities that fail (numerically, at ``eq_tol``)."""
        eps = DEFAULT_TOL.eq_tol
        r1z1 = abs(self.r1 * self.zeta1) > eps
        r2z2 = abs(self.r2 * self.zeta2) > eps
        indep = abs(self.r1 * self.zeta2 - self.r2 * self.zeta1) > eps
        r3 = abs(self.r3) > eps
        need = {
            "o": [],
            "a": [("r1*zeta1 != 0", r1z1)],
            "b": [("r3 != 0", r3)],
            "c": [("r1*zeta1*r2*zeta2 != 0", r1z1 and r2z2), ("r1*zeta2 != r2*zeta1", indep)],
            "d": [("r3 != 0", r3), ("r1*zeta1 != 0", r1z1)],
            "e": [("r1*zeta2 != r2*zeta1", indep), ("r3 != 0", r3), ("r1*zeta1*r2*zeta2 != 0", r1z1 and r2z2)],
        }[self.case_tag]
        out = [name for name, ok in need if not ok]
        if _is_half(self.nu) and self.present:
            im, _ = self._sums()
            if abs(im) > eps:
                out.append("sum r_k Im zeta_k == 0 (required at nu = 1/2)")
        return out


def _validate(p: QubitParams):
    if p.case_tag not in CASES:
        raise CaseConstraintViolated(f"unknown case {p.case_tag!r}; expected one of {sorted(CASES)}")
    if not 0 < p.nu < 1:
        raise CaseConstraintViolated(f"nu must lie in (0, 1), got {p.nu}")
    if not _is_half(p.nu) and p.v1_free != 0:
        raise CaseConstraintViolated("v1 is only free when nu == 1/2")


def standard_kraus(p: QubitParams) -> list[np.ndarray]:
    nu = p.nu
    ops = {
        1: (1 - 2 * nu) * p.r1 * SIGMA_0 + p.r1 * SIGMA_3 + p.zeta1 * sigma1_nu(nu),
        2: (1 - 2 * nu) * p.r2 * SIGMA_0 + p.r2 * SIGMA_3 + p.zeta2 * sigma1_nu(nu),
        3: p.r3_phase * p.r3 * sigma2_nu(nu),
    }
    return [ops[k] for k in p.present]


def build_standard_form(p: QubitParams):
    """Return ``(generator, rho, theta)`` for the given case parameters."""
    _validate(p)
    bad = p.violations()
    if bad:
        if not p.allow_degenerate:
            raise CaseConstraintViolated(f"case {p.case_tag}: violated {', '.join(bad)}")
        warnings.warn(f"degenerate case {p.case_tag} parameters: {', '.join(bad)}", DegenerateCaseWarning, stacklevel=2)
    kraus = standard_kraus(p)
    if p.allow_degenerate:
        kraus = [L for L in kraus if fnorm(L) > DEFAULT_TOL.rank_tol]
    if kraus:
        stack = np.column_stack([np.eye(2).ravel()] + [L.ravel() for L in kraus])
        if np.linalg.svd(stack, compute_uv=False)[-1] <= DEFAULT_TOL.rank_tol:
            raise CaseConstraintViolated(f"case {p.case_tag}: Kraus operators are linearly dependent")
    H = p.v1 * SIGMA_1 + p.v2 * SIGMA_2 + p.v3 * SIGMA_3
    return GkslGenerator(H, tuple(kraus)), qubit_state(p.nu), TimeReversal.conjugation(2)


def _check_balance(nu, lam, mu, tol):
    if min(lam, mu) < 0:
        raise ConstraintViolated("lambda and mu must be nonnegative")
    if not 0 < nu < 1:
        raise ConstraintViolated(f"nu must lie in (0, 1), got {nu}")
    lhs, rhs = lam**2 * (1 - nu), nu * mu**2
    if abs(lhs - rhs) > tol * (1 + abs(rhs)):
        raise ConstraintViolated(f"lambda^2 (1 - nu) = {lhs:.6g} differs from nu mu^2 = {rhs:.6g}")


def build_qdb_theta_form(nu, lam, mu, eta, h0=0.0, h3=0.0, tol: float = DEFAULT_TOL.eq_tol):
    """Qubit generator with ``H = h0 + h3 s3`` and Kraus ``eta L, lam s+, mu s-``,
    ``L = (1 - 2nu) s0 + s3``; requires ``lam^2 (1 - nu) = nu mu^2``."""
    _check_balance(nu, lam, mu, tol)
    if eta < 0:
        raise ConstraintViolated("eta must be nonnegative")
    L = -(2 * nu - 1) * SIGMA_0 + SIGMA_3
    kraus = [c * op for c, op in ((eta, L), (lam, SIGMA_PLUS), (mu, SIGMA_MINUS)) if c != 0]
    H = h0 * SIGMA_0 + h3 * SIGMA_3
    return GkslGenerator(H, tuple(kraus)), qubit_state(nu), TimeReversal.conjugation(2)


def map_qdb_to_sqdb_params(nu, lam, mu, eta, h3=0.0, tol: float = DEFAULT_TOL.eq_tol) -> QubitParams:
    """Standard-form parameters reproducing :func:`build_qdb_theta_form`.

    ``r1 = eta, zeta1 = 0, r2 = 0, zeta2 = lam / (2 sqrt(nu))`` and
    ``r3 = i mu / (2 sqrt(1 - nu))`` (stored as magnitude plus phase ``i``).
    These always sit on the boundary of case ``e``, so the result is flagged
    degenerate; vanishing operators are dropped when building.
    """
    _check_balance(nu, lam, mu, tol)
    return QubitParams(
        nu=nu,
        case_tag="e",
        r1=float(eta),
        r2=0.0,
        zeta1=0.0,
        zeta2=lam / (2 * np.sqrt(nu)),
        r3=mu / (2 * np.sqrt(1 - nu)),
        r3_phase=1j,
        v3=float(h3),
        allow_degenerate=True,
    )


def sample_params(case_tag: str, rng: np.random.Generator, nu: float | None = None) -> QubitParams:
    """Random parameters satisfying the strict inequalities of ``case_tag`` with margin."""
    if nu is None:
        while True:
            nu = float(rng.uniform(0.1, 0.9))
            if abs(nu - 0.5) > 0.05:
                break

    def cplx():
        while True:
            z = complex(rng.normal(), rng.normal())
            if abs(z) > 0.2:
                return z

    def real():
        while True:
            x = float(rng.normal())
            if abs(x) > 0.2:
                return x

    while True:
        p = QubitParams(nu=nu, case_tag=case_tag, r1=real(), r2=real(), zeta1=cplx(), zeta2=cplx(),
                        r3=real(), v3=float(rng.normal()))
        if abs(p.r1 * p.zeta2 - p.r2 * p.zeta1) > 0.1:
            break
    keep = CASES[case_tag]
    return replace(
        p,
        r1=p.r1 if 1 in keep else 0.0,
        zeta1=p.zeta1 if 1 in keep else 0.0,
        r2=p.r2 if 2 in keep else 0.0,
        zeta2=p.zeta2 if 2 in keep else 0.0,
        r3=p.r3 if 3 in keep else 0.0,
    )
