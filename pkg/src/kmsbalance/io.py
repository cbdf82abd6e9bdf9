"""JSON problem files with complex entries stored as ``[re, im]`` pairs.

A problem file looks like::

    {"dim": 2,
     "H": [[[1, 0], [0, 0]], [[0, 0], [-1, 0]]],
     "L": [ ... ],
     "rho": ...,                      # optional
     "theta": {"kind": "conjugation", "U": ...},   # optional
     "tolerances": {"eq_tol": 1e-9}}  # optional

Exactly one of ``H`` and ``G`` may be given; neither means ``H = 0``.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .exceptions import InvalidGenerator, KmsBalanceError, ShapeMismatch
from .gksl import DensityMatrix, GkslGenerator, TimeReversal
from .linalg import DEFAULT_TOL, Tolerances


class ProblemFileError(KmsBalanceError):
    """Malformed problem file."""


def encode_matrix(a) -> list:
    a = np.asarray(a, dtype=complex)
    if a.ndim == 1:
        return [[float(z.real), float(z.imag)] for z in a]
    return [encode_matrix(row) for row in a]


def decode_matrix(data, name: str = "matrix") -> np.ndarray:
    try:
        arr = np.asarray(data, dtype=float)
    except (TypeError, ValueError) as exc:
        raise ProblemFileError(f"{name}: entries must be [re, im] pairs") from exc
    if arr.ndim != 3 or arr.shape[-1] != 2:
        raise ProblemFileError(f"{name}: expected a matrix of [re, im] pairs, got array of shape {arr.shape}")
    return arr[..., 0] + 1j * arr[..., 1]


@dataclass(frozen=True)
class Problem:
    generator: GkslGenerator
    rho: DensityMatrix | None
    theta: TimeReversal
    tol: Tolerances


def _square(m, n, name):
    if m.shape != (n, n):
        raise ShapeMismatch(f"{name} has shape {m.shape}, expected ({n}, {n})")
    return m


def problem_from_dict(data: dict, tol_override: float | None = None) -> Problem:
    if not isinstance(data, dict):
        raise ProblemFileError("problem file must hold a JSON object")
    if "dim" not in data:
        raise ProblemFileError("missing field 'dim'")
    n = int(data["dim"])
    try:
        tol = DEFAULT_TOL.replace(**data.get("tolerances", {}))
    except TypeError as exc:
        raise ProblemFileError(f"unknown tolerance field: {exc}") from exc
    if tol_override is not None:
        tol = tol.replace(eq_tol=tol_override)
    kraus = tuple(_square(decode_matrix(L, f"L[{i}]"), n, f"L[{i}]") for i, L in enumerate(data.get("L", [])))
    if "H" in data and "G" in data:
        raise InvalidGenerator("give either H or G, not both")
    if "G" in data:
        gen = GkslGenerator.from_G(_square(decode_matrix(data["G"], "G"), n, "G"), kraus, tol)
    else:
        H = _square(decode_matrix(data["H"], "H"), n, "H") if "H" in data else np.zeros((n, n))
        gen = GkslGenerator(H, kraus, tol)
    rho = None
    if data.get("rho") is not None:
        rho = DensityMatrix.from_matrix(_square(decode_matrix(data["rho"], "rho"), n, "rho"), tol)
    theta_data = data.get("theta") or {"kind": "conjugation"}
    if theta_data.get("kind", "conjugation") != "conjugation":
        raise ProblemFileError(f"unsupported time reversal kind {theta_data.get('kind')!r}")
    U = _square(decode_matrix(theta_data["U"], "theta.U"), n, "theta.U") if theta_data.get("U") is not None else np.eye(n)
    return Problem(gen, rho, TimeReversal(U), tol)


def problem_to_dict(gen: GkslGenerator, rho: DensityMatrix | None = None, theta: TimeReversal | None = None,
                    tol: Tolerances | None = None) -> dict:
    out = {"dim": gen.dim, "H": encode_matrix(gen.H), "L": [encode_matrix(L) for L in gen.kraus]}
    if rho is not None:
        out["rho"] = encode_matrix(rho.rho)
    if theta is not None:
        out["theta"] = {"kind": "conjugation", "U": encode_matrix(theta.u_theta)}
    if tol is not None:
        out["tolerances"] = {"eq_tol": tol.eq_tol, "rank_tol": tol.rank_tol, "faithful_tol": tol.faithful_tol}
    return out


def read_json(path) -> dict:
    try:
        return json.loads(Path(path).read_text())
    except OSError as exc:
        raise ProblemFileError(f"cannot read {path}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise ProblemFileError(f"{path} is not valid JSON: {exc}") from exc


def load_problem(path, tol_override: float | None = None) -> Problem:
    return problem_from_dict(read_json(path), tol_override)


def save_problem(path, gen, rho=None, theta=None, tol=None) -> None:
    Path(path).write_text(json.dumps(problem_to_dict(gen, rho, theta, tol), indent=2) + "\n")
