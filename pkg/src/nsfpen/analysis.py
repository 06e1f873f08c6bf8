"""
L1 error metrics between runs and experimental orders of convergence.

Coarse solutions are compared on the finer reference grid after piecewise
constant injection, which represents the coarse solution exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

import numpy as np

from nsfpen.physics import GasModel

FIELDS = ("rho", "u", "theta")


@dataclass(frozen=True)
class ErrorRecord:
    experiment: str
    field: str
    N: int
    h: float
    epsilon: float
    error_E: Optional[float]
    error_P: Optional[float]
    time: float


@dataclass(frozen=True)
class Solution:
    """Final-time primitive fields of one run, tagged with its parameters."""

    experiment: str
    N: int
    epsilon: float
    time: float
    rho: np.ndarray
    u: np.ndarray
    theta: np.ndarray

    @classmethod
    def from_state(cls, state, gas: GasModel, *, experiment: str, N: int,
                   epsilon: float, time: float) -> "Solution":
        return cls(experiment, N, epsilon, time, state.rho, state.velocity,
                   state.temperature(gas))

    def field(self, name: str) -> np.ndarray:
        return getattr(self, name)


def inject_to_fine(field: np.ndarray, N_ref: int, *, ncomp_axes: int = 0) -> np.ndarray:
    """Copy every coarse cell value onto the fine cells whose centers it contains.

    The last ``field.ndim - ncomp_axes`` axes are spatial.
    """
    N = field.shape[-1]
    if N_ref % N != 0:
        raise ValueError(f"reference resolution {N_ref} is not a multiple of {N}")
    ratio = N_ref // N
    out = field
    for axis in range(ncomp_axes, field.ndim):
        out = np.repeat(out, ratio, axis=axis)
    return out


def l1_error(a: np.ndarray, b: np.ndarray, cell_volume: float, *,
             vector: bool = False) -> float:
    """``sum |K| |a_K - b_K|`` using the Euclidean norm per cell for vectors."""
    if a.shape != b.shape:
        raise ValueError(f"grid mismatch: {a.shape} vs {b.shape}")
    diff = a - b
    if vector:
        pointwise = np.sqrt(np.sum(diff**2, axis=0))
    else:
        pointwise = np.abs(diff)
    return cell_volume * math.fsum(pointwise.ravel())


def _field_errors(sol: Solution, ref: Solution, N_target: int) -> dict[str, float]:
    vol = (2.0 / N_target) ** 2
    out = {}
    for name in FIELDS:
        vector = name == "u"
        a = inject_to_fine(sol.field(name), N_target, ncomp_axes=1 if vector else 0)
        b = inject_to_fine(ref.field(name), N_target, ncomp_axes=1 if vector else 0)
        out[name] = l1_error(a, b, vol, vector=vector)
    return out


def compute_E(sol: Solution, ref: Solution) -> dict[str, float]:
    """Mesh error against the finest-mesh run at the same penalty parameter."""
    if sol.experiment != ref.experiment or sol.epsilon != ref.epsilon or sol.time != ref.time:
        raise ValueError("mesh reference must share experiment, epsilon and final time")
    if ref.N % sol.N != 0:
        raise ValueError(f"reference resolution {ref.N} is not a multiple of {sol.N}")
    return _field_errors(sol, ref, ref.N)


def compute_P(sol: Solution, ref: Solution) -> dict[str, float]:
    """Penalty error against the smallest-epsilon run on the same mesh."""
    if sol.experiment != ref.experiment or sol.N != ref.N or sol.time != ref.time:
        raise ValueError("penalty reference must share experiment, mesh and final time")
    return _field_errors(sol, ref, sol.N)


def eoc(errors: Sequence[tuple[float, float]]) -> list[Optional[float]]:
    """Rates ``log(e_i / e_{i+1}) / log(p_i / p_{i+1})`` of successive pairs.

    Pairs with a nonpositive error get ``None``.
    """
    if len(errors) < 2:
        raise ValueError("need at least two (parameter, error) entries")
    params = [p for p, _ in errors]
    if any(p <= 0.0 for p in params):
        raise ValueError("parameters must be positive")
    diffs = np.diff(params)
    if not (np.all(diffs > 0) or np.all(diffs < 0)):
        raise ValueError("parameters must be strictly monotone")

    rates: list[Optional[float]] = []
    for (p0, e0), (p1, e1) in zip(errors[:-1], errors[1:]):
        if e0 is None or e1 is None or e0 <= 0.0 or e1 <= 0.0:
            rates.append(None)
        else:
            rates.append(math.log(e0 / e1) / math.log(p0 / p1))
    return rates


def error_records(solutions: Iterable[Solution], mesh_refs: dict, eps_refs: dict
                  ) -> list[ErrorRecord]:
    """Build one record per (solution, field).

    *mesh_refs* maps ``epsilon`` to the reference-mesh solution and
    *eps_refs* maps ``N`` to the reference-epsilon solution; a missing entry
    (a failed reference run) yields ``None`` errors.
    """
    records = []
    for sol in solutions:
        E = compute_E(sol, mesh_refs[sol.epsilon]) if mesh_refs.get(sol.epsilon) else None
        P = compute_P(sol, eps_refs[sol.N]) if eps_refs.get(sol.N) else None
        for name in FIELDS:
            records.append(ErrorRecord(
                experiment=sol.experiment, field=name, N=sol.N, h=2.0 / sol.N,
                epsilon=sol.epsilon,
                error_E=None if E is None else E[name],
                error_P=None if P is None else P[name],
                time=sol.time))
    return sorted(records, key=lambda r: (r.experiment, r.field, r.N, r.epsilon))
