"""Visibility and regularity of subspaces, and the value operator."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .linalg_core import Frame, combine
from .pseudomult import PseudomultiplierAnalysis


@dataclass(frozen=True)
class SubspaceVerdict:
    sees: bool
    regular: bool
    residual: float
    value_operator: Optional[np.ndarray] = None


def _residual(an: PseudomultiplierAnalysis, V: Frame) -> float:
    if V.rank == 0:
        return 0.0
    VS = combine(V, an.S, "sum", an.tol)
    return max(VS.residual(an.embedded_adjoint(V.columns[:, j])) for j in range(V.rank))


def sees_subspace(an: PseudomultiplierAnalysis, V: Frame) -> SubspaceVerdict:
    """``V`` is seen when ``X* V`` lies in ``V + S``; regular when also ``V ∩ S = 0``."""
    if not V.space.same_as(an.model.space):
        raise ValueError("subspace lives in a different space")
    res = _residual(an, V)
    sees = res <= an.tol.residual_tol
    regular = sees and combine(V, an.S, "intersect", an.tol).rank == 0
    C = value_operator(an, V, _checked=res) if sees else None
    return SubspaceVerdict(sees=sees, regular=regular, residual=res, value_operator=C)


def value_operator(an: PseudomultiplierAnalysis, V: Frame, _checked: Optional[float] = None) -> np.ndarray:
    """Matrix ``C`` (in the basis of ``V``) with ``P_V X f = C P_V f`` for ``f`` in ``E``.

    ``C`` is fitted on ``P_V E`` by least squares with a ``rank_tol`` cutoff
    and is zero on the rest of ``V``.
    """
    tol = an.tol
    res = _residual(an, V) if _checked is None else _checked
    if res > tol.residual_tol:
        raise ValueError(f"the subspace is not seen (residual {res:.2e})")
    if V.rank == 0:
        return np.zeros((0, 0), dtype=complex)
    if an.E.rank == 0:
        return np.zeros((V.rank, V.rank), dtype=complex)
    A = np.column_stack([V.coords(an.E.columns[:, j]) for j in range(an.E.rank)])
    B = np.column_stack([V.coords(an.X[:, j]) for j in range(an.E.rank)])
    C = B @ np.linalg.pinv(A, rcond=tol.rank_tol)
    miss = np.max(np.linalg.norm(B - C @ A, axis=0))
    if miss > tol.residual_tol * max(1.0, an.sigma_max):
        raise ValueError(f"value operator does not reproduce P_V X (miss {miss:.2e})")
    return C
