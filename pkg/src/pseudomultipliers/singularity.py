"""Seeing vectors, definable values, polar witnesses and ambiguous points.

A pseudomultiplier sees ``v`` with value ``c`` when ``X* v = conj(c) P_E v``.
When ``P_E v`` and ``X* v`` both vanish every value works and ``v`` is
ambiguous; the ambiguous vectors fill ``A = S ∩ ker X*``.
"""
from __future__ import annotations

import cmath
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .pseudomult import (PseudomultiplierAnalysis, PseudomultiplierSpec,
                         multiplication_operator, regular_space)
from .spaces import ModelSpace


class NotDefinableError(ValueError):
    """Raised when a vector fails one clause of definability."""

    def __init__(self, clause: str, detail: str = ""):
        self.clause = clause
        super().__init__(f"vector is not definable: {clause}" + (f" ({detail})" if detail else ""))


class PolarWitnessError(ValueError):
    pass


class InconsistentValueError(ValueError):
    """The redefinition value at a removable point depends on the test function."""


@dataclass(frozen=True)
class VisibilityVerdict:
    status: str  # not_visible | visible | ambiguous
    residual: float
    value: Optional[complex] = None

    @property
    def visible(self) -> bool:
        return self.status == "visible"


def sees_vector(an: PseudomultiplierAnalysis, v) -> VisibilityVerdict:
    tol = an.tol
    space = an.model.space
    v = space.check(v)
    nv = space.norm(v)
    if nv == 0:
        return VisibilityVerdict("ambiguous", 0.0)
    w = an.E.project(v)
    r = an.embedded_adjoint(v)
    nw = space.norm(w)
    nr = space.norm(r)
    if nw <= tol.rank_tol * nv:
        if nr <= tol.residual_tol * nv:
            return VisibilityVerdict("ambiguous", nr / nv)
        return VisibilityVerdict("not_visible", nr / nv)
    cbar = space.inner(r, w) / nw ** 2
    res = space.norm(r - cbar * w)
    if res <= tol.residual_tol * nv:
        return VisibilityVerdict("visible", res / nv, complex(np.conj(cbar)))
    return VisibilityVerdict("not_visible", res / nv)


def decompose_singular_space(an: PseudomultiplierAnalysis):
    """Return ``(S, A, P)`` after checking ``S = A ⊕ P``."""
    S, A, P = an.S, an.A, an.P
    if A.rank + P.rank != S.rank:
        raise AssertionError(f"dimensions do not add up: {A.rank} + {P.rank} != {S.rank}")
    if A.rank and P.rank:
        cross = A.columns.conj().T @ an.model.space.gram @ P.columns
        if np.max(np.abs(cross)) > 1e-10:
            raise AssertionError("ambiguous and polar parts are not orthogonal")
    return S, A, P


def definable_value(an: PseudomultiplierAnalysis, d) -> complex:
    space = an.model.space
    d = space.check(d)
    nd = space.norm(d)
    if nd == 0:
        raise NotDefinableError("zero vector")
    verdict = sees_vector(an, d)
    if verdict.status == "ambiguous":
        raise NotDefinableError("ambiguous vector", f"residual {verdict.residual:.2e}")
    if verdict.status != "visible":
        raise NotDefinableError("not visible", f"residual {verdict.residual:.2e}")
    leak = space.norm(an.A.project(d)) if an.A.rank else 0.0
    if leak > an.tol.rank_tol * nd:
        raise NotDefinableError("not orthogonal to the ambiguous space", f"component {leak / nd:.2e}")
    return verdict.value


@dataclass(frozen=True)
class PolarWitness:
    vector: np.ndarray
    value: complex
    requested: complex
    distance: float


SPECTRAL_MARGIN = 1e-6
_ROTATION = cmath.exp(1j * cmath.pi / 7)


def polar_witness(an: PseudomultiplierAnalysis, p, c_schedule, spectral_margin: float = SPECTRAL_MARGIN):
    """Definable approximants of a polar vector via the resolvent of ``X*``.

    For each ``c`` the witness is ``w = P_{A^perp} conj(c) (conj(c) I - X*)^{-1} p``,
    seen with value ``c``.  A ``c`` whose conjugate sits within
    ``spectral_margin`` of the spectrum is rotated by ``exp(i pi/7)``.
    """
    tol = an.tol
    space = an.model.space
    p = space.check(p)
    npn = space.norm(p)
    if npn <= tol.rank_tol:
        raise PolarWitnessError("p is not a polar vector: polar vectors are nonzero")
    if an.P.residual(p) > tol.residual_tol * npn:
        raise PolarWitnessError("p does not lie in the polar space")
    T = an.adjoint_matrix()
    eig = np.linalg.eigvals(T)
    out = []
    for c in c_schedule:
        c = complex(c)
        for _ in range(14):
            if eig.size == 0 or np.min(np.abs(np.conj(c) - eig)) >= spectral_margin:
                break
            c = c * _ROTATION
        else:
            raise PolarWitnessError(f"could not move {c!r} away from the spectrum of X*")
        cb = np.conj(c)
        v = cb * np.linalg.solve(cb * np.eye(an.model.dim) - T, p)
        w = v - an.A.project(v) if an.A.rank else v
        value = definable_value(an, w)
        if abs(value - c) > tol.residual_tol * abs(c):
            raise PolarWitnessError(f"witness value {value} does not match {c}")
        out.append(PolarWitness(vector=w, value=value, requested=c, distance=space.norm(w - p)))
    return out


@dataclass(frozen=True)
class PointClassification:
    kind: str  # unambiguous | removable | essential
    gamma: Optional[complex] = None
    evidence: dict = field(default_factory=dict)


def classify_point(model: ModelSpace, spec: PseudomultiplierSpec, an: PseudomultiplierAnalysis,
                   alpha) -> PointClassification:
    """Decide whether ``alpha`` is an ambiguous point, and of which kind.

    Ambiguity is read off ``sees_vector(k_alpha)``; at domain points it is
    cross-checked against ``P_E k_alpha = 0``.  For an ambiguous point the
    regular space is recomputed with ``alpha`` removed; if it is still
    orthogonal to ``k_alpha`` the point is essential, otherwise the unique
    redefinition value is read off every basis vector of the new space.
    """
    tol = an.tol
    space = model.space
    k = model.kernel_vector(alpha)
    nk = space.norm(k)
    verdict = sees_vector(an, k)
    evidence = {"kernel_verdict": verdict.status, "kernel_residual": verdict.residual,
                "regular_component": space.norm(an.E.project(k)) / nk if nk else 0.0}
    in_domain = not spec.is_excluded(alpha)
    if in_domain:
        orth = evidence["regular_component"] <= tol.rank_tol
        evidence["orthogonal_to_E"] = bool(orth)
        if orth != (verdict.status == "ambiguous"):
            evidence["criteria_disagree"] = True
    if verdict.status != "ambiguous":
        return PointClassification("unambiguous", evidence=evidence)

    reduced = spec.without_point(alpha)
    E2 = regular_space(model, reduced, tol, check_uniqueness=False)
    comp = space.norm(E2.project(k)) / nk
    evidence["reduced_regular_component"] = comp
    evidence["reduced_order"] = model.dim - E2.rank
    if comp <= tol.rank_tol:
        return PointClassification("essential", evidence=evidence)
    X2, _, _ = multiplication_operator(model, reduced, E2, tol)
    row = model.eval_rows([alpha])[0]
    a = row @ E2.columns
    b = row @ X2
    gamma = complex(np.vdot(a, b) / np.vdot(a, a))
    spread = float(np.linalg.norm(b - gamma * a))
    evidence["gamma_spread"] = spread
    if spread > tol.residual_tol * max(np.linalg.norm(a), 1e-300) * max(1.0, abs(gamma)):
        raise InconsistentValueError(
            f"redefinition value at {alpha!r} varies across the reduced regular space (spread {spread:.2e})")
    return PointClassification("removable", gamma=gamma, evidence=evidence)


def pseudopole_check(an: PseudomultiplierAnalysis, alpha, h):
    """Check that ``P_{A^perp} k_alpha`` is polar, given a pseudopole witness ``h``.

    Returns ``(passed, residual)``.
    """
    tol = an.tol
    model = an.model
    space = model.space
    h = space.check(h)
    nh = space.norm(h)
    if nh == 0 or an.E.residual(h) > tol.residual_tol * nh:
        raise ValueError("witness h must be a nonzero vector of the regular space")
    if abs(model.evaluate(h, alpha)) > tol.residual_tol * nh:
        raise ValueError("witness h must vanish at alpha")
    g = an.apply(h)
    if abs(model.evaluate(g, alpha)) <= tol.residual_tol * nh:
        raise ValueError("X h must not vanish at alpha")
    k = model.kernel_vector(alpha)
    q = k - an.A.project(k) if an.A.rank else k
    nq = space.norm(q)
    residual = an.P.residual(q) / nq if nq else 1.0
    return residual <= 1e-8, residual
