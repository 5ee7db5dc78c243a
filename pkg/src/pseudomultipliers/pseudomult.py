"""Pseudomultiplier specs on a model, their regular space and multiplication operator.

The regular space ``E`` of a symbol ``phi`` on a domain ``D`` is the set of
``f`` for which ``phi * f`` agrees on ``D`` with some ``g`` in the model;
``X f = g`` is the induced operator.  Three routes compute it:

``exact``
    rational symbol on a coefficient model; divisibility by the denominator
    and forced values at overridden points are linear conditions.
``declared``
    the caller lists constraint vectors whose orthogonal complement is ``E``;
    an optional membership oracle certifies them.
``finite-model``
    pointwise symbol on any model; ``E`` is where the interpolation system
    ``g(lam) = phi(lam) f(lam)`` over the domain samples is solvable.
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Callable, Optional

import numpy as np
from numpy.polynomial import polynomial as npoly

from .linalg_core import (DEFAULT_TOL, Frame, InnerProductSpace, Tolerances, adjoint_of,
                          complement, orthonormalize)
from .spaces import (CoefficientModel, KernelSampleModel, ModelSpace, _index_of,
                     graded_grid, sobolev_membership)


class RegularSpaceError(ValueError):
    """The regular space could not be computed or certified."""


class DomainError(RegularSpaceError):
    """The domain is not a set of uniqueness for the model."""


@dataclass(frozen=True)
class RationalSymbol:
    """``p / q`` with ascending coefficient lists."""

    numerator: tuple
    denominator: tuple

    def __init__(self, numerator, denominator=(1.0,)):
        p = np.trim_zeros(np.asarray(numerator, dtype=complex), "b")
        q = np.trim_zeros(np.asarray(denominator, dtype=complex), "b")
        if q.size == 0:
            raise ValueError("denominator is the zero polynomial")
        object.__setattr__(self, "numerator", tuple(p) if p.size else (0j,))
        object.__setattr__(self, "denominator", tuple(q))

    @property
    def p(self) -> np.ndarray:
        return np.array(self.numerator, dtype=complex)

    @property
    def q(self) -> np.ndarray:
        return np.array(self.denominator, dtype=complex)

    def poles(self) -> np.ndarray:
        q = self.q
        return npoly.polyroots(q) if q.size > 1 else np.zeros(0, dtype=complex)

    def __call__(self, z):
        return npoly.polyval(z, self.p) / npoly.polyval(z, self.q)


@dataclass(frozen=True)
class TableSymbol:
    """Symbol given pointwise by a function (or a constant)."""

    function: Callable
    name: str = "table"

    def __call__(self, z):
        return self.function(z)


def constant_symbol(value) -> TableSymbol:
    value = complex(value)
    return TableSymbol(lambda z: value, name=f"constant({value})")


@dataclass(frozen=True)
class SobolevOracle:
    """Certifies declared constraints for a multiplier acting on W^{1,2}[0, 1]."""

    multiplier: Callable
    m: int = 512

    def __call__(self, model: ModelSpace, f) -> str:
        if not isinstance(model, KernelSampleModel) or model.kernel.domain != "interval":
            raise RegularSpaceError("the Sobolev oracle needs a kernel-sample model on [0, 1]")
        values = model.evaluate_grid(f, graded_grid(self.m))
        return sobolev_membership(values, self.multiplier, m=self.m).status


@dataclass(frozen=True)
class PseudomultiplierSpec:
    """Symbol, domain modifications and optional declared regular space.

    ``overrides`` redefine the symbol at points (adding them to the domain);
    ``exclusions`` remove points.  Poles of a rational symbol are excluded
    automatically unless overridden.
    """

    symbol: object
    overrides: tuple = ()
    exclusions: tuple = ()
    declared: Optional[tuple] = None
    oracle: Optional[Callable] = None
    label: str = ""

    def __post_init__(self):
        object.__setattr__(self, "overrides", tuple((p, complex(v)) for p, v in self.overrides))
        object.__setattr__(self, "exclusions", tuple(self.exclusions))
        if self.declared is not None:
            object.__setattr__(self, "declared", tuple(np.asarray(c, dtype=complex) for c in self.declared))
        for p, _ in self.overrides:
            if _index_of(self.exclusions, p) is not None:
                raise ValueError(f"override at excluded point {p!r}")

    def override_at(self, point):
        pts = [p for p, _ in self.overrides]
        i = _index_of(pts, point)
        return None if i is None else self.overrides[i][1]

    def is_excluded(self, point) -> bool:
        if _index_of(self.exclusions, point) is not None:
            return True
        if self.override_at(point) is not None:
            return False
        if isinstance(self.symbol, RationalSymbol) and not isinstance(point, tuple):
            z = complex(point)
            return bool(np.any(np.abs(self.symbol.poles() - z) <= 1e-12))
        return False

    def value(self, point) -> complex:
        c = self.override_at(point)
        if c is not None:
            return c
        return complex(self.symbol(point))

    def without_point(self, point) -> "PseudomultiplierSpec":
        """The same symbol with ``point`` removed from its domain."""
        ov = tuple((p, v) for p, v in self.overrides if _index_of([p], point) is None)
        ex = self.exclusions if _index_of(self.exclusions, point) is not None else self.exclusions + (point,)
        return replace(self, overrides=ov, exclusions=ex)


def domain_points(model: ModelSpace, spec: PseudomultiplierSpec) -> list:
    """Finite domain sample: model probe points plus override points, minus exclusions."""
    pts = [p for p in model.domain_samples() if not spec.is_excluded(p)]
    for p, _ in spec.overrides:
        if not model.is_evaluable(p):
            raise ValueError(f"override point {p!r} is not evaluable in the model")
        if _index_of(pts, p) is None:
            pts.append(p)
    return pts


def _symbol_values(spec: PseudomultiplierSpec, pts) -> np.ndarray:
    vals = np.array([spec.value(p) for p in pts], dtype=complex)
    if not np.all(np.isfinite(vals)):
        bad = [pts[i] for i in np.flatnonzero(~np.isfinite(vals))]
        raise RegularSpaceError(f"symbol is undefined at domain points {bad}; exclude or override them")
    return vals


_DERIV_STEP = 1e-6


def _extension_system(model: ModelSpace, spec: PseudomultiplierSpec, pts):
    """Rows ``R`` and right-hand side map for the system ``R g = rhs(f)``.

    Evaluation rows at the domain points carry ``phi(lam) f(lam)``.  Models
    with derivative nodes add one row per node, whose data is the one-sided
    difference quotient of ``phi f`` there: the derivative of ``g`` is fixed
    by the values of ``g`` on the domain near the node.
    """
    R = model.eval_rows(pts)
    phi = _symbol_values(spec, pts)
    nodes = tuple(getattr(model, "derivative_points", ()))
    if not nodes:
        return R, lambda F: phi[:, None] * (R @ F)
    Rd = model.derivative_rows(nodes)
    stencils = []
    for mu in nodes:
        x0 = float(np.real(mu))
        h = _DERIV_STEP if x0 + 2 * _DERIV_STEP <= 1.0 else -_DERIV_STEP
        xs = [x0, x0 + h, x0 + 2 * h]
        vals = np.array([spec.value(x) for x in xs], dtype=complex)
        stencils.append((model.eval_rows(xs), vals, h))

    def rhs(F):
        top = phi[:, None] * (R @ F)
        rows = []
        for E3, vals, h in stencils:
            G = vals[:, None] * (E3 @ F)
            rows.append((-3 * G[0] + 4 * G[1] - G[2]) / (2 * h))
        return np.vstack([top, np.array(rows)])

    return np.vstack([R, Rd]), rhs


def _uniqueness_rows(model: ModelSpace, pts, tol: Tolerances) -> np.ndarray:
    R = model.eval_rows(pts)
    if R.shape[0] == 0:
        raise DomainError("the domain is empty")
    nodes = tuple(getattr(model, "derivative_points", ()))
    if nodes:
        R = np.vstack([R, model.derivative_rows(nodes)])
    s = np.linalg.svd(model.space.unwhiten(R.conj().T).conj().T, compute_uv=False)
    rank = int(np.sum(s > tol.rank_tol * s[0])) if s.size and s[0] > 0 else 0
    if rank < model.dim:
        raise DomainError(f"domain is not a set of uniqueness: evaluation rank {rank} < dim {model.dim}")
    return R


def _null_frame(C: np.ndarray, space: InnerProductSpace, tol: Tolerances) -> Frame:
    """Null space of the row conditions ``C f = 0`` with relative rank decisions."""
    if C.shape[0] == 0:
        return complement(Frame(space, np.zeros((space.dim, 0))), tol)
    norms = np.linalg.norm(C, axis=1)
    C = C[norms > 0] / norms[norms > 0, None]
    if C.shape[0] == 0:
        return complement(Frame(space, np.zeros((space.dim, 0))), tol)
    Winv = space.unwhiten(np.eye(space.dim, dtype=complex))
    _, s, Vh = np.linalg.svd(C @ Winv, full_matrices=True)
    r = int(np.sum(s > tol.rank_tol * s[0])) if s[0] > 0 else 0
    Y = Vh.conj().T[:, r:]
    return Frame(space, space.unwhiten(Y), tol)


# ---------------------------------------------------------------------------
# exact route


@dataclass(frozen=True)
class _ExactData:
    quotient: np.ndarray  # maps model coordinates to quotient coefficients of degree 0..L
    conditions: np.ndarray


def _exact_data(model: CoefficientModel, spec: PseudomultiplierSpec) -> _ExactData:
    sym = spec.symbol
    p, q = sym.p, sym.q
    poles = sym.poles()
    if np.any(np.abs(poles) > 1 + 1e-12):
        raise RegularSpaceError("rational symbols must have their poles in the closed unit disc")
    if p.size and np.any(np.abs(npoly.polyval(poles, p)) <= 1e-12 * max(1.0, np.max(np.abs(p)))):
        raise RegularSpaceError("numerator and denominator share a root; reduce the fraction first")
    n_q = q.size - 1
    L = model.degree + max(p.size - 1, 0)
    quot = np.zeros((L + 1, model.dim), dtype=complex)
    rem = np.zeros((max(n_q, 1), model.dim), dtype=complex)
    for col, j in enumerate(model.exponents):
        pz = np.concatenate([np.zeros(j, dtype=complex), p])
        qq, rr = npoly.polydiv(pz, q) if n_q > 0 else (pz / q[0], np.zeros(1))
        qq = np.atleast_1d(qq)
        rr = np.atleast_1d(rr)
        quot[:qq.size, col] = qq[:L + 1]
        if n_q > 0:
            rem[:rr.size, col] = rr[:n_q]
    rows = [rem] if n_q > 0 else []
    outside = [d for d in range(L + 1) if d < model.low or d > model.degree]
    if outside:
        rows.append(quot[outside])
    for a, c in spec.overrides:
        if spec.is_excluded(a):
            continue
        powers = complex(a) ** np.arange(L + 1)
        row = powers @ quot - c * model.eval_rows([a])[0]
        rows.append(row[None, :])
    C = np.vstack(rows) if rows else np.zeros((0, model.dim), dtype=complex)
    return _ExactData(quotient=quot, conditions=C)


# ---------------------------------------------------------------------------
# public operations


def solve_path(model: ModelSpace, spec: PseudomultiplierSpec) -> str:
    if spec.declared is not None:
        return "declared"
    if isinstance(model, CoefficientModel) and isinstance(spec.symbol, RationalSymbol):
        return "exact"
    return "finite-model"


def regular_space(model: ModelSpace, spec: PseudomultiplierSpec, tol: Tolerances = DEFAULT_TOL,
                  check_uniqueness: bool = True) -> Frame:
    """Orthonormal frame of the regular space ``E``.

    ``check_uniqueness=False`` skips the set-of-uniqueness test; on a
    kernel-sample model removing a sample point always breaks it, even when
    the underlying function space is unaffected.
    """
    path = solve_path(model, spec)
    pts = domain_points(model, spec)
    if check_uniqueness:
        _uniqueness_rows(model, pts, tol)
    if path == "exact":
        return _null_frame(_exact_data(model, spec).conditions, model.space, tol)
    if path == "declared":
        cons = [model.space.check(c) for c in spec.declared]
        E = complement(orthonormalize(cons, model.space, tol), tol)
        if spec.oracle is not None:
            _certify(model, spec, E, tol)
        return E
    R, rhs = _extension_system(model, spec, pts)
    # f is in E iff rhs(f) lies in the range of R
    U, sR, _ = np.linalg.svd(R, full_matrices=False)
    Q = U[:, :int(np.sum(sR > tol.rank_tol * sR[0]))]
    Winv = model.space.unwhiten(np.eye(model.dim, dtype=complex))
    B = rhs(Winv)
    M = B - Q @ (Q.conj().T @ B)
    scale = np.linalg.norm(B, 2)
    _, s, Vh = np.linalg.svd(M, full_matrices=True)
    s_full = np.zeros(model.dim)
    s_full[:min(s.size, model.dim)] = s[:model.dim]
    keep = s_full <= tol.rank_tol * max(scale, 1e-300)
    return Frame(model.space, model.space.unwhiten(Vh.conj().T[:, keep]), tol)


def _certify(model, spec, E: Frame, tol: Tolerances):
    S = complement(E, tol)
    for j in range(E.rank):
        status = spec.oracle(model, E.columns[:, j])
        if status != "in_space":
            raise RegularSpaceError(
                f"declared constraints rejected by the oracle: regular-space vector {j} is {status}")
    for j in range(S.rank):
        status = spec.oracle(model, S.columns[:, j])
        if status != "diverges":
            raise RegularSpaceError(
                f"declared constraints rejected by the oracle: constraint direction {j} is {status}")


def multiplication_operator(model: ModelSpace, spec: PseudomultiplierSpec, E: Frame,
                            tol: Tolerances = DEFAULT_TOL):
    """Return ``(X, X_star, sigma_max)``.

    ``X`` sends E-coordinates to model coordinates; ``X_star`` is its adjoint
    from the model into E-coordinates.
    """
    if E.rank == 0:
        X = np.zeros((model.dim, 0), dtype=complex)
        return X, np.zeros((0, model.dim), dtype=complex), 0.0
    if solve_path(model, spec) == "exact":
        data = _exact_data(model, spec)
        G = data.quotient[model.low:model.degree + 1] @ E.columns
        resid = np.linalg.norm(data.conditions @ E.columns) if data.conditions.size else 0.0
        if resid > tol.residual_tol * max(1.0, np.linalg.norm(data.conditions)):
            raise RegularSpaceError("extension system inconsistent: frame is not inside the regular space")
        X = G
    else:
        pts = domain_points(model, spec)
        R, rhs_map = _extension_system(model, spec, pts)
        rhs = rhs_map(E.columns)
        X, *_ = np.linalg.lstsq(R, rhs, rcond=None)
        miss = np.linalg.norm(R @ X - rhs, axis=0)
        scale = np.maximum(np.linalg.norm(rhs, axis=0), np.linalg.norm(R @ E.columns, axis=0))
        if np.any(miss > tol.residual_tol * np.maximum(scale, 1e-300)):
            raise RegularSpaceError(
                f"extension system inconsistent (relative miss {np.max(miss / np.maximum(scale, 1e-300)):.2e}); "
                "the frame is not the regular space")
    X_star = adjoint_of(X, InnerProductSpace.identity(E.rank), model.space)
    Xw = model.space.whiten(X)
    sigma = float(np.linalg.norm(Xw, 2)) if Xw.size else 0.0
    return X, X_star, sigma


@dataclass(frozen=True)
class PseudomultiplierAnalysis:
    model: ModelSpace
    spec: PseudomultiplierSpec
    E: Frame
    X: np.ndarray
    X_star: np.ndarray
    order: int
    S: Frame
    A: Frame
    P: Frame
    path: str
    sigma_max: float
    tol: Tolerances = field(default=DEFAULT_TOL)

    def embedded_adjoint(self, v) -> np.ndarray:
        """``X* v`` as a model vector."""
        return self.E.columns @ (self.X_star @ self.model.space.check(v))

    def apply(self, h) -> np.ndarray:
        """``X h`` for a model vector ``h`` in ``E``."""
        return self.X @ self.E.coords(h)

    def adjoint_matrix(self) -> np.ndarray:
        """``X*`` as a square matrix on the model via the inclusion of ``E``."""
        return self.E.columns @ self.X_star


def _kernel_in(S: Frame, T: np.ndarray, atol: float, tol: Tolerances) -> Frame:
    """Directions of ``S`` that ``T`` sends below ``atol``.

    Working inside ``S`` keeps small but nonzero responses of ``T`` from
    tilting a kernel computed on the whole space away from ``S``.
    """
    if S.rank == 0:
        return S
    _, s, Vh = np.linalg.svd(T @ S.columns, full_matrices=True)
    s_full = np.zeros(S.rank)
    s_full[:s.size] = s[:S.rank]
    C = Vh.conj().T[:, s_full <= atol]
    return Frame(S.space, S.columns @ C, tol)


def analyze(model: ModelSpace, spec: PseudomultiplierSpec, tol: Tolerances = DEFAULT_TOL,
            check_uniqueness: bool = True) -> PseudomultiplierAnalysis:
    E = regular_space(model, spec, tol, check_uniqueness=check_uniqueness)
    X, X_star, sigma = multiplication_operator(model, spec, E, tol)
    S = complement(E, tol)
    atol = max(tol.residual_tol, tol.rank_tol * sigma)
    A = _kernel_in(S, X_star, atol, tol) if E.rank else S
    P = orthogonal_difference(S, A, tol)
    return PseudomultiplierAnalysis(model=model, spec=spec, E=E, X=X, X_star=X_star,
                                    order=model.dim - E.rank, S=S, A=A, P=P,
                                    path=solve_path(model, spec), sigma_max=sigma, tol=tol)


def orthogonal_difference(S: Frame, A: Frame, tol: Tolerances = DEFAULT_TOL) -> Frame:
    """``S`` minus ``A`` orthogonally, for ``A`` inside ``S``."""
    if S.rank == 0:
        return S
    if A.rank == 0:
        return S
    coords = np.column_stack([S.coords(A.columns[:, j]) for j in range(A.rank)])
    Q, _ = np.linalg.qr(coords, mode="complete")
    rest = Q[:, A.rank:]
    return Frame(S.space, S.columns @ rest, tol)
