"""Finite-dimensional models of Hilbert function spaces.

Three kinds of model are provided:

* coefficient models: polynomials of degree at most ``N`` with a diagonal
  (weighted) coefficient inner product, i.e. truncated Hardy-type spaces;
* kernel-sample models: the span of ``k_{lambda_i}`` for finitely many sample
  points, coordinates being coefficients against those kernels;
* composed models: direct sums of two models, or the closed subspace of a
  direct sum cut out by linear constraints ("gluing").

The module also holds the two kernel metrics, the pseudo-hyperbolic
factorization on the disc, the graded-grid Sobolev membership oracle and a
probe for projective completeness of kernel lines.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np
from scipy.optimize import minimize

from .linalg_core import (DEFAULT_TOL, InnerProductSpace, Tolerances,
                          complement, orthonormalize)


class SingularGramError(np.linalg.LinAlgError):
    """Raised when sample kernels are linearly dependent."""


class PointError(ValueError):
    """Raised for points outside a model's evaluation domain."""


# ---------------------------------------------------------------------------
# kernels


@dataclass(frozen=True)
class KernelFormula:
    """A reproducing kernel ``k(lam, mu) = k_mu(lam)``.

    ``domain`` is ``"disc"`` (open unit disc), ``"interval"`` ([0, 1]) or
    ``"table"`` (only the tabulated points).  For real kernels on [0, 1]
    ``d_first(lam, mu)`` is ``d/d lam k(lam, mu)`` and ``d_mixed`` the mixed
    second derivative; they are given only where derivative functionals are
    bounded.
    """

    name: str
    evaluator: Callable
    domain: str
    d_first: Optional[Callable] = None
    d_mixed: Optional[Callable] = None
    table_points: tuple = ()
    table_matrix: Optional[np.ndarray] = field(default=None, compare=False)

    def __call__(self, lam, mu):
        return self.evaluator(lam, mu)

    def admits(self, point) -> bool:
        if self.domain == "disc":
            return abs(complex(point)) < 1.0
        if self.domain == "interval":
            z = complex(point)
            return z.imag == 0 and 0.0 <= z.real <= 1.0
        return _index_of(self.table_points, point) is not None


def _szego(lam, mu):
    return 1.0 / (1.0 - np.conj(mu) * lam)


def _zh2(lam, mu):
    w = np.conj(mu) * lam
    return w / (1.0 - w)


_COSECH1 = 1.0 / math.sinh(1.0)


def _sobolev(lam, mu):
    lam = np.real(lam)
    mu = np.real(mu)
    return _COSECH1 * np.cosh(1.0 - np.maximum(lam, mu)) * np.cosh(np.minimum(lam, mu))


def _sobolev2(lam, mu):
    # norm |f(0)|^2 + |f'(0)|^2 + int |f''|^2 on [0, 1]
    lam = np.real(lam)
    mu = np.real(mu)
    lo = np.minimum(lam, mu)
    hi = np.maximum(lam, mu)
    return 1.0 + lam * mu + lo * lo * hi / 2.0 - lo ** 3 / 6.0


def _sobolev2_d_first(lam, mu):
    lam = np.real(lam)
    mu = np.real(mu)
    below = mu + lam * mu - lam * lam / 2.0
    above = mu + mu * mu / 2.0
    return np.where(lam <= mu, below, above)


def _sobolev2_d_mixed(lam, mu):
    return 1.0 + np.minimum(np.real(lam), np.real(mu))


SZEGO = KernelFormula("szego", _szego, "disc")
ZH2 = KernelFormula("zh2", _zh2, "disc")
SOBOLEV = KernelFormula("sobolev", _sobolev, "interval")
SOBOLEV2 = KernelFormula("sobolev2", _sobolev2, "interval", d_first=_sobolev2_d_first,
                         d_mixed=_sobolev2_d_mixed)

KERNELS = {k.name: k for k in (SZEGO, ZH2, SOBOLEV, SOBOLEV2)}


def table_kernel(points, matrix) -> KernelFormula:
    """Kernel given by its values ``matrix[i, j] = k(points[i], points[j])``.

    The table must already be Hermitian; it is not symmetrized.
    """
    pts = tuple(complex(p) for p in points)
    K = np.array(matrix, dtype=complex)
    if K.shape != (len(pts), len(pts)):
        raise ValueError(f"kernel table of shape {K.shape} does not match {len(pts)} points")
    scale = max(np.max(np.abs(K)), 1.0)
    err = np.max(np.abs(K - K.conj().T))
    if err > 1e-12 * scale:
        raise ValueError(f"kernel table is not Hermitian (max asymmetry {err:.3e})")
    K.setflags(write=False)

    def evaluate(lam, mu):
        i = _index_of(pts, lam)
        j = _index_of(pts, mu)
        if i is None or j is None:
            raise PointError("kernel table evaluated off its points")
        return K[i, j]

    return KernelFormula("table", evaluate, "table", table_points=pts, table_matrix=K)


def read_kernel_table(path) -> KernelFormula:
    """Parse the plain-text kernel table format.

    Layout (``#`` starts a comment, blank lines ignored)::

        n
        re im            <- n lines, one point each
        re im re im ...  <- n lines, row i holds k(p_i, p_j) for j = 0..n-1
    """
    rows = []
    with open(path, "r", encoding="utf-8") as fh:
        for line in fh:
            line = line.split("#", 1)[0].strip()
            if line:
                rows.append(line.split())
    if not rows or len(rows[0]) != 1:
        raise ValueError("first line must hold the number of points")
    n = int(rows[0][0])
    if len(rows) != 1 + 2 * n:
        raise ValueError(f"expected {1 + 2 * n} data lines, found {len(rows)}")
    pts = []
    for r in rows[1:1 + n]:
        if len(r) != 2:
            raise ValueError("each point line must hold two numbers")
        pts.append(complex(float(r[0]), float(r[1])))
    K = np.zeros((n, n), dtype=complex)
    for i, r in enumerate(rows[1 + n:]):
        if len(r) != 2 * n:
            raise ValueError(f"matrix row {i} must hold {2 * n} numbers")
        vals = np.array([float(x) for x in r])
        K[i] = vals[0::2] + 1j * vals[1::2]
    return table_kernel(pts, K)


def write_kernel_table(path, points, matrix) -> None:
    K = np.asarray(matrix, dtype=complex)
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"{len(points)}\n")
        for p in points:
            p = complex(p)
            fh.write(f"{float(p.real)!r} {float(p.imag)!r}\n")
        for row in K:
            fh.write(" ".join(f"{float(z.real)!r} {float(z.imag)!r}" for z in row) + "\n")


def _index_of(points, p, rtol: float = 1e-14):
    # tuples tag points of composed models
    if isinstance(p, tuple):
        for i, q in enumerate(points):
            if q == p:
                return i
        return None
    try:
        z = complex(p)
    except TypeError:
        return None
    for i, q in enumerate(points):
        if isinstance(q, tuple):
            continue
        if abs(q - z) <= rtol * max(1.0, abs(q)):
            return i
    return None


# ---------------------------------------------------------------------------
# models


class ModelSpace:
    """Common interface of all models.

    Subclasses define ``kernel_vector``, ``eval_rows`` (evaluation
    functionals as row vectors, so that ``f(lam) = row @ f``) and
    ``domain_samples`` (a finite probe set of evaluable points).
    """

    kind: str = ""
    space: InnerProductSpace
    label: str = ""
    points: tuple = ()

    @property
    def dim(self) -> int:
        return self.space.dim

    def kernel_vector(self, point, deriv_order: int = 0) -> np.ndarray:
        raise NotImplementedError

    def eval_rows(self, points) -> np.ndarray:
        raise NotImplementedError

    def evaluate(self, f, point) -> complex:
        return complex(self.eval_rows([point])[0] @ self.space.check(f))

    def evaluate_many(self, f, points) -> np.ndarray:
        return self.eval_rows(points) @ self.space.check(f)

    def is_evaluable(self, point) -> bool:
        raise NotImplementedError

    def domain_samples(self) -> list:
        raise NotImplementedError

    def functional_representer(self, values) -> np.ndarray:
        """Representer ``r`` of the functional with ``ell(e_i) = values[i]``.

        ``e_i`` are the coordinate basis vectors, so ``<f, r> = sum_i f_i values[i]``.
        """
        values = np.asarray(values, dtype=complex)
        if values.shape != (self.dim,):
            raise ValueError("one functional value per coordinate is required")
        return np.linalg.solve(self.space.gram, values.conj())

    def random_vectors(self, count: int, rng) -> np.ndarray:
        X = rng.standard_normal((self.dim, count)) + 1j * rng.standard_normal((self.dim, count))
        return X

    def _require(self, point):
        if not self.is_evaluable(point):
            raise PointError(f"point {point!r} is not evaluable in {self.label or self.kind}")


class CoefficientModel(ModelSpace):
    """Polynomials ``sum_{j=low}^{N} a_j z^j`` with ``||f||^2 = sum w_j |a_j|^2``.

    ``low = 1`` gives the truncated model of the space ``zH^2``.
    """

    kind = "coefficient"

    def __init__(self, degree: int, weights=None, low: int = 0, label: str = ""):
        if degree < 1 or low < 0 or low > degree:
            raise ValueError(f"need degree >= 1 and 0 <= low <= degree, got {degree}, {low}")
        self.degree = int(degree)
        self.low = int(low)
        self.exponents = np.arange(self.low, self.degree + 1)
        n = self.exponents.size
        if weights is None:
            w = np.ones(n)
        else:
            w = np.asarray(weights, dtype=float)
            if w.shape != (n,):
                raise ValueError(f"expected {n} weights, got shape {w.shape}")
            if np.any(w <= 0):
                raise ValueError("weights must be positive")
        self.weights = w
        self.label = label or (f"H2_{degree}" if low == 0 and weights is None else
                               f"coefficient(low={low}, degree={degree})")
        self.space = InnerProductSpace(np.diag(w).astype(complex), label=self.label)
        self.points = ()

    def is_evaluable(self, point) -> bool:
        try:
            return abs(complex(point)) < 1.0
        except TypeError:
            return False

    def _falling(self, r: int) -> np.ndarray:
        j = self.exponents
        out = np.ones(j.size)
        for k in range(r):
            out = out * (j - k)
        return out

    def eval_rows(self, points, deriv_order: int = 0) -> np.ndarray:
        pts = np.asarray([complex(p) for p in points])
        for p in pts:
            self._require(p)
        j = self.exponents
        r = deriv_order
        power = np.clip(j - r, 0, None)
        rows = self._falling(r)[None, :] * pts[:, None] ** power[None, :]
        rows[:, j < r] = 0.0
        return rows

    def kernel_vector(self, point, deriv_order: int = 0) -> np.ndarray:
        if deriv_order < 0:
            raise ValueError("derivative order must be nonnegative")
        row = self.eval_rows([point], deriv_order)[0]
        return row.conj() / self.weights

    def domain_samples(self) -> list:
        n = 2 * self.dim + 8
        golden = (math.sqrt(5.0) - 1.0) / 2.0
        angles = 2 * np.pi * (np.arange(n) + golden) / n
        return list(0.9 * np.exp(1j * angles))

    def monomial(self, j: int) -> np.ndarray:
        if j < self.low or j > self.degree:
            raise ValueError(f"z^{j} is not in the model")
        v = np.zeros(self.dim, dtype=complex)
        v[j - self.low] = 1.0
        return v

    def from_poly(self, coeffs) -> np.ndarray:
        """Vector of the polynomial with ascending coefficients ``coeffs``."""
        c = np.asarray(coeffs, dtype=complex)
        v = np.zeros(self.dim, dtype=complex)
        for j, a in enumerate(c):
            if a == 0:
                continue
            if j < self.low or j > self.degree:
                raise ValueError(f"coefficient of z^{j} does not fit the model")
            v[j - self.low] = a
        return v

    def to_poly(self, v) -> np.ndarray:
        out = np.zeros(self.degree + 1, dtype=complex)
        out[self.low:] = self.space.check(v)
        return out


class KernelSampleModel(ModelSpace):
    """Span of the kernels at finitely many sample points.

    A vector ``c`` stands for ``sum_i c_i k_{lambda_i}``; the Gram matrix is
    ``K[a, b] = k(lambda_a, lambda_b)`` and ``f(lambda_a) = (K c)_a``.
    Off-sample points of the kernel's domain are evaluable too: their
    representer is the projection of the true kernel onto the model.

    ``derivative_points`` appends the representers of ``f -> f'(mu)`` to the
    basis.  This needs a real kernel on [0, 1] whose derivative functionals
    are bounded (it must provide both ``d_first`` and ``d_mixed``).
    """

    kind = "kernel_sample"

    def __init__(self, points, kernel: KernelFormula, derivative_points=(), label: str = "",
                 tol: Tolerances = DEFAULT_TOL):
        pts = tuple(_as_point(p) for p in points)
        dpts = tuple(_as_point(p) for p in derivative_points)
        if not pts:
            raise ValueError("at least one sample point is required")
        for p in pts + dpts:
            if not kernel.admits(p):
                raise PointError(f"point {p!r} is outside the domain of the {kernel.name} kernel")
        for seq in (pts, dpts):
            for i in range(len(seq)):
                if _index_of(seq[:i], seq[i], rtol=0.0) is not None:
                    raise ValueError(f"duplicate sample point {seq[i]!r}")
        if dpts and (kernel.d_mixed is None or kernel.domain != "interval"):
            raise ValueError(f"derivative functionals are not bounded for the {kernel.name} kernel")
        self.kernel = kernel
        self.points = pts
        self.derivative_points = dpts
        n = len(pts) + len(dpts)
        K = np.zeros((n, n), dtype=complex)
        # K[b, a] = <r_a, r_b> = ell_b(r_a)
        K[:len(pts), :len(pts)] = [[kernel(a, b) for b in pts] for a in pts]
        for j, mu in enumerate(dpts):
            col = np.array([kernel.d_first(mu, a) for a in pts], dtype=complex)
            K[len(pts) + j, :len(pts)] = col
            K[:len(pts), len(pts) + j] = col.conj()
            for i, nu in enumerate(dpts):
                K[len(pts) + i, len(pts) + j] = kernel.d_mixed(mu, nu)
        scale = max(np.max(np.abs(K)), 1e-300)
        if np.max(np.abs(K - K.conj().T)) > 1e-12 * scale:
            raise ValueError("kernel is not Hermitian on the sample points")
        try:
            space = InnerProductSpace(K, label=label or f"{kernel.name}-samples", tol=tol)
        except np.linalg.LinAlgError as exc:
            raise SingularGramError(_dependence_report(pts, K[:len(pts), :len(pts)])) from exc
        self.gram_matrix = space.gram
        self.space = space
        self.label = space.label

    def is_evaluable(self, point) -> bool:
        if self.kernel.domain == "table":
            return _index_of(self.points, point) is not None
        try:
            return self.kernel.admits(point)
        except TypeError:
            return False

    def index(self, point):
        return _index_of(self.points, point)

    def _basis_values(self, x) -> np.ndarray:
        """Values at ``x`` of every basis function (array ``x`` allowed)."""
        x = np.asarray(x)
        out = [self.kernel(x, b) * np.ones(x.shape) for b in self.points]
        out += [self.kernel.d_first(mu, x) * np.ones(x.shape) for mu in self.derivative_points]
        return np.array(out, dtype=complex)

    def _basis_derivatives(self, x) -> np.ndarray:
        x = np.asarray(x)
        out = [self.kernel.d_first(x, b) * np.ones(x.shape) for b in self.points]
        out += [self.kernel.d_mixed(mu, x) * np.ones(x.shape) for mu in self.derivative_points]
        return np.array(out, dtype=complex)

    def kernel_vector(self, point, deriv_order: int = 0) -> np.ndarray:
        self._require(point)
        if deriv_order == 1:
            j = _index_of(self.derivative_points, point)
            if j is None:
                raise ValueError("derivative representers exist only at the model's derivative points")
            e = np.zeros(self.dim, dtype=complex)
            e[len(self.points) + j] = 1.0
            return e
        if deriv_order != 0:
            raise ValueError("derivative representers are only available on coefficient models")
        i = self.index(point)
        if i is not None:
            e = np.zeros(self.dim, dtype=complex)
            e[i] = 1.0
            return e
        return self.functional_representer(self.eval_rows([point])[0])

    def eval_rows(self, points) -> np.ndarray:
        rows = []
        for p in points:
            self._require(p)
            i = self.index(p)
            if i is not None:
                rows.append(np.array(self.space.gram[i]))
            else:
                rows.append(self._basis_values(np.real(complex(p)) if self.kernel.domain == "interval"
                                               else complex(p)))
        return np.array(rows, dtype=complex).reshape(len(rows), self.dim)

    def derivative_rows(self, points) -> np.ndarray:
        if self.kernel.d_first is None:
            raise ValueError(f"the {self.kernel.name} kernel has no derivative formula")
        return np.array([self._basis_derivatives(np.real(complex(p))) for p in points],
                        dtype=complex).reshape(len(points), self.dim)

    def evaluate_grid(self, f, t) -> np.ndarray:
        """Vectorized evaluation on an array of kernel-domain points."""
        return self.space.check(f) @ self._basis_values(t)

    def derivative_representer(self, point) -> np.ndarray:
        """Representer of ``f -> f'(point)`` within the model."""
        j = _index_of(self.derivative_points, point)
        if j is not None:
            return self.kernel_vector(point, 1)
        self._require(point)
        return self.functional_representer(self.derivative_rows([point])[0])

    def domain_samples(self) -> list:
        return list(self.points)


def _as_point(p):
    if isinstance(p, (list, tuple)) and len(p) == 2 and not isinstance(p[0], str):
        return complex(p[0], p[1])
    z = complex(p)
    return z


def _dependence_report(points, K) -> str:
    diag = np.real(np.diag(K))
    zero = [points[i] for i in range(len(points)) if diag[i] <= 1e-12 * max(np.max(diag), 1e-300)]
    if zero:
        return f"singular Gram matrix: kernel vanishes at {zero}"
    best = None
    for i in range(len(points)):
        for j in range(i + 1, len(points)):
            d2 = diag[i] + diag[j] - 2 * np.real(K[i, j])
            c = abs(K[i, j]) / math.sqrt(diag[i] * diag[j])
            if best is None or c > best[0]:
                best = (c, points[i], points[j], d2)
    if best is None:
        return "singular Gram matrix"
    return (f"singular Gram matrix: nearly dependent kernels at {best[1]!r} and {best[2]!r} "
            f"(normalized inner product {best[0]:.12f})")


class ComposedModel(ModelSpace):
    """Direct sum of two models, optionally cut down by linear constraints.

    Points are tagged ``(0, lam)`` for the first summand and ``(1, mu)`` for
    the second.  In glued mode the model is the subspace orthogonal to the
    constraint vectors, in coordinates of an orthonormal basis of that
    subspace, and every representer is projected into it.
    """

    kind = "composed"

    def __init__(self, first: ModelSpace, second: ModelSpace, mode: str = "direct_sum",
                 constraints=(), identify=(), label: str = "", tol: Tolerances = DEFAULT_TOL):
        if mode not in ("direct_sum", "glued"):
            raise ValueError(f"unknown composition mode {mode!r}")
        self.parts = (first, second)
        self.mode = mode
        self.offsets = (0, first.dim)
        n = first.dim + second.dim
        G = np.zeros((n, n), dtype=complex)
        G[:first.dim, :first.dim] = first.space.gram
        G[first.dim:, first.dim:] = second.space.gram
        self.ambient = InnerProductSpace(G, label="ambient")
        self.identified = tuple((_as_point(a), _as_point(b)) for a, b in identify)
        cons = [self.ambient.check(c) for c in constraints]
        for a, b in self.identified:
            cons.append(np.concatenate([first.kernel_vector(a), -second.kernel_vector(b)]))
        if mode == "direct_sum" and cons:
            raise ValueError("constraints need glued mode")
        if mode == "glued":
            if not cons:
                raise ValueError("glued mode needs at least one constraint")
            C = orthonormalize(cons, self.ambient, tol)
            if C.rank < len(cons):
                raise ValueError("constraint vectors are linearly dependent")
            self.subspace = complement(C, tol)
            self.constraint_frame = C
            self.space = InnerProductSpace(np.eye(self.subspace.rank), label=label or "glued")
        else:
            self.subspace = None
            self.constraint_frame = None
            self.space = self.ambient
        self.label = label or f"{mode}({first.label}, {second.label})"
        self.points = tuple((0, p) for p in first.points) + tuple((1, p) for p in second.points)

    def _split(self, point):
        if not (isinstance(point, tuple) and len(point) == 2 and point[0] in (0, 1)):
            raise PointError(f"composed-model points are (side, point) pairs, got {point!r}")
        return point[0], self.parts[point[0]]

    def is_evaluable(self, point) -> bool:
        try:
            side, part = self._split(point)
        except PointError:
            return False
        return part.is_evaluable(point[1])

    def inject(self, side: int, v) -> np.ndarray:
        """Model coordinates of the summand vector ``v`` (projected when glued)."""
        part = self.parts[side]
        x = np.zeros(self.ambient.dim, dtype=complex)
        off = self.offsets[side]
        x[off:off + part.dim] = part.space.check(v)
        return self.from_ambient(x)

    def from_ambient(self, x) -> np.ndarray:
        if self.subspace is None:
            return self.ambient.check(x)
        return self.subspace.coords(x)

    def to_ambient(self, f) -> np.ndarray:
        f = self.space.check(f)
        if self.subspace is None:
            return f
        return self.subspace.columns @ f

    def component(self, f, side: int) -> np.ndarray:
        x = self.to_ambient(f)
        off = self.offsets[side]
        return x[off:off + self.parts[side].dim]

    def kernel_vector(self, point, deriv_order: int = 0) -> np.ndarray:
        side, part = self._split(point)
        return self.inject(side, part.kernel_vector(point[1], deriv_order))

    def eval_rows(self, points) -> np.ndarray:
        rows = np.zeros((len(points), self.ambient.dim), dtype=complex)
        for k, p in enumerate(points):
            side, part = self._split(p)
            off = self.offsets[side]
            rows[k, off:off + part.dim] = part.eval_rows([p[1]])[0]
        if self.subspace is None:
            return rows
        return rows @ self.subspace.columns

    def domain_samples(self) -> list:
        return ([(0, p) for p in self.parts[0].domain_samples()]
                + [(1, p) for p in self.parts[1].domain_samples()])


def build_coefficient_model(degree: int, weights=None, low: int = 0) -> CoefficientModel:
    return CoefficientModel(degree, weights=weights, low=low)


def build_kernel_sample_model(points, kernel, derivative_points=()) -> KernelSampleModel:
    if isinstance(kernel, str):
        kernel = KERNELS[kernel]
    return KernelSampleModel(points, kernel, derivative_points=derivative_points)


def compose_models(first: ModelSpace, second: ModelSpace, mode: str = "direct_sum",
                   constraints=(), identify=()) -> ComposedModel:
    return ComposedModel(first, second, mode=mode, constraints=constraints, identify=identify)


def kernel_vector(model: ModelSpace, point, deriv_order: int = 0) -> np.ndarray:
    return model.kernel_vector(point, deriv_order)


# ---------------------------------------------------------------------------
# metrics


def _unit_kernel(model: ModelSpace, point, tol: Tolerances):
    k = model.kernel_vector(point)
    nk = model.space.norm(k)
    if nk <= tol.rank_tol:
        raise ValueError(f"kernel vanishes at {point!r}; the projective metric is undefined there")
    return k / nk


def line_distance(space: InnerProductSpace, x, y, variant: str = "standard") -> float:
    """Projective distance between the lines through unit vectors ``x`` and ``y``.

    Computed from residual norms rather than from ``1 - |<x, y>|`` so that
    small distances keep their relative accuracy.
    """
    c = space.inner(x, y)
    if variant == "standard":
        omega = c / abs(c) if abs(c) > 0 else 1.0
        return space.norm(x - omega * y)
    if variant == "opnorm":
        s = space.norm(x - c * y)
        return s * math.sqrt(1.0 + min(abs(c), 1.0) ** 2)
    raise ValueError(f"unknown variant {variant!r}")


def metric_d(model: ModelSpace, alpha, beta) -> float:
    return model.space.norm(model.kernel_vector(alpha) - model.kernel_vector(beta))


def metric_p(model: ModelSpace, alpha, beta, variant: str = "standard",
             tol: Tolerances = DEFAULT_TOL) -> float:
    x = _unit_kernel(model, alpha, tol)
    y = _unit_kernel(model, beta, tol)
    return line_distance(model.space, x, y, variant)


def pseudo_hyperbolic_factorization(lam, mu):
    """Return ``(ph, h)`` with ``p_szego(lam, mu) = sqrt(2) * ph * h``."""
    lam = complex(lam)
    mu = complex(mu)
    if abs(lam) >= 1 or abs(mu) >= 1:
        raise ValueError("both points must lie in the open unit disc")
    denom = abs(1 - lam.conjugate() * mu)
    ph = abs(lam - mu) / denom
    h = (1.0 + math.sqrt(1 - abs(lam) ** 2) * math.sqrt(1 - abs(mu) ** 2) / denom) ** -0.5
    return ph, h


def kernel_nonvanishing_check(model=None, *, points=None, kernel=None, tol: Tolerances = DEFAULT_TOL):
    """Smallest ``|k(lam, mu)|`` over sample pairs, and whether it is nonzero.

    Accepts either a kernel-sample model or raw ``points`` and ``kernel``, so
    that kernels with a zero (whose Gram matrix is singular) can be examined.
    """
    if model is not None:
        if model.kind != "kernel_sample":
            raise ValueError("the check needs a kernel-sample model")
        K = np.abs(np.asarray(model.space.gram))
        pts = model.points
    else:
        if isinstance(kernel, str):
            kernel = KERNELS[kernel]
        pts = tuple(_as_point(p) for p in points)
        K = np.abs(np.array([[kernel(a, b) for b in pts] for a in pts], dtype=complex))
    i, j = np.unravel_index(np.argmin(K), K.shape)
    m = float(K[i, j])
    return m > tol.rank_tol * max(float(np.max(K)), 1e-300), m, (pts[i], pts[j])


# ---------------------------------------------------------------------------
# Sobolev membership oracle


@dataclass(frozen=True)
class MembershipVerdict:
    status: str
    norm_estimates: tuple
    divergence_rate: Optional[float] = None


DEFAULT_LEVELS = tuple(4.0 ** -k for k in range(2, 9))


def graded_grid(m: int = 512) -> np.ndarray:
    """Points ``(i/m)^2``, clustered at 0 where the singular behaviour lives."""
    return (np.arange(m + 1) / m) ** 2


def sobolev_membership(f, multiplier, levels=DEFAULT_LEVELS, m: int = 512) -> MembershipVerdict:
    """Decide numerically whether ``multiplier * f`` lies in W^{1,2}[0, 1].

    For each cutoff ``eps`` in ``levels`` the squared norm of the product on
    ``[eps, 1]`` is estimated with the trapezoid rule and finite differences
    on the graded grid, in the variable ``s = sqrt(t)`` where it is uniform.  A least-squares slope of the last four estimates
    against ``log(1/eps)`` above ``max(0.05 |f(0)|^2, 1e-4)`` means divergence;
    otherwise the estimates must agree to 1% over the last three levels.

    Parameters
    ----------
    f : callable or array
        Function on [0, 1], or its values on ``graded_grid(m)``.
    multiplier : callable
        Pointwise multiplier, vectorized over arrays.
    """
    levels = tuple(sorted((float(e) for e in levels), reverse=True))
    t = graded_grid(m)
    if len(levels) < 3 or any(e <= t[1] or e >= 1 for e in levels):
        raise ValueError("need at least 3 levels, each resolved by the grid")
    fv = np.asarray(f(t) if callable(f) else f, dtype=complex)
    if fv.shape != t.shape:
        raise ValueError(f"f must be sampled on the {t.size}-point graded grid")
    h = np.asarray(multiplier(t), dtype=complex) * fv
    # work in s = sqrt(t), where the grid is uniform and sqrt-type
    # singularities are smooth: dt = 2 s ds and dh/dt = (dh/ds) / (2 s)
    s = np.sqrt(t)
    dh_ds = np.gradient(h, s, edge_order=2)
    q = np.zeros(t.size)
    q[1:] = 2 * s[1:] * np.abs(h[1:]) ** 2 + np.abs(dh_ds[1:]) ** 2 / (2 * s[1:])
    panels = 0.5 * (q[1:] + q[:-1]) * np.diff(s)
    tail = np.concatenate([np.cumsum(panels[::-1])[::-1], [0.0]])
    estimates = []
    for eps in levels:
        i = int(np.searchsorted(t, eps))
        estimates.append((eps, float(tail[i])))
    x = np.log(1.0 / np.array(levels))
    y = np.array([e for _, e in estimates])
    # early levels still collect bulk mass of convergent functions; the
    # trailing levels carry the asymptotic log-rate
    tail_n = min(4, len(levels))
    slope = float(np.polyfit(x[-tail_n:], y[-tail_n:], 1)[0])
    slope_tol = max(0.05 * abs(fv[0]) ** 2, 1e-4)
    if slope > slope_tol:
        return MembershipVerdict("diverges", tuple(estimates), slope)
    last = y[-3:]
    ref = max(abs(last[-1]), 1e-300)
    if np.all(np.abs(np.diff(last)) <= 0.01 * ref):
        return MembershipVerdict("in_space", tuple(estimates), slope)
    return MembershipVerdict("inconclusive", tuple(estimates), slope)


# ---------------------------------------------------------------------------
# projective completeness probe


@dataclass
class ProbeReport:
    limit: np.ndarray
    norm_steps: list
    line_steps: list
    grid_distance: float
    distance: float
    nearest_point: complex
    limit_is_kernel: bool
    minimizer_on_boundary: bool


def default_disc_grid(r_min: float = 0.15, r_max: float = 0.99, n_r: int = 10, n_theta: int = 10):
    """100-point polar grid of the punctured disc used by the probe."""
    radii = np.linspace(r_min, r_max, n_r)
    angles = 2 * np.pi * np.arange(n_theta) / n_theta
    return [r * np.exp(1j * a) for r in radii for a in angles]


def projective_completeness_probe(model: ModelSpace, coefficients, points, search_grid=None,
                                  kernel_tol: float = 1e-6, tol: Tolerances = DEFAULT_TOL) -> ProbeReport:
    """Follow ``u_j = c_j k_{alpha_j}`` and measure how far its limit line is from kernel lines.

    The limit is the last term of the sequence (or its normalized line when
    the norms blow up).  Distances use the projective metric against the
    search grid, then a local refinement inside the grid's radial range.
    Finite sequences cannot certify completeness; the report is evidence.
    """
    space = model.space
    us = [complex(c) * model.kernel_vector(a) for c, a in zip(coefficients, points)]
    if len(us) < 2:
        raise ValueError("the probe needs at least two terms")
    norms = [space.norm(u) for u in us]
    if min(norms) <= tol.rank_tol:
        raise ValueError("a sequence term is the zero vector")
    unit = [u / n for u, n in zip(us, norms)]
    norm_steps = [space.norm(us[j + 1] - us[j]) for j in range(len(us) - 1)]
    line_steps = [line_distance(space, unit[j + 1], unit[j]) for j in range(len(us) - 1)]
    norm_growth = norms[-1] > 10 * norms[0] and norms[-1] > norms[-2]
    lines_settle = line_steps[-1] <= max(1e-3, 0.5 * max(line_steps))
    if norm_growth and not lines_settle:
        raise ValueError("sequence diverges in norm without projective convergence")
    limit = us[-1] if not norm_growth else unit[-1]
    lu = limit / space.norm(limit)

    if search_grid is None:
        search_grid = default_disc_grid() if isinstance(model, CoefficientModel) else model.domain_samples()
    grid = [p for p in search_grid if model.is_evaluable(p)]

    def dist(beta):
        k = model.kernel_vector(beta)
        nk = space.norm(k)
        if nk <= tol.rank_tol:
            return math.sqrt(2.0)
        return line_distance(space, lu, k / nk)

    vals = [dist(b) for b in grid]
    i = int(np.argmin(vals))
    best, best_pt = vals[i], grid[i]
    grid_best = best
    on_boundary = False
    if all(not isinstance(p, tuple) for p in grid) and model.kind != "kernel_sample":
        radii = [abs(complex(p)) for p in grid]
        r_lo, r_hi = min(radii), max(radii)

        def objective(xy):
            z = complex(xy[0], xy[1])
            r = abs(z)
            if r < r_lo or r > r_hi or not model.is_evaluable(z):
                return 2.0 + abs(r - min(max(r, r_lo), r_hi))
            return dist(z)

        for j in np.argsort(vals)[:3]:
            z0 = complex(grid[j])
            res = minimize(objective, [z0.real, z0.imag], method="Nelder-Mead",
                           options={"xatol": 1e-13, "fatol": 1e-15, "maxiter": 4000})
            if res.fun < best:
                best, best_pt = float(res.fun), complex(res.x[0], res.x[1])
        on_boundary = abs(abs(best_pt) - r_lo) <= 1e-6 * max(r_lo, 1e-12)
    return ProbeReport(limit=limit, norm_steps=norm_steps, line_steps=line_steps,
                       grid_distance=float(grid_best), distance=float(best),
                       nearest_point=best_pt, limit_is_kernel=bool(best <= kernel_tol),
                       minimizer_on_boundary=bool(on_boundary))
