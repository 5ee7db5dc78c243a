"""Dense complex linear algebra over spaces with a Gram inner product.

Every space carries a Hermitian positive definite Gram matrix ``G`` and the
inner product is ``<u, v> = v^H G u`` (linear in the first slot).  All
subspace work is done in whitened coordinates ``y = L^H x`` where
``G = L L^H`` is the Cholesky factorization, so that ordinary orthonormal
algorithms apply.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg as sla


@dataclass(frozen=True)
class Tolerances:
    """Numerical thresholds shared by the whole toolkit.

    Parameters
    ----------
    rank_tol : float
        Singular values below ``rank_tol * sigma_max`` count as zero.
    residual_tol : float
        Relative residual accepted for identities such as ``X* v = c P_E v``.
    ortho_tol : float
        Allowed entrywise deviation of ``Q^H G Q`` from the identity.
    """

    rank_tol: float = 1e-9
    residual_tol: float = 1e-8
    ortho_tol: float = 1e-9

    def __post_init__(self):
        for name in ("rank_tol", "residual_tol", "ortho_tol"):
            value = getattr(self, name)
            if not (0.0 < value < 1.0):
                raise ValueError(f"{name} must lie in (0, 1), got {value!r}")

    def replace(self, **changes) -> "Tolerances":
        values = {"rank_tol": self.rank_tol, "residual_tol": self.residual_tol,
                  "ortho_tol": self.ortho_tol}
        unknown = set(changes) - set(values)
        if unknown:
            raise ValueError(f"unknown tolerance keys: {sorted(unknown)}")
        values.update(changes)
        return Tolerances(**values)

    def as_dict(self) -> dict:
        return {"rank_tol": self.rank_tol, "residual_tol": self.residual_tol,
                "ortho_tol": self.ortho_tol}


DEFAULT_TOL = Tolerances()


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=complex, copy=True)
    a.setflags(write=False)
    return a


class InnerProductSpace:
    """Finite-dimensional complex space with a Gram inner product.

    Parameters
    ----------
    gram : (dim, dim) array_like
        Hermitian positive definite Gram matrix.
    label : str
        Free-form description carried into reports.
    tol : Tolerances
        Only ``rank_tol`` is used, for the definiteness test.
    """

    def __init__(self, gram, label: str = "", tol: Tolerances = DEFAULT_TOL):
        G = np.asarray(gram, dtype=complex)
        if G.ndim != 2 or G.shape[0] != G.shape[1] or G.shape[0] == 0:
            raise ValueError(f"Gram matrix must be square and nonempty, got shape {G.shape}")
        scale = np.max(np.abs(G))
        if scale == 0:
            raise np.linalg.LinAlgError("Gram matrix is zero")
        if np.max(np.abs(G - G.conj().T)) > 1e-12 * scale:
            raise ValueError("Gram matrix is not Hermitian to 1e-12 relative accuracy")
        G = 0.5 * (G + G.conj().T)
        eig = np.linalg.eigvalsh(G)
        if eig[0] <= tol.rank_tol * eig[-1]:
            raise np.linalg.LinAlgError(
                f"Gram matrix is not positive definite: eigenvalue range "
                f"[{eig[0]:.3e}, {eig[-1]:.3e}]")
        self.gram = _frozen(G)
        self.dim = G.shape[0]
        self.label = label
        self._chol = _frozen(np.linalg.cholesky(G))
        self._is_identity = bool(np.array_equal(G, np.eye(self.dim)))

    @classmethod
    def identity(cls, dim: int, label: str = "") -> "InnerProductSpace":
        return cls(np.eye(dim), label=label)

    def inner(self, u, v) -> complex:
        """Return ``<u, v>``, linear in ``u``."""
        u = self.check(u)
        v = self.check(v)
        return complex(np.vdot(v, self.gram @ u))

    def norm(self, v) -> float:
        return float(np.linalg.norm(self.whiten(self.check(v))))

    def whiten(self, X: np.ndarray) -> np.ndarray:
        """Map coordinates to ``L^H X`` where the Euclidean product is the Gram product."""
        if self._is_identity:
            return np.asarray(X, dtype=complex)
        return self._chol.conj().T @ X

    def unwhiten(self, Y: np.ndarray) -> np.ndarray:
        if self._is_identity:
            return np.asarray(Y, dtype=complex)
        return sla.solve_triangular(self._chol.conj().T, Y, lower=False)

    def check(self, v) -> np.ndarray:
        v = np.asarray(v, dtype=complex)
        if v.shape[0] != self.dim:
            raise ValueError(f"vector of length {v.shape[0]} does not belong to a space of dim {self.dim}")
        return v

    def same_as(self, other: "InnerProductSpace") -> bool:
        return other is self or (other.dim == self.dim and np.array_equal(other.gram, self.gram))

    def __repr__(self):
        return f"InnerProductSpace(dim={self.dim}, label={self.label!r})"


class Frame:
    """Orthonormal basis of a subspace, stored as model-coordinate columns."""

    def __init__(self, space: InnerProductSpace, columns, tol: Tolerances = DEFAULT_TOL):
        Q = np.asarray(columns, dtype=complex)
        if Q.ndim == 1:
            Q = Q[:, None]
        if Q.size == 0:
            Q = np.zeros((space.dim, 0), dtype=complex)
        if Q.shape[0] != space.dim or Q.shape[1] > space.dim:
            raise ValueError(f"columns of shape {Q.shape} do not fit a space of dim {space.dim}")
        W = space.whiten(Q)
        err = np.max(np.abs(W.conj().T @ W - np.eye(Q.shape[1]))) if Q.shape[1] else 0.0
        if err > tol.ortho_tol:
            raise ValueError(f"columns are not orthonormal (max deviation {err:.2e})")
        self.space = space
        self.columns = _frozen(Q)
        self._white = _frozen(W)

    @property
    def rank(self) -> int:
        return self.columns.shape[1]

    def coords(self, v) -> np.ndarray:
        """Coefficients of ``P v`` in this basis."""
        v = self.space.check(v)
        return self._white.conj().T @ self.space.whiten(v)

    def project(self, v) -> np.ndarray:
        return self.columns @ self.coords(v)

    def residual(self, v) -> float:
        """Norm of the component of ``v`` orthogonal to the subspace."""
        v = self.space.check(v)
        return self.space.norm(v - self.project(v))

    def projector_white(self) -> np.ndarray:
        return self._white @ self._white.conj().T

    def __repr__(self):
        return f"Frame(rank={self.rank}, dim={self.space.dim})"


def _stack(vectors, space: InnerProductSpace) -> np.ndarray:
    if isinstance(vectors, np.ndarray) and vectors.ndim == 2:
        X = np.asarray(vectors, dtype=complex)
    else:
        vectors = list(vectors)
        if not vectors:
            return np.zeros((space.dim, 0), dtype=complex)
        X = np.column_stack([space.check(v) for v in vectors])
    if X.shape[0] != space.dim:
        raise ValueError(f"vectors of length {X.shape[0]} do not belong to a space of dim {space.dim}")
    return X


def orthonormalize(vectors, space: InnerProductSpace, tol: Tolerances = DEFAULT_TOL) -> Frame:
    """Orthonormal basis of the span of ``vectors``.

    The rank is read off the singular values of the whitened matrix.  When the
    vectors are independent the basis comes from an unpivoted QR, so it follows
    the input order (Gram-Schmidt with positive diagonal).
    """
    X = _stack(vectors, space)
    if X.shape[1] == 0:
        return Frame(space, X, tol)
    Y = space.whiten(X)
    U, s, _ = np.linalg.svd(Y, full_matrices=False)
    if s.size == 0 or s[0] == 0.0:
        return Frame(space, np.zeros((space.dim, 0)), tol)
    r = int(np.sum(s > tol.rank_tol * s[0]))
    if r == X.shape[1]:
        Q, R = np.linalg.qr(Y)
        d = np.diag(R)
        phase = np.where(np.abs(d) > 0, d / np.where(np.abs(d) > 0, np.abs(d), 1), 1)
        W = Q * phase.conj()[None, :]
    else:
        W = U[:, :r]
    return Frame(space, space.unwhiten(W), tol)


def project_onto(v, M: Frame) -> np.ndarray:
    return M.project(v)


def complement(M: Frame, tol: Tolerances = DEFAULT_TOL) -> Frame:
    """Orthogonal complement of ``M`` in its space."""
    space = M.space
    if M.rank == 0:
        return Frame(space, space.unwhiten(np.eye(space.dim, dtype=complex)), tol)
    Q, _ = np.linalg.qr(M._white, mode="complete")
    return Frame(space, space.unwhiten(Q[:, M.rank:]), tol)


def combine(A: Frame, B: Frame, mode: str = "sum", tol: Tolerances = DEFAULT_TOL) -> Frame:
    """Sum or intersection of two subspaces of the same space."""
    if not A.space.same_as(B.space):
        raise ValueError("frames live in different spaces")
    if mode == "sum":
        return orthonormalize(np.hstack([A.columns, B.columns]), A.space, tol)
    if mode == "intersect":
        return complement(combine(complement(A, tol), complement(B, tol), "sum", tol), tol)
    raise ValueError(f"unknown combine mode {mode!r}")


def adjoint_of(T, dom: InnerProductSpace, cod: InnerProductSpace) -> np.ndarray:
    """Adjoint ``G_dom^{-1} T^H G_cod`` of a map from ``dom`` to ``cod`` coordinates."""
    T = np.asarray(T, dtype=complex)
    if T.shape != (cod.dim, dom.dim):
        raise ValueError(f"map of shape {T.shape} does not send dim {dom.dim} to dim {cod.dim}")
    rhs = T.conj().T @ cod.gram
    if dom._is_identity:
        return rhs
    return sla.cho_solve((dom._chol, True), rhs)


def gap(M: Frame, N: Frame) -> float:
    """Operator norm of ``P_M - P_N`` in the Gram inner product."""
    if not M.space.same_as(N.space):
        raise ValueError("frames live in different spaces")
    D = M.projector_white() - N.projector_white()
    if not D.size:
        return 0.0
    # both signs, so that swapping the arguments gives the same bits
    return float(max(np.linalg.norm(D, 2), np.linalg.norm(-D, 2)))


def kernel_frame(T, space: InnerProductSpace, atol: float, tol: Tolerances = DEFAULT_TOL) -> Frame:
    """Frame for the directions ``v`` with ``||T v|| <= atol ||v||``.

    ``T`` maps model coordinates to any Euclidean coordinates.  Used for
    ``ker X*`` where the threshold is a residual rather than a rank ratio.
    """
    T = np.asarray(T, dtype=complex)
    if T.shape[1] != space.dim:
        raise ValueError("map does not act on this space")
    if T.shape[0] == 0:
        return complement(Frame(space, np.zeros((space.dim, 0)), tol), tol)
    # T v = (T L^{-H}) y with y = L^H v
    TW = space.unwhiten(np.eye(space.dim, dtype=complex))
    M = T @ TW
    _, s, Vh = np.linalg.svd(M, full_matrices=True)
    s_full = np.zeros(space.dim)
    s_full[:s.size] = s
    keep = s_full <= atol
    Y = Vh.conj().T[:, keep]
    return Frame(space, space.unwhiten(Y), tol)


def frame_in(outer: Frame, coeffs) -> Frame:
    """Subspace of ``outer`` given by orthonormal coordinate columns."""
    C = np.asarray(coeffs, dtype=complex).reshape(outer.rank, -1)
    return Frame(outer.space, outer.columns @ C)


def canonical_basis(M: Frame, digits: int = 12) -> list:
    """Basis determined by the subspace alone, for stable reporting.

    Column-pivoted QR of the whitened projector picks the basis; then each
    column is scaled so its first non-negligible coordinate is real positive.
    """
    if M.rank == 0:
        return []
    P = M.projector_white()
    Q, _, _ = sla.qr(P, pivoting=True)
    W = Q[:, :M.rank]
    X = M.space.unwhiten(W)
    out = []
    for j in range(X.shape[1]):
        col = X[:, j]
        big = np.flatnonzero(np.abs(col) > 1e-8 * np.max(np.abs(col)))
        if big.size:
            z = col[big[0]]
            col = col * (abs(z) / z)
        out.append([_round_complex(c, digits) for c in col])
    return out


def _round_sig(x: float, digits: int) -> float:
    if x == 0 or not np.isfinite(x):
        return 0.0 if x == 0 else float(x)
    y = float(f"{x:.{digits}g}")
    return 0.0 if y == 0 else y


def _round_complex(z: complex, digits: int = 12) -> list:
    z = complex(z)
    scale = 1e-14
    re = z.real if abs(z.real) > scale else 0.0
    im = z.imag if abs(z.imag) > scale else 0.0
    return [_round_sig(re, digits), _round_sig(im, digits)]
