"""Kernel spans, taut and local subspaces, support points and punctual pieces.

For a point set ``F`` write ``V_F`` for the span of the kernels at ``F``.  A
subspace ``M`` of dimension ``n`` is local over a domain when it is a gap
limit of spaces ``V_E`` with ``#E <= n``.  The search here looks for such
sequences numerically; a failure to find one is evidence, not proof.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field, replace

import numpy as np
import scipy.linalg as sla
from scipy.optimize import linear_sum_assignment

from . import kernels
from .linalg_core import DEFAULT_TOL, Frame, Tolerances, combine, gap, orthonormalize
from .spaces import CoefficientModel, ModelSpace

LOCALITY_THRESHOLD = 0.1
TAUT_TOL = 1e-8
DECOMPOSITION_TOL = 1e-6
MAX_TAUT_POINTS = 12
_DET_FLOOR = 1e-14


class TrackingAmbiguityError(RuntimeError):
    """Two tracked points could be matched either way across one step."""


@dataclass(frozen=True)
class LocalSearchReport:
    target: Frame
    witness_subsets: list
    gap_curve: list
    best_gap: float
    support_clusters: list = field(default_factory=list)
    punctual_components: list = field(default_factory=list)
    decomposition_residual: float = float("nan")
    status: str = "not_local_evidence"  # decomposed | non_kernel_limit | not_local_evidence
    diagnostics: dict = field(default_factory=dict)


def span_kernels(model: ModelSpace, F, tol: Tolerances = DEFAULT_TOL) -> Frame:
    """Orthonormal frame for the span of the kernels at the points ``F``."""
    F = list(F)
    if not F:
        return Frame(model.space, np.zeros((model.dim, 0)), tol)
    K = np.column_stack([model.kernel_vector(p) for p in F])
    return orthonormalize(K, model.space, tol)


def taut_check(M: Frame, F, model: ModelSpace, tol: Tolerances = DEFAULT_TOL):
    """Exhaustive test of ``M = V_{F0}`` over subsets ``F0`` of ``F`` with ``#F0 = rank M``.

    Returns ``(taut, F0)``, with ``F0 = None`` when no subset works.
    """
    F = list(F)
    if len(F) > MAX_TAUT_POINTS:
        raise ValueError(f"exhaustive taut check is limited to {MAX_TAUT_POINTS} points, got {len(F)}")
    n = M.rank
    if n == 0:
        return True, []
    for F0 in itertools.combinations(F, n):
        V = span_kernels(model, F0, tol)
        if V.rank == n and gap(V, M) <= TAUT_TOL:
            return True, list(F0)
    return False, None


# ---------------------------------------------------------------------------
# search objective


class _Objective:
    """Gap between ``V_E`` and the target, counted against an evaluation budget."""

    def __init__(self, model: ModelSpace, M: Frame, budget: int):
        self.model = model
        self.Q = M._white
        self.n = M.rank
        self.budget = budget
        self.calls = 0

    def white(self, points) -> np.ndarray:
        K = np.column_stack([self.model.kernel_vector(p) for p in points])
        return self.model.space.whiten(K)

    def residual_grams(self, Y: np.ndarray):
        Z = Y - self.Q @ (self.Q.conj().T @ Y)
        return Y.conj().T @ Y, Z.conj().T @ Z

    def __call__(self, points) -> float:
        self.calls += 1
        Y = self.white(points)
        return _pencil_gap(*self.residual_grams(Y))

    @property
    def exhausted(self) -> bool:
        return self.calls >= self.budget


def _pencil_gap(g: np.ndarray, r: np.ndarray) -> float:
    """``sqrt`` of the top eigenvalue of ``r c = lam g c``; 1 when ``g`` is degenerate."""
    d = np.sqrt(np.real(np.diag(g)))
    if np.any(d <= 0):
        return 1.0
    gn = g / np.outer(d, d)
    rn = r / np.outer(d, d)
    if gn.shape[0] == 1:
        return float(math.sqrt(min(max(rn[0, 0].real, 0.0), 1.0)))
    if gn.shape[0] == 2:
        dg = 1.0 - abs(gn[0, 1]) ** 2
        if dg <= _DET_FLOOR:
            return 1.0
        return float(math.sqrt(kernels.pair_gap_scan(gn, rn, _DET_FLOOR)[0, 1]))
    if np.linalg.eigvalsh(gn)[0] <= _DET_FLOOR:
        return 1.0
    try:
        lam = sla.eigh(rn, gn, eigvals_only=True)[-1]
    except np.linalg.LinAlgError:
        return 1.0
    return float(math.sqrt(min(max(lam, 0.0), 1.0)))


def disc_grid(n_r: int = 20, n_theta: int = 24, r_max: float = 0.95) -> list:
    """Polar grid of the disc: the origin plus ``n_r - 1`` circles of ``n_theta`` points."""
    radii = np.linspace(0.0, r_max, n_r)[1:]
    angles = 2 * np.pi * np.arange(n_theta) / n_theta
    return [0j] + [complex(r * np.exp(1j * a)) for r in radii for a in angles]


def _grid_starts(obj: _Objective, D: list, starts: int) -> list:
    """Best ``starts`` subsets of size ``n`` from a scan of the candidate grid."""
    n = obj.n
    Y = obj.white(D)
    G, R = obj.residual_grams(Y)
    if n == 1:
        scores = kernels.line_gap_scan(G, R)
        order = np.argsort(scores, kind="stable")[:starts]
        return [[D[i]] for i in order]
    if n == 2:
        S = kernels.pair_gap_scan(G, R, _DET_FLOOR)
        iu = np.triu_indices(len(D), 1)
        flat = S[iu]
        order = np.argsort(flat, kind="stable")[:starts]
        return [[D[iu[0][k]], D[iu[1][k]]] for k in order]
    # greedy growth for larger targets, seeded by the best single lines
    singles = np.argsort(kernels.line_gap_scan(G, R), kind="stable")[:starts]
    out = []
    for i0 in singles:
        chosen = [int(i0)]
        while len(chosen) < n:
            best, best_j = 2.0, None
            for j in range(len(D)):
                if j in chosen:
                    continue
                idx = chosen + [j]
                val = _pencil_gap(G[np.ix_(idx, idx)], R[np.ix_(idx, idx)])
                if val < best:
                    best, best_j = val, j
            if best_j is None:
                break
            chosen.append(best_j)
        out.append([D[i] for i in chosen])
    return out


_DIRECTIONS = [complex(math.cos(k * math.pi / 4), math.sin(k * math.pi / 4)) for k in range(8)]


def _moves(points: list, step: float):
    """Candidate moves: each point alone, the whole set, and contraction or expansion."""
    n = len(points)
    for i in range(n):
        for u in _DIRECTIONS:
            yield [p + step * u if k == i else p for k, p in enumerate(points)]
    if n > 1:
        for u in _DIRECTIONS:
            yield [p + step * u for p in points]
        c = sum(points) / n
        spread = max(abs(p - c) for p in points)
        if spread > 0:
            rho = min(0.5, step / spread)
            for s in (1 - rho, 1 + rho):
                yield [c + s * (p - c) for p in points]


def _descend(obj: _Objective, start: list, step: float, min_step: float, r_max: float):
    """Coordinate descent with step halving; returns the list of accepted improvements."""
    pts = [complex(p) for p in start]
    cur = obj(pts)
    history = [(list(pts), cur)]
    while step >= min_step and not obj.exhausted and cur > 0:
        best, best_pts = cur, None
        for cand in _moves(pts, step):
            if any(abs(p) > r_max for p in cand):
                continue
            val = obj(cand)
            if val < best:
                best, best_pts = val, cand
            if obj.exhausted:
                break
        if best_pts is None:
            step *= 0.5
            continue
        pts, cur = best_pts, best
        history.append((list(pts), cur))
    return history


def local_search(M: Frame, D, model: ModelSpace, budget: int = 6000, starts: int = 4,
                 min_step: float = 1e-9, r_max: float = 0.995,
                 tol: Tolerances = DEFAULT_TOL) -> LocalSearchReport:
    """Search for ``E`` with ``#E = rank M`` making ``gap(V_E, M)`` small.

    The candidate grid ``D`` is scanned for the best subsets, and on disc
    models each start is refined by coordinate descent on the point
    positions.  The witness sequence is the chain of accepted improvements
    of the best run, so its gap curve is nonincreasing.  Support points and
    the punctual decomposition are filled in unless the best gap exceeds the
    locality threshold.
    """
    if budget <= 0:
        raise ValueError("budget must be positive")
    if M.rank < 1:
        raise ValueError("the target must be nonzero")
    if not M.space.same_as(model.space):
        raise ValueError("the target lives in a different space")
    D = [p for p in D if model.is_evaluable(p)]
    if len(D) < M.rank:
        raise ValueError("candidate grid has fewer points than the target dimension")
    obj = _Objective(model, M, budget)
    seeds = _grid_starts(obj, D, starts)
    continuous = isinstance(model, CoefficientModel)
    step = _grid_spacing(D) if continuous else 0.0
    runs = []
    for seed in seeds:
        if continuous and not obj.exhausted:
            runs.append(_descend(obj, seed, step, min_step, r_max))
        else:
            runs.append([(list(seed), obj(seed))])
    best_run = min(runs, key=lambda h: h[-1][1])
    witnesses = [w for w, _ in best_run]
    curve = [float(v) for _, v in best_run]
    # independent check of the final value through the projector difference
    final = span_kernels(model, witnesses[-1], tol)
    check = gap(final, M) if final.rank == M.rank else 1.0
    report = LocalSearchReport(target=M, witness_subsets=witnesses, gap_curve=curve,
                               best_gap=curve[-1],
                               diagnostics={"evaluations": obj.calls, "starts": len(seeds),
                                            "projector_gap": float(check),
                                            "backend": kernels.BACKEND})
    if report.best_gap > LOCALITY_THRESHOLD:
        return replace(report, status="not_local_evidence")
    clusters = support_points(report, model, grid=D)
    return punctual_decomposition(replace(report, support_clusters=clusters), model)


def _grid_spacing(D: list) -> float:
    P = np.array(D, dtype=complex)
    if P.size < 2:
        return 0.05
    d = np.abs(P[:, None] - P[None, :])
    d[d == 0] = np.inf
    return float(np.median(np.min(d, axis=1)))


# ---------------------------------------------------------------------------
# support points


def _unit_white(model: ModelSpace, point) -> np.ndarray:
    y = model.space.whiten(model.kernel_vector(point))
    return y / np.linalg.norm(y)


def _p(x: np.ndarray, y: np.ndarray) -> float:
    """Projective distance between unit whitened vectors."""
    c = np.vdot(y, x)
    omega = c / abs(c) if abs(c) > 0 else 1.0
    return float(np.linalg.norm(x - omega * y))


def _track(model: ModelSpace, witnesses: list, radius: float) -> list:
    """Order each witness subset to follow the previous one; returns tracks of points."""
    n = len(witnesses[0])
    if any(len(w) != n for w in witnesses):
        raise ValueError("witness subsets must share one cardinality")
    tracks = [[p] for p in witnesses[0]]
    prev = [_unit_white(model, p) for p in witnesses[0]]
    for w in witnesses[1:]:
        cur = [_unit_white(model, p) for p in w]
        C = np.array([[_p(a, b) for b in cur] for a in prev])
        rows, cols = linear_sum_assignment(C)
        best = C[rows, cols].sum()
        if n > 1:
            second = min(sum(C[i, perm[i]] for i in range(n))
                         for perm in itertools.permutations(range(n)) if list(perm) != list(cols))
            if second - best <= 1e-12 * max(best, 1.0) and C[rows, cols].max() > radius:
                raise TrackingAmbiguityError("tracked points can be matched either way within one step")
        for i, j in zip(rows, cols):
            tracks[i].append(w[j])
        prev = [cur[j] for j in cols]
    return tracks


def support_points(report: LocalSearchReport, model: ModelSpace, grid=None) -> list:
    """Cluster the tails of the tracked witness points in the projective metric.

    The cluster radius is ``max(10 * final gap, 1e-6, tail movement)``, where
    the tail movement is how far any tracked point still travels over the
    second half of the witness sequence.  Returns ``(center, radius)`` pairs.
    """
    W = report.witness_subsets
    if not W:
        raise ValueError("the report has no witness subsets")
    floor = max(10.0 * report.gap_curve[-1], 1e-6)
    tracks = _track(model, W, floor)
    half = len(W) // 2
    tail_move = max(_p(_unit_white(model, t[-1]), _unit_white(model, t[half])) for t in tracks)
    radius = max(floor, tail_move)
    ends = [t[-1] for t in tracks]
    units = [_unit_white(model, p) for p in ends]
    n = len(ends)
    # single linkage
    label = list(range(n))
    for i in range(n):
        for j in range(i + 1, n):
            if _p(units[i], units[j]) <= radius:
                a, b = label[i], label[j]
                label = [a if x == b else x for x in label]
    clusters = []
    for lab in dict.fromkeys(label):
        members = [ends[i] for i in range(n) if label[i] == lab]
        if all(not isinstance(p, tuple) for p in members) and isinstance(model, CoefficientModel):
            center = complex(np.mean(np.array(members, dtype=complex)))
        else:
            center = members[0]
        cu = _unit_white(model, center)
        r = max([radius] + [_p(cu, _unit_white(model, p)) for p in members])
        clusters.append((center, float(r)))
    if grid is not None:
        report.diagnostics["grid_distance"] = [
            float(min(_p(_unit_white(model, c), _unit_white(model, g)) for g in grid)) for c, _ in clusters]
    report.diagnostics["cluster_radius"] = float(radius)
    return clusters


# ---------------------------------------------------------------------------
# punctual decomposition


def punctual_decomposition(report: LocalSearchReport, model: ModelSpace,
                           tol: Tolerances = DEFAULT_TOL) -> LocalSearchReport:
    """Try ``M = sum of C k_alpha`` over the support points.

    Decomposed when the sum is within ``1e-6`` of ``M`` in gap and the
    dimensions add up; otherwise ``non_kernel_limit``, with the size of the
    coefficients expressing ``M`` through the normalized witness kernels.
    """
    M = report.target
    if not report.support_clusters:
        raise ValueError("support clusters have not been computed")
    comps = [span_kernels(model, [c], tol) for c, _ in report.support_clusters]
    total = comps[0]
    for C in comps[1:]:
        total = combine(total, C, "sum", tol)
    residual = gap(total, M)
    dim_sum = sum(C.rank for C in comps)
    diag = dict(report.diagnostics)
    diag.update({"dimension_sum": dim_sum, "target_dim": M.rank, "span_dim": total.rank})
    if residual <= DECOMPOSITION_TOL and dim_sum == M.rank:
        return replace(report, punctual_components=comps, decomposition_residual=float(residual),
                       status="decomposed", diagnostics=diag)
    growth = []
    for w in report.witness_subsets:
        Y = np.column_stack([_unit_white(model, p) for p in w])
        coef, *_ = np.linalg.lstsq(Y, M._white, rcond=None)
        growth.append(float(np.max(np.abs(coef))))
    diag["coefficient_growth"] = growth
    diag["coefficient_blowup"] = bool(len(growth) > 1 and growth[-1] > 10 * growth[0])
    return replace(report, punctual_components=[], decomposition_residual=float(residual),
                   status="non_kernel_limit", diagnostics=diag)


def analyze_locality(M: Frame, D, model: ModelSpace, budget: int = 6000, retries: int = 2,
                     **kwargs) -> LocalSearchReport:
    """``local_search`` that restarts with a finer schedule on tracking ambiguity."""
    min_step = kwargs.pop("min_step", 1e-9)
    for attempt in range(retries + 1):
        try:
            return local_search(M, D, model, budget=budget, min_step=min_step, **kwargs)
        except TrackingAmbiguityError:
            if attempt == retries:
                raise
            budget *= 2
            min_step *= 0.1
    raise AssertionError("unreachable")


# ---------------------------------------------------------------------------
# distances and limits


def containment_gap(M: Frame, V: Frame) -> float:
    """``||(I - P_V) P_M||``: how far ``M`` is from lying inside ``V``."""
    if M.rank == 0:
        return 0.0
    Z = M._white - V._white @ (V._white.conj().T @ M._white) if V.rank else M._white
    return float(np.linalg.norm(Z, 2))


def _blaschke(alpha: complex, F) -> complex:
    b = 1.0 + 0j
    for f in F:
        f = complex(f)
        b *= (alpha - f) / (1 - f.conjugate() * alpha)
    return b


def kernel_distance_formula(model: CoefficientModel, alpha, F):
    """Distance from ``k_alpha`` to ``V_F`` in a truncated Hardy model, and its closed form.

    The closed form is ``|b(alpha)| / sqrt(1 - |alpha|^2)`` with ``b`` the
    finite Blaschke product with zeros ``F``.
    """
    if not isinstance(model, CoefficientModel) or model.low != 0 or not np.allclose(model.weights, 1.0):
        raise ValueError("the closed form needs a truncated Hardy model")
    alpha = complex(alpha)
    F = [complex(f) for f in F]
    if abs(alpha) >= 1 or any(abs(f) >= 1 for f in F):
        raise ValueError("points must lie in the open disc")
    if len(set(F)) != len(F):
        raise ValueError("points of F must be distinct")
    k = model.kernel_vector(alpha)
    V = span_kernels(model, F)
    numeric = model.space.norm(k - V.project(k)) if V.rank else model.space.norm(k)
    closed = abs(_blaschke(alpha, F)) / math.sqrt(1 - abs(alpha) ** 2)
    return float(numeric), float(closed)


def convergent_subsequence(frames, vectors, M: Frame, bound: float = 1e6,
                           member_tol: float = 1e-8, final_gap_tol: float = 1e-6,
                           diameter: float = 1e-12):
    """Extract a norm-convergent subsequence of bounded ``u_j`` with ``u_j`` in ``frames[j]``.

    Bisection on whitened real coordinates: at each round the coordinate of
    widest spread is halved and the half holding more indices is kept (ties
    keep the half with the latest index).  One index is picked per round,
    increasing, from the surviving set, so the picks form a subsequence in
    nested boxes.  The limit is its last term; it must lie in ``M`` within
    ``member_tol``.
    Returns ``(u, indices)``.
    """
    frames = list(frames)
    vectors = [np.asarray(u, dtype=complex) for u in vectors]
    if len(frames) != len(vectors) or not vectors:
        raise ValueError("need one frame per vector and at least one vector")
    space = M.space
    norms = np.array([space.norm(u) for u in vectors])
    if not np.all(np.isfinite(norms)) or norms.max() > bound:
        raise ValueError(f"inputs are not bounded (max norm {norms.max():.3e} > {bound:.1e})")
    for j, (V, u) in enumerate(zip(frames, vectors)):
        if V.residual(u) > member_tol * max(1.0, norms[j]):
            raise ValueError(f"vector {j} does not lie in its frame")
    last_gap = gap(frames[-1], M) if frames[-1].rank == M.rank else 1.0
    if last_gap > final_gap_tol:
        raise ValueError(f"frames do not approach M (final gap {last_gap:.2e})")
    W = np.array([space.whiten(u) for u in vectors])
    X = np.hstack([W.real, W.imag])
    idx = np.arange(len(vectors))
    picks = []
    while True:
        later = idx[idx > picks[-1]] if picks else idx
        if later.size:
            picks.append(int(later[0]))
        if idx.size <= 1:
            break
        pts = X[idx]
        spread = pts.max(axis=0) - pts.min(axis=0)
        k = int(np.argmax(spread))
        if spread[k] <= diameter:
            break
        mid = 0.5 * (pts[:, k].max() + pts[:, k].min())
        lo = idx[pts[:, k] <= mid]
        hi = idx[pts[:, k] > mid]
        if lo.size != hi.size:
            idx = lo if lo.size > hi.size else hi
        else:
            idx = lo if lo[-1] > hi[-1] else hi
    if idx[-1] > picks[-1]:
        picks.append(int(idx[-1]))
    u = vectors[picks[-1]]
    if M.residual(u) > member_tol * max(1.0, space.norm(u)):
        raise ValueError("the extracted limit does not lie in M")
    return u, picks
