import math

import numpy as np
import pytest

from pseudomultipliers import (Frame, PseudomultiplierSpec, RationalSymbol, TableSymbol, analyze,
                               analyze_locality, build_coefficient_model, build_kernel_sample_model,
                               compose_models, containment_gap, convergent_subsequence, disc_grid, gap,
                               kernel_distance_formula, local_search, orthonormalize,
                               punctual_decomposition, sees_subspace, span_kernels, support_points,
                               taut_check)

H40 = build_coefficient_model(40)
GRID = disc_grid()


def _span(vectors, model=H40):
    return orthonormalize(vectors, model.space)


_REPORTS = {}


def _report(name):
    if name not in _REPORTS:
        targets = {
            "k03": [H40.kernel_vector(0.3)],
            "one_z": [H40.monomial(0), H40.monomial(1)],
            "z": [H40.monomial(1)],
            "k0_khalf": [H40.kernel_vector(0.0), H40.kernel_vector(0.5)],
        }
        _REPORTS[name] = local_search(_span(targets[name]), GRID, H40)
    return _REPORTS[name]


def test_disc_grid_shape():
    assert len(GRID) == 1 + 19 * 24
    assert max(abs(z) for z in GRID) <= 0.95 + 1e-15


def test_span_kernels_ranks(szego_pair):
    assert span_kernels(H40, [0.4j]).rank == 1
    assert span_kernels(szego_pair, [0.0, 0.5]).rank == 2
    assert span_kernels(H40, []).rank == 0
    # identifying two points makes their kernels coincide
    A, B = build_coefficient_model(6), build_coefficient_model(6)
    G = compose_models(A, B, "glued", identify=[(0.2, 0.2)])
    assert np.allclose(G.kernel_vector((0, 0.2)), G.kernel_vector((1, 0.2)), atol=1e-12)
    assert span_kernels(G, [(0, 0.2), (1, 0.2)]).rank == 1
    assert span_kernels(G, [(0, 0.2), (1, 0.3)]).rank == 2


def test_taut_examples():
    taut, F0 = taut_check(span_kernels(H40, [0.0, 0.5]), [0.0, 0.5, -0.3], H40)
    assert taut and sorted(F0) == [0.0, 0.5]
    M = _span([H40.kernel_vector(0.0) + H40.kernel_vector(0.5)])
    assert taut_check(M, [0.0, 0.5], H40) == (False, None)
    taut, F0 = taut_check(span_kernels(H40, [0.5]), [0.0, 0.5], H40)
    assert taut and F0 == [0.5]
    with pytest.raises(ValueError):
        taut_check(M, list(np.linspace(0, 0.5, 13)), H40)


def test_local_search_single_kernel():
    r = _report("k03")
    assert r.best_gap <= 1e-6 and r.status == "decomposed"
    assert abs(r.witness_subsets[-1][0] - 0.3) <= 1e-3
    (c, rad), = r.support_clusters
    assert abs(c - 0.3) <= 1e-3 and rad <= 1e-6
    assert abs(r.diagnostics["projector_gap"] - r.best_gap) <= 1e-8


def test_local_search_span_one_z():
    r = _report("one_z")
    assert min(r.gap_curve) <= 1e-3
    assert all(abs(p) <= 1e-2 for p in r.witness_subsets[-1])
    assert len(r.support_clusters) == 1 and abs(r.support_clusters[0][0]) <= 1e-2
    assert r.status == "non_kernel_limit"
    d = r.diagnostics
    assert d["dimension_sum"] == 1 and d["target_dim"] == 2
    assert d["coefficient_blowup"]


def test_local_search_z_is_not_local_over_single_kernels():
    r = _report("z")
    assert r.best_gap >= 0.86
    assert abs(r.best_gap - math.sqrt(3) / 2) <= 1e-6
    assert r.status == "not_local_evidence"
    # the same line given through a scaled vector behaves identically
    r2 = local_search(_span([-3j * H40.monomial(1)]), GRID, H40)
    assert abs(r2.best_gap - r.best_gap) <= 1e-9 and r2.status == r.status


def test_local_search_taut_pair():
    r = _report("k0_khalf")
    centers = sorted(c.real for c, _ in r.support_clusters)
    assert np.allclose(centers, [0.0, 0.5], atol=1e-6)
    assert r.status == "decomposed" and r.decomposition_residual <= 1e-8
    truth = [span_kernels(H40, [0.0]), span_kernels(H40, [0.5])]
    got = sorted(r.punctual_components, key=lambda C: abs(C.columns[1, 0]))
    assert all(gap(a, b) <= 1e-6 for a, b in zip(got, truth))


@pytest.mark.parametrize("name", ["k03", "one_z", "z", "k0_khalf"])
def test_gap_curve_monotone(name):
    c = _report(name).gap_curve
    assert all(b <= a for a, b in zip(c, c[1:]))


@pytest.mark.parametrize("name", ["k03", "one_z", "k0_khalf"])
def test_support_points_lie_in_target(name):
    r = _report(name)
    for a, _ in r.support_clusters:
        k = H40.kernel_vector(a)
        assert r.target.residual(k) <= 1e-6 * H40.space.norm(k)


def test_support_requires_witnesses():
    r = _report("k03")
    from dataclasses import replace
    with pytest.raises(ValueError):
        support_points(replace(r, witness_subsets=[]), H40)
    with pytest.raises(ValueError):
        punctual_decomposition(replace(r, support_clusters=[]), H40)


def test_local_search_argument_errors():
    M = span_kernels(H40, [0.3])
    with pytest.raises(ValueError):
        local_search(M, GRID, H40, budget=0)
    with pytest.raises(ValueError):
        local_search(_span([]), GRID, H40)
    with pytest.raises(ValueError):
        local_search(M, [], H40)


def test_sample_model_search_uses_grid_only():
    W = build_kernel_sample_model(np.linspace(0, 1, 11), "sobolev")
    M = span_kernels(W, [0.3, 0.7])
    r = analyze_locality(M, W.domain_samples(), W)
    assert r.best_gap <= 1e-12 and r.status == "decomposed"
    assert sorted(c.real for c, _ in r.support_clusters) == pytest.approx([0.3, 0.7])


def test_local_and_taut_targets_are_seen():
    phis = [PseudomultiplierSpec(RationalSymbol([0.0, 1.0])),
            PseudomultiplierSpec(TableSymbol(lambda z: 1 + 0.5 * z - z * z)),
            PseudomultiplierSpec(TableSymbol(lambda z: 2 - 1j * z ** 3))]
    one_z = _report("one_z")
    assert one_z.gap_curve[-1] <= 1e-4
    for spec in phis:
        an = analyze(H40, spec)
        assert sees_subspace(an, one_z.target).sees
        for name in ("k03", "k0_khalf"):
            assert sees_subspace(an, _report(name).target).sees
    # taut spans over the domain of 1/z
    an = analyze(H40, PseudomultiplierSpec(RationalSymbol([1.0], [0.0, 1.0])))
    for F in ([0.3], [0.3, -0.5], [0.2j, 0.6, -0.1]):
        M = span_kernels(H40, F)
        assert taut_check(M, F, H40)[0]
        assert sees_subspace(an, M).sees


def test_vector_lies_over_pairs():
    line = _span([H40.monomial(1)])
    gaps = [containment_gap(line, span_kernels(H40, [e, -e])) for e in (0.3, 0.1, 0.03, 0.01)]
    assert all(a > b for a, b in zip(gaps, gaps[1:]))
    assert gaps[-1] < 1e-3
    assert containment_gap(_span([]), line) == 0.0


def test_kernel_distance_examples():
    H = build_coefficient_model(64)
    num, closed = kernel_distance_formula(H, 0.3, [0.1, 0.3])
    assert num < 1e-12 and closed == 0.0
    num, closed = kernel_distance_formula(H, 0.8, [0.1, 0.2, 0.3])
    assert abs(num - closed) <= 1e-6
    for a in (0.1, -0.5j, 0.8, 0.6 + 0.4j):
        num, closed = kernel_distance_formula(H, a, [0.0])
        assert abs(closed - abs(a) / math.sqrt(1 - abs(a) ** 2)) < 1e-14
        assert abs(num - closed) <= 1e-8
    num, closed = kernel_distance_formula(H, 0.5, [])
    assert abs(num - closed) <= 1e-8


def test_kernel_distance_random(rng):
    H = build_coefficient_model(64)

    def point(r):
        return r * math.sqrt(rng.uniform()) * complex(math.cos(t := 2 * math.pi * rng.uniform()), math.sin(t))

    for _ in range(20):
        alpha = point(0.8)
        F = [point(0.8) for _ in range(int(rng.integers(1, 5)))]
        num, closed = kernel_distance_formula(H, alpha, F)
        assert abs(num - closed) <= 1e-6


def test_kernel_distance_errors():
    with pytest.raises(ValueError):
        kernel_distance_formula(build_coefficient_model(8, low=1), 0.2, [0.1])
    with pytest.raises(ValueError):
        kernel_distance_formula(H40, 0.2, [0.1, 0.1])
    with pytest.raises(ValueError):
        kernel_distance_formula(H40, 1.2, [0.1])


def _unit(v):
    return v / H40.space.norm(v)


def test_convergent_subsequence_constant():
    u = _unit(H40.kernel_vector(0.2))
    M = span_kernels(H40, [0.2])
    lim, picks = convergent_subsequence([M] * 5, [u] * 5, M)
    assert np.allclose(lim, u) and picks == sorted(set(picks))


def test_convergent_subsequence_kernels():
    lams = [2.0 ** -j for j in range(1, 41)]
    frames = [span_kernels(H40, [l]) for l in lams]
    vecs = [_unit(H40.kernel_vector(l)) for l in lams]
    M = span_kernels(H40, [0.0])
    lim, picks = convergent_subsequence(frames, vecs, M)
    assert all(a < b for a, b in zip(picks, picks[1:]))
    assert H40.space.norm(lim - H40.kernel_vector(0.0)) <= 1e-8


def test_convergent_subsequence_alternating():
    k = H40.kernel_vector(0.0)
    vecs = [(-1) ** j * k for j in range(12)]
    M = span_kernels(H40, [0.0])
    lim, picks = convergent_subsequence([M] * 12, vecs, M)
    signs = {(-1) ** j for j in picks[1:]}
    assert len(signs) == 1
    assert np.allclose(lim, vecs[picks[-1]])


def test_convergent_subsequence_errors():
    M = span_kernels(H40, [0.0])
    k = H40.kernel_vector(0.0)
    with pytest.raises(ValueError, match="bounded"):
        convergent_subsequence([M, M], [k, 1e7 * k], M)
    with pytest.raises(ValueError, match="frame"):
        convergent_subsequence([M], [H40.monomial(3)], M)
    far = span_kernels(H40, [0.5])
    with pytest.raises(ValueError, match="approach"):
        convergent_subsequence([far], [_unit(H40.kernel_vector(0.5))], M)
    with pytest.raises(ValueError):
        convergent_subsequence([], [], M)


def test_frame_target_from_other_space():
    other = build_coefficient_model(5)
    with pytest.raises(ValueError):
        local_search(Frame(other.space, np.eye(6)[:, :1]), GRID, H40)
