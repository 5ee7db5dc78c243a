import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from pseudomultipliers import (KERNELS, PointError, SingularGramError, build_coefficient_model,
                               build_kernel_sample_model, compose_models, kernel_nonvanishing_check,
                               kernel_vector, metric_d, metric_p, projective_completeness_probe,
                               pseudo_hyperbolic_factorization, read_kernel_table, sobolev_membership,
                               table_kernel, write_kernel_table)

from conftest import crandn

COSECH1 = 1.0 / math.sinh(1.0)


def _check_reproducing(model, vectors, points):
    sp = model.space
    for f in vectors:
        vals = model.evaluate_many(f, points)
        for p, val in zip(points, vals):
            assert abs(sp.inner(f, model.kernel_vector(p)) - val) <= 1e-9 * sp.norm(f)


def test_coefficient_model_basics():
    H1 = build_coefficient_model(1)
    assert H1.dim == 2
    assert np.allclose(kernel_vector(H1, 0.0), [1, 0])
    H = build_coefficient_model(24)
    kh = H.kernel_vector(0.5)
    assert abs(H.space.inner(kh, kh) - (4 / 3) * (1 - 4.0 ** -25)) < 1e-14
    assert np.allclose(H.kernel_vector(0.0, 1), H.monomial(1))
    with pytest.raises(PointError):
        H.kernel_vector(1.0)
    with pytest.raises(ValueError):
        build_coefficient_model(0)


def test_coefficient_reproducing_property(rng):
    H = build_coefficient_model(24)
    pts = list(0.9 * np.sqrt(rng.uniform(size=10)) * np.exp(2j * np.pi * rng.uniform(size=10)))
    _check_reproducing(H, H.random_vectors(200, rng).T, pts)


def test_weighted_model_reproducing(rng):
    H = build_coefficient_model(8, weights=np.arange(1, 10, dtype=float))
    _check_reproducing(H, H.random_vectors(50, rng).T, [0.0, 0.3, -0.2 + 0.4j])
    # derivative representer: <f, k_0^(1)> = f'(0)
    f = H.random_vectors(1, rng)[:, 0]
    assert abs(H.space.inner(f, H.kernel_vector(0.0, 1)) - f[1]) < 1e-12


def test_szego_sample_model():
    M = build_kernel_sample_model([0.0, 0.5], "szego")
    assert np.allclose(M.space.gram, [[1, 1], [1, 4 / 3]], atol=1e-15)
    e2 = M.kernel_vector(0.5)
    assert np.allclose(e2, [0, 1]) and abs(M.space.inner(e2, e2) - 4 / 3) < 1e-15


def test_sample_gram_equals_kernel(rng):
    pts = list(0.8 * np.sqrt(rng.uniform(size=6)) * np.exp(2j * np.pi * rng.uniform(size=6)))
    M = build_kernel_sample_model(pts, "szego")
    K = np.array([[KERNELS["szego"](a, b) for b in pts] for a in pts])
    assert np.array_equal(np.asarray(M.space.gram), K)
    _check_reproducing(M, M.random_vectors(200, rng).T, pts)


def test_zero_kernel_is_singular():
    with pytest.raises(SingularGramError):
        build_kernel_sample_model([0.0], "zh2")


def test_sobolev_kernel_values():
    W = build_kernel_sample_model([0.0, 1.0], "sobolev")
    G = np.asarray(W.space.gram).real
    assert abs(G[0, 1] - COSECH1) < 1e-15
    assert abs(G[0, 0] - COSECH1 * math.cosh(1.0)) < 1e-15
    assert abs(G[1, 1] - COSECH1 * math.cosh(1.0)) < 1e-15


def test_sobolev_off_sample_evaluation(rng):
    W = build_kernel_sample_model(np.linspace(0, 1, 11), "sobolev")
    _check_reproducing(W, W.random_vectors(50, rng).T, [0.05, 0.37, 0.99])


def test_sobolev2_derivative_representer(rng):
    W = build_kernel_sample_model(np.linspace(0, 1, 6), "sobolev2", derivative_points=[0.0])
    s0 = W.kernel_vector(0.0, 1)
    for f in W.random_vectors(20, rng).T:
        # f'(0) from the basis functions' derivative rows
        d = (W.derivative_rows([0.0]) @ f)[0]
        assert abs(W.space.inner(f, s0) - d) <= 1e-9 * W.space.norm(f)
    with pytest.raises(ValueError):
        build_kernel_sample_model([0.0, 0.5], "sobolev", derivative_points=[0.0])


def test_duplicate_sample_points_rejected():
    with pytest.raises(ValueError):
        build_kernel_sample_model([0.1, 0.1], "szego")


def test_kernel_table_roundtrip(tmp_path):
    pts = [0.0, 0.5, 0.25j]
    K = np.array([[KERNELS["szego"](a, b) for b in pts] for a in pts])
    path = tmp_path / "k.txt"
    write_kernel_table(path, pts, K)
    kern = read_kernel_table(path)
    M = build_kernel_sample_model(pts, kern)
    assert np.array_equal(np.asarray(M.space.gram), K)
    assert not M.is_evaluable(0.3)
    bad = K.copy()
    bad[0, 1] += 1e-3
    with pytest.raises(ValueError):
        table_kernel(pts, bad)


def test_metric_examples():
    M = build_kernel_sample_model([0.0, 0.5], "szego")
    assert metric_d(M, 0.5, 0.5) == 0.0
    assert abs(metric_d(M, 0.0, 0.5) - 1 / math.sqrt(3)) < 1e-14
    H = build_coefficient_model(40)
    assert abs(metric_d(H, 0.0, 0.5) - 1 / math.sqrt(3)) < 1e-10
    assert metric_p(M, 0.0, 0.0) == 0.0
    p = metric_p(M, 0.0, 0.5)
    assert abs(p - math.sqrt(2) * math.sqrt(1 - math.sqrt(3) / 2)) < 1e-14
    assert abs(metric_p(M, 0.0, 0.5, "opnorm") - math.sqrt(7) / 4) < 1e-14
    ph, h = pseudo_hyperbolic_factorization(0.0, 0.5)
    assert abs(ph - 0.5) < 1e-15 and abs(h - (1 + math.sqrt(3) / 2) ** -0.5) < 1e-15
    assert abs(math.sqrt(2) * ph * h - p) < 1e-14
    assert pseudo_hyperbolic_factorization(0.3j, 0.3j)[0] == 0.0


def _disc_points(rng, n, r=0.95):
    return r * np.sqrt(rng.uniform(size=n)) * np.exp(2j * np.pi * rng.uniform(size=n))


def test_metrics_match_direct_formulas(rng):
    k = KERNELS["szego"]
    ratios = []
    for a, b in zip(_disc_points(rng, 500), _disc_points(rng, 500)):
        M = build_kernel_sample_model([a, b], "szego")
        kaa, kbb, kab = k(a, a).real, k(b, b).real, k(a, b)
        d_direct = math.sqrt(max(kaa - 2 * kab.real + kbb, 0.0))
        c = abs(kab) / math.sqrt(kaa * kbb)
        p_direct = math.sqrt(2) * math.sqrt(max(1 - c, 0.0))
        d, p = metric_d(M, a, b), metric_p(M, a, b)
        assert abs(d - d_direct) <= 1e-12 * max(1.0, d_direct)
        assert abs(p - p_direct) <= 1e-12
        ph, h = pseudo_hyperbolic_factorization(a, b)
        assert abs(p - math.sqrt(2) * ph * h) <= 1e-10
        assert 1 / math.sqrt(2) - 1e-15 <= h <= 1.0
        ratios.append(metric_p(M, a, b, "opnorm") / p)
    # uniformly equivalent: opnorm / standard stays in a fixed band
    assert 0.5 < min(ratios) and max(ratios) < 2.0


def test_zero_kernel_metric_error():
    Z = build_coefficient_model(40, low=1)
    with pytest.raises(ValueError, match="kernel vanishes"):
        metric_p(Z, 0.0, 0.5)


def test_kernel_nonvanishing():
    W = build_kernel_sample_model(np.linspace(0, 1, 11), "sobolev")
    ok, m, where = kernel_nonvanishing_check(W)
    assert ok and abs(m - COSECH1) < 1e-14 and set(where) == {0.0, 1.0}
    ok, m, _ = kernel_nonvanishing_check(points=[0.0, 0.3, 0.6], kernel="zh2")
    assert not ok and m == 0.0
    xs = np.linspace(-0.9, 0.9, 7)
    ok, m, _ = kernel_nonvanishing_check(build_kernel_sample_model(xs, "szego"))
    assert ok and abs(m - 1 / (1 + 0.81)) < 1e-14


def _corpus():
    vanishing = [lambda t: t, lambda t: t ** 2, lambda t: np.sin(np.pi * t), lambda t: t * (1 - t),
                 lambda t: t * np.exp(t), lambda t: np.sinh(t), lambda t: t ** 3 - 2 * t,
                 lambda t: np.log1p(t), lambda t: 1 - np.cos(t), lambda t: t / (1 + t)]
    nonvanishing = [lambda t: np.ones_like(t), lambda t: 1 + t, lambda t: np.cos(t), lambda t: np.exp(t),
                    lambda t: 2 - t ** 2, lambda t: 1 / (1 + t), lambda t: 0.5 + np.sin(t),
                    lambda t: 3 * np.ones_like(t), lambda t: np.cosh(t), lambda t: 1 + t ** 3]
    return vanishing, nonvanishing


def test_sobolev_membership_corpus():
    vanishing, nonvanishing = _corpus()
    sqrt = np.sqrt
    assert all(sobolev_membership(f, sqrt).status == "in_space" for f in vanishing)
    assert all(sobolev_membership(f, sqrt).status == "diverges" for f in nonvanishing)


def test_sobolev_membership_examples():
    zero = sobolev_membership(lambda t: np.zeros_like(t), np.sqrt)
    assert zero.status == "in_space" and zero.norm_estimates[-1][1] == 0.0
    one = sobolev_membership(lambda t: np.ones_like(t), np.sqrt)
    assert one.status == "diverges"
    assert abs(one.divergence_rate - 0.25) < 0.02
    lin = sobolev_membership(lambda t: t, np.sqrt)
    assert lin.status == "in_space" and np.isfinite(lin.norm_estimates[-1][1])
    with pytest.raises(ValueError):
        sobolev_membership(lambda t: t, np.sqrt, levels=[0.5, 0.25])


def test_direct_sum_preserves_inner_products(rng):
    A = build_coefficient_model(3)
    B = build_kernel_sample_model([0.0, 0.5], "sobolev")
    C = compose_models(A, B)
    assert C.dim == 6
    for _ in range(20):
        f, g = crandn(rng, 4), crandn(rng, 2)
        f2, g2 = crandn(rng, 4), crandn(rng, 2)
        assert C.space.inner(C.inject(0, f), C.inject(0, f2)) == A.space.inner(f, f2)
        assert C.space.inner(C.inject(1, g), C.inject(1, g2)) == B.space.inner(g, g2)
        assert C.space.inner(C.inject(0, f), C.inject(1, g)) == 0
    one = compose_models(build_coefficient_model(1, low=1), build_coefficient_model(1, low=1))
    assert one.dim == 2 and np.allclose(one.space.gram, np.eye(2))


def test_glued_model_representer(rng):
    H = build_coefficient_model(24)
    W = build_kernel_sample_model(np.linspace(0, 1, 11), "sobolev")
    G = compose_models(H, W, "glued", identify=[(0.0, 0.0)])
    assert G.dim == H.dim + W.dim - 1
    kw0 = W.kernel_vector(0.0)
    c = W.space.inner(kw0, kw0).real  # k_0(0) in the Sobolev space
    expect = np.concatenate([c * H.kernel_vector(0.0), kw0]) / (1 + c)
    for side in (0, 1):
        assert np.allclose(G.to_ambient(G.kernel_vector((side, 0.0))), expect, atol=1e-12)
    pts = [(0, 0.3), (0, -0.5j), (1, 0.0), (1, 0.4), (1, 0.75)]
    _check_reproducing(G, G.random_vectors(100, rng).T, pts)
    with pytest.raises(PointError):
        G.kernel_vector(0.3)


def test_completeness_probe_examples():
    H = build_coefficient_model(24)
    r = projective_completeness_probe(H, [1, 1, 1], [0.4, 0.4, 0.4])
    assert r.distance < 1e-12 and r.limit_is_kernel
    S = build_kernel_sample_model([0.0, 0.25, 0.5, 0.75], "szego")
    j = np.arange(2, 30)
    r = projective_completeness_probe(S, np.ones(j.size), 0.5 + 2.0 ** -j)
    assert r.distance <= 1e-8 and r.limit_is_kernel
    Z = build_coefficient_model(40, low=1)
    j = np.arange(2, 41)
    r = projective_completeness_probe(Z, j, 1.0 / j)
    assert r.grid_distance >= 0.1 and not r.limit_is_kernel


@settings(max_examples=25, deadline=None)
@given(a=st.complex_numbers(max_magnitude=0.9), b=st.complex_numbers(max_magnitude=0.9))
def test_pseudo_hyperbolic_bounds(a, b):
    ph, h = pseudo_hyperbolic_factorization(a, b)
    assert 0.0 <= ph < 1.0
    assert 1 / math.sqrt(2) - 1e-15 <= h <= 1.0 + 1e-15
