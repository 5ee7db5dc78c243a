import numpy as np
import numpy.polynomial.polynomial as npoly
import pytest

from pseudomultipliers import (Frame, PseudomultiplierSpec, TableSymbol, analyze, build_kernel_sample_model,
                               combine, constant_symbol, orthonormalize, sees_subspace, sees_vector,
                               value_operator)

from conftest import crandn


def _tail(H, m):
    return Frame(H.space, np.eye(H.dim)[:, m:])


def test_monomial_shift_family(inverse_z, hardy24):
    for m in range(1, 25):
        v = sees_subspace(inverse_z, _tail(hardy24, m))
        assert v.sees and v.residual <= 1e-10


def _blaschke_tail(H, a):
    N = H.degree
    series = np.conj(a) ** np.arange(N + 1)
    t = npoly.polymul([0, -a, 1], series)[:N + 1]
    cols = [np.concatenate([np.zeros(j), t[:N + 1 - j]]) for j in range(N - 1)]
    return orthonormalize(cols, H.space)


@pytest.mark.parametrize("a", [0.3, 0.5, 0.7, 0.4 + 0.3j])
def test_blaschke_family_leakage(inverse_z, hardy24, a):
    V = _blaschke_tail(hardy24, a)
    v = sees_subspace(inverse_z, V)
    assert v.residual <= 10 * abs(a) ** (hardy24.degree - 2)


def test_kernel_spans_are_seen(inverse_z, hardy24):
    for lam in (0.3, -0.2j, 0.5 + 0.1j):
        k = hardy24.kernel_vector(lam)
        assert sees_vector(inverse_z, k).visible
        assert sees_subspace(inverse_z, orthonormalize([k], hardy24.space)).sees


def test_span_one_z_under_multiplier_z(multiplier_z, hardy24):
    V = Frame(hardy24.space, np.eye(25)[:, :2])
    verdict = sees_subspace(multiplier_z, V)
    assert verdict.sees and verdict.regular
    assert np.allclose(verdict.value_operator, [[0, 0], [1, 0]], atol=1e-10)
    assert sees_vector(multiplier_z, hardy24.monomial(1)).status == "not_visible"


def test_constant_multiplier_value_operator(hardy24, rng):
    an = analyze(hardy24, PseudomultiplierSpec(constant_symbol(2 - 1j)))
    assert an.order == 0
    V = orthonormalize(crandn(rng, 25, 3), hardy24.space)
    assert np.allclose(value_operator(an, V), (2 - 1j) * np.eye(3), atol=1e-8)


def test_kernel_eigen_consistency(multiplier_z, hardy24):
    for lam in (0.25, -0.4j):
        V = orthonormalize([hardy24.kernel_vector(lam)], hardy24.space)
        C = sees_subspace(multiplier_z, V).value_operator
        assert np.allclose(C, [[lam]], atol=1e-10)


def test_unseen_subspace_has_no_value_operator(inverse_z, hardy24):
    V = orthonormalize([hardy24.kernel_vector(0.3) + hardy24.kernel_vector(0.6)], hardy24.space)
    assert not sees_subspace(inverse_z, V).sees
    with pytest.raises(ValueError):
        value_operator(inverse_z, V)


def _visible_pool(H):
    pool = [_tail(H, m) for m in range(1, 24, 3)]
    pool += [orthonormalize([H.kernel_vector(l)], H.space) for l in (0.1, 0.3j, -0.45, 0.2 + 0.5j, 0.6)]
    pool += [orthonormalize([H.kernel_vector(0.2), H.kernel_vector(-0.3)], H.space)]
    return pool


def test_span_closure(inverse_z, hardy24, rng):
    pool = _visible_pool(hardy24)
    for _ in range(50):
        i, j = rng.choice(len(pool), size=2, replace=False)
        V1, V2 = pool[i], pool[j]
        r1, r2 = sees_subspace(inverse_z, V1).residual, sees_subspace(inverse_z, V2).residual
        v = sees_subspace(inverse_z, combine(V1, V2, "sum"))
        assert v.sees and v.residual <= 10 * max(r1, r2, 1e-14)


def test_multiplier_specialization(rng):
    # on a sample model every function on the points multiplies, so S = {0}
    pts = [0.0, 0.3, -0.4j, 0.5 + 0.2j, -0.6]
    W = build_kernel_sample_model(pts, "szego")
    vals = dict(zip(pts, [1.0, 2.0, -1j, 0.5, 3.0]))
    an = analyze(W, PseudomultiplierSpec(TableSymbol(lambda z: vals[complex(z)])))
    assert an.order == 0
    T = an.adjoint_matrix()
    cases = [orthonormalize(crandn(rng, 5, k), W.space) for k in (1, 2, 3)]
    cases += [orthonormalize([W.kernel_vector(p) for p in pts[:k]], W.space) for k in (1, 2, 4)]
    seen = 0
    for V in cases:
        Q = V.columns
        leak = max(V.residual(T @ Q[:, j]) for j in range(V.rank))
        verdict = sees_subspace(an, V)
        assert verdict.sees == (leak <= an.tol.residual_tol)
        seen += verdict.sees
    assert 0 < seen < len(cases)


def test_space_mismatch(inverse_z):
    other = build_kernel_sample_model([0.0], "szego")
    with pytest.raises(ValueError):
        sees_subspace(inverse_z, orthonormalize([[1.0]], other.space))


def test_zero_subspace(inverse_z, hardy24):
    v = sees_subspace(inverse_z, orthonormalize([], hardy24.space))
    assert v.sees and v.regular and v.value_operator.shape == (0, 0)
