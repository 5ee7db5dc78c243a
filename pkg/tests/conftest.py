import numpy as np
import pytest

from pseudomultipliers import (PseudomultiplierSpec, RationalSymbol, analyze,
                               build_coefficient_model, build_kernel_sample_model)


def random_gram(rng, n):
    A = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return A @ A.conj().T + n * np.eye(n)


def crandn(rng, *shape):
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture(scope="session")
def hardy24():
    return build_coefficient_model(24)


@pytest.fixture(scope="session")
def hardy40():
    return build_coefficient_model(40)


@pytest.fixture(scope="session")
def inverse_z(hardy24):
    return analyze(hardy24, PseudomultiplierSpec(RationalSymbol([1.0], [0.0, 1.0])))


@pytest.fixture(scope="session")
def multiplier_z(hardy24):
    return analyze(hardy24, PseudomultiplierSpec(RationalSymbol([0.0, 1.0])))


@pytest.fixture(scope="session")
def szego_pair():
    return build_kernel_sample_model([0.0, 0.5], "szego")


def inverse_power(model, n):
    den = [0.0] * n + [1.0]
    return analyze(model, PseudomultiplierSpec(RationalSymbol([1.0], den), overrides=[(0.0, 1.0)]))


def two_poles(model):
    # 1 / (z (z - 1/2)) = 1 / (z^2 - z/2)
    return analyze(model, PseudomultiplierSpec(RationalSymbol([1.0], [0.0, -0.5, 1.0])))



def pytest_terminal_summary(terminalreporter):
    mod = __import__("sys").modules.get("test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if results:
        terminalreporter.section("acceptance criteria")
        for n in sorted(results):
            terminalreporter.write_line(results[n])
