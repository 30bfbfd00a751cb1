import math

import numpy as np
import pytest

from innerseq.inner import InnerSpec, Zero

ACCEPTANCE_LINES = []


def random_blaschke_spec(rng, max_degree=6, max_modulus=0.8, max_monomial=2, min_degree=1):
    d = int(rng.integers(min_degree, max_degree + 1))
    zeros = []
    for _ in range(d):
        r = max_modulus * math.sqrt(rng.uniform(0.0001, 1.0))
        zeros.append(Zero(complex(r * np.exp(2j * np.pi * rng.uniform()))))
    return InnerSpec(phase=float(rng.uniform(0, 2 * np.pi)),
                     monomial_order=int(rng.integers(0, max_monomial + 1)),
                     zeros=tuple(zeros))


def laguerre_atom_coeffs(s, M):
    """e^{-s} L_n^{(-1)}(2s): Taylor coefficients of exp(-s(1+z)/(1-z))."""
    x, a = 2.0 * s, -1.0
    L = [1.0, 1.0 + a - x]
    for n in range(1, M):
        L.append(((2 * n + 1 + a - x) * L[n] - (n + a) * L[n - 1]) / (n + 1))
    return math.exp(-s) * np.array(L[: M + 1])


@pytest.fixture
def rng():
    return np.random.default_rng(20141230)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
