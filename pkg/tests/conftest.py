import os
import sys

import numpy as np
import pytest
from hypothesis import strategies as st

sys.path.insert(0, os.path.dirname(__file__))

from uffd.bitmatrix import CodeMatrix  # noqa: E402


def random_matrix(rng, t, n, density=None, weight=None):
    """Random ``t x n`` matrix with either fixed column weight or Bernoulli entries."""
    cols = []
    for _ in range(n):
        if weight is not None:
            rows = rng.choice(t, size=weight, replace=False)
        else:
            rows = np.flatnonzero(rng.random(t) < density)
        cols.append(sum(1 << int(j) for j in rows))
    return CodeMatrix(t, tuple(cols))


def corpus(size, seed=2024, t_range=(6, 12), n_range=(4, 10)):
    """Mixed-weight random matrices: fixed weights 1..4 and Bernoulli densities."""
    rng = np.random.default_rng(seed)
    out = []
    for k in range(size):
        t = int(rng.integers(t_range[0], t_range[1] + 1))
        n = int(rng.integers(n_range[0], n_range[1] + 1))
        if k % 2:
            out.append(random_matrix(rng, t, n, weight=int(rng.integers(1, min(4, t) + 1))))
        else:
            out.append(random_matrix(rng, t, n, density=float(rng.uniform(0.15, 0.6))))
    return out


@st.composite
def matrices(draw, max_t=8, max_n=7, min_n=1):
    t = draw(st.integers(1, max_t))
    n = draw(st.integers(min_n, max_n))
    cols = draw(st.lists(st.integers(0, (1 << t) - 1), min_size=n, max_size=n))
    return CodeMatrix(t, tuple(cols))


@pytest.fixture
def identity4():
    return CodeMatrix.identity(4)


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
