import sys
from pathlib import Path

import numpy as np
import pytest
from hypothesis import strategies as st

sys.path.insert(0, str(Path(__file__).parent))

from mvinfo import kernels  # noqa: E402
from mvinfo.dist import DiscreteDistribution  # noqa: E402


def random_array(rng, shape, sparsity=0.2):
    """Dirichlet pmf with some cells forced to exactly zero."""
    a = rng.dirichlet(np.full(int(np.prod(shape)), 0.7)).reshape(shape)
    a[rng.random(shape) < sparsity] = 0.0
    if a.sum() == 0:
        a.flat[0] = 1.0
    return a / a.sum()


@st.composite
def pmf_arrays(draw, min_vars=2, max_vars=4, max_alphabet=3):
    n = draw(st.integers(min_vars, max_vars))
    shape = tuple(draw(st.lists(st.integers(2, max_alphabet), min_size=n, max_size=n)))
    seed = draw(st.integers(0, 2**32 - 1))
    return random_array(np.random.default_rng(seed), shape)


def dist_of(a):
    return DiscreteDistribution.from_array(a)


@pytest.fixture(params=kernels.available_backends())
def backend(request):
    return request.param


# One line per acceptance criterion, echoed in the terminal summary.
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[0][1:])):
            terminalreporter.write_line(line)
