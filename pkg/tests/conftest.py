import numpy as np
import pytest
from hypothesis import strategies as st

from qentropy.prob import JointTable, ProbVector, normalize_validate


@pytest.fixture
def rng():
    return np.random.default_rng(20171)


def prob_vectors(min_size=1, max_size=8, positive=True):
    lo = 0.01 if positive else 0.0
    return (
        st.lists(st.floats(lo, 1.0), min_size=min_size, max_size=max_size)
        .filter(lambda xs: sum(xs) > 0)
        .map(normalize_validate)
    )


CORR = JointTable([[0.4, 0.1], [0.1, 0.4]])
ASYM = JointTable([[0.6, 0.2], [0.1, 0.1]])
DIAG = JointTable([[0.5, 0.0], [0.0, 0.5]])


def uniform(n):
    return ProbVector.uniform(n)
