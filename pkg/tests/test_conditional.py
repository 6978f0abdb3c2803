import math

import numpy as np
import pytest

from qentropy.conditional import conditional, renyi_conditional_closed
from qentropy.errors import InvalidParameters
from qentropy.families import EntropySpec, entropy
from qentropy.prob import JointTable, marginal, product_join, random_joint, random_vector

from .conftest import CORR, DIAG

SPECS = [
    EntropySpec("shannon"),
    EntropySpec("renyi", q=0.5),
    EntropySpec("renyi", q=2.0),
    EntropySpec("tsallis", q=0.5),
    EntropySpec("tsallis", q=2.0),
    EntropySpec("fd", q=0.5, r=2.0),
    EntropySpec("sm", q=0.5, r=2.0),
    EntropySpec("ja", q=0.5),
    EntropySpec("ja", q=2.0),
]
IDS = [s.label() for s in SPECS]


def binary_entropy(p):
    return -p * math.log2(p) - (1 - p) * math.log2(1 - p)


def abe_oracle(cells, q):
    """Tsallis conditional: escort-weighted mean of slice entropies, by loops."""
    cells = np.asarray(cells)
    py = cells.sum(axis=0)
    z = sum(v**q for v in py if v > 0)
    total = 0.0
    for l, m in enumerate(py):
        if m == 0:
            continue
        s = sum((c / m) ** q for c in cells[:, l] if c > 0)
        total += (m**q / z) * (s - 1) / (1 - q)
    return total


@pytest.mark.parametrize("spec", SPECS, ids=IDS)
def test_independence_gives_marginal(spec, rng):
    for _ in range(20):
        px = random_vector(rng, int(rng.integers(2, 5)))
        py = random_vector(rng, int(rng.integers(2, 5)))
        j = product_join(px, py)
        assert conditional(spec, j, "y") == pytest.approx(entropy(spec, px), abs=1e-10)
        assert conditional(spec, j, "x") == pytest.approx(entropy(spec, py), abs=1e-10)


@pytest.mark.parametrize("spec", SPECS, ids=IDS)
def test_determined_gives_zero(spec):
    assert conditional(spec, DIAG, "y") == pytest.approx(0.0, abs=1e-12)


def test_shannon_by_hand():
    want = 2 * 0.5 * binary_entropy(0.8)
    assert conditional(EntropySpec("shannon"), CORR, "y") == pytest.approx(want, abs=1e-12)
    assert want == pytest.approx(0.721928, abs=1e-6)


def test_tsallis_matches_loop_oracle(rng):
    for q in (0.5, 2.0, 3.0):
        for _ in range(20):
            j = random_joint(rng, (3, 4))
            assert conditional(EntropySpec("tsallis", q=q), j, "y") == pytest.approx(abe_oracle(j.cells, q), abs=1e-12)


class TestRenyiClosedForm:
    def test_product(self, rng):
        px, py = random_vector(rng, 3), random_vector(rng, 4)
        j = product_join(px, py)
        assert renyi_conditional_closed(j, 2.0, "y") == pytest.approx(entropy(EntropySpec("renyi", q=2.0), px), abs=1e-12)

    def test_diagonal(self):
        assert renyi_conditional_closed(DIAG, 2.0, "y") == pytest.approx(0.0, abs=1e-15)

    @pytest.mark.parametrize("q", [0.5, 2.0, 3.0])
    @pytest.mark.parametrize("given", ["x", "y"])
    def test_matches_kn(self, rng, q, given):
        for _ in range(20):
            j = random_joint(rng, (3, 3))
            assert conditional(EntropySpec("renyi", q=q), j, given) == pytest.approx(
                renyi_conditional_closed(j, q, given), abs=1e-10
            )

    def test_rejects_q_one(self):
        with pytest.raises(InvalidParameters):
            renyi_conditional_closed(CORR, 1.0)


def test_shannon_second_law(rng):
    spec = EntropySpec("shannon")
    for _ in range(100):
        j = random_joint(rng, (int(rng.integers(2, 5)), int(rng.integers(2, 5))))
        assert conditional(spec, j, "y") <= entropy(spec, marginal(j, "x")) + 1e-12


def test_shannon_bayes(rng):
    spec = EntropySpec("shannon")
    for _ in range(50):
        j = random_joint(rng, (3, 4))
        lhs = entropy(spec, marginal(j, "x")) + conditional(spec, j, "x")
        rhs = entropy(spec, marginal(j, "y")) + conditional(spec, j, "y")
        assert lhs == pytest.approx(rhs, abs=1e-12)


def test_null_events_are_skipped():
    j = JointTable([[0.5, 0.0], [0.5, 0.0]])
    assert conditional(EntropySpec("shannon"), j, "y") == pytest.approx(1.0)


@pytest.mark.parametrize("family", ["landsberg", "bc"])
def test_undefined_families(family):
    spec = EntropySpec(family, q=2.0) if family == "landsberg" else EntropySpec(family, gamma=2.0)
    with pytest.raises(InvalidParameters):
        conditional(spec, CORR)
