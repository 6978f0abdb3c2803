import io
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qentropy.chain import (
    RuleSpec,
    additivity_sweep,
    bayes_residual,
    chain_residual,
    chain_sweep,
    mutual_information,
    n_chain_residual,
    pseudo_add_residual,
    q_extensive_sum,
    q_extensive_sum_expanded,
    read_jsonl,
    sequential_conditionals,
    write_jsonl,
)
from qentropy.errors import InvalidParameters, NegativeEntropyForDeltaRule
from qentropy.families import EntropySpec
from qentropy.prob import JointTable, product_join, random_joint, random_vector

from .conftest import ASYM, CORR, DIAG

Q_EXTENSIVE = [
    EntropySpec("tsallis", q=0.5),
    EntropySpec("tsallis", q=2.0),
    EntropySpec("fd", q=0.5, r=2.0),
    EntropySpec("fd", q=2.0, r=0.5),
    EntropySpec("sm", q=0.5, r=2.0),
    EntropySpec("sm", q=3.0, r=0.7),
]


class TestPseudoAdditivity:
    def test_shannon_additive(self, rng):
        for _ in range(50):
            r = pseudo_add_residual(EntropySpec("shannon"), random_vector(rng, 3), random_vector(rng, 4), RuleSpec("additive"))
            assert abs(r) <= 1e-10

    @pytest.mark.parametrize(
        "spec, q",
        [
            (EntropySpec("tsallis", q=2.0), 2.0),
            (EntropySpec("tsallis", q=0.5), 0.5),
            (EntropySpec("landsberg", q=2.0), 2.0),
            (EntropySpec("landsberg", q=0.5), 0.5),
            (EntropySpec("bc", gamma=0.5), 2 - 2**-0.5),
            (EntropySpec("bc", gamma=2.0), 0.0),
        ],
        ids=lambda x: x.label() if isinstance(x, EntropySpec) else f"{x:g}",
    )
    def test_tsallis_rule(self, rng, spec, q):
        for _ in range(50):
            r = pseudo_add_residual(spec, random_vector(rng, 3), random_vector(rng, 5), RuleSpec("tsallis_add", q=q))
            assert abs(r) <= 1e-10

    def test_landsberg_rule_mirror(self, rng):
        # landsberg_add(q) is tsallis_add(2-q)
        spec = EntropySpec("tsallis", q=0.5)
        px, py = random_vector(rng, 3), random_vector(rng, 3)
        a = pseudo_add_residual(spec, px, py, RuleSpec("landsberg_add", q=1.5))
        assert abs(a) <= 1e-10

    def test_renyi_delta_rule(self, rng):
        # renyi is additive, so delta = 1 reduces to additivity
        spec = EntropySpec("renyi", q=2.0)
        r = pseudo_add_residual(spec, random_vector(rng, 3), random_vector(rng, 3), RuleSpec("delta_add", delta=1.0))
        assert abs(r) <= 1e-10

    def test_delta_rule_negative_entropy(self):
        from qentropy.prob import ProbVector

        with pytest.raises(NegativeEntropyForDeltaRule):
            pseudo_add_residual(_Negative(), ProbVector([1.0]), ProbVector([1.0]), RuleSpec("delta_add", delta=2.0))

    @pytest.mark.parametrize("kw", [dict(kind="nope"), dict(kind="tsallis_add"), dict(kind="delta_add", delta=0.0)])
    def test_invalid_rules(self, kw):
        with pytest.raises(InvalidParameters):
            RuleSpec(**kw)

    def test_chain_rule_rejected_for_additivity(self):
        from qentropy.prob import ProbVector

        with pytest.raises(InvalidParameters):
            pseudo_add_residual(EntropySpec("shannon"), ProbVector([1.0]), ProbVector([1.0]), RuleSpec("additive_chain"))


class _Negative:
    def entropy(self, p):
        return -1.0


class TestChainRules:
    @pytest.mark.parametrize("given_axis", ["x", "y"])
    def test_shannon(self, rng, given_axis):
        for _ in range(50):
            j = random_joint(rng, (3, 4))
            assert abs(chain_residual(EntropySpec("shannon"), j, RuleSpec("additive_chain"), given_axis)) <= 1e-10

    @pytest.mark.parametrize("q", [0.5, 2.0, 3.0])
    def test_renyi_shares_additive_chain(self, rng, q):
        for _ in range(50):
            j = random_joint(rng, (int(rng.integers(2, 5)), int(rng.integers(2, 5))))
            assert abs(chain_residual(EntropySpec("renyi", q=q), j, RuleSpec("additive_chain"))) <= 1e-10

    @pytest.mark.parametrize("spec", Q_EXTENSIVE, ids=lambda s: s.label())
    @pytest.mark.parametrize("given_axis", ["x", "y"])
    def test_q_extensive(self, rng, spec, given_axis):
        rule = RuleSpec("q_extensive_chain", q=spec.chain_q)
        for _ in range(50):
            j = random_joint(rng, (3, 3))
            assert abs(chain_residual(spec, j, rule, given_axis)) <= 1e-10

    def test_tsallis_not_additive(self):
        assert abs(chain_residual(EntropySpec("tsallis", q=2.0), ASYM, RuleSpec("additive_chain"))) > 1e-3

    def test_ja_on_symmetric_joint(self):
        # both columns are permutations of (0.8, 0.2), so the escort factorizes
        r = chain_residual(EntropySpec("ja", q=2.0), CORR, RuleSpec("q_extensive_chain", q=2.0))
        assert abs(r) <= 1e-15

    def test_ja_on_asymmetric_joint(self):
        r = chain_residual(EntropySpec("ja", q=2.0), ASYM, RuleSpec("q_extensive_chain", q=2.0))
        assert r == pytest.approx(-0.0081810196768572, abs=1e-12)

    def test_ja_on_products(self, rng):
        for _ in range(20):
            j = product_join(random_vector(rng, 3), random_vector(rng, 3))
            assert abs(chain_residual(EntropySpec("ja", q=2.0), j, RuleSpec("q_extensive_chain", q=2.0))) <= 1e-10

    def test_rejects_additivity_rule(self):
        with pytest.raises(InvalidParameters):
            chain_residual(EntropySpec("shannon"), CORR, RuleSpec("additive"))


def tsallis_loop(p, q):
    return (sum(x**q for x in np.ravel(p) if x > 0) - 1) / (1 - q)


def n_chain_oracle(cells, q):
    """Tsallis joint entropy minus the composed sequence of Abe conditionals."""
    cells = np.asarray(cells)
    n = cells.ndim
    terms = [tsallis_loop(cells.sum(axis=tuple(range(1, n))), q)]
    for i in range(1, n):
        m = cells.sum(axis=tuple(range(i + 1, n))) if i + 1 < n else cells
        hist = m.reshape(-1, cells.shape[i])
        mass = hist.sum(axis=1)
        z = sum(v**q for v in mass if v > 0)
        terms.append(sum((mass[h] ** q / z) * tsallis_loop(hist[h] / mass[h], q) for h in range(len(mass)) if mass[h] > 0))
    total = 0.0
    for t in terms:
        total = total + t + (1 - q) * total * t
    return tsallis_loop(cells, q) - total, terms


class TestNChain:
    def test_tsallis_three(self, rng):
        for _ in range(20):
            j = random_joint(rng, (2, 2, 2))
            want, terms = n_chain_oracle(j.cells, 2.0)
            assert abs(want) <= 1e-9
            np.testing.assert_allclose(sequential_conditionals(EntropySpec("tsallis", q=2.0), j), terms, atol=1e-12)
            assert abs(n_chain_residual(EntropySpec("tsallis", q=2.0), j, 2.0)) <= 1e-9

    def test_shannon_limit(self, rng):
        for _ in range(20):
            j = random_joint(rng, (2, 2, 2))
            assert abs(n_chain_residual(EntropySpec("shannon"), j, 1.0)) <= 1e-9

    @pytest.mark.parametrize("shape", [(2, 3, 2, 2), (3, 2, 3)])
    def test_tsallis_higher(self, rng, shape):
        for q in (0.5, 3.0):
            j = random_joint(rng, shape)
            assert abs(n_chain_residual(EntropySpec("tsallis", q=q), j, q)) <= 1e-9

    def test_rejects_vector(self):
        with pytest.raises(InvalidParameters):
            n_chain_residual(EntropySpec("shannon"), _OneD(), 1.0)


class _OneD:
    ndim = 1


@given(st.lists(st.floats(-3, 3), min_size=1, max_size=6), st.sampled_from([0.5, 1.0, 2.0, 3.0]))
@settings(max_examples=200)
def test_expansion_matches_product_form(terms, q):
    a = q_extensive_sum(terms, q)
    b = q_extensive_sum_expanded(terms, q)
    assert a == pytest.approx(b, abs=1e-10 * max(1.0, abs(b)))


class TestBayes:
    @pytest.mark.parametrize("q", [0.5, 2.0])
    def test_tsallis(self, rng, q):
        for _ in range(50):
            assert abs(bayes_residual(EntropySpec("tsallis", q=q), random_joint(rng, (3, 4)), q)) <= 1e-9

    def test_shannon(self, rng):
        for _ in range(20):
            assert abs(bayes_residual(EntropySpec("shannon"), random_joint(rng, (3, 3)), 1.0)) <= 1e-12

    @pytest.mark.parametrize(
        "spec", [EntropySpec("renyi", q=2.0), EntropySpec("fd", q=0.5, r=2.0), EntropySpec("ja", q=2.0)], ids=lambda s: s.label()
    )
    def test_products(self, rng, spec):
        for _ in range(20):
            j = product_join(random_vector(rng, 3), random_vector(rng, 2))
            assert abs(bayes_residual(spec, j, spec.chain_q)) <= 1e-10


class TestMutualInformation:
    def test_product(self, rng):
        j = product_join(random_vector(rng, 3), random_vector(rng, 4))
        assert mutual_information(EntropySpec("shannon"), j) == pytest.approx(0.0, abs=1e-12)

    def test_diagonal(self):
        assert mutual_information(EntropySpec("shannon"), DIAG) == pytest.approx(1.0)

    def test_by_hand(self):
        h2 = -0.8 * math.log2(0.8) - 0.2 * math.log2(0.2)
        got = mutual_information(EntropySpec("shannon"), CORR)
        assert got == pytest.approx(1 - h2, abs=1e-12)
        assert got == pytest.approx(0.278072, abs=1e-6)

    def test_non_negative(self, rng):
        for _ in range(100):
            assert mutual_information(EntropySpec("shannon"), random_joint(rng, (3, 3))) >= -1e-12


class TestRecords:
    def test_jsonl_round_trip(self, rng):
        joints = [random_joint(rng, (2, 3)) for _ in range(4)]
        recs = chain_sweep(EntropySpec("renyi", q=2.0), joints, RuleSpec("additive_chain"))
        recs += additivity_sweep(
            EntropySpec("tsallis", q=2.0), [(random_vector(rng, 2), random_vector(rng, 3))], RuleSpec("tsallis_add", q=2.0)
        )
        buf = io.StringIO()
        assert write_jsonl(recs, buf) == 5
        buf.seek(0)
        back = read_jsonl(buf)
        assert back == recs
        assert len({r.input_digest for r in back}) == 5

    def test_digest_stable(self):
        a = chain_sweep(EntropySpec("shannon"), [CORR], RuleSpec("additive_chain"))[0]
        b = chain_sweep(EntropySpec("shannon"), [JointTable([[0.4, 0.1], [0.1, 0.4]])], RuleSpec("additive_chain"))[0]
        assert a.input_digest == b.input_digest
        assert len(a.input_digest) == 16
