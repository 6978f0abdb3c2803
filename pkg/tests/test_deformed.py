import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from qentropy.darotzy import DarotzyParams
from qentropy.deformed import kn_mean, make_kn, q_exp, q_log
from qentropy.errors import CutoffViolation, DomainViolation, InvalidParameters, NonPositiveArgument


class TestQLog:
    @pytest.mark.parametrize("q", [-1.0, 0.5, 1.0, 2.0, 3.7])
    def test_identity_point(self, q):
        assert q_log(1.0, q) == pytest.approx(0.0, abs=1e-15)

    def test_limit_branch(self):
        assert q_log(math.e, 1.0) == pytest.approx(1.0, abs=1e-15)
        assert q_log(math.e, 1.0 + 1e-12) == pytest.approx(1.0, abs=1e-9)

    def test_by_hand(self):
        assert q_log(2.0, 2.0) == pytest.approx(0.5, abs=1e-15)

    @pytest.mark.parametrize("x", [0.0, -1.0])
    def test_non_positive(self, x):
        with pytest.raises(NonPositiveArgument):
            q_log(x, 2.0)


class TestQExp:
    @pytest.mark.parametrize("q", [0.5, 1.0, 2.0])
    def test_zero(self, q):
        assert q_exp(0.0, q) == pytest.approx(1.0)

    def test_by_hand(self):
        assert q_exp(0.5, 2.0) == pytest.approx(2.0, abs=1e-15)

    def test_cutoff(self):
        with pytest.raises(CutoffViolation):
            q_exp(1.5, 2.0)

    @given(st.floats(1e-3, 1e3), st.sampled_from([0.5, 2.0]))
    def test_round_trip(self, x, q):
        assert q_exp(q_log(x, q), q) == pytest.approx(x, rel=1e-10)


class TestKnMean:
    def test_linear(self):
        assert kn_mean([1, 3], [0.5, 0.5], make_kn("linear")) == pytest.approx(2.0)

    def test_renyi_by_hand(self):
        got = kn_mean([0, 1], [0.5, 0.5], make_kn("renyi", q=2))
        assert got == pytest.approx(-math.log2(0.75), abs=1e-12)
        assert got == pytest.approx(0.415037, abs=1e-6)

    def test_renyi_generator_at_zero(self):
        kn = make_kn("renyi", q=2)
        assert float(kn.phi(0.0)) == 1.0
        assert float(kn.inverse(1.0)) == 0.0

    @pytest.mark.parametrize(
        "kn",
        [
            make_kn("linear"),
            make_kn("renyi", q=0.5),
            make_kn("renyi", q=3.0),
            make_kn("fd", q=0.5, r=2.0),
            make_kn("sm", q=0.7, r=2.0),
            make_kn("composed", base=make_kn("renyi", q=2.0), darotzy=DarotzyParams(0.5, 0.5)),
        ],
        ids=lambda k: k.tag,
    )
    def test_properties(self, kn, rng):
        for _ in range(50):
            n = int(rng.integers(1, 6))
            v = rng.uniform(0.0, 1.0, n)
            w = rng.dirichlet(np.ones(n))
            assert kn_mean(np.full(n, 0.3), w, kn) == pytest.approx(0.3, abs=1e-12)
            m = kn_mean(v, w, kn)
            assert v.min() - 1e-12 <= m <= v.max() + 1e-12

    def test_affine_invariance(self, rng):
        base = make_kn("renyi", q=2.0)
        a, b = 3.0, -1.5
        from qentropy.deformed import KNFunction

        scaled = KNFunction("affine", lambda x: a * base.phi(x) + b, lambda z: base.inverse((z - b) / a), base.domain, {})
        for _ in range(20):
            v = rng.uniform(0, 2, 4)
            w = rng.dirichlet(np.ones(4))
            assert kn_mean(v, w, scaled) == pytest.approx(kn_mean(v, w, base), abs=1e-12)

    def test_length_mismatch(self):
        with pytest.raises(InvalidParameters):
            kn_mean([1, 2], [1.0], make_kn("linear"))

    def test_domain_violation(self):
        with pytest.raises(DomainViolation):
            kn_mean([0.0, 5.0], [0.5, 0.5], make_kn("fd", q=2.0, r=0.5))

    def test_unknown_tag(self):
        with pytest.raises(InvalidParameters):
            make_kn("nope")

    def test_missing_param(self):
        with pytest.raises(InvalidParameters):
            make_kn("renyi")


class TestGeneratorRelations:
    def test_renyi_limit_is_arithmetic(self, rng):
        kn = make_kn("renyi", q=1 - 1e-6)
        for _ in range(20):
            v = rng.uniform(0, 3, 5)
            w = rng.dirichlet(np.ones(5))
            assert kn_mean(v, w, kn) == pytest.approx(float(np.dot(v, w)), abs=1e-4)

    def test_fd_generator_formula(self, rng):
        q, r = 0.5, 2.0
        kn = make_kn("fd", q=q, r=r)
        for x in rng.uniform(0, 1.5, 20):
            want = ((1 + (1 - q) * x) ** ((1 - r) / (1 - q)) - 1) / (1 - r)
            assert float(kn.phi(x)) == pytest.approx(want, rel=1e-12)

    def test_sm_generator_formula(self, rng):
        q, r = 0.5, 2.0
        d = 2 ** (1 - q) - 1
        kn = make_kn("sm", q=q, r=r)
        for x in rng.uniform(0, 1.5, 20):
            want = ((1 + d * x) ** ((1 - r) / (1 - q)) - 1) / (1 - r)
            assert float(kn.phi(x)) == pytest.approx(want, rel=1e-12)

    @pytest.mark.parametrize("tag", ["fd", "sm"])
    def test_r_equal_q_is_linear_mean(self, tag, rng):
        kn = make_kn(tag, q=2.0, r=2.0)
        for _ in range(20):
            v = rng.uniform(0, 0.9, 4)
            w = rng.dirichlet(np.ones(4))
            assert kn_mean(v, w, kn) == pytest.approx(float(np.dot(v, w)), abs=1e-12)

    @pytest.mark.parametrize("tag, unit", [("fd", math.log(2)), ("sm", 1.0)])
    def test_q_to_one_recovers_renyi(self, tag, unit, rng):
        # fd deforms a natural exponential, so its limit is the renyi mean in nats
        kn = make_kn(tag, q=1 - 1e-7, r=2.0)
        ref = make_kn("renyi", q=2.0)
        for _ in range(20):
            v = rng.uniform(0, 2, 4)
            w = rng.dirichlet(np.ones(4))
            assert kn_mean(v, w, kn) == pytest.approx(unit * kn_mean(v / unit, w, ref), abs=1e-5)
