import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from cfharm.bounds import (
    benefit_bounds,
    benefit_reward,
    harm_bounds,
    harm_reward,
    objective_bounds,
    objective_reward,
    tie_bounds,
    tie_reward,
    two_point_strata,
)
from cfharm.core import Marginal, make_marginal, make_outcome_space, point_mass
from cfharm.coupling import coupling_stats
from cfharm.errors import NegativeWeight, NotTwoPoint, TooLarge
from cfharm.oracle import oracle_bounds
from cfharm.transport import solve_transport

import gen
from conftest import F


class TestTBValues:
    def test_a2_vs_a1(self, a1, a2):
        assert benefit_bounds(a2, a1).endpoints == (F("1/2"), F("2/3"))
        assert harm_bounds(a2, a1).endpoints == (F("1/3"), F("1/2"))
        assert tie_bounds(a2, a1).endpoints == (0, 0)

    def test_reverse_direction_swaps(self, a1, a2):
        assert benefit_bounds(a1, a2).endpoints == harm_bounds(a2, a1).endpoints

    @pytest.mark.parametrize(
        "w, lo, hi",
        [(1, "0", "1/3"), ("3/2", "-1/4", "1/6"), (2, "-1/2", "0"), (3, "-1", "-1/3")],
    )
    def test_objective(self, a1, a2, w, lo, hi):
        # values cross-checked against vertex enumeration below
        got = objective_bounds(a2, a1, w)
        assert got.endpoints == (F(lo), F(hi))
        assert got.endpoints == oracle_bounds(a2, a1, objective_reward(F(w))).endpoints

    def test_witnesses_attain(self, a1, a2):
        b = benefit_bounds(a2, a1)
        assert coupling_stats(b.lo_witness).benefit == b.lo
        assert coupling_stats(b.hi_witness).benefit == b.hi

    def test_max_benefit_witness(self, a1, a2):
        w = benefit_bounds(a2, a1).hi_witness
        assert w.nonzero() == {("y1", "y2"): F("1/6"), ("y4", "y2"): F("1/3"), ("y4", "y5"): F("1/2")}

    def test_negative_weight(self, a1, a2):
        with pytest.raises(NegativeWeight):
            objective_bounds(a2, a1, -1)


class TestSmallCases:
    def test_identical_two_point(self):
        space = make_outcome_space(["y1", "y2"])
        m = make_marginal(space, {"y1": "1/2", "y2": "1/2"})
        assert tie_bounds(m, m).endpoints == (0, 1)
        assert tie_bounds(m, m).endpoints == oracle_bounds(m, m, tie_reward).endpoints

    def test_point_masses(self, space):
        lo, hi = point_mass(space, "y1"), point_mass(space, "y6")
        assert benefit_bounds(hi, lo).endpoints == (1, 1)
        assert harm_bounds(hi, lo).endpoints == (0, 0)

    def test_single_outcome(self):
        space = make_outcome_space(["only"])
        m = point_mass(space, "only")
        assert tie_bounds(m, m).endpoints == (1, 1)

    def test_empty_space_transport(self):
        assert solve_transport([Fraction(1)], [Fraction(1)], lambda i, j: Fraction(5), True)[0] == 5


class TestStrata:
    def test_family(self, a1, a2):
        fam = two_point_strata(a2, a1)
        assert str(fam.harm) == "1/2 - p1"
        assert fam.tie(0) == 0
        for p1 in (0, F("1/12"), F("1/6")):
            stats = coupling_stats(fam.coupling_at(p1))
            assert (stats.benefit, stats.harm) == (fam.benefit(p1), fam.harm(p1))

    def test_out_of_range(self, a1, a2):
        with pytest.raises(ValueError):
            two_point_strata(a2, a1).coupling_at(F("1/5"))

    def test_not_two_point(self, space):
        three = make_marginal(space, {"y1": "1/3", "y2": "1/3", "y3": "1/3"})
        with pytest.raises(NotTwoPoint):
            two_point_strata(three, three)

    @settings(max_examples=60, deadline=None)
    @given(st.randoms(use_true_random=False))
    def test_strata_match_lp(self, rng):
        space = gen.space_of(4)
        new = Marginal(space, gen.random_probs(rng, 4, 2))
        ref = Marginal(space, gen.random_probs(rng, 4, 2))
        fam = two_point_strata(new, ref)
        for affine, bound in [
            (fam.benefit, benefit_bounds(new, ref)),
            (fam.harm, harm_bounds(new, ref)),
            (fam.tie, tie_bounds(new, ref)),
        ]:
            assert affine.extremes(fam.p1_lo, fam.p1_hi) == bound.endpoints


class TestOracle:
    def test_too_large(self):
        space = gen.space_of(7)
        m = Marginal(space, (Fraction(1, 7),) * 7)
        with pytest.raises(TooLarge):
            oracle_bounds(m, m, benefit_reward)

    @pytest.mark.parametrize("seed", range(200))
    def test_lp_equals_oracle_3x3(self, seed):
        rng = random.Random(seed)
        space = gen.space_of(rng.randint(3, 5))
        new = gen.random_marginal(rng, space, max_support=3)
        ref = gen.random_marginal(rng, space, max_support=3)
        for lp, reward in [
            (benefit_bounds(new, ref), benefit_reward),
            (harm_bounds(new, ref), harm_reward),
        ]:
            assert lp.endpoints == oracle_bounds(new, ref, reward).endpoints


class TestInvariants:
    @settings(max_examples=80, deadline=None)
    @given(st.randoms(use_true_random=False), st.integers(1, 6))
    def test_antisymmetry_and_range(self, rng, k):
        space = gen.space_of(k)
        new, ref = gen.random_marginal(rng, space), gen.random_marginal(rng, space)
        b, h = benefit_bounds(new, ref), harm_bounds(new, ref)
        assert b.endpoints == harm_bounds(ref, new).endpoints
        for bound in (b, h, tie_bounds(new, ref)):
            assert 0 <= bound.lo <= bound.hi <= 1

    @settings(max_examples=60, deadline=None)
    @given(st.randoms(use_true_random=False), st.integers(1, 6))
    def test_zero_weight_is_benefit(self, rng, k):
        space = gen.space_of(k)
        new, ref = gen.random_marginal(rng, space), gen.random_marginal(rng, space)
        assert objective_bounds(new, ref, 0).endpoints == benefit_bounds(new, ref).endpoints

    @settings(max_examples=60, deadline=None)
    @given(st.randoms(use_true_random=False), st.integers(2, 7))
    def test_unit_weight_without_ties(self, rng, k):
        space = gen.space_of(k)
        cut = rng.randint(1, k - 1)
        outcomes = list(range(k))
        rng.shuffle(outcomes)
        left, right = sorted(outcomes[:cut]), sorted(outcomes[cut:])

        def on(indices):
            sub = gen.random_probs(rng, len(indices), rng.randint(1, len(indices)))
            probs = [Fraction(0)] * k
            for i, p in zip(indices, sub):
                probs[i] = p
            return Marginal(space, tuple(probs))

        new, ref = on(left), on(right)
        assert tie_bounds(new, ref).endpoints == (0, 0)
        b = benefit_bounds(new, ref)
        assert objective_bounds(new, ref, 1).endpoints == (2 * b.lo - 1, 2 * b.hi - 1)

    @settings(max_examples=60, deadline=None)
    @given(st.randoms(use_true_random=False), st.integers(1, 6))
    def test_interval_complement(self, rng, k):
        space = gen.space_of(k)
        new, ref = gen.random_marginal(rng, space), gen.random_marginal(rng, space)
        b, h, t = benefit_bounds(new, ref), harm_bounds(new, ref), tie_bounds(new, ref)
        assert b.lo >= 1 - h.hi - t.hi
        assert b.hi <= 1 - h.lo - t.lo

    @settings(max_examples=60, deadline=None)
    @given(st.randoms(use_true_random=False), st.integers(1, 6), st.fractions(0, 10, max_denominator=7))
    def test_objective_witnesses(self, rng, k, w):
        space = gen.space_of(k)
        new, ref = gen.random_marginal(rng, space), gen.random_marginal(rng, space)
        o = objective_bounds(new, ref, w)
        assert -w <= o.lo <= o.hi <= 1
        for value, witness in ((o.lo, o.lo_witness), (o.hi, o.hi_witness)):
            stats = coupling_stats(witness)
            assert stats.benefit - w * stats.harm == value

    @settings(max_examples=60, deadline=None)
    @given(st.randoms(use_true_random=False), st.integers(1, 6))
    def test_dominance_allows_zero_harm(self, rng, k):
        space = gen.space_of(k)
        new, ref = gen.random_marginal(rng, space), gen.random_marginal(rng, space)
        dominates = all(a <= b for a, b in zip(new.cdf(), ref.cdf()))
        assert (harm_bounds(new, ref).lo == 0) == dominates
