"""Sharp bounds on benefit, harm and tie probabilities given two marginals.

Each bound is the min and max of a linear functional over every coupling that
matches the marginals, solved exactly by :func:`cfharm.transport.solve_transport`.
Both endpoints come with a coupling that attains them.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

from .core import Marginal, RationalLike, check_same_space, parse_rational, render_rational
from .coupling import Coupling, make_coupling
from .errors import NegativeWeight, NotTwoPoint
from .transport import solve_transport

Reward = Callable[[int, int], Fraction]


@dataclass(frozen=True)
class IntervalBound:
    lo: Fraction
    hi: Fraction
    lo_witness: Coupling
    hi_witness: Coupling

    def __contains__(self, value) -> bool:
        return self.lo <= value <= self.hi

    @property
    def endpoints(self) -> tuple[Fraction, Fraction]:
        return (self.lo, self.hi)


def benefit_reward(i: int, j: int) -> Fraction:
    return Fraction(1 if j > i else 0)


def harm_reward(i: int, j: int) -> Fraction:
    return Fraction(1 if j < i else 0)


def tie_reward(i: int, j: int) -> Fraction:
    return Fraction(1 if j == i else 0)


def objective_reward(w: Fraction) -> Reward:
    """+1 on benefit cells, -w on harm cells, 0 on ties."""
    w = Fraction(w)

    def reward(i: int, j: int) -> Fraction:
        if j > i:
            return Fraction(1)
        if j < i:
            return -w
        return Fraction(0)

    return reward


def bounds_for(new: Marginal, ref: Marginal, reward: Reward) -> IntervalBound:
    """Sharp bounds of ``sum reward(row, col) * q`` with ``ref`` on rows, ``new`` on columns."""
    check_same_space(new.space, ref.space)
    lo, lo_cells = solve_transport(ref.probs, new.probs, reward, maximize=False)
    hi, hi_cells = solve_transport(ref.probs, new.probs, reward, maximize=True)
    as_coupling = lambda cells: Coupling(ref, new, tuple(tuple(row) for row in cells))
    return IntervalBound(lo, hi, as_coupling(lo_cells), as_coupling(hi_cells))


def benefit_bounds(new: Marginal, ref: Marginal) -> IntervalBound:
    """Bounds on P(Y_new > Y_ref)."""
    return bounds_for(new, ref, benefit_reward)


def harm_bounds(new: Marginal, ref: Marginal) -> IntervalBound:
    """Bounds on P(Y_new < Y_ref)."""
    return bounds_for(new, ref, harm_reward)


def tie_bounds(new: Marginal, ref: Marginal) -> IntervalBound:
    return bounds_for(new, ref, tie_reward)


def objective_bounds(new: Marginal, ref: Marginal, w: RationalLike) -> IntervalBound:
    """Bounds on P(benefit) - w * P(harm), optimized jointly over couplings.

    This is one optimization, so it can be strictly tighter than combining the
    separate benefit and harm intervals when ties are possible.
    """
    w = parse_rational(w)
    if w < 0:
        raise NegativeWeight(f"weight must be nonnegative, got {w}")
    return bounds_for(new, ref, objective_reward(w))


@dataclass(frozen=True)
class Affine:
    """``const + slope * p1``."""

    const: Fraction
    slope: Fraction

    def __call__(self, p1) -> Fraction:
        return self.const + self.slope * Fraction(p1)

    def extremes(self, lo: Fraction, hi: Fraction) -> tuple[Fraction, Fraction]:
        a, b = self(lo), self(hi)
        return (min(a, b), max(a, b))

    def __str__(self) -> str:
        if self.slope == 0:
            return render_rational(self.const)
        sign = "+" if self.slope > 0 else "-"
        mag = abs(self.slope)
        term = "p1" if mag == 1 else f"{render_rational(mag)}*p1"
        return f"{render_rational(self.const)} {sign} {term}"


@dataclass(frozen=True)
class StrataFamily:
    """All couplings of two two-point marginals, parametrized by ``p1``.

    With ref support ``r_lo < r_hi`` and new support ``n_lo < n_hi``:
    ``p1 = P(r_lo, n_lo)``, ``p2 = P(r_lo, n_hi)``, ``p3 = P(r_hi, n_lo)``,
    ``p4 = P(r_hi, n_hi)``.
    """

    ref: Marginal
    new: Marginal
    ref_support: tuple[str, str]
    new_support: tuple[str, str]
    p1_lo: Fraction
    p1_hi: Fraction
    strata: tuple[Affine, Affine, Affine, Affine]
    benefit: Affine
    harm: Affine
    tie: Affine

    def coupling_at(self, p1) -> Coupling:
        p1 = Fraction(p1)
        if not self.p1_lo <= p1 <= self.p1_hi:
            raise ValueError(f"p1={p1} outside [{self.p1_lo}, {self.p1_hi}]")
        (rl, rh), (nl, nh) = self.ref_support, self.new_support
        keys = [(rl, nl), (rl, nh), (rh, nl), (rh, nh)]
        cells = {}
        for key, f in zip(keys, self.strata):
            cells[key] = cells.get(key, Fraction(0)) + f(p1)
        return make_coupling(self.ref, self.new, cells)


def two_point_strata(new: Marginal, ref: Marginal) -> StrataFamily:
    check_same_space(new.space, ref.space)
    rs, ns = ref.support, new.support
    if len(rs) != 2 or len(ns) != 2:
        raise NotTwoPoint(f"need exactly two support points, got {len(rs)} (ref) and {len(ns)} (new)")
    alpha = ref.probs[rs[0]]
    beta = new.probs[ns[0]]
    one = Fraction(1)
    p1 = Affine(Fraction(0), one)
    p2 = Affine(alpha, -one)
    p3 = Affine(beta, -one)
    p4 = Affine(1 - alpha - beta, one)
    strata = (p1, p2, p3, p4)
    cells = [(rs[0], ns[0]), (rs[0], ns[1]), (rs[1], ns[0]), (rs[1], ns[1])]

    def collect(pred) -> Affine:
        const = slope = Fraction(0)
        for (i, j), f in zip(cells, strata):
            if pred(i, j):
                const += f.const
                slope += f.slope
        return Affine(const, slope)

    names = ref.space.outcomes
    return StrataFamily(
        ref=ref,
        new=new,
        ref_support=(names[rs[0]], names[rs[1]]),
        new_support=(names[ns[0]], names[ns[1]]),
        p1_lo=max(Fraction(0), alpha + beta - 1),
        p1_hi=min(alpha, beta),
        strata=strata,
        benefit=collect(lambda i, j: j > i),
        harm=collect(lambda i, j: j < i),
        tie=collect(lambda i, j: j == i),
    )
