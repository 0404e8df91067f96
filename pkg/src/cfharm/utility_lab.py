"""Rank treatments by expected utility, and search for utilities that realize a ranking.

The search is an exact feasibility problem in the utility values
``u(y_1) .. u(y_k)``:

* ``u(y_{i+1}) - u(y_i) >= monotone_gap``
* ``lo <= u(y_i) <= hi``
* ``E_t[u] - E_t'[u] >= min_gap`` for consecutive classes ``t`` before ``t'``
  (and equality inside a tied class).

An infeasible answer carries Farkas multipliers that anyone can re-check.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence, Union

from .core import RationalLike, Scenario, Utility, check_same_space, parse_rational
from .decisions import expected_utility
from .errors import DegenerateRange, InvalidTarget
from .exact_lp import feasible_point

DEFAULT_RANGE = (Fraction(0), Fraction(10))

Target = Sequence[Union[str, Sequence[str]]]


@dataclass(frozen=True)
class RankEntry:
    treatment: str
    expected: Fraction
    rank: int


def rank_by_utility(scenario: Scenario, utility: Utility) -> list[RankEntry]:
    """Treatments by descending expected utility; equal values share a rank.

    Ties are listed in treatment-id order.
    """
    check_same_space(scenario.space, utility.space)
    scored = [(tid, expected_utility(m, utility)) for tid, m in scenario.treatments.items()]
    scored.sort(key=lambda pair: (-pair[1], pair[0]))
    out, rank, prev = [], 0, None
    for i, (tid, eu) in enumerate(scored):
        if eu != prev:
            rank, prev = i + 1, eu
        out.append(RankEntry(tid, eu, rank))
    return out


def _classes(target: Target) -> list[tuple[str, ...]]:
    return [(t,) if isinstance(t, str) else tuple(t) for t in target]


@dataclass(frozen=True)
class UtilitySearchProblem:
    scenario: Scenario
    target: tuple
    min_gap: Fraction = Fraction(1, 100)
    value_range: tuple[Fraction, Fraction] = DEFAULT_RANGE
    monotone_gap: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "target", tuple(_classes(self.target)))
        object.__setattr__(self, "min_gap", parse_rational(self.min_gap))
        object.__setattr__(self, "monotone_gap", parse_rational(self.monotone_gap))
        lo, hi = (parse_rational(v) for v in self.value_range)
        object.__setattr__(self, "value_range", (lo, hi))
        if not lo < hi:
            raise DegenerateRange(f"value range [{lo}, {hi}] is empty or a single point")
        if self.min_gap <= 0:
            raise ValueError("min_gap must be positive")
        if self.monotone_gap < 0:
            raise ValueError("monotone_gap must be nonnegative")
        flat = [t for cls in self.target for t in cls]
        if sorted(flat) != sorted(self.scenario.treatment_ids) or len(set(flat)) != len(flat):
            raise InvalidTarget(
                f"target {flat} is not a permutation of {list(self.scenario.treatment_ids)}"
            )


@dataclass(frozen=True)
class Constraint:
    name: str
    coeffs: tuple[Fraction, ...]
    bound: Fraction


@dataclass(frozen=True)
class Infeasible:
    """Farkas certificate for ``{x >= 0 : A x <= b}`` being empty.

    ``multipliers[i] >= 0`` weight constraint ``i``; their combination has
    every coefficient ``>= 0`` and a negative right-hand side, which no
    ``x >= 0`` can satisfy. Variables are ``x_i = u(y_i) - lo``.
    """

    constraints: tuple[Constraint, ...]
    multipliers: tuple[Fraction, ...]

    def verify(self) -> bool:
        if any(y < 0 for y in self.multipliers):
            return False
        n = len(self.constraints[0].coeffs) if self.constraints else 0
        combo = [
            sum((y * c.coeffs[j] for y, c in zip(self.multipliers, self.constraints)), Fraction(0))
            for j in range(n)
        ]
        rhs = sum((y * c.bound for y, c in zip(self.multipliers, self.constraints)), Fraction(0))
        return all(v >= 0 for v in combo) and rhs < 0

    def active(self) -> list[tuple[str, Fraction]]:
        return [(c.name, y) for c, y in zip(self.constraints, self.multipliers) if y != 0]


def build_constraints(problem: UtilitySearchProblem) -> list[Constraint]:
    """``A x <= b`` rows over ``x_i = u(y_i) - lo``."""
    space = problem.scenario.space
    k = len(space)
    lo, hi = problem.value_range
    names = space.outcomes
    zero = [Fraction(0)] * k
    rows: list[Constraint] = []
    for i in range(k):
        coeffs = list(zero)
        coeffs[i] = Fraction(1)
        rows.append(Constraint(f"u({names[i]}) <= {hi}", tuple(coeffs), hi - lo))
    for i in range(k - 1):
        coeffs = list(zero)
        coeffs[i], coeffs[i + 1] = Fraction(1), Fraction(-1)
        rows.append(
            Constraint(f"u({names[i + 1]}) - u({names[i]}) >= {problem.monotone_gap}", tuple(coeffs), -problem.monotone_gap)
        )

    def prefer(better: str, worse: str, gap: Fraction) -> Constraint:
        mb = problem.scenario.marginal(better).probs
        mw = problem.scenario.marginal(worse).probs
        # E_better - E_worse >= gap  <=>  sum (mw - mb) x <= -gap  (the lo shift cancels)
        return Constraint(
            f"E[{better}] - E[{worse}] >= {gap}",
            tuple(w - b for b, w in zip(mb, mw)),
            -gap,
        )

    classes = problem.target
    for cls in classes:
        for a, b in zip(cls, cls[1:]):
            rows.append(prefer(a, b, Fraction(0)))
            rows.append(prefer(b, a, Fraction(0)))
    for upper, lower in zip(classes, classes[1:]):
        rows.append(prefer(upper[-1], lower[0], problem.min_gap))
    return rows


def find_utility_for_ordering(problem: UtilitySearchProblem) -> Union[Utility, Infeasible]:
    constraints = build_constraints(problem)
    A = [c.coeffs for c in constraints]
    b = [c.bound for c in constraints]
    x = feasible_point(A, b)
    lo = problem.value_range[0]
    if x is not None:
        return Utility(problem.scenario.space, tuple(lo + v for v in x))
    # Farkas alternative: y >= 0, A^T y >= 0, b.y <= -1
    n = len(A[0])
    alt_A = [[-A[i][j] for i in range(len(A))] for j in range(n)] + [list(b)]
    alt_b = [Fraction(0)] * n + [Fraction(-1)]
    y = feasible_point(alt_A, alt_b)
    if y is None:
        raise RuntimeError("neither the system nor its Farkas alternative is feasible")
    return Infeasible(tuple(constraints), tuple(y))


@dataclass(frozen=True)
class Realization:
    ok: bool
    margins: tuple[Fraction, ...]

    def __bool__(self) -> bool:
        return self.ok


def verify_utility_realizes(
    scenario: Scenario, utility: Utility, target: Target, min_gap: RationalLike
) -> Realization:
    """Recompute expected utilities and check ``target`` (best first) holds.

    ``margins[i]`` is ``E[target[i]] - E[target[i+1]]``. Strict steps need a
    margin of at least ``min_gap``; members of a tied class must be equal.
    """
    check_same_space(scenario.space, utility.space)
    gap = parse_rational(min_gap)
    classes = _classes(target)
    eu = {tid: expected_utility(scenario.marginal(tid), utility) for cls in classes for tid in cls}
    flat = [t for cls in classes for t in cls]
    margins = tuple(eu[a] - eu[b] for a, b in zip(flat, flat[1:]))
    ok = all(eu[a] == eu[b] for cls in classes for a, b in zip(cls, cls[1:]))
    ok = ok and all(eu[u[-1]] - eu[l[0]] >= gap for u, l in zip(classes, classes[1:]))
    return Realization(ok, margins)
