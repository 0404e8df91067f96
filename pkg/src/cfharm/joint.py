"""Joint laws of potential outcomes across several treatments."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Iterable, Mapping, Sequence

from .bounds import IntervalBound, benefit_bounds, harm_bounds, tie_bounds
from .core import Marginal, RationalLike, Scenario, parse_rational, render_rational
from .coupling import Coupling, CouplingStats, coupling_stats
from .errors import MarginalMismatch, MassNotOne, NegativeMass, UnknownOutcome, UnknownTreatment


@dataclass(frozen=True)
class MultiwayJoint:
    """Distribution over outcome tuples, one coordinate per treatment.

    ``cells`` holds only positive-mass tuples, sorted by outcome position.
    """

    scenario: Scenario
    treatments: tuple[str, ...]
    cells: tuple[tuple[tuple[str, ...], Fraction], ...]

    def axis(self, treatment: str) -> int:
        try:
            return self.treatments.index(treatment)
        except ValueError:
            raise UnknownTreatment(treatment) from None

    def projection(self, treatment: str) -> Marginal:
        ax = self.axis(treatment)
        space = self.scenario.space
        probs = [Fraction(0)] * len(space)
        for outcomes, p in self.cells:
            probs[space.index(outcomes[ax])] += p
        return Marginal(space, tuple(probs))

    def as_strings(self) -> list[dict]:
        return [{"outcomes": list(o), "p": render_rational(p)} for o, p in self.cells]


def make_multiway_joint(
    scenario: Scenario,
    cells: Mapping[Sequence[str], RationalLike] | Iterable[tuple[Sequence[str], RationalLike]],
    treatments: Sequence[str] | None = None,
) -> MultiwayJoint:
    """Validate a joint law against every treatment marginal of ``scenario``.

    ``treatments`` fixes the coordinate order and defaults to the scenario's
    treatment order.
    """
    ids = tuple(treatments) if treatments is not None else scenario.treatment_ids
    if len(set(ids)) != len(ids):
        raise ValueError(f"repeated treatment in {ids}")
    for tid in ids:
        scenario.marginal(tid)
    space = scenario.space
    items = cells.items() if isinstance(cells, Mapping) else cells
    merged: dict[tuple[str, ...], Fraction] = {}
    for outcomes, raw in items:
        outcomes = tuple(outcomes)
        if len(outcomes) != len(ids):
            raise ValueError(f"cell {outcomes} needs {len(ids)} coordinates")
        for o in outcomes:
            if o not in space:
                raise UnknownOutcome(o)
        p = parse_rational(raw, where="/".join(outcomes))
        if p < 0:
            raise NegativeMass("/".join(outcomes), p)
        merged[outcomes] = merged.get(outcomes, Fraction(0)) + p
    total = sum(merged.values(), Fraction(0))
    if total != 1:
        raise MassNotOne(total)
    for ax, tid in enumerate(ids):
        expected = scenario.marginal(tid).probs
        got = [Fraction(0)] * len(space)
        for outcomes, p in merged.items():
            got[space.index(outcomes[ax])] += p
        for i, (e, g) in enumerate(zip(expected, got)):
            if e != g:
                raise MarginalMismatch(tid, space.outcomes[i], e, g)
    key = lambda item: tuple(space.index(o) for o in item[0])
    kept = tuple(sorted(((o, p) for o, p in merged.items() if p > 0), key=key))
    return MultiwayJoint(scenario, ids, kept)


def independent_joint(scenario: Scenario) -> MultiwayJoint:
    """Product of the scenario's marginals."""
    ids = scenario.treatment_ids
    space = scenario.space
    supports = [scenario.marginal(t).support for t in ids]
    cells = {}
    for combo in product(*supports):
        p = Fraction(1)
        for tid, i in zip(ids, combo):
            p *= scenario.marginal(tid).probs[i]
        cells[tuple(space.outcomes[i] for i in combo)] = p
    return make_multiway_joint(scenario, cells, ids)


def pairwise_from_joint(j: MultiwayJoint, ref: str, new: str) -> Coupling:
    """Marginalize onto (``ref`` rows, ``new`` columns)."""
    if ref == new:
        raise ValueError("need two distinct treatments")
    ra, na = j.axis(ref), j.axis(new)
    space = j.scenario.space
    k = len(space)
    grid = [[Fraction(0)] * k for _ in range(k)]
    for outcomes, p in j.cells:
        grid[space.index(outcomes[ra])][space.index(outcomes[na])] += p
    return Coupling(j.projection(ref), j.projection(new), tuple(tuple(r) for r in grid))


@dataclass(frozen=True)
class ContainmentReport:
    ok: bool
    stats: CouplingStats
    benefit: IntervalBound
    harm: IntervalBound
    tie: IntervalBound


def verify_bounds_contain(j: MultiwayJoint, t_new: str, t_ref: str) -> ContainmentReport:
    """Check the joint's own pairwise stats sit inside the marginal-only bounds."""
    coupling = pairwise_from_joint(j, t_ref, t_new)
    stats = coupling_stats(coupling)
    new, ref = j.projection(t_new), j.projection(t_ref)
    b, h, t = benefit_bounds(new, ref), harm_bounds(new, ref), tie_bounds(new, ref)
    ok = stats.benefit in b and stats.harm in h and stats.tie in t
    ok = ok and stats.benefit + stats.harm + stats.tie == 1
    return ContainmentReport(ok, stats, b, h, t)
