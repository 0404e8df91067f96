"""Pairwise verdict relations over a scenario's treatments and their cycles."""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import permutations
from typing import Iterable, Union

from .core import Scenario, render_rational
from .decisions import (
    Decision,
    Verdict,
    WeightedRule,
    counterfactual_verdict,
    interventionist_verdict,
)
from .errors import TooFewTreatments

W_CAVEAT = (
    "one weight is applied to every pair; whether different trials deserve "
    "different weights is a modelling choice this audit does not make"
)


@dataclass(frozen=True)
class Counterfactual:
    rule: WeightedRule

    def describe(self) -> str:
        return f"counterfactual w={render_rational(self.rule.w)}"


@dataclass(frozen=True)
class Interventionist:
    utility_id: str

    def describe(self) -> str:
        return f"interventionist {self.utility_id}"


Rule = Union[Counterfactual, Interventionist]


@dataclass(frozen=True)
class PairwiseRelation:
    treatments: tuple[str, ...]
    verdicts: dict[tuple[str, str], Verdict]
    rule: Rule

    def prefers(self, b: str, a: str) -> bool:
        """``b`` preferred to ``a``: switching from ``a`` to ``b`` is recommended."""
        return self.verdicts[(b, a)].recommends_new

    def strictly_prefers(self, b: str, a: str) -> bool:
        return self.prefers(b, a) and not self.prefers(a, b)


def pairwise_matrix(scenario: Scenario, rule: Rule) -> PairwiseRelation:
    ids = scenario.treatment_ids
    if len(ids) < 2:
        raise TooFewTreatments(f"need at least two treatments, got {len(ids)}")
    if isinstance(rule, Interventionist):
        utility = scenario.utility(rule.utility_id)
        decide = lambda new, ref: interventionist_verdict(new, ref, utility)
    else:
        decide = lambda new, ref: counterfactual_verdict(new, ref, rule.rule)
    verdicts = {
        (b, a): decide(scenario.treatments[b], scenario.treatments[a])
        for b, a in permutations(ids, 2)
    }
    return PairwiseRelation(ids, verdicts, rule)


@dataclass(frozen=True)
class Cycle:
    """``b`` over ``a``, ``c`` over ``b``, ``a`` over ``c``."""

    a: str
    b: str
    c: str
    verdicts: tuple[Verdict, Verdict, Verdict]

    @property
    def members(self) -> tuple[str, str, str]:
        return (self.a, self.b, self.c)


@dataclass(frozen=True)
class AuditReport:
    rule: Rule
    relation: PairwiseRelation
    cycles: tuple[Cycle, ...]
    order: tuple[str, ...] | None
    equivalences: tuple[tuple[str, str], ...]
    inconclusive: tuple[tuple[str, str], ...]
    undetermined: tuple[tuple[str, str], ...]
    notes: tuple[str, ...] = field(default=())

    @property
    def is_transitive(self) -> bool:
        return not self.cycles


def _topological_order(relation: PairwiseRelation) -> tuple[str, ...] | None:
    ids = relation.treatments
    beaten_by = {t: {s for s in ids if s != t and relation.strictly_prefers(s, t)} for t in ids}
    placed: list[str] = []
    remaining = list(ids)
    while remaining:
        ready = [t for t in remaining if not (beaten_by[t] - set(placed))]
        if not ready:
            return None
        placed.append(ready[0])
        remaining.remove(ready[0])
    return tuple(placed)


def detect_cycles(relation: PairwiseRelation) -> AuditReport:
    """Enumerate intransitive triples of the strict preference relation.

    Each cycle is reported once, rotated so that its first member comes
    earliest in the treatment list. ``order`` (best first) is given whenever
    the strict preferences admit one.
    """
    ids = relation.treatments
    pos = {t: i for i, t in enumerate(ids)}
    strict = relation.strictly_prefers
    cycles = []
    for a, b, c in permutations(ids, 3):
        if pos[a] > pos[b] or pos[a] > pos[c]:
            continue
        if strict(b, a) and strict(c, b) and strict(a, c):
            v = relation.verdicts
            cycles.append(Cycle(a, b, c, (v[(b, a)], v[(c, b)], v[(a, c)])))

    equivalences, inconclusive, undetermined = [], [], []
    for i, x in enumerate(ids):
        for y in ids[i + 1 :]:
            fwd, back = relation.verdicts[(y, x)], relation.verdicts[(x, y)]
            if fwd.recommends_new and back.recommends_new:
                equivalences.append((x, y))
            undecided = [v.decision is Decision.INCONCLUSIVE for v in (fwd, back)]
            if all(undecided):
                undetermined.append((x, y))
            elif any(undecided):
                inconclusive.append((x, y))

    notes = (W_CAVEAT,) if isinstance(relation.rule, Counterfactual) else ()
    return AuditReport(
        rule=relation.rule,
        relation=relation,
        cycles=tuple(cycles),
        order=_topological_order(relation) if not cycles else None,
        equivalences=tuple(equivalences),
        inconclusive=tuple(inconclusive),
        undetermined=tuple(undetermined),
        notes=notes,
    )


def audit_scenario(scenario: Scenario, rules: Iterable[Rule]) -> list[AuditReport]:
    return [detect_cycles(pairwise_matrix(scenario, rule)) for rule in rules]
