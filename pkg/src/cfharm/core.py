"""Outcome spaces, marginals, utilities and scenarios.

All probabilities and utilities are :class:`fractions.Fraction`. Nothing in this
module (or any module except the Monte Carlo summaries) rounds.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import cached_property
from fractions import Fraction
from typing import Iterable, Mapping, Union

from .errors import (
    DuplicateLabel,
    EmptySpace,
    MassNotOne,
    MissingOutcome,
    NegativeMass,
    NotOrderPreserving,
    ParseError,
    SpaceMismatch,
    UnknownOutcome,
    UnknownTreatment,
    UnknownUtility,
)

RationalLike = Union[str, int, Fraction]

_RATIONAL_RE = re.compile(r"^([+-]?\d+)(?:/(\d+))?$")


def parse_rational(value: RationalLike, where: str | None = None) -> Fraction:
    """Parse ``[sign]int[/posint]`` into a Fraction.

    Ints and Fractions pass through. Floats are rejected on purpose: a float
    has already lost the exact value.
    """
    if isinstance(value, bool):
        raise ParseError(f"not a rational: {value!r}", where)
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if not isinstance(value, str):
        raise ParseError(f"not a rational: {value!r}", where)
    m = _RATIONAL_RE.match(value.strip())
    if m is None:
        raise ParseError(f"malformed rational {value!r}", where)
    num, den = m.group(1), m.group(2)
    if den is None:
        return Fraction(int(num))
    if int(den) == 0:
        raise ParseError(f"zero denominator in {value!r}", where)
    return Fraction(int(num), int(den))


def render_rational(q: Fraction) -> str:
    """Canonical text form: ``num/den`` in lowest terms, ``num`` when den is 1."""
    q = Fraction(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


@dataclass(frozen=True)
class OutcomeSpace:
    """Totally ordered finite outcome set; position 0 is the worst outcome."""

    outcomes: tuple[str, ...]
    display_labels: tuple[str, ...] = ()

    def __post_init__(self):
        if not self.outcomes:
            raise EmptySpace("an outcome space needs at least one outcome")
        seen = set()
        for label in self.outcomes:
            if label in seen:
                raise DuplicateLabel(label)
            seen.add(label)
        if not self.display_labels:
            object.__setattr__(self, "display_labels", tuple(self.outcomes))
        elif len(self.display_labels) != len(self.outcomes):
            raise ValueError("display_labels must match outcomes one-to-one")

    def __len__(self) -> int:
        return len(self.outcomes)

    def __iter__(self):
        return iter(self.outcomes)

    def __contains__(self, label) -> bool:
        return label in self._positions

    @cached_property
    def _positions(self) -> dict[str, int]:
        return {o: i for i, o in enumerate(self.outcomes)}

    def index(self, label: str) -> int:
        try:
            return self._positions[label]
        except KeyError:
            raise UnknownOutcome(label) from None

    def same_order(self, other: "OutcomeSpace") -> bool:
        return self.outcomes == other.outcomes


def make_outcome_space(labels: Iterable[str], display_labels: Iterable[str] | None = None) -> OutcomeSpace:
    labels = tuple(labels)
    return OutcomeSpace(labels, tuple(display_labels) if display_labels is not None else ())


def check_same_space(a: OutcomeSpace, b: OutcomeSpace) -> None:
    if not a.same_order(b):
        raise SpaceMismatch(f"outcome spaces differ: {a.outcomes} vs {b.outcomes}")


@dataclass(frozen=True)
class Marginal:
    """Distribution of one treatment's potential outcome.

    ``probs`` is aligned with ``space.outcomes``.
    """

    space: OutcomeSpace
    probs: tuple[Fraction, ...]

    def __post_init__(self):
        if len(self.probs) != len(self.space):
            raise ValueError("probs must have one entry per outcome")
        probs = tuple(Fraction(p) for p in self.probs)
        object.__setattr__(self, "probs", probs)
        for label, p in zip(self.space.outcomes, probs):
            if p < 0:
                raise NegativeMass(label, p)
        total = sum(probs, Fraction(0))
        if total != 1:
            raise MassNotOne(total)

    def __getitem__(self, label: str) -> Fraction:
        return self.probs[self.space.index(label)]

    @property
    def mass(self) -> dict[str, Fraction]:
        return dict(zip(self.space.outcomes, self.probs))

    @property
    def support(self) -> tuple[int, ...]:
        """Indices of outcomes with positive mass, in order."""
        return tuple(i for i, p in enumerate(self.probs) if p > 0)

    def cdf(self) -> tuple[Fraction, ...]:
        out, acc = [], Fraction(0)
        for p in self.probs:
            acc += p
            out.append(acc)
        return tuple(out)


def make_marginal(space: OutcomeSpace, mass: Mapping[str, RationalLike]) -> Marginal:
    """Build a marginal from a sparse ``label -> rational`` map.

    Outcomes not mentioned get mass 0.
    """
    probs = [Fraction(0)] * len(space)
    for label, raw in mass.items():
        if label not in space:
            raise UnknownOutcome(label)
        probs[space.index(label)] = parse_rational(raw, where=label)
    return Marginal(space, tuple(probs))


def point_mass(space: OutcomeSpace, label: str) -> Marginal:
    return make_marginal(space, {label: 1})


@dataclass(frozen=True)
class Utility:
    """Order-preserving map from outcomes to rationals (ties allowed)."""

    space: OutcomeSpace
    values: tuple[Fraction, ...]

    def __post_init__(self):
        if len(self.values) != len(self.space):
            raise ValueError("values must have one entry per outcome")
        values = tuple(Fraction(v) for v in self.values)
        object.__setattr__(self, "values", values)
        for i in range(len(values) - 1):
            if values[i] > values[i + 1]:
                raise NotOrderPreserving(self.space.outcomes[i], self.space.outcomes[i + 1])

    def __getitem__(self, label: str) -> Fraction:
        return self.values[self.space.index(label)]

    def affine(self, scale: Fraction, shift: Fraction) -> "Utility":
        if scale <= 0:
            raise ValueError("scale must be positive to preserve order")
        return Utility(self.space, tuple(scale * v + shift for v in self.values))


def make_utility(space: OutcomeSpace, values: Mapping[str, RationalLike]) -> Utility:
    for label in values:
        if label not in space:
            raise UnknownOutcome(label)
    out = []
    for label in space.outcomes:
        if label not in values:
            raise MissingOutcome(label)
        out.append(parse_rational(values[label], where=label))
    return Utility(space, tuple(out))


def rank_utility(space: OutcomeSpace) -> Utility:
    """Utility equal to the 1-based position of each outcome."""
    return Utility(space, tuple(Fraction(i + 1) for i in range(len(space))))


@dataclass(frozen=True)
class Scenario:
    space: OutcomeSpace
    treatments: Mapping[str, Marginal]
    utilities: Mapping[str, Utility] = field(default_factory=dict)
    standard_of_care: str | None = None
    labels: Mapping[str, str] = field(default_factory=dict)

    @property
    def treatment_ids(self) -> tuple[str, ...]:
        return tuple(self.treatments)

    def marginal(self, treatment: str) -> Marginal:
        try:
            return self.treatments[treatment]
        except KeyError:
            raise UnknownTreatment(treatment) from None

    def utility(self, utility_id: str) -> Utility:
        try:
            return self.utilities[utility_id]
        except KeyError:
            raise UnknownUtility(utility_id) from None


@dataclass(frozen=True)
class Finding:
    code: str
    where: str
    message: str

    def __str__(self) -> str:
        return f"{self.code} {self.where}: {self.message}"


def validate_scenario(scenario: Scenario) -> list[Finding]:
    """Check every scenario invariant; an empty list means valid.

    Findings come back in a fixed order: treatments (scenario order), then
    utilities, then the standard of care.
    """
    findings: list[Finding] = []
    space = scenario.space
    for tid, m in scenario.treatments.items():
        where = f"treatment {tid}"
        if not m.space.same_order(space):
            findings.append(Finding("SpaceMismatch", where, "marginal uses a different outcome space"))
            continue
        if any(p < 0 for p in m.probs):
            findings.append(Finding("NegativeMass", where, "negative probability"))
        total = sum(m.probs, Fraction(0))
        if total != 1:
            findings.append(Finding("MassNotOne", where, f"masses sum to {render_rational(total)}"))
    for uid, u in scenario.utilities.items():
        where = f"utility {uid}"
        if not u.space.same_order(space):
            findings.append(Finding("SpaceMismatch", where, "utility uses a different outcome space"))
            continue
        for i in range(len(u.values) - 1):
            if u.values[i] > u.values[i + 1]:
                findings.append(
                    Finding(
                        "NotOrderPreserving",
                        where,
                        f"{space.outcomes[i]} valued above {space.outcomes[i + 1]}",
                    )
                )
    soc = scenario.standard_of_care
    if soc is not None and soc not in scenario.treatments:
        findings.append(Finding("UnknownTreatment", "standard_of_care", f"{soc!r} is not a treatment"))
    return findings
