"""Treatment-switch verdicts: weighted counterfactual rule and interventionist rule."""
from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

from .bounds import IntervalBound, objective_bounds
from .core import Marginal, RationalLike, Utility, check_same_space, parse_rational
from .errors import NegativeWeight


class Decision(enum.Enum):
    RECOMMEND_NEW = "RecommendNew"
    RECOMMEND_REF = "RecommendRef"
    INCONCLUSIVE = "Inconclusive"

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class WeightedRule:
    """Rule ``P(benefit) - w * P(harm) >= 0``.

    Build from a gain/loss pair with :meth:`from_gain_loss` (which requires
    ``0 < gain <= loss``) or give ``w`` directly. Any ``w >= 0`` is accepted;
    ``w < 1`` sets :attr:`below_unit_weight`.
    """

    w: Fraction
    gain: Fraction | None = None
    loss: Fraction | None = None

    def __post_init__(self):
        w = parse_rational(self.w)
        if w < 0:
            raise NegativeWeight(f"weight must be nonnegative, got {w}")
        object.__setattr__(self, "w", w)

    @classmethod
    def from_gain_loss(cls, gain: RationalLike, loss: RationalLike) -> "WeightedRule":
        gain, loss = parse_rational(gain), parse_rational(loss)
        if not 0 < gain <= loss:
            raise ValueError(f"need 0 < gain <= loss, got gain={gain}, loss={loss}")
        return cls(loss / gain, gain, loss)

    @property
    def below_unit_weight(self) -> bool:
        return self.w < 1

    @property
    def flags(self) -> tuple[str, ...]:
        return ("w_below_one",) if self.below_unit_weight else ()


Evidence = Union[IntervalBound, Fraction]


@dataclass(frozen=True)
class Verdict:
    decision: Decision
    evidence: Evidence
    flags: tuple[str, ...] = ()

    @property
    def recommends_new(self) -> bool:
        return self.decision is Decision.RECOMMEND_NEW


def counterfactual_verdict(new: Marginal, ref: Marginal, rule: WeightedRule) -> Verdict:
    interval = objective_bounds(new, ref, rule.w)
    if interval.lo >= 0:
        decision = Decision.RECOMMEND_NEW
    elif interval.hi < 0:
        decision = Decision.RECOMMEND_REF
    else:
        decision = Decision.INCONCLUSIVE
    return Verdict(decision, interval, rule.flags)


def expected_utility(m: Marginal, utility: Utility) -> Fraction:
    check_same_space(m.space, utility.space)
    return sum((p * u for p, u in zip(m.probs, utility.values)), Fraction(0))


def interventionist_verdict(new: Marginal, ref: Marginal, utility: Utility) -> Verdict:
    """Point-identified rule: switch iff E[u(new)] >= E[u(ref)].

    The evidence is the exact difference E[u(new)] - E[u(ref)]; an exact tie
    recommends the new treatment.
    """
    check_same_space(new.space, ref.space)
    diff = expected_utility(new, utility) - expected_utility(ref, utility)
    decision = Decision.RECOMMEND_NEW if diff >= 0 else Decision.RECOMMEND_REF
    return Verdict(decision, diff)


def benefit_threshold(rule: WeightedRule) -> Fraction:
    """``w / (1 + w)``: the benefit level the weighted rule needs when ties are impossible.

    Diagnostic only; :func:`counterfactual_verdict` never uses it.
    """
    return rule.w / (1 + rule.w)
