"""Exception types raised by cfharm.

Every error derives from :class:`HarmError` (itself a ``ValueError``) so callers
can catch the whole family at once. Errors that carry data expose it as
attributes as well as in the message.
"""
from __future__ import annotations

from fractions import Fraction


class HarmError(ValueError):
    """Base class for all cfharm errors."""


class ParseError(HarmError):
    def __init__(self, message: str, where: str | None = None):
        self.where = where
        super().__init__(f"{where}: {message}" if where else message)


class EmptySpace(HarmError):
    pass


class DuplicateLabel(HarmError):
    def __init__(self, label: str):
        self.label = label
        super().__init__(f"duplicate outcome label {label!r}")


class UnknownOutcome(HarmError):
    def __init__(self, label: str):
        self.label = label
        super().__init__(f"unknown outcome {label!r}")


class MissingOutcome(HarmError):
    def __init__(self, label: str):
        self.label = label
        super().__init__(f"no value given for outcome {label!r}")


class NegativeMass(HarmError):
    def __init__(self, label: str, value: Fraction):
        self.label = label
        self.value = value
        super().__init__(f"negative mass {value} on {label!r}")


class MassNotOne(HarmError):
    def __init__(self, actual: Fraction):
        self.actual = actual
        super().__init__(f"masses sum to {actual}, expected 1")


class NotOrderPreserving(HarmError):
    def __init__(self, worse: str, better: str):
        self.pair = (worse, better)
        super().__init__(f"utility of {worse!r} exceeds utility of better outcome {better!r}")


class SpaceMismatch(HarmError):
    pass


class NegativeWeight(HarmError):
    pass


class NotTwoPoint(HarmError):
    pass


class TooLarge(HarmError):
    def __init__(self, limit: int, shape: tuple[int, int]):
        self.limit = limit
        self.shape = shape
        super().__init__(f"support {shape[0]}x{shape[1]} exceeds oracle limit {limit}")


class UnknownTreatment(HarmError):
    def __init__(self, treatment: str):
        self.treatment = treatment
        super().__init__(f"unknown treatment {treatment!r}")


class UnknownUtility(HarmError):
    def __init__(self, utility: str):
        self.utility = utility
        super().__init__(f"unknown utility {utility!r}")


class TooFewTreatments(HarmError):
    pass


class InvalidTarget(HarmError):
    pass


class DegenerateRange(HarmError):
    pass


class MarginalMismatch(HarmError):
    def __init__(self, axis: str, outcome: str, expected: Fraction, actual: Fraction):
        self.axis = axis
        self.outcome = outcome
        self.expected = expected
        self.actual = actual
        super().__init__(
            f"{axis} marginal mismatch at {outcome!r}: cells give {actual}, marginal is {expected}"
        )


class InvalidScenario(HarmError):
    def __init__(self, findings):
        self.findings = list(findings)
        super().__init__("; ".join(str(f) for f in self.findings) or "invalid scenario")
