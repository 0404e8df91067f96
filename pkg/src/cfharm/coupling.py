"""Two-way couplings of a reference and a new treatment's potential outcomes.

Rows index the reference outcome, columns the new treatment's outcome, both
in outcome-space order.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, NamedTuple

from .core import Marginal, RationalLike, check_same_space, parse_rational, render_rational
from .errors import MarginalMismatch, MassNotOne, NegativeMass, UnknownOutcome

Cells = tuple[tuple[Fraction, ...], ...]


class CouplingStats(NamedTuple):
    benefit: Fraction
    harm: Fraction
    tie: Fraction


@dataclass(frozen=True)
class Coupling:
    ref: Marginal
    new: Marginal
    cells: Cells

    def __post_init__(self):
        check_same_space(self.ref.space, self.new.space)
        k = len(self.ref.space)
        cells = tuple(tuple(Fraction(x) for x in row) for row in self.cells)
        if len(cells) != k or any(len(row) != k for row in cells):
            raise ValueError(f"cells must be a {k}x{k} matrix")
        object.__setattr__(self, "cells", cells)
        _check_cells(self.ref, self.new, cells)

    @property
    def space(self):
        return self.ref.space

    def __getitem__(self, key: tuple[str, str]) -> Fraction:
        r, c = key
        return self.cells[self.space.index(r)][self.space.index(c)]

    def nonzero(self) -> dict[tuple[str, str], Fraction]:
        names = self.space.outcomes
        return {
            (names[i], names[j]): q
            for i, row in enumerate(self.cells)
            for j, q in enumerate(row)
            if q != 0
        }

    def as_strings(self) -> dict[str, str]:
        return {f"{r}->{c}": render_rational(q) for (r, c), q in self.nonzero().items()}


def _check_cells(ref: Marginal, new: Marginal, cells: Cells) -> None:
    names = ref.space.outcomes
    for i, row in enumerate(cells):
        for j, q in enumerate(row):
            if q < 0:
                raise NegativeMass(f"{names[i]}->{names[j]}", q)
    total = sum((sum(row, Fraction(0)) for row in cells), Fraction(0))
    if total != 1:
        raise MassNotOne(total)
    for i, row in enumerate(cells):
        s = sum(row, Fraction(0))
        if s != ref.probs[i]:
            raise MarginalMismatch("row", names[i], ref.probs[i], s)
    for j in range(len(names)):
        s = sum((row[j] for row in cells), Fraction(0))
        if s != new.probs[j]:
            raise MarginalMismatch("column", names[j], new.probs[j], s)


def make_coupling(
    ref: Marginal, new: Marginal, cells: Mapping[tuple[str, str], RationalLike]
) -> Coupling:
    """Build a coupling from sparse ``(ref outcome, new outcome) -> mass`` cells."""
    check_same_space(ref.space, new.space)
    space = ref.space
    k = len(space)
    grid = [[Fraction(0)] * k for _ in range(k)]
    for (r, c), raw in cells.items():
        for label in (r, c):
            if label not in space:
                raise UnknownOutcome(label)
        grid[space.index(r)][space.index(c)] += parse_rational(raw, where=f"{r}->{c}")
    return Coupling(ref, new, tuple(tuple(row) for row in grid))


def coupling_stats(c: Coupling) -> CouplingStats:
    benefit = harm = tie = Fraction(0)
    for i, row in enumerate(c.cells):
        for j, q in enumerate(row):
            if j > i:
                benefit += q
            elif j < i:
                harm += q
            else:
                tie += q
    return CouplingStats(benefit, harm, tie)


def _corner_rule(ref: Marginal, new: Marginal, col_order: list[int]) -> Coupling:
    """Greedy north-west corner fill with rows ascending, columns in ``col_order``."""
    k = len(ref.space)
    grid = [[Fraction(0)] * k for _ in range(k)]
    rows = [i for i in range(k) if ref.probs[i] > 0]
    cols = [j for j in col_order if new.probs[j] > 0]
    a = {i: ref.probs[i] for i in rows}
    b = {j: new.probs[j] for j in cols}
    ri = ci = 0
    while ri < len(rows) and ci < len(cols):
        i, j = rows[ri], cols[ci]
        x = min(a[i], b[j])
        grid[i][j] = x
        a[i] -= x
        b[j] -= x
        if a[i] == 0:
            ri += 1
        if b[j] == 0:
            ci += 1
    return Coupling(ref, new, tuple(tuple(row) for row in grid))


def comonotone_coupling(ref: Marginal, new: Marginal) -> Coupling:
    """Quantile coupling: the i-th quantile of ``ref`` meets the i-th of ``new``."""
    check_same_space(ref.space, new.space)
    return _corner_rule(ref, new, list(range(len(ref.space))))


def antimonotone_coupling(ref: Marginal, new: Marginal) -> Coupling:
    """Pair ``ref`` ascending with ``new`` descending."""
    check_same_space(ref.space, new.space)
    return _corner_rule(ref, new, list(reversed(range(len(ref.space)))))


def diagonal_coupling(m: Marginal) -> Coupling:
    k = len(m.space)
    grid = tuple(tuple(m.probs[i] if i == j else Fraction(0) for j in range(k)) for i in range(k))
    return Coupling(m, m, grid)
