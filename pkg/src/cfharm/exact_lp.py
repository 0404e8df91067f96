"""Dense two-phase simplex over Fractions, for small exact LPs.

Solves ``max c.x  s.t.  A x <= b,  x >= 0`` with Bland's rule, so it cannot
cycle. Problem sizes here are a few dozen variables at most.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"


@dataclass(frozen=True)
class LPResult:
    status: str
    x: tuple[Fraction, ...] | None = None
    value: Fraction | None = None


def _pivot(rows: list[list[Fraction]], obj: list[Fraction], basis: list[int], r: int, c: int) -> None:
    prow = rows[r]
    inv = 1 / prow[c]
    rows[r] = prow = [v * inv for v in prow]
    for i, row in enumerate(rows):
        if i != r and row[c] != 0:
            f = row[c]
            rows[i] = [a - f * b for a, b in zip(row, prow)]
    if obj[c] != 0:
        f = obj[c]
        obj[:] = [a - f * b for a, b in zip(obj, prow)]
    basis[r] = c


def _run(rows, obj, basis, allowed: int) -> str:
    """Minimize the objective encoded in ``obj`` (reduced costs, last entry = -value)."""
    while True:
        enter = next((j for j in range(allowed) if obj[j] < 0), None)
        if enter is None:
            return OPTIMAL
        best = None
        for i, row in enumerate(rows):
            if row[enter] > 0:
                ratio = row[-1] / row[enter]
                key = (ratio, basis[i])
                if best is None or key < best[0]:
                    best = (key, i)
        if best is None:
            return UNBOUNDED
        _pivot(rows, obj, basis, best[1], enter)


def _reduced(cost: Sequence[Fraction], rows, basis) -> list[Fraction]:
    obj = list(cost) + [Fraction(0)]
    for i, b in enumerate(basis):
        if obj[b] != 0:
            f = obj[b]
            obj = [a - f * v for a, v in zip(obj, rows[i])]
    return obj


def maximize(c: Sequence, A: Sequence[Sequence], b: Sequence) -> LPResult:
    n, m = len(c), len(A)
    c = [Fraction(v) for v in c]
    A = [[Fraction(v) for v in row] for row in A]
    b = [Fraction(v) for v in b]
    negative = [i for i in range(m) if b[i] < 0]
    n_art = len(negative)
    width = n + m + n_art
    rows, basis = [], []
    for i in range(m):
        row = [Fraction(0)] * (width + 1)
        sign = -1 if b[i] < 0 else 1
        for j in range(n):
            row[j] = sign * A[i][j]
        row[n + i] = Fraction(sign)
        row[-1] = sign * b[i]
        if sign < 0:
            k = n + m + sum(1 for j in basis if j >= n + m)
            row[k] = Fraction(1)
            basis.append(k)
        else:
            basis.append(n + i)
        rows.append(row)

    if n_art:
        phase1 = [Fraction(0)] * (n + m) + [Fraction(1)] * n_art
        obj = _reduced(phase1, rows, basis)
        _run(rows, obj, basis, width)
        if -obj[-1] != 0:
            return LPResult(INFEASIBLE)
        # drive zero-level artificials out of the basis
        for i in range(len(rows) - 1, -1, -1):
            if basis[i] >= n + m:
                col = next((j for j in range(n + m) if rows[i][j] != 0), None)
                if col is None:
                    del rows[i], basis[i]
                else:
                    _pivot(rows, [Fraction(0)] * (width + 1), basis, i, col)
        rows = [row[: n + m] + [row[-1]] for row in rows]

    obj = _reduced([-v for v in c] + [Fraction(0)] * m, rows, basis)
    status = _run(rows, obj, basis, n + m)
    if status == UNBOUNDED:
        return LPResult(UNBOUNDED)
    x = [Fraction(0)] * n
    for i, bv in enumerate(basis):
        if bv < n:
            x[bv] = rows[i][-1]
    value = sum((ci * xi for ci, xi in zip(c, x)), Fraction(0))
    return LPResult(OPTIMAL, tuple(x), value)


def feasible_point(A: Sequence[Sequence], b: Sequence) -> tuple[Fraction, ...] | None:
    """A point of ``{x >= 0 : A x <= b}``, or None when the set is empty."""
    n = len(A[0]) if A else 0
    res = maximize([0] * n, A, b)
    return res.x if res.status == OPTIMAL else None
