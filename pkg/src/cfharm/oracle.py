"""Brute-force bound oracle by transportation-polytope vertex enumeration.

Used to cross-check :mod:`cfharm.transport`; it shares no code with it.

Every vertex of the transportation polytope has a forest as its support
graph, so some row or column carries a single positive cell, whose value is
``min(a_i, b_j)``. Filling that cell, deleting the saturated line and
recursing therefore reaches every vertex. The recursion is memoized on the
remaining mass vectors.
"""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from typing import Callable

from .core import Marginal, check_same_space
from .errors import TooLarge

DEFAULT_LIMIT = 6


def enumerate_extremes(row_mass, col_mass, reward: Callable[[int, int], Fraction]):
    """Return ``((lo, lo_cells), (hi, hi_cells))`` over all polytope vertices.

    ``*_cells`` are tuples of ``(i, j, mass)`` with positive mass.
    """
    rows = tuple(i for i, p in enumerate(row_mass) if p > 0)
    cols = tuple(j for j, p in enumerate(col_mass) if p > 0)
    r = {(i, j): Fraction(reward(i, j)) for i in rows for j in cols}

    @lru_cache(maxsize=None)
    def best(a: tuple, b: tuple):
        if all(x == 0 for x in a):
            return (Fraction(0), ()), (Fraction(0), ())
        lo = hi = None
        for ia, i in enumerate(rows):
            if a[ia] == 0:
                continue
            for jb, j in enumerate(cols):
                if b[jb] == 0:
                    continue
                x = min(a[ia], b[jb])
                na = a[:ia] + (a[ia] - x,) + a[ia + 1 :]
                nb = b[:jb] + (b[jb] - x,) + b[jb + 1 :]
                (slo, clo), (shi, chi) = best(na, nb)
                gain = r[(i, j)] * x
                if lo is None or gain + slo < lo[0]:
                    lo = (gain + slo, ((i, j, x),) + clo)
                if hi is None or gain + shi > hi[0]:
                    hi = (gain + shi, ((i, j, x),) + chi)
        return lo, hi

    start_a = tuple(Fraction(row_mass[i]) for i in rows)
    start_b = tuple(Fraction(col_mass[j]) for j in cols)
    return best(start_a, start_b)


def oracle_bounds(new: Marginal, ref: Marginal, reward, limit: int = DEFAULT_LIMIT):
    """Exact min/max of ``reward`` over couplings of ``ref`` (rows) and ``new`` (columns).

    ``reward`` is a callable ``(row_index, col_index) -> rational``. Returns an
    :class:`~cfharm.bounds.IntervalBound` with witness couplings.
    """
    from .bounds import IntervalBound
    from .coupling import Coupling

    check_same_space(new.space, ref.space)
    shape = (len(ref.support), len(new.support))
    if max(shape) > limit:
        raise TooLarge(limit, shape)
    (lo, lo_cells), (hi, hi_cells) = enumerate_extremes(ref.probs, new.probs, reward)

    k = len(ref.space)

    def materialize(cells):
        grid = [[Fraction(0)] * k for _ in range(k)]
        for i, j, x in cells:
            grid[i][j] += x
        return Coupling(ref, new, tuple(tuple(row) for row in grid))

    return IntervalBound(lo, hi, materialize(lo_cells), materialize(hi_cells))
