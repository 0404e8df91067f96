"""Exact transportation solver.

Optimizes a linear reward over all couplings of two marginals. Masses are
scaled to integers by their common denominator and the problem is solved as a
min-cost flow by successive shortest augmenting paths on the bipartite support
graph. All arithmetic is on Python ints, so results are exact.

Among optimal couplings the solver returns the lexicographically smallest one
in (row, column) cell order. That is folded into the cost: each cell gets a
secondary cost ``B**(N-1-k)`` (cell rank ``k``, ``B`` larger than any integer
cell value), and the primary reward is scaled above the whole secondary range.
"""
from __future__ import annotations

from collections import deque
from fractions import Fraction
from math import lcm
from typing import Callable, Sequence

Reward = Callable[[int, int], Fraction]


def _common_denominator(values) -> int:
    d = 1
    for v in values:
        d = lcm(d, Fraction(v).denominator)
    return d


class _Graph:
    __slots__ = ("n", "head", "to", "cap", "cost", "nxt")

    def __init__(self, n: int):
        self.n = n
        self.head = [-1] * n
        self.to: list[int] = []
        self.cap: list[int] = []
        self.cost: list[int] = []
        self.nxt: list[int] = []

    def add(self, u: int, v: int, cap: int, cost: int) -> int:
        idx = len(self.to)
        for a, b, c, w in ((u, v, cap, cost), (v, u, 0, -cost)):
            self.to.append(b)
            self.cap.append(c)
            self.cost.append(w)
            self.nxt.append(self.head[a])
            self.head[a] = len(self.to) - 1
        return idx


def _min_cost_flow(g: _Graph, s: int, t: int, need: int) -> None:
    """Push ``need`` units from s to t along successive shortest paths (SPFA)."""
    pushed = 0
    while pushed < need:
        dist = [None] * g.n
        parent = [-1] * g.n
        in_queue = [False] * g.n
        dist[s] = 0
        queue = deque([s])
        while queue:
            u = queue.popleft()
            in_queue[u] = False
            e = g.head[u]
            du = dist[u]
            while e != -1:
                if g.cap[e] > 0:
                    v = g.to[e]
                    nd = du + g.cost[e]
                    if dist[v] is None or nd < dist[v]:
                        dist[v] = nd
                        parent[v] = e
                        if not in_queue[v]:
                            in_queue[v] = True
                            queue.append(v)
                e = g.nxt[e]
        if dist[t] is None:
            raise RuntimeError("transport problem infeasible; marginals must have equal mass")
        amount = need - pushed
        v = t
        while v != s:
            e = parent[v]
            amount = min(amount, g.cap[e])
            v = g.to[e ^ 1]
        v = t
        while v != s:
            e = parent[v]
            g.cap[e] -= amount
            g.cap[e ^ 1] += amount
            v = g.to[e ^ 1]
        pushed += amount


def solve_transport(
    row_mass: Sequence[Fraction],
    col_mass: Sequence[Fraction],
    reward: Reward,
    maximize: bool,
) -> tuple[Fraction, list[list[Fraction]]]:
    """Optimize ``sum reward(i, j) * q[i][j]`` over couplings of the two mass vectors.

    Returns the optimal value and the full (zero-padded) optimal coupling.
    Zero-mass rows and columns are dropped before solving.
    """
    rows = [i for i, p in enumerate(row_mass) if p > 0]
    cols = [j for j, p in enumerate(col_mass) if p > 0]
    full = [[Fraction(0)] * len(col_mass) for _ in row_mass]
    if not rows:
        return Fraction(0), full

    scale = _common_denominator(list(row_mass) + list(col_mass))
    supply = [int(row_mass[i] * scale) for i in rows]
    demand = [int(col_mass[j] * scale) for j in cols]

    rewards = {(i, j): Fraction(reward(i, j)) for i in rows for j in cols}
    rscale = _common_denominator(rewards.values())
    sign = -1 if maximize else 1
    primary = {key: sign * int(v * rscale) for key, v in rewards.items()}

    n_cells = len(rows) * len(cols)
    base = scale + 1
    big = base**n_cells

    r, c = len(rows), len(cols)
    src, sink = r + c, r + c + 1
    g = _Graph(r + c + 2)
    for a, i in enumerate(rows):
        g.add(src, a, supply[a], 0)
    for b, j in enumerate(cols):
        g.add(r + b, sink, demand[b], 0)
    arcs = {}
    rank = 0
    for a, i in enumerate(rows):
        for b, j in enumerate(cols):
            lex = base ** (n_cells - 1 - rank)
            arcs[(i, j)] = g.add(a, r + b, scale, primary[(i, j)] * big + lex)
            rank += 1

    _min_cost_flow(g, src, sink, scale)

    value = Fraction(0)
    for (i, j), e in arcs.items():
        flow = g.cap[e ^ 1]
        if flow:
            q = Fraction(flow, scale)
            full[i][j] = q
            value += rewards[(i, j)] * q
    return value, full
