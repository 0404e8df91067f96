"""Seeded finite-population sampling and two-arm trial simulation.

Randomness comes only from SplitMix64 (Steele, Lea and Flood 2014):

    state_i = seed + (i + 1) * 0x9E3779B97F4A7C15   (mod 2**64)
    z = (state_i ^ (state_i >> 30)) * 0xBF58476D1CE4E5B9
    z = (z ^ (z >> 27)) * 0x94D049BB133111EB
    out_i = z ^ (z >> 31)

``out_i`` depends only on ``(seed, i)``, so any sharding of individuals gives
the same draws. A draw picks a joint cell by comparing ``out_i >> 11`` (a
53-bit integer) with integer cumulative thresholds, with no floating point.
Arm assignment uses the top bit of a second stream seeded with
``mix(seed ^ ARM_STREAM)``.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import ceil

import numpy as np

from .core import Marginal
from .joint import MultiwayJoint

GENERATOR = "splitmix64"
MASK64 = (1 << 64) - 1
GOLDEN = 0x9E3779B97F4A7C15
MIX1 = 0xBF58476D1CE4E5B9
MIX2 = 0x94D049BB133111EB
ARM_STREAM = 0x5243545F41524D53  # b"RCT_ARMS"
UNIT_BITS = 53


def mix64(z: int) -> int:
    z &= MASK64
    z = ((z ^ (z >> 30)) * MIX1) & MASK64
    z = ((z ^ (z >> 27)) * MIX2) & MASK64
    return z ^ (z >> 31)


def splitmix64(seed: int, index: int) -> int:
    """The ``index``-th output (0-based) of SplitMix64 started from ``seed``."""
    return mix64(seed + (index + 1) * GOLDEN)


def splitmix64_block(seed: int, start: int, count: int) -> np.ndarray:
    """Outputs ``start .. start+count-1`` as a uint64 array."""
    idx = np.arange(start + 1, start + count + 1, dtype=np.uint64)
    z = np.uint64(seed & MASK64) + idx * np.uint64(GOLDEN)
    z = (z ^ (z >> np.uint64(30))) * np.uint64(MIX1)
    z = (z ^ (z >> np.uint64(27))) * np.uint64(MIX2)
    return z ^ (z >> np.uint64(31))


@dataclass(frozen=True, eq=False)
class Population:
    """``n`` individuals, each a tuple of potential outcomes (one per treatment)."""

    joint: MultiwayJoint
    seed: int
    cell_index: np.ndarray
    generator: str = GENERATOR

    def __len__(self) -> int:
        return len(self.cell_index)

    @property
    def individuals(self) -> list[tuple[str, ...]]:
        cells = self.joint.cells
        return [cells[k][0] for k in self.cell_index.tolist()]

    def cell_counts(self) -> list[int]:
        return np.bincount(self.cell_index, minlength=len(self.joint.cells)).tolist()

    def outcome_positions(self, treatment: str) -> np.ndarray:
        ax = self.joint.axis(treatment)
        space = self.joint.scenario.space
        lookup = np.array([space.index(o[ax]) for o, _ in self.joint.cells], dtype=np.int64)
        return lookup[self.cell_index]

    def empirical_benefit(self, ref: str, new: str) -> Fraction:
        """Share of individuals with a strictly better outcome under ``new``."""
        better = self.outcome_positions(new) > self.outcome_positions(ref)
        return Fraction(int(better.sum()), len(self))


def _thresholds(joint: MultiwayJoint) -> np.ndarray:
    scale = 1 << UNIT_BITS
    out, acc = [], Fraction(0)
    for _, p in joint.cells:
        acc += p
        out.append(ceil(acc * scale))
    return np.array(out, dtype=np.uint64)


def sample_population(joint: MultiwayJoint, n: int, seed: int, chunk: int = 1 << 20) -> Population:
    if n < 1:
        raise ValueError(f"population size must be positive, got {n}")
    thresholds = _thresholds(joint)
    parts = []
    for start in range(0, n, chunk):
        count = min(chunk, n - start)
        r = splitmix64_block(seed, start, count) >> np.uint64(64 - UNIT_BITS)
        parts.append(np.searchsorted(thresholds, r, side="right"))
    return Population(joint, seed, np.concatenate(parts).astype(np.int64))


@dataclass(frozen=True)
class TrialResult:
    arms: tuple[str, str]
    sizes: tuple[int, int]
    marginals: tuple[Marginal | None, Marginal | None]
    counts: tuple[tuple[int, ...], tuple[int, ...]]
    seed: int
    generator: str = GENERATOR


def simulate_rct(pop: Population, arm_a: str, arm_b: str, seed: int) -> TrialResult:
    """Fair coin per individual; observe the potential outcome of the assigned arm.

    Empirical marginals are exact count ratios; an empty arm gives ``None``.
    """
    if arm_a == arm_b:
        raise ValueError("arms must be distinct treatments")
    pos_a = pop.outcome_positions(arm_a)
    pos_b = pop.outcome_positions(arm_b)
    coins = splitmix64_block(mix64(seed ^ ARM_STREAM), 0, len(pop)) >> np.uint64(63)
    to_b = coins.astype(bool)
    space = pop.joint.scenario.space
    k = len(space)
    results = []
    for observed in (pos_a[~to_b], pos_b[to_b]):
        counts = tuple(np.bincount(observed, minlength=k).tolist())
        size = int(observed.size)
        marginal = Marginal(space, tuple(Fraction(c, size) for c in counts)) if size else None
        results.append((size, marginal, counts))
    (na, ma, ca), (nb, mb, cb) = results
    return TrialResult((arm_a, arm_b), (na, nb), (ma, mb), (ca, cb), seed)
