"""Length-weighted permutation sorting models.

Three restricted-operation models over permutations of {1..n}, each charged
by the span of the interval it touches: contiguous reversals, non-contiguous
subsequence reversals, and non-crossing swap sets.  Positions are 1-based as
in the model definitions; the fan operations in labelsort use 0-based fan
positions and flip_cost_of_swap_set converts.
"""

from __future__ import annotations

import io
import math
from dataclasses import dataclass, field

from .errors import CrossingPairs, OutOfRange


@dataclass(frozen=True)
class Permutation:
    values: tuple[int, ...]

    def __post_init__(self):
        vals = tuple(int(v) for v in self.values)
        object.__setattr__(self, "values", vals)
        if sorted(vals) != list(range(1, len(vals) + 1)):
            raise ValueError("values must be a permutation of 1..n")

    @property
    def n(self) -> int:
        return len(self.values)

    def is_sorted(self) -> bool:
        return all(v == i + 1 for i, v in enumerate(self.values))

    @classmethod
    def identity(cls, n: int) -> "Permutation":
        return cls(tuple(range(1, n + 1)))


class CostLedger:
    """Span-cost accounting: one (kind, span) entry per operation."""

    def __init__(self):
        self.operations: list[tuple[str, int]] = []

    def charge(self, kind: str, span: int) -> None:
        self.operations.append((kind, int(span)))

    @property
    def total(self) -> int:
        return sum(span for _, span in self.operations)

    def extend(self, other: "CostLedger") -> None:
        self.operations.extend(other.operations)

    def to_csv(self) -> str:
        out = io.StringIO()
        out.write("kind,span,cumulative\n")
        cum = 0
        for kind, span in self.operations:
            cum += span
            out.write(f"{kind},{span},{cum}\n")
        return out.getvalue()

    def __repr__(self):
        return f"CostLedger(total={self.total}, operations={len(self.operations)})"


@dataclass(frozen=True)
class NoncontiguousBlock:
    """Interval [i..j] (1-based, inclusive) plus selected positions inside it."""

    i: int
    j: int
    subsequence: tuple[int, ...] = field(default=())

    def __post_init__(self):
        object.__setattr__(self, "subsequence", tuple(int(p) for p in self.subsequence))
        if self.i > self.j or self.i < 1:
            raise OutOfRange(f"bad interval [{self.i}..{self.j}]")
        prev = None
        for p in self.subsequence:
            if not (self.i <= p <= self.j):
                raise OutOfRange(f"position {p} outside [{self.i}..{self.j}]")
            if prev is not None and p <= prev:
                raise OutOfRange("subsequence must be strictly increasing")
            prev = p

    @property
    def span(self) -> int:
        return self.j - self.i


@dataclass(frozen=True)
class SwapSet:
    """Pairs to swap simultaneously inside [i..j]; pairs nest or are disjoint."""

    interval: tuple[int, int]
    pairs: tuple[tuple[int, int], ...]

    def __post_init__(self):
        i, j = self.interval
        pairs = tuple((int(a), int(b)) for a, b in self.pairs)
        object.__setattr__(self, "interval", (int(i), int(j)))
        object.__setattr__(self, "pairs", pairs)
        if i > j or i < 1:
            raise OutOfRange(f"bad interval [{i}..{j}]")
        seen: set[int] = set()
        for a, b in pairs:
            if not (i <= a < b <= j):
                raise OutOfRange(f"pair ({a},{b}) outside [{i}..{j}]")
            if a in seen or b in seen:
                raise CrossingPairs("pairs must have disjoint endpoints")
            seen.update((a, b))
        for x in range(len(pairs)):
            for y in range(len(pairs)):
                if x != y:
                    ax, bx = pairs[x]
                    ay, by = pairs[y]
                    if ax < ay < bx < by:
                        raise CrossingPairs(f"pairs {pairs[x]} and {pairs[y]} cross")

    @property
    def span(self) -> int:
        return self.interval[1] - self.interval[0]


def apply_contiguous_reversal(p: Permutation, i: int, j: int,
                              ledger: CostLedger | None = None) -> Permutation:
    """Reverse positions i..j (1-based); charged j-i."""
    if not (1 <= i < j <= p.n):
        raise OutOfRange(f"interval [{i}..{j}] invalid for n={p.n}")
    vals = list(p.values)
    vals[i - 1 : j] = vals[i - 1 : j][::-1]
    if ledger is not None:
        ledger.charge("contiguous-reversal", j - i)
    return Permutation(tuple(vals))


def apply_noncontiguous_reversal(p: Permutation, block: NoncontiguousBlock,
                                 ledger: CostLedger | None = None) -> Permutation:
    """Reverse the values at the selected positions; charged the interval span."""
    if block.j > p.n:
        raise OutOfRange(f"interval [{block.i}..{block.j}] invalid for n={p.n}")
    vals = list(p.values)
    picked = [vals[q - 1] for q in block.subsequence]
    for q, v in zip(block.subsequence, reversed(picked)):
        vals[q - 1] = v
    if ledger is not None:
        ledger.charge("noncontiguous-reversal", block.span)
    return Permutation(tuple(vals))


def apply_swap_set(p: Permutation, s: SwapSet,
                   ledger: CostLedger | None = None) -> Permutation:
    """Exchange each pair's values simultaneously; charged the interval span."""
    if s.interval[1] > p.n:
        raise OutOfRange(f"interval {s.interval} invalid for n={p.n}")
    vals = list(p.values)
    for a, b in s.pairs:
        vals[a - 1], vals[b - 1] = vals[b - 1], vals[a - 1]
    if ledger is not None:
        ledger.charge("noncrossing-swaps", s.span)
    return Permutation(tuple(vals))


def contiguous_as_noncontiguous(i: int, j: int) -> NoncontiguousBlock:
    """A contiguous reversal is the full-interval subsequence at equal cost."""
    return NoncontiguousBlock(i, j, tuple(range(i, j + 1)))


def noncontiguous_as_swap_set(block: NoncontiguousBlock) -> SwapSet:
    """Pair outermost-with-outermost: the fully nested swap set at equal cost."""
    s = block.subsequence
    pairs = tuple((s[k], s[len(s) - 1 - k]) for k in range(len(s) // 2))
    return SwapSet((block.i, block.j), pairs)


def quicksort_noncontiguous(p: Permutation) -> tuple[Permutation, CostLedger]:
    """Sort by reversing, per block, the subsequence of misplaced elements.

    Each recursion level charges at most the block span per block, so the
    ledger total is at most n*(ceil(log2 n)+1).
    """
    ledger = CostLedger()
    cur = p

    def rec(lo: int, hi: int, cur: Permutation) -> Permutation:
        size = hi - lo + 1
        if size <= 1:
            return cur
        half = size // 2
        vals = cur.values[lo - 1 : hi]
        small = set(sorted(vals)[:half])
        sel = tuple(
            lo + k for k in range(size)
            if (k < half) != (vals[k] in small)
        )
        if sel:
            cur = apply_noncontiguous_reversal(
                cur, NoncontiguousBlock(lo, hi, sel), ledger)
        cur = rec(lo, lo + half - 1, cur)
        cur = rec(lo + half, hi, cur)
        return cur

    cur = rec(1, p.n, cur)
    assert cur.is_sorted()
    if p.n >= 2:
        assert ledger.total <= p.n * (math.ceil(math.log2(p.n)) + 1)
    return cur, ledger


def flip_cost_of_swap_set(s: SwapSet) -> int:
    """Flip count of the fan simulation of s; at most 9*(span+1)."""
    from . import convex, labelsort

    n = s.interval[1]
    state = convex.fan_state(n + 3, list(range(1, n + 1)))
    pairs0 = [(a - 1, b - 1) for a, b in s.pairs]
    seq = labelsort.apply_noncrossing_swaps(
        state, pairs0, interval=(s.interval[0] - 1, s.interval[1] - 1))
    assert seq.cost <= 9 * (s.span + 1)
    return seq.cost
