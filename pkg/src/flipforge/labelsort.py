"""Label sorting inside the fan.

All operations here keep the triangulation shaped as the fan at vertex 0
(they flip edges out, work in the contracted sub-polygon, and flip them
back) while rearranging the labels.  The workhorse is a 5-flip gadget that
exchanges the labels of two adjacent fan diagonals inside their pentagon.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from . import convex
from .convex import FlipSequence, LabelledState, _Machine
from .errors import InvalidSwapSet, OutOfRange

# Flip script exchanging the labels of the two diagonals of a pentagon
# 0-1-2-3-4 that starts and ends as the fan {(0,2), (0,3)}.  Discovered by
# breadth-first search over the 10 labelled pentagon states (the oracle
# module re-derives it; tests pin the agreement).
PENTAGON_SCRIPT: tuple[tuple[int, int], ...] = (
    (0, 2), (0, 3), (1, 3), (1, 4), (2, 4),
)


@dataclass(frozen=True)
class FanBlock:
    """Inclusive fan-position window [lo..hi] plus selected positions inside it."""

    lo: int
    hi: int
    subsequence: tuple[int, ...] = field(default=())

    def __post_init__(self):
        object.__setattr__(self, "subsequence", tuple(int(p) for p in self.subsequence))
        if self.lo > self.hi or self.lo < 0:
            raise OutOfRange(f"bad window [{self.lo}..{self.hi}]")
        prev = None
        for p in self.subsequence:
            if not (self.lo <= p <= self.hi):
                raise OutOfRange(f"position {p} outside [{self.lo}..{self.hi}]")
            if prev is not None and p <= prev:
                raise OutOfRange("subsequence must be strictly increasing")
            prev = p

    @property
    def span(self) -> int:
        return self.hi - self.lo


def _require_fan(state: LabelledState) -> _Machine:
    t, l = state
    if not t.is_fan(0):
        raise ValueError("state must be the fan at vertex 0")
    l.validate_against(t)
    return _Machine(t, l)


def _apply_pentagon(mac: _Machine, verts: tuple[int, int, int, int, int]) -> None:
    """Run the pentagon script mapped onto five current sub-polygon vertices."""
    for a, b in PENTAGON_SCRIPT:
        mac.flip((min(verts[a], verts[b]), max(verts[a], verts[b])))


def _pentagon_swap_adjacent(mac: _Machine, v1: int, v2: int) -> None:
    """Exchange labels of rim-consecutive fan diagonals (0,v1), (0,v2)."""
    assert mac.rim_next.get(v1) == v2, "fan diagonals are not adjacent"
    verts = (0, mac.rim_prev[v1], v1, v2, mac.rim_next[v2])
    _apply_pentagon(mac, verts)


def _reverse_all_slots(mac: _Machine, sel_slots: list[int]) -> None:
    """Reverse the labels of a full contiguous run of fan diagonals.

    Iterative form of the parking recursion: repeatedly flip out the middle
    edge (odd count) or middle pair (even count), and on the way back flip
    them in again, fixing each restored pair with the pentagon gadget.
    """
    r = len(sel_slots)
    if r <= 1:
        return
    if r == 2:
        _pentagon_swap_adjacent(mac, sel_slots[0], sel_slots[1])
        return
    slots = sel_slots
    unwind: list[tuple] = []
    if r % 2 == 1:
        ear = mac.flip((0, slots[r // 2]))
        unwind.append((ear,))
        i, j = r // 2 - 1, r // 2 + 1
    else:
        e1 = mac.flip((0, slots[r // 2 - 1]))
        e2 = mac.flip((0, slots[r // 2]))
        unwind.append((e1, e2, slots[r // 2 - 1], slots[r // 2]))
        i, j = r // 2 - 2, r // 2 + 1
    # Remaining live selection is slots[:i+1] + slots[j:]; its middle is
    # always at the i/j boundary, longer side first when odd.
    while True:
        size = (i + 1) + (r - j)
        if size <= 2:
            break
        if size % 2 == 1:
            if i + 1 > r - j:
                ear = mac.flip((0, slots[i]))
                i -= 1
            else:
                ear = mac.flip((0, slots[j]))
                j += 1
            unwind.append((ear,))
        else:
            e1 = mac.flip((0, slots[i]))
            e2 = mac.flip((0, slots[j]))
            unwind.append((e1, e2, slots[i], slots[j]))
            i -= 1
            j += 1
    remaining = slots[: i + 1] + slots[j:]
    if len(remaining) == 2:
        _pentagon_swap_adjacent(mac, remaining[0], remaining[1])
    for entry in reversed(unwind):
        if len(entry) == 1:
            mac.flip(entry[0])
        else:
            e1, e2, v1, v2 = entry
            mac.flip(e2)
            mac.flip(e1)
            _pentagon_swap_adjacent(mac, v1, v2)


def _reverse_selected(mac: _Machine, slots: list[int], sel: list[int]) -> None:
    """Reverse the labels at the selected indices of a contiguous slot window.

    Non-selected slots are parked (flipped out) first and restored at the
    end, which contracts the window to the selected run.
    """
    r = len(sel)
    if r <= 1:
        return
    if r < len(slots):
        selset = set(sel)
        parked = [mac.flip((0, v)) for i, v in enumerate(slots) if i not in selset]
        _reverse_all_slots(mac, [slots[i] for i in sel])
        for ear in reversed(parked):
            mac.flip(ear)
        return
    _reverse_all_slots(mac, slots)


def _sort_fan_machine(mac: _Machine, key=None) -> None:
    """Quicksort on the fan labels: reverse the misplaced subsequence, recurse."""
    keyf = key if key is not None else (lambda lbl: lbl)
    slots = mac.rim_list()[1:-1]

    def rec(lo: int, hi: int) -> None:
        size = hi - lo
        if size <= 1:
            return
        half = size // 2
        labels = [mac.labels[(0, slots[i])] for i in range(lo, hi)]
        small = set(sorted(labels, key=keyf)[:half])
        sel = [
            i for i in range(size)
            if (i < half) != (labels[i] in small)
        ]
        left_bad = sum(1 for i in sel if i < half)
        assert 2 * left_bad == len(sel), "misplaced counts must balance"
        if sel:
            _reverse_selected(mac, slots[lo:hi], sel)
        rec(lo, lo + half)
        rec(lo + half, hi)

    rec(0, len(slots))


def pentagon_swap(state: LabelledState, pos: int) -> FlipSequence:
    """Exactly 5 flips exchanging the labels at fan positions pos and pos+1."""
    mac = _require_fan(state)
    n = state[0].n
    if not (0 <= pos and pos + 1 < n):
        raise OutOfRange(f"positions {pos},{pos + 1} need n >= {pos + 2}, have n={n}")
    _pentagon_swap_adjacent(mac, pos + 2, pos + 3)
    return mac.steps_since(0)


def reverse_subsequence(state: LabelledState, block: FanBlock) -> FlipSequence:
    """Reverse the labels at block.subsequence; at most 5*(span+1) flips."""
    mac = _require_fan(state)
    n = state[0].n
    if block.hi >= n:
        raise OutOfRange(f"window [{block.lo}..{block.hi}] exceeds n={n}")
    slots = [p + 2 for p in range(block.lo, block.hi + 1)]
    sel = [p - block.lo for p in block.subsequence]
    _reverse_selected(mac, slots, sel)
    seq = mac.steps_since(0)
    assert seq.cost <= 5 * (block.span + 1)
    return seq


def sort_fan(state: LabelledState) -> FlipSequence:
    """Sort the fan labels ascending; at most 5n(ceil(log2 n)+1) flips."""
    mac = _require_fan(state)
    _sort_fan_machine(mac)
    return mac.steps_since(0)


def _check_noncrossing(pairs: list[tuple[int, int]]) -> None:
    seen: set[int] = set()
    for i, j in pairs:
        if i >= j:
            raise InvalidSwapSet(f"pair ({i},{j}) is not increasing")
        if i in seen or j in seen:
            raise InvalidSwapSet("swap pairs must have disjoint endpoints")
        seen.update((i, j))
    for x in range(len(pairs)):
        for y in range(len(pairs)):
            if x == y:
                continue
            ix, jx = pairs[x]
            iy, jy = pairs[y]
            if ix <= iy <= jx <= jy and (ix, jx) != (iy, jy):
                raise InvalidSwapSet(f"pairs {pairs[x]} and {pairs[y]} cross")


def apply_noncrossing_swaps(
    state: LabelledState,
    pairs: list[tuple[int, int]],
    interval: tuple[int, int] | None = None,
) -> FlipSequence:
    """Exchange the labels of each swapped fan-position pair simultaneously.

    Positions are 0-based fan positions; the pairs must nest or be disjoint.
    Costs at most 9*(span+1) flips where span covers the given interval
    (defaults to the tight hull of the pairs).
    """
    pairs = [(int(i), int(j)) for i, j in pairs]
    _check_noncrossing(pairs)
    mac = _require_fan(state)
    n = state[0].n
    if not pairs:
        return convex.EMPTY_LABELLED
    lo = min(i for i, _ in pairs)
    hi = max(j for _, j in pairs)
    if interval is not None:
        if not (interval[0] <= lo and hi <= interval[1]):
            raise OutOfRange("pairs outside the declared interval")
        lo, hi = interval
    if lo < 0 or hi >= n:
        raise OutOfRange(f"interval [{lo}..{hi}] exceeds n={n}")

    slots = [p + 2 for p in range(lo, hi + 1)]
    local = [(i - lo, j - lo) for i, j in pairs]
    participants = {p for pr in local for p in pr}
    parked = [mac.flip((0, v)) for i, v in enumerate(slots) if i not in participants]

    def rec(remaining: list[tuple[int, int]]) -> None:
        if not remaining:
            return
        inner = min(
            (p for p in remaining
             if not any(q != p and p[0] < q[0] and q[1] < p[1] for q in remaining)),
        )
        rest = [p for p in remaining if p != inner]
        if not rest:
            # everything between the pair is already parked
            _pentagon_swap_adjacent(mac, slots[inner[0]], slots[inner[1]])
            return
        ear_i = mac.flip((0, slots[inner[0]]))
        ear_j = mac.flip((0, slots[inner[1]]))
        rec(rest)
        mac.flip(ear_j)
        mac.flip(ear_i)
        _pentagon_swap_adjacent(mac, slots[inner[0]], slots[inner[1]])

    rec(sorted(local))
    for ear in reversed(parked):
        mac.flip(ear)
    seq = mac.steps_since(0)
    assert seq.cost <= 9 * (hi - lo + 1)
    return seq
