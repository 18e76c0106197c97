"""Edge-labelled triangulations of a convex polygon.

A polygon on m vertices (indexed 0..m-1 counter-clockwise) is triangulated
by a maximal set of m-3 pairwise non-crossing diagonals.  Each diagonal
carries a label from {1..m-3}; a flip moves the label onto the replacing
diagonal.  The canonical triangulation is the fan at vertex 0, whose labels
read left to right (increasing far endpoint) form a permutation.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable, Mapping

from .errors import ParseError, SizeMismatch, UnknownDiagonal

Diagonal = tuple[int, int]


def normalize_diagonal(d) -> Diagonal:
    a, b = d
    return (a, b) if a < b else (b, a)


def diagonals_cross(d: Diagonal, e: Diagonal) -> bool:
    """True iff the two chords cross in the open interior."""
    a, b = d
    c, f = e
    return (a < c < b < f) or (c < a < f < b)


def _validate_diagonals(m: int, diagonals: frozenset[Diagonal]) -> None:
    if m < 3:
        raise ValueError(f"polygon needs at least 3 vertices, got {m}")
    if len(diagonals) != m - 3:
        raise ValueError(f"expected {m - 3} diagonals for m={m}, got {len(diagonals)}")
    for a, b in diagonals:
        if not (0 <= a < b <= m - 1) or b - a < 2 or (a, b) == (0, m - 1):
            raise ValueError(f"({a},{b}) is not a chord of the {m}-gon")
    # Non-crossing via a parenthesis stack: at each vertex close the chords
    # ending here (innermost first), then open the chords starting here.
    opens: dict[int, list[int]] = {}
    closes: dict[int, list[int]] = {}
    for a, b in diagonals:
        opens.setdefault(a, []).append(b)
        closes.setdefault(b, []).append(a)
    stack: list[Diagonal] = []
    for v in range(m):
        for a in sorted(closes.get(v, []), reverse=True):
            if not stack or stack[-1] != (a, v):
                raise ValueError(f"diagonals cross near ({a},{v})")
            stack.pop()
        for b in sorted(opens.get(v, []), reverse=True):
            stack.append((v, b))
    if stack:
        raise ValueError("unmatched diagonal endpoints")


@dataclass(frozen=True)
class ConvexTriangulation:
    """Maximal non-crossing diagonal set of a convex m-gon."""

    m: int
    diagonals: frozenset[Diagonal]

    def __post_init__(self):
        diags = frozenset(normalize_diagonal(d) for d in self.diagonals)
        object.__setattr__(self, "diagonals", diags)
        _validate_diagonals(self.m, diags)

    @classmethod
    def fan(cls, m: int, apex: int = 0) -> "ConvexTriangulation":
        """The triangulation whose diagonals all share the apex vertex."""
        diags = []
        for t in range(m - 3):
            other = (apex + t + 2) % m
            diags.append(normalize_diagonal((apex, other)))
        return cls(m, frozenset(diags))

    def is_fan(self, apex: int = 0) -> bool:
        return all(apex in d for d in self.diagonals)

    @property
    def n(self) -> int:
        """Number of diagonals."""
        return self.m - 3

    def boundary_edges(self) -> list[Diagonal]:
        return [(i, i + 1) for i in range(self.m - 1)] + [(0, self.m - 1)]

    def sorted_diagonals(self) -> list[Diagonal]:
        return sorted(self.diagonals)


class Labelling:
    """Bijection from the diagonal set to {1..n}."""

    __slots__ = ("_by_diag", "_by_label")

    def __init__(self, assignment: Mapping[Diagonal, int] | Iterable[tuple[Diagonal, int]]):
        items = assignment.items() if isinstance(assignment, Mapping) else assignment
        by_diag = {normalize_diagonal(d): int(lbl) for d, lbl in items}
        by_label: dict[int, Diagonal] = {}
        for d, lbl in by_diag.items():
            if lbl in by_label:
                raise ValueError(f"label {lbl} assigned twice")
            by_label[lbl] = d
        self._by_diag = by_diag
        self._by_label = by_label

    @classmethod
    def identity_for(cls, t: ConvexTriangulation) -> "Labelling":
        """Labels assigned 1..n over the lexicographically sorted diagonals."""
        return cls({d: i + 1 for i, d in enumerate(t.sorted_diagonals())})

    def label_of(self, d: Diagonal) -> int:
        return self._by_diag[normalize_diagonal(d)]

    def diagonal_of(self, label: int) -> Diagonal:
        return self._by_label[label]

    def to_dict(self) -> dict[Diagonal, int]:
        return dict(self._by_diag)

    def labels(self) -> set[int]:
        return set(self._by_label)

    def __len__(self) -> int:
        return len(self._by_diag)

    def __eq__(self, other) -> bool:
        return isinstance(other, Labelling) and self._by_diag == other._by_diag

    def __hash__(self) -> int:
        return hash(tuple(sorted(self._by_diag.items())))

    def __repr__(self) -> str:
        return f"Labelling({self._by_diag!r})"

    def validate_against(self, t: ConvexTriangulation) -> None:
        if set(self._by_diag) != set(t.diagonals):
            raise ValueError("labelling domain differs from the diagonal set")
        if t.n and self.labels() != set(range(1, t.n + 1)):
            raise ValueError("labels are not exactly {1..n}")


LabelledState = tuple[ConvexTriangulation, Labelling]


@dataclass(frozen=True)
class FanPermutation:
    """Left-to-right label reading of a fan; position t holds diagonal (apex, t+2)."""

    apex: int
    perm: tuple[int, ...]


def fan_permutation(t: ConvexTriangulation, l: Labelling, apex: int = 0) -> FanPermutation:
    if not t.is_fan(apex):
        raise ValueError("state is not the fan at the requested apex")
    perm = []
    for pos in range(t.n):
        other = (apex + pos + 2) % t.m
        perm.append(l.label_of((apex, other)))
    return FanPermutation(apex, tuple(perm))


def fan_state(m: int, perm: Iterable[int]) -> LabelledState:
    """Fan at vertex 0 whose position t carries perm[t]."""
    t = ConvexTriangulation.fan(m)
    perm = list(perm)
    if len(perm) != m - 3:
        raise ValueError("permutation length must be m-3")
    l = Labelling({(0, pos + 2): perm[pos] for pos in range(m - 3)})
    return t, l


@dataclass(frozen=True)
class FlipSequence:
    """Replayable script of single flips.

    In labelled mode each step names the label to flip; in unlabelled mode
    each step names the diagonal.  Cost is the number of steps.
    """

    mode: str
    steps: tuple

    def __post_init__(self):
        if self.mode not in ("labelled", "unlabelled"):
            raise ValueError(f"unknown mode {self.mode!r}")
        if self.mode == "labelled":
            object.__setattr__(self, "steps", tuple(int(s) for s in self.steps))
        else:
            object.__setattr__(self, "steps", tuple(normalize_diagonal(s) for s in self.steps))

    @property
    def cost(self) -> int:
        return len(self.steps)

    def concat(self, other: "FlipSequence") -> "FlipSequence":
        if self.mode != other.mode:
            raise ValueError("cannot concatenate sequences of different modes")
        return FlipSequence(self.mode, self.steps + other.steps)

    def to_json(self) -> str:
        steps = [list(s) for s in self.steps] if self.mode == "unlabelled" else list(self.steps)
        return json.dumps({"mode": self.mode, "steps": steps})

    @classmethod
    def from_json(cls, doc: str | dict) -> "FlipSequence":
        try:
            data = json.loads(doc) if isinstance(doc, str) else doc
            mode = data["mode"]
            steps = data["steps"]
            if mode == "labelled":
                return cls(mode, tuple(int(s) for s in steps))
            return cls(mode, tuple((int(a), int(b)) for a, b in steps))
        except (KeyError, TypeError, ValueError, json.JSONDecodeError) as exc:
            raise ParseError(f"bad flip sequence document: {exc}") from exc


EMPTY_LABELLED = FlipSequence("labelled", ())


class _Machine:
    """Mutable replay state: adjacency sets, labels and the rim at vertex 0.

    The rim linked list tracks the cyclic neighbor order of vertex 0 between
    the permanent anchors 1 and m-1; fan-based emitters rely on it.
    """

    __slots__ = ("m", "adj", "labels", "label_pos", "trace", "rim_next", "rim_prev")

    def __init__(self, t: ConvexTriangulation, l: Labelling):
        m = t.m
        self.m = m
        adj = [set() for _ in range(m)]
        for i in range(m):
            adj[i].add((i + 1) % m)
            adj[i].add((i - 1) % m)
        for a, b in t.diagonals:
            adj[a].add(b)
            adj[b].add(a)
        self.adj = adj
        self.labels = dict(l.to_dict())
        self.label_pos = {lbl: d for d, lbl in self.labels.items()}
        self.trace: list[tuple[int, Diagonal, Diagonal]] = []
        self._rebuild_rim()

    def _rebuild_rim(self):
        rim = sorted(self.adj[0])
        self.rim_next = {}
        self.rim_prev = {}
        for u, v in zip(rim, rim[1:]):
            self.rim_next[u] = v
            self.rim_prev[v] = u

    def has_diagonal(self, d: Diagonal) -> bool:
        a, b = d
        return b in self.adj[a]

    def quad(self, d: Diagonal) -> tuple[int, int]:
        """Opposite corners (inner, outer) of the two triangles sharing d."""
        a, b = d
        sa, sb = self.adj[a], self.adj[b]
        if len(sb) < len(sa):
            sa, sb = sb, sa
        inner = outer = None
        for v in sa:
            if v in sb:
                if a < v < b:
                    inner = v
                else:
                    outer = v
        if inner is None or outer is None:
            raise UnknownDiagonal(f"no quadrilateral around {d}")
        return inner, outer

    def quad_cycle(self, d: Diagonal) -> tuple[int, int, int, int]:
        """The 4 quadrilateral vertices in boundary (index) order."""
        inner, outer = self.quad(d)
        return tuple(sorted((d[0], d[1], inner, outer)))

    def faces_of(self, d: Diagonal) -> tuple[tuple[int, int, int], tuple[int, int, int]]:
        a, b = d
        inner, outer = self.quad(d)
        return tuple(sorted((a, b, inner))), tuple(sorted((a, b, outer)))

    def flip(self, d: Diagonal) -> Diagonal:
        d = normalize_diagonal(d)
        a, b = d
        if not (0 <= a < b < self.m) or b not in self.adj[a] or b - a < 2 or (a, b) == (0, self.m - 1):
            raise UnknownDiagonal(f"{d} is not a diagonal of the current state")
        inner, outer = self.quad(d)
        new = normalize_diagonal((inner, outer))
        self.adj[a].discard(b)
        self.adj[b].discard(a)
        self.adj[new[0]].add(new[1])
        self.adj[new[1]].add(new[0])
        lbl = self.labels.pop(d)
        self.labels[new] = lbl
        self.label_pos[lbl] = new
        # Rim bookkeeping: flips through vertex 0 insert or remove one rim entry.
        if a == 0:
            # b in [2, m-2] always has both rim links
            p, q = self.rim_prev.pop(b), self.rim_next.pop(b)
            self.rim_next[p] = q
            self.rim_prev[q] = p
        elif new[0] == 0:
            # face (0, a, b) existed, so a and b were rim-consecutive
            x = new[1]
            self.rim_next[a] = x
            self.rim_prev[x] = a
            self.rim_next[x] = b
            self.rim_prev[b] = x
        self.trace.append((lbl, d, new))
        return new

    def flip_label(self, lbl: int) -> Diagonal:
        if lbl not in self.label_pos:
            raise UnknownDiagonal(f"label {lbl} does not exist")
        return self.flip(self.label_pos[lbl])

    def mark(self) -> int:
        return len(self.trace)

    def steps_since(self, mark: int, mode: str = "labelled") -> FlipSequence:
        if mode == "labelled":
            return FlipSequence("labelled", tuple(s[0] for s in self.trace[mark:]))
        return FlipSequence("unlabelled", tuple(s[1] for s in self.trace[mark:]))

    def state(self) -> LabelledState:
        t = ConvexTriangulation(self.m, frozenset(self.labels))
        return t, Labelling(self.labels)

    def rim_list(self) -> list[int]:
        out = [1]
        v = 1
        while v != self.m - 1:
            v = self.rim_next[v]
            out.append(v)
        return out


def _states_equal(a: LabelledState, b: LabelledState) -> bool:
    return a[0].m == b[0].m and a[0].diagonals == b[0].diagonals and a[1] == b[1]


def flip(t: ConvexTriangulation, l: Labelling, d: Diagonal) -> tuple[ConvexTriangulation, Labelling, Diagonal]:
    """Flip diagonal d; the new diagonal inherits d's label."""
    d = normalize_diagonal(d)
    if d not in t.diagonals:
        raise UnknownDiagonal(f"{d} is not a diagonal")
    mac = _Machine(t, l)
    new = mac.flip(d)
    t2, l2 = mac.state()
    return t2, l2, new


def neighbors_of(t: ConvexTriangulation, d: Diagonal) -> tuple[int, int, int, int]:
    """The quadrilateral formed by the two triangles sharing d, in boundary order."""
    d = normalize_diagonal(d)
    if d not in t.diagonals:
        raise UnknownDiagonal(f"{d} is not a diagonal")
    mac = _Machine(t, Labelling.identity_for(t))
    return mac.quad_cycle(d)


def replay(start: LabelledState, seq: FlipSequence) -> tuple[LabelledState | None, str | None]:
    """Replay seq from start; returns (final state, None) or (None, reason)."""
    t, l = start
    try:
        l.validate_against(t)
    except ValueError as exc:
        return None, f"invalid start state: {exc}"
    mac = _Machine(t, l)
    for i, step in enumerate(seq.steps):
        try:
            if seq.mode == "labelled":
                mac.flip_label(step)
            else:
                mac.flip(step)
        except UnknownDiagonal as exc:
            return None, f"step {i + 1}: {exc}"
    return mac.state(), None


def verify_sequence(start: LabelledState, seq: FlipSequence, target: LabelledState) -> bool:
    """True iff every step of seq applies and the final state equals target."""
    if start[0].m != target[0].m:
        raise SizeMismatch(f"m={start[0].m} vs m={target[0].m}")
    final, err = replay(start, seq)
    if err is not None:
        return False
    return _states_equal(final, target)


def invert_sequence(start: LabelledState, seq: FlipSequence) -> FlipSequence:
    """The sequence that undoes seq: each flip inverted, order reversed."""
    if seq.mode == "labelled":
        return FlipSequence("labelled", tuple(reversed(seq.steps)))
    final, err = replay(start, seq)
    if err is not None:
        raise ValueError(f"cannot invert an invalid sequence: {err}")
    mac = _Machine(*start)
    added = [mac.flip(d) for d in seq.steps]
    return FlipSequence("unlabelled", tuple(reversed(added)))


def canonicalize_unlabelled(t: ConvexTriangulation, l: Labelling) -> tuple[FlipSequence, Labelling]:
    """Greedy fan canonicalization at apex 0.

    While some face (0, u, v) has its far side (u, v) as a diagonal, flipping
    (u, v) raises deg(0) by one, so at most n flips reach the fan.
    """
    l.validate_against(t)
    mac = _Machine(t, l)
    seq = _canonicalize_machine(mac)
    _, l2 = mac.state()
    return seq, l2


def _canonicalize_machine(mac: _Machine) -> FlipSequence:
    mark = mac.mark()
    stack = []
    v = 1
    while v != mac.m - 1:
        w = mac.rim_next[v]
        stack.append((v, w))
        v = w
    while stack:
        u, w = stack.pop()
        if mac.rim_next.get(u) != w or w - u < 2:
            continue
        mac.flip((u, w))
        x = mac.rim_next[u]
        stack.append((x, w))
        stack.append((u, x))
    return mac.steps_since(mark)


def transform_between(a: LabelledState, b: LabelledState) -> FlipSequence:
    """A verified flip sequence from a to b of length at most 2n + sort cost."""
    from . import labelsort

    ta, la = a
    tb, lb = b
    if ta.m != tb.m:
        raise SizeMismatch(f"m={ta.m} vs m={tb.m}")
    la.validate_against(ta)
    lb.validate_against(tb)
    if _states_equal(a, b):
        return EMPTY_LABELLED

    mac = _Machine(ta, la)
    seq_a = _canonicalize_machine(mac)

    mac_b = _Machine(tb, lb)
    seq_b = _canonicalize_machine(mac_b)
    rho_b = [mac_b.labels[(0, pos + 2)] for pos in range(tb.n)]
    rank = {lbl: i for i, lbl in enumerate(rho_b)}

    mark = mac.mark()
    labelsort._sort_fan_machine(mac, key=lambda lbl: rank[lbl])
    seq_sort = mac.steps_since(mark)

    seq = seq_a.concat(seq_sort).concat(invert_sequence((tb, lb), seq_b))
    return seq


def state_to_json(t: ConvexTriangulation, l: Labelling) -> str:
    """Canonical JSON: diagonals sorted lexicographically, labels aligned."""
    diags = t.sorted_diagonals()
    return json.dumps({
        "m": t.m,
        "diagonals": [list(d) for d in diags],
        "labels": [l.label_of(d) for d in diags],
    })


def state_from_json(doc: str | dict) -> LabelledState:
    try:
        data = json.loads(doc) if isinstance(doc, str) else doc
        m = int(data["m"])
        diags = [normalize_diagonal((int(a), int(b))) for a, b in data["diagonals"]]
        labels = [int(x) for x in data["labels"]]
        if len(labels) != len(diags):
            raise ValueError("labels and diagonals differ in length")
        t = ConvexTriangulation(m, frozenset(diags))
        l = Labelling(dict(zip(diags, labels)))
        l.validate_against(t)
    except (KeyError, TypeError, ValueError, json.JSONDecodeError) as exc:
        raise ParseError(f"bad triangulation document: {exc}") from exc
    return t, l
