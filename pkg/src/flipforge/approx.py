"""Approximate flip distance within an O(log n) factor.

A diagonal is fixed when it appears in both inputs with the same label and
the label set strictly inside the region it spans agrees between the two
inputs.  Fixed edges are never flipped; cutting along them decomposes the
polygon into independent pieces, each solved by the fan transformation.
The piece diagonal counts sum to a lower bound on the true distance, since
every non-fixed diagonal must be flipped at least once.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

from . import convex
from .convex import ConvexTriangulation, Diagonal, FlipSequence, Labelling, LabelledState
from .errors import PieceLabelMismatch, SizeMismatch, VerificationFailed

_HASH_A = 0x9E3779B97F4A7C15
_HASH_B = 0xC2B2AE3D27D4EB4F
_MASK = (1 << 64) - 1


def _mix(label: int, salt: int) -> int:
    x = (label * salt) & _MASK
    x ^= x >> 31
    x = (x * 0xD6E8FEB86659FD93) & _MASK
    return x ^ (x >> 29)


@dataclass(frozen=True)
class Piece:
    """One sub-polygon of the cut, as its cyclic vertex tuple."""

    vertices: tuple[int, ...]

    @property
    def n_i(self) -> int:
        return len(self.vertices) - 3


@dataclass(frozen=True)
class FixedEdgeReport:
    fixed: frozenset[Diagonal]
    pieces: tuple[Piece, ...]
    lower_bound: int

    def to_json(self) -> str:
        return json.dumps({
            "fixed": [list(d) for d in sorted(self.fixed)],
            "pieces": [{"vertices": list(p.vertices), "n_i": p.n_i} for p in self.pieces],
            "lower_bound": self.lower_bound,
        })


def _inside_hashes(diagonals: dict[Diagonal, int], candidates: list[Diagonal]) -> dict[Diagonal, tuple]:
    """For each candidate chord, hashes of the label set strictly inside it.

    Sweep over endpoints with a stack of open candidates; every diagonal
    contributes to the innermost candidate containing it, and subtree sums
    accumulate outward.  O((n + |candidates|) log n).
    """
    # Event order at one vertex v: close candidates (a, v), innermost (largest
    # a) first; then a merged stream of opens (v, b) and records (v, b) by
    # descending b, with a record preceding the open of the identical pair so
    # a candidate never counts itself.
    events = []
    for c in candidates:
        events.append((c[0], 1, (-c[1], 1), ("open", c, 0)))
        events.append((c[1], 0, (-c[0], 0), ("close", c, 0)))
    for d, lbl in diagonals.items():
        events.append((d[0], 1, (-d[1], 0), ("rec", d, lbl)))
    events.sort(key=lambda e: (e[0], e[1], e[2]))
    acc: dict[Diagonal, list] = {c: [0, 0, 0] for c in candidates}
    stack: list[Diagonal] = []
    out: dict[Diagonal, tuple] = {}
    for _, _, _, payload in events:
        kind, obj, lbl = payload
        if kind == "open":
            stack.append(obj)
        elif kind == "close":
            top = stack.pop()
            assert top == obj
            h = acc[top]
            out[top] = (h[0] & _MASK, h[1] & _MASK, h[2])
            if stack:
                parent = acc[stack[-1]]
                parent[0] += h[0]
                parent[1] += h[1]
                parent[2] += h[2]
        elif stack:
            top = acc[stack[-1]]
            top[0] += _mix(lbl, _HASH_A)
            top[1] += _mix(lbl, _HASH_B)
            top[2] += 1
    return out


def find_fixed(a: LabelledState, b: LabelledState) -> FixedEdgeReport:
    """Fixed edges of the pair plus the piece decomposition they induce."""
    ta, la = a
    tb, lb = b
    if ta.m != tb.m:
        raise SizeMismatch(f"m={ta.m} vs m={tb.m}")
    la.validate_against(ta)
    lb.validate_against(tb)
    m = ta.m

    da = la.to_dict()
    db = lb.to_dict()
    candidates = sorted(
        d for d in ta.diagonals & tb.diagonals if da[d] == db[d]
    )
    in_a = _inside_hashes(da, candidates)
    in_b = _inside_hashes(db, candidates)
    fixed = frozenset(c for c in candidates if in_a[c] == in_b[c])

    pieces = []
    stack = [(tuple(range(m)), sorted(fixed))]
    while stack:
        verts, chords = stack.pop()
        if not chords:
            if len(verts) > 3:
                pieces.append(Piece(verts))
            continue
        x, y = chords[0]
        ix, iy = verts.index(x), verts.index(y)
        left = verts[ix : iy + 1]
        right = verts[iy:] + verts[: ix + 1]
        left_set = set(left)
        rest = chords[1:]
        in_left = [c for c in rest if c[0] in left_set and c[1] in left_set
                   and not (c[0] == x and c[1] == y)]
        in_right = [c for c in rest if c not in in_left]
        stack.append((left, in_left))
        stack.append((right, in_right))
    pieces.sort(key=lambda p: (min(p.vertices), len(p.vertices), p.vertices))
    # normalize: start each cycle at its smallest vertex
    pieces = tuple(
        Piece(_rotate_to_min(p.vertices)) for p in pieces
    )

    lower = sum(p.n_i for p in pieces)
    _assert_piece_labels(pieces, da, db)
    return FixedEdgeReport(fixed, pieces, lower)


def _rotate_to_min(verts: tuple[int, ...]) -> tuple[int, ...]:
    k = verts.index(min(verts))
    return verts[k:] + verts[:k]


def _piece_inner_labels(piece: Piece, diags: dict[Diagonal, int]) -> set[int]:
    vs = set(piece.vertices)
    boundary = set()
    cyc = piece.vertices
    for i in range(len(cyc)):
        e = (cyc[i], cyc[(i + 1) % len(cyc)])
        boundary.add((min(e), max(e)))
    return {
        lbl for d, lbl in diags.items()
        if d[0] in vs and d[1] in vs and d not in boundary
    }


def _assert_piece_labels(pieces, da, db) -> None:
    for p in pieces:
        sa = _piece_inner_labels(p, da)
        sb = _piece_inner_labels(p, db)
        if sa != sb:
            raise PieceLabelMismatch(
                f"piece {p.vertices} has labels {sorted(sa)} vs {sorted(sb)}")
        if len(sa) != p.n_i:
            raise PieceLabelMismatch(
                f"piece {p.vertices} expected {p.n_i} inner diagonals, saw {len(sa)}")


def _piece_state(piece: Piece, t: ConvexTriangulation, l: Labelling):
    """Local (triangulation, labelling) of the piece plus the label maps."""
    cyc = piece.vertices
    pos = {v: i for i, v in enumerate(cyc)}
    vs = set(cyc)
    boundary = set()
    for i in range(len(cyc)):
        e = (cyc[i], cyc[(i + 1) % len(cyc)])
        boundary.add((min(e), max(e)))
    inner = [
        d for d in t.diagonals
        if d[0] in vs and d[1] in vs and d not in boundary
    ]
    global_labels = sorted(l.label_of(d) for d in inner)
    to_local = {g: i + 1 for i, g in enumerate(global_labels)}
    to_global = {v: k for k, v in to_local.items()}
    local_t = ConvexTriangulation(
        len(cyc),
        frozenset(convex.normalize_diagonal((pos[d[0]], pos[d[1]])) for d in inner),
    )
    local_l = Labelling({
        convex.normalize_diagonal((pos[d[0]], pos[d[1]])): to_local[l.label_of(d)]
        for d in inner
    })
    return (local_t, local_l), to_global


def approx_transform(a: LabelledState, b: LabelledState) -> tuple[FlipSequence, int]:
    """A verified a-to-b sequence that never flips a fixed edge, plus Σ n_i."""
    report = find_fixed(a, b)
    steps: list[int] = []
    for piece in report.pieces:
        state_a, to_global = _piece_state(piece, *a)
        state_b, _ = _piece_state(piece, *b)
        local_seq = convex.transform_between(state_a, state_b)
        n_i = piece.n_i
        if n_i >= 2:
            bound = 2 * n_i + 5 * n_i * (math.ceil(math.log2(n_i)) + 1)
            assert local_seq.cost <= bound
        steps.extend(to_global[s] for s in local_seq.steps)
    seq = FlipSequence("labelled", tuple(steps))
    if not convex.verify_sequence(a, seq, b):
        raise VerificationFailed("approximation sequence failed replay")
    return seq, report.lower_bound
