"""Exhaustive ground truth over small flip graphs.

Breadth-first search over labelled / unlabelled, sequential / simultaneous
flip graphs of small instances: exact distances, diameters, state counts,
and shortest gadget scripts.  Everything is deterministic: states are full
dictionary keys (no lossy hashing) and moves are enumerated in sorted order.
"""

from __future__ import annotations

import math
import os
from collections import deque
from functools import lru_cache
from itertools import permutations

from . import convex
from .convex import ConvexTriangulation, Diagonal, FlipSequence, Labelling, LabelledState
from .errors import BudgetExceeded, SizeMismatch, Unreachable

MODES = ("convex-labelled", "convex-unlabelled", "convex-sim-labelled", "comb-labelled")

DEFAULT_SIZE_LIMITS = {
    "convex-labelled": 9,       # polygon size m
    "convex-unlabelled": 14,
    "convex-sim-labelled": 8,
    "comb-labelled": 7,         # vertex count v
}

# Hard cap on visited states; FLIPFORGE_ORACLE_BUDGET overrides.
DEFAULT_STATE_BUDGET = 2_000_000


def state_budget() -> int:
    raw = os.environ.get("FLIPFORGE_ORACLE_BUDGET")
    if raw is None:
        return DEFAULT_STATE_BUDGET
    return int(raw)


def catalan(k: int) -> int:
    return math.comb(2 * k, k) // (k + 1)


@lru_cache(maxsize=None)
def _interval_triangulations(i: int, j: int) -> tuple[tuple[Diagonal, ...], ...]:
    """All diagonal sets triangulating the sub-polygon on vertices i..j."""
    if j - i < 2:
        return ((),)
    out = []
    for k in range(i + 1, j):
        left_diag = ((i, k),) if k - i >= 2 else ()
        right_diag = ((k, j),) if j - k >= 2 else ()
        for left in _interval_triangulations(i, k):
            for right in _interval_triangulations(k, j):
                out.append(tuple(sorted(left_diag + right_diag + left + right)))
    return tuple(out)


def enumerate_triangulations(m: int) -> list[tuple[Diagonal, ...]]:
    """All Catalan(m-2) triangulations of the m-gon, as sorted diagonal tuples."""
    full = [tuple(d for d in diags if d != (0, m - 1))
            for diags in _interval_triangulations(0, m - 1)]
    return sorted(set(full))


def _adjacency(m: int, diagonals) -> list[set[int]]:
    adj = [set() for _ in range(m)]
    for i in range(m):
        adj[i].add((i + 1) % m)
        adj[i].add((i - 1) % m)
    for a, b in diagonals:
        adj[a].add(b)
        adj[b].add(a)
    return adj


def _flip_in_set(m: int, adj, diags: dict | set, d: Diagonal) -> Diagonal:
    """Flip d in-place inside adj/diags; returns the new diagonal."""
    a, b = d
    sa, sb = adj[a], adj[b]
    if len(sb) < len(sa):
        sa, sb = sb, sa
    inner = outer = None
    for v in sa:
        if v in sb:
            if a < v < b:
                inner = v
            else:
                outer = v
    new = (inner, outer) if inner < outer else (outer, inner)
    adj[a].discard(b)
    adj[b].discard(a)
    adj[new[0]].add(new[1])
    adj[new[1]].add(new[0])
    if isinstance(diags, dict):
        lbl = diags.pop(d)
        diags[new] = lbl
    else:
        diags.discard(d)
        diags.add(new)
    return new


def _check_size(mode: str, size: int) -> None:
    limit = DEFAULT_SIZE_LIMITS[mode]
    if size > limit:
        raise BudgetExceeded(f"{mode} supports size <= {limit}, got {size}")


# ---------------------------------------------------------------------------
# Neighbor generation per mode.  A state is a hashable key; expand() yields
# neighbor keys in deterministic order.

def _key_labelled(diags: dict) -> tuple:
    items = tuple(sorted(diags.items()))
    return tuple(d for d, _ in items), tuple(l for _, l in items)


def _quad_static(adj, a: int, b: int) -> tuple[int, int]:
    """(inner, outer) opposite corners of diagonal (a, b); adj untouched."""
    sa, sb = adj[a], adj[b]
    if len(sb) < len(sa):
        sa, sb = sb, sa
    inner = outer = None
    for v in sa:
        if v in sb:
            if a < v < b:
                inner = v
            else:
                outer = v
    return inner, outer


def _expand_convex_labelled(m: int):
    def expand(key):
        diag_t, label_t = key
        adj = _adjacency(m, diag_t)
        out = []
        for i, d in enumerate(diag_t):
            inner, outer = _quad_static(adj, *d)
            new = (inner, outer) if inner < outer else (outer, inner)
            items = sorted(
                [(dd, ll) for dd, ll in zip(diag_t, label_t) if dd != d] + [(new, label_t[i])]
            )
            out.append((tuple(dd for dd, _ in items), tuple(ll for _, ll in items)))
        return out
    return expand


def _expand_convex_unlabelled(m: int):
    def expand(key):
        adj = _adjacency(m, key)
        out = []
        for d in key:
            inner, outer = _quad_static(adj, *d)
            new = (inner, outer) if inner < outer else (outer, inner)
            out.append(tuple(sorted([dd for dd in key if dd != d] + [new])))
        return out
    return expand


def _valid_rounds(m: int, diag_t: tuple[Diagonal, ...]):
    """All non-empty face-disjoint diagonal subsets, in sorted order."""
    adj = _adjacency(m, diag_t)
    faces = {}
    for d in diag_t:
        a, b = d
        sa, sb = adj[a], adj[b]
        inner = outer = None
        for v in (sa if len(sa) <= len(sb) else sb):
            if v in (sb if len(sa) <= len(sb) else sa):
                if a < v < b:
                    inner = v
                else:
                    outer = v
        faces[d] = (tuple(sorted((a, b, inner))), tuple(sorted((a, b, outer))))
    rounds = []

    def rec(idx, chosen, used):
        if chosen:
            rounds.append(tuple(chosen))
        for k in range(idx, len(diag_t)):
            d = diag_t[k]
            f1, f2 = faces[d]
            if f1 in used or f2 in used:
                continue
            chosen.append(d)
            used.add(f1)
            used.add(f2)
            rec(k + 1, chosen, used)
            chosen.pop()
            used.discard(f1)
            used.discard(f2)

    rec(0, [], set())
    return rounds


def _expand_convex_sim(m: int):
    def expand(key):
        diag_t, label_t = key
        out = []
        for rnd in _valid_rounds(m, diag_t):
            adj = _adjacency(m, diag_t)
            diags = dict(zip(diag_t, label_t))
            for d in rnd:
                _flip_in_set(m, adj, diags, d)
            out.append(_key_labelled(diags))
        return out
    return expand


def _expand_comb():
    from . import comb

    def expand(key):
        t = comb.CombTriangulation.from_key(key)
        out = []
        for e in sorted(t.edges()):
            if t.is_flippable(e):
                out.append(comb.comb_flip(t, e).canonical_key())
        return out
    return expand


def _state_key(mode: str, state) -> tuple:
    if mode == "convex-unlabelled":
        if isinstance(state, ConvexTriangulation):
            return tuple(state.sorted_diagonals())
        return tuple(sorted(state))
    if mode in ("convex-labelled", "convex-sim-labelled"):
        t, l = state
        return _key_labelled({d: l.label_of(d) for d in t.diagonals})
    if mode == "comb-labelled":
        return state.canonical_key()
    raise ValueError(f"unknown mode {mode!r}")


def _expander(mode: str, m: int):
    if mode == "convex-labelled":
        return _expand_convex_labelled(m)
    if mode == "convex-unlabelled":
        return _expand_convex_unlabelled(m)
    if mode == "convex-sim-labelled":
        return _expand_convex_sim(m)
    if mode == "comb-labelled":
        return _expand_comb()
    raise ValueError(f"unknown mode {mode!r}")


def _size_of(mode: str, state) -> int:
    if mode == "comb-labelled":
        return state.v
    if mode == "convex-unlabelled":
        if isinstance(state, ConvexTriangulation):
            return state.m
        return max(max(d) for d in state) + 1 if state else 0
    return state[0].m


def exact_distance(a, b, mode: str = "convex-labelled") -> int:
    """Length of the shortest flip sequence (or fewest rounds) from a to b.

    Bidirectional BFS with a hard visited-state budget.
    """
    size_a, size_b = _size_of(mode, a), _size_of(mode, b)
    if size_a != size_b:
        raise SizeMismatch(f"sizes differ: {size_a} vs {size_b}")
    _check_size(mode, size_a)
    key_a, key_b = _state_key(mode, a), _state_key(mode, b)
    if key_a == key_b:
        return 0
    expand = _expander(mode, size_a)
    budget = state_budget()

    dist_a = {key_a: 0}
    dist_b = {key_b: 0}
    frontier_a = [key_a]
    frontier_b = [key_b]
    while frontier_a and frontier_b:
        if len(dist_a) + len(dist_b) > budget:
            raise BudgetExceeded(
                f"visited {len(dist_a) + len(dist_b)} states, budget {budget}")
        # expand the smaller frontier
        if len(frontier_a) <= len(frontier_b):
            frontier, dist, other = frontier_a, dist_a, dist_b
        else:
            frontier, dist, other = frontier_b, dist_b, dist_a
        nxt = []
        best = None
        for key in frontier:
            d = dist[key]
            for nk in expand(key):
                if nk in other:
                    cand = d + 1 + other[nk]
                    best = cand if best is None else min(best, cand)
                if nk not in dist:
                    dist[nk] = d + 1
                    nxt.append(nk)
        if best is not None:
            return best
        if frontier is frontier_a:
            frontier_a = nxt
        else:
            frontier_b = nxt
    raise Unreachable("states are not connected (should not happen)")


def all_labelled_states(m: int) -> list[tuple]:
    """Every labelled state key at polygon size m."""
    out = []
    for diag_t in enumerate_triangulations(m):
        for perm in permutations(range(1, m - 2)):
            out.append((diag_t, perm))
    return out


def state_count(mode: str, m: int) -> int:
    if mode == "convex-labelled":
        return len(all_labelled_states(m))
    if mode == "convex-unlabelled":
        return len(enumerate_triangulations(m))
    raise ValueError(f"state_count supports convex modes, not {mode!r}")


def expected_labelled_count(m: int) -> int:
    """Catalan(m-2) * (m-3)!"""
    return catalan(m - 2) * math.factorial(m - 3)


def key_to_state(m: int, key: tuple) -> LabelledState:
    diag_t, label_t = key
    t = ConvexTriangulation(m, frozenset(diag_t))
    return t, Labelling(dict(zip(diag_t, label_t)))


# ---------------------------------------------------------------------------
# Diameters

def _rotate_diag(m: int, d: Diagonal, r: int) -> Diagonal:
    a, b = (d[0] + r) % m, (d[1] + r) % m
    return (a, b) if a < b else (b, a)


def _reflect_diag(m: int, d: Diagonal) -> Diagonal:
    a, b = (-d[0]) % m, (-d[1]) % m
    return (a, b) if a < b else (b, a)


def _dihedral_orbit_reps(m: int, keys: list[tuple], labelled: bool) -> list[int]:
    """Indices of one representative per orbit under polygon symmetries.

    For labelled keys, relabelling by any label permutation is also a flip
    graph automorphism, so the orbit is taken over shapes only.
    """
    index = {k: i for i, k in enumerate(keys)}
    seen = [False] * len(keys)
    reps = []
    for i, k in enumerate(keys):
        if seen[i]:
            continue
        reps.append(i)
        shape = k[0] if labelled else k
        orbit_shapes = set()
        for r in range(m):
            rot = tuple(sorted(_rotate_diag(m, d, r) for d in shape))
            orbit_shapes.add(rot)
            orbit_shapes.add(tuple(sorted(_reflect_diag(m, d) for d in rot)))
        if labelled:
            for sh in orbit_shapes:
                for perm in permutations(range(1, m - 2)):
                    j = index.get((sh, perm))
                    if j is not None:
                        seen[j] = True
        else:
            for sh in orbit_shapes:
                j = index.get(sh)
                if j is not None:
                    seen[j] = True
    return reps


def _graph_arrays(keys: list[tuple], expand):
    import numpy as np

    index = {k: i for i, k in enumerate(keys)}
    indptr = np.zeros(len(keys) + 1, dtype=np.int64)
    cols: list[int] = []
    for i, k in enumerate(keys):
        for nk in expand(k):
            cols.append(index[nk])
        indptr[i + 1] = len(cols)
    return indptr, np.asarray(cols, dtype=np.int32)


def _bfs_distances(indptr, indices, src: int, n: int):
    import numpy as np

    dist = np.full(n, -1, dtype=np.int16)
    dist[src] = 0
    frontier = np.array([src], dtype=np.int32)
    d = 0
    while frontier.size:
        starts = indptr[frontier]
        counts = indptr[frontier + 1] - starts
        total = int(counts.sum())
        offsets = np.repeat(starts - np.concatenate(([0], np.cumsum(counts)[:-1])), counts)
        nbrs = indices[offsets + np.arange(total)]
        nbrs = nbrs[dist[nbrs] == -1]
        if nbrs.size == 0:
            break
        nbrs = np.unique(nbrs)
        d += 1
        dist[nbrs] = d
        frontier = nbrs
    return dist


def diameter(mode: str, m: int) -> int:
    """Maximum pairwise distance in the chosen flip graph.

    Eccentricities are evaluated from one representative per symmetry orbit
    (polygon rotations/reflections, plus label relabellings in labelled
    mode); anchor-based upper bounds prune representatives that provably
    cannot beat the running maximum.
    """
    import numpy as np

    _check_size(mode, m)
    if mode == "convex-unlabelled":
        keys = enumerate_triangulations(m)
        expand = _expand_convex_unlabelled(m)
        labelled = False
    elif mode == "convex-labelled":
        keys = all_labelled_states(m)
        expand = _expand_convex_labelled(m)
        labelled = True
    else:
        raise ValueError(f"diameter supports convex modes, not {mode!r}")
    n = len(keys)
    if n > state_budget():
        raise BudgetExceeded(f"{n} states exceed budget {state_budget()}")
    if n == 1:
        return 0
    indptr, indices = _graph_arrays(keys, expand)
    reps = _dihedral_orbit_reps(m, keys, labelled)

    # Anchor eccentricities give ecc(v) <= min_a dist(a, v) + ecc(a).
    anchors = [reps[0]]
    anchor_rows = []
    best = 0
    for _ in range(8):
        a = anchors[-1]
        row = _bfs_distances(indptr, indices, a, n)
        anchor_rows.append(row)
        ecc = int(row.max())
        best = max(best, ecc)
        far = int(np.argmax(row))
        if far in anchors:
            break
        anchors.append(far)
    upper = np.minimum.reduce([row + int(row.max()) for row in anchor_rows])
    for i in reps:
        if int(upper[i]) <= best:
            continue
        row = _bfs_distances(indptr, indices, i, n)
        best = max(best, int(row.max()))
    return best


# ---------------------------------------------------------------------------
# Gadget discovery

def _bfs_script(start_key, target_key, expand_with_moves):
    """Shortest move list from start to target.

    expand_with_moves(key) yields (move, next_key) pairs in sorted move
    order, which makes the first path found deterministic.
    """
    if start_key == target_key:
        return []
    parent = {start_key: None}
    frontier = deque([start_key])
    budget = state_budget()
    while frontier:
        key = frontier.popleft()
        for move, nk in expand_with_moves(key):
            if nk in parent:
                continue
            parent[nk] = (key, move)
            if nk == target_key:
                moves = []
                cur = nk
                while parent[cur] is not None:
                    cur, mv = parent[cur]
                    moves.append(mv)
                return list(reversed(moves))
            frontier.append(nk)
        if len(parent) > budget:
            raise BudgetExceeded(f"gadget search visited {len(parent)} states")
    raise Unreachable("gadget target not reachable")


def discover_pentagon_script() -> FlipSequence:
    """Shortest flip script swapping the two labels of the pentagon fan."""
    m = 5
    start = _state_key("convex-labelled", convex.fan_state(m, [2, 1]))
    target = _state_key("convex-labelled", convex.fan_state(m, [1, 2]))

    def expand(key):
        diag_t, label_t = key
        out = []
        for d in sorted(diag_t):
            adj = _adjacency(m, diag_t)
            diags = dict(zip(diag_t, label_t))
            _flip_in_set(m, adj, diags, d)
            out.append((d, _key_labelled(diags)))
        return out

    moves = _bfs_script(start, target, expand)
    return FlipSequence("unlabelled", tuple(moves))


def discover_gadget(name: str, **params):
    """Named gadget dispatcher; see the per-module helpers for the specs."""
    if name == "pentagon":
        return discover_pentagon_script()
    if name == "spine-swap":
        from . import comb
        return comb.discover_spine_swap_script(**params)
    if name == "hexagon":
        from . import parallel
        return parallel.discover_hexagon_script(**params)
    raise ValueError(f"unknown gadget {name!r}")
