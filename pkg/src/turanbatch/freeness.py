"""Freeness tests, batch-code checks and request decoding.

Freeness is phrased through deficiency: a hypergraph avoids ``H(k, q)``
exactly when every selection of at most ``k`` edges has deficiency at most
``q``.  The search enumerates connected edge selections (ESU on the line
graph, each set visited once) and prunes subtrees whose deficiency cannot
reach the level of interest.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Iterator, Optional

import numpy as np

from .core import EdgeSelection, Hypergraph, as_params, check_selection, cover, deficiency
from .errors import EmptyHypergraph, NoSDR, PadImpossible, TooLarge

BRUTEFORCE_MAX_EDGES = 20


@dataclass(frozen=True)
class FreenessVerdict:
    """Outcome of a freeness check.

    ``max_deficiency_found`` is the largest deficiency over the selections
    the family constrains (``None`` when there are none).  It is computed
    on first access, since deciding freeness is much cheaper than finding
    the exact maximum.
    """

    free: bool
    witness: Optional[EdgeSelection]
    _found: Optional[int] = field(default=None, repr=False, compare=False)
    _lazy: Optional[Callable[[], int]] = field(default=None, repr=False, compare=False)

    @property
    def max_deficiency_found(self) -> Optional[int]:
        if self._lazy is not None:
            object.__setattr__(self, "_found", self._lazy())
            object.__setattr__(self, "_lazy", None)
        return self._found

    def __bool__(self):
        return self.free


@dataclass(frozen=True)
class RetrievalPlan:
    assignment: dict[int, int]

    def servers(self) -> list[int]:
        return [self.assignment[i] for i in sorted(self.assignment)]


# -- connected selections ------------------------------------------------------


def _deficiency_ceiling(H: Hypergraph, cap: int) -> list[int]:
    """``ceil[c]``: largest deficiency of a selection of at most ``cap`` edges
    covering at least ``c`` vertices.

    On a simple hypergraph a set of ``c`` vertices spans at most ``C(c, r)``
    edges, which is what kills most branches early.
    """
    n, r = H.n, H.r
    simple = not H.has_repeats
    out = [0] * (n + 2)
    best = -math.inf
    for c in range(n + 1, -1, -1):
        if c <= n:
            top = min(cap, math.comb(c, r)) if simple else cap
            best = max(best, top - c)
        out[c] = best
    return out


def connected_selections(H: Hypergraph, cap: int, floor) -> Iterator[tuple[tuple[int, ...], int, int]]:
    """Yield ``(positions, deficiency, cover_mask)`` for connected selections.

    Every connected selection of 1..cap edges is produced at most once
    (positions in discovery order, not sorted).  ``floor`` is a one-element
    list read at each node; subtrees whose deficiency cannot reach
    ``floor[0]`` are skipped, and the caller may raise it while iterating.
    """
    masks = H.edge_masks
    nbrs = H.edge_neighbours
    ceil = _deficiency_ceiling(H, cap)
    for i in range(H.m):
        above = ~((1 << (i + 1)) - 1)
        stack = [((i,), masks[i], nbrs[i] & above, nbrs[i] | (1 << i))]
        while stack:
            sub, cov, ext, nbh = stack.pop()
            size = len(sub)
            c = cov.bit_count()
            d = size - c
            if ceil[c] < floor[0] or d + cap - size < floor[0]:
                continue
            yield sub, d, cov
            if size == cap or not ext:
                continue
            children = []
            while ext:
                low = ext & -ext
                ext ^= low
                w = low.bit_length() - 1
                nw = nbrs[w]
                children.append((sub + (w,), cov | masks[w], ext | (nw & ~nbh & above), nbh | nw | low))
            children.reverse()
            stack.extend(children)


def _key(d, sel):
    return (-d, len(sel), sel)


def _peel_private(H: Hypergraph) -> list[int]:
    """Positions surviving repeated removal of edges that own a degree-1 vertex.

    Dropping such an edge from a selection of two or more edges loses at
    least one covered vertex, so it never lowers deficiency; only
    single-edge maximisers can use them.
    """
    deg = [len(x) for x in H.incidence]
    alive = [True] * H.m
    queue = [i for i, e in enumerate(H.edges) if any(deg[v] == 1 for v in e)]
    while queue:
        i = queue.pop()
        if not alive[i]:
            continue
        alive[i] = False
        for v in H.edges[i]:
            deg[v] -= 1
            if deg[v] == 1:
                queue.extend(j for j in H.incidence[v] if alive[j])
    return [i for i in range(H.m) if alive[i]]


def max_deficiency(H: Hypergraph, k: int) -> tuple[int, EdgeSelection]:
    """Largest deficiency over nonempty selections of at most ``k`` edges.

    Returns the value and a maximiser, preferring fewer edges and then the
    lexicographically smallest positions.
    """
    if H.m == 0:
        raise EmptyHypergraph("no edges to select")
    if k < 1:
        raise ValueError("k must be at least 1")
    single = 1 - H.r
    core = _peel_private(H)
    if k == 1 or not core:
        return single, (0,)
    sub = H.subhypergraph(core)
    value, sel = _max_deficiency_raw(sub, k)
    if value <= single:
        return single, (0,)
    return value, tuple(core[i] for i in sel)


def _max_deficiency_raw(H: Hypergraph, k: int) -> tuple[int, EdgeSelection]:
    floor = [-math.inf]
    best = None
    positive = []
    for sub, d, cov in connected_selections(H, k, floor):
        if d > 0:
            positive.append((tuple(sorted(sub)), d, cov))
        if best is not None and d < -best[0]:
            continue
        sel = tuple(sorted(sub))
        if best is None or _key(d, sel) < best:
            best = _key(d, sel)
            floor[0] = min(d, 1)
    best = _best_packing(positive, k, H.r, best)
    return -best[0], best[2]


def _best_packing(parts, k, r, best):
    """Combine vertex-disjoint positive parts when that beats ``best``.

    Deficiency is additive over vertex-disjoint parts, so a disconnected
    optimum is a packing of connected pieces each of positive deficiency.
    """
    if len(parts) < 2:
        return best
    smallest = min(len(p[0]) for p in parts)
    if 2 * smallest > k:
        return best
    parts.sort(key=lambda p: p[0])
    state = {"best": best}

    def rec(start, used, size, dsum, chosen):
        if len(chosen) >= 2:
            sel = tuple(sorted(i for p in chosen for i in p))
            key = _key(dsum, sel)
            if key < state["best"]:
                state["best"] = key
        budget = k - size
        if budget < smallest:
            return
        if dsum + max(0, budget - r) < -state["best"][0]:
            return
        for j in range(start, len(parts)):
            sel, d, cov = parts[j]
            if cov & used or len(sel) > budget:
                continue
            chosen.append(sel)
            rec(j + 1, used | cov, size + len(sel), dsum + d, chosen)
            chosen.pop()

    rec(0, 0, 0, 0, [])
    return state["best"]


def max_deficiency_bruteforce(H: Hypergraph, k: int) -> tuple[int, EdgeSelection]:
    """Exhaustive maximum over all ``2**m`` selections (testing oracle)."""
    m = H.m
    if m > BRUTEFORCE_MAX_EDGES:
        raise TooLarge(f"m={m} > {BRUTEFORCE_MAX_EDGES}")
    if m == 0:
        raise EmptyHypergraph("no edges to select")
    if H.n > 64:
        raise TooLarge("vertex masks limited to 64 vertices")
    cov = np.zeros(1, dtype=np.uint64)
    size = np.zeros(1, dtype=np.int16)
    for em in H.edge_masks:
        cov = np.concatenate([cov, cov | np.uint64(em)])
        size = np.concatenate([size, size + 1])
    d = size.astype(np.int32) - np.bitwise_count(cov).astype(np.int32)
    valid = (size >= 1) & (size <= k)
    best = int(d[valid].max())
    hit = np.nonzero(valid & (d == best))[0]
    smin = size[hit].min()
    hit = hit[size[hit] == smin]
    sels = [tuple(j for j in range(m) if (int(x) >> j) & 1) for x in hit]
    return best, min(sels)


# -- verdicts ------------------------------------------------------------------


def minimal_witness(H: Hypergraph, k: int, q: int) -> Optional[EdgeSelection]:
    """Smallest selection of deficiency at least ``q + 1`` (ties: lexicographic).

    A smallest such selection is connected and has deficiency exactly
    ``q + 1``, so it is itself a member of the forbidden family with no
    padding needed.  ``None`` when ``H`` is free.
    """
    if H.m == 0:
        return None
    floor = [q + 1]
    best = None
    for sub, d, _ in connected_selections(H, k, floor):
        if d >= q + 1:
            sel = tuple(sorted(sub))
            if best is None or (len(sel), sel) < (len(best), best):
                best = sel
    return best


def forbidden_member(H: Hypergraph, S, q: int) -> tuple[EdgeSelection, frozenset[int]]:
    """Realise a selection of deficiency ``>= q + 1`` as a forbidden subhypergraph.

    Returns the edges and a vertex set with ``|E| - |V| = q + 1``: the cover
    of ``S`` padded with the lowest unused (isolated) vertices.
    """
    sel = check_selection(H, S)
    verts = set(cover(H, sel))
    d = len(sel) - len(verts)
    if d < q + 1:
        raise ValueError(f"deficiency {d} < q+1={q + 1}")
    need = len(sel) - q - 1
    if need > H.n:
        raise PadImpossible(f"{len(sel)} edges need {need} vertices, only {H.n} exist")
    for v in range(H.n):
        if len(verts) == need:
            break
        verts.add(v)
    return sel, frozenset(verts)


def edge_connected_sets(H: Hypergraph, limit: int) -> Iterator[tuple[int, int, int]]:
    """Yield ``(mask, size, spanned)`` for every union of connected edges.

    Each vertex set of at most ``limit`` vertices that is the union of a
    family of edges connected through shared vertices is produced once;
    ``spanned`` counts the edges (with multiplicity) lying inside it.
    Growing by whole edges keeps the search small on sparse hypergraphs,
    where vertex-by-vertex growth would visit every connected vertex set.
    """
    masks = H.edge_masks
    inc = H.incidence
    low = [e[0] for e in H.edges]
    seen = set()
    stack = []
    for em in sorted(set(masks), reverse=True):
        if em.bit_count() <= limit:
            seen.add(em)
            stack.append(em)
    while stack:
        W = stack.pop()
        verts = []
        x = W
        while x:
            b = x & -x
            x ^= b
            verts.append(b.bit_length() - 1)
        spanned = 0
        grow = []
        room = limit - len(verts)
        for v in verts:
            for i in inc[v]:
                out = masks[i] & ~W
                if not out:
                    if low[i] == v:
                        spanned += 1
                elif room:
                    nw = W | out
                    if nw not in seen and out.bit_count() <= room:
                        seen.add(nw)
                        grow.append(nw)
        yield W, len(verts), spanned
        stack.extend(sorted(grow, reverse=True))


def violating_sets(H: Hypergraph, k: int, q: int) -> list[tuple[int, int, int]]:
    """Unions of connected edges that host a forbidden member, smallest first.

    Items are ``(size, mask, need)``: ``W`` violates when it spans at least
    ``need = max(|W| + q + 1, 1) <= k`` edges.  A smallest violating vertex
    set is covered by the edges inside it, and for ``q <= 0`` also connected
    through them, so for ``q <= 0`` the hypergraph is free iff the list is
    empty.  For ``q >= 1`` disjoint pieces can add up; see
    :func:`find_violation`.
    """
    out = []
    limit = min(H.n, k - q - 1)
    for wmask, size, spanned in edge_connected_sets(H, limit):
        need = max(size + q + 1, 1)
        if need <= k and spanned >= need:
            out.append((size, wmask, need))
    out.sort()
    return out


def trim_to_member(H: Hypergraph, S, q: int) -> EdgeSelection:
    """Shrink a selection of deficiency above ``q`` to one of deficiency exactly ``q + 1``.

    Dropping one edge lowers the deficiency by at most one, so removing the
    highest positions one at a time must pass through ``q + 1``.
    """
    sel = list(check_selection(H, S))
    if deficiency(H, sel) <= q:
        raise ValueError("selection is not above the threshold")
    while deficiency(H, sel) > q + 1:
        sel.pop()
    return tuple(sel)


def packing_violation(H: Hypergraph, k: int, q: int) -> Optional[EdgeSelection]:
    """A forbidden selection made of several vertex-disjoint pieces, if one exists.

    Meant for ``q >= 1`` once no single connected piece violates.  Each
    piece is a union ``W`` of connected edges spanning ``s > |W|`` edges;
    ``|W| + d`` of them give deficiency at least ``d <= s - |W|``.  Pieces
    are combined by depth-first search until the deficiencies reach
    ``q + 1`` within ``k`` edges.  The result is trimmed to deficiency
    exactly ``q + 1``.
    """
    if q < 1 or H.m == 0:
        return None
    parts = []
    for W, size, spanned in edge_connected_sets(H, max(k - 1 - H.r, 0)):
        if spanned > size:
            parts.append((size, spanned - size, W))
    if len(parts) < 2:
        return None
    parts.sort(key=lambda p: (p[0] + 1, p[2]))
    goal = q + 1

    def rec(start, used, got, cost, chosen):
        if got >= goal:
            return chosen
        for j in range(start, len(parts)):
            size, excess, W = parts[j]
            if W & used:
                continue
            d = min(excess, goal - got)
            if cost + size + d > k:
                continue
            hit = rec(j + 1, used | W, got + d, cost + size + d, chosen + [(W, size + d)])
            if hit is not None:
                return hit
        return None

    chosen = rec(0, 0, 0, 0, [])
    if chosen is None:
        return None
    sel = []
    for W, take in chosen:
        sel.extend([i for i, em in enumerate(H.edge_masks) if em & ~W == 0][:take])
    return trim_to_member(H, sorted(sel), q)


def find_violation(H: Hypergraph, k: int, q: int) -> Optional[EdgeSelection]:
    """Fast freeness decision through vertex sets.

    Returns a forbidden member as an edge selection, or ``None`` when the
    hypergraph is free.  A smallest connected violating vertex set ``W``
    gives ``|W| + q + 1`` of its spanned edges (lowest positions first).
    When no connected set violates and ``q >= 1``, several disjoint parts
    may still add up, which is settled by :func:`packing_violation`.
    """
    found = violating_sets(H, k, q)
    if found:
        _, wmask, need = found[0]
        inside = [i for i, em in enumerate(H.edge_masks) if em & ~wmask == 0]
        return tuple(inside[:need])
    return packing_violation(H, k, q)


def _verdict(H: Hypergraph, k: int, q: int) -> FreenessVerdict:
    """Decide through vertex sets.

    The witness of a non-free input is every edge (up to ``k``, lowest
    positions first) inside the cover of the violation found; it has at
    least the violation's deficiency.  The exact maximum deficiency can be
    far more expensive than the decision, so it is only searched for when
    ``max_deficiency_found`` is read.
    """
    if H.m == 0:
        return FreenessVerdict(True, None, None)
    hit = find_violation(H, k, q)
    if hit is None:
        return FreenessVerdict(True, None, _lazy=lambda: max_deficiency(H, k)[0])
    wmask = 0
    for i in hit:
        wmask |= H.edge_masks[i]
    inside = [i for i, em in enumerate(H.edge_masks) if em & ~wmask == 0]
    return FreenessVerdict(False, tuple(inside[:k]), _lazy=lambda: max_deficiency(H, k)[0])


def is_free(H: Hypergraph, params) -> FreenessVerdict:
    """Decide ``H(k, q)``-freeness: every ``i <= k`` edges cover ``>= i - q`` vertices."""
    p = as_params(params)
    if p.r != H.r:
        raise ValueError(f"params are for r={p.r}, hypergraph has r={H.r}")
    return _verdict(H, p.k, p.q)


def is_cbc(H: Hypergraph, k: int) -> FreenessVerdict:
    """Batch-code property: any ``i <= k`` edges cover at least ``i`` vertices."""
    if k < 1:
        raise ValueError("k must be at least 1")
    return _verdict(H, k, 0)


def is_f_free(H: Hypergraph, params) -> FreenessVerdict:
    """Decide ``F(k, q)``-freeness: only selections of exactly ``k`` edges count.

    A ``k``-selection with deficiency ``>= q + 1`` exists iff some vertex set
    of size ``<= k - q - 1`` spans at least ``k`` edges, so the search looks
    for the smallest vertex set spanning ``k`` edges.
    """
    p = as_params(params)
    if p.k < 2:
        raise ValueError("F(k, q) needs k >= 2")
    if p.r != H.r:
        raise ValueError(f"params are for r={p.r}, hypergraph has r={H.r}")
    k, q = p.k, p.q
    if H.m < k:
        return FreenessVerdict(True, None, None)
    size, wmask = min_cover_of(H, k)
    best = k - size
    if best <= q:
        return FreenessVerdict(True, None, best)
    inside = [i for i, em in enumerate(H.edge_masks) if em & ~wmask == 0]
    return FreenessVerdict(False, tuple(inside[:k]), best)


def min_cover_of(H: Hypergraph, t: int) -> tuple[int, int]:
    """Fewest vertices covered by ``t`` edges, with a vertex set achieving it.

    Works over unions of connected edges, packing vertex-disjoint pieces until together they span ``t`` edges.
    """
    if t > H.m:
        raise ValueError("fewer than t edges")
    for budget in range(H.r, H.n + 1):
        pieces = _spanning_pieces(H, budget)
        found = _pack_pieces(pieces, budget, t)
        if found is not None:
            return budget, found
    raise AssertionError("unreachable: all vertices span every edge")  # pragma: no cover


def _spanning_pieces(H: Hypergraph, limit: int) -> list[tuple[int, int, int]]:
    """``(size, spanned_edges, mask)`` for unions of connected edges up to ``limit`` vertices."""
    return [(size, spanned, W) for W, size, spanned in edge_connected_sets(H, limit)]


def _pack_pieces(pieces, budget, t):
    """Vertex-disjoint pieces of total size ``<= budget`` spanning ``>= t`` edges."""
    pieces = sorted((p for p in pieces if p[0] <= budget), key=lambda p: (-p[1] / p[0], p[2]))
    if not pieces:
        return None
    top = [0] * (budget + 1)
    for s, e, _ in pieces:
        top[s] = max(top[s], e)
    # unbounded knapsack, ignoring disjointness: an upper bound on what fits
    ub = [0] * (budget + 1)
    for b in range(1, budget + 1):
        ub[b] = max([ub[b - 1]] + [ub[b - s] + top[s] for s in range(1, b + 1) if top[s]])
    if ub[budget] < t:
        return None

    def rec(start, used, left, got):
        if got >= t:
            return used
        if got + ub[left] < t:
            return None
        for j in range(start, len(pieces)):
            s, e, m = pieces[j]
            if s > left or m & used:
                continue
            res = rec(j + 1, used | m, left - s, got + e)
            if res is not None:
                return res
        return None

    return rec(0, 0, budget, 0)


# -- decoding ------------------------------------------------------------------


def sdr_retrieve(H: Hypergraph, items) -> RetrievalPlan:
    """Assign each requested item (edge) to a distinct server (vertex) on it.

    Augmenting paths are tried in increasing item and vertex order, so the
    plan is deterministic.  When no complete plan exists the error carries a
    set of items whose edges jointly hold too few servers.
    """
    req = list(items)
    if len(set(req)) != len(req):
        raise ValueError("requested items must be distinct")
    req = list(check_selection(H, req))
    owner: dict[int, int] = {}
    assign: dict[int, int] = {}

    def augment(item, seen):
        for v in H.edges[item]:
            if v in seen:
                continue
            seen.add(v)
            if v not in owner or augment(owner[v], seen):
                owner[v] = item
                assign[item] = v
                return True
        return False

    for item in req:
        if not augment(item, set()):
            z_items, z_vertices = _hall_violator(H, item, owner)
            raise NoSDR(z_items, z_vertices)
    return RetrievalPlan(dict(sorted(assign.items())))


def _hall_violator(H, root, owner):
    items, verts = {root}, set()
    stack = [root]
    while stack:
        it = stack.pop()
        for v in H.edges[it]:
            if v not in verts:
                verts.add(v)
                nxt = owner[v]
                if nxt not in items:
                    items.add(nxt)
                    stack.append(nxt)
    return items, verts
