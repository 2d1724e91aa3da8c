"""Certificates for the combinatorial steps behind the upper bounds.

Each generator runs one argument on a concrete instance and records enough
data for the claimed facts to be rechecked: degree peeling, breadth-first
level growth in a free graph, the link of a heaviest ``(r-2)``-set, and the
splitting of a graph into maximal forbidden pieces.
"""

from __future__ import annotations

import itertools
import math
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .bounds import z_value
from .core import Hypergraph, as_params, check_selection, deficiency
from .errors import DisconnectedRoot, EmptyGraph, NotFree, TooLarge
from .freeness import find_violation, is_free, trim_to_member

DICHOTOMY_EDGE_LIMIT = 15


def _require_graph(G: Hypergraph):
    if G.r != 2:
        raise ValueError("this certificate is defined for graphs (r = 2)")


# -- degree peeling --------------------------------------------------------------


@dataclass(frozen=True)
class PeelCertificate:
    original_avg_degree: Fraction
    threshold: Fraction
    removal_order: tuple[int, ...]
    final_subgraph: Hypergraph
    final_vertices: tuple[int, ...]
    final_min_degree: Optional[int]

    def replay(self, G: Hypergraph) -> Hypergraph:
        gone = set(self.removal_order)
        return Hypergraph._trusted(
            G.n, G.r, [e for e in G.edges if not gone.intersection(e)], G.allow_multi
        )


def peel_min_degree(G: Hypergraph) -> PeelCertificate:
    """Delete vertices of degree at most ``d/2`` (``d = 2m/n`` of the input) until none is left.

    The threshold stays fixed; each deletion keeps the average degree at
    least ``d``, so whatever survives has minimum degree above ``d/2``.  The
    smallest eligible vertex is removed first.  Removed vertices stay as
    isolated labels of ``final_subgraph``.
    """
    _require_graph(G)
    if G.m == 0:
        raise EmptyGraph("peeling needs at least one edge")
    avg = Fraction(2 * G.m, G.n)
    thr = avg / 2
    deg = G.degrees()
    alive = [True] * G.n
    dead_edge = [False] * G.m
    order = []
    progress = True
    while progress:
        progress = False
        for v in range(G.n):
            if alive[v] and deg[v] <= thr:
                alive[v] = False
                order.append(v)
                for i in G.incidence[v]:
                    if not dead_edge[i]:
                        dead_edge[i] = True
                        for u in G.edges[i]:
                            deg[u] -= 1
                progress = True
                break
    final = Hypergraph._trusted(G.n, 2, [e for i, e in enumerate(G.edges) if not dead_edge[i]], G.allow_multi)
    kept = tuple(v for v in range(G.n) if alive[v])
    delta = min(deg[v] for v in kept) if kept else None
    return PeelCertificate(avg, thr, tuple(order), final, kept, delta)


def min_degree_core(G: Hypergraph, floor: int) -> Hypergraph:
    """Largest subgraph in which every non-isolated vertex has degree above ``floor``."""
    deg = G.degrees()
    alive = [d > 0 for d in deg]
    dead = [False] * G.m
    stack = [v for v in range(G.n) if alive[v] and deg[v] <= floor]
    while stack:
        v = stack.pop()
        if not alive[v]:
            continue
        alive[v] = False
        for i in G.incidence[v]:
            if not dead[i]:
                dead[i] = True
                for u in G.edges[i]:
                    deg[u] -= 1
                    if alive[u] and deg[u] <= floor:
                        stack.append(u)
    return G.remove_edges(i for i in range(G.m) if dead[i])


# -- breadth-first levels --------------------------------------------------------


@dataclass(frozen=True)
class BfsCertificate:
    root: int
    k: int
    q: int
    levels: tuple[tuple[int, ...], ...]
    tree_edges: tuple[int, ...]
    additional_edges: tuple[int, ...]
    additional_counts: dict  # vertex -> number of incident additional edges
    endpoint_levels: tuple[tuple[int, int], ...]  # level pair of each additional edge
    h: int
    h_star: int
    delta: int
    order: int
    claimA_lhs: int
    claimA_rhs: Optional[Fraction]
    checks: dict  # name -> "ok" | "violated" | "not_engaged"
    violations: tuple

    @property
    def level_sizes(self) -> tuple[int, ...]:
        return tuple(len(L) for L in self.levels)

    @property
    def all_hold(self) -> bool:
        return all(v != "violated" for v in self.checks.values())


def bfs_certificate(F: Hypergraph, root: int, k: int, q: int, check_free: bool = True) -> BfsCertificate:
    """Breadth-first levels from ``root`` and the growth facts they must satisfy.

    Works on the component of ``root``: ``delta`` and ``order`` are its
    minimum degree and vertex count.  Children are visited in ascending
    index.  For a multigraph only one copy of a tree edge is in the tree.

    Checks, with ``h = floor(k/(q+3))`` and ``h* = floor((k-q-1)/(q+3))``:

    * ``a``: vertices on levels ``0..h*-1`` meet at most ``q+1`` additional edges;
    * ``b``: ``l_1 >= delta-q-2`` and ``l_i >= (delta-q-2) l_(i-1)`` for ``2 <= i <= h*``;
    * ``claimA``: ``order > (delta-q-2)**h / (q+2)``;
    * when ``h = h* + 1``, ``refined_u`` and ``refined_w`` bound the additional
      edges of level ``h-1`` vertices toward levels ``h-2, h-1`` and of level
      ``h`` vertices toward level ``h-1`` by ``q+1``.

    ``b``, ``claimA`` and the refined checks are ``not_engaged`` unless
    ``delta > q + 2``.
    """
    _require_graph(F)
    if q < -1 or k < 2 * q + 6:
        raise ValueError("need q >= -1 and k >= 2q+6")
    if not 0 <= root < F.n:
        raise ValueError(f"root {root} outside the vertex range")
    if not F.incidence[root]:
        raise DisconnectedRoot(f"vertex {root} has no edges")
    if check_free:
        verdict = is_free(F, (2, k, q))
        if not verdict.free:
            raise NotFree(f"input contains a forbidden selection {verdict.witness}")

    level = {root: 0}
    parent_edge = {}
    queue = deque([root])
    nbrs = [sorted((e[1] if e[0] == v else e[0], i) for i in F.incidence[v] for e in (F.edges[i],)) for v in range(F.n)]
    while queue:
        v = queue.popleft()
        for u, i in nbrs[v]:
            if u not in level:
                level[u] = level[v] + 1
                parent_edge[u] = i
                queue.append(u)
    depth = max(level.values())
    levels = tuple(tuple(sorted(v for v in level if level[v] == d)) for d in range(depth + 1))
    tree = set(parent_edge.values())
    comp_edges = sorted({i for v in level for i in F.incidence[v]})
    extra = tuple(i for i in comp_edges if i not in tree)
    counts = {v: 0 for v in level}
    for i in extra:
        a, b = F.edges[i]
        counts[a] += 1
        counts[b] += 1
    ends = tuple((level[F.edges[i][0]], level[F.edges[i][1]]) for i in extra)
    delta = min(F.degree(v) for v in level)
    order = len(level)
    h = k // (q + 3)
    h_star = (k - q - 1) // (q + 3)
    sizes = [len(L) for L in levels] + [0] * (h + 2)
    checks = {}
    bad = []

    over = [v for v in level if level[v] <= h_star - 1 and counts[v] > q + 1]
    checks["a"] = "violated" if over else "ok"
    bad.extend(("a", v, counts[v]) for v in over)

    growth = delta - q - 2
    rhs = None
    if growth <= 0:
        checks["b"] = "not_engaged"
        checks["claimA"] = "not_engaged"
    else:
        fails = []
        if sizes[1] < growth:
            fails.append((1, sizes[1], growth))
        for i in range(2, h_star + 1):
            if sizes[i] < growth * sizes[i - 1]:
                fails.append((i, sizes[i], growth * sizes[i - 1]))
        checks["b"] = "violated" if fails else "ok"
        bad.extend(("b",) + f for f in fails)
        rhs = Fraction(growth**h, q + 2)
        checks["claimA"] = "ok" if order > rhs else "violated"
        if order <= rhs:
            bad.append(("claimA", order, rhs))
    if h == h_star + 1:
        if growth <= 0:
            checks["refined_u"] = checks["refined_w"] = "not_engaged"
        else:
            toward_u = {v: 0 for v in levels[h - 1]} if h - 1 <= depth else {}
            toward_w = {v: 0 for v in levels[h]} if h <= depth else {}
            for i, (la, lb) in zip(extra, ends):
                a, b = F.edges[i]
                for x, lx, ly in ((a, la, lb), (b, lb, la)):
                    if lx == h - 1 and ly in (h - 2, h - 1):
                        toward_u[x] += 1
                    if lx == h and ly == h - 1:
                        toward_w[x] += 1
            ru = [v for v, c in toward_u.items() if c > q + 1]
            rw = [v for v, c in toward_w.items() if c > q + 1]
            checks["refined_u"] = "violated" if ru else "ok"
            checks["refined_w"] = "violated" if rw else "ok"
            bad.extend(("refined_u", v, toward_u[v]) for v in ru)
            bad.extend(("refined_w", v, toward_w[v]) for v in rw)
    return BfsCertificate(
        root, k, q, levels, tuple(sorted(tree)), extra, counts, ends,
        h, h_star, delta, order, order, rhs, checks, tuple(bad),
    )


# -- link of a heaviest (r-2)-set ------------------------------------------------


@dataclass(frozen=True)
class LinkCertificate:
    s_star: tuple[int, ...]
    link_degree: int
    link_graph: Hypergraph
    inequality_lhs: Fraction
    inequality_holds: bool
    source_free: Optional[bool] = None
    link_free: Optional[bool] = None

    @property
    def transfer_holds(self) -> Optional[bool]:
        if self.source_free is None:
            return None
        return (not self.source_free) or bool(self.link_free)


def best_link(H: Hypergraph, params=None) -> LinkCertificate:
    """Link graph of the ``(r-2)``-set contained in the most edges.

    Ties go to the lexicographically smallest set.  The certificate checks
    ``d(S*) >= m C(r, 2) / C(n, r-2)`` and, given ``params = (r, k, q)``,
    that freeness of ``H`` carries over to the link for ``(2, k, q+r-2)``.
    For ``r = 2`` the set is empty and the link is ``H`` itself.
    """
    r, n = H.r, H.n
    if r < 2:
        raise ValueError("need r >= 2")
    if r == 2:
        s_star = ()
        kept = list(H.edges)
    else:
        tally: dict = {}
        for e in H.edges:
            for S in itertools.combinations(e, r - 2):
                tally[S] = tally.get(S, 0) + 1
        if tally:
            top = max(tally.values())
            s_star = min(S for S, c in tally.items() if c == top)
        else:
            s_star = tuple(range(r - 2))
        kept = [tuple(v for v in e if v not in s_star) for e in H.edges if set(s_star) <= set(e)]
    G = Hypergraph(n, 2, tuple(kept), allow_multi=H.allow_multi)
    lhs = Fraction(H.m * math.comb(r, 2), math.comb(n, r - 2))
    src = lnk = None
    if params is not None:
        pr, k, q = as_params(params)
        if pr != r:
            raise ValueError("params do not match the uniformity")
        src = is_free(H, (r, k, q)).free
        lnk = is_free(G, (2, k, q + r - 2)).free if G.m else True
    return LinkCertificate(s_star, G.m, G, lhs, G.m >= lhs, src, lnk)


# -- maximal forbidden pieces ----------------------------------------------------


@dataclass(frozen=True)
class ForbiddenPart:
    vertices: tuple[int, ...]
    edges: tuple[int, ...]  # positions in the original graph
    union_of_components: bool
    ratio_ok: Optional[bool]

    @property
    def excess(self) -> int:
        return len(self.edges) - len(self.vertices)


@dataclass(frozen=True)
class DecompositionCertificate:
    k: int
    q: int
    z: Optional[int]
    forbidden_parts: tuple[ForbiddenPart, ...]
    remainder: Hypergraph
    remainder_edges: tuple[int, ...]
    verdict: str  # "free_remainder" or "maximal_at_k"
    edge_partition_check: bool
    stuck_at_k: Optional[tuple[int, ...]] = None


def _grow(G, alive_v, alive_e, edges, verts, k):
    """Apply the two extension moves until neither applies or ``k`` edges are reached."""
    E = set(edges)
    V = set(verts)
    while len(E) < k:
        move = None
        for i in sorted(alive_e):
            if i in E:
                continue
            a, b = G.edges[i]
            if (a in V) != (b in V):
                move = (i, b if a in V else a)
                break
        if move is None:
            spare = [v for v in sorted(alive_v) if v not in V]
            inner = [i for i in sorted(alive_e) if i not in E and set(G.edges[i]) <= V]
            if inner and spare:
                move = (inner[0], spare[0])
        if move is None:
            break
        E.add(move[0])
        V.add(move[1])
    return E, V


def _component_union(G, alive_v, alive_e, k, q):
    """A union of residual components with ``e - v = q + 1`` and ``1 <= e < k``, if any."""
    adj = {v: set() for v in alive_v}
    for i in alive_e:
        a, b = G.edges[i]
        adj[a].add(b)
        adj[b].add(a)
    seen = set()
    comps = []
    for v in sorted(alive_v):
        if v in seen:
            continue
        stack, comp = [v], {v}
        seen.add(v)
        while stack:
            x = stack.pop()
            for y in adj[x]:
                if y not in seen:
                    seen.add(y)
                    comp.add(y)
                    stack.append(y)
        ce = [i for i in alive_e if G.edges[i][0] in comp]
        if len(ce) < k:
            comps.append((tuple(sorted(comp)), tuple(sorted(ce))))
    # states: (edges used, excess) -> chosen component indices, smallest first
    states = {(0, 0): ()}
    for ci, (cv, ce) in enumerate(comps):
        step = dict(states)
        for (e, x), pick in states.items():
            ne, nx = e + len(ce), x + len(ce) - len(cv)
            if ne < k and (ne, nx) not in step:
                step[(ne, nx)] = pick + (ci,)
        states = step
    hits = sorted((pick, e) for (e, x), pick in states.items() if x == q + 1 and e >= 1)
    if not hits:
        return None
    pick = hits[0][0]
    verts = tuple(sorted(v for ci in pick for v in comps[ci][0]))
    edges = tuple(sorted(i for ci in pick for i in comps[ci][1]))
    return edges, verts


def _is_component_union(G, alive_e, E, V):
    for i in alive_e:
        a, b = G.edges[i]
        if (a in V or b in V) and i not in E:
            return False
    return True


def decompose_maximal_forbidden(G: Hypergraph, k: int, q: int) -> DecompositionCertificate:
    """Split off vertex-disjoint forbidden pieces with fewer than ``k`` edges.

    Each round takes a forbidden member of the residual graph, trimmed to
    excess exactly ``q + 1``, and grows it by the two extension moves
    (lowest positions first): absorb an edge leaving the piece with its outer
    vertex, or absorb an edge spanned by the piece together with a vertex
    outside it.  A piece that stops growing below ``k`` edges must be a
    union of residual components; it is removed with its vertices.  If growth
    reaches ``k`` edges, a union of components with the right excess is
    looked for directly; if there is none the verdict is ``maximal_at_k``.
    """
    _require_graph(G)
    if q < -1 or k < q + 3:
        raise ValueError("need q >= -1 and k >= q+3")
    if G.n < k - q - 1:
        raise ValueError("need n >= k-q-1")
    z = z_value(k, q)
    alive_v = set(range(G.n))
    alive_e = set(range(G.m))
    parts = []
    verdict = "free_remainder"
    stuck = None
    while True:
        positions = sorted(alive_e)
        R = G.subhypergraph(positions)
        hit = find_violation(R, k, q) if R.m else None
        if hit is None:
            break
        member = [positions[i] for i in trim_to_member(R, hit, q)] if deficiency(R, hit) > q + 1 else [positions[i] for i in hit]
        cov = {v for i in member for v in G.edges[i]}
        E, V = _grow(G, alive_v, alive_e, member, cov, k)
        if len(E) >= k:
            found = _component_union(G, alive_v, alive_e, k, q)
            if found is None:
                verdict = "maximal_at_k"
                stuck = tuple(sorted(E))
                break
            E, V = set(found[0]), set(found[1])
        union = _is_component_union(G, alive_e, E, V)
        ratio = None
        if z is not None:
            ratio = Fraction(len(E), len(V)) <= Fraction(z, z - q - 1)
        parts.append(ForbiddenPart(tuple(sorted(V)), tuple(sorted(E)), union, ratio))
        alive_v -= V
        alive_e -= E
        if not union:
            # the dichotomy failed; stop rather than loop on a broken residual
            break
    rest = tuple(sorted(alive_e))
    covered = sorted(i for p in parts for i in p.edges) + list(rest)
    partition_ok = sorted(covered) == list(range(G.m)) and len(covered) == len(set(covered))
    return DecompositionCertificate(
        k, q, z, tuple(parts), G.subhypergraph(rest), rest, verdict, partition_ok, stuck
    )


# -- exhaustive check of the dichotomy -------------------------------------------


@dataclass(frozen=True)
class DichotomyResult:
    holds: bool
    maximal_count: int
    counterexample: Optional[tuple[tuple[int, ...], tuple[int, ...]]] = None  # (edges, vertices)


def verify_lemma51(G: Hypergraph, k: int, q: int, edge_limit: int = DICHOTOMY_EDGE_LIMIT) -> DichotomyResult:
    """Enumerate every maximal forbidden subgraph and test the dichotomy.

    A forbidden subgraph is an edge set ``E'`` with a vertex set ``V'``
    containing its cover, ``|E'| - |V'| = q + 1`` and ``1 <= |E'| <= k``.
    It extends to a larger order exactly when some proper superset ``V''``
    spans at least ``|V''| + q + 1 <= k`` edges, so maximality depends on
    ``V'`` only.  Each maximal one must have ``k`` edges or be a union of
    components (all edges meeting ``V'`` belong to ``E'``).
    """
    _require_graph(G)
    if G.m > edge_limit:
        raise TooLarge(f"m={G.m} > {edge_limit}")
    if G.n < k - q - 1:
        raise ValueError("need n >= k-q-1")
    n = G.n
    emask = G.edge_masks
    full = (1 << n) - 1
    spanned = [0] * (1 << n)
    for W in range(1 << n):
        spanned[W] = sum(1 for em in emask if em & ~W == 0)
    pop = [bin(W).count("1") for W in range(1 << n)]
    grows = [False] * (1 << n)
    for W in range(1 << n):
        # a proper superset that can host a larger forbidden subgraph
        rest = full & ~W
        sub = rest
        while sub:
            X = W | sub
            nx = pop[X] + q + 1
            if nx <= k and spanned[X] >= nx:
                grows[W] = True
                break
            sub = (sub - 1) & rest
    touching = [sum(1 << i for i, em in enumerate(emask) if em & W) for W in range(1 << n)]
    count = 0
    for size in range(1, min(k, G.m) + 1):
        nv = size - q - 1
        if nv < 0 or nv > n:
            continue
        for E in itertools.combinations(range(G.m), size):
            cov = 0
            for i in E:
                cov |= emask[i]
            extra = nv - pop[cov]
            if extra < 0:
                continue
            outside = [v for v in range(n) if not cov >> v & 1]
            ebits = sum(1 << i for i in E)
            for add in itertools.combinations(outside, extra):
                W = cov | sum(1 << v for v in add)
                if grows[W]:
                    continue
                count += 1
                if size == k or touching[W] == ebits:
                    continue
                verts = tuple(v for v in range(n) if W >> v & 1)
                return DichotomyResult(False, count, (tuple(E), verts))
    return DichotomyResult(True, count)
