"""Shared generators and independent oracles for the test suite.

The oracles here deliberately avoid the package's search code: they
enumerate subsets with itertools and compute covers with plain sets.
"""

from __future__ import annotations

import itertools
import math
from functools import lru_cache

import networkx as nx
import numpy as np

from turanbatch import Hypergraph


def naive_max_deficiency(edges, k):
    """Largest ``|S| - |cover(S)|`` over nonempty selections of at most ``k`` edges."""
    best = None
    for s in range(1, min(k, len(edges)) + 1):
        for S in itertools.combinations(range(len(edges)), s):
            d = s - len(set().union(*(edges[i] for i in S)))
            if best is None or d > best:
                best = d
    return best


def naive_free(edges, k, q):
    d = naive_max_deficiency(edges, k)
    return d is None or d <= q


def naive_f_free(edges, k, q):
    """No ``k`` edges inside a set of ``k - q - 1`` vertices."""
    if len(edges) < k:
        return True
    for S in itertools.combinations(range(len(edges)), k):
        if len(set().union(*(edges[i] for i in S))) <= k - q - 1:
            return False
    return True


def naive_ex(n, r, k, q, kind="ex"):
    """Turán number by trying every edge set, largest first."""
    slots = list(itertools.combinations(range(n), r))
    test = naive_free if kind == "ex" else naive_f_free
    for m in range(len(slots), -1, -1):
        for E in itertools.combinations(slots, m):
            if test([set(e) for e in E], k, q):
                return m
    return 0


def atlas_graphs(max_nodes=6):
    """Every simple graph on at most ``max_nodes`` vertices, up to isomorphism."""
    out = []
    for g in nx.graph_atlas_g():
        if g.number_of_nodes() > max_nodes:
            break
        if g.number_of_nodes() == 0:
            continue
        out.append(Hypergraph(g.number_of_nodes(), 2, tuple(tuple(e) for e in g.edges())))
    return out


@lru_cache(maxsize=None)
def three_graphs(n=6, max_edges=12):
    """All 3-graphs on ``n`` labelled points with at most ``max_edges`` edges, up to isomorphism.

    Built level by level: every class with ``m + 1`` edges arises by adding a
    triple to some class with ``m`` edges.  Canonical form is the smallest
    image bitmask over all vertex permutations.
    """
    triples = list(itertools.combinations(range(n), 3))
    index = {t: i for i, t in enumerate(triples)}
    perms = list(itertools.permutations(range(n)))
    table = np.array(
        [[index[tuple(sorted(p[v] for v in t))] for t in triples] for p in perms], dtype=np.int64
    )
    weights = np.int64(1) << table  # perms x triples

    def canon(bits):
        return int(weights[:, bits].sum(axis=1).min())

    level = {0}
    found = [0]
    for _ in range(max_edges):
        nxt = set()
        for mask in level:
            bits = [i for i in range(len(triples)) if mask >> i & 1]
            for j in range(len(triples)):
                if not mask >> j & 1:
                    nxt.add(canon(bits + [j]))
        level = nxt
        found.extend(sorted(level))
    return tuple(
        Hypergraph(n, 3, tuple(triples[i] for i in range(len(triples)) if mask >> i & 1)) for mask in found
    )


def random_multigraph(rng, n_max=7, r_max=3, m_max=10):
    r = int(rng.integers(2, r_max + 1))
    n = int(rng.integers(r, n_max + 1))
    slots = list(itertools.combinations(range(n), r))
    m = int(rng.integers(1, m_max + 1))
    picks = rng.integers(0, len(slots), size=m)
    return Hypergraph(n, r, tuple(slots[i] for i in picks), allow_multi=True)


def edge_sets(H):
    return [set(e) for e in H.edges]


def choose(n, r):
    return math.comb(n, r)
