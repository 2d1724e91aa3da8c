"""Uniform (multi)hypergraphs, parameter triples and deficiency arithmetic.

A hypergraph here is a value object: ``n`` vertices labelled ``0..n-1`` and a
canonically ordered tuple of ``r``-element edges.  Selections of edges are
plain tuples of edge positions, so repeated edges of a multihypergraph are
distinguished by position.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from .errors import (
    BadProbability,
    DuplicateEdge,
    EmptySelection,
    IndexOutOfRange,
    KTooSmall,
    ParseError,
    QTooSmall,
    UniformityMismatch,
    UniformityTooSmall,
    VertexOutOfRange,
)

Edge = tuple[int, ...]
EdgeSelection = tuple[int, ...]


@dataclass(frozen=True)
class ParamTriple:
    r: int
    k: int
    q: int

    def __post_init__(self):
        validate_params(self.r, self.k, self.q)

    def __iter__(self):
        return iter((self.r, self.k, self.q))


def validate_params(r: int, k: int, q: int) -> ParamTriple:
    """Check ``r >= 2``, ``q >= -r + 1`` and ``k >= q + r + 1``.

    >>> validate_params(2, 6, 0)
    ParamTriple(r=2, k=6, q=0)
    """
    if r < 2:
        raise UniformityTooSmall(f"r={r} < 2")
    if q <= -r:
        raise QTooSmall(f"q={q} <= -r={-r}: a single edge is forbidden, ex(n, H)=0")
    if k < q + r + 1:
        raise KTooSmall(f"k={k} < q+r+1={q + r + 1}")
    # bypass __post_init__ recursion
    p = object.__new__(ParamTriple)
    object.__setattr__(p, "r", r)
    object.__setattr__(p, "k", k)
    object.__setattr__(p, "q", q)
    return p


def as_params(params) -> ParamTriple:
    if isinstance(params, ParamTriple):
        return params
    r, k, q = params
    return validate_params(r, k, q)


def _mask(vertices: Iterable[int]) -> int:
    m = 0
    for v in vertices:
        m |= 1 << v
    return m


@dataclass(frozen=True)
class Hypergraph:
    """An ``r``-uniform hypergraph on vertices ``0..n-1``.

    Edges are normalised on construction: each edge is sorted and the edge
    list is sorted lexicographically, so equal hypergraphs compare and
    serialise identically.  With ``allow_multi`` repeated edges are kept as
    adjacent entries.
    """

    n: int
    r: int
    edges: tuple[Edge, ...] = ()
    allow_multi: bool = False
    _checked: bool = field(default=False, repr=False, compare=False)

    def __post_init__(self):
        if self._checked:
            return
        if self.n < 0:
            raise ValueError("n must be non-negative")
        if self.r < 1:
            raise ValueError("r must be positive")
        norm = []
        for e in self.edges:
            t = tuple(sorted(int(v) for v in e))
            if len(t) != self.r:
                raise UniformityMismatch(f"edge {e} does not have {self.r} vertices")
            if len(set(t)) != self.r:
                raise ValueError(f"edge {e} repeats a vertex")
            if t[0] < 0 or t[-1] >= self.n:
                raise VertexOutOfRange(f"edge {e} leaves [0, {self.n})")
            norm.append(t)
        norm.sort()
        if not self.allow_multi:
            for a, b in zip(norm, norm[1:]):
                if a == b:
                    raise DuplicateEdge(f"repeated edge {a} in a simple hypergraph")
        object.__setattr__(self, "edges", tuple(norm))
        object.__setattr__(self, "_checked", True)

    @classmethod
    def _trusted(cls, n, r, edges, allow_multi):
        return cls(n, r, tuple(edges), allow_multi, _checked=True)

    @classmethod
    def complete(cls, n: int, r: int) -> "Hypergraph":
        return cls._trusted(n, r, itertools.combinations(range(n), r), False)

    @property
    def m(self) -> int:
        return len(self.edges)

    def __len__(self):
        return len(self.edges)

    @cached_property
    def edge_masks(self) -> tuple[int, ...]:
        """Vertex bitmask of every edge."""
        return tuple(_mask(e) for e in self.edges)

    @cached_property
    def has_repeats(self) -> bool:
        return any(a == b for a, b in zip(self.edges, self.edges[1:]))

    @cached_property
    def incidence(self) -> tuple[tuple[int, ...], ...]:
        """For each vertex, the positions of edges containing it."""
        inc = [[] for _ in range(self.n)]
        for i, e in enumerate(self.edges):
            for v in e:
                inc[v].append(i)
        return tuple(tuple(x) for x in inc)

    @cached_property
    def edge_neighbours(self) -> tuple[int, ...]:
        """Bitmask over edge positions of edges sharing a vertex with each edge."""
        out = []
        for i, e in enumerate(self.edges):
            nb = 0
            for v in e:
                for j in self.incidence[v]:
                    nb |= 1 << j
            out.append(nb & ~(1 << i))
        return tuple(out)

    def degree(self, v: int) -> int:
        return len(self.incidence[v])

    def degrees(self) -> list[int]:
        return [len(x) for x in self.incidence]

    def remove_edges(self, positions: Iterable[int]) -> "Hypergraph":
        drop = set(positions)
        kept = [e for i, e in enumerate(self.edges) if i not in drop]
        return Hypergraph._trusted(self.n, self.r, kept, self.allow_multi)

    def subhypergraph(self, positions: Iterable[int]) -> "Hypergraph":
        pos = sorted(set(positions))
        return Hypergraph._trusted(self.n, self.r, [self.edges[i] for i in pos], self.allow_multi)

    def add_edges(self, edges: Iterable[Sequence[int]]) -> "Hypergraph":
        return Hypergraph(self.n, self.r, self.edges + tuple(tuple(e) for e in edges), self.allow_multi)

    def multiplicity(self, edge: Sequence[int]) -> int:
        return self.edges.count(tuple(sorted(edge)))

    def as_multi(self) -> "Hypergraph":
        return Hypergraph._trusted(self.n, self.r, self.edges, True)


def check_selection(H: Hypergraph, S: Iterable[int]) -> EdgeSelection:
    sel = tuple(sorted(set(int(i) for i in S)))
    if sel and (sel[0] < 0 or sel[-1] >= H.m):
        raise IndexOutOfRange(f"selection {sel} not within [0, {H.m})")
    return sel


def cover(H: Hypergraph, S: Iterable[int]) -> frozenset[int]:
    """Union of the selected edges as a vertex set."""
    sel = check_selection(H, S)
    out = set()
    for i in sel:
        out.update(H.edges[i])
    return frozenset(out)


def deficiency(H: Hypergraph, S: Iterable[int]) -> int:
    """``|S| - |cover(S)|``; a batch code requires this to be at most 0."""
    sel = check_selection(H, S)
    if not sel:
        raise EmptySelection("deficiency of the empty selection is undefined")
    return len(sel) - len(cover(H, sel))


def components(H: Hypergraph, S: Iterable[int]) -> list[EdgeSelection]:
    """Split a selection into maximal parts connected through shared vertices.

    Parts are returned sorted by their smallest position.
    """
    sel = check_selection(H, S)
    parent = {i: i for i in sel}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    owner = {}
    for i in sel:
        for v in H.edges[i]:
            if v in owner:
                a, b = find(owner[v]), find(i)
                if a != b:
                    parent[max(a, b)] = min(a, b)
            else:
                owner[v] = i
    groups: dict[int, list[int]] = {}
    for i in sel:
        groups.setdefault(find(i), []).append(i)
    return [tuple(g) for _, g in sorted(groups.items())]


# -- text format ---------------------------------------------------------------

FLAVOURS = ("simple", "multi")


def write_hypergraph(H: Hypergraph) -> bytes:
    flavour = "multi" if H.allow_multi else "simple"
    lines = [f"{H.n} {H.r} {H.m} {flavour}"]
    lines.extend(" ".join(map(str, e)) for e in H.edges)
    return ("\n".join(lines) + "\n").encode("utf-8")


def read_hypergraph(data: bytes | str) -> Hypergraph:
    """Parse the line-oriented text format.

    The header is ``n r m flavor``; each of the next ``m`` lines lists ``r``
    vertex indices.  ``#`` starts a comment.
    """
    if isinstance(data, bytes):
        try:
            data = data.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise ParseError(f"not UTF-8: {exc}") from None
    rows = []
    for lineno, raw in enumerate(data.splitlines(), start=1):
        text = raw.split("#", 1)[0].strip()
        if text:
            rows.append((lineno, text.split()))
    if not rows:
        raise ParseError("missing header", 1)
    lineno, head = rows[0]
    if len(head) != 4:
        raise ParseError("header must be 'n r m flavor'", lineno)
    try:
        n, r, m = (int(x) for x in head[:3])
    except ValueError:
        raise ParseError("non-integer header field", lineno) from None
    flavour = head[3]
    if flavour not in FLAVOURS:
        raise ParseError(f"flavor must be one of {FLAVOURS}", lineno)
    if n < 0 or r < 1 or m < 0:
        raise ParseError("header values out of range", lineno)
    body = rows[1:]
    if len(body) != m:
        line = body[m][0] if len(body) > m else lineno
        raise ParseError(f"header declares {m} edges, found {len(body)}", line)
    edges = []
    seen = set()
    for lineno, tokens in body:
        try:
            e = tuple(int(x) for x in tokens)
        except ValueError:
            raise ParseError("non-integer vertex", lineno) from None
        if len(e) != r:
            raise UniformityMismatch(f"expected {r} vertices, got {len(e)}", lineno)
        if len(set(e)) != r:
            raise ParseError("edge repeats a vertex", lineno)
        if min(e) < 0 or max(e) >= n:
            raise VertexOutOfRange(f"vertex outside [0, {n})", lineno)
        key = tuple(sorted(e))
        if flavour == "simple" and key in seen:
            raise DuplicateEdge(f"repeated edge {key}", lineno)
        seen.add(key)
        edges.append(key)
    return Hypergraph(n, r, tuple(edges), flavour == "multi")


# -- random model --------------------------------------------------------------


def make_rng(seed) -> np.random.Generator:
    """The package's RNG: numpy's PCG64 seeded with ``seed``."""
    return np.random.default_rng(seed)


def random_uniform(n: int, r: int, p: float, seed=None, rng=None) -> Hypergraph:
    """Binomial random ``r``-graph: each ``r``-subset is an edge with probability ``p``.

    Candidate edges are visited in lexicographic order and one uniform draw
    is taken per candidate, so a given ``(seed, n, r, p)`` always yields the
    same hypergraph.
    """
    if not (0.0 <= p <= 1.0) or math.isnan(p):
        raise BadProbability(f"p={p} outside [0, 1]")
    if n < r:
        raise ValueError(f"n={n} < r={r}")
    if rng is None:
        rng = make_rng(seed)
    cand = list(itertools.combinations(range(n), r))
    keep = rng.random(len(cand)) < p
    return Hypergraph._trusted(n, r, [e for e, k in zip(cand, keep) if k], False)
