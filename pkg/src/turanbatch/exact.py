"""Exact Turán numbers on small vertex sets.

Two independent searches are provided.  ``bruteforce`` is exhaustive: the
candidate ``r``-sets are split into two halves, every subset of each half is
tested with numpy popcounts, and free halves are then combined pairwise.
``branch_and_bound`` walks the candidates in lexicographic order with an
incremental freeness check.  Both reduce freeness to counting: a family is
violated exactly when some vertex set ``W`` carries at least ``need(W)``
edges, with the threshold depending on the mode.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Optional

import numpy as np

from .core import Hypergraph, as_params
from .errors import InfeasibleExact, KTooSmall, TooLarge

MODES = ("branch_and_bound", "bruteforce")
BRUTEFORCE_LIMIT = 24
BNB_LIMIT = 35
MULTI_BRUTE_LIMIT = 2_000_000


@dataclass(frozen=True)
class ExactResult:
    value: int
    witness: Hypergraph
    mode: str
    explored_nodes: int
    params: tuple
    n: int
    kind: str = "ex"
    v: Optional[int] = None
    extra: dict = field(default_factory=dict, compare=False)

    def as_dict(self) -> dict:
        r, k, q = self.params
        out = {
            "kind": self.kind,
            "n": self.n,
            "r": r,
            "k": k,
            "q": q,
            "value": self.value,
            "mode": self.mode,
            "explored_nodes": self.explored_nodes,
            "witness": [list(e) for e in self.witness.edges],
        }
        if self.v is not None:
            out["v"] = self.v
        return out


# -- the counting reformulation --------------------------------------------------


def multiplicity_cap(r: int, k: int, q: int) -> int:
    """Largest multiplicity a single edge can have in a free multihypergraph.

    ``mu`` parallel copies have deficiency ``mu - r``, so ``mu <= q + r``
    (and ``q + r < k`` holds for valid parameters).
    """
    return max(0, q + r)


def _thresholds(n: int, r: int, k: int, q: int, kind: str, cap: int) -> list[tuple[int, int]]:
    """Vertex sets that can be overloaded, as ``(vertex_mask, need)``.

    For ``kind="ex"`` a set ``W`` with ``|W| <= k - q - 1`` is overloaded by
    ``max(|W| + q + 1, 1)`` edges (when that is at most ``k``); for
    ``kind="f"`` by ``k`` edges.  Sets that could never carry ``need`` edges
    are dropped.
    """
    out = []
    for size in range(1, min(n, k - q - 1) + 1):
        need = k if kind == "f" else max(size + q + 1, 1)
        if need > k or math.comb(size, r) * cap < need:
            continue
        for W in itertools.combinations(range(n), size):
            out.append((sum(1 << v for v in W), need))
    return out


def _candidates(n: int, r: int) -> list[tuple[int, ...]]:
    return list(itertools.combinations(range(n), r))


def _setup(n, params, kind):
    r, k, q = params
    if kind == "f" and k < 2:
        raise KTooSmall("the k-edge family needs k >= 2")
    cap = multiplicity_cap(r, k, q) if kind == "m" else 1
    cand = _candidates(n, r)
    walls = _thresholds(n, r, k, q, "f" if kind == "f" else "ex", cap)
    return r, k, q, cap, cand, walls


def _witness(n, r, cand, mult, multi):
    edges = []
    for e, t in zip(cand, mult):
        edges.extend([e] * t)
    return Hypergraph._trusted(n, r, edges, multi)


# -- brute force -----------------------------------------------------------------


def _half_table(masks, walls_inside):
    """All subsets of a half: sizes and per-wall edge counts."""
    h = len(masks)
    subs = np.arange(1 << h, dtype=np.uint64)
    sizes = np.bitwise_count(subs).astype(np.int16)
    counts = np.empty((1 << h, len(walls_inside)), dtype=np.int16)
    for j, inside in enumerate(walls_inside):
        counts[:, j] = np.bitwise_count(subs & np.uint64(inside))
    return subs, sizes, counts


def _bruteforce_simple(n, r, cand, walls, max_slots):
    N = len(cand)
    if N > max_slots:
        raise TooLarge(f"C(n,r)={N} exceeds the brute-force limit {max_slots}")
    h = N // 2
    lo, hi = cand[:h], cand[h:]
    emask = [sum(1 << v for v in e) for e in cand]
    need = np.array([w[1] for w in walls], dtype=np.int16)
    inside_lo = [sum(1 << i for i in range(h) if emask[i] & ~w == 0) for w, _ in walls]
    inside_hi = [sum(1 << (i - h) for i in range(h, N) if emask[i] & ~w == 0) for w, _ in walls]
    sa, za, ca = _half_table(lo, inside_lo)
    sb, zb, cb = _half_table(hi, inside_hi)
    oka = ~(ca >= need).any(axis=1) if walls else np.ones(len(sa), bool)
    okb = ~(cb >= need).any(axis=1) if walls else np.ones(len(sb), bool)
    sa, za, ca = sa[oka], za[oka], ca[oka]
    sb, zb, cb = sb[okb], zb[okb], cb[okb]
    # order each half by the lexicographic order of its sorted slot tuple
    def lex_rank(subs, width, pad):
        keys = [tuple(i for i in range(width) if int(s) >> i & 1) + pad for s in subs]
        order = sorted(range(len(subs)), key=keys.__getitem__)
        rank = np.empty(len(subs), dtype=np.int64)
        rank[order] = np.arange(len(subs))
        return rank

    rank_b = lex_rank(sb, N - h, ())
    rank_a = lex_rank(sa, h, (N,))
    best, best_key, explored = -1, None, 0
    top_b = int(zb.max())
    for ia in np.argsort(-za, kind="stable"):
        if int(za[ia]) + top_b < best:
            break
        explored += 1
        ok = ~((ca[ia] + cb) >= need).any(axis=1) if walls else np.ones(len(sb), bool)
        if not ok.any():
            continue
        tot = int(za[ia]) + int(zb[ok].max())
        if tot < best:
            continue
        pick = ok & (zb == tot - za[ia])
        ib = int(np.flatnonzero(pick)[np.argmin(rank_b[pick])])
        key = (int(rank_a[ia]), int(rank_b[ib]))
        if tot > best or key < best_key:
            best, best_key, chosen = tot, key, (int(sa[ia]), int(sb[ib]))
    a, b = chosen
    mult = [a >> i & 1 for i in range(h)] + [b >> i & 1 for i in range(N - h)]
    return best, mult, explored


def _bruteforce_multi(n, r, cand, walls, cap):
    N = len(cand)
    if (cap + 1) ** N > MULTI_BRUTE_LIMIT:
        raise TooLarge(f"{cap + 1}^{N} multiplicity vectors exceed the brute-force limit")
    emask = [sum(1 << v for v in e) for e in cand]
    inside = [[i for i in range(N) if emask[i] & ~w == 0] for w, _ in walls]
    best, best_vec, explored = -1, None, 0
    # descending product order visits larger multiplicities on early slots first
    for vec in itertools.product(range(cap, -1, -1), repeat=N):
        explored += 1
        tot = sum(vec)
        if tot <= best:
            continue
        if any(sum(vec[i] for i in ins) >= need for ins, (_, need) in zip(inside, walls)):
            continue
        best, best_vec = tot, vec
    return best, list(best_vec), explored


# -- branch and bound ------------------------------------------------------------


def _branch_and_bound(n, r, cand, walls, cap, ceiling):
    N = len(cand)
    if N > BNB_LIMIT:
        raise TooLarge(f"C(n,r)={N} exceeds the branch-and-bound limit {BNB_LIMIT}")
    emask = [sum(1 << v for v in e) for e in cand]
    need = [w[1] for w in walls]
    touch = [[j for j, (w, _) in enumerate(walls) if emask[i] & ~w == 0] for i in range(N)]
    cnt = [0] * len(walls)
    mult = [0] * N
    state = {"best": -1, "vec": None, "nodes": 0}
    top = min(ceiling, N * cap)

    def fits(i, t):
        return all(cnt[j] + t < need[j] for j in touch[i])

    def go(i, count):
        state["nodes"] += 1
        if count > state["best"]:
            state["best"], state["vec"] = count, mult[:]
        if i == N or state["best"] >= top:
            return
        if count + (N - i) * cap <= state["best"]:
            return
        # the first candidate is forced: any nonempty answer can be relabelled
        # to contain {0, ..., r-1}, and a lexicographically least maximiser does
        lowest = 1 if i == 0 and cap > 0 else 0
        for t in range(cap, lowest - 1, -1):
            if t and not fits(i, t):
                continue
            for j in touch[i]:
                cnt[j] += t
            mult[i] = t
            go(i + 1, count + t)
            mult[i] = 0
            for j in touch[i]:
                cnt[j] -= t
            if state["best"] >= top:
                return

    if N == 0:
        return 0, [], 1
    if cap == 0 or not fits(0, 1):
        return 0, [0] * N, 1
    go(0, 0)
    return state["best"], state["vec"], state["nodes"]


# -- public entry points ---------------------------------------------------------


def _normalise(params):
    r, k, q = (int(x) for x in params)
    return r, k, q


def _solve(n, params, kind, mode, max_slots):
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}")
    r, k, q = _normalise(params)
    if r >= 2 and q <= -r:
        # a single edge is already forbidden
        return ExactResult(0, Hypergraph._trusted(n, r, (), kind == "m"), mode, 0, (r, k, q), n, kind)
    as_params((r, k, q))
    if n < 0:
        raise InfeasibleExact(n, "n must be non-negative")
    r, k, q, cap, cand, walls = _setup(n, (r, k, q), kind)
    if not walls:
        # nothing can be overloaded: every candidate at full multiplicity
        mult = [cap] * len(cand)
        W = _witness(n, r, cand, mult, kind == "m")
        v = k - q - 1 if kind == "f" else None
        return ExactResult(sum(mult), W, mode, 0, (r, k, q), n, kind, v)
    if mode == "bruteforce":
        if kind == "m":
            value, mult, nodes = _bruteforce_multi(n, r, cand, walls, cap)
        else:
            value, mult, nodes = _bruteforce_simple(n, r, cand, walls, max_slots)
    else:
        if len(cand) > BNB_LIMIT:
            raise TooLarge(f"C(n,r)={len(cand)} exceeds the branch-and-bound limit {BNB_LIMIT}")
        ceiling = _ceiling(n, (r, k, q), kind)
        value, mult, nodes = _branch_and_bound(n, r, cand, walls, cap, ceiling)
    W = _witness(n, r, cand, mult, kind == "m")
    v = k - q - 1 if kind == "f" else None
    return ExactResult(value, W, mode, nodes, (r, k, q), n, kind, v)


@lru_cache(maxsize=None)
def _cached_value(n, params, kind):
    return _solve(n, params, kind, "branch_and_bound", BRUTEFORCE_LIMIT).value


def _ceiling(n, params, kind) -> int:
    """``floor(n * ex(n-1) / (n - r))``: deleting a vertex keeps freeness,
    so averaging over the ``n`` vertex-deleted subgraphs caps ``ex(n)``."""
    r = params[0]
    if n <= r:
        return math.comb(n, r) * (multiplicity_cap(*params) if kind == "m" else 1)
    return n * _cached_value(n - 1, params, kind) // (n - r)


def exact_ex(n: int, params, mode: str = "branch_and_bound", max_slots: int = BRUTEFORCE_LIMIT) -> ExactResult:
    """Largest number of edges of an ``H(k, q)``-free simple ``r``-graph on ``n`` vertices.

    ``params`` may be a raw ``(r, k, q)`` tuple; ``q <= -r`` gives 0.
    Brute force is limited to ``C(n, r) <= max_slots`` candidate edges
    (24 by default) and branch and bound to 35 (beyond that the search takes minutes).
    """
    return _solve(n, params, "ex", mode, max_slots)


def exact_f(n: int, params, mode: str = "branch_and_bound", max_slots: int = BRUTEFORCE_LIMIT) -> ExactResult:
    """Largest ``F(k, q)``-free ``r``-graph on ``n`` vertices.

    This is ``f(n, v, k) - 1`` with ``v = k - q - 1`` (reported as ``.v``):
    no ``v`` vertices may carry ``k`` edges.
    """
    return _solve(n, params, "f", mode, max_slots)


def exact_m(n: int, r: int, k: int, mode: str = "branch_and_bound") -> ExactResult:
    """Most items of an ``r``-uniform batch code on ``n`` servers serving any ``k`` requests.

    The search runs over multihypergraphs with multiplicities capped at
    :func:`multiplicity_cap` for ``q = 0``.
    """
    return _solve(n, (r, k, 0), "m", mode, BRUTEFORCE_LIMIT)


@dataclass(frozen=True)
class DifferenceTable:
    r: int
    k: int
    q: int
    rows: tuple  # (n, exact_f, exact_ex, difference, diff_upper)
    d_floor: Optional[int]

    COLUMNS = ("n", "exact_f", "exact_ex", "difference", "diff_upper")

    def to_csv(self) -> str:
        lines = [",".join(self.COLUMNS)]
        lines.extend(",".join(str(x) for x in row) for row in self.rows)
        return "\n".join(lines) + "\n"


def difference_table(r: int, k: int, q: int, n_range, mode: str = "branch_and_bound") -> DifferenceTable:
    """Exact ``F`` and ``H`` Turán numbers side by side with the gap bound.

    Raises :class:`BoundViolation` if a gap exceeds ``(k - 1) C(n - 1, r - 1)``
    (the formula is also evaluated below ``n = k``, where it still holds).
    For graphs the largest gap seen is reported as ``d_floor``.
    """
    from .errors import BoundViolation

    rows = []
    for n in n_range:
        f = exact_f(n, (r, k, q), mode).value
        e = exact_ex(n, (r, k, q), mode).value
        upper = (k - 1) * math.comb(n - 1, r - 1)
        if f - e > upper:
            raise BoundViolation(f"n={n}: difference {f - e} > {upper}")
        rows.append((n, f, e, f - e, upper))
    d_floor = max((row[3] for row in rows), default=None) if r == 2 else None
    return DifferenceTable(r, k, q, tuple(rows), d_floor)
