"""Random deletion construction of ``H(k, q)``-free hypergraphs.

Sample the binomial random ``r``-graph at the critical density
``p = c * n**(-1 + (q + r)/(k - 1))`` and repair it by deleting one edge
from each forbidden configuration until none is left.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .core import Hypergraph, ParamTriple, as_params, make_rng, random_uniform
from .errors import NoFeasibleC
from .freeness import edge_connected_sets, is_free, max_deficiency, packing_violation

POLICIES = ("witness-degree", "random-in-witness", "first-index")
C_GRID = tuple(2.0**j for j in range(-10, 4))


@dataclass(frozen=True)
class ConstructionReport:
    params: ParamTriple
    n: int
    c: float
    p: float
    clamped: bool
    sampled_edges: int
    deletions: int
    result: Hypergraph
    seed: object
    policy: str = "witness-degree"

    @property
    def retained(self) -> int:
        return self.result.m

    def to_json(self, edges_file=None) -> str:
        r, k, q = self.params
        obj = {
            "schema": "turan-batch/1",
            "n": self.n,
            "r": r,
            "k": k,
            "q": q,
            "c": self.c,
            "p": self.p,
            "clamped": self.clamped,
            "seed": self.seed,
            "policy": self.policy,
            "sampled": self.sampled_edges,
            "deleted": self.deletions,
            "retained": self.retained,
            "edges_file": edges_file,
        }
        return json.dumps(obj, sort_keys=True)


def forbidden_sizes(params) -> frozenset[int]:
    """Sizes ``i`` whose forbidden configurations fit on ``i - q - 1`` vertices.

    ``{i : q + r + 2 <= i <= k and i <= C(i - q - 1, r)}``.  An empty set
    means no simple hypergraph contains a forbidden member.
    """
    r, k, q = as_params(params)
    return frozenset(i for i in range(q + r + 2, k + 1) if i <= math.comb(i - q - 1, r))


def edge_exponent(params) -> Fraction:
    r, k, q = as_params(params)
    return Fraction(-1) + Fraction(q + r, k - 1)


def edge_probability(n: int, params, c: float) -> float:
    """``min(1, c * n**(-1 + (q + r)/(k - 1)))``."""
    p = as_params(params)
    if n < p.r or c <= 0:
        raise ValueError("need n >= r and c > 0")
    return min(1.0, c * n ** float(edge_exponent(p)))


def expected_edges(n: int, r: int, p: float) -> float:
    return p * math.comb(n, r)


def expected_forbidden_upper(n: int, params, p: float) -> tuple[float, float]:
    """First-moment bound on the number of forbidden configurations.

    Returns ``(sum_i C(C(i-q-1, r), i) * p**i * C(n, i-q-1), C_kqr)`` where
    the sum runs over :func:`forbidden_sizes` and ``C_kqr`` is the largest
    ``C(C(i-q-1, r), i) / (i-q-1)!`` over the same range (0 when empty).
    """
    pt = as_params(params)
    r, q = pt.r, pt.q
    total = 0.0
    const = Fraction(0)
    for i in sorted(forbidden_sizes(pt)):
        v = i - q - 1
        ways = math.comb(math.comb(v, r), i)
        total += ways * p**i * math.comb(n, v)
        const = max(const, Fraction(ways, math.factorial(v)))
    return total, float(const)


def _pick_masks(masks, witness, policy, rng) -> int:
    """Choose the edge of ``witness`` to delete."""
    if policy == "first-index":
        return witness[0]
    if policy == "random-in-witness":
        return witness[int(rng.integers(len(witness)))]
    best, best_deg = witness[0], -1
    for i in witness:
        deg = sum(1 for j in witness if j != i and masks[i] & masks[j])
        if deg > best_deg:
            best, best_deg = i, deg
    return best


def _inside(H: Hypergraph, wmask: int, gone) -> list[int]:
    """Live edge positions inside the vertex set ``wmask``, ascending."""
    out = []
    x = wmask
    while x:
        b = x & -x
        x ^= b
        v = b.bit_length() - 1
        for i in H.incidence[v]:
            if H.edges[i][0] == v and i not in gone and H.edge_masks[i] & ~wmask == 0:
                out.append(i)
    out.sort()
    return out


def _repair(H: Hypergraph, pt: ParamTriple, policy, rng, budget=None, debug=False):
    """Positions of ``H`` to delete, or ``None`` once more than ``budget`` are needed.

    Violating vertex sets are handled by size, then by mask.  While a set
    still spans ``need`` live edges, one of its lowest ``need`` live edges is
    deleted.  Each size level is enumerated on the graph already thinned by
    earlier levels; deleting edges never creates a violation, so this is
    the same as listing all violating sets of the sample once.  For
    ``q >= 1`` a final pass removes forbidden selections made of several
    disjoint pieces.
    """
    masks = H.edge_masks
    gone: set[int] = set()
    last = max_deficiency(H, pt.k)[0] if debug and H.m else None
    for level in range(1, min(H.n, pt.k - pt.q - 1) + 1):
        need = max(level + pt.q + 1, 1)
        if need > pt.k:
            continue
        keep = [i for i in range(H.m) if i not in gone]
        cur = H.subhypergraph(keep)
        found = sorted(
            wmask
            for wmask, size, spanned in edge_connected_sets(cur, level)
            if size == level and spanned >= need
        )
        for wmask in found:
            while True:
                inside = _inside(H, wmask, gone)
                if len(inside) < need:
                    break
                gone.add(_pick_masks(masks, inside[:need], policy, rng))
                if budget is not None and len(gone) > budget:
                    return None
                if debug:
                    now = H.remove_edges(gone)
                    value = max_deficiency(now, pt.k)[0] if now.m else None
                    if value is not None and last is not None and value > last:
                        raise AssertionError("deletion raised the maximum deficiency")
                    last = value
    if pt.q >= 1:
        # disjoint parts of positive deficiency can add up past q
        while True:
            keep = [i for i in range(H.m) if i not in gone]
            cur = H.subhypergraph(keep)
            hit = packing_violation(cur, pt.k, pt.q)
            if hit is None:
                break
            gone.add(_pick_masks(masks, [keep[i] for i in hit], policy, rng))
            if budget is not None and len(gone) > budget:
                return None
    return gone


def random_construct(
    n: int,
    params,
    c: float,
    seed=0,
    policy: str = "witness-degree",
    debug: bool = False,
    certify: bool = True,
) -> ConstructionReport:
    """Sample at the critical density, then delete edges until free.

    Each round takes a smallest forbidden configuration still present and
    removes one of its edges chosen by ``policy``.  Deleting edges never
    creates a new configuration, so violating vertex sets can be found
    level by level on the partly repaired graph.  Unless ``certify`` is off the
    result is re-checked with :func:`is_free`; with ``debug`` the maximum
    deficiency is also checked not to grow after any deletion.
    """
    pt = as_params(params)
    if policy not in POLICIES:
        raise ValueError(f"unknown policy {policy!r}")
    rng = make_rng(seed)
    raw = c * n ** float(edge_exponent(pt))
    p = min(1.0, raw)
    H = random_uniform(n, pt.r, p, rng=rng)
    sampled = H.m
    gone = _repair(H, pt, policy, rng, debug=debug)
    result = H.remove_edges(gone)
    if certify:
        verdict = is_free(result, pt)
        if not verdict.free:
            raise AssertionError(f"repair left a forbidden witness {verdict.witness}")
    return ConstructionReport(pt, n, c, p, raw > 1.0, sampled, len(gone), result, seed, policy)


def auto_tune_c(n: int, params, seeds: Sequence[int], grid=C_GRID, policy="witness-degree") -> float:
    """Largest grid value of ``c`` whose deletions stay within half the sample.

    Deletions and sampled edges are summed over ``seeds``.  The grid is
    scanned upwards and the scan stops at the first failing value, since
    repairing a dense sample is expensive and the deletion share grows with
    ``c``.
    """
    pt = as_params(params)
    if not seeds:
        raise ValueError("need at least one seed")
    if not forbidden_sizes(pt):
        return max(grid)
    chosen = None
    for c in sorted(grid):
        samples = []
        for sd in seeds:
            rng = make_rng(sd)
            p = edge_probability(n, pt, c)
            samples.append((random_uniform(n, pt.r, p, rng=rng), rng))
        budget = sum(H.m for H, _ in samples) / 2
        spent = 0
        for H, rng in samples:
            gone = _repair(H, pt, policy, rng, budget=budget - spent)
            if gone is None:
                spent = None
                break
            spent += len(gone)
        if spent is None:
            break
        chosen = c
    if chosen is None:
        raise NoFeasibleC(f"no c in the grid keeps deletions within half at n={n}")
    return chosen


def deficiency_trace(H: Hypergraph, k: int, order: Sequence[int]) -> list[int]:
    """Maximum deficiency after each successive deletion in ``order`` (positions
    refer to the original edge list)."""
    out = []
    gone = set()
    for i in order:
        gone.add(i)
        rest = H.remove_edges(gone)
        out.append(max_deficiency(rest, k)[0] if rest.m else -H.r)
    return out
