import itertools

import networkx as nx
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from helpers import edge_sets, naive_f_free, naive_free, naive_max_deficiency
from turanbatch import (
    Hypergraph,
    cover,
    deficiency,
    find_violation,
    forbidden_member,
    forbidden_sizes,
    is_cbc,
    is_f_free,
    is_free,
    max_deficiency,
    max_deficiency_bruteforce,
    min_cover_of,
    minimal_witness,
    random_uniform,
    sdr_retrieve,
)
from turanbatch.errors import NoSDR, PadImpossible, TooLarge

TRIANGLE = Hypergraph(3, 2, ((0, 1), (1, 2), (0, 2)))
K4 = Hypergraph.complete(4, 2)
STAR = Hypergraph(5, 2, ((0, 1), (0, 2), (0, 3), (0, 4)))


def test_single_edge():
    H = Hypergraph(5, 3, ((0, 2, 4),))
    for k in (1, 2, 5):
        assert max_deficiency(H, k) == (-2, (0,))
        assert max_deficiency_bruteforce(H, k) == (-2, (0,))


def test_k4_examples():
    assert max_deficiency(K4, 6) == (2, tuple(range(6)))
    value, sel = max_deficiency(K4, 5)
    assert value == 1 and len(sel) == 5 and cover(K4, sel) == {0, 1, 2, 3}


def test_triangle_examples():
    assert max_deficiency(TRIANGLE, 3) == (0, (0, 1, 2))
    assert is_free(TRIANGLE, (2, 3, 0)).free
    assert is_cbc(TRIANGLE, 3).free


def test_tie_break_prefers_smaller_selection():
    D = Hypergraph(4, 2, ((0, 1), (2, 3)))
    assert max_deficiency(D, 2) == (-1, (0,))
    assert max_deficiency_bruteforce(D, 2) == (-1, (0,))


def test_bruteforce_size_limit():
    with pytest.raises(TooLarge):
        max_deficiency_bruteforce(Hypergraph.complete(7, 2), 3)


def test_k4_not_free():
    v = is_free(K4, (2, 6, 0))
    assert not v.free
    assert len(v.witness) == 6 and cover(K4, v.witness) == {0, 1, 2, 3}
    assert v.max_deficiency_found == 2


def test_free_verdict_reports_maximum_lazily():
    v = is_free(TRIANGLE, (2, 6, 0))
    assert v.free and v.witness is None
    assert v.max_deficiency_found == 0
    assert is_free(Hypergraph(4, 2), (2, 6, 0)).max_deficiency_found is None


@pytest.mark.parametrize("params", [(2, 4, 0), (3, 5, 0)])
def test_empty_index_set_means_free(params):
    assert not forbidden_sizes(params)
    r = params[0]
    assert is_free(Hypergraph.complete(7, r), params).free


def test_f_free_examples():
    assert is_f_free(TRIANGLE, (2, 6, 0)).free
    v = is_f_free(K4, (2, 6, 0))
    assert not v.free and len(v.witness) == 6


def test_cbc_examples():
    assert is_cbc(K4, 4).free
    assert not is_cbc(K4, 5).free
    assert is_cbc(Hypergraph(2, 2, ((0, 1), (0, 1)), allow_multi=True), 2).free


def test_two_disjoint_near_cliques_share_the_budget():
    # each K4 minus an edge has deficiency 1; together they reach 2 with 10 edges
    half = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3)]
    H = Hypergraph(8, 2, tuple(half + [(a + 4, b + 4) for a, b in half]))
    v = is_free(H, (2, 10, 1))
    assert not v.free
    assert deficiency(H, v.witness) >= 2 and len(v.witness) <= 10
    assert find_violation(H, 10, 1) is not None
    assert is_free(H, (2, 9, 1)).free


def test_minimal_witness_is_a_member():
    w = minimal_witness(K4, 6, 0)
    assert len(w) == 5 and deficiency(K4, w) == 1
    assert minimal_witness(TRIANGLE, 6, 0) is None


def test_forbidden_member_pads_with_isolated_vertices():
    H = Hypergraph(5, 2, K4.edges)
    edges, verts = forbidden_member(H, range(6), 0)
    assert len(edges) - len(verts) == 1
    assert verts == {0, 1, 2, 3, 4}
    with pytest.raises(PadImpossible):
        forbidden_member(K4, range(6), 0)
    with pytest.raises(ValueError):
        forbidden_member(K4, range(3), 0)


def test_min_cover_of():
    size, mask = min_cover_of(K4, 5)
    assert size == 4 and mask == 0b1111


def test_sdr_examples():
    plan = sdr_retrieve(TRIANGLE, {0, 1, 2})
    assert sorted(plan.assignment.values()) == [0, 1, 2]
    for item, server in plan.assignment.items():
        assert server in TRIANGLE.edges[item]
    assert sdr_retrieve(TRIANGLE, {0}).assignment[0] in (0, 1)
    star = sdr_retrieve(STAR, range(4))
    assert len(set(star.assignment.values())) == 4
    assert all(star.assignment[i] in STAR.edges[i] for i in range(4))


def test_sdr_failure_reports_hall_violator():
    with pytest.raises(NoSDR) as info:
        sdr_retrieve(K4, range(5))
    items = info.value.deficient
    assert len(cover(K4, items)) < len(items)
    assert set(info.value.neighbourhood) == cover(K4, items)


def test_sdr_rejects_repeated_items():
    with pytest.raises(ValueError):
        sdr_retrieve(TRIANGLE, [0, 0])


# -- randomized comparisons with independent oracles -------------------------------


@st.composite
def small_hypergraphs(draw, multi=False):
    r = draw(st.integers(2, 3))
    n = draw(st.integers(r, 7))
    slots = list(itertools.combinations(range(n), r))
    if multi:
        edges = draw(st.lists(st.sampled_from(slots), max_size=9))
    else:
        edges = draw(st.lists(st.sampled_from(slots), unique=True, max_size=min(9, len(slots))))
    return Hypergraph(n, r, tuple(edges), allow_multi=multi)


@given(small_hypergraphs(multi=True), st.integers(1, 9))
@settings(max_examples=300, deadline=None)
def test_max_deficiency_matches_subset_enumeration(H, k):
    if H.m == 0:
        return
    value, sel = max_deficiency(H, k)
    assert value == naive_max_deficiency(edge_sets(H), k)
    assert 1 <= len(sel) <= k and deficiency(H, sel) == value
    assert max_deficiency_bruteforce(H, k) == (value, sel)


@given(small_hypergraphs(multi=True), st.integers(3, 9), st.integers(-2, 2))
@settings(max_examples=300, deadline=None)
def test_is_free_matches_subset_enumeration(H, k, q):
    if k < q + H.r + 1 or q <= -H.r:
        return
    v = is_free(H, (H.r, k, q))
    assert v.free == naive_free(edge_sets(H), k, q)
    if not v.free:
        assert len(v.witness) <= k and deficiency(H, v.witness) >= q + 1
    w = find_violation(H, k, q)
    assert (w is None) == v.free
    if w is not None:
        assert len(w) <= k and deficiency(H, w) >= q + 1


@given(small_hypergraphs(multi=True), st.integers(3, 9), st.integers(-1, 2))
@settings(max_examples=300, deadline=None)
def test_is_f_free_matches_subset_enumeration(H, k, q):
    if k < q + H.r + 1:
        return
    v = is_f_free(H, (H.r, k, q))
    assert v.free == naive_f_free(edge_sets(H), k, q)
    if not v.free:
        assert len(v.witness) == k and len(cover(H, v.witness)) <= k - q - 1
    if is_free(H, (H.r, k, q)).free:
        assert v.free


@given(small_hypergraphs(multi=True), st.data())
@settings(max_examples=200, deadline=None)
def test_sdr_agrees_with_networkx_matching(H, data):
    if H.m == 0:
        return
    items = data.draw(st.sets(st.integers(0, H.m - 1), min_size=1, max_size=H.m))
    B = nx.Graph()
    left = [("e", i) for i in items]
    B.add_nodes_from(left)
    B.add_edges_from((("e", i), ("v", v)) for i in items for v in H.edges[i])
    matched = len(nx.bipartite.hopcroft_karp_matching(B, top_nodes=left)) // 2
    try:
        plan = sdr_retrieve(H, items)
    except NoSDR as exc:
        assert matched < len(items)
        assert len(cover(H, exc.deficient)) < len(exc.deficient)
        assert set(exc.deficient) <= set(items)
    else:
        assert matched == len(items)
        assert len(set(plan.assignment.values())) == len(items)
        assert all(plan.assignment[i] in H.edges[i] for i in items)


def test_larger_random_graphs_consistent():
    rng = np.random.default_rng(5)
    for _ in range(40):
        n = int(rng.integers(8, 16))
        H = random_uniform(n, 2, 0.3, rng=rng)
        for k, q in ((6, 0), (8, 1), (5, -1)):
            v = is_free(H, (2, k, q))
            if v.free:
                assert max_deficiency(H, k)[0] <= q
            else:
                assert deficiency(H, v.witness) >= q + 1
