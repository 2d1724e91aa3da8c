import json
import math
from fractions import Fraction

import numpy as np
import pytest

from turanbatch import (
    C_GRID,
    POLICIES,
    Hypergraph,
    auto_tune_c,
    deficiency_trace,
    edge_exponent,
    edge_probability,
    expected_edges,
    expected_forbidden_upper,
    forbidden_sizes,
    is_free,
    random_construct,
    write_hypergraph,
)
from turanbatch.errors import QTooSmall

# Golden value from the first tuning run over seeds 0..29.
TUNED_C_N40 = 2.0


def test_forbidden_sizes_examples():
    assert forbidden_sizes((2, 6, 0)) == {5, 6}
    assert forbidden_sizes((2, 4, 0)) == frozenset()
    assert forbidden_sizes((3, 8, 0)) == {6, 7, 8}


@pytest.mark.parametrize("r,k,q", [(2, 6, 0), (2, 9, 1), (3, 8, 0), (3, 7, -1), (4, 9, 0)])
def test_forbidden_sizes_by_definition(r, k, q):
    expect = {i for i in range(q + r + 2, k + 1) if i <= math.comb(i - q - 1, r)}
    assert forbidden_sizes((r, k, q)) == expect


def test_edge_probability_examples():
    assert edge_probability(100, (2, 6, 0), 1.0) == pytest.approx(100 ** -0.6, rel=1e-12)
    assert edge_probability(10, (2, 6, 0), 1e6) == 1.0
    assert edge_exponent((2, 6, 0)) == Fraction(-3, 5)


def test_edge_probability_minimal_q_grows_linearly_in_n():
    # q = -r + 1: p*n = c * n**(1/(k-1)) is unbounded
    vals = [edge_probability(n, (2, 5, -1), 1.0) * n for n in (10, 100, 1000, 10000)]
    assert all(a < b for a, b in zip(vals, vals[1:]))
    assert vals[-1] == pytest.approx(10000 ** 0.25)


def test_expected_edges():
    assert expected_edges(10, 2, 1.0) == 45
    assert expected_edges(10, 2, 0.0) == 0
    assert expected_edges(10, 2, 0.5) == 22.5


def test_expected_forbidden_upper():
    assert expected_forbidden_upper(10, (2, 4, 0), 0.3)[0] == 0
    assert expected_forbidden_upper(10, (2, 6, 0), 0.0)[0] == 0
    total, _ = expected_forbidden_upper(10, (2, 6, 0), 0.1)
    i5 = math.comb(6, 5) * 0.1**5 * math.comb(10, 4)
    i6 = math.comb(10, 6) * 0.1**6 * math.comb(10, 5)
    assert total == pytest.approx(i5 + i6, rel=1e-12)
    assert total == pytest.approx(0.06552, rel=1e-9)


def test_tiny_c_gives_near_empty_output():
    rep = random_construct(30, (2, 6, 0), 1e-6, seed=0)
    assert rep.result.m == 0 and rep.deletions == 0


@pytest.mark.parametrize("policy", POLICIES)
def test_construct_is_free_and_deterministic(policy):
    for seed in range(6):
        n = 10 + 8 * seed
        a = random_construct(n, (2, 6, 0), 1.0, seed=seed, policy=policy)
        b = random_construct(n, (2, 6, 0), 1.0, seed=seed, policy=policy)
        assert is_free(a.result, (2, 6, 0)).free
        assert a == b
        assert write_hypergraph(a.result) == write_hypergraph(b.result)
        assert a.to_json() == b.to_json()
        assert a.sampled_edges == a.retained + a.deletions


def test_construct_debug_mode_hypergraph():
    rep = random_construct(14, (3, 8, 1), 0.25, seed=3, debug=True)
    assert is_free(rep.result, (3, 8, 1)).free


def test_report_json_schema():
    rep = random_construct(12, (2, 6, 0), 1.0, seed=1)
    obj = json.loads(rep.to_json(edges_file="out.txt"))
    assert obj["schema"] == "turan-batch/1"
    assert obj["retained"] == rep.retained and obj["edges_file"] == "out.txt"


def test_clamped_flag():
    rep = random_construct(8, (2, 6, 0), 100.0, seed=0)
    assert rep.clamped and rep.p == 1.0
    assert is_free(rep.result, (2, 6, 0)).free


def test_construct_rejects_degenerate_params():
    with pytest.raises(QTooSmall):
        random_construct(10, (2, 6, -2), 1.0)
    with pytest.raises(ValueError):
        random_construct(10, (2, 6, 0), 1.0, policy="nope")


def test_auto_tune_without_forbidden_sizes_returns_grid_max():
    assert auto_tune_c(20, (2, 4, 0), range(3)) == max(C_GRID)


def test_auto_tune_deterministic_small():
    assert auto_tune_c(16, (2, 6, 0), range(5)) == auto_tune_c(16, (2, 6, 0), range(5))


def test_tuned_c_keeps_half_of_the_sample():
    seeds = range(30)
    c = auto_tune_c(40, (2, 6, 0), seeds)
    assert c == TUNED_C_N40
    reps = [random_construct(40, (2, 6, 0), c, seed=s, certify=False) for s in seeds]
    retained = np.mean([r.retained for r in reps])
    sampled = np.mean([r.sampled_edges for r in reps])
    assert retained >= sampled / 2


def test_deficiency_trace_never_increases():
    H = Hypergraph.complete(5, 2)
    trace = deficiency_trace(H, 6, [0, 3, 5, 7, 9])
    assert all(a >= b for a, b in zip(trace, trace[1:]))
