"""The nine acceptance criteria, one test each.

Each test records a single pass/fail line (printed, and repeated in the
terminal summary) before asserting.
"""

import itertools
import math
import time
from fractions import Fraction

import numpy as np

from helpers import atlas_graphs, random_multigraph, three_graphs
from turanbatch import (
    Hypergraph,
    NoSDR,
    best_link,
    bfs_certificate,
    cbc_exponent,
    cbc_upper,
    competing_exponent_bb,
    d_constant_estimate,
    difference_table,
    exact_ex,
    f_upper_r2,
    graph_upper,
    hypergraph_upper,
    is_cbc,
    is_free,
    max_deficiency,
    max_deficiency_bruteforce,
    min_degree_core,
    peel_min_degree,
    random_construct,
    random_uniform,
    sdr_retrieve,
    verify_lemma51,
    write_hypergraph,
)

# Exact values for (r, k, q) = (2, 6, 0), fixed by brute force before the build.
GOLDEN_EX = {6: 7, 7: 9, 8: 12}


def test_criterion_1_oracle_equivalence(record):
    t0 = time.perf_counter()
    mismatches = []
    checked = 0
    family = atlas_graphs(6) + list(three_graphs(6, 12))
    for H in family:
        if H.m == 0:
            continue
        for k in range(1, H.m + 1):
            checked += 1
            if max_deficiency(H, k) != max_deficiency_bruteforce(H, k):
                mismatches.append((H, k))
    rng = np.random.default_rng(20240)
    for _ in range(500):
        H = random_multigraph(rng, n_max=8, r_max=3, m_max=12)
        k = int(rng.integers(1, H.m + 1))
        checked += 1
        if max_deficiency(H, k) != max_deficiency_bruteforce(H, k):
            mismatches.append((H, k))
    elapsed = time.perf_counter() - t0
    ok = not mismatches and elapsed <= 300
    record(1, ok, f"{checked} (graph, k) pairs over {len(family)} classes + 500 multigraphs, "
                  f"{len(mismatches)} mismatches, {elapsed:.1f}s")
    assert ok, mismatches[:3]


def _all_requests_decodable(H, k):
    for s in range(1, min(k, H.m) + 1):
        for req in itertools.combinations(range(H.m), s):
            try:
                sdr_retrieve(H, req)
            except NoSDR:
                return False
    return True


def test_criterion_2_cbc_sdr_duality(record):
    t0 = time.perf_counter()
    rng = np.random.default_rng(77)
    bad = []
    n_cbc = 0
    for _ in range(200):
        H = random_multigraph(rng, n_max=7, r_max=3, m_max=10)
        k = int(rng.integers(1, 7))
        a = is_cbc(H, k).free
        n_cbc += a
        if a != _all_requests_decodable(H, k):
            bad.append((H, k))
    elapsed = time.perf_counter() - t0
    ok = not bad and elapsed <= 120
    record(2, ok, f"200 instances ({n_cbc} batch codes), {len(bad)} mismatches, {elapsed:.1f}s")
    assert ok, bad[:3]


def soundness_grid(count, seed=2024):
    """Points (n, r, k, q, c, seed) drawn from the documented construction grid."""
    rng = np.random.default_rng(seed)
    c_by_r = {2: (0.25, 0.5, 1.0), 3: (1 / 16, 1 / 8, 1 / 4)}
    out = []
    for j in range(count):
        r = int(rng.choice([2, 3]))
        q = int(rng.choice([-1, 0, 1]))
        k = int(rng.integers(q + r + 1, 9))
        n = int(rng.integers(r + 1, 41))
        c = float(rng.choice(c_by_r[r]))
        out.append((n, r, k, q, c, j))
    return out


def test_criterion_3_construction_soundness(record):
    t0 = time.perf_counter()
    failures = []
    repeat_diffs = 0
    for i, (n, r, k, q, c, seed) in enumerate(soundness_grid(1000)):
        rep = random_construct(n, (r, k, q), c, seed=seed, certify=False)
        if not is_free(rep.result, (r, k, q)).free:
            failures.append((n, r, k, q, c, seed))
        if i % 10 == 0:
            again = random_construct(n, (r, k, q), c, seed=seed, certify=False)
            if write_hypergraph(again.result) != write_hypergraph(rep.result) or again.to_json() != rep.to_json():
                repeat_diffs += 1
    elapsed = time.perf_counter() - t0
    ok = not failures and repeat_diffs == 0
    record(3, ok, f"1000 runs, {len(failures)} uncertified, {repeat_diffs}/100 reruns differ, {elapsed:.1f}s")
    assert ok, failures[:3]


def test_criterion_4_sandwich(record):
    t0 = time.perf_counter()
    problems = []
    for n, golden in GOLDEN_EX.items():
        exact = exact_ex(n, (2, 6, 0)).value
        brute = exact_ex(n, (2, 6, 0), "bruteforce", max_slots=28).value
        upper = graph_upper(n, 6, 0)
        if not exact == brute == golden:
            problems.append(("exact", n, exact, brute))
        if not exact < upper:
            problems.append(("upper", n, exact, upper))
        for seed in range(10):
            for c in (1.0, 2.0):
                got = random_construct(n, (2, 6, 0), c, seed=seed).retained
                if got > exact:
                    problems.append(("lower", n, seed, c, got))
    elapsed = time.perf_counter() - t0
    ok = not problems and elapsed <= 600
    record(4, ok, f"n=6..8 exact {list(GOLDEN_EX.values())} strictly below graph bound, "
                  f"{len(problems)} problems, {elapsed:.1f}s")
    assert ok, problems


def test_criterion_5_difference_bound(record):
    graphs = difference_table(2, 6, 0, range(6, 9))
    hyper = difference_table(3, 5, 0, [8])
    violations = [row for tab in (graphs, hyper) for row in tab.rows if not 0 <= row[3] <= row[4]]
    d_est = d_constant_estimate(6, 0, 8)
    bounded = graphs.d_floor <= d_est
    ok = not violations and bounded
    record(5, ok, f"graph differences {[row[3] for row in graphs.rows]} <= {d_est} and <= (k-1)(n-1); "
                  f"r=3 n=8 difference {hyper.rows[0][3]} <= {hyper.rows[0][4]}")
    assert ok


def test_criterion_6_link_reduction(record):
    rng = np.random.default_rng(606)
    bad = []
    free_inputs = 0
    for _ in range(300):
        n = int(rng.integers(4, 13))
        H = random_uniform(n, 3, float(rng.uniform(0.02, 0.25)), rng=rng)
        q = int(rng.choice([-1, 0, 1]))
        k = int(rng.integers(q + 4, 10))
        cert = best_link(H, (3, k, q))
        exact_lhs = Fraction(H.m * math.comb(3, 2), math.comb(n, 1))
        if cert.inequality_lhs != exact_lhs or not cert.link_degree >= exact_lhs:
            bad.append(("inequality", H))
        free_inputs += bool(cert.source_free)
        if cert.source_free and not cert.link_free:
            bad.append(("transfer", H, k, q))
    k5 = best_link(Hypergraph.complete(5, 3), (3, 8, 0))
    equality = k5.inequality_lhs == 6 == k5.link_degree
    ok = not bad and equality
    record(6, ok, f"300 3-graphs ({free_inputs} free), {len(bad)} violations, K5 lhs={k5.inequality_lhs}")
    assert ok, bad[:3]


def test_criterion_7_proof_certificates(record):
    rng = np.random.default_rng(707)
    peel_bad = 0
    peeled = 0
    for _ in range(500):
        n = int(rng.integers(2, 25))
        G = random_uniform(n, 2, float(rng.uniform(0.05, 0.7)), rng=rng)
        if G.m == 0:
            continue
        peeled += 1
        cert = peel_min_degree(G)
        if not (cert.final_vertices and cert.final_min_degree > cert.threshold):
            peel_bad += 1
    bfs_bad = []
    engaged = 0
    roots = 0
    for k, q in ((6, 0), (8, 1)):
        for seed in range(10):
            rep = random_construct(40, (2, k, q), 2.0, seed=seed, certify=False)
            core = min_degree_core(rep.result, q + 2)
            if core.m == 0 or not is_free(core, (2, k, q)).free:
                continue
            engaged += 1
            for root in range(core.n):
                if not core.degree(root):
                    continue
                roots += 1
                cert = bfs_certificate(core, root, k, q, check_free=False)
                if any(cert.checks[c] != "ok" for c in ("a", "b", "claimA")):
                    bfs_bad.append((k, q, seed, root, cert.violations))
    ok = peel_bad == 0 and not bfs_bad and engaged > 0
    record(7, ok, f"peel: {peeled} graphs, {peel_bad} bad; bfs: {engaged} cores, {roots} roots, "
                  f"{len(bfs_bad)} violations")
    assert ok, bfs_bad[:3]


def _rel(a, b):
    return abs(a - b) / max(abs(a), abs(b))


def test_criterion_8_bound_evaluators(record):
    worst = 0.0
    points = 0
    for n, r, k in itertools.product((20, 50, 100, 1000, 10**5), (2, 3, 4, 5), (12, 14, 16, 20, 30)):
        if k < 2 * r + 2 or n < k:
            continue
        worst = max(worst, _rel(cbc_upper(n, r, k), hypergraph_upper(n, (r, k, 0))))
        worst = max(worst, _rel(cbc_upper(n, r, k), float(cbc_upper(n, r, k, precise=True))))
        points += 1
    for n, k, v in itertools.product((20, 100, 1000, 10**5), range(6, 16), range(2, 16)):
        q = k - v - 1
        if v > k or q < -1 or k < 2 * q + 6 or n < k:
            continue
        worst = max(worst, _rel(f_upper_r2(n, v, k).value, graph_upper(n, k, q)))
        worst = max(worst, _rel(graph_upper(n, k, q), float(graph_upper(n, k, q, precise=True))))
        points += 1
    exps = (cbc_exponent(3, 8), competing_exponent_bb(3))
    ok = worst <= 1e-9 and points >= 100 and exps == (Fraction(5, 2), Fraction(11, 4))
    record(8, ok, f"{points} grid points, worst relative gap {worst:.2e}; exponents {exps[0]} vs {exps[1]}")
    assert ok


def test_criterion_9_maximal_dichotomy(record):
    t0 = time.perf_counter()
    cases = 0
    violators = []
    for k, q in ((6, 0), (4, -1), (7, 1)):
        for G in atlas_graphs(6):
            if G.n < k - q - 1:
                continue
            cases += 1
            res = verify_lemma51(G, k, q)
            if not res.holds:
                violators.append((G, k, q, res.counterexample))
    elapsed = time.perf_counter() - t0
    ok = not violators and elapsed <= 600
    record(9, ok, f"{cases} (graph, k, q) cases, {len(violators)} violators, {elapsed:.1f}s")
    assert ok, violators[:3]
