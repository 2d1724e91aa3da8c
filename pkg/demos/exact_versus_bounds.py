#! /usr/bin/env python3
"""Exact Turán numbers at small n next to the general upper bounds."""

from turanbatch import (
    cbc_exponent,
    competing_exponent_bb,
    difference_table,
    exact_ex,
    graph_upper,
    random_construct,
)

# =============================================================================
# For (r, k, q) = (2, 6, 0) exhaustive search is quick up to n = 8.  The best
# random construction sits below the exact value, and the closed-form bound
# sits strictly above it.

for n in (6, 7, 8):
    exact = exact_ex(n, (2, 6, 0))
    best = max(random_construct(n, (2, 6, 0), 2.0, seed=s).retained for s in range(10))
    print(f"n={n}: construction {best} <= exact {exact.value} < bound {graph_upper(n, 6, 0):.2f}")
    print("   extremal graph:", exact.witness.edges)

# =============================================================================
# Forbidding only configurations of exactly k edges allows at least as many
# edges; the gap is at most (k-1)(n-1) for graphs.

print(difference_table(2, 6, 0, range(6, 9)).to_csv())

# =============================================================================
# For 3-uniform batch codes with batches of 8 the new exponent beats the
# older one.

print("exponents:", cbc_exponent(3, 8), "vs", competing_exponent_bb(3))
