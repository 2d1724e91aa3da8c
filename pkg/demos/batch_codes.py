#! /usr/bin/env python3
"""Storing items on servers so that any small batch can be read in one round.

Each item is an edge: the r servers holding a copy.  A batch of requested
items can be served reading one item per server exactly when the requested
edges have a system of distinct representatives.
"""

from turanbatch import Hypergraph, cover, is_cbc, max_deficiency, sdr_retrieve
from turanbatch.errors import NoSDR

# =============================================================================
# Six items on four servers, two copies each: every pair of servers holds one
# item.  This is the complete graph K4.

layout = Hypergraph.complete(4, 2)
print("items:", layout.edges)

# Any four items can be served, but five items live on only four servers.

print("batch size 4 ok:", is_cbc(layout, 4).free)
verdict = is_cbc(layout, 5)
print("batch size 5 ok:", verdict.free, "witness", verdict.witness)

# The deficiency of a selection is how many more items it holds than servers it
# touches.  A batch code needs it to stay at most 0.

print("largest deficiency for batches of 5:", max_deficiency(layout, 5))

# =============================================================================
# Serving a batch: each item gets its own server.

plan = sdr_retrieve(layout, [0, 2, 5])
for item, server in plan.assignment.items():
    print(f"item {item} {layout.edges[item]} -> server {server}")

# A request that cannot be served reports which items compete for too few
# servers.

try:
    sdr_retrieve(layout, range(5))
except NoSDR as exc:
    print("blocked items", exc.deficient, "share servers", sorted(cover(layout, exc.deficient)))
