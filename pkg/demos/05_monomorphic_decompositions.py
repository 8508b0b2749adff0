"""
Monomorphic decompositions of small structures
==============================================

A partition is a monomorphic decomposition when the isomorphism type of a
substructure depends only on how many points it takes from each block.
"""
from brdkit.corpus import toy_structures
from brdkit.monomorphic import (
    LinearOrder,
    chainability_order,
    check_block_mapping,
    find_local_iso_violation,
    induced,
    interval_order_construct,
    local_iso_check,
    minimal_mono_decomposition,
)

S = toy_structures()
for name in ["chain4", "k4", "betweenness4", "path3", "marked3", "c4", "star4", "dicycle3"]:
    P = minimal_mono_decomposition(S[name])
    order = chainability_order(S[name])
    print(f"{name:12} blocks {P.as_lists()!s:22} chaining order {None if order is None else order.seq}")

# every automorphism of the path permutes its two blocks
print(check_block_mapping(S["path3"]).to_json())

# order each block by a chaining order, then concatenate
path = S["path3"]
P = minimal_mono_decomposition(path)
orders = [[b[i] for i in chainability_order(induced(path, b)).seq] for b in P.blocks]
o, intervals = interval_order_construct(path, P, orders)
print("interval order:", o.seq, intervals, "local isos ok:", local_iso_check(path, o, intervals))

# with the plain order 0<1<2 and one interval, some local iso breaks the edges
print("violation:", find_local_iso_violation(path, LinearOrder((0, 1, 2)), [[0, 1, 2]]))
