"""
Finite arrows on chains
=======================

N -> (B)^m_{k,t}: every k-coloring of the m-subsets of an N-chain leaves
some B-subchain whose m-subsets use at most t colors.
"""
from itertools import combinations

from brdkit.corpus import toy_structures
from brdkit.ramsey_harness import ArrowQuery, emb_vs_struct_counts, find_counterexample, holds_arrow, min_t

print("6 -> (3)^2_2:", holds_arrow(ArrowQuery(6, 3, 2, 2, 1)))
print("5 -> (3)^2_2:", holds_arrow(ArrowQuery(5, 3, 2, 2, 1)))

ce = find_counterexample(ArrowQuery(5, 3, 2, 2, 1))
print("a 5-point coloring with no monochromatic triangle:")
for s in combinations(range(5), 2):
    print("  ", s, ce[s])

for C in (5, 6, 7):
    print(f"least t for {C} -> (3)^2_3:", min_t(C, 3, 2, 3))

# embeddings = automorphisms x copies
S = toy_structures()
for a, b in [("k3", "k4"), ("path3", "c5"), ("chain4", "chain4")]:
    print(a, "in", b, emb_vs_struct_counts(S[a], S[b]).to_json())
