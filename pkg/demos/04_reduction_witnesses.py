"""
Reducing one Ramsey problem to another
======================================

A witness (M, phi) lets colorings of hom(A, X) be pulled back to hom(B, Y).
It verifies when every h in hom(Y, Y) has a g in hom(X, X) whose image of
hom(A, X) is covered by phi of the M-part of h . hom(B, Y).
"""
from brdkit.corpus import chain_shift_witness, oplus_witness, toy_categories
from brdkit.piggyback import (
    Witness,
    finite_degree,
    transfer_degree_bound,
    verify_witness,
    witness_compose,
)

cats = toy_categories()
C = cats["chains_emb"]
print("objects:", C.objects, " |hom(1,3)| =", len(C.homset(1, 3)))

w12 = chain_shift_witness(cats, 1, 1, 1, 2)
w23 = chain_shift_witness(cats, 1, 2, 1, 3)
both = witness_compose(w12, w23)
print("witnesses verify:", verify_witness(w12), verify_witness(w23), "composite:", verify_witness(both))

# the degree for 2 colors of points in a 3-chain, and its transfer along w23
print("degree(1 in 3, k=2):", finite_degree(C, 1, 3, 2))
print("transfer holds for k=1..3:", [transfer_degree_bound(w23, k) for k in (1, 2, 3)])

# collapse phi to one morphism: coverage fails
hom = C.homset(1, 3)
bad = Witness(C, 1, 3, C, 1, 3, frozenset(hom), {f: hom[0] for f in hom})
print("constant phi verifies:", verify_witness(bad))

# concatenating two partial maps into Q is itself a reduction
w = oplus_witness(cats)
print("oplus witness:", w.source.name, "->", w.target.name, "verified:", verify_witness(w))
