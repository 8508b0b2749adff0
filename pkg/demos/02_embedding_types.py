"""
Embedding types and when they stop growing
==========================================

An n-element subchain of a term induces a small labelled tree: its type.
Types survive re-indexing the infinite sums along any infinite set V.
"""
from brdkit.branch_calculus import IndexSet, SigmaEmbedding, g_hat, tp, type_stabilization
from brdkit.chain_terms import format_branch, parse_branch, parse_chain_term

sigma = parse_chain_term("(w (w 1))")
f = SigmaEmbedding.of(sigma, [parse_branch("(w0).(w3)"), parse_branch("(w2).(w1)")])
print("type:", tp(f).to_sexpr())

# push every index through the even numbers; the type does not move
evens = IndexSet.evens()
g = SigmaEmbedding.of(sigma, [g_hat(evens, b) for b in f.branches])
print("moved:", [format_branch(b) for b in g.branches], "same type:", tp(g) == tp(f))

# how many types of n-point subchains exist, and how far one must truncate
for n in (1, 2, 3):
    types, m_star = type_stabilization(sigma, n)
    print(f"n={n}: {len(types)} types, complete from m={m_star}")
