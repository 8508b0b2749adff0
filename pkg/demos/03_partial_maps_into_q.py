"""
Coding embeddings as partial maps into Q
========================================

Each w-vertex of a type contributes a block of indices; the indices are
sent into the rationals through a fixed enumeration xi.  Decoding inverts it.
"""
from brdkit.branch_calculus import SigmaEmbedding, tp
from brdkit.chain_terms import parse_branch, parse_chain_term
from brdkit.errors import NotInM
from brdkit.pq_category import PartialMapQ, phi_decode, psi_encode, xi

print("xi(0..8):", [str(xi(k)) for k in range(9)])

sigma = parse_chain_term("(+ (w* 1) (w 1))")
f = SigmaEmbedding.of(sigma, [parse_branch("i0.(w*4)"), parse_branch("i1.(w0)"), parse_branch("i1.(w5)")])
tau = tp(f)
code = psi_encode(sigma, tau, f)
print("type:", tau.to_sexpr())
print("code:", code.to_json())
print("decodes back:", phi_decode(sigma, tau, code) == f)

# a code whose w-block runs backwards names no embedding of this type
values = [v for _, v in code.entries]
values[1], values[2] = values[2], values[1]
try:
    phi_decode(sigma, tau, PartialMapQ(code.n, tuple(enumerate(values))))
except NotInM as exc:
    print("rejected:", exc)
