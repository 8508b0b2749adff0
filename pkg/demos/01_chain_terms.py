"""
Scattered chains as finite terms
================================

A term is built from 1, finite sums (+ ...), and the infinite sums
(w ...) and (w* ...).  Points of the chain are branches of the term tree.
"""
from brdkit.chain_terms import (
    cnf_spectrum_finite,
    format_branch,
    hausdorff_rank,
    hausdorff_rank_bounds,
    parse_chain_term,
    parse_cnf,
    truncate,
)

# w*  +  w  is the integers
z = parse_chain_term("(+ (w* 1) (w 1))")
print("rank of Z:", hausdorff_rank(z))

# truncating each infinite sum to 3 summands gives a finite chain, in order
print([format_branch(b) for b in truncate(z, 3)])

# omega squared, and omega followed by one point
for text in ["(w (w 1))", "(+ (w 1) 1)"]:
    t = parse_chain_term(text)
    print(text, "rank", hausdorff_rank(t), "bounds", hausdorff_rank_bounds(t))

# the big Ramsey spectrum of an ordinal is finite exactly below w^w
for alpha in ["w^3*2 + w + 7", "w + w^2", "w^w"]:
    print(f"{alpha:>14} -> {str(parse_cnf(alpha)):>14}  finite: {cnf_spectrum_finite(alpha)}")
