"""Embeddings of finite chains into the branch set of a term, and their types.

An embedding ``f : n -> Br(sigma)`` is carried as the sorted tuple of its
``n`` branches.  Its type is the subtree of ``sigma`` spanned by those
branches, numbered breadth first, with the indices of omega / omega* edges
forgotten.
"""
from __future__ import annotations

import bisect
import math
from collections import deque
from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Sequence

from .chain_terms import (
    LambdaSymbol,
    Ordering,
    Term,
    branch_compare,
    format_branch,
    format_term,
    truncate,
)
from .errors import BudgetExceeded, InvalidTerm, NoStabilization, NotScattered

__all__ = [
    "Branch",
    "IndexSet",
    "is_branch",
    "node_at",
    "restrict_tree",
    "in_restriction",
    "g_hat",
    "SigmaEmbedding",
    "InducedTree",
    "induced_subtree",
    "EmbType",
    "tp",
    "enumerate_types",
    "type_stabilization",
    "DEFAULT_SUBSET_BUDGET",
]

Branch = tuple  # tuple[LambdaSymbol, ...]

DEFAULT_SUBSET_BUDGET = 2_000_000


@dataclass(frozen=True)
class IndexSet:
    """An infinite ``V = {v_0 < v_1 < ...}`` given by a prefix and an optional step.

    Past the prefix the elements continue as ``prefix[-1] + step, + 2*step, ...``.
    Without a step only the prefix is materialized.
    """

    prefix: tuple[int, ...]
    step: int | None = None

    def __post_init__(self):
        if not self.prefix:
            raise ValueError("IndexSet needs a nonempty prefix")
        if self.prefix[0] < 0 or any(a >= b for a, b in zip(self.prefix, self.prefix[1:])):
            raise ValueError("IndexSet prefix must be strictly increasing naturals")
        if self.step is not None and self.step < 1:
            raise ValueError("step must be positive")

    @classmethod
    def arithmetic(cls, start: int, step: int) -> IndexSet:
        return cls((start,), step)

    @classmethod
    def evens(cls) -> IndexSet:
        return cls((0,), 2)

    @classmethod
    def odds(cls) -> IndexSet:
        return cls((1,), 2)

    def __getitem__(self, i: int) -> int:
        if i < 0:
            raise IndexError(i)
        if i < len(self.prefix):
            return self.prefix[i]
        if self.step is None:
            raise IndexError(f"IndexSet has only {len(self.prefix)} materialized elements")
        return self.prefix[-1] + self.step * (i - len(self.prefix) + 1)

    def __contains__(self, v: int) -> bool:
        if v <= self.prefix[-1]:
            j = bisect.bisect_left(self.prefix, v)
            return j < len(self.prefix) and self.prefix[j] == v
        if self.step is None:
            return False
        return (v - self.prefix[-1]) % self.step == 0

    def table(self, m: int) -> dict[int, int]:
        return {i: self[i] for i in range(m)}


# ---------------------------------------------------------------------------
# Navigating a term along a branch


def node_at(sigma: Term, prefix: Sequence[LambdaSymbol]) -> tuple[str, Term | None]:
    """Label of the tree vertex reached by ``prefix`` and the subterm below it.

    Labels are ``"1"``, ``"+"``, ``"w"`` and ``"w*"``.  The inner ``+`` vertex of
    an infinite sum with a block of several summands is reported with subterm
    ``None``; its children are the block entries.
    """
    if sigma.kind == "Q":
        raise NotScattered("Q has no branch tree")
    t: Term = sigma
    block: tuple[Term, ...] | None = None  # set while standing on a block's + vertex
    for pos, s in enumerate(prefix):
        if block is not None:
            if s.kind != "i" or s.index >= len(block):
                raise InvalidTerm(f"letter {s} not allowed at position {pos}")
            t, block = block[s.index], None
            continue
        if t.kind == "+":
            if s.kind != "i" or s.index >= len(t.children):
                raise InvalidTerm(f"letter {s} not allowed at position {pos}")
            t = t.children[s.index]
        elif t.kind in ("w", "w*"):
            if s.kind != t.kind:
                raise InvalidTerm(f"letter {s} not allowed at position {pos}")
            if len(t.children) == 1:
                t = t.children[0]
            else:
                block = t.children
        else:
            raise InvalidTerm(f"branch continues past a leaf at position {pos}")
    if block is not None:
        return "+", None
    if t.kind == "0":
        raise InvalidTerm("branch ends in an empty leaf")
    return t.kind, t


def is_branch(sigma: Term, b: Sequence[LambdaSymbol]) -> bool:
    """True iff ``b`` is a complete root-to-leaf branch of ``sigma``."""
    try:
        label, _ = node_at(sigma, b)
    except InvalidTerm:
        return False
    return label == "1"


# ---------------------------------------------------------------------------
# Restriction and the re-indexing map


def restrict_tree(sigma: Term, V: IndexSet, m: int = 8) -> tuple[Term, dict[int, int]]:
    """Restrict every infinite sum of ``sigma`` to the indices in ``V``.

    Blocks are uniform, so the restricted tree is ``sigma`` itself read through
    the renaming ``i -> v_i``; the first ``m`` entries of that renaming are
    returned alongside.  Finite sums are untouched.
    """
    if sigma.kind == "Q":
        raise NotScattered("restriction is defined for scattered terms only")
    return sigma, V.table(m)


def in_restriction(sigma: Term, V: IndexSet, b: Sequence[LambdaSymbol]) -> bool:
    """True iff ``b`` is a branch of ``sigma`` all of whose omega-indices lie in ``V``."""
    return is_branch(sigma, b) and all(s.kind == "i" or s.index in V for s in b)


def g_hat(V: IndexSet, b: Sequence[LambdaSymbol]) -> Branch:
    """Letterwise re-indexing: ``i_n`` fixed, ``(w i) -> (w v_i)``, ``(w* i) -> (w* v_i)``."""
    return tuple(s if s.kind == "i" else LambdaSymbol(s.kind, V[s.index]) for s in b)


# ---------------------------------------------------------------------------
# Embeddings and their induced subtrees


@dataclass(frozen=True)
class SigmaEmbedding:
    sigma: Term
    branches: tuple[Branch, ...]

    def __post_init__(self):
        if not self.branches:
            raise ValueError("an embedding needs at least one branch")
        for b in self.branches:
            if not is_branch(self.sigma, b):
                raise InvalidTerm(f"{format_branch(b)!r} is not a branch of {format_term(self.sigma)}")
        for a, b in zip(self.branches, self.branches[1:]):
            if branch_compare(a, b) is not Ordering.LT:
                raise ValueError("embedding branches must be strictly increasing")

    @classmethod
    def of(cls, sigma: Term, branches: Iterable[Branch]) -> SigmaEmbedding:
        """Build from branches in any order."""
        return cls(sigma, tuple(sorted(set(map(tuple, branches)), key=_branch_key)))

    def __len__(self) -> int:
        return len(self.branches)

    def mapped(self, V: IndexSet) -> SigmaEmbedding:
        return SigmaEmbedding(self.sigma, tuple(g_hat(V, b) for b in self.branches))


def _branch_key(b: Branch) -> tuple:
    return tuple(s.sort_key() for s in b)


@dataclass(frozen=True)
class InducedTree:
    """Vertices are branch prefixes; ``children[p]`` lists child prefixes in tree order."""

    labels: dict
    children: dict

    @property
    def root(self) -> tuple:
        return ()

    def bfs(self) -> list[tuple]:
        order, queue = [], deque([()])
        while queue:
            v = queue.popleft()
            order.append(v)
            queue.extend(self.children[v])
        return order


def induced_subtree(f: SigmaEmbedding) -> InducedTree:
    prefixes: set[tuple] = set()
    for b in f.branches:
        for k in range(len(b) + 1):
            prefixes.add(b[:k])
    labels = {p: node_at(f.sigma, p)[0] for p in prefixes}
    children: dict[tuple, list] = {p: [] for p in prefixes}
    for p in prefixes:
        if p:
            children[p[:-1]].append(p)
    for p, kids in children.items():
        kids.sort(key=lambda c: c[-1].sort_key())
    return InducedTree(labels, {p: tuple(k) for p, k in children.items()})


# ---------------------------------------------------------------------------
# Types


@dataclass(frozen=True)
class EmbType:
    """Canonical type of an embedding.

    Vertices are ``0..p-1`` in BFS order.  ``parents[0]`` is ``-1``; ``edges[v]``
    is the finite-sum index of the edge into ``v`` or ``None`` when that edge
    came from an omega / omega* vertex.
    """

    labels: tuple[str, ...]
    parents: tuple[int, ...]
    edges: tuple[int | None, ...]

    def __len__(self) -> int:
        return len(self.labels)

    def children(self, v: int) -> list[int]:
        return [u for u in range(len(self.labels)) if self.parents[u] == v]

    @property
    def leaf_count(self) -> int:
        return sum(1 for lab in self.labels if lab == "1")

    @property
    def infinite_vertices(self) -> list[int]:
        return [v for v, lab in enumerate(self.labels) if lab in ("w", "w*")]

    def block_sizes(self) -> list[int]:
        """Number of immediate successors of each omega / omega* vertex, in BFS order."""
        return [len(self.children(v)) for v in self.infinite_vertices]

    def to_sexpr(self) -> str:
        def render(v: int) -> str:
            kids = self.children(v)
            if not kids:
                return self.labels[v]
            parts = []
            for u in kids:
                e = self.edges[u]
                parts.append(("_" if e is None else f"i{e}") + ":" + render(u))
            return "(" + self.labels[v] + " " + " ".join(parts) + ")"

        return render(0)

    @classmethod
    def from_sexpr(cls, text: str) -> EmbType:
        tokens = text.replace("(", " ( ").replace(")", " ) ").split()
        labels: list[str] = []
        parents: list[int] = []
        edges: list[int | None] = []
        # parse into nested (label, [(edge, subtree)]) then renumber breadth first
        pos = 0

        def parse():
            nonlocal pos
            tok = tokens[pos]
            if tok != "(":
                pos += 1
                return tok, []
            label = tokens[pos + 1]
            pos += 2
            kids = []
            while tokens[pos] != ")":
                edge_tok, _, rest = tokens[pos].partition(":")
                edge = None if edge_tok == "_" else int(edge_tok[1:])
                if rest:
                    pos += 1
                    kids.append((edge, (rest, [])))
                else:
                    pos += 1
                    kids.append((edge, parse()))
            pos += 1
            return label, kids

        tree = parse()
        if pos != len(tokens):
            raise ValueError(f"trailing tokens in type {text!r}")
        queue = deque([(tree, -1, None)])
        while queue:
            (label, kids), parent, edge = queue.popleft()
            me = len(labels)
            labels.append(label)
            parents.append(parent)
            edges.append(edge)
            for e, sub in kids:
                queue.append((sub, me, e))
        return cls(tuple(labels), tuple(parents), tuple(edges))


def tp(f: SigmaEmbedding) -> EmbType:
    tree = induced_subtree(f)
    order = tree.bfs()
    number = {v: i for i, v in enumerate(order)}
    labels = tuple(tree.labels[v] for v in order)
    parents = tuple(-1 if not v else number[v[:-1]] for v in order)
    edges = tuple(None if not v or v[-1].kind != "i" else v[-1].index for v in order)
    return EmbType(labels, parents, edges)


def enumerate_types(
    sigma: Term, n: int, m: int, budget: int = DEFAULT_SUBSET_BUDGET
) -> set[EmbType]:
    """All types of ``n``-element sub-chains of the ``m``-truncation of ``sigma``."""
    if n < 1:
        raise ValueError("n must be positive")
    pts = truncate(sigma, m).branches
    count = math.comb(len(pts), n)
    if count > budget:
        raise BudgetExceeded(f"{count} subsets of size {n} exceed the budget {budget}")
    return {tp(SigmaEmbedding(sigma, combo)) for combo in combinations(pts, n)}


def type_stabilization(
    sigma: Term, n: int, budget: int = DEFAULT_SUBSET_BUDGET
) -> tuple[set[EmbType], int]:
    """The full set of ``(n, sigma)``-types and the least truncation realizing it.

    Any ``n`` branches use at most ``n`` indices at each infinite-sum vertex,
    so the type set is complete once ``m >= n``.  This is confirmed on
    ``m = n, n+1, n+2``; the returned ``m*`` is the least ``m`` whose type set
    already equals the stable one.
    """
    final = enumerate_types(sigma, n, n, budget)
    for m in (n + 1, n + 2):
        if enumerate_types(sigma, n, m, budget) != final:
            raise NoStabilization(
                f"types of {format_term(sigma)} for n={n} still grow at m={m}"
            )
    m_star = n
    while m_star > 1 and enumerate_types(sigma, n, m_star - 1, budget) == final:
        m_star -= 1
    return final, m_star
