"""Finitely presented trees denoting countable chains.

A term is built from the leaves ``0`` (empty chain), ``1`` (one point) and
``Q`` (the rationals, only allowed as a whole term) with three sum nodes:

* ``(+ t0 ... tn)``  finite sum ``t0 + ... + tn``
* ``(w t0 ... tn)``  ``sum_{k in omega} (t0 + ... + tn)``, same block at every k
* ``(w* t0 ... tn)`` the same sum indexed by omega*

Points of the denoted chain are branches of the tree, written as words over
the alphabet of :class:`LambdaSymbol` and compared lexicographically.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from enum import IntEnum
from functools import total_ordering
from typing import Iterator, Sequence

from .errors import EmptyChain, InvalidTerm, NotScattered, PrefixViolation, TermSyntaxError

__all__ = [
    "Ordering",
    "LambdaSymbol",
    "iota",
    "w_edge",
    "ws_edge",
    "Term",
    "ZERO",
    "ONE",
    "Q",
    "plus",
    "omega",
    "omega_star",
    "parse_chain_term",
    "format_term",
    "term_depth",
    "normalize_drop_zero",
    "count_points",
    "hausdorff_rank",
    "hausdorff_rank_bounds",
    "FiniteChainApprox",
    "branches",
    "truncate",
    "lambda_compare",
    "branch_compare",
    "format_branch",
    "parse_branch",
    "CnfOrdinal",
    "OMEGA_OMEGA",
    "parse_cnf",
    "cnf_spectrum_finite",
    "cnf_to_term",
    "term_spectrum_finite",
]


class Ordering(IntEnum):
    LT = -1
    EQ = 0
    GT = 1


def _cmp(a, b) -> Ordering:
    if a < b:
        return Ordering.LT
    if a > b:
        return Ordering.GT
    return Ordering.EQ


# ---------------------------------------------------------------------------
# Alphabet


_KIND_RANK = {"i": 0, "w": 1, "w*": 2}


@total_ordering
@dataclass(frozen=True)
class LambdaSymbol:
    """One letter of a branch: ``i<n>`` (finite-sum edge), ``(w<k>)`` or ``(w*<k>)``."""

    kind: str
    index: int

    def __post_init__(self):
        if self.kind not in _KIND_RANK:
            raise ValueError(f"unknown symbol kind {self.kind!r}")
        if self.index < 0:
            raise ValueError("symbol index must be non-negative")

    def sort_key(self) -> tuple[int, int]:
        # omega* letters run backwards: (w*2) < (w*1) < (w*0)
        if self.kind == "w*":
            return (2, -self.index)
        return (_KIND_RANK[self.kind], self.index)

    def __lt__(self, other: LambdaSymbol) -> bool:
        if not isinstance(other, LambdaSymbol):
            return NotImplemented
        return self.sort_key() < other.sort_key()

    @property
    def is_infinite(self) -> bool:
        return self.kind != "i"

    def __str__(self) -> str:
        if self.kind == "i":
            return f"i{self.index}"
        return f"({self.kind}{self.index})"


def iota(n: int) -> LambdaSymbol:
    return LambdaSymbol("i", n)


def w_edge(k: int) -> LambdaSymbol:
    return LambdaSymbol("w", k)


def ws_edge(k: int) -> LambdaSymbol:
    return LambdaSymbol("w*", k)


def lambda_compare(a: LambdaSymbol, b: LambdaSymbol) -> Ordering:
    return _cmp(a.sort_key(), b.sort_key())


def branch_compare(x: Sequence[LambdaSymbol], y: Sequence[LambdaSymbol]) -> Ordering:
    """Lexicographic comparison of two branches.

    Distinct maximal branches never stand in the prefix relation, so a strict
    prefix signals that the inputs did not come from a common tree.
    """
    for a, b in zip(x, y):
        c = lambda_compare(a, b)
        if c is not Ordering.EQ:
            return c
    if len(x) != len(y):
        raise PrefixViolation(
            f"{format_branch(x)!r} and {format_branch(y)!r}: one is a strict prefix of the other"
        )
    return Ordering.EQ


_SYMBOL_RE = re.compile(r"i(\d+)|\(w\*(\d+)\)|\(w(\d+)\)")


def format_branch(b: Sequence[LambdaSymbol]) -> str:
    return ".".join(str(s) for s in b)


def parse_branch(text: str) -> tuple[LambdaSymbol, ...]:
    """Parse ``"i0.(w3).(w*1)"``; the empty string is the empty branch."""
    text = text.strip()
    if not text:
        return ()
    out = []
    for part in text.split("."):
        m = _SYMBOL_RE.fullmatch(part.strip())
        if m is None:
            raise ValueError(f"bad branch letter {part!r}")
        if m.group(1) is not None:
            out.append(iota(int(m.group(1))))
        elif m.group(2) is not None:
            out.append(ws_edge(int(m.group(2))))
        else:
            out.append(w_edge(int(m.group(3))))
    return tuple(out)


# ---------------------------------------------------------------------------
# Terms


_LEAVES = ("0", "1", "Q")
_SUMS = ("+", "w", "w*")


@dataclass(frozen=True)
class Term:
    kind: str
    children: tuple[Term, ...] = ()

    def __post_init__(self):
        if self.kind in _LEAVES:
            if self.children:
                raise InvalidTerm(f"leaf {self.kind!r} takes no children")
        elif self.kind in _SUMS:
            if not self.children:
                raise InvalidTerm(f"({self.kind} ...) needs at least one summand")
            for c in self.children:
                if not isinstance(c, Term):
                    raise InvalidTerm(f"summand {c!r} is not a Term")
                if c.kind == "Q":
                    raise InvalidTerm("Q may only appear as a whole term")
        else:
            raise InvalidTerm(f"unknown node kind {self.kind!r}")

    @property
    def is_leaf(self) -> bool:
        return self.kind in _LEAVES

    @property
    def is_infinite_sum(self) -> bool:
        return self.kind in ("w", "w*")

    def __str__(self) -> str:
        return format_term(self)

    def __repr__(self) -> str:
        return f"Term({format_term(self)!r})"


ZERO = Term("0")
ONE = Term("1")
Q = Term("Q")


def plus(*children: Term) -> Term:
    return Term("+", tuple(children))


def omega(*block: Term) -> Term:
    return Term("w", tuple(block))


def omega_star(*block: Term) -> Term:
    return Term("w*", tuple(block))


def format_term(t: Term) -> str:
    if t.is_leaf:
        return t.kind
    return "(" + t.kind + " " + " ".join(format_term(c) for c in t.children) + ")"


_TOKEN_RE = re.compile(r"\s*(?:(\()|(\))|(w\*|w|\+|0|1|Q))")


def _tokenize(text: str) -> list[tuple[str, int]]:
    tokens = []
    pos = 0
    while pos < len(text):
        if text[pos].isspace():
            pos += 1
            continue
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise TermSyntaxError(f"unexpected character {text[pos]!r}", pos)
        start = m.start(m.lastindex)
        tokens.append((m.group(m.lastindex), start))
        pos = m.end()
    return tokens


def parse_chain_term(text: str) -> Term:
    """Parse the s-expression form, e.g. ``"(+ 1 (w 1))"``."""
    tokens = _tokenize(text)
    if not tokens:
        raise TermSyntaxError("empty input", 0)
    term, i = _parse_at(tokens, 0, len(text))
    if i != len(tokens):
        raise TermSyntaxError("trailing input", tokens[i][1])
    return term


def _parse_at(tokens, i, end) -> tuple[Term, int]:
    if i >= len(tokens):
        raise TermSyntaxError("unexpected end of input", end)
    tok, pos = tokens[i]
    if tok in _LEAVES:
        return Term(tok), i + 1
    if tok != "(":
        raise TermSyntaxError(f"unexpected token {tok!r}", pos)
    if i + 1 >= len(tokens):
        raise TermSyntaxError("unexpected end of input", end)
    op, op_pos = tokens[i + 1]
    if op not in _SUMS:
        raise TermSyntaxError(f"expected one of + w w*, got {op!r}", op_pos)
    i += 2
    children = []
    while True:
        if i >= len(tokens):
            raise TermSyntaxError("unclosed parenthesis", end)
        if tokens[i][0] == ")":
            break
        child, i = _parse_at(tokens, i, end)
        children.append(child)
    if not children:
        raise TermSyntaxError(f"({op} ...) needs at least one summand", tokens[i][1])
    return Term(op, tuple(children)), i + 1


def term_depth(t: Term) -> int:
    if t.is_leaf:
        return 0
    return 1 + max(term_depth(c) for c in t.children)


def _require_scattered(t: Term) -> None:
    if t.kind == "Q":
        raise NotScattered("Q denotes a non-scattered chain")


# ---------------------------------------------------------------------------
# Normalization and rank


def _drop_zero(t: Term) -> Term | None:
    if t.kind == "0":
        return None
    if t.is_leaf:
        return t
    kept = tuple(c for c in (_drop_zero(c) for c in t.children) if c is not None)
    if not kept:
        return None
    if t.kind == "+" and len(kept) == 1:
        return kept[0]
    return Term(t.kind, kept)


def normalize_drop_zero(t: Term) -> Term:
    """Return an equivalent term with no ``0`` leaves.

    Empty summands are dropped, a finite sum left with one summand is replaced
    by it, and an infinite sum whose block is empty collapses to the empty chain.
    """
    out = _drop_zero(t)
    if out is None:
        raise EmptyChain(f"{format_term(t)} denotes the empty chain")
    return out


def count_points(t: Term, m: int) -> int:
    """Number of points of ``t`` with every infinite sum cut to its first ``m`` indices."""
    _require_scattered(t)
    if t.kind == "0":
        return 0
    if t.kind == "1":
        return 1
    inner = sum(count_points(c, m) for c in t.children)
    return inner if t.kind == "+" else m * inner


def hausdorff_rank(t: Term) -> int:
    """Structural rank: leaves 0, finite sums take the max, infinite sums add one.

    This is the nesting depth of infinite sums. Finite sums can push the true
    Hausdorff rank higher (``omega + 1`` needs two levels of Z-sums), see
    :func:`hausdorff_rank_bounds`.
    """
    _require_scattered(t)
    if t.is_leaf:
        return 0
    r = max(hausdorff_rank(c) for c in t.children)
    return r if t.kind == "+" else r + 1


def hausdorff_rank_bounds(t: Term) -> tuple[int, int]:
    """Lower and upper bound on the Hausdorff rank of the denoted chain.

    The lower bound is :func:`hausdorff_rank`. The upper bound charges one
    extra level for every finite sum with two or more nonempty summands,
    since a finite sum is a Z-sum with finitely many nonempty terms.
    """
    _require_scattered(t)
    t = normalize_drop_zero(t)
    return hausdorff_rank(t), _rank_upper(t)


def _rank_upper(t: Term) -> int:
    if t.is_leaf:
        return 0
    r = max(_rank_upper(c) for c in t.children)
    if len(t.children) > 1:
        # the block or the finite sum is itself a finite sum
        r += 1
    return r if t.kind == "+" else r + 1


# ---------------------------------------------------------------------------
# Branches and truncation


@dataclass(frozen=True)
class FiniteChainApprox:
    branches: tuple[tuple[LambdaSymbol, ...], ...]

    def __post_init__(self):
        for a, b in zip(self.branches, self.branches[1:]):
            if branch_compare(a, b) is not Ordering.LT:
                raise ValueError(
                    f"branches not strictly sorted: {format_branch(a)!r}, {format_branch(b)!r}"
                )

    def __len__(self) -> int:
        return len(self.branches)

    def __iter__(self):
        return iter(self.branches)


def branches(t: Term, m: int) -> Iterator[tuple[LambdaSymbol, ...]]:
    """Yield the branches of ``t`` with infinite sums cut to indices ``0..m-1``.

    Branches come out in increasing lexicographic order. ``0`` leaves carry
    no branch.
    """
    _require_scattered(t)
    yield from _branches(t, m, ())


def _branches(t: Term, m: int, prefix: tuple) -> Iterator[tuple]:
    if t.kind == "0":
        return
    if t.kind == "1":
        yield prefix
        return
    if t.kind == "+":
        for j, c in enumerate(t.children):
            yield from _branches(c, m, prefix + (iota(j),))
        return
    indices = range(m) if t.kind == "w" else range(m - 1, -1, -1)
    for k in indices:
        head = prefix + (LambdaSymbol(t.kind, k),)
        if len(t.children) == 1:
            yield from _branches(t.children[0], m, head)
        else:
            for j, c in enumerate(t.children):
                yield from _branches(c, m, head + (iota(j),))


def truncate(t: Term, m: int) -> FiniteChainApprox:
    """Finite sub-chain of ``t``: every infinite sum keeps the indices ``0..m-1``.

    For an omega* sum these are its last ``m`` summands, so truncations nest as
    ``m`` grows for both kinds of infinite sum.
    """
    if m < 1:
        raise ValueError("m must be at least 1")
    return FiniteChainApprox(tuple(branches(t, m)))


# ---------------------------------------------------------------------------
# Ordinals in Cantor normal form below omega^omega


class _OmegaOmega:
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "OMEGA_OMEGA"

    def __str__(self) -> str:
        return "w^w"


OMEGA_OMEGA = _OmegaOmega()


@dataclass(frozen=True)
class CnfOrdinal:
    """``sum w^e * c`` with strictly decreasing finite exponents; empty means 0."""

    terms: tuple[tuple[int, int], ...] = ()

    def __post_init__(self):
        for e, c in self.terms:
            if e < 0 or c < 1:
                raise ValueError(f"bad CNF term w^{e}*{c}")
        exps = [e for e, _ in self.terms]
        if any(a <= b for a, b in zip(exps, exps[1:])):
            raise ValueError("CNF exponents must be strictly decreasing")

    def __add__(self, other: CnfOrdinal) -> CnfOrdinal:
        out = list(self.terms)
        for e, c in other.terms:
            # ordinal addition absorbs every smaller power on the left
            while out and out[-1][0] < e:
                out.pop()
            if out and out[-1][0] == e:
                out[-1] = (e, out[-1][1] + c)
            else:
                out.append((e, c))
        return CnfOrdinal(tuple(out))

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for e, c in self.terms:
            if e == 0:
                parts.append(str(c))
            else:
                parts.append(f"w^{e}*{c}")
        return " + ".join(parts)


_CNF_TERM_RE = re.compile(
    r"""\s*(?:
        (?P<nat>\d+)
      | [wω] (?: \s*\^\s* (?: (?P<exp>\d+) | \(?\s*(?P<wexp>[wω])\s*\)? ) )?
        (?: \s*\*\s* (?P<coef>\d+) )?
    )\s*""",
    re.VERBOSE,
)


def parse_cnf(text: str) -> CnfOrdinal | _OmegaOmega:
    """Parse ``"w^3*2 + w^1*1 + 5"``; ``"w^w"`` (also ``ω^ω``) yields the flag.

    Summands need not be in normal form; they are combined with ordinal
    addition, so ``"w + w^2"`` is ``w^2``.  Any sum that evaluates to exactly
    ``w^w`` yields the flag; anything above it is rejected.
    """
    if not text.strip():
        raise ValueError("empty ordinal")
    acc = CnfOrdinal()
    has_top = False
    for raw in text.split("+"):
        m = _CNF_TERM_RE.fullmatch(raw)
        if m is None:
            raise ValueError(f"cannot parse ordinal summand {raw.strip()!r}")
        if m.group("nat") is not None:
            n = int(m.group("nat"))
            piece = CnfOrdinal(((0, n),)) if n else CnfOrdinal()
        elif m.group("wexp") is not None:
            coef = int(m.group("coef") or 1)
            if has_top or coef != 1:
                raise ValueError("ordinals above w^w are not supported")
            has_top = True
            acc = CnfOrdinal()
            continue
        else:
            e = int(m.group("exp")) if m.group("exp") is not None else 1
            c = int(m.group("coef") or 1)
            if c == 0:
                continue
            piece = CnfOrdinal(((e, c),))
        if has_top and piece.terms:
            raise ValueError("ordinals above w^w are not supported")
        acc = acc + piece
    return OMEGA_OMEGA if has_top else acc


def cnf_spectrum_finite(alpha: CnfOrdinal | _OmegaOmega | str) -> bool:
    """True iff the ordinal lies below ``w^w`` (finite big Ramsey spectrum)."""
    if isinstance(alpha, str):
        alpha = parse_cnf(alpha)
    if alpha is OMEGA_OMEGA:
        return False
    if not isinstance(alpha, CnfOrdinal):
        raise TypeError(f"not an ordinal: {alpha!r}")
    return True


def _power_term(e: int) -> Term:
    t = ONE
    for _ in range(e):
        t = omega(t)
    return t


def cnf_to_term(alpha: CnfOrdinal) -> Term:
    """Term whose chain is the ordinal ``alpha`` (``w^e`` is ``sum_omega w^(e-1)``)."""
    if not alpha.terms:
        return ZERO
    parts = [_power_term(e) for e, c in alpha.terms for _ in range(c)]
    return parts[0] if len(parts) == 1 else plus(*parts)


def term_spectrum_finite(t: Term) -> tuple[bool, int | None]:
    """Every term has finite big Ramsey spectrum: ``Q`` is non-scattered and
    scattered terms have finite rank.  Returns ``(True, rank)``, rank ``None`` for ``Q``."""
    if t.kind == "Q":
        return True, None
    return True, hausdorff_rank(t)
