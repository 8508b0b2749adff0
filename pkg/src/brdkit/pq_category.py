"""Partial maps ``n -> Q`` and the encoding of branch embeddings into them.

Rationals are :class:`fractions.Fraction` throughout; comparisons are exact.
Self-embeddings of Q are represented by :class:`EmbeddingGerm`, a finite
strictly increasing graph read as the piecewise-linear map through its
points (slope 1 beyond the ends).
"""
from __future__ import annotations

import bisect
import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .branch_calculus import EmbType, SigmaEmbedding, is_branch, tp
from .chain_terms import LambdaSymbol, Term, format_term, iota
from .errors import GermGap, InvalidTerm, NoInfiniteVertex, NotInM, TypeMismatch

__all__ = [
    "Rational",
    "to_rational",
    "PartialMapQ",
    "NType",
    "tp_pq",
    "enumerate_ntypes",
    "EmbeddingGerm",
    "compose_pq",
    "oplus",
    "split",
    "pad",
    "unpad",
    "xi",
    "xi_inv",
    "code_size",
    "psi_encode",
    "phi_decode",
]

Rational = Fraction


def to_rational(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, float):
        raise TypeError("floats are not accepted; pass an int, str or Fraction")
    return Fraction(x)


# ---------------------------------------------------------------------------
# Partial maps


@dataclass(frozen=True)
class PartialMapQ:
    """A morphism ``n -> Q``: ``entries`` is the sorted graph of the partial map."""

    n: int
    entries: tuple[tuple[int, Fraction], ...] = ()

    def __post_init__(self):
        if self.n < 0:
            raise ValueError("domain size must be non-negative")
        keys = [k for k, _ in self.entries]
        if keys != sorted(set(keys)):
            raise ValueError("entries must have strictly increasing keys")
        if keys and (keys[0] < 0 or keys[-1] >= self.n):
            raise ValueError(f"entry key out of range for n={self.n}")

    @classmethod
    def from_dict(cls, n: int, entries: Mapping[int, object]) -> PartialMapQ:
        return cls(n, tuple(sorted((int(k), to_rational(v)) for k, v in entries.items())))

    @classmethod
    def empty(cls, n: int) -> PartialMapQ:
        return cls(n, ())

    def as_dict(self) -> dict[int, Fraction]:
        return dict(self.entries)

    @property
    def domain(self) -> tuple[int, ...]:
        return tuple(k for k, _ in self.entries)

    @property
    def values(self) -> tuple[Fraction, ...]:
        return tuple(v for _, v in self.entries)

    def is_empty(self) -> bool:
        return not self.entries

    def to_json(self) -> str:
        return json.dumps(
            {"n": self.n, "entries": {str(k): str(v) for k, v in self.entries}}, sort_keys=True
        )

    @classmethod
    def from_json(cls, text: str | dict) -> PartialMapQ:
        data = json.loads(text) if isinstance(text, str) else text
        return cls.from_dict(int(data["n"]), {int(k): Fraction(v) for k, v in data["entries"].items()})


NType = tuple  # tuple[frozenset[int], ...]; () is the empty type


def tp_pq(f: PartialMapQ) -> NType:
    """Group the domain by value, blocks ordered by increasing value."""
    groups: dict[Fraction, set[int]] = {}
    for k, v in f.entries:
        groups.setdefault(v, set()).add(k)
    return tuple(frozenset(groups[v]) for v in sorted(groups))


def _ordered_set_partitions(items: tuple[int, ...]):
    if not items:
        yield ()
        return
    first, rest = items[0], items[1:]
    for part in _ordered_set_partitions(rest):
        # add first to an existing block
        for i in range(len(part)):
            yield part[:i] + (part[i] | {first},) + part[i + 1 :]
        # or as a new singleton block in any position
        for i in range(len(part) + 1):
            yield part[:i] + (frozenset({first}),) + part[i:]


def enumerate_ntypes(n: int) -> list[NType]:
    """All ``n``-types: the empty tuple and every ordered partition of a nonempty subset."""
    out: list[NType] = [()]
    for mask in range(1, 1 << n):
        subset = tuple(i for i in range(n) if mask >> i & 1)
        out.extend(_ordered_set_partitions(subset))
    return out


# ---------------------------------------------------------------------------
# Self-embeddings of Q, finitely presented


@dataclass(frozen=True)
class EmbeddingGerm:
    """A strictly increasing finite graph ``((x0, y0), (x1, y1), ...)``.

    The empty germ is the identity.  Off the graph the germ is evaluated by
    linear interpolation between neighbouring points and with slope 1 past
    the ends, which keeps it strictly increasing.
    """

    points: tuple[tuple[Fraction, Fraction], ...] = ()

    def __post_init__(self):
        for (x0, y0), (x1, y1) in zip(self.points, self.points[1:]):
            if not (x0 < x1 and y0 < y1):
                raise ValueError("germ graph must be strictly increasing in both coordinates")

    @classmethod
    def of(cls, pairs: Iterable[tuple[object, object]]) -> EmbeddingGerm:
        return cls(tuple(sorted((to_rational(x), to_rational(y)) for x, y in pairs)))

    @classmethod
    def shift(cls, c) -> EmbeddingGerm:
        c = to_rational(c)
        return cls(((Fraction(0), c),))

    def domain(self) -> tuple[Fraction, ...]:
        return tuple(x for x, _ in self.points)

    def __contains__(self, x) -> bool:
        xs = self.domain()
        j = bisect.bisect_left(xs, x)
        return j < len(xs) and xs[j] == x

    def evaluate(self, x) -> Fraction:
        x = to_rational(x)
        pts = self.points
        if not pts:
            return x
        xs = [p for p, _ in pts]
        j = bisect.bisect_left(xs, x)
        if j < len(pts) and xs[j] == x:
            return pts[j][1]
        if j == 0:
            return pts[0][1] - (pts[0][0] - x)
        if j == len(pts):
            return pts[-1][1] + (x - pts[-1][0])
        (x0, y0), (x1, y1) = pts[j - 1], pts[j]
        return y0 + (x - x0) * (y1 - y0) / (x1 - x0)

    def extended(self, xs: Iterable) -> EmbeddingGerm:
        """A new germ whose graph also covers ``xs``; the map itself is unchanged."""
        new = dict(self.points)
        for x in xs:
            x = to_rational(x)
            if x not in new:
                new[x] = self.evaluate(x)
        return EmbeddingGerm(tuple(sorted(new.items())))

    def __call__(self, x) -> Fraction:
        return self.evaluate(x)

    def compose(self, inner: EmbeddingGerm) -> EmbeddingGerm:
        """``self o inner``, sampled on the union of both graphs' relevant points."""
        xs = set(inner.domain())
        xs.update(x for x in _preimages(inner, self.domain()))
        return EmbeddingGerm(tuple(sorted((x, self(inner(x))) for x in xs)))

    def to_json(self) -> str:
        return json.dumps([[str(x), str(y)] for x, y in self.points])

    @classmethod
    def from_json(cls, text: str | list) -> EmbeddingGerm:
        data = json.loads(text) if isinstance(text, str) else text
        return cls.of((Fraction(x), Fraction(y)) for x, y in data)


def _preimages(g: EmbeddingGerm, ys: Iterable[Fraction]) -> list[Fraction]:
    """``g^{-1}(y)`` for the piecewise-linear extension of ``g``."""
    out = []
    pts = g.points
    for y in ys:
        if not pts:
            out.append(y)
            continue
        ys_ = [b for _, b in pts]
        j = bisect.bisect_left(ys_, y)
        if j < len(pts) and ys_[j] == y:
            out.append(pts[j][0])
        elif j == 0:
            out.append(pts[0][0] - (pts[0][1] - y))
        elif j == len(pts):
            out.append(pts[-1][0] + (y - pts[-1][1]))
        else:
            (x0, y0), (x1, y1) = pts[j - 1], pts[j]
            out.append(x0 + (y - y0) * (x1 - x0) / (y1 - y0))
    return out


def compose_pq(h: EmbeddingGerm, f: PartialMapQ, extend: bool = True) -> PartialMapQ:
    """``h o f``: same domain, values pushed through ``h``.

    With ``extend=False`` every value of ``f`` must already lie on ``h``'s graph.
    """
    if not extend:
        missing = [v for v in f.values if v not in h]
        if missing and h.points:
            raise GermGap(f"germ undefined at {', '.join(map(str, missing))}")
    return PartialMapQ(f.n, tuple((k, h(v)) for k, v in f.entries))


# ---------------------------------------------------------------------------
# Concatenation


def oplus(fs: Sequence[PartialMapQ]) -> PartialMapQ:
    entries = []
    offset = 0
    for f in fs:
        entries.extend((offset + k, v) for k, v in f.entries)
        offset += f.n
    return PartialMapQ(offset, tuple(entries))


def split(f: PartialMapQ, sizes: Sequence[int]) -> list[PartialMapQ]:
    """Inverse of :func:`oplus` for known summand sizes."""
    if sum(sizes) != f.n:
        raise ValueError(f"sizes {list(sizes)} do not add up to {f.n}")
    out, offset = [], 0
    for s in sizes:
        out.append(PartialMapQ(s, tuple((k - offset, v) for k, v in f.entries if offset <= k < offset + s)))
        offset += s
    return out


def pad(p: PartialMapQ, j: int, sizes: Sequence[int]) -> PartialMapQ:
    """``empty_{s_0+..+s_{j-1}} (+) p (+) empty_{s_{j+1}+..}``."""
    if not 0 <= j < len(sizes):
        raise ValueError(f"slot {j} out of range")
    if p.n != sizes[j]:
        raise ValueError(f"map has size {p.n} but slot {j} has size {sizes[j]}")
    return oplus([p if i == j else PartialMapQ.empty(s) for i, s in enumerate(sizes)])


def unpad(f: PartialMapQ, sizes: Sequence[int], j: int | None = None) -> tuple[int, PartialMapQ]:
    """Recover ``(j, p)`` from a padded map.

    Without ``j`` exactly one slot may carry entries; pass ``j`` for empty maps.
    """
    parts = split(f, sizes)
    if j is not None:
        if any(not p.is_empty() for i, p in enumerate(parts) if i != j):
            raise ValueError(f"entries outside slot {j}")
        return j, parts[j]
    used = [i for i, p in enumerate(parts) if not p.is_empty()]
    if len(used) != 1:
        raise ValueError(f"expected exactly one nonempty slot, found {len(used)}")
    return used[0], parts[used[0]]


# ---------------------------------------------------------------------------
# A fixed enumeration of Q


def _calkin_wilf(n: int) -> Fraction:
    """``n``-th positive rational (1-based) in breadth-first Calkin-Wilf order."""
    a, b = 1, 1
    for bit in bin(n)[3:]:
        if bit == "0":
            a, b = a, a + b
        else:
            a, b = a + b, b
    return Fraction(a, b)


def _calkin_wilf_index(q: Fraction) -> int:
    a, b = q.numerator, q.denominator
    bits: list[str] = []
    while (a, b) != (1, 1):
        if a < b:
            k = (b - 1) // a
            b -= k * a
            bits.append("0" * k)
        else:
            k = (a - 1) // b
            a -= k * b
            bits.append("1" * k)
    return int("1" + "".join(reversed(bits)), 2) if bits else 1


def xi(k: int) -> Fraction:
    """Bijection ``omega -> Q``: ``0, 1, -1, 1/2, -1/2, 2, -2, 1/3, ...``."""
    if k < 0:
        raise ValueError("xi is defined on naturals")
    if k == 0:
        return Fraction(0)
    q = _calkin_wilf((k + 1) // 2)
    return q if k % 2 else -q


def xi_inv(q) -> int:
    q = to_rational(q)
    if q == 0:
        return 0
    i = _calkin_wilf_index(abs(q))
    return 2 * i - 1 if q > 0 else 2 * i


# ---------------------------------------------------------------------------
# Encoding branch embeddings of a fixed type


def code_size(tau: EmbType) -> int:
    """Size of the domain of the code maps for type ``tau`` (1 when it has no infinite vertex)."""
    sizes = tau.block_sizes()
    return sum(sizes) if sizes else 1


def _label_sets(f: SigmaEmbedding, tau: EmbType) -> list[list[int]]:
    """For each omega / omega* vertex of the induced tree (BFS order), its child edge indices."""
    from .branch_calculus import induced_subtree

    tree = induced_subtree(f)
    order = tree.bfs()
    out = []
    for v in order:
        if tree.labels[v] in ("w", "w*"):
            out.append(sorted(c[-1].index for c in tree.children[v]))
    return out


def psi_encode(sigma: Term, tau: EmbType, f: SigmaEmbedding) -> PartialMapQ:
    """Encode ``f`` as the total map ``xi o (E_1 (+) ... (+) E_s)`` on ``code_size(tau)``.

    Block ``i`` lists, increasingly, the indices of the edges below the
    ``i``-th omega / omega* vertex of the induced tree.
    """
    if f.sigma != sigma:
        raise TypeMismatch("embedding lives in a different term")
    if tp(f) != tau:
        raise TypeMismatch("embedding is not of the given type")
    if not tau.infinite_vertices:
        raise NoInfiniteVertex("type has no omega / omega* vertex; its code map is constant")
    values = [xi(k) for block in _label_sets(f, tau) for k in block]
    return PartialMapQ(len(values), tuple(enumerate(values)))


def phi_decode(sigma: Term, tau: EmbType, p: PartialMapQ) -> SigmaEmbedding:
    """Inverse of :func:`psi_encode` on its image.

    For a type without infinite vertices every nonempty map on one point
    decodes to the unique embedding of that type.
    """
    sizes = tau.block_sizes()
    if not sizes:
        if p.n != 1 or p.is_empty():
            raise NotInM("constant-type codes are the nonempty maps 1 -> Q")
        blocks: list[list[int]] = []
    else:
        if p.n != sum(sizes) or len(p.entries) != p.n:
            raise NotInM(f"code must be a total map on {sum(sizes)} points")
        idx = [xi_inv(v) for v in p.values]
        blocks, off = [], 0
        for s in sizes:
            block = idx[off : off + s]
            if any(a >= b for a, b in zip(block, block[1:])):
                raise NotInM("code block is not strictly increasing")
            blocks.append(block)
            off += s
    branches = _rebuild(tau, blocks)
    for b in branches:
        if not is_branch(sigma, b):
            raise NotInM(f"decoded word is not a branch of {format_term(sigma)}")
    try:
        f = SigmaEmbedding.of(sigma, branches)
    except (InvalidTerm, ValueError) as exc:
        raise NotInM(str(exc)) from exc
    if tp(f) != tau:
        raise NotInM("decoded embedding has a different type")
    return f


def _rebuild(tau: EmbType, blocks: list[list[int]]) -> list[tuple[LambdaSymbol, ...]]:
    words: dict[int, tuple] = {0: ()}
    next_block = iter(blocks)
    for v in range(len(tau)):
        kids = tau.children(v)
        lab = tau.labels[v]
        if lab in ("w", "w*"):
            block = next(next_block)
            # tree order is increasing index for omega, decreasing for omega*
            indices = block if lab == "w" else list(reversed(block))
            for u, k in zip(kids, indices):
                words[u] = words[v] + (LambdaSymbol(lab, k),)
        else:
            for u in kids:
                words[u] = words[v] + (iota(tau.edges[u]),)
    return [words[v] for v in range(len(tau)) if tau.labels[v] == "1"]
