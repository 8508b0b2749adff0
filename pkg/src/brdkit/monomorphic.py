"""Finite relational structures: monomorphy, decompositions, chaining orders.

Universes are ``{0, ..., n-1}``.  Everything here is exhaustive and meant for
``n <= 8``; the default cap enforces that.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations, permutations, product
from pathlib import Path
from typing import Iterable, Iterator, Mapping, Sequence

from .errors import CapExceeded, LanguageMismatch, NotChaining

__all__ = [
    "DEFAULT_CAP",
    "DEFAULT_MAX_ARITY",
    "RelationalLanguage",
    "FiniteStructure",
    "Partition",
    "LinearOrder",
    "graph",
    "chain",
    "load_structure",
    "induced",
    "iso",
    "isomorphisms",
    "self_embeddings",
    "canonical_code",
    "is_monomorphic_finite",
    "is_mono_decomposition",
    "set_partitions",
    "valid_partitions",
    "coarsest_partition_exhaustive",
    "minimal_mono_decomposition",
    "pattern",
    "pattern_table",
    "chains",
    "chainability_order",
    "chain_pullback",
    "BlockMappingReport",
    "check_block_mapping",
    "interval_order_construct",
    "is_interval",
    "find_local_iso_violation",
    "local_iso_check",
]

DEFAULT_CAP = 8
DEFAULT_MAX_ARITY = 3


@dataclass(frozen=True)
class RelationalLanguage:
    symbols: tuple[tuple[str, int], ...]

    def __post_init__(self):
        names = [s for s, _ in self.symbols]
        if len(set(names)) != len(names):
            raise ValueError("relation names must be unique")
        if any(a < 1 for _, a in self.symbols):
            raise ValueError("arities must be at least 1")

    @classmethod
    def of(cls, *symbols: tuple[str, int]) -> "RelationalLanguage":
        return cls(tuple((str(s), int(a)) for s, a in symbols))

    def arity(self, name: str) -> int:
        return dict(self.symbols)[name]

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(s for s, _ in self.symbols)


@dataclass(frozen=True)
class FiniteStructure:
    """``relations`` is a tuple of frozensets aligned with ``language.symbols``."""

    language: RelationalLanguage
    size: int
    relations: tuple[frozenset, ...]

    def __post_init__(self):
        if self.size < 1:
            raise ValueError("structures need at least one element")
        if len(self.relations) != len(self.language.symbols):
            raise ValueError("one relation per symbol")
        for (name, arity), rel in zip(self.language.symbols, self.relations):
            for t in rel:
                if len(t) != arity or any(not 0 <= x < self.size for x in t):
                    raise ValueError(f"bad tuple {t!r} for {name}/{arity}")

    @classmethod
    def build(cls, language: RelationalLanguage, size: int, relations: Mapping[str, Iterable]) -> "FiniteStructure":
        rels = tuple(frozenset(tuple(t) for t in relations.get(name, ())) for name in language.names)
        return cls(language, size, rels)

    def relation(self, name: str) -> frozenset:
        return self.relations[self.language.names.index(name)]

    @property
    def universe(self) -> range:
        return range(self.size)

    def to_json(self) -> dict:
        return {
            "language": [{"name": s, "arity": a} for s, a in self.language.symbols],
            "size": self.size,
            "relations": {s: sorted(list(t) for t in r) for (s, _), r in zip(self.language.symbols, self.relations)},
        }

    @classmethod
    def from_json(cls, data: dict) -> "FiniteStructure":
        lang = RelationalLanguage.of(*((d["name"], d["arity"]) for d in data["language"]))
        return cls.build(lang, int(data["size"]), data.get("relations", {}))


def load_structure(path: str | Path) -> FiniteStructure:
    return FiniteStructure.from_json(json.loads(Path(path).read_text()))


def graph(n: int, edges: Iterable[tuple[int, int]], name: str = "E") -> FiniteStructure:
    """Symmetric irreflexive binary relation."""
    rel = set()
    for a, b in edges:
        rel.add((a, b))
        rel.add((b, a))
    return FiniteStructure.build(RelationalLanguage.of((name, 2)), n, {name: rel})


def chain(n: int, name: str = "<") -> FiniteStructure:
    return FiniteStructure.build(RelationalLanguage.of((name, 2)), n, {name: combinations(range(n), 2)})


@dataclass(frozen=True)
class Partition:
    """Blocks sorted internally and by least element."""

    blocks: tuple[tuple[int, ...], ...]

    @classmethod
    def of(cls, blocks: Iterable[Iterable[int]]) -> "Partition":
        bs = [tuple(sorted(b)) for b in blocks]
        if any(not b for b in bs):
            raise ValueError("blocks must be nonempty")
        flat = [x for b in bs for x in b]
        if len(set(flat)) != len(flat):
            raise ValueError("blocks must be disjoint")
        return cls(tuple(sorted(bs)))

    @classmethod
    def singletons(cls, n: int) -> "Partition":
        return cls(tuple((i,) for i in range(n)))

    def check_cover(self, n: int) -> None:
        flat = [x for b in self.blocks for x in b]
        if sorted(flat) != list(range(n)):
            raise ValueError(f"{self.blocks!r} is not a partition of range({n})")

    def block_of(self) -> dict[int, int]:
        return {x: i for i, b in enumerate(self.blocks) for x in b}

    def refines(self, other: "Partition") -> bool:
        """Every block of ``self`` sits inside a block of ``other``."""
        where = other.block_of()
        return all(len({where[x] for x in b}) == 1 for b in self.blocks)

    def as_lists(self) -> list[list[int]]:
        return [list(b) for b in self.blocks]

    def __len__(self) -> int:
        return len(self.blocks)


@dataclass(frozen=True)
class LinearOrder:
    """``seq`` lists the universe in increasing order."""

    seq: tuple[int, ...]

    def __post_init__(self):
        if sorted(self.seq) != list(range(len(self.seq))):
            raise ValueError(f"{self.seq!r} is not a permutation")

    @classmethod
    def of(cls, seq: Iterable[int]) -> "LinearOrder":
        return cls(tuple(seq))

    @property
    def position(self) -> dict[int, int]:
        return {x: i for i, x in enumerate(self.seq)}

    def less(self, a: int, b: int) -> bool:
        pos = self.position
        return pos[a] < pos[b]


def _cap(S: FiniteStructure, cap: int, max_arity: int = DEFAULT_MAX_ARITY) -> None:
    if S.size > cap:
        raise CapExceeded(f"structure has {S.size} elements, cap is {cap}")
    if any(a > max_arity for _, a in S.language.symbols):
        raise CapExceeded(f"relation arity exceeds {max_arity}")


# ---------------------------------------------------------------------------
# Isomorphism


def induced(S: FiniteStructure, subset: Iterable[int]) -> FiniteStructure:
    """Substructure on ``subset``, relabelled ``0..k-1`` in increasing order."""
    elems = sorted(subset)
    idx = {x: i for i, x in enumerate(elems)}
    rels = tuple(
        frozenset(tuple(idx[x] for x in t) for t in rel if all(x in idx for x in t)) for rel in S.relations
    )
    return FiniteStructure(S.language, len(elems), rels)


def _same_language(A: FiniteStructure, B: FiniteStructure) -> None:
    if A.language != B.language:
        raise LanguageMismatch(f"{A.language.symbols!r} vs {B.language.symbols!r}")


def _profile(S: FiniteStructure, x: int) -> tuple:
    """Isomorphism-invariant data about a single point, used to prune."""
    out = []
    for rel in S.relations:
        counts = {}
        for t in rel:
            for i, y in enumerate(t):
                if y == x:
                    key = (i, tuple(z == x for z in t))
                    counts[key] = counts.get(key, 0) + 1
        out.append(tuple(sorted(counts.items())))
    return tuple(out)


def isomorphisms(A: FiniteStructure, B: FiniteStructure) -> Iterator[tuple[int, ...]]:
    """All bijections ``p`` (as tuples, ``p[a]`` the image of ``a``) with ``R^A(t) <-> R^B(p(t))``."""
    _same_language(A, B)
    if A.size != B.size or [len(r) for r in A.relations] != [len(r) for r in B.relations]:
        return
    n = A.size
    pa = [_profile(A, x) for x in range(n)]
    pb = [_profile(B, y) for y in range(n)]
    # tuples of A checked once all their points are assigned, i.e. at their max element
    due: list[list[tuple[int, tuple]]] = [[] for _ in range(n)]
    for ri, rel in enumerate(A.relations):
        for t in rel:
            due[max(t)].append((ri, t))
    img = [-1] * n
    used = [False] * n

    def rec(x: int):
        if x == n:
            yield tuple(img)
            return
        for y in range(n):
            if used[y] or pa[x] != pb[y]:
                continue
            img[x] = y
            used[y] = True
            if _consistent(A, B, img, x, due[x]):
                yield from rec(x + 1)
            used[y] = False
            img[x] = -1

    yield from rec(0)


def _consistent(A, B, img, x, due_here) -> bool:
    for ri, t in due_here:
        if tuple(img[z] for z in t) not in B.relations[ri]:
            return False
    # converse: B-tuples over the current image must come from A-tuples
    assigned = {img[z]: z for z in range(x + 1)}
    y = img[x]
    for ri, rel in enumerate(B.relations):
        for t in rel:
            if y in t and all(s in assigned for s in t):
                if tuple(assigned[s] for s in t) not in A.relations[ri]:
                    return False
    return True


def iso(A: FiniteStructure, B: FiniteStructure) -> tuple[int, ...] | None:
    return next(isomorphisms(A, B), None)


def self_embeddings(S: FiniteStructure) -> list[tuple[int, ...]]:
    """For a finite structure these are exactly its automorphisms."""
    return list(isomorphisms(S, S))


def canonical_code(S: FiniteStructure) -> tuple:
    """Lexicographically least relabelled relation table over all ``n!`` relabellings."""
    best = None
    for p in permutations(range(S.size)):
        code = tuple(tuple(sorted(tuple(p[x] for x in t) for t in rel)) for rel in S.relations)
        if best is None or code < best:
            best = code
    return (S.size, best)


# ---------------------------------------------------------------------------
# Monomorphy and decompositions


@lru_cache(maxsize=256)
def _subset_classes(S: FiniteStructure) -> tuple[int, ...]:
    """Isomorphism class id of ``S[X]`` for every bitmask ``X`` (the empty set gets 0)."""
    n = S.size
    reps: dict[int, list[tuple[int, FiniteStructure]]] = {}
    out = [0] * (1 << n)
    next_id = 1
    for mask in range(1, 1 << n):
        sub = induced(S, [i for i in range(n) if mask >> i & 1])
        key = (sub.size, tuple(len(r) for r in sub.relations))
        bucket = reps.setdefault(key, [])
        for cid, rep in bucket:
            if iso(sub, rep) is not None:
                out[mask] = cid
                break
        else:
            bucket.append((next_id, sub))
            out[mask] = next_id
            next_id += 1
    return tuple(out)


def is_monomorphic_finite(S: FiniteStructure, cap: int = DEFAULT_CAP) -> bool:
    _cap(S, cap)
    return is_mono_decomposition(S, Partition((tuple(range(S.size)),)), cap)


def is_mono_decomposition(S: FiniteStructure, P: Partition, cap: int = DEFAULT_CAP) -> bool:
    """Subsets with equal block-intersection counts must induce isomorphic substructures."""
    _cap(S, cap)
    P.check_cover(S.size)
    classes = _subset_classes(S)
    block_masks = [sum(1 << x for x in b) for b in P.blocks]
    seen: dict[tuple[int, ...], int] = {}
    for mask, cid in enumerate(classes):
        trace = tuple(bin(mask & bm).count("1") for bm in block_masks)
        if seen.setdefault(trace, cid) != cid:
            return False
    return True


def set_partitions(n: int) -> Iterator[Partition]:
    """All partitions of ``range(n)`` via restricted growth strings."""

    def rec(i: int, rgs: list[int], top: int):
        if i == n:
            blocks: dict[int, list[int]] = {}
            for x, b in enumerate(rgs):
                blocks.setdefault(b, []).append(x)
            yield Partition.of(blocks.values())
            return
        for b in range(top + 2):
            rgs.append(b)
            yield from rec(i + 1, rgs, max(top, b))
            rgs.pop()

    if n == 0:
        return
    yield from rec(1, [0], 0)


def valid_partitions(S: FiniteStructure, cap: int = DEFAULT_CAP) -> list[Partition]:
    _cap(S, cap)
    return [P for P in set_partitions(S.size) if is_mono_decomposition(S, P, cap)]


def coarsest_partition_exhaustive(S: FiniteStructure, cap: int = DEFAULT_CAP) -> Partition:
    """Search every partition; the answer must be refined by all the valid ones."""
    valid = valid_partitions(S, cap)
    best = min(valid, key=lambda P: (len(P), P.blocks))
    bad = [P for P in valid if not P.refines(best)]
    if bad:
        raise AssertionError(f"{bad[0].blocks!r} does not refine {best.blocks!r}")
    return best


def minimal_mono_decomposition(S: FiniteStructure, cap: int = DEFAULT_CAP, verify: bool = True) -> Partition:
    """Coarsest monomorphic decomposition.

    Refinements of a valid decomposition stay valid, so ``x`` and ``y`` share
    a block of the coarsest one exactly when ``{x, y}`` plus singletons is
    valid.  With ``verify`` every partition of the universe is checked against
    the answer.
    """
    _cap(S, cap)
    n = S.size
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for x, y in combinations(range(n), 2):
        pair = Partition.of([[x, y], *([z] for z in range(n) if z not in (x, y))])
        if is_mono_decomposition(S, pair, cap):
            parent[find(y)] = find(x)
    groups: dict[int, list[int]] = {}
    for x in range(n):
        groups.setdefault(find(x), []).append(x)
    P = Partition.of(groups.values())
    if not is_mono_decomposition(S, P, cap):
        raise AssertionError(f"merged partition {P.blocks!r} is not a decomposition")
    if verify:
        for Q in set_partitions(n):
            if is_mono_decomposition(S, Q, cap) and not Q.refines(P):
                raise AssertionError(f"valid partition {Q.blocks!r} does not refine {P.blocks!r}")
    return P


# ---------------------------------------------------------------------------
# Chaining orders


def pattern(t: Sequence[int], pos: Mapping[int, int]) -> tuple[int, ...]:
    """Dense ranks of the entries of ``t`` under ``pos``; encodes order and equalities."""
    ranks = sorted({pos[x] for x in t})
    r = {p: i for i, p in enumerate(ranks)}
    return tuple(r[pos[x]] for x in t)


def pattern_table(S: FiniteStructure, order: LinearOrder) -> dict[tuple[str, tuple[int, ...]], bool] | None:
    """Membership as a function of pattern, or None when some pattern is split."""
    pos = order.position
    table: dict = {}
    for (name, arity), rel in zip(S.language.symbols, S.relations):
        for t in product(range(S.size), repeat=arity):
            key = (name, pattern(t, pos))
            member = t in rel
            if table.setdefault(key, member) != member:
                return None
    return table


def chains(S: FiniteStructure, order: LinearOrder) -> bool:
    return pattern_table(S, order) is not None


def chainability_order(S: FiniteStructure, cap: int = DEFAULT_CAP) -> LinearOrder | None:
    """First order (lexicographically on ``seq``) that chains ``S``."""
    _cap(S, cap)
    for seq in permutations(range(S.size)):
        o = LinearOrder(seq)
        if chains(S, o):
            return o
    return None


def _is_embedding(S: FiniteStructure, f: Sequence[int]) -> bool:
    if len(f) != S.size or len(set(f)) != len(f) or any(not 0 <= y < S.size for y in f):
        return False
    for (name, arity), rel in zip(S.language.symbols, S.relations):
        for t in product(range(S.size), repeat=arity):
            if (t in rel) != (tuple(f[x] for x in t) in rel):
                return False
    return True


def chain_pullback(S: FiniteStructure, order: LinearOrder, f: Sequence[int]) -> LinearOrder:
    """``a <_f b`` iff ``f(a)`` precedes ``f(b)``; checked to chain ``S`` with the same pattern table."""
    base = pattern_table(S, order)
    if base is None:
        raise NotChaining(f"{order.seq!r} does not chain the structure")
    if not _is_embedding(S, f):
        raise ValueError(f"{tuple(f)!r} is not a self-embedding")
    pos = order.position
    pulled = LinearOrder(tuple(sorted(range(S.size), key=lambda a: pos[f[a]])))
    if pattern_table(S, pulled) != base:
        raise AssertionError("pulled-back order does not chain with the same formulas")
    return pulled


@dataclass
class BlockMappingReport:
    partition: Partition
    embeddings_checked: int
    violations: list = field(default_factory=list)
    block_permutations: list = field(default_factory=list)
    caveat: str = (
        "finite structures: every self-embedding is an automorphism, "
        "so only automorphisms are enumerated"
    )

    @property
    def ok(self) -> bool:
        return not self.violations

    def to_json(self) -> dict:
        return {
            "partition": self.partition.as_lists(),
            "embeddings_checked": self.embeddings_checked,
            "violations": [list(v) for v in self.violations],
            "block_permutations": [list(p) for p in self.block_permutations],
            "ok": self.ok,
            "caveat": self.caveat,
        }


def check_block_mapping(S: FiniteStructure, P: Partition | None = None, cap: int = DEFAULT_CAP) -> BlockMappingReport:
    """Every self-embedding must send each block into one block, bijectively on blocks."""
    if P is None:
        P = minimal_mono_decomposition(S, cap)
    where = P.block_of()
    emb = self_embeddings(S)
    report = BlockMappingReport(P, len(emb))
    for f in emb:
        image_blocks = []
        for b in P.blocks:
            targets = {where[f[x]] for x in b}
            if len(targets) != 1:
                report.violations.append(f)
                break
            image_blocks.append(targets.pop())
        else:
            if sorted(image_blocks) != list(range(len(P.blocks))):
                report.violations.append(f)
            else:
                report.block_permutations.append(tuple(image_blocks))
    return report


def is_interval(order: LinearOrder, block: Iterable[int]) -> bool:
    pos = order.position
    ps = sorted(pos[x] for x in block)
    return bool(ps) and ps[-1] - ps[0] + 1 == len(ps)


def interval_order_construct(
    S: FiniteStructure, P: Partition, block_orders: Sequence[Sequence[int]]
) -> tuple[LinearOrder, list[list[int]]]:
    """Concatenate per-block orders in the given sequence of blocks.

    ``block_orders[i]`` lists the elements of one block in increasing order;
    each must chain the substructure induced on that block.
    """
    P.check_cover(S.size)
    if sorted(tuple(sorted(b)) for b in block_orders) != sorted(P.blocks):
        raise ValueError("block orders must list exactly the blocks of the partition")
    seq: list[int] = []
    intervals = []
    for b in block_orders:
        local = sorted(b)
        sub = induced(S, local)
        rank = {x: i for i, x in enumerate(local)}
        if not chains(sub, LinearOrder(tuple(rank[x] for x in b))):
            raise NotChaining(f"order {list(b)!r} does not chain its block")
        seq.extend(b)
        intervals.append(list(b))
    return LinearOrder(tuple(seq)), intervals


def find_local_iso_violation(
    S: FiniteStructure, order: LinearOrder, intervals: Sequence[Iterable[int]], cap: int = DEFAULT_CAP
) -> dict[int, int] | None:
    """A partial order-isomorphism preserving every interval that is not a partial isomorphism of ``S``."""
    _cap(S, cap)
    ivs = [frozenset(i) for i in intervals]
    member = [tuple(x in i for i in ivs) for x in range(S.size)]
    seq = order.seq
    for k in range(1, S.size + 1):
        for D in combinations(seq, k):
            for D2 in combinations(seq, k):
                if any(member[a] != member[b] for a, b in zip(D, D2)):
                    continue
                p = dict(zip(D, D2))
                for (_, arity), rel in zip(S.language.symbols, S.relations):
                    if any((t in rel) != (tuple(p[x] for x in t) in rel) for t in product(D, repeat=arity)):
                        return p
    return None


def local_iso_check(
    S: FiniteStructure, order: LinearOrder, intervals: Sequence[Iterable[int]], cap: int = DEFAULT_CAP
) -> bool:
    """False when the sets are not intervals of ``order``, or some interval-preserving local isomorphism breaks ``S``."""
    ivs = [list(i) for i in intervals]
    if not all(is_interval(order, i) for i in ivs):
        return False
    return find_local_iso_violation(S, order, ivs, cap) is None
