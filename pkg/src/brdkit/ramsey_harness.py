"""Exhaustive checks of finite partition arrows and related counting facts.

The domain of a coloring is the set of ``m``-subsets of an ``N``-chain.  For
chains, embeddings and copies coincide, so the structural and embedding modes
only differ in the label they carry.
"""
from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from itertools import combinations, permutations, product
from math import comb
from pathlib import Path
from typing import Callable, Hashable, Mapping, Sequence

from .errors import BudgetExceeded, ClassNotStable
from .monomorphic import FiniteStructure, induced, iso, isomorphisms

__all__ = [
    "DEFAULT_COLORING_BUDGET",
    "ArrowQuery",
    "DegreeBound",
    "is_counterexample",
    "find_counterexample",
    "holds_arrow",
    "min_t",
    "count_embeddings",
    "EmbStructReport",
    "emb_vs_struct_counts",
    "CompositionReport",
    "exhaustive_class_oracle",
    "sequential_composition",
    "random_coloring_search",
    "coloring_to_json",
    "coloring_from_json",
]

DEFAULT_COLORING_BUDGET = 5_000_000


@dataclass(frozen=True)
class ArrowQuery:
    """``N -> (B)^m_{k,t}`` on chains."""

    C_size: int
    B_size: int
    m: int
    k: int
    t: int
    mode: str = "structural"

    def __post_init__(self):
        if not 0 <= self.m <= self.B_size <= self.C_size:
            raise ValueError("need m <= B_size <= C_size")
        if self.k < 1 or self.t < 1:
            raise ValueError("k and t must be positive")
        if self.mode not in ("structural", "embedding"):
            raise ValueError(f"unknown mode {self.mode!r}")

    def domain(self) -> list[tuple[int, ...]]:
        return list(combinations(range(self.C_size), self.m))

    def to_json(self) -> dict:
        return {"C": self.C_size, "B": self.B_size, "m": self.m, "k": self.k, "t": self.t, "mode": self.mode}


@dataclass(frozen=True)
class DegreeBound:
    """A finite value, or the infinite flag (only ever set from the ordinal criterion)."""

    value: int | None
    infinite: bool = False

    def __post_init__(self):
        if self.infinite and self.value is not None:
            raise ValueError("an infinite bound carries no value")
        if not self.infinite and (self.value is None or self.value < 0):
            raise ValueError("finite bounds need a nonnegative value")

    @classmethod
    def finite(cls, value: int) -> "DegreeBound":
        return cls(value)

    @classmethod
    def INFINITE(cls) -> "DegreeBound":
        return cls(None, True)

    def to_json(self):
        return "infinite" if self.infinite else self.value

    def __str__(self) -> str:
        return "infinite" if self.infinite else str(self.value)


def _b_sets(q: ArrowQuery, index: Mapping[tuple, int]) -> list[tuple[int, list[int]]]:
    """Each ``B``-subset as (index of its last m-subset, indices of its m-subsets)."""
    out = []
    for b in combinations(range(q.C_size), q.B_size):
        members = [index[s] for s in combinations(b, q.m)]
        out.append((max(members), members))
    return out


def is_counterexample(q: ArrowQuery, coloring: Mapping[tuple, int]) -> bool:
    """Every ``B``-subchain sees more than ``t`` colors.  Exact check."""
    for b in combinations(range(q.C_size), q.B_size):
        if len({coloring[s] for s in combinations(b, q.m)}) <= q.t:
            return False
    return True


def find_counterexample(
    q: ArrowQuery, budget: int = DEFAULT_COLORING_BUDGET, stats: dict | None = None
) -> dict | None:
    """Depth-first search over colorings with colors introduced in order.

    A branch dies as soon as some fully colored ``B``-subset has at most ``t``
    colors.  Returns a violating coloring or None.  The number of search
    nodes is stored in ``stats["nodes"]`` when a dict is passed.
    """
    dom = q.domain()
    index = {s: i for i, s in enumerate(dom)}
    due: list[list[list[int]]] = [[] for _ in dom]
    for last, members in _b_sets(q, index):
        due[last].append(members)
    col = [0] * len(dom)
    nodes = 0

    def rec(i: int, used: int) -> bool:
        nonlocal nodes
        if i == len(dom):
            return True
        for c in range(min(used + 1, q.k)):
            nodes += 1
            if nodes > budget:
                raise BudgetExceeded(f"more than {budget} search nodes")
            col[i] = c
            if all(len({col[j] for j in members}) > q.t for members in due[i]):
                if rec(i + 1, max(used, c + 1)):
                    return True
        return False

    found = rec(0, 0)
    if stats is not None:
        stats["nodes"] = nodes
    return {s: col[i] for i, s in enumerate(dom)} if found else None


def holds_arrow(q: ArrowQuery, budget: int = DEFAULT_COLORING_BUDGET, stats: dict | None = None) -> bool:
    return find_counterexample(q, budget, stats) is None


def min_t(C_size: int, B_size: int, m: int, k: int, budget: int = DEFAULT_COLORING_BUDGET) -> DegreeBound:
    """Least ``t`` for which the arrow holds; never above ``min(k, C(B, m))``."""
    top = max(1, min(k, comb(B_size, m)))
    for t in range(1, top + 1):
        if holds_arrow(ArrowQuery(C_size, B_size, m, k, t), budget):
            return DegreeBound.finite(t)
    raise AssertionError("the arrow must hold once t reaches the number of colors")


# ---------------------------------------------------------------------------
# Embeddings versus copies


def count_embeddings(A: FiniteStructure, B: FiniteStructure) -> int:
    """Injections ``A -> B`` preserving every relation in both directions."""
    if A.language != B.language:
        raise ValueError("structures speak different languages")
    total = 0
    for f in permutations(range(B.size), A.size):
        ok = True
        for (_, arity), ra, rb in zip(A.language.symbols, A.relations, B.relations):
            if any((t in ra) != (tuple(f[x] for x in t) in rb) for t in product(range(A.size), repeat=arity)):
                ok = False
                break
        total += ok
    return total


@dataclass
class EmbStructReport:
    embeddings: int
    automorphisms: int
    copies: int

    @property
    def holds(self) -> bool:
        return self.embeddings == self.automorphisms * self.copies

    def to_json(self) -> dict:
        return {"embeddings": self.embeddings, "automorphisms": self.automorphisms, "copies": self.copies, "holds": self.holds}


def emb_vs_struct_counts(A: FiniteStructure, B: FiniteStructure) -> EmbStructReport:
    """Count ``Emb(A, B)``, ``Aut(A)`` and the copies of ``A`` in ``B`` independently."""
    emb = count_embeddings(A, B)
    aut = sum(1 for _ in isomorphisms(A, A))
    copies = sum(1 for sub in combinations(range(B.size), A.size) if iso(A, induced(B, sub)) is not None)
    report = EmbStructReport(emb, aut, copies)
    if not report.holds:
        raise AssertionError(f"{emb} != {aut} * {copies}")
    return report


# ---------------------------------------------------------------------------
# Restricting one class at a time


@dataclass
class CompositionReport:
    universe: tuple
    bound: DegreeBound
    per_class: dict
    limits: dict
    steps: list = field(default_factory=list)

    @property
    def within_limits(self) -> bool:
        return all(self.per_class[c] <= self.limits[c] for c in self.limits) and self.bound.value <= sum(
            self.limits.values()
        )

    def to_json(self) -> dict:
        return {
            "universe": list(self.universe),
            "bound": self.bound.to_json(),
            "per_class": {str(c): v for c, v in self.per_class.items()},
            "limits": {str(c): v for c, v in self.limits.items()},
            "steps": [list(s) for s in self.steps],
            "within_limits": self.within_limits,
        }


Classify = Callable[[tuple, tuple], Hashable]


def _check_stable(universe: tuple, sub: tuple, m: int, classify: Classify, origin: tuple) -> None:
    for s in combinations(sub, m):
        before, after = classify(s, origin), classify(s, sub)
        if before != after:
            raise ClassNotStable(f"{s!r} moved from class {before!r} to {after!r}")


def sequential_composition(
    universe: Sequence,
    m: int,
    coloring: Callable[[tuple], Hashable],
    classify: Classify,
    oracles: Sequence[tuple[Hashable, int, Callable[[tuple], Sequence]]],
) -> CompositionReport:
    """Shrink the universe class by class, then recount.

    ``classify(s, U)`` names the class of the ``m``-subset ``s`` inside the
    current universe ``U``.  ``oracles`` holds ``(label, N, restrict)``;
    ``restrict(U)`` returns a sub-universe on which class ``label`` shows at
    most ``N`` colors.  Classes must not change under restriction.
    """
    origin = tuple(sorted(universe))
    current = origin
    limits = {}
    steps = []
    for label, n_j, restrict in oracles:
        sub = tuple(sorted(restrict(current)))
        if not set(sub) <= set(current):
            raise ValueError(f"oracle for {label!r} left the current universe")
        _check_stable(current, sub, m, classify, origin)
        seen = {coloring(s) for s in combinations(sub, m) if classify(s, sub) == label}
        if len(seen) > n_j:
            raise AssertionError(f"oracle for {label!r} promised {n_j} colors, got {len(seen)}")
        limits[label] = n_j
        steps.append(sub)
        current = sub
    per_class: dict = {label: set() for label in limits}
    everything = set()
    for s in combinations(current, m):
        c = coloring(s)
        everything.add(c)
        label = classify(s, current)
        if label not in per_class:
            raise ClassNotStable(f"{s!r} falls in class {label!r}, which no oracle handled")
        per_class[label].add(c)
    report = CompositionReport(
        current, DegreeBound.finite(len(everything)), {c: len(v) for c, v in per_class.items()}, limits, steps
    )
    if not report.within_limits:
        raise AssertionError("final recount exceeds the promised bounds")
    return report


def exhaustive_class_oracle(
    m: int,
    coloring: Callable[[tuple], Hashable],
    classify: Classify,
    label: Hashable,
    n_colors: int,
    accept: Callable[[tuple], bool] = lambda U: True,
) -> Callable[[tuple], tuple]:
    """Restriction that searches every sub-universe for the largest acceptable one.

    A candidate is acceptable when ``accept`` passes and class ``label``
    carries at most ``n_colors`` colors on it.  Ties go to the
    lexicographically least candidate.
    """

    def restrict(U: tuple) -> tuple:
        for size in range(len(U), -1, -1):
            for sub in combinations(U, size):
                if not accept(sub):
                    continue
                seen = set()
                for s in combinations(sub, m):
                    if classify(s, sub) == label:
                        seen.add(coloring(s))
                        if len(seen) > n_colors:
                            break
                if len(seen) <= n_colors:
                    return sub
        raise AssertionError(f"no acceptable sub-universe for class {label!r}")

    return restrict


# ---------------------------------------------------------------------------
# Random falsification


def random_coloring_search(q: ArrowQuery, trials: int, seed: int = 0) -> dict | None:
    """Uniform random colorings; the first violating one is returned after an exact recheck."""
    rng = random.Random(seed)
    dom = q.domain()
    for _ in range(trials):
        coloring = {s: rng.randrange(q.k) for s in dom}
        if is_counterexample(q, coloring):
            return coloring
    return None


def coloring_to_json(q: ArrowQuery, coloring: Mapping[tuple, int]) -> dict:
    return {"query": q.to_json(), "coloring": [[list(s), c] for s, c in sorted(coloring.items())]}


def coloring_from_json(data: dict | str | Path) -> tuple[ArrowQuery, dict]:
    if isinstance(data, (str, Path)):
        data = json.loads(Path(data).read_text())
    d = data["query"]
    q = ArrowQuery(d["C"], d["B"], d["m"], d["k"], d["t"], d.get("mode", "structural"))
    return q, {tuple(s): c for s, c in data["coloring"]}
