"""Witnessed reductions ``(A, X) < (B, Y)`` between finite categories.

Categories here are finite snapshots: every homset is listed and the full
composition table is stored.  A :class:`Witness` names its two categories,
the four objects, the set ``M`` of target morphisms and the table ``phi``.
All checks are exhaustive.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from itertools import combinations, combinations_with_replacement, product
from pathlib import Path
from typing import Callable, Hashable, Iterable, Mapping, Sequence

from .errors import CategoryError, PremiseFails

__all__ = [
    "FiniteCategory",
    "function_category",
    "pq_fragment",
    "product_category",
    "Witness",
    "verify_witness",
    "find_g",
    "identity_witness",
    "witness_from_injection",
    "witness_compose",
    "witness_transport",
    "witness_product",
    "finite_degree",
    "transfer_degree_bound",
    "load_category",
    "dump_category",
    "load_witness",
    "dump_witness",
]

Morphism = Hashable


@dataclass
class FiniteCategory:
    """Objects, homsets ``hom[(a, b)]``, identities and the composition table.

    ``compose[(g, f)]`` is ``g . f`` for ``f : a -> b`` and ``g : b -> c``.
    Associativity and the identity laws are checked on construction unless
    ``check`` is false (used for products, whose laws follow from the factors).
    """

    name: str
    objects: tuple
    hom: dict
    identity: dict
    compose: dict
    check: bool = True
    _dom: dict = field(init=False, repr=False)
    _cod: dict = field(init=False, repr=False)

    def __post_init__(self):
        self.objects = tuple(self.objects)
        self._dom, self._cod = {}, {}
        for a in self.objects:
            for b in self.objects:
                self.hom[(a, b)] = tuple(self.hom.get((a, b), ()))
                for f in self.hom[(a, b)]:
                    if f in self._dom:
                        raise CategoryError(f"morphism {f!r} appears in two homsets")
                    self._dom[f], self._cod[f] = a, b
        if self.check:
            self.check_laws()

    def dom(self, f) -> Hashable:
        return self._dom[f]

    def cod(self, f) -> Hashable:
        return self._cod[f]

    def homset(self, a, b) -> tuple:
        return self.hom[(a, b)]

    def comp(self, g, f):
        try:
            return self.compose[(g, f)]
        except KeyError:
            raise CategoryError(f"{g!r} . {f!r} is not defined") from None

    def comp_set(self, g, fs: Iterable) -> set:
        return {self.comp(g, f) for f in fs}

    def check_laws(self) -> None:
        for a in self.objects:
            i = self.identity.get(a)
            if i is None or i not in self.hom[(a, a)]:
                raise CategoryError(f"object {a!r} has no identity in hom({a!r}, {a!r})")
        for (g, f), gf in self.compose.items():
            if self._cod.get(f) != self._dom.get(g):
                raise CategoryError(f"composition entry {g!r} . {f!r} is not composable")
            if self._dom.get(gf) != self._dom[f] or self._cod.get(gf) != self._cod[g]:
                raise CategoryError(f"{g!r} . {f!r} lands in the wrong homset")
        for f, a in self._dom.items():
            b = self._cod[f]
            if self.comp(self.identity[b], f) != f or self.comp(f, self.identity[a]) != f:
                raise CategoryError(f"identity law fails at {f!r}")
        for a, b, c, d in product(self.objects, repeat=4):
            for f in self.hom[(a, b)]:
                for g in self.hom[(b, c)]:
                    gf = self.comp(g, f)
                    for h in self.hom[(c, d)]:
                        if self.comp(h, gf) != self.comp(self.comp(h, g), f):
                            raise CategoryError(f"associativity fails at {h!r}, {g!r}, {f!r}")

    def __repr__(self) -> str:
        return f"FiniteCategory({self.name!r}, objects={list(self.objects)!r})"


# ---------------------------------------------------------------------------
# Builders


_KINDS: dict[str, Callable[[tuple, int], bool]] = {
    "embedding": lambda m, k: all(a < b for a, b in zip(m, m[1:])),
    "monotone": lambda m, k: all(a <= b for a, b in zip(m, m[1:])),
    "injection": lambda m, k: len(set(m)) == len(m),
    "all": lambda m, k: True,
}


def _maps(n: int, k: int, kind: str) -> list[tuple[int, ...]]:
    if kind == "embedding":
        return list(combinations(range(k), n))
    if kind == "monotone":
        return list(combinations_with_replacement(range(k), n))
    return [m for m in product(range(k), repeat=n) if _KINDS[kind](m, k)]


def function_category(name: str, objects: Mapping[Hashable, int], kind: str = "embedding") -> FiniteCategory:
    """Finite chains ``{0..size-1}`` with maps of the given kind between them.

    ``kind`` is one of ``embedding`` (strictly increasing), ``monotone``,
    ``injection`` or ``all``.  Morphisms are ``(dom, cod, values)`` triples.
    """
    if kind not in _KINDS:
        raise ValueError(f"unknown map kind {kind!r}")
    hom, identity = {}, {}
    for a, na in objects.items():
        for b, nb in objects.items():
            hom[(a, b)] = [(a, b, m) for m in _maps(na, nb, kind)]
        identity[a] = (a, a, tuple(range(na)))
        if identity[a] not in hom[(a, a)]:
            raise CategoryError(f"{kind} maps on {a!r} do not include the identity")
    compose = {}
    for (b, c), gs in hom.items():
        for g in gs:
            for a in objects:
                for f in hom[(a, b)]:
                    compose[(g, f)] = (a, c, tuple(g[2][x] for x in f[2]))
    return FiniteCategory(name, tuple(objects), hom, identity, compose)


def pq_fragment(name: str, ns: Sequence[int], q_size: int, q_kind: str = "monotone") -> FiniteCategory:
    """Finite shadow of the category of partial maps into Q.

    Objects are the finite chains ``n`` in ``ns`` (identity only) and ``"Q"``,
    played by a ``q_size``-element chain whose endomorphisms are the maps of
    ``q_kind``.  ``hom(n, Q)`` holds every partial map, encoded as a tuple
    with ``None`` at undefined points.
    """
    objects = [*ns, "Q"]
    hom: dict = {(a, b): [] for a in objects for b in objects}
    identity = {}
    for n in ns:
        identity[n] = (n, n, "id")
        hom[(n, n)] = [identity[n]]
        hom[(n, "Q")] = [(n, "Q", m) for m in product([None, *range(q_size)], repeat=n)]
    hom[("Q", "Q")] = [("Q", "Q", m) for m in _maps(q_size, q_size, q_kind)]
    identity["Q"] = ("Q", "Q", tuple(range(q_size)))
    if identity["Q"] not in hom[("Q", "Q")]:
        raise CategoryError("endomorphisms of Q must include the identity")
    compose = {}
    for n in ns:
        i = identity[n]
        compose[(i, i)] = i
        for f in hom[(n, "Q")]:
            compose[(f, i)] = f
            for h in hom[("Q", "Q")]:
                compose[(h, f)] = (n, "Q", tuple(None if x is None else h[2][x] for x in f[2]))
    for h in hom[("Q", "Q")]:
        for h2 in hom[("Q", "Q")]:
            compose[(h2, h)] = ("Q", "Q", tuple(h2[2][x] for x in h[2]))
    return FiniteCategory(name, tuple(objects), hom, identity, compose)


def product_category(cats: Sequence[FiniteCategory], name: str | None = None) -> FiniteCategory:
    """Objects and morphisms are tuples; composition is componentwise."""
    objects = tuple(product(*(c.objects for c in cats)))
    hom, identity, compose = {}, {}, {}
    for a in objects:
        identity[a] = tuple(c.identity[x] for c, x in zip(cats, a))
        for b in objects:
            hom[(a, b)] = list(product(*(c.hom[(x, y)] for c, x, y in zip(cats, a, b))))
    for (b, c_), gs in hom.items():
        for g in gs:
            for a in objects:
                for f in hom[(a, b)]:
                    compose[(g, f)] = tuple(cat.comp(gi, fi) for cat, gi, fi in zip(cats, g, f))
    return FiniteCategory(name or " x ".join(c.name for c in cats), objects, hom, identity, compose, check=False)


# ---------------------------------------------------------------------------
# Witnesses


@dataclass
class Witness:
    """``M`` is a subset of ``hom(B, Y)`` in ``target``; ``phi`` maps it into ``hom(A, X)`` in ``source``."""

    source: FiniteCategory
    A: Hashable
    X: Hashable
    target: FiniteCategory
    B: Hashable
    Y: Hashable
    M: frozenset
    phi: dict

    def __post_init__(self):
        self.M = frozenset(self.M)
        hom_by = set(self.target.homset(self.B, self.Y))
        if not self.M <= hom_by:
            raise CategoryError("M is not contained in hom(B, Y)")
        if set(self.phi) != set(self.M):
            raise CategoryError("phi must be defined exactly on M")
        hom_ax = set(self.source.homset(self.A, self.X))
        bad = [f for f in self.phi.values() if f not in hom_ax]
        if bad:
            raise CategoryError(f"phi takes values outside hom(A, X): {bad[0]!r}")


def find_g(w: Witness, h) -> Hashable | None:
    """A ``g`` in ``hom(X, X)`` with ``g . hom(A, X)`` inside ``phi(M & h . hom(B, Y))``, or None."""
    src, tgt = w.source, w.target
    reach = {w.phi[f] for f in tgt.comp_set(h, tgt.homset(w.B, w.Y)) if f in w.M}
    hom_ax = src.homset(w.A, w.X)
    for g in src.homset(w.X, w.X):
        if src.comp_set(g, hom_ax) <= reach:
            return g
    return None


def verify_witness(w: Witness) -> bool:
    """Exhaustive: every ``h`` in ``hom(Y, Y)`` admits a matching ``g``."""
    return all(find_g(w, h) is not None for h in w.target.homset(w.Y, w.Y))


def identity_witness(cat: FiniteCategory, A, X) -> Witness:
    hom = cat.homset(A, X)
    return Witness(cat, A, X, cat, A, X, frozenset(hom), {f: f for f in hom})


def witness_from_injection(
    source: FiniteCategory, A, X, target: FiniteCategory, B, Y, psi: Mapping
) -> Witness:
    """Witness with ``M = im(psi)`` and ``phi = psi^{-1}``.

    ``psi`` must be an injective map ``hom(A, X) -> hom(B, Y)`` such that for
    every ``h`` some ``g`` has ``psi(g . hom(A, X))`` inside ``h . hom(B, Y)``.
    """
    hom_ax = source.homset(A, X)
    if set(psi) != set(hom_ax):
        raise CategoryError("psi must be defined on all of hom(A, X)")
    if len(set(psi.values())) != len(psi):
        raise CategoryError("psi is not injective")
    hom_by = target.homset(B, Y)
    for h in target.homset(Y, Y):
        image = target.comp_set(h, hom_by)
        ok = any(
            all(psi[f] in image for f in source.comp_set(g, hom_ax))
            for g in source.homset(X, X)
        )
        if not ok:
            raise PremiseFails(f"no g works for h = {h!r}", h)
    return Witness(source, A, X, target, B, Y, frozenset(psi.values()), {v: k for k, v in psi.items()})


def witness_compose(w1: Witness, w2: Witness) -> Witness:
    """From ``(A, X) < (B, Y)`` and ``(B, Y) < (C, Z)``: ``M = phi2^{-1}(M1)``, ``phi = phi1 . phi2``."""
    if w1.target is not w2.source and w1.target.name != w2.source.name:
        raise CategoryError("middle categories differ")
    if (w1.B, w1.Y) != (w2.A, w2.X):
        raise CategoryError(f"middle pair mismatch: {(w1.B, w1.Y)!r} vs {(w2.A, w2.X)!r}")
    M = frozenset(f for f in w2.M if w2.phi[f] in w1.M)
    return Witness(w1.source, w1.A, w1.X, w2.target, w2.B, w2.Y, M, {f: w1.phi[w2.phi[f]] for f in M})


def witness_transport(w: Witness, X2, p=None, q=None) -> Witness:
    """Move the source object to a hom-equivalent ``X2``: ``phi'(f) = p . phi(f)``.

    ``p : X -> X2`` and ``q : X2 -> X`` default to the first morphisms of
    their homsets; an empty homset raises.
    """
    src = w.source
    if p is None:
        ps = src.homset(w.X, X2)
        if not ps:
            raise CategoryError(f"hom({w.X!r}, {X2!r}) is empty")
        p = ps[0]
    if q is None:
        qs = src.homset(X2, w.X)
        if not qs:
            raise CategoryError(f"hom({X2!r}, {w.X!r}) is empty")
        q = qs[0]
    if (src.dom(p), src.cod(p)) != (w.X, X2) or (src.dom(q), src.cod(q)) != (X2, w.X):
        raise CategoryError("p and q must run X -> X2 and X2 -> X")
    return Witness(src, w.A, X2, w.target, w.B, w.Y, w.M, {f: src.comp(p, v) for f, v in w.phi.items()})


def witness_product(ws: Sequence[Witness]) -> Witness:
    """``M* = M_1 x ... x M_n`` with ``phi*`` applied componentwise."""
    if not ws:
        raise ValueError("need at least one witness")
    src = product_category([w.source for w in ws])
    tgt = product_category([w.target for w in ws])
    M = frozenset(product(*(sorted(w.M, key=repr) for w in ws)))
    phi = {fs: tuple(w.phi[f] for w, f in zip(ws, fs)) for fs in M}
    return Witness(
        src,
        tuple(w.A for w in ws),
        tuple(w.X for w in ws),
        tgt,
        tuple(w.B for w in ws),
        tuple(w.Y for w in ws),
        M,
        phi,
    )


# ---------------------------------------------------------------------------
# Degrees


def _colorings(items: Sequence, k: int):
    """All colorings up to renaming of colors: new colors appear in order."""
    n = len(items)

    def rec(i, used, acc):
        if i == n:
            yield dict(zip(items, acc))
            return
        for c in range(min(used + 1, k)):
            acc.append(c)
            yield from rec(i + 1, max(used, c + 1), acc)
            acc.pop()

    yield from rec(0, 0, [])


def _best(cat: FiniteCategory, A, X, chi: Mapping) -> tuple[int, Hashable]:
    """``min_g |chi(g . hom(A, X))|`` and a minimizing ``g``."""
    hom = cat.homset(A, X)
    best = None
    for g in cat.homset(X, X):
        c = len({chi[f] for f in cat.comp_set(g, hom)})
        if best is None or c < best[0]:
            best = (c, g)
    return best


def finite_degree(cat: FiniteCategory, A, X, k: int) -> int:
    """Least ``t`` such that every ``k``-coloring of ``hom(A, X)`` drops to ``t`` colors on some ``g . hom(A, X)``."""
    hom = cat.homset(A, X)
    if not hom:
        return 0
    return max(_best(cat, A, X, chi)[0] for chi in _colorings(hom, k))


def transfer_degree_bound(w: Witness, k: int) -> bool:
    """Exhaustively confirm that colorings of ``hom(A, X)`` reduce as well as their pullbacks.

    For each ``k``-coloring ``chi`` of ``hom(A, X)`` put ``gamma = chi . phi`` on
    ``M`` and ``0`` elsewhere, let ``t`` be the best color count ``gamma``
    reaches on some ``h . hom(B, Y)``, and require a ``g`` with
    ``|chi(g . hom(A, X))| <= t``.
    """
    src, tgt = w.source, w.target
    hom_ax = src.homset(w.A, w.X)
    hom_by = tgt.homset(w.B, w.Y)
    if not hom_ax:
        return True
    for chi in _colorings(hom_ax, k):
        gamma = {f: (chi[w.phi[f]] if f in w.M else 0) for f in hom_by}
        t = min(len({gamma[f] for f in tgt.comp_set(h, hom_by)}) for h in tgt.homset(w.Y, w.Y))
        if _best(src, w.A, w.X, chi)[0] > t:
            return False
    return True


# ---------------------------------------------------------------------------
# JSON


def _tuplify(v):
    if isinstance(v, list):
        return tuple(_tuplify(x) for x in v)
    return v


def dump_category(cat: FiniteCategory) -> dict:
    """Morphisms and objects are written as JSON values (tuples become lists)."""
    morphisms = []
    for (a, b), fs in cat.hom.items():
        for f in fs:
            morphisms.append({"id": f, "dom": a, "cod": b})
    return {
        "name": cat.name,
        "objects": list(cat.objects),
        "identities": [[a, cat.identity[a]] for a in cat.objects],
        "morphisms": morphisms,
        "composition": [[g, f, gf] for (g, f), gf in cat.compose.items()],
    }


def load_category(data: dict | str | Path) -> FiniteCategory:
    if isinstance(data, (str, Path)):
        data = json.loads(Path(data).read_text())
    objects = [_tuplify(o) for o in data["objects"]]
    hom: dict = {(a, b): [] for a in objects for b in objects}
    for m in data["morphisms"]:
        hom[(_tuplify(m["dom"]), _tuplify(m["cod"]))].append(_tuplify(m["id"]))
    identity = {_tuplify(a): _tuplify(i) for a, i in data["identities"]}
    compose = {(_tuplify(g), _tuplify(f)): _tuplify(gf) for g, f, gf in data["composition"]}
    return FiniteCategory(data["name"], tuple(objects), hom, identity, compose)


def dump_witness(w: Witness) -> dict:
    """``M`` as indices into ``hom(B, Y)``, ``phi`` as index pairs into ``hom(A, X)``."""
    hom_by = list(w.target.homset(w.B, w.Y))
    hom_ax = list(w.source.homset(w.A, w.X))
    M = sorted(hom_by.index(f) for f in w.M)
    return {
        "source": w.source.name,
        "A": w.A,
        "X": w.X,
        "target": w.target.name,
        "B": w.B,
        "Y": w.Y,
        "M": M,
        "phi": [[i, hom_ax.index(w.phi[hom_by[i]])] for i in M],
    }


def load_witness(data: dict, categories: Mapping[str, FiniteCategory]) -> Witness:
    src = categories[data["source"]]
    tgt = categories[data["target"]]
    A, X, B, Y = (_tuplify(data[k]) for k in ("A", "X", "B", "Y"))
    hom_by = tgt.homset(B, Y)
    src_hom = src.homset(A, X)
    M = frozenset(hom_by[i] for i in data["M"])
    phi = {hom_by[i]: src_hom[j] for i, j in data["phi"]}
    return Witness(src, A, X, tgt, B, Y, M, phi)
