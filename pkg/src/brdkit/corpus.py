"""Shipped fixtures: toy categories, witnesses and small structures.

``python3 -m brdkit.corpus`` regenerates the JSON files under ``data/``.
"""
from __future__ import annotations

import json
from importlib import resources
from itertools import product
from pathlib import Path

from .monomorphic import FiniteStructure, RelationalLanguage, chain, graph, load_structure
from .piggyback import (
    FiniteCategory,
    dump_category,
    dump_witness,
    function_category,
    load_category,
    load_witness,
    pq_fragment,
    product_category,
    witness_from_injection,
)

__all__ = [
    "toy_categories",
    "toy_structures",
    "oplus_witness",
    "chain_shift_witness",
    "load_categories",
    "load_structures",
    "data_dir",
    "write_all",
]


def data_dir() -> Path:
    return Path(str(resources.files("brdkit") / "data"))


def toy_categories() -> dict[str, FiniteCategory]:
    cats = [
        function_category("chains_emb", {1: 1, 2: 2, 3: 3}, "embedding"),
        function_category("chains_mono", {1: 1, 2: 2, 3: 3}, "monotone"),
        function_category("sets_inj", {1: 1, 2: 2, 3: 3}, "injection"),
        function_category("sets_all", {1: 1, 2: 2}, "all"),
        pq_fragment("pq_d3", [1, 2], 3),
        pq_fragment("pq1_d2", [1], 2),
        pq_fragment("pq2_d2", [2], 2),
    ]
    return {c.name: c for c in cats}


def oplus_witness(cats: dict[str, FiniteCategory] | None = None):
    """Concatenation of two partial maps ``1 -> D`` into one ``2 -> D``."""
    cats = cats or toy_categories()
    P1, P2 = cats["pq1_d2"], cats["pq2_d2"]
    S = product_category([P1, P1], "pq1_d2^2")
    psi = {f: (2, "Q", f[0][2] + f[1][2]) for f in S.homset((1, 1), ("Q", "Q"))}
    return witness_from_injection(S, (1, 1), ("Q", "Q"), P2, 2, "Q", psi)


def chain_shift_witness(cats: dict[str, FiniteCategory] | None = None, a: int = 1, x: int = 2, b: int = 1, y: int = 3):
    """``(a, x) < (b, y)`` among chains with embeddings, by post-composing with the inclusion ``x -> y``."""
    cats = cats or toy_categories()
    C = cats["chains_emb"]
    incl = (x, y, tuple(range(x)))
    psi = {f: C.comp(incl, f) for f in C.homset(a, x)}
    return witness_from_injection(C, a, x, C, b, y, psi)


def toy_structures() -> dict[str, FiniteStructure]:
    L_marked = RelationalLanguage.of(("E", 2), ("U", 1))
    L_ternary = RelationalLanguage.of(("R", 3),)
    return {
        "path3": graph(3, [(0, 1), (1, 2)]),
        "k3": graph(3, [(0, 1), (1, 2), (0, 2)]),
        "marked3": FiniteStructure.build(L_marked, 3, {"U": [(0,)]}),
        "chain4": chain(4),
        "edge_plus_point": graph(3, [(0, 1)]),
        "empty4": graph(4, []),
        "k4": graph(4, [(i, j) for i in range(4) for j in range(i + 1, 4)]),
        "c4": graph(4, [(0, 1), (1, 2), (2, 3), (3, 0)]),
        "star4": graph(4, [(0, 1), (0, 2), (0, 3)]),
        "path4": graph(4, [(0, 1), (1, 2), (2, 3)]),
        "c5": graph(5, [(i, (i + 1) % 5) for i in range(5)]),
        "k2_plus_k2": graph(4, [(0, 1), (2, 3)]),
        "k3_plus_point": graph(4, [(0, 1), (1, 2), (0, 2)]),
        "dicycle3": FiniteStructure.build(RelationalLanguage.of(("E", 2)), 3, {"E": [(0, 1), (1, 2), (2, 0)]}),
        "betweenness4": FiniteStructure.build(
            L_ternary, 4, {"R": [t for t in product(range(4), repeat=3) if t[0] < t[1] < t[2] or t[2] < t[1] < t[0]]}
        ),
        "k33": graph(6, [(i, j) for i in range(3) for j in range(3, 6)]),
    }


def load_categories() -> dict[str, FiniteCategory]:
    out = {}
    for p in sorted((data_dir() / "categories").glob("*.json")):
        c = load_category(p)
        out[c.name] = c
    return out


def load_structures() -> dict[str, FiniteStructure]:
    return {p.stem: load_structure(p) for p in sorted((data_dir() / "structures").glob("*.json"))}


def _dump(path: Path, data, compact: bool = True) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    text = json.dumps(data, sort_keys=True, separators=(",", ":")) if compact else json.dumps(data, sort_keys=True, indent=1)
    path.write_text(text + "\n")


def write_all(root: Path | None = None) -> None:
    root = root or data_dir()
    cats = toy_categories()
    for name, c in cats.items():
        _dump(root / "categories" / f"{name}.json", dump_category(c))
    for name, s in toy_structures().items():
        _dump(root / "structures" / f"{name}.json", s.to_json(), compact=False)
    w = oplus_witness(cats)
    _dump(
        root / "witnesses" / "pq_oplus.json",
        {"categories": [dump_category(w.source), dump_category(w.target)], "witness": dump_witness(w)},
    )
    for name, (a, x, b, y) in {"emb_1_2_to_1_3": (1, 2, 1, 3), "emb_1_1_to_1_2": (1, 1, 1, 2)}.items():
        w = chain_shift_witness(cats, a, x, b, y)
        _dump(
            root / "witnesses" / f"{name}.json",
            {"categories": [dump_category(w.source)], "witness": dump_witness(w)},
        )


def load_witness_file(path: str | Path):
    data = json.loads(Path(path).read_text())
    cats = {c["name"]: load_category(c) for c in data["categories"]}
    return load_witness(data["witness"], cats)


if __name__ == "__main__":
    write_all()
