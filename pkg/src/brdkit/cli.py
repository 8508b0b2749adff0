"""Command line front end.  Every command prints one JSON report.

Exit status: 0 on success, 1 when the computation fails, 2 on bad usage.
"""
from __future__ import annotations

import argparse
import hashlib
import json
import sys
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Sequence

from filelock import FileLock

from . import __version__
from .branch_calculus import DEFAULT_SUBSET_BUDGET, EmbType, SigmaEmbedding, enumerate_types, tp, type_stabilization
from .chain_terms import (
    cnf_spectrum_finite,
    format_branch,
    format_term,
    hausdorff_rank,
    hausdorff_rank_bounds,
    parse_branch,
    parse_chain_term,
    parse_cnf,
    truncate,
)
from .errors import BrdError
from .monomorphic import (
    DEFAULT_CAP,
    LinearOrder,
    chain_pullback,
    chainability_order,
    check_block_mapping,
    load_structure,
    minimal_mono_decomposition,
)
from .piggyback import dump_witness, load_category, load_witness, transfer_degree_bound, verify_witness, witness_compose
from .pq_category import phi_decode, psi_encode
from .ramsey_harness import (
    DEFAULT_COLORING_BUDGET,
    ArrowQuery,
    coloring_to_json,
    find_counterexample,
    min_t,
    random_coloring_search,
)

__all__ = ["Config", "main", "cache_types", "CACHE_FORMAT"]

CACHE_FORMAT = 1


@dataclass(frozen=True)
class Config:
    structure_cap: int = DEFAULT_CAP
    subset_budget: int = DEFAULT_SUBSET_BUDGET
    coloring_budget: int = DEFAULT_COLORING_BUDGET
    cache: Path | None = None
    workers: int = 1
    seed: int = 0

    def __post_init__(self):
        if min(self.structure_cap, self.subset_budget, self.coloring_budget, self.workers) < 1:
            raise ValueError("caps, budgets and worker count must be positive")


# ---------------------------------------------------------------------------
# Type cache


def _cache_key(sigma_print: str, n: int) -> str:
    raw = f"{__version__}|{CACHE_FORMAT}|{n}|{sigma_print}"
    return hashlib.sha256(raw.encode()).hexdigest()


def cache_types(sigma, n: int, cache_dir: str | Path, budget: int = DEFAULT_SUBSET_BUDGET) -> tuple[list[EmbType], int, bool]:
    """Stabilized types of ``sigma`` for ``n``, stored under ``cache_dir``.

    Returns ``(types sorted by print, m*, cache_hit)``.  Unreadable or
    inconsistent cache files are recomputed and overwritten.
    """
    cache_dir = Path(cache_dir)
    cache_dir.mkdir(parents=True, exist_ok=True)
    canon = format_term(sigma)
    path = cache_dir / f"types-{_cache_key(canon, n)}.json"
    with FileLock(str(path) + ".lock"):
        if path.exists():
            try:
                data = json.loads(path.read_text())
                if data["term"] == canon and data["n"] == n and data["version"] == __version__:
                    types = [EmbType.from_sexpr(s) for s in data["types"]]
                    return types, int(data["m_star"]), True
            except (ValueError, KeyError, TypeError, BrdError):
                pass
        found, m_star = type_stabilization(sigma, n, budget)
        types = sorted(found, key=EmbType.to_sexpr)
        payload = {
            "version": __version__,
            "term": canon,
            "n": n,
            "m_star": m_star,
            "types": [t.to_sexpr() for t in types],
        }
        tmp = path.with_suffix(".tmp")
        tmp.write_text(json.dumps(payload, sort_keys=True))
        tmp.replace(path)
        return types, m_star, False


# ---------------------------------------------------------------------------
# Commands


def _digest(text: str) -> str:
    return hashlib.sha256(text.encode()).hexdigest()


def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise BrdError(f"cannot read {path}: {exc.strerror}") from None


def _ints(text: str) -> list[int]:
    return [int(x) for x in text.replace(" ", "").split(",") if x != ""]


def cmd_rank(args, cfg):
    t = parse_chain_term(args.term)
    lo, hi = hausdorff_rank_bounds(t)
    return {"term": format_term(t)}, {"rank": hausdorff_rank(t), "rank_bounds": [lo, hi]}


def cmd_truncate(args, cfg):
    t = parse_chain_term(args.term)
    approx = truncate(t, args.m)
    return {"term": format_term(t), "m": args.m}, {
        "size": len(approx.branches),
        "branches": [format_branch(b) for b in approx.branches],
    }


def cmd_types(args, cfg):
    t = parse_chain_term(args.term)
    inputs = {"term": format_term(t), "n": args.n}
    if args.m is not None:
        inputs["m"] = args.m
        types = sorted(enumerate_types(t, args.n, args.m, cfg.subset_budget), key=EmbType.to_sexpr)
        return inputs, {"count": len(types), "types": [x.to_sexpr() for x in types]}
    if cfg.cache is not None:
        types, m_star, hit = cache_types(t, args.n, cfg.cache, cfg.subset_budget)
        out = {"cache_hit": hit}
    else:
        found, m_star = type_stabilization(t, args.n, cfg.subset_budget)
        types, out = sorted(found, key=EmbType.to_sexpr), {}
    out.update({"count": len(types), "m_star": m_star, "types": [x.to_sexpr() for x in types]})
    return inputs, out


def cmd_spectrum(args, cfg):
    alpha = parse_cnf(args.ordinal)
    return {"ordinal": args.ordinal}, {"normal_form": str(alpha), "finite": cnf_spectrum_finite(alpha)}


def _structure(args):
    text = _read(args.structure)
    return load_structure(args.structure), {"structure": args.structure, "sha256": _digest(text)}


def cmd_decompose(args, cfg):
    S, inputs = _structure(args)
    P = minimal_mono_decomposition(S, cfg.structure_cap)
    rep = check_block_mapping(S, P, cfg.structure_cap)
    return inputs, {"blocks": P.as_lists(), "block_mapping": rep.to_json()}


def cmd_chainable(args, cfg):
    S, inputs = _structure(args)
    o = chainability_order(S, cfg.structure_cap)
    return inputs, {"chainable": o is not None, "order": None if o is None else list(o.seq)}


def cmd_pullback(args, cfg):
    S, inputs = _structure(args)
    order, f = _ints(args.order), _ints(args.map)
    inputs.update({"order": order, "map": f})
    pulled = chain_pullback(S, LinearOrder.of(order), f)
    return inputs, {"order": list(pulled.seq)}


def _query(args, t):
    return ArrowQuery(args.C, args.B, args.m, args.k, t, args.mode)


def cmd_arrow(args, cfg):
    q = _query(args, args.t)
    out = {}
    if args.random_trials:
        ce = random_coloring_search(q, args.random_trials, cfg.seed)
        out["random_trials"] = args.random_trials
        if ce is not None:
            out.update({"holds": False, "counterexample": coloring_to_json(q, ce)["coloring"], "found_by": "random"})
            return {"query": q.to_json()}, out
    stats = {}
    ce = find_counterexample(q, cfg.coloring_budget, stats)
    out.update({"holds": ce is None, "search_nodes": stats["nodes"], "found_by": "exhaustive"})
    out["counterexample"] = None if ce is None else coloring_to_json(q, ce)["coloring"]
    return {"query": q.to_json()}, out


def cmd_mint(args, cfg):
    bound = min_t(args.C, args.B, args.m, args.k, cfg.coloring_budget)
    return {"C": args.C, "B": args.B, "m": args.m, "k": args.k}, {"min_t": bound.to_json()}


def _witness_file(path: str):
    text = _read(path)
    data = json.loads(text)
    cats = {c["name"]: load_category(c) for c in data["categories"]}
    return load_witness(data["witness"], cats), data, _digest(text)


def cmd_witness_verify(args, cfg):
    w, _, digest = _witness_file(args.witness)
    out = {"verified": verify_witness(w)}
    if args.k:
        out["transfer_k"] = args.k
        out["transfer_holds"] = transfer_degree_bound(w, args.k)
    return {"witness": args.witness, "sha256": digest}, out


def cmd_witness_compose(args, cfg):
    w1, d1, h1 = _witness_file(args.first)
    w2, d2, h2 = _witness_file(args.second)
    w = witness_compose(w1, w2)
    cats = {c["name"]: c for c in d1["categories"] + d2["categories"]}
    return {"first": args.first, "second": args.second, "sha256": [h1, h2]}, {
        "verified": verify_witness(w),
        "witness": {"categories": [cats[w.source.name], cats[w.target.name]], "witness": dump_witness(w)},
    }


def cmd_pq_encode(args, cfg):
    sigma = parse_chain_term(args.term)
    bs = [parse_branch(b) for b in args.branches.split(";")]
    f = SigmaEmbedding.of(sigma, bs)
    tau = tp(f)
    code = psi_encode(sigma, tau, f)
    back = phi_decode(sigma, tau, code)
    return {"term": format_term(sigma), "branches": [format_branch(b) for b in f.branches]}, {
        "type": tau.to_sexpr(),
        "code": json.loads(code.to_json()),
        "round_trip": back == f,
    }


COMMANDS: dict[str, tuple[Callable, str]] = {
    "rank": (cmd_rank, "Hausdorff rank of a chain term"),
    "truncate": (cmd_truncate, "finite truncation of a chain term"),
    "types": (cmd_types, "embedding types of n-element subchains"),
    "spectrum": (cmd_spectrum, "finiteness of the big Ramsey spectrum of an ordinal"),
    "decompose": (cmd_decompose, "minimal monomorphic decomposition of a structure file"),
    "chainable": (cmd_chainable, "search for a chaining order"),
    "pullback": (cmd_pullback, "pull a chaining order back along a self-embedding"),
    "arrow": (cmd_arrow, "decide a finite partition arrow on chains"),
    "mint": (cmd_mint, "least t for which the finite arrow holds"),
    "witness-verify": (cmd_witness_verify, "check a reduction witness file"),
    "witness-compose": (cmd_witness_compose, "compose two reduction witnesses"),
    "pq-encode": (cmd_pq_encode, "encode an embedding of n into a term as a partial map into Q"),
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", help="write the report here instead of stdout")
    common.add_argument("--budget", type=int, help="search budget (subsets or colorings)")
    common.add_argument("--workers", type=int, default=1, help="accepted for scripting; runs single threaded")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--cache", help="directory for cached type sets")
    common.add_argument("--cap", type=int, default=DEFAULT_CAP, help="largest structure size")
    common.add_argument("--timing", action="store_true", help="include wall time (breaks byte-identical output)")

    parser = argparse.ArgumentParser(prog="brdkit", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"brdkit {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    p = {name: sub.add_parser(name, parents=[common], help=help_) for name, (_, help_) in COMMANDS.items()}

    p["rank"].add_argument("term")
    p["truncate"].add_argument("term")
    p["truncate"].add_argument("--m", type=int, required=True)
    p["types"].add_argument("term")
    p["types"].add_argument("--n", type=int, required=True)
    p["types"].add_argument("--m", type=int)
    p["spectrum"].add_argument("ordinal")
    for name in ("decompose", "chainable", "pullback"):
        p[name].add_argument("structure")
    p["pullback"].add_argument("--order", required=True, help="comma separated, increasing")
    p["pullback"].add_argument("--map", required=True, help="comma separated images of 0..n-1")
    for name in ("arrow", "mint"):
        for field_ in ("C", "B", "m", "k"):
            p[name].add_argument(field_, type=int)
    p["arrow"].add_argument("t", type=int)
    p["arrow"].add_argument("--mode", choices=["structural", "embedding"], default="structural")
    p["arrow"].add_argument("--random-trials", type=int, default=0)
    p["witness-verify"].add_argument("witness")
    p["witness-verify"].add_argument("--k", type=int, default=0, help="also check degree transfer for k colors")
    p["witness-compose"].add_argument("first")
    p["witness-compose"].add_argument("second")
    p["pq-encode"].add_argument("term")
    p["pq-encode"].add_argument("--branches", required=True, help="';' separated branches, letters joined by '.'")
    return parser


def _config(args) -> Config:
    budget = args.budget
    return Config(
        structure_cap=args.cap,
        subset_budget=budget or DEFAULT_SUBSET_BUDGET,
        coloring_budget=budget or DEFAULT_COLORING_BUDGET,
        cache=Path(args.cache) if args.cache else None,
        workers=args.workers,
        seed=args.seed,
    )


def run(argv: Sequence[str] | None = None) -> tuple[int, dict]:
    """Parse, dispatch and return ``(exit status, report)`` without printing."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        cfg = _config(args)
    except SystemExit as exc:
        return (exc.code if isinstance(exc.code, int) else 2), {}
    except ValueError as exc:
        return 2, {"error": str(exc)}
    handler = COMMANDS[args.command][0]
    report = {
        "command": args.command,
        "provenance": {"tool": "brdkit", "version": __version__, "seed": cfg.seed},
    }
    start = time.perf_counter()
    try:
        inputs, outputs = handler(args, cfg)
        report.update({"inputs": inputs, "outputs": outputs, "status": "ok"})
        code = 0
    except (BrdError, ValueError, KeyError, TypeError, AssertionError, json.JSONDecodeError) as exc:
        report.update({"status": "error", "error": f"{type(exc).__name__}: {exc}"})
        code = 1
    if args.timing:
        report["timing"] = {"wall_seconds": round(time.perf_counter() - start, 6)}
    report["_out"] = args.out
    return code, report


def render(report: dict) -> str:
    return json.dumps(report, sort_keys=True, indent=2) + "\n"


def main(argv: Sequence[str] | None = None) -> int:
    code, report = run(argv)
    if not report:
        return code
    out = report.pop("_out", None)
    if "command" not in report:
        print(report.get("error", "usage error"), file=sys.stderr)
        return code
    text = render(report)
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
