"""The twelve acceptance checks, each timed against its limit."""
import json
import os
import random
import subprocess
import sys
from itertools import combinations, product

from brdkit.branch_calculus import IndexSet, SigmaEmbedding, g_hat, tp, type_stabilization
from brdkit.chain_terms import cnf_spectrum_finite, hausdorff_rank, parse_chain_term, truncate
from brdkit.corpus import chain_shift_witness, data_dir, toy_categories, toy_structures
from brdkit.errors import NotInM
from brdkit.monomorphic import (
    check_block_mapping,
    coarsest_partition_exhaustive,
    graph,
    chain,
    minimal_mono_decomposition,
    set_partitions,
    is_mono_decomposition,
)
from brdkit.piggyback import (
    Witness,
    identity_witness,
    transfer_degree_bound,
    verify_witness,
    witness_compose,
    witness_product,
)
from brdkit.pq_category import PartialMapQ, phi_decode, psi_encode, xi
from brdkit.ramsey_harness import ArrowQuery, emb_vs_struct_counts, holds_arrow, min_t
from oracles import (
    CNF_BELOW,
    CNF_FLAG,
    CNF_VARIANTS,
    TERM_CORPUS,
    cnf_expected,
    coarsest_brute,
    has_mono_triangle,
    pentagon_coloring,
    random_digraph,
    signature_set,
    triple_signature_set,
    witness_pool,
)
from scenarios import random_pair_coloring, run_pipeline


def test_criterion_01_spectrum(criterion):
    with criterion(1, "ordinal spectrum criterion on 20 CNF inputs", 1.0):
        suite = CNF_BELOW + [CNF_FLAG] + CNF_VARIANTS
        assert len(suite) == 20
        assert all(cnf_expected(a) for a in CNF_BELOW) and not cnf_expected(CNF_FLAG)
        wrong = [a for a in suite if cnf_spectrum_finite(a) != cnf_expected(a)]
        assert not wrong, wrong


# Derivations.  A chain has rank <= r+1 when it is a sum, indexed by Z, of
# chains of rank <= r; rank 0 means finite.
#   1         finite                                                   -> 0
#   w         sum over n in Z of {n} for n >= 0 and empty otherwise   -> 1
#   w.w       sum over n >= 0 of copies of w, each of rank 1.  Not a
#             Z-sum of finite chains: the interval [0, w) is infinite
#             yet bounded on both sides                                -> 2
#   w* + w    is Z itself, the Z-sum of single points                  -> 1
#   (w+1).w   w copies of w+1 glue into a chain isomorphic to w.w      -> 2
RANKS = {"1": 0, "(w 1)": 1, "(w (w 1))": 2, "(+ (w* 1) (w 1))": 1, "(w (+ (w 1) 1))": 2}


def test_criterion_02_ranks(criterion):
    with criterion(2, "Hausdorff ranks of five reference chains", 1.0):
        for text, r in RANKS.items():
            assert hausdorff_rank(parse_chain_term(text)) == r, text


def test_criterion_03_finite_arrow(criterion):
    with criterion(3, "finite arrows with the R(3,3) = 6 cross-check", 60.0):
        assert holds_arrow(ArrowQuery(6, 3, 2, 2, 1))
        assert not holds_arrow(ArrowQuery(5, 3, 2, 2, 1))
        assert min_t(5, 3, 2, 2).value == 2
        # every red/blue K6 has a monochromatic triangle; the pentagon K5 does not
        edges = list(combinations(range(6), 2))
        assert all(
            has_mono_triangle(6, {e for e, c in zip(edges, bits) if c}) for bits in product((0, 1), repeat=len(edges))
        )
        pent = pentagon_coloring()
        assert not has_mono_triangle(5, {e for e, c in pent.items() if c})


def _random_index_set(rng):
    prefix = [rng.randrange(4)]
    for _ in range(rng.randrange(5)):
        prefix.append(prefix[-1] + rng.randint(1, 4))
    return IndexSet(tuple(prefix), rng.randint(1, 5))


def test_criterion_04_type_preservation(criterion):
    with criterion(4, "1000 re-indexings preserve the embedding type", 30.0):
        rng = random.Random(2024)
        terms = [parse_chain_term(t) for t in TERM_CORPUS]
        points = {t: truncate(t, 4).branches for t in terms}
        bad = []
        for _ in range(1000):
            sigma = rng.choice(terms)
            pts = points[sigma]
            n = rng.randint(1, min(4, len(pts)))
            f = SigmaEmbedding(sigma, tuple(sorted(rng.sample(pts, n), key=pts.index)))
            V = _random_index_set(rng)
            moved = SigmaEmbedding.of(sigma, [g_hat(V, b) for b in f.branches])
            if tp(moved) != tp(f):
                bad.append((sigma, V, f))
        assert not bad, bad[:3]


def test_criterion_05_type_stabilization(criterion):
    with criterion(5, "type sets stabilize by m = n+2 and match brute force at n+4", 60.0):
        for text in TERM_CORPUS:
            sigma = parse_chain_term(text)
            for n in (1, 2, 3):
                types, m_star = type_stabilization(sigma, n)
                assert m_star <= n + 2, (text, n, m_star)
                pts = truncate(sigma, n + 4).branches
                sigs = triple_signature_set(pts) if n == 3 else signature_set(pts, n)
                assert len(sigs) == len(types), (text, n)


def _type_buckets(sigma, rng, n):
    """Random n-embeddings grouped by type, topped up to 200 by re-indexing."""
    pts = truncate(sigma, 9).branches
    buckets = {}
    for _ in range(400):
        combo = tuple(sorted(rng.sample(pts, n), key=pts.index))
        f = SigmaEmbedding(sigma, combo)
        buckets.setdefault(tp(f), []).append(f)
    for tau, fs in buckets.items():
        seeds = list(fs)
        while len(fs) < 200:
            f, V = rng.choice(seeds), _random_index_set(rng)
            fs.append(SigmaEmbedding.of(sigma, [g_hat(V, b) for b in f.branches]))
        del fs[200:]
    return buckets


def _corrupt(code: PartialMapQ, sizes, rng):
    entries = list(code.entries)
    options = ["drop", "grow"]
    if any(s >= 2 for s in sizes):
        options.append("unsort")
    how = rng.choice(options)
    if how == "drop":
        entries.pop(rng.randrange(len(entries)))
        return PartialMapQ(code.n, tuple(entries))
    if how == "grow":
        return PartialMapQ(code.n + 1, tuple(entries) + ((code.n, xi(rng.randrange(50))),))
    starts, off = [], 0
    for s in sizes:
        if s >= 2:
            starts.append(off)
        off += s
    i = rng.choice(starts)
    vals = [v for _, v in entries]
    vals[i], vals[i + 1] = vals[i + 1], vals[i]
    return PartialMapQ(code.n, tuple(enumerate(vals)))


def test_criterion_06_psi_phi_inverse(criterion):
    with criterion(6, "psi/phi round trips on 200 embeddings per type; 50 corrupted codes rejected", 10.0):
        rng = random.Random(6)
        pairs = trips = 0
        samples = []
        for text in TERM_CORPUS:
            sigma = parse_chain_term(text)
            for n in (1, 2):
                for tau, fs in _type_buckets(sigma, rng, n).items():
                    if not tau.infinite_vertices:
                        continue
                    pairs += 1
                    for f in fs:
                        code = psi_encode(sigma, tau, f)
                        assert phi_decode(sigma, tau, code) == f
                        trips += 1
                    samples.append((sigma, tau, code))
        assert trips == 200 * pairs and pairs >= 30
        rejected = 0
        for sigma, tau, code in rng.sample(samples, 50):
            try:
                phi_decode(sigma, tau, _corrupt(code, tau.block_sizes(), rng))
            except NotInM:
                rejected += 1
        assert rejected == 50


def test_criterion_07_minimal_decomposition(criterion):
    with criterion(7, "fast minimal decomposition equals the exhaustive oracle on 103 structures", 120.0):
        rng = random.Random(7)
        structures = [random_digraph(rng, rng.randint(1, 6), rng.choice([0.1, 0.3, 0.5, 0.7])) for _ in range(100)]
        fixtures = toy_structures()
        structures += [fixtures["path3"], fixtures["k3"], fixtures["marked3"]]
        for S in structures:
            fast = minimal_mono_decomposition(S, verify=False)
            assert fast.as_lists() == coarsest_brute(S)
            assert fast == coarsest_partition_exhaustive(S)
            for P in set_partitions(S.size):
                if is_mono_decomposition(S, P):
                    assert P.refines(fast)


def test_criterion_08_block_permutation(criterion):
    with criterion(8, "self-embeddings permute minimal blocks on every corpus structure", 30.0):
        checked = 0
        for name, S in sorted(toy_structures().items()):
            report = check_block_mapping(S)
            assert report.ok, (name, report.violations)
            checked += report.embeddings_checked
        assert checked > 0


def test_criterion_09_piggyback(criterion):
    with criterion(9, "reduction witnesses: reflexive, composed, product, transfer, negative control", 60.0):
        cats = toy_categories()
        for C in cats.values():
            for A in C.objects:
                for X in C.objects:
                    assert verify_witness(identity_witness(C, A, X))
        for name, C in sorted(cats.items()):
            pool = witness_pool(C, random.Random(name), 120)
            assert pool
            for w1 in pool:
                for w2 in pool:
                    if (w1.B, w1.Y) == (w2.A, w2.X):
                        assert verify_witness(witness_compose(w1, w2))
            small = [w for w in pool if len(C.homset(w.B, w.Y)) <= 3 and len(C.homset(w.Y, w.Y)) <= 3]
            rng = random.Random(name + "p")
            for _ in range(min(10, len(small))):
                assert verify_witness(witness_product([rng.choice(small), rng.choice(small)]))
            for w in pool[:25]:
                for k in (1, 2, 3):
                    assert transfer_degree_bound(w, k)
        good = chain_shift_witness(cats, 1, 2, 1, 3)
        for k in (1, 2, 3):
            assert transfer_degree_bound(good, k)
        C = cats["chains_emb"]
        hom = C.homset(1, 3)
        bad = Witness(C, 1, 3, C, 1, 3, frozenset(hom), {f: hom[0] for f in hom})
        assert not verify_witness(bad)
        assert not transfer_degree_bound(bad, 3)


def test_criterion_10_counting_identity(criterion):
    with criterion(10, "|Emb(A,B)| = |Aut(A)| x copies on 50 corpus pairs", 10.0):
        S = toy_structures()
        pairs = [
            (a, b)
            for a in sorted(S)
            for b in sorted(S)
            if S[a].language == S[b].language and S[a].size <= S[b].size
        ][:50]
        assert len(pairs) == 50
        for a, b in pairs:
            assert emb_vs_struct_counts(S[a], S[b]).holds
        K = lambda n: graph(n, [(i, j) for i in range(n) for j in range(i + 1, n)])
        r = emb_vs_struct_counts(K(2), K(4))
        assert (r.embeddings, r.automorphisms, r.copies) == (12, 2, 6)
        r = emb_vs_struct_counts(chain(2), chain(5))
        assert (r.embeddings, r.automorphisms, r.copies) == (10, 1, 10)


def test_criterion_11_sequential_composition(criterion):
    with criterion(11, "two-class 12-chain pipeline stays within the summed bounds", 30.0):
        for seed in range(20):
            r = run_pipeline(seed)
            col = random_pair_coloring(seed)
            recount = {col[s] for s in combinations(r.universe, 2)}
            assert len(recount) == r.bound.value <= sum(r.limits.values()) == 2


SUITE = [
    ["rank", "(w (+ (w 1) 1))"],
    ["truncate", "(+ (w* 1) (w 1))", "--m", "3"],
    ["types", "(w (w 1))", "--n", "2"],
    ["spectrum", "w^5*3 + w^2 + 4"],
    ["decompose", "{s}/path4.json"],
    ["chainable", "{s}/betweenness4.json"],
    ["pullback", "{s}/k3.json", "--order", "2,0,1", "--map", "1,2,0"],
    ["arrow", "5", "3", "2", "2", "1", "--random-trials", "200", "--seed", "11"],
    ["mint", "5", "3", "2", "3"],
    ["witness-verify", "{w}/emb_1_2_to_1_3.json", "--k", "2"],
    ["witness-compose", "{w}/emb_1_1_to_1_2.json", "{w}/emb_1_2_to_1_3.json"],
    ["pq-encode", "(w (w 1))", "--branches", "(w0).(w3);(w2).(w1)"],
]


def _suite_bytes(hash_seed: str) -> bytes:
    s, w = data_dir() / "structures", data_dir() / "witnesses"
    env = dict(os.environ, PYTHONHASHSEED=hash_seed)
    out = b""
    for argv in SUITE:
        argv = [a.format(s=s, w=w) for a in argv]
        res = subprocess.run([sys.executable, "-m", "brdkit", *argv], capture_output=True, env=env, check=True)
        out += res.stdout
    return out


def test_criterion_12_determinism(criterion):
    with criterion(12, "repeated CLI suite runs are byte-identical", None):
        first = _suite_bytes("1")
        assert first == _suite_bytes("2") == _suite_bytes("12345")
        reports = [json.loads(chunk) for chunk in first.decode().replace("}\n{", "}\x00{").split("\x00")]
        assert [r["command"] for r in reports] == [a[0] for a in SUITE]
        assert all(r["status"] == "ok" for r in reports)
