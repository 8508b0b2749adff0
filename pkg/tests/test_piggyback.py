import json
import random

import pytest

from brdkit.corpus import chain_shift_witness, data_dir, load_categories, oplus_witness, toy_categories
from brdkit.errors import CategoryError, PremiseFails
from brdkit.piggyback import (
    FiniteCategory,
    Witness,
    dump_category,
    dump_witness,
    find_g,
    finite_degree,
    function_category,
    identity_witness,
    load_category,
    load_witness,
    pq_fragment,
    product_category,
    transfer_degree_bound,
    verify_witness,
    witness_compose,
    witness_from_injection,
    witness_product,
    witness_transport,
)
from oracles import witness_pool


@pytest.fixture(scope="module")
def cats():
    return toy_categories()


def test_category_laws_are_enforced():
    good = function_category("c", {1: 1, 2: 2})
    comp = dict(good.compose)
    f = good.homset(1, 2)[0]
    comp[(good.identity[2], f)] = good.homset(1, 2)[1]
    with pytest.raises(CategoryError):
        FiniteCategory("bad", good.objects, dict(good.hom), good.identity, comp)
    with pytest.raises(CategoryError):
        FiniteCategory("noid", (1,), {(1, 1): ["a"]}, {}, {("a", "a"): "a"})


def test_homset_sizes():
    C = function_category("c", {1: 1, 2: 2, 3: 3}, "monotone")
    assert [len(C.homset(a, 3)) for a in (1, 2, 3)] == [3, 6, 10]
    P = pq_fragment("p", [2], 3)
    assert len(P.homset(2, "Q")) == 16 and len(P.homset("Q", 2)) == 0


def test_shipped_categories_match_builders(cats):
    shipped = load_categories()
    assert set(shipped) == set(cats)
    for name, c in cats.items():
        assert shipped[name].hom == c.hom
        assert shipped[name].compose == c.compose


def test_reflexive_witnesses_verify(cats):
    for C in cats.values():
        for A in C.objects:
            for X in C.objects:
                assert verify_witness(identity_witness(C, A, X))


def test_empty_m_fails():
    C = function_category("c", {1: 1, 3: 3})
    w = Witness(C, 1, 3, C, 1, 3, frozenset(), {})
    assert not verify_witness(w)


def test_witness_invariants():
    C = function_category("c", {1: 1, 3: 3})
    f = C.homset(1, 3)[0]
    with pytest.raises(CategoryError):
        Witness(C, 1, 3, C, 1, 3, frozenset([f]), {})
    with pytest.raises(CategoryError):
        Witness(C, 1, 3, C, 1, 3, frozenset([C.identity[1]]), {C.identity[1]: f})


def test_chain_category_witness_matches_direct_check(cats):
    C = cats["chains_emb"]
    w = chain_shift_witness(cats, 1, 2, 1, 3)
    # hom(3,3) = {id}: the condition reduces to hom(1,2) being covered by phi(M)
    assert verify_witness(w) == (set(w.phi.values()) == set(C.homset(1, 2)))
    assert verify_witness(w)


def test_from_injection_examples(cats):
    C = cats["chains_mono"]
    hom = C.homset(1, 2)
    w = witness_from_injection(C, 1, 2, C, 1, 2, {f: f for f in hom})
    assert verify_witness(w) and w.M == frozenset(hom)
    with pytest.raises(CategoryError):
        witness_from_injection(C, 1, 2, C, 1, 2, {f: hom[0] for f in hom})
    incl = (2, 3, (0, 1))
    with pytest.raises(PremiseFails) as info:
        witness_from_injection(C, 1, 2, C, 1, 3, {f: C.comp(incl, f) for f in hom})
    assert info.value.h in C.homset(3, 3)


def test_oplus_injection_witness(cats):
    w = oplus_witness(cats)
    assert verify_witness(w)
    assert len(w.M) == len(w.source.homset((1, 1), ("Q", "Q"))) == 9


def test_compose_examples(cats):
    C = cats["chains_emb"]
    w = chain_shift_witness(cats, 1, 2, 1, 3)
    r = identity_witness(C, 1, 2)
    c = witness_compose(r, w)
    assert c.M == w.M and c.phi == w.phi
    pipeline = witness_compose(witness_compose(chain_shift_witness(cats, 1, 1, 1, 2), w), identity_witness(C, 1, 3))
    assert verify_witness(pipeline)
    with pytest.raises(CategoryError):
        witness_compose(w, w)


def test_compose_with_failing_witness_fails(cats):
    C = cats["chains_emb"]
    hom = C.homset(1, 3)
    bad = Witness(C, 1, 3, C, 1, 3, frozenset(hom), {f: hom[0] for f in hom})
    assert not verify_witness(bad)
    assert not verify_witness(witness_compose(identity_witness(C, 1, 3), bad))


@pytest.mark.parametrize("name", ["chains_emb", "chains_mono", "sets_inj", "sets_all", "pq_d3"])
def test_transitivity_on_random_pool(cats, name):
    C = cats[name]
    pool = witness_pool(C, random.Random(name), 150)
    composed = 0
    for w1 in pool:
        for w2 in pool:
            if (w1.B, w1.Y) == (w2.A, w2.X):
                assert verify_witness(witness_compose(w1, w2))
                composed += 1
    assert composed > 0


def test_transport_examples(cats):
    C = cats["chains_mono"]
    w = identity_witness(C, 1, 2)
    same = witness_transport(w, 2, C.identity[2], C.identity[2])
    assert same.phi == w.phi
    for X2 in C.objects:
        assert verify_witness(witness_transport(w, X2))
    S = cats["sets_inj"]
    swap = (3, 3, (1, 0, 2))
    moved = witness_transport(identity_witness(S, 2, 3), 3, swap, swap)
    assert verify_witness(moved)
    P = cats["pq_d3"]
    with pytest.raises(CategoryError):
        witness_transport(identity_witness(P, 1, "Q"), 2)


def test_transport_on_pool(cats):
    C = cats["chains_mono"]
    for w in witness_pool(C, random.Random(7), 100):
        for X2 in C.objects:
            for p in C.homset(w.X, X2):
                for q in C.homset(X2, w.X)[:2]:
                    assert verify_witness(witness_transport(w, X2, p, q))


def test_product_examples(cats):
    C = cats["chains_emb"]
    w = chain_shift_witness(cats, 1, 2, 1, 3)
    one = witness_product([w])
    assert verify_witness(one) and len(one.M) == len(w.M)
    r = witness_product([identity_witness(C, 1, 2), identity_witness(C, 1, 3)])
    assert r.M == frozenset(r.source.homset((1, 1), (2, 3)))
    assert all(r.phi[f] == f for f in r.M)


@pytest.mark.parametrize("name", ["chains_mono", "sets_all", "pq1_d2"])
def test_products_of_verified_witnesses_verify(cats, name):
    pool = witness_pool(cats[name], random.Random(name + "x"), 60, max_hom=4)
    rng = random.Random(1)
    for _ in range(12):
        a, b = rng.choice(pool), rng.choice(pool)
        assert verify_witness(witness_product([a, b]))


def test_transfer_examples(cats):
    C = cats["chains_emb"]
    w = chain_shift_witness(cats, 1, 2, 1, 3)
    assert transfer_degree_bound(w, 1)
    assert transfer_degree_bound(w, 3)
    hom = C.homset(1, 3)
    bad = Witness(C, 1, 3, C, 1, 3, frozenset(hom), {f: hom[0] for f in hom})
    assert not transfer_degree_bound(bad, 3)


def test_finite_degree_values(cats):
    assert finite_degree(cats["chains_emb"], 1, 3, 2) == 2
    assert finite_degree(cats["chains_mono"], 1, 3, 3) == 1
    assert finite_degree(cats["sets_all"], 2, 2, 1) == 1


def test_find_g_returns_witnessing_morphism(cats):
    C = cats["chains_mono"]
    for w in witness_pool(C, random.Random(3), 60):
        for h in C.homset(w.Y, w.Y):
            g = find_g(w, h)
            reach = {w.phi[f] for f in C.comp_set(h, C.homset(w.B, w.Y)) if f in w.M}
            assert C.comp_set(g, C.homset(w.A, w.X)) <= reach


def test_json_round_trips(cats):
    C = cats["pq_d3"]
    assert load_category(json.loads(json.dumps(dump_category(C)))).hom == C.hom
    w = oplus_witness(cats)
    data = json.loads(json.dumps(dump_witness(w)))
    back = load_witness(data, {w.source.name: w.source, w.target.name: w.target})
    assert back.M == w.M and back.phi == w.phi
    shipped = json.loads((data_dir() / "witnesses" / "pq_oplus.json").read_text())
    assert shipped["witness"] == data


def test_product_category_composes_componentwise(cats):
    C = cats["chains_emb"]
    P = product_category([C, C])
    f = (C.homset(1, 2)[1], C.homset(1, 3)[2])
    g = (C.homset(2, 3)[0], C.identity[3])
    assert P.comp(g, f) == (C.comp(g[0], f[0]), C.comp(g[1], f[1]))
    P.check_laws()
