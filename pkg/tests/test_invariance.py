import numpy as np
import pytest

import oracles
from pgrouplab import enumerate_subgroups, g_alpha, make_group, section, span
from pgrouplab.core import INF, height_sequence, random_element
from pgrouplab.errors import SplitPreconditionError, UlmTooSmall
from pgrouplab.homset import end_order, make_hom
from pgrouplab.invariance import (characteristic_closure, check_split, classify, covering_edges,
                                  find_automorphism_mapping, find_endo_mapping,
                                  fully_invariant_closure, is_characteristic, is_fully_invariant,
                                  is_fully_transitive, is_transitive, split_by_height,
                                  sum_of_two_autos_mapping)
from pgrouplab.sublattice import all_alpha_sequences, random_element_of, random_subgroup
from conftest import SMALL_CORPUS


def _set(X):
    return frozenset(x.coords for x in X.elements())


def test_sections_fully_invariant(U):
    for k in range(4):
        assert is_fully_invariant(section(U, "pk_socle", k))
        assert is_fully_invariant(section(U, "pk_multiple", k))


def test_kaplansky_witness(U, S):
    r = is_fully_invariant(S)
    assert not r
    assert r.witness.map == make_hom(U, U, [[0, 0], [0, 1]])
    assert r.witness.element == U.element((2, 1)) and r.witness.image == U.element((0, 1))
    assert is_characteristic(S)


def test_non_characteristic_line(rng):
    V = make_group(3, [1, 1])
    X = span(V, [V.element((1, 2))])
    r = is_characteristic(X)
    assert not r and r.witness.image not in X


def test_g_alpha_always_fully_invariant(rng):
    for _ in range(20):
        G = make_group(int(rng.choice([2, 3])), [int(v) for v in rng.integers(1, 4, 3)])
        for a in all_alpha_sequences(G):
            X = g_alpha(G, a)
            assert is_fully_invariant(X)
            if end_order(G) <= 10 ** 5:
                assert is_fully_invariant(X, method="exhaustive", bound=10 ** 5)


@pytest.mark.parametrize("p,lam", SMALL_CORPUS)
def test_generator_tests_match_exhaustive_and_oracle(p, lam):
    G = make_group(p, lam)
    fi_oracle = oracles.fully_invariant_subgroups(p, G.lam)
    ch_oracle = oracles.characteristic_subgroups(p, G.lam)
    for X in enumerate_subgroups(G):
        fi, ch = is_fully_invariant(X).holds, is_characteristic(X).holds
        assert fi == is_fully_invariant(X, method="exhaustive").holds == (_set(X) in fi_oracle)
        assert ch == is_characteristic(X, method="exhaustive").holds == (_set(X) in ch_oracle)
        assert ch or not fi


@pytest.mark.parametrize("p,lam", SMALL_CORPUS + [(2, (3, 2)), (3, (2, 1, 1))])
def test_fully_invariant_are_g_alpha(p, lam):
    from pgrouplab import canonical_alpha

    G = make_group(p, lam)
    for X in enumerate_subgroups(G):
        if is_fully_invariant(X):
            assert g_alpha(G, canonical_alpha(X)) == X


def test_closure_examples(U, S):
    C = fully_invariant_closure(S)
    assert C.order == 8 and C == span(U, [U.element((2, 1)), U.element((0, 1))])
    assert characteristic_closure(S) == S
    soc = section(U, "pk_socle", 1)
    assert fully_invariant_closure(soc) == soc


@pytest.mark.parametrize("p,lam", [(2, (3, 1)), (2, (2, 1, 1)), (3, (2, 1))])
def test_closure_laws(p, lam):
    G = make_group(p, lam)
    subs = list(enumerate_subgroups(G))
    for X in subs:
        F, C = fully_invariant_closure(X), characteristic_closure(X)
        assert X.issubset(C) and C.issubset(F)
        assert fully_invariant_closure(F) == F and characteristic_closure(C) == C
        assert is_fully_invariant(F) and is_characteristic(C)
    for X in subs[::3]:
        for Y in subs[::5]:
            if X.issubset(Y):
                assert fully_invariant_closure(X).issubset(fully_invariant_closure(Y))


def test_classify_examples():
    r = classify(make_group(3, [2, 1]))
    assert r.characteristic == r.fully_invariant and r.total == 10
    U = make_group(2, [3, 1])
    S = span(U, [U.element((2, 1))])
    r = classify(U)
    assert r.gap == [S] and r.total == 11
    for n in range(1, 5):
        r = classify(make_group(5, [n]))
        assert r.total == len(r.fully_invariant) == n + 1


@pytest.mark.parametrize("p,lam", [(3, (1, 1)), (3, (2, 1)), (3, (1, 1, 1)), (3, (3, 1)), (3, (2, 2))])
def test_odd_classification_collapses(p, lam):
    r = classify(make_group(p, lam))
    assert r.characteristic == r.fully_invariant


def test_classify_json(U):
    js = classify(U).to_json()
    assert js["characteristic_only"][0]["generators"] == [[2, 1]]
    assert js["characteristic_only"][0]["witness"]["image"] == [0, 1]


def test_covering_edges():
    V = make_group(2, [1, 1])
    subs = list(enumerate_subgroups(V))
    edges = covering_edges(subs)
    assert len(edges) == 6


@pytest.mark.parametrize("p,lam", SMALL_CORPUS + [(2, (3, 1, 1))])
def test_transitivity_matches_oracle(p, lam):
    G = make_group(p, lam)
    assert bool(is_transitive(G)) == oracles.is_transitive(p, G.lam)
    assert bool(is_fully_transitive(G)) == oracles.is_fully_transitive(p, G.lam)


def test_transitivity_examples(U):
    for n in (1, 2, 4):
        Z = make_group(3, [n])
        assert is_transitive(Z) and is_fully_transitive(Z)
    assert is_fully_transitive(U)
    assert is_transitive(U)
    T = make_group(2, [])
    assert is_transitive(T) and is_fully_transitive(T)


def test_find_automorphism_mapping(U):
    x = U.element((2, 1))
    assert find_automorphism_mapping(x, x).hom(x) == x
    c = find_automorphism_mapping(x, U.element((6, 1)))
    assert c is not None and c.verify() and c.hom(x) == U.element((6, 1))
    assert find_automorphism_mapping(x, U.element((0, 1))) is None


def test_find_endo_mapping(U, rng):
    x = U.element((2, 1))
    assert find_endo_mapping(x, U.element((0, 1))) is not None
    assert find_endo_mapping(U.element((0, 1)), U.element((1, 0))) is None
    G = make_group(3, [3, 2, 1])
    for _ in range(40):
        a, b = random_element(G, rng), random_element(G, rng)
        phi = find_endo_mapping(a, b)
        ok = all(u <= v for u, v in zip(height_sequence(a), height_sequence(b)))
        assert (phi is not None) == ok
        if phi is not None:
            assert phi(a) == b


def test_split_trivial():
    G = make_group(3, [1, 1])
    x = G.element((1, 0))
    res = split_by_height(x, G.zero())
    assert res.y0 + res.y0p == G.zero()
    assert height_sequence(res.y0) == height_sequence(res.y0p) == height_sequence(x)
    assert tuple(split_by_height(G.zero(), G.zero())) == (G.zero(), G.zero())


def test_split_fixed_example():
    G = make_group(2, [1, 1, 3, 3])
    x = G.element((0, 0, 1, 0))
    res = split_by_height(x, x)
    assert res.y0 + res.y0p == x
    assert height_sequence(res.y0) == height_sequence(res.y0p) == (0, INF, INF, INF)


def test_split_preconditions():
    G = make_group(2, [3, 3, 1, 1])
    with pytest.raises(SplitPreconditionError):
        split_by_height(G.element((4, 0, 0, 0)), G.element((1, 0, 0, 0)))
    Z = make_group(2, [2])
    with pytest.raises(UlmTooSmall) as exc:
        split_by_height(Z.element((2,)), Z.element((2,)))
    assert exc.value.level == 1


@pytest.mark.parametrize("spec", [(2, (1, 1)), (2, (3, 3, 1, 1)), (3, (1, 1)), (3, (2, 2, 1, 1)),
                                  (3, (2, 1))])
def test_split_random(spec, rng):
    G = make_group(*spec)
    for _ in range(60):
        x = random_element(G, rng)
        z = random_element_of(g_alpha(G, height_sequence(x)), rng)
        res = split_by_height(x, z)
        check_split(x, z, res)
        assert [s.j for s in res.chain] == list(range(len(res.chain)))


def test_sum_of_two_autos(rng):
    G = make_group(3, [2, 1])
    x = G.element((1, 1))
    a, b = sum_of_two_autos_mapping(x, 2 * x)
    assert a.hom(x) + b.hom(x) == 2 * x
    V = make_group(2, [1, 1, 3, 3])
    for _ in range(20):
        x = random_element(V, rng)
        z = random_element_of(g_alpha(V, height_sequence(x)), rng)
        pair = sum_of_two_autos_mapping(x, z)
        assert pair is not None and pair[0].hom(x) + pair[1].hom(x) == z
    assert sum_of_two_autos_mapping(V.element((0, 0, 2, 0)), V.element((0, 1, 0, 0))) is None
