import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

import oracles
from pgrouplab import (AlphaSequence, EnumerationBoundError, canonical_alpha,
                       commensurability_defect, contains, enumerate_subgroups, g_alpha, index,
                       join, make_group, meet, quotient_type, section, span)
from pgrouplab.core import INF
from pgrouplab.sublattice import (Subgroup, all_alpha_sequences, multiple, normalize_alpha,
                                  random_element_of, random_subgroup, socle, subgroup_from_json,
                                  trivial, whole)
from conftest import SMALL_CORPUS


def _set(X):
    return {x.coords for x in X.elements()}


def test_span_S(U, S):
    assert _set(S) == {(0, 0), (2, 1), (4, 0), (6, 1)}
    assert S.order == 4
    assert span(U, []).order == 1
    assert span(U, [U.element((0, 1)), U.element((1, 0))]) == whole(U)


def test_contains(U, S):
    assert contains(S, U.element((6, 1)))
    assert not contains(S, U.element((0, 1)))
    assert all(contains(X, U.zero()) for X in enumerate_subgroups(U))
    with pytest.raises(ValueError):
        make_group(2, [1]).element((1,)) in S


def test_join_meet_index(U, S):
    assert join(S, S) == S and meet(S, S) == S and index(S, S) == 1
    assert join(S, span(U, [U.element((0, 1))])).order == 8
    assert meet(S, section(U, "pk_socle", 1)) == span(U, [U.element((4, 0))])
    with pytest.raises(ValueError):
        index(whole(U), S)


def test_quotient_type_examples(U, S):
    assert quotient_type(whole(U), S) == (2,)
    assert quotient_type(S, S) == ()
    assert quotient_type(whole(U), trivial(U)) == (3, 1)


def test_commensurability_defect(U, S):
    assert commensurability_defect(S, S) == (1, 1)
    Z4 = make_group(2, [2])
    assert commensurability_defect(span(Z4, [Z4.element((1,))]), span(Z4, [Z4.element((2,))])) == (2, 1)
    assert commensurability_defect(S, section(U, "pk_socle", 1)) == (2, 2)


def test_g_alpha_examples(U):
    assert g_alpha(U, (0, 1, 2)) == whole(U)
    assert g_alpha(U, (INF,)).order == 1
    assert _set(g_alpha(U, (1, 3))) == {(0, 0), (4, 0)}
    with pytest.raises(ValueError):
        AlphaSequence((2, 1))
    with pytest.raises(ValueError):
        AlphaSequence((INF, 3))


def test_canonical_alpha_examples(U, S):
    assert canonical_alpha(whole(U)).padded(4) == (0, 1, 2, INF)
    assert canonical_alpha(trivial(U)).entries == ()
    assert canonical_alpha(S).padded(3) == (0, 2, INF)


@pytest.mark.parametrize("p,lam", SMALL_CORPUS)
def test_g_alpha_matches_oracle(p, lam):
    G = make_group(p, lam)
    mods = G.moduli
    for a in all_alpha_sequences(G):
        want = set()
        for x in oracles.elements(p, G.lam):
            ok = True
            for n in range(G.length + 1):
                h = oracles.height(oracles.scale(p ** n, x, mods), p, G.lam)
                ok &= h >= a[n]
            if ok:
                want.add(x)
        assert _set(g_alpha(G, a)) == want


@pytest.mark.parametrize("p,lam", SMALL_CORPUS)
def test_g_alpha_antitone_and_extensive(p, lam):
    G = make_group(p, lam)
    seqs = list(all_alpha_sequences(G))
    for a, b in itertools.product(seqs, repeat=2):
        if all(a[n] <= b[n] for n in range(G.length + 1)):
            assert g_alpha(G, b).issubset(g_alpha(G, a))
    for X in enumerate_subgroups(G):
        assert X.issubset(g_alpha(G, canonical_alpha(X)))
        assert g_alpha(G, normalize_alpha(G, canonical_alpha(X))) == g_alpha(G, canonical_alpha(X))


@pytest.mark.parametrize("p,lam,count", [(2, (2,), 3), (3, (2,), 3), (2, (1, 1), 5), (3, (1, 1), 6),
                                         (5, (1, 1), 8), (2, (3, 1), 11)])
def test_enumeration_counts(p, lam, count):
    assert len(list(enumerate_subgroups(make_group(p, lam)))) == count


@pytest.mark.parametrize("p,lam", SMALL_CORPUS + [(2, (3, 2)), (2, (1, 1, 1, 1))])
def test_enumeration_matches_oracle(p, lam):
    G = make_group(p, lam)
    subs = list(enumerate_subgroups(G))
    assert {frozenset(_set(X)) for X in subs} == {frozenset(X) for X in oracles.all_subgroups(p, G.lam)}
    assert len(set(subs)) == len(subs)
    keys = [X.sort_key() for X in subs]
    assert keys == sorted(keys)
    for X in subs:
        assert span(G, X.generators) == X


def test_enumeration_bound():
    with pytest.raises(EnumerationBoundError):
        enumerate_subgroups(make_group(2, [9, 8]))
    with pytest.raises(EnumerationBoundError):
        enumerate_subgroups(make_group(2, [3, 1]), bound=8)


@pytest.mark.parametrize("p,lam", [(2, (2, 1)), (2, (3, 1)), (3, (2, 1)), (2, (1, 1, 1))])
def test_lattice_laws(p, lam):
    G = make_group(p, lam)
    subs = list(enumerate_subgroups(G))
    for X, Y in itertools.product(subs, repeat=2):
        J, M = join(X, Y), meet(X, Y)
        assert J == join(Y, X) and M == meet(Y, X)
        assert X.order * Y.order == J.order * M.order
        assert _set(M) == _set(X) & _set(Y)
    for X, Y, Z in itertools.islice(itertools.product(subs, repeat=3), 0, None, 7):
        assert join(join(X, Y), Z) == join(X, join(Y, Z))
        assert meet(meet(X, Y), Z) == meet(X, meet(Y, Z))


@pytest.mark.parametrize("p,lam", [(2, (2, 1)), (2, (3, 1)), (3, (2, 1)), (2, (2, 1, 1))])
def test_order_factorization(p, lam):
    G = make_group(p, lam)
    subs = list(enumerate_subgroups(G))
    for X, Y in itertools.product(subs, repeat=2):
        if not X.issubset(Y):
            continue
        for k in range(G.length + 1):
            lhs = index(X, Y)
            rhs = index(socle(X, k), socle(Y, k)) * index(multiple(X, k), multiple(Y, k))
            assert lhs == rhs


@pytest.mark.parametrize("p,lam", [(2, (2, 1)), (2, (3, 1)), (3, (2, 1)), (2, (2, 2))])
def test_quotient_type_matches_oracle(p, lam):
    G = make_group(p, lam)
    subs = list(enumerate_subgroups(G))
    for X, Y in itertools.product(subs, repeat=2):
        if X.issubset(Y):
            want = oracles.quotient_type(frozenset(_set(Y)), frozenset(_set(X)), p, G.moduli)
            assert quotient_type(Y, X) == want


def test_json_roundtrip(U, S):
    assert subgroup_from_json(S.to_json()) == S
    with pytest.raises(ValueError):
        subgroup_from_json({"shape": U.to_json(), "basis": [[2, 1], [0, 1]]})


def test_random_helpers(U, rng):
    for _ in range(20):
        X = random_subgroup(U, rng)
        assert all(random_element_of(X, rng) in X for _ in range(5))


@settings(max_examples=40, deadline=None)
@given(st.sampled_from([2, 3]), st.lists(st.integers(1, 3), min_size=1, max_size=3),
       st.integers(0, 2 ** 32 - 1))
def test_span_is_closure(p, lam, seed):
    G = make_group(p, lam)
    rng = np.random.default_rng(seed)
    gens = [tuple(int(rng.integers(0, m)) for m in G.moduli) for _ in range(int(rng.integers(0, 3)))]
    X = span(G, [G.element(g) for g in gens])
    assert _set(X) == set(oracles.closure(gens, G.moduli))
    assert isinstance(X, Subgroup)
