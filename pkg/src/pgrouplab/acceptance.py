"""Acceptance criteria as callable checks and the ``suite`` runner.

Every criterion returns a ``CriterionResult``; detail strings are built
only from deterministic quantities so suite JSON is reproducible.
"""
from __future__ import annotations

import sys
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .core import (Element, GroupShape, height_sequence, parse_group, random_element)
from .errors import PropertyViolation, SearchInconclusive, SplitPreconditionError
from .homset import (aut_array, aut_generators, end_order, endo_additive_generators, endo_array,
                     generated_aut_group, identity, make_hom, random_endo, random_hom, shear,
                     square_maps)
from .inertia import (_end_coordinates, check_sum_bound, four_blocks, four_auto_decompose, hat,
                      noone_family, radical_class_lifts, square_hull, two_auto_decompose,
                      two_auto_sweep)
from .invariance import check_split, classify, is_characteristic, is_fully_invariant, split_by_height
from .sublattice import (all_alpha_sequences, canonical_alpha, enumerate_subgroups, g_alpha,
                         random_element_of, random_subgroup, span)

DEFAULT_SEED = 0

DEFAULT_CORPUS = (
    "2:[1]", "2:[2]", "2:[3]", "2:[1,1]", "2:[2,1]", "2:[3,1]", "2:[2,2]", "2:[1,1,1]",
    "2:[2,1,1]", "2:[3,2]", "2:[3,3]", "2:[4,1]", "2:[1,1,1,1]",
    "3:[1]", "3:[2]", "3:[3]", "3:[1,1]", "3:[2,1]", "3:[3,1]", "3:[2,2]", "3:[1,1,1]",
    "3:[2,1,1]",
)

# |End| above this switches criterion 4 from the literal sweep to the class sweep
LITERAL_SWEEP_BOUND = 2 * 10 ** 6


@dataclass
class CriterionResult:
    number: int
    name: str
    passed: bool
    detail: str

    def line(self) -> str:
        return f"[{'PASS' if self.passed else 'FAIL'}] criterion {self.number:>2}: {self.name}: {self.detail}"

    def to_json(self):
        return {"criterion": self.number, "name": self.name, "passed": self.passed,
                "detail": self.detail}


class _Fail(Exception):
    pass


def _require(cond, msg):
    if not cond:
        raise _Fail(msg)


def _run(number, name, fn):
    try:
        detail = fn()
        return CriterionResult(number, name, True, detail)
    except (_Fail, PropertyViolation, AssertionError, SearchInconclusive) as exc:
        return CriterionResult(number, name, False, f"{type(exc).__name__}: {exc}")


def oracle_fully_invariant(X, corrupt=False) -> bool:
    """Brute force over End(G); ``corrupt`` inverts the answer (harness self-test)."""
    ans = is_fully_invariant(X, method="exhaustive").holds
    return (not ans) if corrupt else ans


# -- individual criteria -------------------------------------------------------


def kaplansky(corrupt_oracle=False) -> str:
    U = parse_group("2:[3,1]")
    S = span(U, [U.element((2, 1))])
    rep = classify(U)
    _require(S in rep.characteristic, "S is not characteristic")
    _require(S not in rep.fully_invariant, "S is reported fully invariant")
    w = rep.witnesses[S]
    kappa = make_hom(U, U, [[0, 0], [0, 1]])
    _require(w.map == kappa, f"witness map {w.map} is not kappa")
    _require(w.element == U.element((2, 1)) and w.image == U.element((0, 1)),
             f"witness {w.element} -> {w.image}")
    _require(w.image not in S, "witness image lies in S")
    _require(not oracle_fully_invariant(S, corrupt_oracle), "brute-force oracle disagrees on S")
    _require(is_characteristic(S, method="exhaustive").holds, "brute-force Aut check fails")
    return "S=<(2,1)> characteristic only; kappa(2,1)=(0,1) not in S"


def four_automorphisms(seed=DEFAULT_SEED, samples=200) -> str:
    rng = np.random.default_rng(seed)
    total = 0
    for spec in ("2:[3,1]", "3:[2,1]", "2:[2,1,1]"):
        A = parse_group(spec)
        G = square_maps(A).G
        for _ in range(samples):
            gamma = random_endo(G, rng)
            dec = four_auto_decompose(gamma)
            sm, fwd, _ = four_blocks(gamma)
            for part, blocks in zip(dec.parts, fwd):
                _require(part.hom == sm.block(blocks), "part differs from the block formula")
                _require(part.verify(), "inverse does not verify")
            _require(dec.verify(), "parts do not sum to the target")
            total += 1
    return f"{total} endomorphisms decomposed"


def sum_bound(corpus, seed=DEFAULT_SEED, probes=500) -> str:
    rng = np.random.default_rng(seed)
    count = 0
    for G in corpus:
        for _ in range(probes):
            parts = [random_endo(G, rng) for _ in range(int(rng.integers(1, 5)))]
            X = random_subgroup(G, rng)
            r = check_sum_bound(parts, X)
            _require(r.holds, f"bound fails in {G}: {r.lhs} > {r.rhs}")
            count += 1
    return f"{count} probes over {len(corpus)} groups"


def _two_auto_groups(p):
    for lam in ((1,), (2,), (1, 1), (3,), (2, 1), (1, 1, 1), (4,), (3, 1), (2, 2), (2, 1, 1),
                (1, 1, 1, 1)):
        yield GroupShape(p, lam)


def two_automorphisms(literal_bound=LITERAL_SWEEP_BOUND) -> str:
    literal = reduced = 0
    for p in (3, 5):
        for G in _two_auto_groups(p):
            if end_order(G) <= literal_bound:
                bad = two_auto_sweep(G, bound=literal_bound)
                _require(not bad, f"{G}: {len(bad)} endomorphisms not a sum of two automorphisms")
                literal += end_order(G)
            else:
                for gamma in radical_class_lifts(G):
                    dec = two_auto_decompose(gamma)
                    _require(dec is not None and dec.verify(), f"{G}: {gamma} undecided")
                    reduced += 1
    Z2 = GroupShape(2, (1,))
    _require(two_auto_decompose(identity(Z2)) is None, "identity of Z2 decomposed")
    _require(len(two_auto_sweep(Z2)) == 1, "Z2 sweep disagrees")
    return f"{literal} endomorphisms swept literally, {reduced} class lifts; Z2 identity proven absent"


G_ALPHA_CORPUS = tuple(f"{p}:{lam}" for p in (2, 3) for lam in ("[2,1]", "[3,1]", "[2,1,1]"))


def g_alpha_classification(corrupt_oracle=False) -> str:
    checked = 0
    for spec in G_ALPHA_CORPUS:
        G = parse_group(spec)
        subs = list(enumerate_subgroups(G))
        fi = {X for X in subs if oracle_fully_invariant(X, corrupt_oracle and checked == 0)}
        fixed = {X for X in subs if g_alpha(G, canonical_alpha(X)) == X}
        _require(fi == fixed, f"{G}: fully invariant set differs from G(alpha) fixed points")
        for a in all_alpha_sequences(G):
            _require(oracle_fully_invariant(g_alpha(G, a)), f"{G}: g_alpha{a} not fully invariant")
        checked += 1
    return f"{checked} groups, fully invariant = G(alpha) fixed points"


def odd_collapse(corpus) -> str:
    odd = [G for G in corpus if G.p == 3]
    for G in odd:
        rep = classify(G)
        _require(rep.characteristic == rep.fully_invariant, f"{G}: characteristic-only subgroup")
    U = parse_group("2:[3,1]")
    S = span(U, [U.element((2, 1))])
    _require(S in classify(U).gap, "S missing from the gap of U")
    return f"{len(odd)} odd groups collapse; U gap contains S"


def noone_growth() -> str:
    for p in (2, 3):
        for N in range(7):
            fam = noone_family(p, N)
            _require(fam.orders == tuple(p ** k for k in range(N + 1)), f"p={p} N={N}: {fam.orders}")
    return "orders p^k for p in {2,3}, N <= 6"


SHEAR_SHAPES = ("2:[3,1]", "2:[2,1,1]", "3:[2,1]", "3:[1,1,1]", "2:[2,2,1]")


def _coset_count(phi, X) -> int:
    elems = X.elements()
    imgs = {phi(x) for x in elems}
    return len({a + b for a in imgs for b in elems}) // len(elems)


def shears(seed=DEFAULT_SEED, samples=200) -> str:
    rng = np.random.default_rng(seed)
    shapes = [parse_group(s) for s in SHEAR_SHAPES]
    for _ in range(samples):
        G = shapes[int(rng.integers(len(shapes)))]
        mask = rng.integers(0, 2, G.rank)
        v = tuple(i for i in range(G.rank) if mask[i])
        w = tuple(i for i in range(G.rank) if not mask[i])
        gamma = random_hom(G.sub_shape(v), G.sub_shape(w), rng)
        cert = shear(G, v, gamma)
        _require(cert.verify(), "phi_gamma o phi_-gamma is not the identity")
        X = random_subgroup(G, rng)
        _require(hat(cert.hom, X).order == _coset_count(cert.hom, X), f"hat mismatch in {G}")
    return f"{samples} shears verified"


def hull(seed=DEFAULT_SEED, samples=100) -> str:
    rng = np.random.default_rng(seed)
    for spec in ("2:[2,1]", "3:[1,1]"):
        G = square_maps(parse_group(spec)).G
        for _ in range(samples):
            X = random_subgroup(G, rng, max_gens=3)
            r = square_hull(X)
            _require(X.issubset(r.square) and r.holds, f"hull bound fails for {X}")
    return f"{2 * samples} hulls verified"


SPLIT_SHAPES = ("2:[1,1]", "2:[2,2,1,1]", "2:[3,3,1,1]", "2:[3,3,2,2,1,1]", "3:[1,1]",
                "3:[2,2,1,1]")
PAIR_ORACLE_BOUND = 2 ** 10


def pair_oracle(x: Element, z: Element, y: Element | None = None) -> bool:
    """Brute force: some y with ||y|| = ||x|| = ||z - y|| (and y, if given, is one)."""
    G = x.shape
    hs = _kernels.height_sequences(G.moduli, G.lam, G.p)
    codes = np.arange(G.order, dtype=np.int64)
    target = hs[int(_kernels.encode(np.asarray(x.coords), G.moduli))]
    good = (hs == target).all(axis=1)
    vecs = _kernels.decode(codes, G.moduli)
    rest = _kernels.encode((np.asarray(z.coords) - vecs) % np.asarray(G.moduli), G.moduli)
    ok = good & good[rest]
    if y is not None:
        return bool(ok[int(_kernels.encode(np.asarray(y.coords), G.moduli))])
    return bool(ok.any())


def splitting(seed=DEFAULT_SEED, samples=500) -> str:
    rng = np.random.default_rng(seed)
    shapes = [parse_group(s) for s in SPLIT_SHAPES]
    oracle_checked = 0
    for _ in range(samples):
        G = shapes[int(rng.integers(len(shapes)))]
        x = random_element(G, rng)
        z = random_element_of(g_alpha(G, height_sequence(x)), rng)
        try:
            res = split_by_height(x, z)
        except SplitPreconditionError as exc:
            raise _Fail(f"{G} x={x} z={z}: {exc}") from None
        check_split(x, z, res)
        if G.order <= PAIR_ORACLE_BOUND:
            _require(pair_oracle(x, z, res.y0), f"oracle rejects the split of {z} for {x}")
            oracle_checked += 1
    return f"{samples} splits verified, {oracle_checked} against the pair oracle"


def generator_soundness(corpus) -> str:
    done = 0
    for G in corpus:
        if G.order > (2 ** 8 if G.p == 2 else 3 ** 6):
            continue
        autos = {tuple(tuple(int(v) for v in r) for r in m) for m in aut_array(G)}
        _require(generated_aut_group(G) == autos, f"{G}: aut_generators do not generate Aut")
        E, pos = _end_coordinates(G)
        vecs = [E.element(tuple(e.matrix[i][j] // d for i, j, _, d in pos))
                for e in endo_additive_generators(G)]
        _require(span(E, vecs).order == end_order(G) == len(endo_array(G)),
                 f"{G}: eps_ij do not span End")
        done += 1
    return f"{done} groups"


CRITERIA = (
    (1, "Kaplansky example"),
    (2, "four-automorphism identity"),
    (3, "sum bound"),
    (4, "two-automorphism decompositions"),
    (5, "G(alpha) classification"),
    (6, "odd-p collapse"),
    (7, "swap family growth"),
    (8, "shear automorphisms"),
    (9, "square hull"),
    (10, "height splitting"),
    (11, "generator soundness"),
)


def run_criteria(corpus=None, seed=DEFAULT_SEED, corrupt_oracle=False, only=None):
    """Criteria 1..11 in order; ``corpus`` is a list of GroupShape."""
    corpus = [parse_group(s) for s in DEFAULT_CORPUS] if corpus is None else list(corpus)
    fns = {
        1: lambda: kaplansky(corrupt_oracle),
        2: lambda: four_automorphisms(seed),
        3: lambda: sum_bound(corpus, seed),
        4: two_automorphisms,
        5: lambda: g_alpha_classification(corrupt_oracle),
        6: lambda: odd_collapse(corpus),
        7: noone_growth,
        8: lambda: shears(seed),
        9: lambda: hull(seed),
        10: lambda: splitting(seed),
        11: lambda: generator_soundness(corpus),
    }
    out = []
    for number, name in CRITERIA:
        if only is None or number in only:
            out.append(_run(number, name, fns[number]))
    return out


def suite_report(corpus, seed, results) -> dict:
    return {"seed": seed, "corpus": [str(G) for G in corpus],
            "passed": all(r.passed for r in results),
            "criteria": [r.to_json() for r in results]}
