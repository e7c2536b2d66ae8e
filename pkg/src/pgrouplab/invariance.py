"""Fully invariant and characteristic subgroups, transitivity, element mapping
and the backward-induction height splitting."""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from itertools import product

import numpy as np

from . import _kernels
from .core import (INF, Element, GroupShape, height, height_sequence, heights_json,
                   order_exponent, seq_le, ulm_invariant)
from .errors import SplitPreconditionError, UlmTooSmall
from .homset import (DEFAULT_ENDO_BOUND, AutCertificate, Homomorphism, add_homs, aut_array,
                     aut_generators, compose, endo_additive_generators, endo_array, identity,
                     scale_hom, zero_hom)
from .sublattice import (DEFAULT_ENUMERATION_BOUND, AlphaSequence, EnumerationBoundError,
                         Subgroup, echelon, enumerate_subgroups, g_alpha, reduce_vector, span)


@dataclass(frozen=True)
class Witness:
    """A map together with an element of X whose image leaves X."""

    map: Homomorphism
    element: Element
    image: Element

    def to_json(self):
        return {"matrix": [list(r) for r in self.map.matrix],
                "element": list(self.element.coords), "image": list(self.image.coords)}


@dataclass(frozen=True)
class InvarianceResult:
    holds: bool
    witness: Witness | None = None

    def __bool__(self):
        return self.holds


def _witness_order(G: GroupShape):
    """eps_ij with the diagonal idempotents first (last coordinate first)."""
    gens = endo_additive_generators(G)
    k = G.rank
    diag = [gens[i * k + i] for i in reversed(range(k))]
    off = [gens[i * k + j] for i in range(k) for j in range(k) if i != j]
    return diag + off


def _first_escape(maps, X: Subgroup):
    for phi in maps:
        for g in X.generators:
            y = phi(g)
            if y not in X:
                return Witness(phi, g, y)
    return None


# -- brute-force membership masks ---------------------------------------------


def subgroup_mask(X: Subgroup) -> np.ndarray:
    """Boolean membership array over element codes."""
    G = X.shape
    mask = np.zeros(G.order, dtype=bool)
    mask[0] = True
    for g in X.generators:
        code = int(_kernels.encode(np.asarray(g.coords), G.moduli)) if G.rank else 0
        mask = _kernels.closure(mask, code, G.moduli)
    return mask


def _stable_under(mats, X: Subgroup):
    """Index of the first matrix moving a generator of X outside X, or -1."""
    G = X.shape
    gens = X.generators
    if not gens or len(mats) == 0:
        return -1, None
    mask = subgroup_mask(X)
    codes = _kernels.encode(np.asarray([g.coords for g in gens]), G.moduli)
    imgs = _kernels.apply_codes(mats, codes, G.moduli)
    bad = ~mask[imgs]
    rows = np.flatnonzero(bad.any(axis=1))
    if rows.size == 0:
        return -1, None
    e = int(rows[0])
    return e, int(np.flatnonzero(bad[e])[0])


def _hom_from_array(G, m) -> Homomorphism:
    return Homomorphism(G, G, tuple(tuple(int(v) for v in r) for r in m))


# -- predicates --------------------------------------------------------------


def is_fully_invariant(X: Subgroup, method: str = "generators",
                       bound: int = DEFAULT_ENDO_BOUND) -> InvarianceResult:
    """phi(X) <= X for all endomorphisms.

    ``generators`` checks the additive generators eps_ij, which suffices
    because subgroups are closed under sums.  ``exhaustive`` sweeps End(G).
    """
    G = X.shape
    if method == "generators":
        w = _first_escape(_witness_order(G), X)
        return InvarianceResult(w is None, w)
    if method == "exhaustive":
        mats = endo_array(G, bound)
        e, gi = _stable_under(mats, X)
        if e < 0:
            return InvarianceResult(True)
        phi = _hom_from_array(G, mats[e])
        g = X.generators[gi]
        return InvarianceResult(False, Witness(phi, g, phi(g)))
    raise ValueError(f"unknown method {method!r}")


def is_characteristic(X: Subgroup, method: str = "generators",
                      bound: int = DEFAULT_ENDO_BOUND) -> InvarianceResult:
    """phi(X) = X for all automorphisms.

    Aut(G) is finite, so invariance under a generating set and the inverses
    gives invariance under the whole group; equality follows from orders.
    """
    G = X.shape
    if method == "generators":
        maps = []
        for c in aut_generators(G):
            maps += [c.hom, c.inverse]
        w = _first_escape(maps, X)
        return InvarianceResult(w is None, w)
    if method == "exhaustive":
        mats = aut_array(G, bound)
        e, gi = _stable_under(mats, X)
        if e < 0:
            return InvarianceResult(True)
        phi = _hom_from_array(G, mats[e])
        g = X.generators[gi]
        return InvarianceResult(False, Witness(phi, g, phi(g)))
    raise ValueError(f"unknown method {method!r}")


def _closure(X: Subgroup, maps) -> Subgroup:
    Y = X
    while True:
        imgs = [phi(g) for phi in maps for g in Y.generators]
        Z = span(Y.shape, list(Y.generators) + imgs)
        if Z == Y:
            return Y
        Y = Z


def fully_invariant_closure(X: Subgroup) -> Subgroup:
    return _closure(X, endo_additive_generators(X.shape))


def characteristic_closure(X: Subgroup) -> Subgroup:
    return _closure(X, [c.hom for c in aut_generators(X.shape)])


# -- classification ----------------------------------------------------------


@dataclass
class ClassificationReport:
    group: GroupShape
    total: int
    subgroups: list
    fully_invariant: list
    characteristic: list
    witnesses: dict = field(default_factory=dict)

    @property
    def gap(self) -> list:
        """Characteristic subgroups that are not fully invariant."""
        fi = set(self.fully_invariant)
        return [X for X in self.characteristic if X not in fi]

    def kind(self, X: Subgroup) -> str:
        if X in self._fi_set:
            return "fully_invariant"
        if X in self._ch_set:
            return "characteristic"
        return "neither"

    @property
    def _fi_set(self):
        return set(self.fully_invariant)

    @property
    def _ch_set(self):
        return set(self.characteristic)

    def to_json(self) -> dict:
        return {
            "group": self.group.to_json(),
            "total": self.total,
            "fully_invariant": [X.to_json()["basis"] for X in self.fully_invariant],
            "characteristic": [X.to_json()["basis"] for X in self.characteristic],
            "characteristic_only": [
                {"basis": X.to_json()["basis"],
                 "generators": [list(g.coords) for g in X.generators],
                 "witness": self.witnesses[X].to_json()}
                for X in self.gap],
        }


def classify(G: GroupShape, bound: int = DEFAULT_ENUMERATION_BOUND) -> ClassificationReport:
    subs = list(enumerate_subgroups(G, bound))
    fi, ch, wit = [], [], {}
    for X in subs:
        r = is_fully_invariant(X)
        if r:
            fi.append(X)
            ch.append(X)
        elif is_characteristic(X):
            ch.append(X)
            wit[X] = r.witness
    return ClassificationReport(G, len(subs), subs, fi, ch, wit)


def covering_edges(subgroups) -> list:
    """Pairs (i, j) with subgroups[i] a maximal proper subgroup of subgroups[j]."""
    subs = list(subgroups)
    if not subs:
        return []
    p = subs[0].shape.p
    edges = []
    for i, X in enumerate(subs):
        for j, Y in enumerate(subs):
            if Y.order == X.order * p and X.issubset(Y):
                edges.append((i, j))
    return edges


# -- transitivity ------------------------------------------------------------


@dataclass(frozen=True)
class TransitivityResult:
    holds: bool
    x: Element | None = None
    y: Element | None = None

    def __bool__(self):
        return self.holds


def _aut_gen_array(G):
    gens = aut_generators(G)
    if not gens:
        return np.zeros((0, G.rank, G.rank), dtype=np.int64)
    return np.asarray([c.hom.matrix for c in gens], dtype=np.int64).reshape(-1, G.rank, G.rank)


def _orbit_data(G: GroupShape, bound: int):
    if G.order > bound:
        raise EnumerationBoundError(f"|G| = {G.order} exceeds the bound {bound}")
    labels = _kernels.orbit_labels(_aut_gen_array(G), G.moduli)
    hs = _kernels.height_sequences(G.moduli, G.lam, G.p)
    return labels, hs


def _element(G, code) -> Element:
    return Element(G, tuple(int(v) for v in _kernels.decode(np.int64(code), G.moduli))) if G.rank \
        else G.zero()


def _alpha_of(hrow) -> AlphaSequence:
    return AlphaSequence(tuple(INF if h >= _kernels.INF_H else int(h) for h in hrow))


def is_fully_transitive(G: GroupShape, bound: int = DEFAULT_ENUMERATION_BOUND) -> TransitivityResult:
    """Every y with ||x|| <= ||y|| is an endomorphic image of x.

    The endomorphic images of x form the fully invariant closure of <x>,
    and {y : ||y|| >= ||x||} is G(||x||).  Both are constant on Aut-orbits,
    so one representative per orbit suffices.
    """
    if G.rank == 0:
        return TransitivityResult(True)
    labels, _ = _orbit_data(G, bound)
    for code in np.unique(labels):
        x = _element(G, code)
        target = g_alpha(G, height_sequence(x))
        closure = fully_invariant_closure(span(G, [x]))
        if not target.issubset(closure):
            y = next(g for g in target.generators if g not in closure)
            return TransitivityResult(False, x, y)
    return TransitivityResult(True)


def is_transitive(G: GroupShape, bound: int = DEFAULT_ENUMERATION_BOUND) -> TransitivityResult:
    """Every Aut-orbit is a full height-sequence class."""
    if G.rank == 0:
        return TransitivityResult(True)
    labels, hs = _orbit_data(G, bound)
    seen = {}
    for code in np.unique(labels):
        key = tuple(hs[code])
        if key in seen:
            return TransitivityResult(False, _element(G, seen[key]), _element(G, code))
        seen[key] = int(code)
    return TransitivityResult(True)


# -- element mapping ---------------------------------------------------------


def _compose_word(G, word) -> AutCertificate:
    hom, inv = identity(G), identity(G)
    for c in word:
        hom = compose(c.hom, hom)
        inv = compose(inv, c.inverse)
    return AutCertificate(hom, inv)


def find_automorphism_mapping(x: Element, y: Element) -> AutCertificate | None:
    """Breadth-first search over the Aut-orbit of x along generator edges."""
    if x.shape != y.shape:
        raise ValueError("elements live in different groups")
    G = x.shape
    if height_sequence(x) != height_sequence(y):
        return None
    gens = aut_generators(G)
    parent = {x: None}
    queue = deque([x])
    while queue:
        cur = queue.popleft()
        if cur == y:
            word = []
            while parent[cur] is not None:
                prev, c = parent[cur]
                word.append(c)
                cur = prev
            cert = _compose_word(G, reversed(word))
            assert cert.hom(x) == y
            return cert
        for c in gens:
            nxt = c.hom(cur)
            if nxt not in parent:
                parent[nxt] = (cur, c)
                queue.append(nxt)
    return None


def find_endo_mapping(x: Element, y: Element) -> Homomorphism | None:
    """An endomorphism sum c_ij eps_ij with x -> y, solved by tagged echelon."""
    if x.shape != y.shape:
        raise ValueError("elements live in different groups")
    G = x.shape
    if not seq_le(height_sequence(x), height_sequence(y)):
        return None
    gens = endo_additive_generators(G)
    n = len(gens)
    if n == 0:
        return identity(G)
    rows = [e(x).coords for e in gens]
    tags = [tuple(int(i == j) for i in range(n)) for j in range(n)]
    tmods = (G.exponent,) * n
    basis, btags = echelon(rows, G.moduli, G.p, tags, tmods)
    ok, coeffs = reduce_vector(y.coords, basis, G.moduli, G.p, btags, tmods)
    if not ok:
        return None
    phi = zero_hom(G, G)
    for c, e in zip(coeffs, gens):
        if c:
            phi = add_homs(phi, scale_hom(c, e))
    assert phi(x) == y
    return phi


# -- height splitting --------------------------------------------------------


@dataclass(frozen=True)
class SplitStep:
    j: int
    y: Element
    y_prime: Element
    case: str  # "base", "gap1" or "gap"
    level: object  # height of p^j x

    def to_json(self):
        return {"j": self.j, "y": list(self.y.coords), "y_prime": list(self.y_prime.coords),
                "case": self.case, "height": heights_json([self.level])[0]}


@dataclass(frozen=True)
class SplitResult:
    y0: Element
    y0p: Element
    chain: tuple  # SplitStep for j = 0 .. k, ascending
    note: str = "construction run for arbitrary p; Ulm factor size checked only where needed"

    def __iter__(self):
        return iter((self.y0, self.y0p))

    def to_json(self):
        return {"y0": list(self.y0.coords), "y0p": list(self.y0p.coords),
                "chain": [s.to_json() for s in self.chain], "note": self.note}


def _divide_by_p_candidates(G: GroupShape, target: Element):
    """Per-coordinate sorted solutions of p*y_i = t_i, or None if unsolvable."""
    p = G.p
    out = []
    for t, l, m in zip(target.coords, G.lam, G.moduli):
        if t % p:
            return None
        out.append(sorted({(t // p + c * p ** (l - 1)) % m for c in range(p)}))
    return out


def _first(G, choices, accept):
    for coords in product(*choices):
        y = Element(G, coords)
        if accept(y):
            return y
    return None


def split_by_height(x: Element, z: Element) -> SplitResult:
    """Write z = y0 + y0' with ||y0|| = ||y0'|| = ||x||.

    Backward induction on j from k-1 down to 0, where p^k is the order of
    x: keep p*y_j = y_{j+1}, p^j z = y_j + y'_j and
    |y_j| = |y'_j| = |p^j x|.  Lexicographically least choices throughout.
    """
    if x.shape != z.shape:
        raise ValueError("elements live in different groups")
    G = x.shape
    p = G.p
    if not seq_le(height_sequence(x), height_sequence(z)):
        raise SplitPreconditionError("height sequence of x must be pointwise <= that of z")
    k = order_exponent(x)
    if not (p ** k * z).is_zero():
        raise SplitPreconditionError("z must be killed by the order of x")
    y = (p ** k) * x
    chain = [SplitStep(k, y, (p ** k) * z - y, "base", height(y))]
    for j in range(k - 1, -1, -1):
        n = height((p ** j) * x)
        m = height((p ** (j + 1)) * x)
        pjz = (p ** j) * z
        cands = _divide_by_p_candidates(G, y)
        assert cands is not None
        if m == n + 1:
            yj = _first(G, cands, lambda c: height(c) == n)
            case = "gap1"
        else:
            s = _first(G, cands, lambda c: height(c) >= n + 1)
            f = ulm_invariant(G, n)
            top = [i for i, l in enumerate(G.lam) if l == n + 1]
            t = None
            if f:
                choices = [[c * p ** n for c in range(p)] if i in top else [0]
                           for i in range(G.rank)]
                t = _first(G, choices,
                           lambda c: height(c) == n and height(c - pjz) == n)
            if t is None:
                raise UlmTooSmall(n, f)
            yj = s + t
            case = "gap"
        assert yj is not None and p * yj == y
        chain.append(SplitStep(j, yj, pjz - yj, case, n))
        y = yj
    chain.reverse()
    res = SplitResult(chain[0].y, chain[0].y_prime, tuple(chain))
    check_split(x, z, res)
    return res


def check_split(x: Element, z: Element, res: SplitResult) -> None:
    """Assert the chain conditions at every level."""
    p = x.shape.p
    for step in res.chain:
        j = step.j
        assert (p ** j) * z == step.y + step.y_prime, f"sum condition fails at j={j}"
        h = height((p ** j) * x)
        assert height(step.y) == h and height(step.y_prime) == h, f"height condition fails at j={j}"
    for a, b in zip(res.chain, res.chain[1:]):
        assert p * a.y == b.y and p * a.y_prime == b.y_prime, f"chain condition fails at j={a.j}"
    assert height_sequence(res.y0) == height_sequence(x) == height_sequence(res.y0p)


def sum_of_two_autos_mapping(x: Element, z: Element):
    """Automorphisms a, a' with a(x) + a'(x) = z, or None."""
    try:
        y0, y0p = split_by_height(x, z)
    except SplitPreconditionError:
        return None
    a = find_automorphism_mapping(x, y0)
    b = find_automorphism_mapping(x, y0p)
    if a is None or b is None:
        return None
    assert a.hom(x) + b.hom(x) == z
    return a, b
