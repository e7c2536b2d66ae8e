"""Subgroups as lattices between diag(p^lam) Z^k and Z^k.

The canonical form of a subgroup is the Hermite normal form of its
preimage lattice: an upper-triangular k x k integer matrix whose row ``c``
has pivot ``d_c = p^v`` at column ``c`` and entries right of the pivot
reduced modulo the pivot of their column.  Two subgroups are equal iff
their bases are identical.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from itertools import product

from .core import INF, Element, GroupShape, height, valuation

DEFAULT_ENUMERATION_BOUND = 2 ** 16


class EnumerationBoundError(RuntimeError):
    """Exhaustive work requested on an object larger than the configured bound."""


# -- echelon machinery -------------------------------------------------------


def _vals(row, moduli):
    return [v % m for v, m in zip(row, moduli)]


def echelon(rows, moduli, p, tags=None, tag_moduli=None):
    """Canonical HNF basis of the lattice spanned by ``rows`` and diag(moduli).

    Optional ``tags`` are carried through every row operation (with their own
    ``tag_moduli``); if ``rows[i] = f(tags[i])`` for an additive map f, the
    returned tags satisfy the same relation for the returned basis rows.
    Returns ``(basis, basis_tags)``.
    """
    k = len(moduli)
    track = tags is not None
    active = [_vals(r, moduli) for r in rows]
    atags = [_vals(t, tag_moduli) for t in tags] if track else None
    zero_tag = [0] * len(tag_moduli) if track else None
    basis, btags = [], []

    def combine(a, b, f, mods):
        return [(x - f * y) % m for x, y, m in zip(a, b, mods)]

    for c in range(k):
        m = moduli[c]
        best, best_v = None, None
        for idx, r in enumerate(active):
            if r[c]:
                v = valuation(r[c], p)
                if best is None or v < best_v:
                    best, best_v = idx, v
                    if v == 0:
                        break
        if best is None:
            row = [0] * k
            row[c] = m
            basis.append(row)
            btags.append(list(zero_tag) if track else None)
            continue
        piv = active.pop(best)
        ptag = atags.pop(best) if track else None
        d = p ** best_v
        inv = pow(piv[c] // d, -1, m)
        piv = [(x * inv) % mm for x, mm in zip(piv, moduli)]
        if track:
            ptag = [(x * inv) % mm for x, mm in zip(ptag, tag_moduli)]
        new_active, new_tags = [], []
        for idx, r in enumerate(active):
            if r[c]:
                f = r[c] // d
                r = combine(r, piv, f, moduli)
                if track:
                    atags[idx] = combine(atags[idx], ptag, f, tag_moduli)
            if any(r):
                new_active.append(r)
                if track:
                    new_tags.append(atags[idx])
        rel = [(x * (m // d)) % mm for x, mm in zip(piv, moduli)]
        if any(rel):
            new_active.append(rel)
            if track:
                new_tags.append([(x * (m // d)) % mm for x, mm in zip(ptag, tag_moduli)])
        active = new_active
        atags = new_tags if track else None
        piv[c] = d
        basis.append(piv)
        btags.append(ptag)

    # reduce entries right of each pivot modulo the pivot of their column
    for j in range(k):
        dj = basis[j][j]
        for i in range(j):
            f = basis[i][j] // dj
            if f:
                basis[i] = [basis[i][t] if t < j else (basis[i][t] - f * basis[j][t]) for t in range(k)]
                basis[i] = [x if t <= j else x % moduli[t] for t, x in enumerate(basis[i])]
                if track:
                    btags[i] = combine(btags[i], btags[j], f, tag_moduli)
    return basis, (btags if track else None)


def reduce_vector(vec, basis, moduli, p, btags=None, tag_moduli=None):
    """Reduce ``vec`` by an echelon basis.

    Returns ``(ok, tag)``: ``ok`` tells whether vec lies in the lattice and
    ``tag`` accumulates the carried tags of the rows used.
    """
    vec = _vals(vec, moduli)
    tag = [0] * len(tag_moduli) if btags is not None else None
    for c in range(len(moduli)):
        x = vec[c] % moduli[c]
        if not x:
            continue
        d = basis[c][c]
        if x % d:
            return False, tag
        f = x // d
        vec = [(a - f * b) % m for a, b, m in zip(vec, basis[c], moduli)]
        if btags is not None:
            tag = [(a + f * b) % m for a, b, m in zip(tag, btags[c], tag_moduli)]
    return True, tag


# -- subgroups ---------------------------------------------------------------


@dataclass(frozen=True)
class Subgroup:
    shape: GroupShape
    basis: tuple

    @classmethod
    def from_diagonal(cls, shape, diag):
        k = shape.rank
        return cls(shape, tuple(tuple(diag[i] if j == i else 0 for j in range(k)) for i in range(k)))

    @cached_property
    def order(self) -> int:
        o = 1
        for i, m in enumerate(self.shape.moduli):
            o *= m // self.basis[i][i]
        return o

    @cached_property
    def generators(self) -> tuple:
        """Nonzero canonical rows as group elements."""
        return tuple(Element(self.shape, row) for row in self.basis
                     if any(v % m for v, m in zip(row, self.shape.moduli)))

    def __contains__(self, x) -> bool:
        if isinstance(x, Element) and x.shape != self.shape:
            raise ValueError("element and subgroup live in different groups")
        coords = x.coords if isinstance(x, Element) else tuple(x)
        ok, _ = reduce_vector(coords, self.basis, self.shape.moduli, self.shape.p)
        return ok

    def issubset(self, other: "Subgroup") -> bool:
        _same(self, other)
        return all(g in other for g in self.generators)

    def elements(self) -> frozenset:
        """Explicit element set (brute force; small groups only)."""
        G = self.shape
        out = set()
        for coeffs in product(*[range(G.moduli[i] // self.basis[i][i]) for i in range(G.rank)]):
            v = [0] * G.rank
            for c, row in zip(coeffs, self.basis):
                for t in range(G.rank):
                    v[t] += c * row[t]
            out.add(Element(G, v))
        return frozenset(out)

    def sort_key(self) -> tuple:
        return tuple(v for row in self.basis for v in row)

    def to_json(self) -> dict:
        return {"shape": self.shape.to_json(), "basis": [list(r) for r in self.basis]}

    def __repr__(self):
        gens = ";".join(repr(g) for g in self.generators) or "0"
        return f"<{gens}> in {self.shape} (order {self.order})"


def _same(*objs):
    shape = objs[0].shape
    for o in objs[1:]:
        if o.shape != shape:
            raise ValueError("objects live in different groups")
    return shape


def span(shape: GroupShape, gens) -> Subgroup:
    rows = []
    for g in gens:
        if isinstance(g, Element):
            if g.shape != shape:
                raise ValueError("generator lives in a different group")
            rows.append(g.coords)
        else:
            rows.append(tuple(g))
    basis, _ = echelon(rows, shape.moduli, shape.p)
    return Subgroup(shape, tuple(tuple(r) for r in basis))


def trivial(shape: GroupShape) -> Subgroup:
    return span(shape, [])


def whole(shape: GroupShape) -> Subgroup:
    return Subgroup.from_diagonal(shape, [1] * shape.rank)


def contains(X: Subgroup, x: Element) -> bool:
    return x in X


def join(X: Subgroup, Y: Subgroup) -> Subgroup:
    shape = _same(X, Y)
    return span(shape, X.generators + Y.generators)


def meet(X: Subgroup, Y: Subgroup) -> Subgroup:
    """X cap Y, read off the echelon form of {(x,x)} + {(y,0)} in G + G."""
    shape = _same(X, Y)
    k = shape.rank
    rows = [g.coords + g.coords for g in X.generators]
    rows += [h.coords + (0,) * k for h in Y.generators]
    basis, _ = echelon(rows, shape.moduli + shape.moduli, shape.p)
    return span(shape, [row[k:] for row in basis[k:]])


def index(X: Subgroup, Y: Subgroup) -> int:
    """[Y : X] for X contained in Y."""
    if not X.issubset(Y):
        raise ValueError("index requires X to be a subgroup of Y")
    return Y.order // X.order


def multiple(X: Subgroup, k: int) -> Subgroup:
    """p^k X."""
    m = X.shape.p ** k
    return span(X.shape, [m * g for g in X.generators])


def socle(X: Subgroup, k: int) -> Subgroup:
    """X[p^k]."""
    from .core import section

    return meet(X, section(X.shape, "pk_socle", k))


def quotient_type(Y: Subgroup, X: Subgroup) -> tuple:
    """Exponent partition of Y/X, from the orders of p^i(Y/X) = (p^i Y + X)/X."""
    if not X.issubset(Y):
        raise ValueError("quotient_type requires X to be a subgroup of Y")
    p = Y.shape.p
    logs = []
    i = 0
    while True:
        o = join(multiple(Y, i), X).order // X.order
        logs.append(valuation(o, p) if o > 1 else 0)
        if o == 1:
            break
        i += 1
    # logs[i] - logs[i+1] = number of cyclic factors of order > p^i
    at_least = [logs[i] - logs[i + 1] for i in range(len(logs) - 1)]
    parts = []
    for e in range(len(at_least), 0, -1):
        exact = at_least[e - 1] - (at_least[e] if e < len(at_least) else 0)
        parts.extend([e] * exact)
    return tuple(parts)


def commensurability_defect(X: Subgroup, Y: Subgroup) -> tuple:
    Z = meet(X, Y)
    return X.order // Z.order, Y.order // Z.order


def image(phi, X: Subgroup) -> Subgroup:
    """phi(X) for a homomorphism defined on X's ambient group."""
    if phi.domain != X.shape:
        raise ValueError("homomorphism domain differs from the subgroup's group")
    return span(phi.codomain, [phi(g) for g in X.generators])


# -- G(alpha) ----------------------------------------------------------------


@dataclass(frozen=True)
class AlphaSequence:
    """Strictly increasing sequence over N with INF absorbing.

    Stored without trailing INF entries; every index past the stored
    entries reads as INF.
    """

    entries: tuple

    def __post_init__(self):
        ents = tuple(INF if (e == INF or e == "inf") else int(e) for e in self.entries)
        seen_inf = False
        for a, b in zip(ents, ents[1:]):
            if a == INF:
                seen_inf = True
            if seen_inf and b != INF:
                raise ValueError("INF must be absorbing in an alpha sequence")
            if a != INF and b != INF and b <= a:
                raise ValueError(f"alpha sequence must strictly increase: {ents}")
        if any(e != INF and e < 0 for e in ents):
            raise ValueError("alpha entries must be non-negative")
        while ents and ents[-1] == INF:
            ents = ents[:-1]
        object.__setattr__(self, "entries", ents)

    def __getitem__(self, n: int):
        return self.entries[n] if n < len(self.entries) else INF

    def padded(self, length: int) -> tuple:
        return tuple(self[n] for n in range(length))

    def __repr__(self):
        return "(" + ",".join(str(e) for e in self.entries + (INF,)) + ",...)"


def g_alpha(G: GroupShape, alpha) -> Subgroup:
    """{x in G : p^n x in p^(alpha_n) G for all n}, with p^INF G = 0.

    Heights in a direct sum of cyclics are coordinatewise minima, so the
    condition splits: coordinate i must have valuation at least
    max_n (min(alpha_n, lam_i) - n).
    """
    if not isinstance(alpha, AlphaSequence):
        alpha = AlphaSequence(tuple(alpha))
    diag = []
    for l in G.lam:
        need = 0
        for n in range(l + 1):
            a = alpha[n]
            need = max(need, min(a, l) - n)
        diag.append(G.p ** int(need))
    return Subgroup.from_diagonal(G, diag)


def canonical_alpha(X: Subgroup) -> AlphaSequence:
    """alpha_n = least height of an element of p^n X (INF once p^n X = 0)."""
    G = X.shape
    p = G.p
    out = []
    for n in range(G.length + 1):
        m = p ** n
        hs = [height(m * g) for g in X.generators]
        out.append(min(hs, default=INF))
    return AlphaSequence(tuple(out))


def normalize_alpha(G: GroupShape, alpha) -> AlphaSequence:
    """Least sequence defining the same subgroup as ``alpha``."""
    return canonical_alpha(g_alpha(G, alpha))


def all_alpha_sequences(G: GroupShape):
    """Every alpha sequence with finite entries below the exponent length."""
    L = G.length
    for mask in range(1 << L):
        vals = [v for v in range(L) if mask >> v & 1]
        # any subset in increasing order, placed as a prefix
        yield AlphaSequence(tuple(vals))


# -- enumeration -------------------------------------------------------------


def _enum_bases(moduli, p):
    """All canonical bases for the group with the given moduli."""
    k = len(moduli)
    if k == 0:
        yield ()
        return
    m0 = moduli[0]
    lam0 = valuation(m0, p)
    tail = moduli[1:]
    for tb in _enum_bases(tail, p):
        ds = [tb[j][j] for j in range(k - 1)]
        for v in range(lam0 + 1):
            d0 = p ** v
            f = m0 // d0
            for t in product(*[range(d) for d in ds]):
                ok, _ = reduce_vector([f * x for x in t], tb, tail, p)
                if ok:
                    head = (d0,) + t
                    yield (head,) + tuple((0,) + r for r in tb)


def enumerate_subgroups(G: GroupShape, bound: int = DEFAULT_ENUMERATION_BOUND):
    """Every subgroup of G once, in lexicographic order of canonical bases."""
    if G.order > bound:
        raise EnumerationBoundError(f"|G| = {G.order} exceeds the enumeration bound {bound}")
    bases = sorted(_enum_bases(G.moduli, G.p), key=lambda b: tuple(v for r in b for v in r))
    return iter([Subgroup(G, b) for b in bases])


def subgroup_from_json(obj) -> Subgroup:
    from .core import group_from_json

    G = group_from_json(obj["shape"])
    S = span(G, [tuple(r) for r in obj["basis"]])
    if S.basis != tuple(tuple(int(v) for v in r) for r in obj["basis"]):
        raise ValueError("basis is not in canonical form")
    return S


def random_subgroup(G: GroupShape, rng, max_gens: int = 2) -> Subgroup:
    """Span of 0..max_gens uniform random elements."""
    from .core import random_element

    n = int(rng.integers(0, max_gens + 1))
    return span(G, [random_element(G, rng) for _ in range(n)])


def random_element_of(X: Subgroup, rng) -> Element:
    """Uniform element of X via random coefficients on the canonical basis."""
    G = X.shape
    v = [0] * G.rank
    for i, (row, m) in enumerate(zip(X.basis, G.moduli)):
        c = int(rng.integers(0, m // row[i]))
        for t in range(G.rank):
            v[t] += c * row[t]
    return Element(G, v)
