"""Homomorphisms between finite abelian p-groups as constrained integer matrices.

Convention: maps act on the left of column vectors, ``(phi x)_i =
sum_j a_ij x_j mod p^mu_i``.  Entry ``a_ij`` must be divisible by
``p^max(0, mu_i - lam_j)`` for the map to be well defined.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from functools import lru_cache
from itertools import product

import numpy as np

from . import _kernels
from .core import Element, GroupShape
from .sublattice import EnumerationBoundError, Subgroup, echelon, reduce_vector, span

DEFAULT_ENDO_BOUND = 2 ** 20


class HomomorphismError(ValueError):
    pass


def _divisor(p, mu_i, lam_j):
    return p ** max(0, mu_i - lam_j)


@dataclass(frozen=True)
class Homomorphism:
    domain: GroupShape
    codomain: GroupShape
    matrix: tuple

    def __call__(self, x: Element) -> Element:
        return apply(self, x)

    def __add__(self, other):
        return add_homs(self, other)

    def __sub__(self, other):
        return add_homs(self, scale_hom(-1, other))

    def __neg__(self):
        return scale_hom(-1, self)

    def __matmul__(self, other):
        return compose(self, other)

    @property
    def is_endo(self) -> bool:
        return self.domain == self.codomain

    def columns(self) -> list:
        """Images of the standard generators e_j."""
        return [Element(self.codomain, col) for col in zip(*self.matrix)] if self.matrix else \
            [self.codomain.zero() for _ in range(self.domain.rank)]

    def to_json(self) -> dict:
        return {"domain": self.domain.to_json(), "codomain": self.codomain.to_json(),
                "matrix": [list(r) for r in self.matrix]}

    def __repr__(self):
        return f"Hom({self.domain}->{self.codomain}, {[list(r) for r in self.matrix]})"


def make_hom(domain: GroupShape, codomain: GroupShape, matrix) -> Homomorphism:
    """Validate and reduce a matrix into a Homomorphism."""
    rows = [list(r) for r in matrix]
    if len(rows) != codomain.rank or any(len(r) != domain.rank for r in rows):
        raise HomomorphismError(
            f"matrix must be {codomain.rank} x {domain.rank} for {domain} -> {codomain}")
    p = domain.p
    if codomain.p != p:
        raise HomomorphismError("domain and codomain have different primes")
    out = []
    for i, (r, mu) in enumerate(zip(rows, codomain.lam)):
        red = []
        for j, (a, l) in enumerate(zip(r, domain.lam)):
            a = int(a) % p ** mu
            if a % _divisor(p, mu, l):
                raise HomomorphismError(
                    f"entry ({i},{j}) = {a} must be divisible by {_divisor(p, mu, l)}")
            red.append(a)
        out.append(tuple(red))
    return Homomorphism(domain, codomain, tuple(out))


def _unchecked(domain, codomain, rows) -> Homomorphism:
    mods = codomain.moduli
    return Homomorphism(domain, codomain, tuple(tuple(int(a) % m for a in r) for r, m in zip(rows, mods)))


def _check_divisibility(phi: Homomorphism):
    p = phi.domain.p
    for r, mu in zip(phi.matrix, phi.codomain.lam):
        for a, l in zip(r, phi.domain.lam):
            assert a % _divisor(p, mu, l) == 0, "divisibility constraint violated"
    return phi


def identity(G: GroupShape) -> Homomorphism:
    k = G.rank
    return _unchecked(G, G, [[int(i == j) for j in range(k)] for i in range(k)])


def zero_hom(domain: GroupShape, codomain: GroupShape) -> Homomorphism:
    return _unchecked(domain, codomain, [[0] * domain.rank for _ in range(codomain.rank)])


def apply(phi: Homomorphism, x: Element) -> Element:
    if x.shape != phi.domain:
        raise ValueError("element is not in the domain")
    return Element(phi.codomain, tuple(sum(a * c for a, c in zip(row, x.coords)) for row in phi.matrix))


def compose(phi: Homomorphism, psi: Homomorphism) -> Homomorphism:
    """phi o psi."""
    if psi.codomain != phi.domain:
        raise ValueError("shapes do not compose")
    n = psi.codomain.rank
    rows = [[sum(phi.matrix[i][l] * psi.matrix[l][j] for l in range(n))
             for j in range(psi.domain.rank)] for i in range(phi.codomain.rank)]
    return _check_divisibility(_unchecked(psi.domain, phi.codomain, rows))


def add_homs(phi: Homomorphism, psi: Homomorphism) -> Homomorphism:
    if (phi.domain, phi.codomain) != (psi.domain, psi.codomain):
        raise ValueError("shape mismatch")
    rows = [[a + b for a, b in zip(r, s)] for r, s in zip(phi.matrix, psi.matrix)]
    return _check_divisibility(_unchecked(phi.domain, phi.codomain, rows))


def scale_hom(m: int, phi: Homomorphism) -> Homomorphism:
    rows = [[m * a for a in r] for r in phi.matrix]
    return _check_divisibility(_unchecked(phi.domain, phi.codomain, rows))


def hom_from_json(obj) -> Homomorphism:
    from .core import group_from_json

    return make_hom(group_from_json(obj["domain"]), group_from_json(obj["codomain"]), obj["matrix"])


# -- solving and automorphisms -----------------------------------------------


def _image_echelon(phi: Homomorphism):
    cols = [c.coords for c in phi.columns()]
    tags = [tuple(int(i == j) for i in range(phi.domain.rank)) for j in range(phi.domain.rank)]
    return echelon(cols, phi.codomain.moduli, phi.codomain.p, tags, phi.domain.moduli)


def preimage(phi: Homomorphism, y: Element):
    """Some x with phi(x) = y, or None."""
    basis, btags = _image_echelon(phi)
    ok, tag = reduce_vector(y.coords, basis, phi.codomain.moduli, phi.codomain.p,
                            btags, phi.domain.moduli)
    return Element(phi.domain, tag) if ok else None


def image_subgroup(phi: Homomorphism) -> Subgroup:
    return span(phi.codomain, phi.columns())


@dataclass(frozen=True)
class AutCertificate:
    hom: Homomorphism
    inverse: Homomorphism

    def verify(self) -> bool:
        G = self.hom.domain
        I = identity(G)
        return compose(self.hom, self.inverse) == I and compose(self.inverse, self.hom) == I

    def inverted(self) -> "AutCertificate":
        return AutCertificate(self.inverse, self.hom)

    def __call__(self, x):
        return apply(self.hom, x)


def is_automorphism(phi: Homomorphism):
    """AutCertificate if phi is bijective, else None (image-span test)."""
    if not phi.is_endo:
        raise ValueError("is_automorphism needs an endomorphism")
    G = phi.domain
    if image_subgroup(phi).order != G.order:
        return None
    cols = []
    for e in G.basis():
        x = preimage(phi, e)
        cols.append(x.coords)
    inv = _unchecked(G, G, [list(r) for r in zip(*cols)] if cols else [])
    cert = AutCertificate(phi, _check_divisibility(inv))
    assert cert.verify()
    return cert


def certify(phi: Homomorphism) -> AutCertificate:
    cert = is_automorphism(phi)
    if cert is None:
        raise HomomorphismError(f"{phi} is not an automorphism")
    return cert


def is_aut_matrix(matrix, G: GroupShape) -> bool:
    """Socle test: phi is bijective iff it is injective on G[p]."""
    return bool(_kernels.aut_mask(np.asarray([matrix], dtype=np.int64).reshape(1, G.rank, G.rank),
                                  G.lam, G.p, use_numba=False)[0]) if G.rank else True


# -- squares and shears ------------------------------------------------------


@dataclass(frozen=True)
class SquareMaps:
    """A + A with copy one on the even and copy two on the odd coordinates."""

    A: GroupShape
    G: GroupShape
    pi1: Homomorphism
    pi2: Homomorphism
    rho1: Homomorphism
    rho2: Homomorphism
    kappa1: Homomorphism
    kappa2: Homomorphism
    sigma: Homomorphism

    @property
    def copies(self):
        k = self.A.rank
        return tuple(range(0, 2 * k, 2)), tuple(range(1, 2 * k, 2))

    def block(self, blocks) -> Homomorphism:
        """Endomorphism of G from a 2x2 array of endomorphisms of A."""
        k = self.A.rank
        c = self.copies
        rows = [[0] * (2 * k) for _ in range(2 * k)]
        for bi in range(2):
            for bj in range(2):
                m = blocks[bi][bj].matrix
                for i in range(k):
                    for j in range(k):
                        rows[c[bi][i]][c[bj][j]] = m[i][j]
        return _unchecked(self.G, self.G, rows)

    def blocks_of(self, gamma: Homomorphism):
        """gamma_ij = pi_i o gamma o rho_j."""
        pis, rhos = (self.pi1, self.pi2), (self.rho1, self.rho2)
        return [[compose(pis[i], compose(gamma, rhos[j])) for j in range(2)] for i in range(2)]


def square_shape(A: GroupShape) -> GroupShape:
    return GroupShape(A.p, tuple(l for l in A.lam for _ in range(2)))


def as_square(G: GroupShape):
    """A with G = A + A in the interleaved layout, or None."""
    lam = G.lam
    if len(lam) % 2 or lam[0::2] != lam[1::2]:
        return None
    return GroupShape(G.p, lam[0::2])


@lru_cache(maxsize=None)
def square_maps(A: GroupShape) -> SquareMaps:
    G = square_shape(A)
    k = A.rank
    ev, od = tuple(range(0, 2 * k, 2)), tuple(range(1, 2 * k, 2))

    def proj(idx):
        return _unchecked(G, A, [[int(j == idx[i]) for j in range(2 * k)] for i in range(k)])

    def inj(idx):
        return _unchecked(A, G, [[int(i == idx[j]) for j in range(k)] for i in range(2 * k)])

    pi1, pi2, rho1, rho2 = proj(ev), proj(od), inj(ev), inj(od)
    swap = [[0] * (2 * k) for _ in range(2 * k)]
    for a, b in zip(ev, od):
        swap[a][b] = swap[b][a] = 1
    return SquareMaps(A, G, pi1, pi2, rho1, rho2, compose(rho1, pi1), compose(rho2, pi2),
                      _unchecked(G, G, swap))


def shear(G: GroupShape, v_part, gamma: Homomorphism) -> AutCertificate:
    """phi_gamma(v + w) = v + gamma(v) + w for G = V + W split by coordinates."""
    v_part = tuple(sorted(v_part))
    w_part = tuple(i for i in range(G.rank) if i not in v_part)
    if len(set(v_part)) != len(v_part) or any(not 0 <= i < G.rank for i in v_part):
        raise ValueError("invalid coordinate partition")
    if gamma.domain != G.sub_shape(v_part) or gamma.codomain != G.sub_shape(w_part):
        raise ValueError("gamma must map the V-part to the W-part")

    def mat(g):
        rows = [[int(i == j) for j in range(G.rank)] for i in range(G.rank)]
        for a, wi in enumerate(w_part):
            for b, vj in enumerate(v_part):
                rows[wi][vj] = g.matrix[a][b]
        return _check_divisibility(_unchecked(G, G, rows))

    return AutCertificate(mat(gamma), mat(scale_hom(-1, gamma)))


# -- generators --------------------------------------------------------------


def endo_additive_generators(G: GroupShape) -> list:
    """eps_ij: e_j -> p^max(0, lam_i - lam_j) e_i, in row-major (i, j) order."""
    k, p = G.rank, G.p
    out = []
    for i in range(k):
        for j in range(k):
            rows = [[0] * k for _ in range(k)]
            rows[i][j] = _divisor(p, G.lam[i], G.lam[j])
            out.append(_unchecked(G, G, rows))
    return out


def unit_generators(p: int, l: int) -> list:
    """Generators of the unit group of Z/p^l."""
    if p == 2:
        return {1: [1], 2: [3]}.get(l, [2 ** l - 1, 5])
    m = p ** l
    for g in range(2, p):
        if all(pow(g, (p - 1) // q, p) != 1 for q in _prime_factors(p - 1)):
            if l > 1 and pow(g, p - 1, p * p) == 1:
                g += p
            return [g % m]
    return [1 % m]  # p = 2 handled above; p = 3 has g = 2


def _prime_factors(n):
    out, f = [], 2
    while f * f <= n:
        if n % f == 0:
            out.append(f)
            while n % f == 0:
                n //= f
        f += 1
    if n > 1:
        out.append(n)
    return out


@lru_cache(maxsize=None)
def aut_generators(G: GroupShape) -> tuple:
    """Unit scalings, equal-exponent transpositions and elementary shears."""
    k, p = G.rank, G.p
    out = []

    def ident():
        return [[int(i == j) for j in range(k)] for i in range(k)]

    for i, l in enumerate(G.lam):
        m = p ** l
        for u in unit_generators(p, l):
            a, b = ident(), ident()
            a[i][i], b[i][i] = u, pow(u, -1, m)
            out.append(AutCertificate(_unchecked(G, G, a), _unchecked(G, G, b)))
    for i in range(k):
        for j in range(i + 1, k):
            if G.lam[i] == G.lam[j]:
                t = ident()
                t[i][i] = t[j][j] = 0
                t[i][j] = t[j][i] = 1
                h = _unchecked(G, G, t)
                out.append(AutCertificate(h, h))
    for i in range(k):
        for j in range(k):
            if i != j:
                c = _divisor(p, G.lam[i], G.lam[j])
                a, b = ident(), ident()
                a[i][j], b[i][j] = c, -c
                out.append(AutCertificate(_unchecked(G, G, a), _unchecked(G, G, b)))
    return tuple(out)


# -- counting, enumeration, sampling -----------------------------------------


def end_order(G: GroupShape) -> int:
    return G.p ** sum(min(a, b) for a in G.lam for b in G.lam)


def aut_order(G: GroupShape) -> int:
    """Closed-form |Aut(G)| for a direct sum of cyclic p-groups."""
    p = G.p
    e = sorted(G.lam)
    n = len(e)
    d = [max(l for l in range(1, n + 1) if e[l - 1] == e[k - 1]) for k in range(1, n + 1)]
    c = [min(l for l in range(1, n + 1) if e[l - 1] == e[k - 1]) for k in range(1, n + 1)]
    out = 1
    for k in range(1, n + 1):
        out *= p ** d[k - 1] - p ** (k - 1)
    for j in range(1, n + 1):
        out *= p ** (e[j - 1] * (n - d[j - 1]))
    for i in range(1, n + 1):
        out *= p ** ((e[i - 1] - 1) * (n - c[i - 1] + 1))
    return out


def _entry_choices(G: GroupShape):
    p = G.p
    return [[list(range(0, p ** mi, _divisor(p, mi, lj))) for lj in G.lam] for mi in G.lam]


def endo_array(G: GroupShape, bound: int = DEFAULT_ENDO_BOUND) -> np.ndarray:
    """All endomorphism matrices as an (|End|, k, k) array in enumeration order."""
    total = end_order(G)
    if total > bound:
        raise EnumerationBoundError(f"|End(G)| = {total} exceeds the bound {bound}")
    k = G.rank
    if k == 0:
        return np.zeros((1, 0, 0), dtype=np.int64)
    flat = [np.asarray(c, dtype=np.int64) for row in _entry_choices(G) for c in row]
    grids = np.meshgrid(*flat, indexing="ij")
    return np.stack([g.ravel() for g in grids], axis=1).reshape(-1, k, k)


def enumerate_endos(G: GroupShape, bound: int = DEFAULT_ENDO_BOUND):
    total = end_order(G)
    if total > bound:
        raise EnumerationBoundError(f"|End(G)| = {total} exceeds the bound {bound}")
    k = G.rank
    flat = [c for row in _entry_choices(G) for c in row]
    for entries in product(*flat):
        yield Homomorphism(G, G, tuple(tuple(entries[i * k:(i + 1) * k]) for i in range(k)))


def aut_array(G: GroupShape, bound: int = DEFAULT_ENDO_BOUND) -> np.ndarray:
    mats = endo_array(G, bound)
    return mats[_kernels.aut_mask(mats, G.lam, G.p)]


def enumerate_autos(G: GroupShape, bound: int = DEFAULT_ENDO_BOUND):
    """Automorphisms with certificates, in endomorphism enumeration order."""
    for m in aut_array(G, bound):
        yield certify(Homomorphism(G, G, tuple(tuple(int(v) for v in r) for r in m)))


def _rng(seed):
    return seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)


def random_endo(G: GroupShape, seed) -> Homomorphism:
    rng = _rng(seed)
    p = G.p
    rows = []
    for mi in G.lam:
        row = []
        for lj in G.lam:
            step = _divisor(p, mi, lj)
            row.append(int(rng.integers(0, p ** mi // step)) * step)
        rows.append(row)
    return Homomorphism(G, G, tuple(tuple(r) for r in rows))


def random_hom(domain: GroupShape, codomain: GroupShape, seed) -> Homomorphism:
    rng = _rng(seed)
    p = domain.p
    rows = []
    for mi in codomain.lam:
        rows.append(tuple(int(rng.integers(0, p ** mi // _divisor(p, mi, lj))) * _divisor(p, mi, lj)
                          for lj in domain.lam))
    return Homomorphism(domain, codomain, tuple(rows))


def random_auto(G: GroupShape, seed, max_tries: int = 10_000) -> AutCertificate:
    rng = _rng(seed)
    for _ in range(max_tries):
        phi = random_endo(G, rng)
        if is_aut_matrix(phi.matrix, G):
            return certify(phi)
    raise RuntimeError("rejection sampling for an automorphism did not terminate")


# -- walking Aut(G) through generator words ----------------------------------


class AutWalk:
    """Breadth-first enumeration of the group generated by aut_generators.

    Discovered automorphisms are memoized so repeated searches over the same
    group share work.  Entries are (matrix, inverse matrix) tuples.
    """

    def __init__(self, G: GroupShape):
        self.G = G
        I = identity(G)
        self.found = [(I.matrix, I.matrix)]
        self.seen = {I.matrix}
        self.queue = deque([0])
        self.gens = aut_generators(G)
        self.complete = False

    def _step(self) -> bool:
        while self.queue:
            idx = self.queue.popleft()
            m, minv = self.found[idx]
            cur = Homomorphism(self.G, self.G, m)
            cur_inv = Homomorphism(self.G, self.G, minv)
            added = False
            for g in self.gens:
                nm = compose(g.hom, cur).matrix
                if nm not in self.seen:
                    self.seen.add(nm)
                    self.found.append((nm, compose(cur_inv, g.inverse).matrix))
                    self.queue.append(len(self.found) - 1)
                    added = True
            if added:
                return True
        self.complete = True
        return False

    def __iter__(self):
        i = 0
        while True:
            while i >= len(self.found):
                if not self._step():
                    return
            yield self.found[i]
            i += 1

    def certificate(self, i) -> AutCertificate:
        m, minv = self.found[i]
        return AutCertificate(Homomorphism(self.G, self.G, m), Homomorphism(self.G, self.G, minv))


@lru_cache(maxsize=64)
def aut_walk(G: GroupShape) -> AutWalk:
    return AutWalk(G)


def generated_aut_group(G: GroupShape, bound: int = DEFAULT_ENDO_BOUND) -> set:
    """All matrices of the group generated by aut_generators (closure)."""
    walk = aut_walk(G)
    out = set()
    for m, _ in walk:
        out.add(m)
        if len(out) > bound:
            raise EnumerationBoundError("automorphism closure exceeds the bound")
    return out
