"""Inertia quotients, automorphism-sum decompositions, the square hull and
the truncated swap family."""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product

import numpy as np

from . import _kernels
from .core import GroupShape
from .errors import PropertyViolation, SearchInconclusive
from .homset import (DEFAULT_ENDO_BOUND, AutCertificate, Homomorphism, _unchecked, add_homs,
                     as_square, aut_array, aut_walk, certify, compose, end_order, endo_array,
                     identity, is_aut_matrix, random_auto, random_endo, scale_hom, square_maps,
                     zero_hom)
from .sublattice import Subgroup, image, join, quotient_type, span


@dataclass(frozen=True)
class InertiaQuotient:
    order: int
    type: tuple

    def to_json(self):
        return {"order": self.order, "type": list(self.type)}


def hat(phi: Homomorphism, X: Subgroup) -> InertiaQuotient:
    """(phi(X) + X) / X."""
    if phi.domain != X.shape or phi.codomain != X.shape:
        raise ValueError("phi must be an endomorphism of the subgroup's ambient group")
    Y = join(image(phi, X), X)
    return InertiaQuotient(Y.order // X.order, quotient_type(Y, X))


# -- profiles ----------------------------------------------------------------


@dataclass
class InertiaProfile:
    subgroup: Subgroup
    mode: str  # "endo" or "auto"
    strategy: str  # "exhaustive" or "sampled"
    records: list  # (map id, quotient order)
    seed: int | None = None
    samples: int | None = None

    @property
    def sup(self) -> int:
        return max((o for _, o in self.records), default=1)

    @property
    def exact(self) -> bool:
        return self.strategy == "exhaustive"

    def to_json(self):
        out = {"subgroup": self.subgroup.to_json(), "mode": self.mode, "strategy": self.strategy,
               "sup": self.sup, "exact": self.exact,
               "records": [[i, o] for i, o in self.records]}
        if self.strategy == "sampled":
            out["seed"], out["samples"] = self.seed, self.samples
        return out


def inertia_profile(X: Subgroup, mode: str = "endo", strategy: str = "exhaustive",
                    seed: int = 0, samples: int = 100,
                    bound: int = DEFAULT_ENDO_BOUND) -> InertiaProfile:
    G = X.shape
    if mode not in ("endo", "auto"):
        raise ValueError(f"unknown mode {mode!r}")
    if strategy == "exhaustive":
        mats = endo_array(G, bound) if mode == "endo" else aut_array(G, bound)
        maps = (Homomorphism(G, G, tuple(tuple(int(v) for v in r) for r in m)) for m in mats)
    elif strategy == "sampled":
        rng = np.random.default_rng(seed)
        if mode == "endo":
            maps = (random_endo(G, rng) for _ in range(samples))
        else:
            maps = (random_auto(G, rng).hom for _ in range(samples))
    else:
        raise ValueError(f"unknown strategy {strategy!r}")
    records = [(i, hat(phi, X).order) for i, phi in enumerate(maps)]
    if strategy == "sampled":
        return InertiaProfile(X, mode, strategy, records, seed, samples)
    return InertiaProfile(X, mode, strategy, records)


@dataclass(frozen=True)
class SumBound:
    lhs: int
    rhs: int
    holds: bool


def check_sum_bound(parts, X: Subgroup) -> SumBound:
    """|gamma^(X)| against the product of the |phi_i^(X)| for gamma = sum of parts."""
    if not parts:
        raise ValueError("need at least one part")
    gamma = parts[0]
    for phi in parts[1:]:
        gamma = add_homs(gamma, phi)
    lhs = hat(gamma, X).order
    rhs = 1
    for phi in parts:
        rhs *= hat(phi, X).order
    return SumBound(lhs, rhs, lhs <= rhs)


# -- decompositions ----------------------------------------------------------


@dataclass(frozen=True)
class AutDecomposition:
    target: Homomorphism
    parts: tuple  # AutCertificate

    def verify(self) -> bool:
        total = zero_hom(self.target.domain, self.target.codomain)
        for c in self.parts:
            if not c.verify():
                return False
            total = add_homs(total, c.hom)
        return total == self.target

    def to_json(self):
        return {"target": [list(r) for r in self.target.matrix],
                "parts": [{"matrix": [list(r) for r in c.hom.matrix],
                           "inverse": [list(r) for r in c.inverse.matrix]} for c in self.parts]}


def four_blocks(gamma: Homomorphism):
    """The four block maps and their inverses for an endomorphism of A + A.

    With gamma = [[g11, g12], [g21, g22]] in left-action block form:
    [[1,0],[g21,1]] + [[-1,g12],[0,-1]] + [[g11,1],[1,0]] + [[0,-1],[-1,g22]].
    """
    A = as_square(gamma.domain)
    if A is None or not gamma.is_endo:
        raise ValueError("four-automorphism decomposition needs an endomorphism of a square A + A")
    sm = square_maps(A)
    (g11, g12), (g21, g22) = sm.blocks_of(gamma)
    one, zero = identity(A), zero_hom(A, A)
    neg = scale_hom(-1, one)
    forward = [
        [[one, zero], [g21, one]],
        [[neg, g12], [zero, neg]],
        [[g11, one], [one, zero]],
        [[zero, neg], [neg, g22]],
    ]
    backward = [
        [[one, zero], [scale_hom(-1, g21), one]],
        [[neg, scale_hom(-1, g12)], [zero, neg]],
        [[zero, one], [one, scale_hom(-1, g11)]],
        [[scale_hom(-1, g22), neg], [neg, zero]],
    ]
    return sm, forward, backward


def four_auto_decompose(gamma: Homomorphism) -> AutDecomposition:
    sm, forward, backward = four_blocks(gamma)
    parts = tuple(AutCertificate(sm.block(f), sm.block(b)) for f, b in zip(forward, backward))
    dec = AutDecomposition(gamma, parts)
    if not dec.verify():
        raise PropertyViolation("four-automorphism identity failed")
    return dec


DEFAULT_TWO_AUTO_BUDGET = 10 ** 6


def _reduced(G, m):
    return tuple(tuple(int(v) % mod for v in r) for r, mod in zip(m, G.moduli))


def two_auto_decompose(gamma: Homomorphism, budget: int = DEFAULT_TWO_AUTO_BUDGET,
                       strict_odd: bool = True) -> AutDecomposition | None:
    """gamma = alpha + (gamma - alpha) with both parts automorphisms.

    Candidates alpha run through Aut(G) breadth-first along generator words.
    ``None`` means proven absence: the walk covered the whole group.  For
    odd p that contradicts the two-automorphism theorem and raises
    PropertyViolation unless ``strict_odd`` is off.  Exceeding ``budget``
    raises SearchInconclusive.
    """
    G = gamma.domain
    if not gamma.is_endo:
        raise ValueError("two-automorphism decomposition needs an endomorphism")
    walk = aut_walk(G)
    tried = 0
    g = np.asarray(gamma.matrix, dtype=np.int64).reshape(G.rank, G.rank)
    for m, minv in walk:
        tried += 1
        if tried > budget:
            raise SearchInconclusive(f"no decomposition within {budget} candidates")
        diff = g - np.asarray(m, dtype=np.int64).reshape(G.rank, G.rank)
        if is_aut_matrix(diff, G):
            alpha = AutCertificate(Homomorphism(G, G, m), Homomorphism(G, G, minv))
            beta = certify(Homomorphism(G, G, _reduced(G, diff)))
            dec = AutDecomposition(gamma, (alpha, beta))
            assert dec.verify()
            return dec
    if G.p != 2 and strict_odd:
        raise PropertyViolation(f"{gamma} is not a sum of two automorphisms")
    return None


def two_auto_sweep(G: GroupShape, bound: int = DEFAULT_ENDO_BOUND, chunk: int = 1 << 16,
                   passes: int = 64):
    """Literal sweep over End(G): matrices that are not a sum of two automorphisms.

    Batched: ``passes`` automorphisms (a fixed pseudo-random selection, so
    they differ modulo the radical) are tried against every endomorphism at
    once; each survivor is then tested against all of Aut(G).
    """
    mats = endo_array(G, bound)
    autos = aut_array(G, bound)
    probe = autos[np.random.default_rng(0).permutation(len(autos))[:passes]]
    mods = np.asarray(G.moduli, dtype=np.int64)[None, :, None]
    bad = []
    for start in range(0, len(mats), chunk):
        und = mats[start:start + chunk]
        for a in probe:
            if not len(und):
                break
            und = und[~_kernels.aut_mask((und - a[None]) % mods, G.lam, G.p)]
        for g in und:
            if not _kernels.aut_mask((g[None] - autos) % mods, G.lam, G.p).any():
                bad.append(g)
    return bad


# -- reduced sweep via the radical ---------------------------------------------


def _poly_mod(a, b, p):
    """Remainder of a by monic b over F_p (coefficients low to high)."""
    a = list(a)
    db = len(b) - 1
    while len(a) - 1 >= db and any(a):
        if a[-1] == 0:
            a.pop()
            continue
        f = a[-1]
        shift = len(a) - 1 - db
        for i, c in enumerate(b):
            a[shift + i] = (a[shift + i] - f * c) % p
        a.pop()
    while a and a[-1] == 0:
        a.pop()
    return a


def _monic(deg, p):
    for low in product(range(p), repeat=deg):
        yield tuple(low) + (1,)


def _invariant_factor_chains(n, p):
    def rec(prev, remaining):
        if remaining == 0:
            yield ()
            return
        lo = len(prev) - 1 if prev else 1
        for d in range(lo, remaining + 1):
            for f in _monic(d, p):
                if prev and _poly_mod(f, prev, p):
                    continue
                for rest in rec(f, remaining - d):
                    yield (f,) + rest

    yield from rec(None, n)


def _companion(f, p):
    d = len(f) - 1
    C = [[0] * d for _ in range(d)]
    for i in range(1, d):
        C[i][i - 1] = 1
    for i in range(d):
        C[i][d - 1] = (-f[i]) % p
    return C


def similarity_class_reps(n: int, p: int) -> list:
    """Rational canonical forms: one matrix per conjugacy class of M_n(F_p)."""
    if n == 0:
        return [[]]
    out = []
    for chain in _invariant_factor_chains(n, p):
        M = [[0] * n for _ in range(n)]
        off = 0
        for f in chain:
            C = _companion(f, p)
            for i, row in enumerate(C):
                for j, v in enumerate(row):
                    M[off + i][off + j] = v
            off += len(C)
        out.append(M)
    return out


def radical_class_lifts(G: GroupShape):
    """Endomorphisms covering every Aut-conjugacy class of End(G) modulo its radical.

    End(G) modulo its Jacobson radical is the product of the matrix rings
    M_f(F_p) over the Ulm blocks; each tuple of similarity classes is lifted
    to a block-diagonal endomorphism supported on those blocks.
    """
    blocks = {}
    for i, l in enumerate(G.lam):
        blocks.setdefault(l, []).append(i)
    groups = list(blocks.values())
    reps = [similarity_class_reps(len(idx), G.p) for idx in groups]
    for combo in product(*reps):
        rows = [[0] * G.rank for _ in range(G.rank)]
        for idx, M in zip(groups, combo):
            for a, i in enumerate(idx):
                for b, j in enumerate(idx):
                    rows[i][j] = M[a][b]
        yield _unchecked(G, G, rows)


# -- spanning -------------------------------------------------------------------


def _end_coordinates(G: GroupShape):
    """End(G) as an additive group: shape and per-entry divisors/positions."""
    p = G.p
    entries = [(i, j, min(G.lam[i], G.lam[j]), p ** max(0, G.lam[i] - G.lam[j]))
               for i in range(G.rank) for j in range(G.rank)]
    order = sorted(range(len(entries)), key=lambda t: -entries[t][2])
    shape = GroupShape(p, tuple(entries[t][2] for t in order))
    return shape, [entries[t] for t in order]


def sum_of_autos_spanning(G: GroupShape, bound: int = DEFAULT_ENDO_BOUND) -> bool:
    """Whether the automorphisms additively generate End(G)."""
    if G.rank == 0:
        return True
    E, pos = _end_coordinates(G)
    S = span(E, [])
    for m in aut_array(G, bound):
        v = E.element(tuple(int(m[i][j]) // d for i, j, _, d in pos))
        if v not in S:
            S = span(E, list(S.generators) + [v])
            if S.order == E.order:
                break
    return S.order == end_order(G)


# -- square hull --------------------------------------------------------------


@dataclass(frozen=True)
class HullResult:
    Y: Subgroup
    square: Subgroup
    index: int
    R1: int
    R2: int
    S1: int
    S2: int

    @property
    def bound(self) -> int:
        return self.R1 * self.R2 * self.S1 * self.S2

    @property
    def holds(self) -> bool:
        return self.index <= self.bound

    def to_json(self):
        return {"Y": [list(g.coords) for g in self.Y.generators], "index": self.index,
                "R1": self.R1, "R2": self.R2, "S1": self.S1, "S2": self.S2,
                "bound": self.bound, "holds": self.holds}


def square_hull(X: Subgroup) -> HullResult:
    """Y = pi_1(kappa_1(X) + sigma(kappa_2(X))) with X inside Y + Y."""
    A = as_square(X.shape)
    if A is None:
        raise ValueError("ambient group is not a square A + A")
    sm = square_maps(A)
    Y1 = join(image(sm.kappa1, X), image(compose(sm.sigma, sm.kappa2), X))
    Y = image(sm.pi1, Y1)
    YY = span(X.shape, [sm.rho1(y) for y in Y.generators] + [sm.rho2(y) for y in Y.generators])
    if not X.issubset(YY):
        raise PropertyViolation("X is not contained in Y + Y")
    res = HullResult(Y, YY, YY.order // X.order,
                     hat(sm.kappa1, X).order, hat(sm.kappa2, X).order,
                     hat(compose(sm.sigma, sm.kappa1), X).order,
                     hat(compose(sm.sigma, sm.kappa2), X).order)
    if not res.holds:
        raise PropertyViolation(f"hull index {res.index} exceeds {res.bound}")
    return res


# -- truncated swap family ----------------------------------------------------


@dataclass(frozen=True)
class NooneFamily:
    G: GroupShape
    X: Subgroup
    phis: tuple  # AutCertificate for k = 0..N
    orders: tuple  # |phi_k^(X)|

    note = "direct sum of cyclics truncated at N in place of the torsion completion"

    def to_json(self):
        return {"group": self.G.to_json(), "N": len(self.phis) - 1,
                "table": [{"k": k, "order": o} for k, o in enumerate(self.orders)],
                "note": self.note}


MAX_NOONE_LOG_ORDER = 200


def noone_family(p: int, N: int) -> NooneFamily:
    """B = Z_p + ... + Z_{p^N}, G = B + B, X = 0 + B[p] and the partial swaps phi_k."""
    if N < 0:
        raise ValueError("N must be non-negative")
    A = GroupShape(p, tuple(range(N, 0, -1)))
    G = square_maps(A).G
    if G.log_order > MAX_NOONE_LOG_ORDER:
        raise ValueError(f"N={N} exceeds the size bound")
    k_rank = G.rank
    X = span(G, [G.element(tuple(p ** (G.lam[i] - 1) if i == t else 0 for i in range(k_rank)))
                 for t in range(1, k_rank, 2)])
    phis, orders = [], []
    for k in range(N + 1):
        rows = [[int(i == j) for j in range(k_rank)] for i in range(k_rank)]
        for a in range(0, k_rank, 2):
            if G.lam[a] <= k:
                rows[a][a] = rows[a + 1][a + 1] = 0
                rows[a][a + 1] = rows[a + 1][a] = 1
        phi = _unchecked(G, G, rows)
        cert = AutCertificate(phi, phi)
        assert cert.verify()
        o = hat(phi, X).order
        if o != p ** k:
            raise PropertyViolation(f"|phi_{k}^(X)| = {o}, expected {p ** k}")
        phis.append(cert)
        orders.append(o)
    return NooneFamily(G, X, tuple(phis), tuple(orders))
