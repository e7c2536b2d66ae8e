"""Brute-force oracles over explicit element sets.

Nothing here imports the package: groups are (p, lam) pairs, elements are
tuples, subgroups are frozensets.  Slow by design; small groups only.
"""
from itertools import product


def moduli(p, lam):
    return tuple(p ** l for l in lam)


def elements(p, lam):
    return list(product(*[range(m) for m in moduli(p, lam)]))


def add(a, b, mods):
    return tuple((x + y) % m for x, y, m in zip(a, b, mods))


def scale(c, a, mods):
    return tuple((c * x) % m for x, m in zip(a, mods))


def closure(gens, mods):
    zero = tuple(0 for _ in mods)
    S = {zero}
    frontier = [zero]
    gens = list(gens)
    while frontier:
        new = []
        for h in frontier:
            for g in gens:
                s = add(h, g, mods)
                if s not in S:
                    S.add(s)
                    new.append(s)
        frontier = new
    return frozenset(S)


def all_subgroups(p, lam):
    mods = moduli(p, lam)
    els = elements(p, lam)
    zero = closure([], mods)
    seen = {zero}
    todo = [zero]
    while todo:
        H = todo.pop()
        for g in els:
            if g not in H:
                K = closure(list(H) + [g], mods) if len(H) < 64 else closure(_gens_of(H, mods) + [g], mods)
                if K not in seen:
                    seen.add(K)
                    todo.append(K)
    return seen


def _gens_of(H, mods):
    gens, cur = [], closure([], mods)
    for h in sorted(H):
        if h not in cur:
            gens.append(h)
            cur = closure(gens, mods)
    return gens


def endomorphisms(p, lam):
    """All matrices with a_ij in [0, p^lam_i) and the divisibility rule."""
    k = len(lam)
    choices = [list(range(0, p ** lam[i], p ** max(0, lam[i] - lam[j])))
               for i in range(k) for j in range(k)]
    for entries in product(*choices):
        yield tuple(tuple(entries[i * k:(i + 1) * k]) for i in range(k))


def apply(m, x, mods):
    return tuple(sum(a * c for a, c in zip(row, x)) % mod for row, mod in zip(m, mods))


def is_bijective(m, p, lam):
    mods = moduli(p, lam)
    return len({apply(m, x, mods) for x in elements(p, lam)}) == len(elements(p, lam))


def automorphisms(p, lam):
    return [m for m in endomorphisms(p, lam) if is_bijective(m, p, lam)]


def height(x, p, lam):
    mods = moduli(p, lam)
    if not any(x):
        return float("inf")
    n = 0
    while True:
        pn = {scale(p ** (n + 1), g, mods) for g in elements(p, lam)}
        if x not in pn:
            return n
        n += 1


def height_sequence(x, p, lam):
    mods = moduli(p, lam)
    return tuple(height(scale(p ** n, x, mods), p, lam) for n in range(max(lam, default=0) + 1))


def stable(X, maps, mods):
    return all(apply(m, x, mods) in X for m in maps for x in X)


def fully_invariant_subgroups(p, lam):
    mods = moduli(p, lam)
    ends = list(endomorphisms(p, lam))
    return {X for X in all_subgroups(p, lam) if stable(X, ends, mods)}


def characteristic_subgroups(p, lam):
    mods = moduli(p, lam)
    auts = automorphisms(p, lam)
    return {X for X in all_subgroups(p, lam) if stable(X, auts, mods)}


def quotient_type(Y, X, p, mods):
    """Partition of Y/X from the sizes of its p^i-torsion."""
    cosets = {}
    for y in Y:
        key = min(add(y, x, mods) for x in X)
        cosets[key] = True
    reps = list(cosets)

    def coset(y):
        return min(add(y, x, mods) for x in X)

    tors = []
    i = 0
    while True:
        c = sum(1 for r in reps if coset(scale(p ** i, r, mods)) == coset(tuple(0 for _ in mods)))
        tors.append(c)
        if c == len(reps):
            break
        i += 1
    # log_p |Q[p^i]| = sum over parts of min(part, i)
    logs = [0]
    for c in tors[1:]:
        n, v = c, 0
        while n > 1:
            n //= p
            v += 1
        logs.append(v)
    at_least = [logs[i + 1] - logs[i] for i in range(len(logs) - 1)]
    parts = []
    for e in range(len(at_least), 0, -1):
        exact = at_least[e - 1] - (at_least[e] if e < len(at_least) else 0)
        parts += [e] * exact
    return tuple(parts)


def orbit(x, maps, mods):
    seen = {x}
    todo = [x]
    while todo:
        y = todo.pop()
        for m in maps:
            z = apply(m, y, mods)
            if z not in seen:
                seen.add(z)
                todo.append(z)
    return seen


def is_transitive(p, lam):
    mods = moduli(p, lam)
    auts = automorphisms(p, lam)
    hs = {x: height_sequence(x, p, lam) for x in elements(p, lam)}
    for x in elements(p, lam):
        orb = {apply(m, x, mods) for m in auts}
        if orb != {y for y in hs if hs[y] == hs[x]}:
            return False
    return True


def is_fully_transitive(p, lam):
    mods = moduli(p, lam)
    ends = list(endomorphisms(p, lam))
    hs = {x: height_sequence(x, p, lam) for x in elements(p, lam)}
    for x in elements(p, lam):
        imgs = {apply(m, x, mods) for m in ends}
        for y in hs:
            if all(a <= b for a, b in zip(hs[x], hs[y])) and y not in imgs:
                return False
    return True
