"""Finite abelian p-groups given by exponent partitions.

A group ``G = Z_{p^l1} + ... + Z_{p^lk}`` is stored as the prime and the
exponents in non-increasing order.  Elements are residue vectors.  Heights
are integers or ``INF`` (``math.inf``); only the zero element has infinite
height because ``p^omega G = 0`` for a finite group.
"""
from __future__ import annotations

import json
import math
import re
from dataclasses import dataclass
from functools import cached_property
from itertools import product

INF = math.inf


class GroupSpecError(ValueError):
    """Malformed group specification; ``pos`` is the offending character."""

    def __init__(self, message, text=None, pos=None):
        self.text = text
        self.pos = pos
        if text is not None and pos is not None:
            message = f"{message} at position {pos} in {text!r}"
        super().__init__(message)


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def valuation(a: int, p: int):
    """p-adic valuation of ``a``; ``INF`` for zero."""
    if a == 0:
        return INF
    v = 0
    while a % p == 0:
        a //= p
        v += 1
    return v


@dataclass(frozen=True)
class GroupShape:
    p: int
    lam: tuple

    def __post_init__(self):
        if not isinstance(self.p, int) or not is_prime(self.p):
            raise ValueError(f"p must be prime, got {self.p!r}")
        lam = tuple(int(l) for l in self.lam)
        for l in lam:
            if l < 1:
                raise ValueError(f"exponents must be positive, got {l}")
        object.__setattr__(self, "lam", tuple(sorted(lam, reverse=True)))

    @property
    def rank(self) -> int:
        return len(self.lam)

    @cached_property
    def moduli(self) -> tuple:
        return tuple(self.p ** l for l in self.lam)

    @property
    def log_order(self) -> int:
        return sum(self.lam)

    @property
    def order(self) -> int:
        return self.p ** self.log_order

    @property
    def exponent(self) -> int:
        return self.p ** self.lam[0] if self.lam else 1

    @property
    def length(self) -> int:
        """Largest exponent; p^length kills G."""
        return self.lam[0] if self.lam else 0

    def element(self, coords) -> "Element":
        coords = tuple(coords)
        if len(coords) != self.rank:
            raise ValueError(f"expected {self.rank} coordinates, got {len(coords)}")
        return Element(self, coords)

    def zero(self) -> "Element":
        return Element(self, (0,) * self.rank)

    def basis(self) -> list:
        return [self.element(tuple(int(i == j) for j in range(self.rank)))
                for i in range(self.rank)]

    def elements(self):
        """All elements in lexicographic coordinate order."""
        for c in product(*(range(m) for m in self.moduli)):
            yield Element(self, c)

    def sub_shape(self, indices) -> "GroupShape":
        return GroupShape(self.p, tuple(self.lam[i] for i in indices))

    def __str__(self):
        return f"{self.p}:[{','.join(map(str, self.lam))}]"

    def to_json(self) -> dict:
        return {"p": self.p, "lambda": list(self.lam)}


def make_group(p: int, exponents) -> GroupShape:
    return GroupShape(p, tuple(exponents))


_SPEC_RE = re.compile(r"\s*(\d+)\s*:\s*\[")


def parse_group(text: str) -> GroupShape:
    """Parse ``"2:[3,1]"`` or ``'{"p": 2, "lambda": [3, 1]}'``."""
    stripped = text.strip()
    if stripped.startswith("{"):
        try:
            obj = json.loads(stripped)
        except json.JSONDecodeError as exc:
            raise GroupSpecError(f"invalid JSON ({exc.msg})", text, exc.pos) from None
        return group_from_json(obj)
    m = _SPEC_RE.match(text)
    if not m:
        raise GroupSpecError("expected '<p>:[l1,l2,...]'", text, 0)
    p = int(m.group(1))
    if not is_prime(p):
        raise GroupSpecError(f"{p} is not prime", text, m.start(1))
    pos = m.end()
    close = text.find("]", pos)
    if close < 0:
        raise GroupSpecError("missing ']'", text, len(text))
    if text[close + 1:].strip():
        raise GroupSpecError("trailing characters", text, close + 1)
    exps = []
    body = text[pos:close]
    if body.strip():
        offset = pos
        for part in body.split(","):
            token = part.strip()
            where = offset + (len(part) - len(part.lstrip()))
            if not token.isdigit():
                raise GroupSpecError(f"bad exponent {token!r}", text, where)
            if int(token) < 1:
                raise GroupSpecError("exponents must be positive", text, where)
            exps.append(int(token))
            offset += len(part) + 1
    return GroupShape(p, tuple(exps))


def group_from_json(obj) -> GroupShape:
    if not isinstance(obj, dict) or "p" not in obj or "lambda" not in obj:
        raise GroupSpecError('group JSON needs keys "p" and "lambda"')
    try:
        return GroupShape(int(obj["p"]), tuple(int(l) for l in obj["lambda"]))
    except (TypeError, ValueError) as exc:
        raise GroupSpecError(str(exc)) from None


@dataclass(frozen=True)
class Element:
    shape: GroupShape
    coords: tuple

    def __post_init__(self):
        red = tuple(int(c) % m for c, m in zip(self.coords, self.shape.moduli))
        object.__setattr__(self, "coords", red)

    def _check(self, other):
        if not isinstance(other, Element) or other.shape != self.shape:
            raise ValueError("elements live in different groups")

    def __add__(self, other):
        self._check(other)
        return Element(self.shape, tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other):
        self._check(other)
        return Element(self.shape, tuple(a - b for a, b in zip(self.coords, other.coords)))

    def __neg__(self):
        return Element(self.shape, tuple(-a for a in self.coords))

    def __rmul__(self, m: int):
        return Element(self.shape, tuple(m * a for a in self.coords))

    def __iter__(self):
        return iter(self.coords)

    def __len__(self):
        return len(self.coords)

    def __getitem__(self, i):
        return self.coords[i]

    def is_zero(self) -> bool:
        return not any(self.coords)

    def __repr__(self):
        return "(" + ",".join(map(str, self.coords)) + ")"


def elem_add(x: Element, y: Element) -> Element:
    return x + y


def elem_neg(x: Element) -> Element:
    return -x


def elem_scale(m: int, x: Element) -> Element:
    return m * x


def parse_element(shape: GroupShape, text: str) -> Element:
    """Parse ``"(1,2)"`` or ``"[1,2]"``."""
    body = text.strip()
    if body[:1] in "([" and body[-1:] in ")]":
        body = body[1:-1]
    parts = [t for t in body.split(",") if t.strip()]
    try:
        coords = tuple(int(t) for t in parts)
    except ValueError:
        raise GroupSpecError("element coordinates must be integers", text, 0) from None
    return shape.element(coords)


def parse_elements(shape: GroupShape, text: str) -> list:
    """Parse a ``;``-separated generator list such as ``"(1,2);(0,4)"``."""
    return [parse_element(shape, t) for t in text.split(";") if t.strip()]


def order_exponent(x: Element) -> int:
    """Least k with p^k x = 0."""
    p = x.shape.p
    k = 0
    for c, l in zip(x.coords, x.shape.lam):
        if c:
            k = max(k, l - valuation(c, p))
    return k


def height(x: Element):
    """Largest n with x in p^n G, or INF for the zero element."""
    p = x.shape.p
    return min((valuation(c, p) for c in x.coords if c), default=INF)


def height_sequence(x: Element) -> tuple:
    """``(|x|, |px|, ..., |p^L x|)`` with L the largest exponent of the group."""
    p = x.shape.p
    seq = []
    y = x
    for _ in range(x.shape.length + 1):
        seq.append(height(y))
        y = p * y
    return tuple(seq)


def seq_le(a, b) -> bool:
    """Pointwise comparison of height sequences."""
    return all(u <= v for u, v in zip(a, b))


def ulm_invariant(G: GroupShape, n: int) -> int:
    return sum(1 for l in G.lam if l == n + 1)


def _fp_rank(rows, p) -> int:
    rows = [list(r) for r in rows]
    rank = 0
    ncols = len(rows[0]) if rows else 0
    for c in range(ncols):
        piv = next((i for i in range(rank, len(rows)) if rows[i][c] % p), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        inv = pow(rows[rank][c], -1, p)
        rows[rank] = [(v * inv) % p for v in rows[rank]]
        for i in range(len(rows)):
            if i != rank and rows[i][c] % p:
                f = rows[i][c]
                rows[i] = [(a - f * b) % p for a, b in zip(rows[i], rows[rank])]
        rank += 1
    return rank


def ulm_class(x: Element, n: int) -> tuple:
    """Coordinates of the class of x in the n-th Ulm factor.

    Valid for x in p^n G with px in p^(n+2) G.  Only the summands of
    exponent n+1 survive modulo p^(n+1) G.
    """
    G = x.shape
    p = G.p
    return tuple((c // p ** n) % p for c, l in zip(x.coords, G.lam) if l == n + 1)


def ulm_factor_basis(G: GroupShape, n: int) -> list:
    """Lexicographically least representatives in (p^n G)[p] of a basis of U_n."""
    p = G.p
    choices = []
    for l in G.lam:
        if l > n:
            choices.append([j * p ** (l - 1) for j in range(p)])
        else:
            choices.append([0])
    chosen, classes = [], []
    target = ulm_invariant(G, n)
    for coords in product(*choices):
        if len(chosen) == target:
            break
        x = G.element(coords)
        cls = ulm_class(x, n)
        if _fp_rank(classes + [cls], p) > len(classes):
            chosen.append(x)
            classes.append(cls)
    return chosen


def section(G: GroupShape, kind: str, k: int):
    """``p^k G`` (kind ``"pk_multiple"``) or ``G[p^k]`` (kind ``"pk_socle"``)."""
    from .sublattice import Subgroup

    if kind == "pk_multiple":
        diag = [G.p ** min(k, l) for l in G.lam]
    elif kind == "pk_socle":
        diag = [G.p ** max(0, l - k) for l in G.lam]
    else:
        raise ValueError(f"unknown section kind {kind!r}")
    return Subgroup.from_diagonal(G, diag)


def heights_json(seq) -> list:
    return [h if h != INF else "inf" for h in seq]


def heights_from_json(seq) -> tuple:
    return tuple(INF if h == "inf" else int(h) for h in seq)


def random_element(G: GroupShape, rng) -> Element:
    """Uniform element; ``rng`` is a numpy Generator."""
    return Element(G, tuple(int(rng.integers(0, m)) for m in G.moduli))
