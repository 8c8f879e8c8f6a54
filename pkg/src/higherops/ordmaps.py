"""Finite ordinals and maps between them.

Elements of the ordinal [n] are 1..n.  A map f: [n] -> [k] is stored as its
image list ``(f(1), ..., f(n))``.  Composition is diagrammatic:
``compose(f, g)`` first applies f, then g.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from functools import lru_cache


@dataclass(frozen=True, order=True)
class Ordinal:
    size: int

    def __post_init__(self):
        if self.size < 0:
            raise ValueError("ordinal size must be non-negative")

    def __iter__(self):
        return iter(range(1, self.size + 1))

    def __len__(self):
        return self.size

    def __repr__(self):
        return f"[{self.size}]"


class OrdMap:
    """A function [n] -> [k] between finite ordinals."""

    __slots__ = ("images", "cod", "_hash")

    def __init__(self, images, cod=None):
        images = tuple(int(x) for x in images)
        if cod is None:
            cod = max(images, default=0)
        for x in images:
            if not 1 <= x <= cod:
                raise ValueError(f"image {x} outside [1..{cod}]")
        self.images = images
        self.cod = int(cod)
        self._hash = hash((images, self.cod))

    @property
    def dom(self):
        return len(self.images)

    @property
    def source(self):
        return Ordinal(self.dom)

    @property
    def target(self):
        return Ordinal(self.cod)

    def __call__(self, p):
        return self.images[p - 1]

    def __len__(self):
        return len(self.images)

    def __iter__(self):
        return iter(self.images)

    def __eq__(self, other):
        if not isinstance(other, OrdMap):
            return NotImplemented
        return self.images == other.images and self.cod == other.cod

    def __hash__(self):
        return self._hash

    def __lt__(self, other):
        return (self.dom, self.cod, self.images) < (other.dom, other.cod, other.images)

    def __repr__(self):
        return format_map(self)

    def is_monotone(self):
        return all(a <= b for a, b in zip(self.images, self.images[1:]))

    def is_bijection(self):
        return self.dom == self.cod and sorted(self.images) == list(range(1, self.cod + 1))

    def fiber_sizes(self):
        sizes = [0] * self.cod
        for x in self.images:
            sizes[x - 1] += 1
        return sizes


class Perm(OrdMap):
    """A bijection [n] -> [n]."""

    __slots__ = ()

    def __init__(self, images, cod=None):
        images = tuple(images)
        super().__init__(images, len(images))
        if not self.is_bijection():
            raise ValueError(f"{list(images)} is not a permutation")

    def inverse(self):
        inv = [0] * self.dom
        for p, x in enumerate(self.images, 1):
            inv[x - 1] = p
        return Perm(inv)

    def __mul__(self, other):
        # diagrammatic product: self first
        return Perm(compose(self, other).images)


def monotone(images, cod=None):
    f = OrdMap(images, cod)
    if not f.is_monotone():
        raise ValueError(f"{f} is not order preserving")
    return f


def identity(n):
    return Perm(range(1, n + 1))


def compose(f: OrdMap, g: OrdMap) -> OrdMap:
    """First f, then g."""
    if f.cod != g.dom:
        raise ValueError(f"cannot compose {f} with {g}: codomain/domain mismatch")
    images = tuple(g.images[x - 1] for x in f.images)
    if isinstance(f, Perm) and isinstance(g, Perm):
        return Perm(images)
    return OrdMap(images, g.cod)


def compose_all(*maps):
    out = maps[0]
    for g in maps[1:]:
        out = compose(out, g)
    return out


def fiber(f: OrdMap, i: int):
    """The preimage of i, as an ordinal together with its increasing embedding."""
    if not 1 <= i <= f.cod:
        raise IndexError(f"{i} is not an element of [{f.cod}]")
    emb = tuple(p for p, x in enumerate(f.images, 1) if x == i)
    return Ordinal(len(emb)), emb


def factorize(sigma: OrdMap):
    """Return (pi, nu) with sigma = compose(pi, nu), pi a bijection that keeps
    the order on each fiber and nu order preserving."""
    n = sigma.dom
    order = sorted(range(1, n + 1), key=lambda p: (sigma(p), p))
    pi = [0] * n
    for pos, p in enumerate(order, 1):
        pi[p - 1] = pos
    nu = tuple(sigma(p) for p in order)
    return Perm(pi), OrdMap(nu, sigma.cod)


def blocksum(perms):
    """pi_1 + ... + pi_k acting on consecutive blocks."""
    images = []
    offset = 0
    for p in perms:
        images.extend(offset + x for x in p.images)
        offset += p.dom
    return Perm(images)


def blockmove(sigma: OrdMap, sizes):
    """Move the j-th block (of length sizes[j-1]) to slot sigma(j), keeping the
    inside of every block in place."""
    sizes = list(sizes)
    if len(sizes) != sigma.dom:
        raise ValueError("one block size per element of the domain is needed")
    if not sigma.is_bijection():
        raise ValueError(f"{sigma} is not a permutation")
    offsets = {}
    acc = 0
    for j in sorted(range(1, sigma.dom + 1), key=sigma):
        offsets[j] = acc
        acc += sizes[j - 1]
    images = []
    for j in range(1, sigma.dom + 1):
        images.extend(offsets[j] + r for r in range(1, sizes[j - 1] + 1))
    return Perm(images)


def gamma(sigma: Perm, blocks) -> Perm:
    """Multiplication in the permutation operad: permute inside the blocks,
    then move the blocks around according to sigma."""
    blocks = list(blocks)
    if len(blocks) != sigma.dom:
        raise ValueError(f"gamma needs {sigma.dom} blocks, got {len(blocks)}")
    return compose(blocksum(blocks), blockmove(sigma, [b.dom for b in blocks]))


def restrict(sigma: OrdMap, omega: OrdMap, j: int) -> OrdMap:
    """sigma_j: the part of sigma over the fiber of omega at j, renumbered."""
    _, top = fiber(compose(sigma, omega), j)
    _, bottom = fiber(omega, j)
    where = {x: r for r, x in enumerate(bottom, 1)}
    return OrdMap([where[sigma(p)] for p in top], len(bottom))


def verify_pisigma(sigma: OrdMap, omega: OrdMap) -> bool:
    """Check pi(sigma.omega) . Gamma(1; pi(sigma_j)) == pi(sigma) . Gamma(pi(omega); 1, ..., 1)."""
    if sigma.cod != omega.dom:
        raise ValueError("maps are not composable")
    k = omega.cod
    lhs = compose(factorize(compose(sigma, omega))[0],
                  blocksum(factorize(restrict(sigma, omega, j))[0] for j in range(1, k + 1)))
    pi_omega = factorize(omega)[0]
    rhs = compose(factorize(sigma)[0],
                  gamma(pi_omega, [identity(m) for m in sigma.fiber_sizes()]))
    return lhs == rhs


@lru_cache(maxsize=None)
def all_maps(n, k):
    return tuple(OrdMap(t, k) for t in itertools.product(range(1, k + 1), repeat=n))


@lru_cache(maxsize=None)
def monotone_maps(n, k):
    return tuple(OrdMap(t, k) for t in itertools.combinations_with_replacement(range(1, k + 1), n))


@lru_cache(maxsize=None)
def permutations(n):
    return tuple(Perm(t) for t in itertools.permutations(range(1, n + 1)))


def format_map(f: OrdMap) -> str:
    return "[" + ",".join(map(str, f.images)) + f"]:{f.dom}->{f.cod}"


_MAP_RE = re.compile(r"^\s*\[([\d,\s]*)\]\s*(?::\s*(\d+)\s*->\s*(\d+))?\s*$")


def parse_map(text: str) -> OrdMap:
    """Read '[2,1,2]:3->2' (the ':n->k' suffix is optional)."""
    m = _MAP_RE.match(text)
    if not m:
        raise ValueError(f"cannot parse map {text!r}")
    body = m.group(1).strip()
    images = [int(x) for x in body.split(",")] if body else []
    if m.group(2) is None:
        return OrdMap(images)
    if int(m.group(2)) != len(images):
        raise ValueError(f"{text!r}: domain size does not match image list")
    return OrdMap(images, int(m.group(3)))
