"""Trees of height n as chains of order preserving maps

    [k_n] -> [k_{n-1}] -> ... -> [k_1] -> [k_0] = [1].

``levels`` lists the ordinal sizes top-down, ``[k_n, ..., k_1]``; internally
``size(i)`` and ``rho(i)`` are indexed by the level, so ``rho(i)`` sends
level i+1 to level i.
"""

from __future__ import annotations

import itertools
import re
from functools import lru_cache

from .ordmaps import OrdMap, format_map, parse_map


class NTree:
    __slots__ = ("height", "_sizes", "_rho", "_key", "_hash")

    def __init__(self, levels, maps):
        """``levels = [k_n, ..., k_1]`` and ``maps = [rho_{n-1}, ..., rho_0]``;
        maps may be OrdMaps or image lists."""
        levels = [int(x) for x in levels]
        n = len(levels)
        maps = list(maps)
        if len(maps) != n:
            raise ValueError(f"a tree of height {n} needs {n} maps, got {len(maps)}")
        sizes = (1,) + tuple(reversed(levels))
        rho = []
        for i, f in enumerate(reversed(maps)):
            images = tuple(f.images if isinstance(f, OrdMap) else f)
            if len(images) != sizes[i + 1]:
                raise ValueError(f"rho_{i} must have {sizes[i + 1]} entries")
            if isinstance(f, OrdMap) and f.cod != sizes[i]:
                raise ValueError(f"rho_{i} must land in [{sizes[i]}]")
            if any(not 1 <= x <= sizes[i] for x in images):
                raise ValueError(f"rho_{i} leaves [{sizes[i]}]")
            if any(a > b for a, b in zip(images, images[1:])):
                raise ValueError(f"rho_{i} is not order preserving")
            rho.append(images)
        self.height = n
        self._sizes = sizes
        self._rho = tuple(rho)
        self._key = (n, sum(sizes) - 1, sizes, self._rho)
        self._hash = hash(self._key)

    @classmethod
    def _raw(cls, sizes, rho):
        t = cls.__new__(cls)
        t.height = len(sizes) - 1
        t._sizes = tuple(sizes)
        t._rho = tuple(tuple(r) for r in rho)
        t._key = (t.height, sum(t._sizes) - 1, t._sizes, t._rho)
        t._hash = hash(t._key)
        return t

    # -- basic data

    def size(self, i):
        return self._sizes[i]

    def rho(self, i):
        """rho_i as an image tuple, level i+1 -> level i."""
        return self._rho[i]

    def rho_map(self, i):
        return OrdMap(self._rho[i], self._sizes[i])

    @property
    def levels(self):
        return list(reversed(self._sizes[1:]))

    @property
    def maps(self):
        return [self.rho_map(i) for i in reversed(range(self.height))]

    def tips(self):
        return self._sizes[-1]

    def nodes(self):
        """Number of vertices above the root."""
        return sum(self._sizes[1:])

    def children(self, i, x):
        """Elements of level i+1 sitting over x at level i."""
        return [p for p, y in enumerate(self._rho[i], 1) if y == x]

    def parent(self, i, x):
        """Image of x (at level i >= 1) in level i-1."""
        return self._rho[i - 1][x - 1]

    def ancestor(self, i, x, j):
        """The level-j ancestor of x at level i."""
        while i > j:
            x = self._rho[i - 1][x - 1]
            i -= 1
        return x

    def leaves(self):
        """(level, element) pairs with no children; tips are the top level."""
        out = []
        for i in range(self.height):
            hit = set(self._rho[i])
            out.extend((i, x) for x in range(1, self._sizes[i] + 1) if x not in hit)
        out.extend((self.height, x) for x in range(1, self.tips() + 1))
        return out

    def is_pruned(self):
        return all(lvl == self.height for lvl, _ in self.leaves())

    def is_degenerate(self):
        return self.tips() == 0

    # -- comparison

    def __eq__(self, other):
        return self is other or (isinstance(other, NTree) and self._hash == other._hash
                                 and self._key == other._key)

    def __hash__(self):
        return self._hash

    def __lt__(self, other):
        return self._key < other._key

    def sort_key(self):
        return self._key

    def __repr__(self):
        return f"NTree({format_tree(self)!r})"


def U(n):
    """The linear tree of height n."""
    return NTree._raw((1,) * (n + 1), [(1,)] * n)


def M(n, l, j):
    """M_l^j: the j-fold l-composite of U_n (levels <= l are points, above
    that j parallel strands)."""
    if not 0 <= l < n:
        raise ValueError("need 0 <= l < n")
    sizes = (1,) * (l + 1) + (j,) * (n - l)
    rho = [(1,)] * l + [(1,) * j] + [tuple(range(1, j + 1))] * (n - l - 1)
    return NTree._raw(sizes, rho)


def tips(T):
    return T.tips()


def z(T: NTree) -> NTree:
    """Put an empty ordinal on top: the identity cell on T."""
    return NTree._raw(T._sizes + (0,), T._rho + ((),))


def truncate(T: NTree, times=1) -> NTree:
    if times > T.height:
        raise ValueError("cannot truncate below height 0")
    if times == 0:
        return T
    return NTree._raw(T._sizes[:-times], T._rho[:-times])


def suspend(T: NTree) -> NTree:
    return NTree._raw((1,) + T._sizes, ((1,),) + T._rho)


def desuspend(T: NTree) -> NTree:
    if T.height == 0 or T.size(1) != 1:
        raise ValueError("tree is not a suspension")
    return NTree._raw(T._sizes[1:], T._rho[1:])


def susp_index(T: NTree) -> int:
    """The largest k such that T is a k-fold suspension."""
    k = 0
    while k < T.height and T.size(k + 1) == 1:
        k += 1
    return k


def _descendants(T: NTree, i, xs):
    """For a set xs at level i, the lists of their descendants at levels i..n."""
    out = [sorted(xs)]
    for lvl in range(i, T.height):
        cur = set(out[-1])
        out.append([p for p, y in enumerate(T.rho(lvl), 1) if y in cur])
    return out


def compose_k(S: NTree, T: NTree, k: int) -> NTree:
    """S (x)_k T: glue S and T along their common k-truncation, S on the left."""
    n = S.height
    if T.height != n or not 0 <= k <= n:
        raise ValueError("trees must have equal height and 0 <= k <= n")
    if truncate(S, n - k) != truncate(T, n - k):
        raise ValueError(f"trees do not agree below level {k + 1}")
    if k == n:
        return S
    sizes = list(S._sizes[:k + 1])
    rho = list(S._rho[:k])
    # new numbering at level k: identical; above: per level-k element x, S part then T part
    prev = {("S", x): x for x in range(1, S.size(k) + 1)}
    prev.update({("T", x): x for x in range(1, T.size(k) + 1)})
    for lvl in range(k + 1, n + 1):
        items = []
        for src, tree in (("S", S), ("T", T)):
            for p, y in enumerate(tree.rho(lvl - 1), 1):
                base = prev[(src, y)]
                root = tree.ancestor(lvl, p, k)
                items.append((root, 0 if src == "S" else 1, base, p, src))
        # order: level-k ancestor, then S before T, then parent position, then own position
        items.sort(key=lambda t: (t[0], t[1], t[2], t[3]))
        # parent positions inside the current level must be non-decreasing; they are
        new = {}
        images = []
        for pos, (root, side, base, p, src) in enumerate(items, 1):
            new[(src, p)] = pos
            images.append(base)
        sizes.append(len(items))
        rho.append(images)
        prev = new
    return NTree._raw(sizes, rho)


def compose_many(trees, k, base=None):
    """Fold compose_k over a list; an empty list gives z-style identity on ``base``."""
    trees = list(trees)
    if not trees:
        if base is None:
            raise ValueError("need a base tree to compose zero pieces")
        return base
    out = trees[0]
    for T in trees[1:]:
        out = compose_k(out, T, k)
    return out


def subtree(T: NTree, i: int, x: int) -> NTree:
    """The part of T above element x of level i, with the chain below x kept."""
    desc = _descendants(T, i, [x])
    sizes = [1] * (i + 1)
    rho = [(1,)] * i
    for lvl in range(i + 1, T.height + 1):
        below = {y: r for r, y in enumerate(desc[lvl - 1 - i], 1)}
        here = desc[lvl - i]
        sizes.append(len(here))
        rho.append(tuple(below[T.parent(lvl, p)] for p in here))
    return NTree._raw(sizes, rho)


def canonical_decomposition(T: NTree):
    """(l, pieces) with T the l-composite of the pieces and each piece of
    suspension index > l.  The linear tree returns (n, [T])."""
    l = susp_index(T)
    if l == T.height:
        return l, [T]
    return l, [subtree(T, l + 1, x) for x in range(1, T.size(l + 1) + 1)]


def recompose(T: NTree, l, pieces) -> NTree:
    """Inverse of canonical_decomposition; T is only used for the empty case."""
    if l == T.height:
        return pieces[0]
    base = z(truncate(T, T.height - l)) if l < T.height else T
    for _ in range(T.height - l - 1):
        base = z(base)
    return compose_many(pieces, l, base)


# -- enumeration

def _ordered_maps(n, k):
    return itertools.combinations_with_replacement(range(1, k + 1), n)


@lru_cache(maxsize=None)
def _enumerate(n, max_tips, max_nodes):
    out = []

    def grow(sizes, rho, used):
        lvl = len(sizes) - 1
        if lvl == n:
            out.append(NTree._raw(sizes, rho))
            return
        limit = max_nodes - used if max_nodes is not None else None
        top = max_tips if lvl + 1 == n else limit
        if top is None:
            raise ValueError("a node bound is needed for trees of height >= 2")
        if limit is not None:
            top = min(top, limit)
        for m in range(0, top + 1):
            for images in _ordered_maps(m, sizes[-1]):
                grow(sizes + (m,), rho + (images,), used + m)

    grow((1,), (), 0)
    return tuple(sorted(out))


def enumerate_trees(n, max_tips, max_nodes=None, pruned=False):
    """All trees of height n with at most ``max_tips`` tips and at most
    ``max_nodes`` vertices above the root, sorted by (height, node count,
    level sizes, maps)."""
    if n < 0 or max_tips < 0 or (max_nodes is not None and max_nodes < 0):
        raise ValueError("bounds must be non-negative")
    if n == 0:
        return [U(0)]
    trees = _enumerate(n, max_tips, max_nodes)
    if pruned:
        trees = [T for T in trees if T.is_pruned()]
    return list(trees)


def tree_universe(n, max_tips, max_nodes=None):
    """Every pruned tree with at most ``max_tips`` tips, together with all
    trees (pruned or not) with at most ``max_nodes`` vertices, default n + max_tips."""
    if max_nodes is None:
        max_nodes = n + max_tips
    small = enumerate_trees(n, max_tips, max_nodes)
    pruned = enumerate_trees(n, max_tips, n * max(max_tips, 1), pruned=True)
    return sorted(set(small) | set(pruned))


# -- text format

@lru_cache(maxsize=65536)
def format_tree(T: NTree) -> str:
    parts = [str(T.height), ",".join(map(str, T.levels))]
    for i in reversed(range(T.height)):
        parts.append(f"rho_{i}=[" + ",".join(map(str, T.rho(i))) + "]")
    return "; ".join(parts)


def parse_tree(text: str) -> NTree:
    parts = [p.strip() for p in text.strip().split(";")]
    n = int(parts[0])
    if n == 0:
        return U(0)
    levels = [int(x) for x in parts[1].split(",")] if parts[1] else []
    if len(levels) != n:
        raise ValueError(f"expected {n} level sizes in {text!r}")
    maps = {}
    for p in parts[2:]:
        m = re.match(r"^rho_(\d+)\s*=\s*(\[.*\])$", p)
        if not m:
            raise ValueError(f"cannot parse {p!r}")
        maps[int(m.group(1))] = parse_map(m.group(2)).images
    if sorted(maps) != list(range(n)):
        raise ValueError(f"{text!r} must list rho_0 .. rho_{n - 1}")
    return NTree(levels, [maps[i] for i in reversed(range(n))])


def to_dot(T: NTree, name="tree") -> str:
    lines = [f"digraph {name} {{", "  rankdir=BT;", '  node [shape=circle, label=""];',
             '  r0_1 [shape=point];']
    for i in range(1, T.height + 1):
        ids = " ".join(f"r{i}_{x};" for x in range(1, T.size(i) + 1))
        lines.append(f"  {{ rank=same; {ids} }}" if ids else f"  // level {i} empty")
        for x, y in enumerate(T.rho(i - 1), 1):
            lines.append(f"  r{i - 1}_{y} -> r{i}_{x};")
    lines.append("}")
    return "\n".join(lines) + "\n"
