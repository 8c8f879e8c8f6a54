"""Morphisms of n-trees.

A morphism sigma: T -> S is a ladder of maps sigma_i: T_i -> S_i, one per
level, commuting with the structure maps and order preserving on every
fiber of the source structure maps.
"""

from __future__ import annotations

import itertools
from functools import lru_cache

from .ordmaps import OrdMap, compose as compose_maps, factorize
from .trees import NTree, U, canonical_decomposition, subtree, susp_index, M


class TreeMorphism:
    __slots__ = ("source", "target", "_maps", "_hash")

    def __init__(self, source: NTree, target: NTree, levels, check=True):
        """``levels`` lists sigma_n, ..., sigma_1 (optionally followed by sigma_0)
        as OrdMaps or image lists."""
        if source.height != target.height:
            raise ValueError("source and target must have the same height")
        n = source.height
        levels = [tuple(f.images if isinstance(f, OrdMap) else f) for f in levels]
        if len(levels) == n + 1:
            levels = levels[:-1]
        if len(levels) != n:
            raise ValueError(f"need {n} level maps")
        maps = [(1,)] + list(reversed(levels))
        self.source = source
        self.target = target
        self._maps = tuple(maps)
        self._hash = hash((source, target, self._maps))
        if check:
            problems = self.problems()
            if problems:
                raise ValueError("invalid tree morphism: " + "; ".join(problems))

    @classmethod
    def _raw(cls, source, target, maps):
        m = cls.__new__(cls)
        m.source, m.target = source, target
        m._maps = tuple(tuple(x) for x in maps)
        m._hash = hash((source, target, m._maps))
        return m

    def level(self, i):
        """sigma_i as an image tuple."""
        return self._maps[i]

    def level_map(self, i):
        return OrdMap(self._maps[i], self.target.size(i))

    @property
    def levels(self):
        return [self.level_map(i) for i in reversed(range(self.source.height + 1))]

    @property
    def height(self):
        return self.source.height

    def problems(self):
        T, S = self.source, self.target
        out = []
        for i in range(T.height + 1):
            m = self._maps[i]
            if len(m) != T.size(i) or any(not 1 <= x <= S.size(i) for x in m):
                out.append(f"sigma_{i} is not a map [{T.size(i)}] -> [{S.size(i)}]")
                return out
        for i in range(1, T.height + 1):
            lo, hi = self._maps[i - 1], self._maps[i]
            for x in range(1, T.size(i) + 1):
                if lo[T.parent(i, x) - 1] != S.parent(i, hi[x - 1]):
                    out.append(f"square at level {i} fails at element {x}")
                    break
            for j in range(1, T.size(i - 1) + 1):
                imgs = [hi[x - 1] for x in T.children(i - 1, j)]
                if any(a > b for a, b in zip(imgs, imgs[1:])):
                    out.append(f"sigma_{i} breaks the order on the fiber over {j}")
        return out

    def is_valid(self):
        return not self.problems()

    def __eq__(self, other):
        return (isinstance(other, TreeMorphism) and self.source == other.source
                and self.target == other.target and self._maps == other._maps)

    def __hash__(self):
        return self._hash

    def __lt__(self, other):
        return (self.source, self.target, self._maps) < (other.source, other.target, other._maps)

    def __repr__(self):
        return f"TreeMorphism({format_morphism(self)!r})"

    def is_identity(self):
        return self.source == self.target and all(
            m == tuple(range(1, len(m) + 1)) for m in self._maps)


def validate(sigma: TreeMorphism) -> bool:
    return sigma.is_valid()


def identity(T: NTree) -> TreeMorphism:
    maps = [tuple(range(1, T.size(i) + 1)) for i in range(T.height + 1)]
    return TreeMorphism._raw(T, T, maps)


def compose(sigma: TreeMorphism, tau: TreeMorphism) -> TreeMorphism:
    """First sigma: T -> S, then tau: S -> R."""
    if sigma.target != tau.source:
        raise ValueError("morphisms are not composable")
    maps = [tuple(tau._maps[i][x - 1] for x in sigma._maps[i])
            for i in range(sigma.height + 1)]
    return TreeMorphism._raw(sigma.source, tau.target, maps)


def terminal(T: NTree) -> TreeMorphism:
    """The unique morphism T -> U_n."""
    return TreeMorphism._raw(T, U(T.height), [(1,) * T.size(i) for i in range(T.height + 1)])


def tip_map(sigma: TreeMorphism) -> OrdMap:
    return sigma.level_map(sigma.height)


def pi(sigma: TreeMorphism):
    return factorize(tip_map(sigma))[0]


# -- fibers

def _fiber_data(sigma: TreeMorphism, i: int, lvl=None):
    """Fiber over element i of the target at level ``lvl`` (default: the tip
    level) together with the list, per level, of the source elements it is
    made of."""
    T, S = sigma.source, sigma.target
    n = T.height if lvl is None else lvl
    if not 1 <= i <= S.size(n):
        raise IndexError(f"{i} is not an element of level {n} of the target")
    chain = [S.ancestor(n, i, m) for m in range(n + 1)]
    members = [[x for x in range(1, T.size(m) + 1) if sigma._maps[m][x - 1] == chain[m]]
               for m in range(n + 1)]
    sizes = [len(ms) for ms in members]
    rho = []
    for m in range(n):
        where = {x: r for r, x in enumerate(members[m], 1)}
        rho.append(tuple(where[T.parent(m + 1, x)] for x in members[m + 1]))
    return NTree._raw(sizes, rho), members


def fiber_over_tip(sigma: TreeMorphism, i: int) -> NTree:
    return _fiber_data(sigma, i)[0]


def leaf_fiber(sigma: TreeMorphism, lvl: int, x: int) -> NTree:
    """The pullback over a leaf of the target sitting at level ``lvl``."""
    return _fiber_data(sigma, x, lvl)[0]


def leaf_fibers(sigma: TreeMorphism):
    """Nonempty fibers over the non-tip leaves of the target, keyed by (level, element)."""
    S = sigma.target
    out = {}
    for lvl, x in S.leaves():
        if lvl < S.height:
            F = leaf_fiber(sigma, lvl, x)
            if F.nodes():
                out[(lvl, x)] = F
    return out


def fibers(sigma: TreeMorphism):
    return [fiber_over_tip(sigma, i) for i in range(1, sigma.target.tips() + 1)]


def fiber_embedding(sigma: TreeMorphism, i: int):
    """Per level, the source elements making up the fiber over tip i."""
    return _fiber_data(sigma, i)[1]


def _sub_morphism(T, members, S, smembers, maps):
    """Restrict a level map family to the given member lists on both sides."""
    out = []
    for m in range(T.height + 1):
        where = {y: r for r, y in enumerate(smembers[m], 1)}
        out.append(tuple(where[maps[m][x - 1]] for x in members[m]))
    return out


def fiber_morphism(sigma: TreeMorphism, omega: TreeMorphism, j: int) -> TreeMorphism:
    """sigma_j: the fiber of sigma.omega over tip j, mapped by sigma into the
    fiber of omega over j."""
    top, members = _fiber_data(compose(sigma, omega), j)
    bottom, smembers = _fiber_data(omega, j)
    maps = _sub_morphism(top, members, bottom, smembers, sigma._maps)
    return TreeMorphism._raw(top, bottom, maps)


# -- pieces of a canonical decomposition

def piece_members(T: NTree, l: int, a: int):
    """Per level, the elements of T lying in the a-th piece above level l."""
    out = [[1]] * (l + 1)
    cur = [a]
    out.append(cur)
    for m in range(l + 1, T.height):
        s = set(cur)
        cur = [x for x, y in enumerate(T.rho(m), 1) if y in s]
        out.append(cur)
    return out


def piece_inclusion(T: NTree, a: int) -> TreeMorphism:
    """The inclusion of the a-th canonical piece of T (T of suspension index l < n)."""
    l = susp_index(T)
    members = piece_members(T, l, a)
    piece = subtree(T, l + 1, a)
    return TreeMorphism._raw(piece, T, [tuple(ms) for ms in members])


def decomposition_morphism(S: NTree) -> TreeMorphism:
    """S -> M_l^j collapsing each canonical piece of S onto one strand."""
    n = S.height
    l, pieces = canonical_decomposition(S)
    if l == n:
        return identity(S)
    j = len(pieces)
    target = M(n, l, j)
    maps = [(1,) * S.size(m) for m in range(l + 1)]
    for m in range(l + 1, n + 1):
        maps.append(tuple(S.ancestor(m, x, l + 1) for x in range(1, S.size(m) + 1)))
    return TreeMorphism._raw(S, target, maps)


# -- hom enumeration

@lru_cache(maxsize=None)
def _hom(T: NTree, S: NTree):
    n = T.height
    if S.height != n:
        raise ValueError("trees of different heights")
    results = []

    def level(i, maps):
        if i > n:
            results.append(TreeMorphism._raw(T, S, maps))
            return
        lo = maps[i - 1]
        # for each fiber of T over level i-1, a monotone map into the
        # children of its image
        choices = []
        groups = []
        for j in range(1, T.size(i - 1) + 1):
            xs = T.children(i - 1, j)
            if not xs:
                continue
            targets = S.children(i - 1, lo[j - 1])
            if not targets:
                return
            groups.append(xs)
            choices.append(list(itertools.combinations_with_replacement(targets, len(xs))))
        for pick in itertools.product(*choices):
            images = [0] * T.size(i)
            for xs, ys in zip(groups, pick):
                for x, y in zip(xs, ys):
                    images[x - 1] = y
            level(i + 1, maps + [tuple(images)])

    level(1, [(1,)])
    return tuple(sorted(results, key=lambda m: m._maps))


def hom(T: NTree, S: NTree):
    return list(_hom(T, S))


# -- pasting

def from_fibers(S: NTree, fiber_trees, leaf_fibers=None):
    """Paste trees over the tips of S.

    Returns (T, sigma) with sigma: T -> S whose fiber over tip i is
    ``fiber_trees[i-1]``.  Non-tip leaves of S get an empty preimage at their
    own level unless ``leaf_fibers`` maps ``(level, element)`` to a tree of that
    height giving the fiber there.
    """
    n = S.height
    fiber_trees = list(fiber_trees)
    if len(fiber_trees) != S.tips():
        raise ValueError(f"need {S.tips()} fibers, got {len(fiber_trees)}")
    leaf_fibers = dict(leaf_fibers or {})
    for F in fiber_trees:
        if F.height != n:
            raise ValueError("fibers must have the height of S")

    # the fiber data attached to each node y at level m: a tree of height >= m
    def source_for(m, y):
        for i in range(1, S.tips() + 1):
            if S.ancestor(n, i, m) == y:
                return fiber_trees[i - 1]
        for (lvl, leaf), F in leaf_fibers.items():
            if lvl >= m and S.ancestor(lvl, leaf, m) == y:
                return F
        return None

    def consistent_at(m, y):
        trees = [fiber_trees[i - 1] for i in range(1, S.tips() + 1) if S.ancestor(n, i, m) == y]
        trees += [F for (lvl, leaf), F in leaf_fibers.items()
                  if lvl >= m and S.ancestor(lvl, leaf, m) == y]
        for F in trees[1:]:
            if [F.size(q) for q in range(m + 1)] != [trees[0].size(q) for q in range(m + 1)] or \
                    [F.rho(q) for q in range(m)] != [trees[0].rho(q) for q in range(m)]:
                raise ValueError(f"fibers sharing the node {y} at level {m} disagree below it")

    for (lvl, leaf), F in leaf_fibers.items():
        if F.height != lvl:
            raise ValueError("a leaf fiber must have the height of its leaf")
        if (lvl, leaf) not in S.leaves() or lvl == n:
            raise ValueError(f"({lvl}, {leaf}) is not a non-tip leaf of S")

    sizes = [1]
    rho = []
    smap = [(1,)]
    # index[(m, y)] = list of global positions (level m) of T elements over y
    index = {(0, 1): [1]}
    for m in range(1, n + 1):
        items = []
        for y in range(1, S.size(m) + 1):
            consistent_at(m, y)
            F = source_for(m, y)
            if F is None:
                continue
            parents = index[(m - 1, S.parent(m, y))]
            for r, p in enumerate(F.rho(m - 1), 1):
                items.append((parents[p - 1], y, r))
        items.sort()
        images, sig = [], []
        for pos, (par, y, r) in enumerate(items, 1):
            index.setdefault((m, y), []).append(pos)
            images.append(par)
            sig.append(y)
        for y in range(1, S.size(m) + 1):
            index.setdefault((m, y), [])
        sizes.append(len(items))
        rho.append(tuple(images))
        smap.append(tuple(sig))
    T = NTree._raw(sizes, rho)
    sigma = TreeMorphism._raw(T, S, smap)
    return T, sigma


# -- text format and dot

@lru_cache(maxsize=65536)
def format_morphism(sigma: TreeMorphism) -> str:
    from .trees import format_tree
    lv = " | ".join("[" + ",".join(map(str, sigma.level(i))) + "]"
                    for i in reversed(range(1, sigma.height + 1)))
    return f"{format_tree(sigma.source)} => {format_tree(sigma.target)} :: {lv}"


def parse_morphism(text: str) -> TreeMorphism:
    from .trees import parse_tree
    from .ordmaps import parse_map
    head, _, lv = text.partition("::")
    src, _, tgt = head.partition("=>")
    T, S = parse_tree(src), parse_tree(tgt)
    levels = [parse_map(p.strip()).images for p in lv.split("|")] if lv.strip() else []
    return TreeMorphism(T, S, levels)


def morphism_to_dot(sigma: TreeMorphism, name="morphism") -> str:
    T, S = sigma.source, sigma.target
    lines = [f"digraph {name} {{", "  rankdir=BT;", '  node [shape=circle, label=""];']
    for tag, tree in (("s", T), ("t", S)):
        lines.append(f"  subgraph cluster_{tag} {{")
        lines.append(f'    label="{"source" if tag == "s" else "target"}";')
        lines.append(f"    {tag}0_1 [shape=point];")
        for i in range(1, tree.height + 1):
            for x, y in enumerate(tree.rho(i - 1), 1):
                lines.append(f"    {tag}{i - 1}_{y} -> {tag}{i}_{x};")
        lines.append("  }")
    for i in range(T.height + 1):
        for x, y in enumerate(sigma.level(i), 1):
            lines.append(f"  s{i}_{x} -> t{i}_{y} [style=dashed, constraint=false];")
    lines.append("}")
    return "\n".join(lines) + "\n"
