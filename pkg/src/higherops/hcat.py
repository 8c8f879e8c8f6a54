"""Bounded presentations of the categorical operads h^n, H^n and H^oo.

An object of h^n_k is a planar tree with leaves labelled 1..k and every
vertex decorated by an n-tree whose tip count is the valency.  Terms are
nested tuples: a leaf is its ``int`` label, a vertex is ``(T, a, children)``
where ``a`` is an optional element attached to the vertex (``None`` for bare
objects; an operad element when a functor is being evaluated).

Generating arrows are
  * gamma(sigma): a vertex all of whose children are vertices, with the
    decorations of the children equal to the fibers of sigma: T -> S, is
    replaced by one vertex decorated T;  input p of the new vertex is input
    r of child sigma(p), where r is the rank of p in its fiber;
  * epsilon: a unary vertex decorated U_n is inserted on an edge.

Everything is truncated by a vertex bound and a finite set of decorations.
"""

from __future__ import annotations

import csv
import io
import itertools
from collections import defaultdict, deque
from functools import lru_cache
from math import factorial

from . import nops
from .omegan import TreeMorphism, fibers, hom, tip_map
from .trees import NTree, U, enumerate_trees, format_tree


class UnionFind:
    """Union-find over hashable items, stored by insertion index; a class is
    represented by its first-added member."""

    def __init__(self, items=()):
        self.index = {}
        self.items = []
        self.parent = []
        for x in items:
            self.add(x)

    def add(self, x):
        if x not in self.index:
            self.index[x] = len(self.items)
            self.items.append(x)
            self.parent.append(len(self.parent))

    def __contains__(self, x):
        return x in self.index

    def _find(self, i):
        parent = self.parent
        root = i
        while parent[root] != root:
            root = parent[root]
        while parent[i] != root:
            parent[i], i = root, parent[i]
        return root

    def find(self, x):
        return self.items[self._find(self.index[x])]

    def union_index(self, i, j):
        ri, rj = self._find(i), self._find(j)
        if ri != rj:
            if ri > rj:
                ri, rj = rj, ri
            self.parent[rj] = ri

    def union(self, a, b):
        self.union_index(self.index[a], self.index[b])

    def classes(self):
        out = defaultdict(list)
        for i, x in enumerate(self.items):
            out[self._find(i)].append(x)
        return [out[r] for r in sorted(out)]


# -- terms

def is_leaf(t):
    return isinstance(t, int)


def leaves(t):
    if is_leaf(t):
        return [t]
    out = []
    for c in t[2]:
        out.extend(leaves(c))
    return out


def vertex_count(t):
    if is_leaf(t):
        return 0
    return 1 + sum(vertex_count(c) for c in t[2])


def vertices(t, path=()):
    """(path, T, a) for every vertex, in preorder."""
    if is_leaf(t):
        return []
    out = [(path, t[0], t[1])]
    for i, c in enumerate(t[2]):
        out.extend(vertices(c, path + (i,)))
    return out


def _elem_key(a):
    if a is None or isinstance(a, (int, str)):
        return (0, str(a))
    return (1, nops.expr_key(a)) if isinstance(a, (nops.Unit, nops.Gen, nops.Mu)) else (2, repr(a))


def _sort_key(t):
    if is_leaf(t):
        return (0, t)
    return (1, t[0].sort_key(), _elem_key(t[1]), tuple(_sort_key(c) for c in t[2]))


def strip(t):
    """Forget attached elements."""
    if is_leaf(t):
        return t
    return (t[0], None, tuple(strip(c) for c in t[2]))


class HnObject:
    """A bare object of h^n (no attached elements)."""
    __slots__ = ("n", "term")

    def __init__(self, n, term):
        self.n = n
        self.term = strip(term)
        check_term(self.term, n)

    @property
    def arity(self):
        return len(leaves(self.term))

    def __eq__(self, other):
        return isinstance(other, HnObject) and self.term == other.term

    def __hash__(self):
        return hash(self.term)

    def __lt__(self, other):
        return _sort_key(self.term) < _sort_key(other.term)

    def __repr__(self):
        return f"HnObject({render(self.term)!r})"


def check_term(t, n=None):
    labels = leaves(t)
    if sorted(labels) != list(range(1, len(labels) + 1)):
        raise ValueError("leaf labels must be 1..k, each once")
    for _, T, _ in vertices(t):
        if n is not None and T.height != n:
            raise ValueError("decoration of the wrong height")
    stack = [t]
    while stack:
        s = stack.pop()
        if is_leaf(s):
            continue
        if s[0].tips() != len(s[2]):
            raise ValueError(f"vertex decorated by {format_tree(s[0])} has valency {len(s[2])}")
        stack.extend(s[2])


def render(t, trees=True):
    """Leaves as labels, vertices as ``{T}(children)``; ``trees=False`` drops decorations."""
    if is_leaf(t):
        return str(t)
    inner = ",".join(render(c, trees) for c in t[2])
    head = "{" + format_tree(t[0]) + "}" if trees else "v"
    if t[1] is not None:
        head += "[" + (nops.render(t[1]) if isinstance(t[1], (nops.Unit, nops.Gen, nops.Mu)) else str(t[1])) + "]"
    return f"{head}({inner})"


def single_vertex(T: NTree, labels=None):
    labels = list(labels) if labels is not None else list(range(1, T.tips() + 1))
    return (T, None, tuple(labels))


# -- enumeration

def _by_tips(trees):
    out = defaultdict(list)
    for T in sorted(trees):
        out[T.tips()].append(T)
    return tuple(sorted((k, tuple(v)) for k, v in out.items()))


@lru_cache(maxsize=None)
def _shapes(by_tips, v, m):
    """Unlabelled terms (leaves are 0) with exactly v vertices and m leaves."""
    if v == 0:
        return (0,) if m == 1 else ()
    out = []
    for a, Ts in by_tips:
        for forest in _forests(by_tips, a, v - 1, m):
            for T in Ts:
                out.append((T, None, forest))
    return tuple(out)


@lru_cache(maxsize=None)
def _forests(by_tips, a, v, m):
    if a == 0:
        return ((),) if v == 0 and m == 0 else ()
    out = []
    for v1 in range(v + 1):
        for m1 in range(m + 1):
            firsts = _shapes(by_tips, v1, m1)
            if not firsts:
                continue
            rests = _forests(by_tips, a - 1, v - v1, m - m1)
            for f in firsts:
                for r in rests:
                    out.append((f,) + r)
    return tuple(out)


def _label(t, labels):
    it = iter(labels)

    def go(s):
        if is_leaf(s):
            return next(it)
        return (s[0], s[1], tuple(go(c) for c in s[2]))
    return go(t)


def decoration_trees(n, max_tips, max_nodes=None):
    if max_nodes is None:
        max_nodes = n * max(max_tips, 1)
    return tuple(enumerate_trees(n, max_tips, max_nodes))


def connecting_trees(n, k):
    """A small decoration set for arity k >= 1: pruned trees with 1..k tips
    and the fibers with at least one tip of morphisms between pruned trees
    with at most two tips (the non-pruned trees a binary contraction needs)."""
    if k < 1:
        raise ValueError("arity must be at least 1; use decoration_trees for nullary work")
    pruned = [T for T in enumerate_trees(n, k, n * k) if T.is_pruned() and T.tips() >= 1]
    small = [T for T in pruned if T.tips() <= 2]
    out = set(pruned)
    for T in small:
        for S in small:
            for s in hom(T, S):
                out.update(F for F in fibers(s) if F.tips() >= 1)
    return tuple(sorted(out))


def enumerate_hn(n, k, vertex_bound, trees=None, max_tips=None, max_nodes=None, exact=False):
    """Objects of h^n_k with at most ``vertex_bound`` vertices (exactly, if
    ``exact``) decorated by the given trees (default: tips <= max(k, 2),
    nodes <= n * tips bound)."""
    if trees is None:
        trees = decoration_trees(n, max_tips if max_tips is not None else max(k, 2), max_nodes)
    by_tips = _by_tips(trees)
    out = []
    for v in range(vertex_bound if exact else 0, vertex_bound + 1):
        for shape in _shapes(by_tips, v, k):
            for perm in itertools.permutations(range(1, k + 1)):
                out.append(_label(shape, perm))
    return out


# -- generating arrows

class ArrowTable:
    """(S, fiber decorations) -> [(sigma, input assignment)] over a finite
    set of trees."""

    def __init__(self, trees):
        self.trees = tuple(sorted(trees))
        self.n = self.trees[0].height
        uni = nops.universe(self.trees)
        self.table = defaultdict(list)
        for S in uni.trees:
            for s in uni.morphisms[S]:
                fs = uni.fibers[s]
                self.table[(S, fs)].append((s, _assignment(s)))
        self.unit_tree = U(self.n)

    def get(self, S, fibs):
        return self.table.get((S, tuple(fibs)), ())


def _assignment(sigma: TreeMorphism):
    """For each tip p of the source: (sigma(p), rank of p in its fiber)."""
    seen = defaultdict(int)
    out = []
    for j in tip_map(sigma).images:
        out.append((j, seen[j]))
        seen[j] += 1
    return tuple(out)


@lru_cache(maxsize=None)
def arrow_table(trees):
    return ArrowTable(trees)


class GenArrow:
    __slots__ = ("source", "target", "kind", "path", "sigma", "assign")

    def __init__(self, source, target, kind, path, sigma=None, assign=None):
        self.source, self.target, self.kind, self.path = source, target, kind, path
        self.sigma, self.assign = sigma, assign

    def __repr__(self):
        what = "gamma" if self.kind == "gamma" else "epsilon"
        return f"GenArrow({what} at {self.path}: {render(self.source)} -> {render(self.target)})"


def _local_arrows(t, path, table, operad, through):
    """Contractions at the vertex t.  With ``through``, any child may first
    get a unit vertex inserted below it (forced for leaf children), so the
    composite 'insert units, then contract' is produced as one step."""
    T, a, cs = t
    unit_tree = table.unit_tree
    if through:
        modes = itertools.product(*((False,) if is_leaf(c) else (True, False) for c in cs))
    elif any(is_leaf(c) for c in cs):
        return
    else:
        modes = [(True,) * len(cs)]
    for mode in modes:
        fibs = [c[0] if m else unit_tree for c, m in zip(cs, mode)]
        hits = table.get(T, fibs)
        if not hits:
            continue
        inputs = [c[2] if m else (c,) for c, m in zip(cs, mode)]
        elems = None
        if operad is not None:
            elems = [c[1] if m else operad.unit for c, m in zip(cs, mode)]
        kind = "gamma" if all(mode) else "gamma+units"
        for s, assign in hits:
            new_children = tuple(inputs[j - 1][r] for j, r in assign)
            if operad is None:
                elem = None
            else:
                elem = operad.mult(s, a, elems)
                if elem is None:
                    continue
            yield (s.source, elem, new_children), kind, path, s, assign


def _all_rewrites(t, table, operad, insert, through=False, path=()):
    """(new term, kind, path, sigma, assign) for every generating arrow out of t."""
    if insert:
        unit = operad.unit if operad is not None else None
        yield (table.unit_tree, unit, (t,)), "epsilon", path, None, None
    if is_leaf(t):
        return
    yield from _local_arrows(t, path, table, operad, through)
    T, a, cs = t
    for i, c in enumerate(cs):
        for new, kind, p, s, assign in _all_rewrites(c, table, operad, insert, through, path + (i,)):
            yield (T, a, cs[:i] + (new,) + cs[i + 1:]), kind, p, s, assign


def generating_arrows(obj, trees, vertex_bound=None, operad=None, through=False):
    """All generating arrows out of ``obj`` (a term or HnObject); epsilon
    insertions only while the target stays within ``vertex_bound``.  With
    ``through`` the unit-then-contract composites are listed too."""
    t = obj.term if isinstance(obj, HnObject) else obj
    table = arrow_table(tuple(sorted(trees)))
    insert = vertex_bound is None or vertex_count(t) < vertex_bound
    return [GenArrow(t, new, kind, path, s, assign)
            for new, kind, path, s, assign in _all_rewrites(t, table, operad, insert, through)]


# -- pi_0

def _components(objects, trees, vertex_bound, operad=None, through=True):
    # epsilon edges are left out: t -> t + unit is undone by a gamma edge
    # out of t + unit, which is enumerated whenever t + unit is in bounds.
    # The bare leaf is the exception.
    uf = UnionFind(objects)
    index = uf.index
    table = arrow_table(tuple(sorted(trees)))
    if through:
        cache = {}
        targets = lambda t: _targets(t, table, operad, cache)
    else:
        targets = lambda t: [r[0] for r in _all_rewrites(t, table, operad, False, through)]
    for i, t in enumerate(uf.items):
        if is_leaf(t):
            j = index.get((table.unit_tree, operad.unit if operad is not None else None, (t,)))
            if j is not None:
                uf.union_index(i, j)
            continue
        for new in targets(t):
            j = index.get(new)
            if j is not None:
                uf.union_index(i, j)
    return uf


def _targets(t, table, operad, cache):
    """Targets of the contraction arrows out of t, memoized on subterms."""
    hit = cache.get(t)
    if hit is not None:
        return hit
    if is_leaf(t):
        out = ()
    else:
        out = [r[0] for r in _local_arrows(t, (), table, operad, True)]
        T, a, cs = t
        for i, c in enumerate(cs):
            for new in _targets(c, table, operad, cache):
                out.append((T, a, cs[:i] + (new,) + cs[i + 1:]))
        out = tuple(out)
    cache[t] = out
    return out


def _bounded_classes(n, k, vertex_bound, trees, slack=0):
    """Components of the objects with at most ``vertex_bound`` vertices,
    joined by zig-zags through objects with at most ``vertex_bound + slack``."""
    search = vertex_bound + slack
    uf = _components(enumerate_hn(n, k, search, trees), trees, search)
    small = {}
    for t in enumerate_hn(n, k, vertex_bound, trees):
        small.setdefault(uf.find(t), []).append(t)
    return list(small.values())


def pi0(n, k, vertex_bound, trees=None, max_tips=None, max_nodes=None, slack=0, history=2):
    """Number of connected components of the bounded h^n_k.

    Objects have at most ``vertex_bound`` vertices.  Edges are the generating
    arrows plus the composites 'insert units on inputs of a vertex, then
    contract it', which would otherwise need room above the bound; ``slack``
    allows zig-zags through that many extra vertices.  The report lists the
    counts at the ``history`` smaller bounds.
    """
    if trees is None:
        trees = decoration_trees(n, max_tips if max_tips is not None else max(k, 2), max_nodes)
    trees = tuple(sorted(trees))
    counts = {}
    for v in range(max(1, vertex_bound - history), vertex_bound + 1):
        counts[v] = len(_bounded_classes(n, k, v, trees, slack))
    series = [counts[v] for v in sorted(counts)]
    report = {
        "n": n, "k": k, "vertex_bound": vertex_bound, "slack": slack,
        "decorations": len(trees), "objects": len(enumerate_hn(n, k, vertex_bound, trees)),
        "counts": counts,
        "stable": len(series) > history and len(set(series[-(history + 1):])) == 1,
        "changed_at_last_increment": len(series) > 1 and series[-1] != series[-2],
    }
    return counts[vertex_bound], report


def components(n, k, vertex_bound, trees, slack=0):
    """Components of the bounded h^n_k as lists of terms."""
    return _bounded_classes(n, k, vertex_bound, tuple(sorted(trees)), slack)


# -- symmetrisation

def _decorate(t, operad):
    """Every way of attaching operad elements to the vertices of t."""
    if is_leaf(t):
        return [t]
    T, _, cs = t
    out = []
    for elem in operad.arity(T):
        for kids in itertools.product(*(_decorate(c, operad) for c in cs)):
            out.append((T, elem, kids))
    return out


def symmetrise(A: nops.FinNOperad, k, vertex_bound, trees=None):
    """Classes of the colimit of A~ over the bounded h^n_k.  Returns a list
    of (representative, size) with single-vertex representatives first."""
    trees = tuple(sorted(trees if trees is not None else A.trees))
    missing = [T for T in trees if T not in A.elements]
    if missing:
        raise ValueError(f"operad has no data in arity {format_tree(missing[0])}")
    items = []
    for t in enumerate_hn(A.n, k, vertex_bound, trees):
        items.extend(_decorate(t, A))
    uf = _components(items, trees, vertex_bound, operad=A)
    out = []
    for cls in uf.classes():
        singles = [x for x in cls if not is_leaf(x) and vertex_count(x) == 1]
        rep = singles[0] if singles else cls[0]
        out.append((rep, len(cls)))
    return out


def free_operad_symmetrisation_oracle(A: nops.FinNOperad, k):
    """Sigma_k x A_k, the expected size of Sym_1(A)_k."""
    return factorial(k) * sum(len(v) for T, v in A.elements.items() if T.tips() == k)


# -- H^oo and the comparison zeta

def zeta(obj):
    """Forget decorations: leaves stay labels, vertices become tuples of children."""
    t = obj.term if isinstance(obj, HnObject) else obj
    if is_leaf(t):
        return t
    return tuple(zeta(c) for c in t[2])


def render_inf(v):
    if isinstance(v, int):
        return str(v)
    return "(" + ",".join(render_inf(c) for c in v) + ")"


def _inf_leaves(v):
    if isinstance(v, int):
        return [v]
    return [x for c in v for x in _inf_leaves(c)]


def corolla(labels):
    return tuple(labels)


def hinf_arrows(v):
    """Generating arrows of H^oo out of v: contraction of an internal edge,
    dropping an unlabelled nullary vertex, and the label permutations."""
    out = []

    def go(s, wrap):
        if isinstance(s, int):
            return
        for i, c in enumerate(s):
            if isinstance(c, tuple):
                merged = s[:i] + c + s[i + 1:]
                out.append(("contract", wrap(merged)))
                if c == ():
                    out.append(("drop", wrap(s[:i] + s[i + 1:])))
            go(c, lambda new, i=i, s=s: wrap(s[:i] + (new,) + s[i + 1:]))

    go(v, lambda x: x)
    labels = _inf_leaves(v)
    for p in itertools.permutations(sorted(labels)):
        rename = dict(zip(sorted(labels), p))
        w = _relabel_inf(v, rename)
        if w != v:
            out.append(("permute", w))
    return out


def _relabel_inf(v, rename):
    if isinstance(v, int):
        return rename[v]
    return tuple(_relabel_inf(c, rename) for c in v)


def contract_to_corolla(v):
    """A path of H^oo contraction arrows from v to the corolla on its labels."""
    path = [v]
    while True:
        step = None
        for kind, w in hinf_arrows(path[-1]):
            if kind in ("contract", "drop"):
                step = w
                break
        if step is None:
            return path
        path.append(step)


def finality_probe(n, k, vertex_bound, trees=None, max_tips=None, max_nodes=None):
    """For each H^oo generating arrow between images of bounded objects, check
    that all lifts of its two endpoints lie in one component of the bounded
    h^n_k (a zig-zag joins them).  Returns a report dict."""
    if trees is None:
        trees = decoration_trees(n, max_tips if max_tips is not None else max(k, 2), max_nodes)
    trees = tuple(sorted(trees))
    objs = enumerate_hn(n, k, vertex_bound, trees)
    uf = _components(objs, trees, vertex_bound)
    lifts = defaultdict(list)
    for t in objs:
        lifts[zeta(t)].append(t)
    probed = failures = 0
    failed = []
    for v in sorted(lifts, key=render_inf):
        for kind, w in hinf_arrows(v):
            if w not in lifts:
                continue
            for a in lifts[v]:
                for b in lifts[w]:
                    probed += 1
                    if uf.find(a) != uf.find(b):
                        failures += 1
                        if len(failed) < 10:
                            failed.append((render(a), render(b), kind))
    return {"n": n, "k": k, "vertex_bound": vertex_bound, "hinf_objects": len(lifts),
            "probed": probed, "failures": failures, "examples": failed, "ok": failures == 0}


# -- H^n as expressions and the free n-operad formula

def enumerate_Hn(n, T, expr_depth, trees):
    """Objects of H^n_T: normal-form expressions over one generator per tree."""
    return nops.normal_forms(T, expr_depth, trees)


def freeop_count_check(C, T, expr_depth, trees):
    """(|F_n(C)_T|, sum over W in H^n_T of prod |C(tree of g)|, equal?)."""
    free = nops.free_n_operad(C, expr_depth, trees)
    lhs = len(free.arity(T))
    rhs = 0
    for W in enumerate_Hn(T.height, T, expr_depth, trees):
        prod = 1
        for g in nops.generators(W):
            prod *= len(C.get(g.tree, ()))
        rhs += prod
    return lhs, rhs, lhs == rhs


# -- nerves

def _atoms_identity(t, path=()):
    """Atom map of the identity arrow: target atom -> source atom data."""
    out = {}
    if is_leaf(t):
        out[("e", path)] = path
        return out
    out[("v", path)] = frozenset([path])
    out[("e", path)] = path
    for i, c in enumerate(t[2]):
        out.update(_atoms_identity(c, path + (i,)))
    return out


def _paths(t, path=()):
    yield path, t
    if not is_leaf(t):
        for i, c in enumerate(t[2]):
            yield from _paths(c, path + (i,))


def _step_map(old, new, kind, at, assign):
    """For a generating arrow old -> new, send each atom of new to data in old:
    vertices to sets of old vertices, edges to old edges."""
    def back(p):
        """Old path of the node now at p (not inside the changed spot)."""
        if p[:len(at)] != at:
            return p
        rest = p[len(at):]
        if kind == "epsilon":
            return at + rest[1:]
        p0, rest2 = rest[0], rest[1:]
        j, r = assign[p0]
        return at + (j - 1, r) + rest2

    out = {}
    for p, node in _paths(new):
        if kind == "epsilon" and p == at:
            out[("v", p)] = frozenset()
            out[("e", p)] = at
            continue
        if kind == "epsilon" and p == at + (0,):
            out[("e", p)] = at
            if not is_leaf(node):
                out[("v", p)] = frozenset([at])
            continue
        if kind == "gamma" and p == at:
            src = old
            for i in at:
                src = src[2][i]
            out[("v", p)] = frozenset([at] + [at + (j,) for j in range(len(src[2]))])
            out[("e", p)] = at
            continue
        q = back(p)
        out[("e", p)] = q
        if not is_leaf(node):
            out[("v", p)] = frozenset([q])
    return out


def _compose_maps(m_new, m_old):
    """new -> mid composed with mid -> source."""
    out = {}
    for atom, data in m_new.items():
        if atom[0] == "v":
            s = set()
            for p in data:
                s |= m_old[("v", p)]
            out[atom] = frozenset(s)
        else:
            out[atom] = m_old[("e", data)]
    return out


def _freeze(m):
    return tuple(sorted(((a, tuple(sorted(d)) if isinstance(d, frozenset) else d) for a, d in m.items()),
                        key=repr))


def hom_out(t, trees, vertex_bound, path_bound):
    """Morphisms out of t that are composites of generating arrows through
    objects with at most ``path_bound`` vertices, told apart by what they do
    to vertices and edges; returns {target: number of morphisms} for targets
    with at most ``vertex_bound`` vertices."""
    table = arrow_table(tuple(sorted(trees)))
    start = (t, _freeze(_atoms_identity(t)))
    maps = {start: _atoms_identity(t)}
    queue = deque([start])
    while queue:
        state = queue.popleft()
        cur, _ = state
        m = maps[state]
        insert = vertex_count(cur) < path_bound
        for new, kind, at, s, assign in _all_rewrites(cur, table, None, insert):
            step = _step_map(cur, new, kind, at, assign)
            comp = _compose_maps(step, m)
            key = (new, _freeze(comp))
            if key not in maps:
                maps[key] = comp
                queue.append(key)
    out = defaultdict(int)
    for (y, _) in maps:
        if vertex_count(y) <= vertex_bound:
            out[y] += 1
    return dict(out)


def nerve_lhs(n, k, p, vertex_bound, trees, path_bound=None):
    """Number of p-chains X_0 -> ... -> X_p in the bounded h^n_k."""
    trees = tuple(sorted(trees))
    if path_bound is None:
        path_bound = 2 * vertex_bound + k
    objs = enumerate_hn(n, k, vertex_bound, trees)
    if p == 0:
        return len(objs)
    homs = {x: hom_out(x, trees, vertex_bound, path_bound) for x in objs}
    # chains_p(x) = number of p-chains starting at x
    chains = {x: 1 for x in objs}
    for _ in range(p):
        chains = {x: sum(c * chains.get(y, 0) for y, c in homs[x].items()) for x in objs}
    return sum(chains.values())


def _weight(expr):
    return len(nops.generators(expr))


def iterated_free(p, vertex_bound, trees):
    """F_n^p(1) truncated: per tree, a list of (element, weights) where the
    weights count generators layer by layer, outermost first."""
    trees = tuple(sorted(trees))
    if p == 0:
        return {T: [("*", ())] for T in trees}
    inner = iterated_free(p - 1, vertex_bound, trees)
    C = {T: [e for e, _ in v] for T, v in inner.items()}
    wt = {T: {e: w for e, w in v} for T, v in inner.items()}
    free = nops.free_n_operad({T: list(range(len(C[T]))) for T in trees}, vertex_bound, trees)
    out = {}
    for T in trees:
        pool = []
        for e in free.arity(T):
            gens = nops.generators(e)
            w = [len(gens)]
            tail = [0] * (p - 1)
            for g in gens:
                for i, x in enumerate(wt[g.tree][C[g.tree][g.label]]):
                    tail[i] += x
            w.extend(tail)
            if all(x <= vertex_bound for x in w):
                pool.append((e, tuple(w)))
        out[T] = pool
    return out


def nerve_rhs(n, k, p, vertex_bound, trees):
    """|Sym_n(F_n(F_n^p(1)))_k| as the free symmetric operad on the
    symmetrised collection F_n^p(1): labelled planar trees decorated by
    elements of F_n^p(1), every layer with at most ``vertex_bound`` vertices."""
    trees = tuple(sorted(trees))
    pools = iterated_free(p, vertex_bound, trees)
    total = 0
    for shape in itertools.chain.from_iterable(
            _shapes(_by_tips(trees), v, k) for v in range(vertex_bound + 1)):
        counts = {(0,) * p: 1}
        for _, T, _ in vertices(shape):
            new = defaultdict(int)
            for w0, c in counts.items():
                for _, w in pools[T]:
                    w1 = tuple(a + b for a, b in zip(w0, w))
                    if all(x <= vertex_bound for x in w1):
                        new[w1] += c
            counts = new
        total += sum(counts.values())
    return total * factorial(k)


def nerve_compare(n, k, p, vertex_bound, trees=None, max_tips=None, max_nodes=None, path_bound=None):
    """(chains in the bounded h^n_k, |Sym_n of the degree-p bar term|_k)."""
    if not 0 <= p <= 2:
        raise ValueError("simplicial degree must be 0, 1 or 2")
    if trees is None:
        trees = decoration_trees(n, max_tips if max_tips is not None else max(k, 2), max_nodes)
    return nerve_lhs(n, k, p, vertex_bound, trees, path_bound), nerve_rhs(n, k, p, vertex_bound, trees)


# -- export

def category_dot(n, k, vertex_bound, trees, name="h"):
    trees = tuple(sorted(trees))
    objs = sorted(enumerate_hn(n, k, vertex_bound, trees), key=_sort_key)
    ids = {t: f"o{i}" for i, t in enumerate(objs)}
    table = arrow_table(trees)
    lines = [f"digraph {name} {{", f'  label="h^{n}_{k}, vertex bound {vertex_bound}, '
             f'{len(trees)} decorations";']
    for t in objs:
        lines.append(f'  {ids[t]} [label="{render(t)}"];')
    for t in objs:
        insert = vertex_count(t) < vertex_bound
        for new, kind, *_ in _all_rewrites(t, table, None, insert):
            if new in ids:
                style = "" if kind == "gamma" else " [style=dashed]"
                lines.append(f"  {ids[t]} -> {ids[new]}{style};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def counts_csv(rows, fields):
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=fields, lineterminator="\n")
    w.writeheader()
    for r in rows:
        w.writerow({f: r.get(f, "") for f in fields})
    return buf.getvalue()
