"""Linear expressions in n associative operations o0, ..., o(n-1) and the
order generated by directed middle interchange.

An expression is stored flattened: a symbol is an ``int``; a compound is
``(i, (c_1, ..., c_m))`` with m >= 2 and no child of top level i.  ``None``
is the empty expression.  Arrows go from ``(a oj c) oi (b oj d)`` to
``(a oi b) oj (c oi d)`` for j < i, so ``1 o1 2 <= 1 o0 2``.
"""

from __future__ import annotations

import itertools
import re
from collections import deque
from functools import lru_cache

from .ordmaps import Perm
from . import omegan
from .trees import NTree, canonical_decomposition, enumerate_trees


class MExpression:
    __slots__ = ("n", "term", "_hash")

    def __init__(self, n, term):
        self.n = n
        self.term = _flatten(term)
        self._hash = hash((n, self.term))
        syms = symbols_of(self.term)
        if len(set(syms)) != len(syms):
            raise ValueError("each symbol must occur once")
        for lvl in _levels(self.term):
            if not 0 <= lvl < n:
                raise ValueError(f"operation o{lvl} does not exist for n = {n}")

    def symbols(self):
        return symbols_of(self.term)

    def __len__(self):
        return len(self.symbols())

    def __eq__(self, other):
        return isinstance(other, MExpression) and self.n == other.n and self.term == other.term

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"MExpression({self.n}, {render(self)!r})"

    def __str__(self):
        return render(self)


def _levels(t):
    if t is None or isinstance(t, int):
        return []
    out = [t[0]]
    for c in t[1]:
        out.extend(_levels(c))
    return out


def symbols_of(t):
    if t is None:
        return []
    if isinstance(t, int):
        return [t]
    out = []
    for c in t[1]:
        out.extend(symbols_of(c))
    return out


def _flatten(t):
    if t is None or isinstance(t, int):
        return t
    i, cs = t
    out = []
    for c in cs:
        c = _flatten(c)
        if c is None:
            continue
        if not isinstance(c, int) and c[0] == i:
            out.extend(c[1])
        else:
            out.append(c)
    if not out:
        return None
    if len(out) == 1:
        return out[0]
    return (i, tuple(out))


def op(i, *parts):
    """Build ``p_1 oi p_2 oi ...`` from ints, raw terms or expressions."""
    return (i, tuple(p.term if isinstance(p, MExpression) else p for p in parts))


# -- text

def render(e) -> str:
    t = e.term if isinstance(e, MExpression) else e
    if t is None:
        return "()"

    def go(t, top):
        if isinstance(t, int):
            return str(t)
        s = f" o{t[0]} ".join(go(c, False) for c in t[1])
        return s if top else f"({s})"

    return go(t, True)


_TOKEN = re.compile(r"\s*(\d+|o\d+|\(|\))")


def parse(text: str, n=None) -> MExpression:
    toks = _TOKEN.findall(text)
    if "".join(toks) != re.sub(r"\s+", "", text):
        raise ValueError(f"cannot parse {text!r}")
    pos = 0

    def expr():
        nonlocal pos
        parts = [atom()]
        lvl = None
        while pos < len(toks) and toks[pos].startswith("o"):
            here = int(toks[pos][1:])
            if lvl is not None and here != lvl:
                raise ValueError("mixed operations need parentheses")
            lvl = here
            pos += 1
            parts.append(atom())
        return parts[0] if lvl is None else (lvl, tuple(parts))

    def atom():
        nonlocal pos
        tok = toks[pos]
        pos += 1
        if tok == "(":
            if toks[pos] == ")":
                pos += 1
                return None
            t = expr()
            if toks[pos] != ")":
                raise ValueError("unbalanced parentheses")
            pos += 1
            return t
        return int(tok)

    if not toks or toks == ["(", ")"]:
        return MExpression(n or 1, None)
    t = expr()
    if pos != len(toks):
        raise ValueError(f"trailing input in {text!r}")
    levels = _levels(_flatten(t))
    return MExpression(n if n is not None else (max(levels) + 1 if levels else 1), t)


# -- pairs

def _paths(t, path=()):
    """symbol -> list of (level, child index) from the root down."""
    if t is None:
        return {}
    if isinstance(t, int):
        return {t: path}
    out = {}
    for idx, c in enumerate(t[1]):
        out.update(_paths(c, path + ((t[0], idx),)))
    return out


def pair_level(expr: MExpression, u, v):
    """(level of the operation joining u and v, the symbol on the left)."""
    paths = _paths(expr.term)
    if u not in paths or v not in paths:
        raise KeyError(f"symbol {u if u not in paths else v} does not occur")
    if u == v:
        raise ValueError("need two different symbols")
    pu, pv = paths[u], paths[v]
    for a, b in zip(pu, pv):
        if a != b:
            return a[0], (u if a[1] < b[1] else v)
    raise AssertionError("distinct symbols must separate")


def to_complete_graph(expr: MExpression):
    """{(u, v): (level, left symbol)} over pairs u < v."""
    syms = sorted(expr.symbols())
    paths = _paths(expr.term)
    table = {}
    for u, v in itertools.combinations(syms, 2):
        pu, pv = paths[u], paths[v]
        for a, b in zip(pu, pv):
            if a != b:
                table[(u, v)] = (a[0], u if a[1] < b[1] else v)
                break
    return table


def leq_K(a, b) -> bool:
    """Pairwise order on complete-graph labelings."""
    if set(a) != set(b):
        raise ValueError("labelings over different symbol sets")
    for pair, (i, left) in a.items():
        j, left2 = b[pair]
        if left2 == left:
            if j > i:
                return False
        elif j >= i:
            return False
    return True


def leq(A: MExpression, B: MExpression) -> bool:
    """A -> B exists: every pair joined by oi with u left in A is joined in B
    by oj, j <= i, with u left, or by oj, j < i, with u right."""
    if A.n != B.n or sorted(A.symbols()) != sorted(B.symbols()):
        raise ValueError("expressions over different symbol sets")
    pa, pb = _paths(A.term), _paths(B.term)
    for u, v in itertools.combinations(sorted(pa), 2):
        i, lu = _join(pa[u], pa[v], u, v)
        j, lu2 = _join(pb[u], pb[v], u, v)
        if lu2 == lu:
            if j > i:
                return False
        elif j >= i:
            return False
    return True


def leq_m(A, B):
    """The opposite order, the one of m^n."""
    return leq(B, A)


def _join(pu, pv, u, v):
    for a, b in zip(pu, pv):
        if a != b:
            return a[0], (u if a[1] < b[1] else v)
    raise AssertionError


def is_realizable(table, n):
    """Every restriction to three symbols comes from an expression."""
    syms = sorted({s for p in table for s in p})
    good = {}
    for e in objects(n, 3):
        good.setdefault(tuple(sorted(to_complete_graph(e).items())), True)
    for a, b, c in itertools.combinations(syms, 3):
        rename = {a: 1, b: 2, c: 3}
        sub = {}
        for (u, v) in ((a, b), (a, c), (b, c)):
            lvl, left = table[(u, v)]
            sub[(rename[u], rename[v])] = (lvl, rename[left])
        if tuple(sorted(sub.items())) not in good:
            return False
    return True


# -- operad structure

def substitute(outer: MExpression, inners) -> MExpression:
    """Replace symbol j of the outer expression by inners[j-1], renumbering
    the inner symbols blockwise; empty inners delete their symbol."""
    inners = list(inners)
    syms = outer.symbols()
    if sorted(syms) != list(range(1, len(inners) + 1)):
        raise ValueError("outer expression must use the symbols 1..k for k inners")
    offsets, acc = {}, 0
    for j, e in enumerate(inners, 1):
        offsets[j] = acc
        acc += len(e)

    def shift(t, d):
        if t is None:
            return None
        if isinstance(t, int):
            return t + d
        return (t[0], tuple(shift(c, d) for c in t[1]))

    def go(t):
        if t is None:
            return None
        if isinstance(t, int):
            e = inners[t - 1]
            return shift(e.term, offsets[t])
        return (t[0], tuple(go(c) for c in t[1]))

    n = max([outer.n] + [e.n for e in inners])
    return MExpression(n, go(outer.term))


def perm_act(p: Perm, expr: MExpression) -> MExpression:
    """Relabel each symbol s as p(s)."""
    def go(t):
        if t is None:
            return None
        if isinstance(t, int):
            return p(t)
        return (t[0], tuple(go(c) for c in t[1]))
    return MExpression(expr.n, go(expr.term))


def a_tree(T: NTree) -> MExpression:
    """The expression attached to a tree by splitting along the canonical
    decomposition; tips are the symbols, in order."""
    n = T.height
    if T.tips() == 0:
        return MExpression(n, None)
    if T.tips() == 1:
        return MExpression(n, 1)
    l, pieces = canonical_decomposition(T)
    outer = MExpression(n, (l, tuple(range(1, len(pieces) + 1))) if len(pieces) > 1 else 1)
    return substitute(outer, [a_tree(P) for P in pieces])


def verify_internal_operad(n, trees=None, max_tips=4, max_nodes=None, dual=False):
    """Check mu_sigma: m(a_S; a_T1, ..., a_Tk) -> pi(sigma) a_T for every
    sigma between the given trees.  Returns (number checked, failures)."""
    if trees is None:
        trees = enumerate_trees(n, max_tips, max_nodes if max_nodes is not None else n * max_tips)
    exprs = {T: a_tree(T) for T in trees}
    failures = []
    count = 0
    for S in trees:
        for T in trees:
            for s in omegan.hom(T, S):
                inner = [a_tree(F) for F in omegan.fibers(s)]
                lhs = substitute(exprs[S], inner)
                rhs = perm_act(omegan.pi(s), exprs[T])
                ok = leq_m(rhs, lhs) if dual else leq(lhs, rhs)
                count += 1
                if not ok:
                    failures.append((s, render(lhs), render(rhs)))
    return count, failures


# -- objects and the rewrite oracle

@lru_cache(maxsize=None)
def _terms(n, syms, exclude):
    """Flattened terms over the ordered tuple of symbols ``syms`` in any
    arrangement, whose top operation differs from ``exclude``."""
    syms = tuple(syms)
    if len(syms) == 1:
        return (syms[0],)
    out = []
    for i in range(n):
        if i == exclude:
            continue
        for blocks in _ordered_partitions(syms):
            if len(blocks) < 2:
                continue
            choices = [_terms(n, b, i) for b in blocks]
            for cs in itertools.product(*choices):
                out.append((i, tuple(cs)))
    return tuple(out)


def _ordered_partitions(syms):
    """Ordered set partitions of syms (blocks keep increasing order inside)."""
    syms = list(syms)
    if not syms:
        yield []
        return
    for labels in itertools.product(range(len(syms)), repeat=len(syms)):
        used = sorted(set(labels))
        if used != list(range(len(used))):
            continue
        yield [tuple(s for s, l in zip(syms, labels) if l == b) for b in used]


def objects(n, k):
    """All objects of the expression poset in arity k, each symbol once."""
    if k == 0:
        return [MExpression(n, None)]
    seen = set()
    out = []
    for t in _terms(n, tuple(range(1, k + 1)), -1):
        key = _flatten(t)
        if key not in seen:
            seen.add(key)
            out.append(MExpression(n, key))
    return sorted(out, key=lambda e: render(e))


def _splits(t, j):
    """Ways to write t as X oj Y with X or Y possibly empty."""
    out = [(t, None), (None, t)]
    if not isinstance(t, int) and t is not None and t[0] == j:
        cs = t[1]
        for cut in range(1, len(cs)):
            out.append((_flatten((j, cs[:cut])), _flatten((j, cs[cut:]))))
    return out


def rewrites(t, n):
    """Terms reachable by one interchange step anywhere inside t."""
    out = set()
    if t is None or isinstance(t, int):
        return out
    i, cs = t
    for p in range(len(cs) - 1):
        a, b = cs[p], cs[p + 1]
        for j in range(i):
            for X, Y in _splits(a, j):
                for Z, W in _splits(b, j):
                    new = (j, ((i, (X, Z)), (i, (Y, W))))
                    new = _flatten(new)
                    whole = _flatten((i, cs[:p] + (new,) + cs[p + 2:]))
                    if whole != t:
                        out.add(whole)
    for p, c in enumerate(cs):
        for r in rewrites(c, n):
            out.add(_flatten((i, cs[:p] + (r,) + cs[p + 1:])))
    return out


def reachable(A: MExpression):
    """Everything reachable from A by interchange steps (breadth first)."""
    seen = {A.term}
    queue = deque([A.term])
    while queue:
        t = queue.popleft()
        for r in rewrites(t, A.n):
            if r not in seen:
                seen.add(r)
                queue.append(r)
    return {MExpression(A.n, t) for t in seen}


def covering_arrows(n, k):
    objs = objects(n, k)
    below = {A: {B for B in objs if B != A and leq(A, B)} for A in objs}
    arrows = []
    for A in objs:
        for B in below[A]:
            if not any(B in below[C] for C in below[A] if C != B):
                arrows.append((A, B))
    return sorted(arrows, key=lambda ab: (render(ab[0]), render(ab[1])))


def hasse_dot(n, k, name="poset"):
    lines = [f"digraph {name} {{", "  rankdir=BT;"]
    objs = objects(n, k)
    ids = {e: f"x{idx}" for idx, e in enumerate(objs)}
    for e in objs:
        lines.append(f'  {ids[e]} [label="{render(e)}"];')
    for A, B in covering_arrows(n, k):
        lines.append(f"  {ids[A]} -> {ids[B]};")
    lines.append("}")
    return "\n".join(lines) + "\n"
