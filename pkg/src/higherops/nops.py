"""Tree-indexed operads over finite sets, free ones built from admissible
expressions, and algebra maps into endomorphism operads."""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from functools import lru_cache

from . import omegan
from .omegan import TreeMorphism, compose, fiber_morphism, fibers, hom, identity, terminal
from .trees import NTree, U, format_tree, parse_tree


class FinNOperad:
    """An n-operad in finite sets, known on a finite set of arities.

    ``mult(sigma, x, ys)`` returns the composite in arity ``sigma.source`` or
    None when the result falls outside the stored arities (truncated operads).
    """

    def __init__(self, n, elements, unit, mult, name="", bounds=None):
        self.n = n
        self.elements = {T: tuple(v) for T, v in elements.items()}
        self.unit = unit
        self._mult = mult
        self.name = name
        self.bounds = dict(bounds or {})
        for T in self.elements:
            if T.height != n:
                raise ValueError(f"arity {T} does not have height {n}")

    @property
    def trees(self):
        return sorted(self.elements)

    def arity(self, T):
        return self.elements.get(T, ())

    def mult(self, sigma: TreeMorphism, x, ys):
        return self._mult(sigma, x, tuple(ys))

    def morphisms(self, target=None):
        """Every sigma: T -> S between stored arities whose fibers are stored too."""
        known = set(self.elements)
        targets = [target] if target is not None else self.trees
        out = []
        for S in targets:
            for T in self.trees:
                for s in hom(T, S):
                    if all(F in known for F in fibers(s)):
                        out.append(s)
        return out

    def tabulate(self, morphisms=None):
        """Materialize the multiplication as a dict keyed by (sigma, x, ys)."""
        table = {}
        for s in (morphisms if morphisms is not None else self.morphisms()):
            fs = fibers(s)
            for x in self.arity(s.target):
                for ys in itertools.product(*(self.arity(F) for F in fs)):
                    table[(s, x, ys)] = self.mult(s, x, ys)
        return table

    def __repr__(self):
        sizes = {format_tree(T): len(v) for T, v in sorted(self.elements.items())}
        return f"FinNOperad(n={self.n}, name={self.name!r}, sizes={sizes})"


def table_operad(n, elements, unit, table, name="", bounds=None):
    def mult(sigma, x, ys):
        return table.get((sigma, x, tuple(ys)))
    op = FinNOperad(n, elements, unit, mult, name=name, bounds=bounds)
    op.table = table
    return op


def terminal_operad(trees):
    trees = list(trees)
    n = trees[0].height
    return FinNOperad(n, {T: ("*",) for T in trees}, "*", lambda s, x, ys: "*", name="terminal")


def _instances(pools, limit, rng):
    """Product of pools, or a deterministic random sample of at most ``limit`` tuples."""
    total = 1
    for p in pools:
        total *= len(p)
    if limit is None or total <= limit:
        return itertools.product(*pools)
    return (tuple(rng.choice(p) for p in pools) for _ in range(limit))


def validate(op: FinNOperad, limit=None, seed=0, morphisms=None):
    """List every failing unit or associativity instance over the stored arities.

    ``limit`` caps the number of element tuples tried per diagram (sampled
    with a fixed seed); None means exhaustive.
    """
    rng = random.Random(seed)
    report = []
    known = set(op.elements)
    n = op.n
    Un = U(n)
    if Un not in known or op.unit not in op.arity(Un):
        report.append("unit is missing from arity U_n")
        return report
    for T in op.trees:
        idT = identity(T)
        if all(F in known for F in fibers(idT)):
            for x in op.arity(T):
                got = op.mult(idT, x, (op.unit,) * T.tips())
                if got is not None and got != x:
                    report.append(f"right unit fails at {format_tree(T)} on {x!r}")
        t = terminal(T)
        for x in op.arity(T):
            got = op.mult(t, op.unit, (x,))
            if got is not None and got != x:
                report.append(f"left unit fails at {format_tree(T)} on {x!r}")
    morphisms = morphisms if morphisms is not None else op.morphisms()
    ok = set(morphisms)
    by_source = {}
    for s in morphisms:
        by_source.setdefault(s.source, []).append(s)
    for sigma in morphisms:
        S = sigma.target
        for omega in by_source.get(S, []):
            so = compose(sigma, omega)
            if so not in ok:
                continue
            k = omega.target.tips()
            parts = [fiber_morphism(sigma, omega, j) for j in range(1, k + 1)]
            if any(p not in ok for p in parts):
                continue
            fs_sigma = fibers(sigma)
            fs_omega = fibers(omega)
            groups = [[i for i in range(1, S.tips() + 1) if omega.level(n)[i - 1] == j]
                      for j in range(1, k + 1)]
            pools = [op.arity(omega.target)] + [op.arity(F) for F in fs_omega] + \
                [op.arity(F) for F in fs_sigma]
            for inst in _instances(pools, limit, rng):
                x = inst[0]
                ys = inst[1:1 + k]
                zs = inst[1 + k:]
                inner = op.mult(omega, x, ys)
                if inner is None:
                    continue
                lhs = op.mult(sigma, inner, zs)
                rs = []
                for j, p in enumerate(parts):
                    r = op.mult(p, ys[j], tuple(zs[i - 1] for i in groups[j]))
                    if r is None:
                        break
                    rs.append(r)
                else:
                    rhs = op.mult(so, x, rs)
                    if lhs is None or rhs is None:
                        continue
                    if lhs != rhs:
                        report.append(
                            f"associativity fails for sigma={omegan.format_morphism(sigma)} "
                            f"omega={omegan.format_morphism(omega)} on {inst!r}")
                        break
    return report


# -- admissible expressions

@dataclass(frozen=True)
class Unit:
    n: int

    def arity(self):
        return U(self.n)


@dataclass(frozen=True)
class Gen:
    tree: NTree
    label: object = "*"

    def arity(self):
        return self.tree


@dataclass(frozen=True)
class Mu:
    sigma: TreeMorphism
    head: object
    args: tuple

    def arity(self):
        return self.sigma.source


def arity(expr):
    return expr.arity()


def check_expr(expr):
    """Raise ValueError unless every mu node has matching arities."""
    if isinstance(expr, (Unit, Gen)):
        return
    if not isinstance(expr, Mu):
        raise ValueError(f"not an admissible expression: {expr!r}")
    if expr.head.arity() != expr.sigma.target:
        raise ValueError("head arity differs from the target of sigma")
    fs = fibers(expr.sigma)
    if len(fs) != len(expr.args):
        raise ValueError("one argument per tip of the target is needed")
    for F, a in zip(fs, expr.args):
        if a.arity() != F:
            raise ValueError("argument arity differs from the fiber")
    check_expr(expr.head)
    for a in expr.args:
        check_expr(a)


def depth(expr):
    """Number of generators on the longest root path."""
    if isinstance(expr, Unit):
        return 0
    if isinstance(expr, Gen):
        return 1
    return depth(expr.head) + max((depth(a) for a in expr.args), default=0)


def generators(expr):
    """Generators of an expression, depth first."""
    if isinstance(expr, Gen):
        return [expr]
    if isinstance(expr, Unit):
        return []
    out = generators(expr.head)
    for a in expr.args:
        out.extend(generators(a))
    return out


def _reduce(sigma, head, args):
    """Normal form of mu_sigma(head; args) for head and args in normal form."""
    if isinstance(head, Unit):
        return args[0]
    if isinstance(head, Gen):
        if sigma.is_identity() and all(isinstance(a, Unit) for a in args):
            return head
        return Mu(sigma, head, tuple(args))
    # head = mu_omega(g; bs): push sigma inside
    omega, g, bs = head.sigma, head.head, head.args
    n = sigma.height
    S = sigma.target
    k = omega.target.tips()
    inner = []
    for j in range(1, k + 1):
        part = fiber_morphism(sigma, omega, j)
        zs = tuple(args[i - 1] for i in range(1, S.tips() + 1) if omega.level(n)[i - 1] == j)
        inner.append(_reduce(part, bs[j - 1], zs))
    return _reduce(compose(sigma, omega), g, tuple(inner))


def normalize(expr):
    """Canonical representative: associativity pushed towards the head and
    the unit laws applied.  mu_sigma(S; e, ..., e) survives unless sigma is
    an identity."""
    check_expr(expr)
    return _normalize(expr)


def _normalize(expr):
    if isinstance(expr, (Unit, Gen)):
        return expr
    return _reduce(expr.sigma, _normalize(expr.head), tuple(_normalize(a) for a in expr.args))


def is_normal(expr):
    return _normalize(expr) == expr


def expr_to_term(expr):
    """Nested prefix term: "e", ["g", tree, label] or ["mu", morphism, head, [args]]."""
    if isinstance(expr, Unit):
        return "e"
    if isinstance(expr, Gen):
        return ["g", format_tree(expr.tree), expr.label if isinstance(expr.label, (str, int)) else
                expr_to_term(expr.label)]
    return ["mu", omegan.format_morphism(expr.sigma), expr_to_term(expr.head),
            [expr_to_term(a) for a in expr.args]]


def expr_from_term(term, n=None):
    if term == "e":
        if n is None:
            raise ValueError("the height is needed to read a bare unit")
        return Unit(n)
    tag = term[0]
    if tag == "g":
        label = term[2]
        if isinstance(label, list):
            label = expr_from_term(label, n)
        return Gen(parse_tree(term[1]), label)
    if tag == "mu":
        sigma = omegan.parse_morphism(term[1])
        h = sigma.height
        return Mu(sigma, expr_from_term(term[2], h), tuple(expr_from_term(a, h) for a in term[3]))
    raise ValueError(f"unknown term {term!r}")


def render(expr):
    if isinstance(expr, Unit):
        return "e"
    if isinstance(expr, Gen):
        lab = expr.label if isinstance(expr.label, (str, int)) else render(expr.label)
        return f"{lab}<{format_tree(expr.tree)}>"
    args = ", ".join(render(a) for a in expr.args)
    return f"mu[{'|'.join(','.join(map(str, expr.sigma.level(i))) for i in reversed(range(1, expr.sigma.height + 1)))}]({render(expr.head)}; {args})"


def expr_key(expr):
    return repr(expr_to_term(expr))


# -- free n-operads

@dataclass
class Universe:
    """The finite part of Omega_n the free constructions work in."""
    trees: tuple
    morphisms: dict = field(default_factory=dict)   # target -> [sigma]
    fibers: dict = field(default_factory=dict)

    @classmethod
    def build(cls, trees):
        trees = tuple(sorted(trees))
        known = set(trees)
        morphisms = {S: [] for S in trees}
        fib = {}
        for S in trees:
            for T in trees:
                for s in hom(T, S):
                    fs = tuple(fibers(s))
                    if all(F in known for F in fs):
                        morphisms[S].append(s)
                        fib[s] = fs
        return cls(trees, morphisms, fib)


@lru_cache(maxsize=None)
def universe(trees):
    return Universe.build(tuple(trees))


def free_n_operad(C, expr_depth, trees):
    """The free n-operad on a collection ``C`` (dict tree -> labels), truncated
    to the given trees and to expressions of depth <= ``expr_depth``.

    Built bottom-up by closing the generators and the unit under the
    multiplication; results beyond the bounds are dropped, and the returned
    operad's ``mult`` gives None for them.
    """
    if expr_depth < 1:
        raise ValueError("expression depth must be at least 1")
    uni = universe(tuple(sorted(trees)))
    n = uni.trees[0].height
    Un = U(n)
    elements = {T: set() for T in uni.trees}
    if Un in elements:
        elements[Un].add(Unit(n))
    for T, labels in C.items():
        if T in elements:
            for c in labels:
                elements[T].add(Gen(T, c))
    changed = True
    while changed:
        changed = False
        snapshot = {T: tuple(sorted(v, key=expr_key)) for T, v in elements.items()}
        for S in uni.trees:
            heads = [h for h in snapshot[S] if not isinstance(h, Unit)]
            if not heads:
                continue
            for s in uni.morphisms[S]:
                pools = [snapshot[F] for F in uni.fibers[s]]
                for h in heads:
                    for args in itertools.product(*pools):
                        r = _reduce(s, h, args)
                        if depth(r) <= expr_depth and r not in elements[s.source]:
                            elements[s.source].add(r)
                            changed = True

    def mult(sigma, x, ys):
        r = _reduce(sigma, x, tuple(ys))
        if depth(r) > expr_depth or r.arity() not in elements or r not in elements[r.arity()]:
            return None
        return r

    final = {T: tuple(sorted(v, key=expr_key)) for T, v in elements.items()}
    unit = Unit(n)
    return FinNOperad(n, final, unit, mult, name="free",
                      bounds={"expr_depth": expr_depth, "trees": len(uni.trees)})


@lru_cache(maxsize=None)
def _hn_normal_forms(trees, T, d):
    uni = universe(trees)
    n = T.height
    out = []
    if T == U(n):
        out.append(Unit(n))
    if d < 1:
        return tuple(out)
    out.append(Gen(T))
    for S in uni.trees:
        for s in uni.morphisms[S]:
            if s.source != T:
                continue
            pools = [_hn_normal_forms(trees, F, d - 1) for F in uni.fibers[s]]
            for args in itertools.product(*pools):
                if s.is_identity() and all(isinstance(a, Unit) for a in args):
                    continue
                out.append(Mu(s, Gen(S), args))
    return tuple(out)


def normal_forms(T, expr_depth, trees):
    """Normal-form expressions of arity T over one generator per tree, built
    top-down: a head generator, a morphism into it and normal forms on the fibers."""
    return list(_hn_normal_forms(tuple(sorted(trees)), T, expr_depth))


# -- algebras

def check_algebra(A: FinNOperad, x, family, limit=None, seed=0, morphisms=None):
    """Check that ``family[T][a]`` (a function x^{|T|} -> x stored as a value
    tuple) defines an operad map A -> End_n(x) on the stored arities."""
    from .symops import endomorphism_n_operad
    rng = random.Random(seed)
    x = tuple(x)
    report = []
    missing = [format_tree(T) for T in A.trees if T not in family or
               any(a not in family[T] for a in A.arity(T))]
    if missing:
        raise ValueError(f"family is incomplete at {missing}")
    E = endomorphism_n_operad(x, A.n, A.trees)
    if family[U(A.n)][A.unit] != E.unit:
        report.append("the unit is not sent to the identity function")
    for s in (morphisms if morphisms is not None else A.morphisms()):
        fs = fibers(s)
        pools = [A.arity(s.target)] + [A.arity(F) for F in fs]
        for inst in _instances(pools, limit, rng):
            a, bs = inst[0], inst[1:]
            r = A.mult(s, a, bs)
            if r is None:
                continue
            want = E.mult(s, family[s.target][a], [family[F][b] for F, b in zip(fs, bs)])
            if family[s.source][r] != want:
                report.append(f"multiplication along {omegan.format_morphism(s)} is not preserved "
                              f"on {inst!r}")
                break
    return report


# -- json

def to_json(op: FinNOperad, morphisms=None) -> str:
    import json
    names = {T: [_elem_name(e) for e in op.arity(T)] for T in op.trees}
    look = {T: dict(zip(op.arity(T), names[T])) for T in op.trees}
    doc = {"schema_version": 1, "kind": "n_operad", "n": op.n, "name": op.name,
           "bounds": op.bounds,
           "arities": [{"tree": format_tree(T), "elements": names[T]} for T in op.trees],
           "unit": look[U(op.n)][op.unit]}
    entries = []
    for s in (morphisms if morphisms is not None else op.morphisms()):
        fs = fibers(s)
        for x in op.arity(s.target):
            for ys in itertools.product(*(op.arity(F) for F in fs)):
                v = op.mult(s, x, ys)
                if v is None:
                    continue
                entries.append({"sigma": omegan.format_morphism(s),
                                "args": [look[s.target][x]] + [look[F][y] for F, y in zip(fs, ys)],
                                "value": look[s.source][v]})
    doc["mult"] = entries
    return json.dumps(doc, indent=1)


def from_json(text: str) -> FinNOperad:
    import json
    doc = json.loads(text)
    if doc.get("schema_version") != 1 or doc.get("kind") != "n_operad":
        raise ValueError("not an n-operad document of a supported schema version")
    elements = {parse_tree(a["tree"]): tuple(a["elements"]) for a in doc["arities"]}
    table = {}
    for e in doc["mult"]:
        s = omegan.parse_morphism(e["sigma"])
        table[(s, e["args"][0], tuple(e["args"][1:]))] = e["value"]
    return table_operad(doc["n"], elements, doc["unit"], table, doc.get("name", ""), doc.get("bounds"))


def _elem_name(e):
    if isinstance(e, str):
        return e
    if isinstance(e, (Unit, Gen, Mu)):
        return render(e)
    return repr(e)
