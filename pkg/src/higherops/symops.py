"""Symmetric operads in finite sets.

Three flavours are supported:

* ``right``: a contravariant action ``act(p, x)`` with
  ``act(compose(f, g), x) == act(f, act(g, x))`` and a multiplication for
  order preserving maps only;
* ``left``: a covariant action, ``act(compose(f, g), x) == act(g, act(f, x))``,
  again with order preserving multiplications;
* ``S``: no action, but a multiplication for every map of finite ordinals.

``mult(sigma, x, ys)`` takes ``x`` in arity ``sigma.cod`` and one ``ys[i]``
per fiber of sigma; it returns an element of arity ``sigma.dom``.
"""

from __future__ import annotations

import itertools
import json
import random

from . import omegan
from .nops import FinNOperad
from .ordmaps import (OrdMap, Perm, blocksum, blockmove, compose, factorize, format_map, gamma,
                      identity, monotone_maps, all_maps, parse_map, permutations, restrict)
from .trees import susp_index, canonical_decomposition, U

FLAVORS = ("right", "left", "S")
SCHEMA_VERSION = 1


class FinSymOperad:
    def __init__(self, elements, unit, mult, action=None, flavor="right", name=""):
        if flavor not in FLAVORS:
            raise ValueError(f"flavor must be one of {FLAVORS}")
        if flavor != "S" and action is None:
            raise ValueError(f"a {flavor} operad needs an action")
        self.elements = {int(k): tuple(v) for k, v in elements.items()}
        self.unit = unit
        self._mult = mult
        self._act = action
        self.flavor = flavor
        self.name = name

    @property
    def max_arity(self):
        return max(self.elements)

    def arity(self, n):
        return self.elements.get(n, ())

    def admits(self, sigma: OrdMap):
        return self.flavor == "S" or sigma.is_monotone()

    def mult(self, sigma, x, ys):
        if not self.admits(sigma):
            raise ValueError(f"{self.flavor} operads only multiply along order preserving maps")
        return self._mult(sigma, x, tuple(ys))

    def act(self, p: Perm, x):
        if self._act is None:
            raise ValueError("S-operads carry no separate action")
        return self._act(p, x)

    def right_act(self, p, x):
        """The action read contravariantly, whatever the flavour."""
        if self.flavor == "right":
            return self._act(p, x)
        if self.flavor == "left":
            return self._act(p.inverse(), x)
        return self._mult(p, x, (self.unit,) * p.dom)

    def tabulate(self, max_arity=None):
        """A copy of this operad whose structure is stored in dictionaries."""
        N = self.max_arity if max_arity is None else max_arity
        elements = {k: v for k, v in self.elements.items() if k <= N}
        act = {}
        if self.flavor != "S":
            for k in range(N + 1):
                for p in permutations(k):
                    for x in self.arity(k):
                        act[(p, x)] = self._act(p, x)
        table = {}
        for sigma in admitted_maps(self, N):
            for x in self.arity(sigma.cod):
                for ys in itertools.product(*(self.arity(m) for m in sigma.fiber_sizes())):
                    table[(sigma, x, ys)] = self._mult(sigma, x, ys)
        return table_operad(elements, self.unit, table, act if self.flavor != "S" else None,
                            self.flavor, self.name)

    def __repr__(self):
        sizes = {k: len(v) for k, v in sorted(self.elements.items())}
        return f"FinSymOperad({self.flavor}, {self.name!r}, sizes={sizes})"


def table_operad(elements, unit, table, action=None, flavor="right", name=""):
    def mult(sigma, x, ys):
        return table[(sigma, x, tuple(ys))]
    act = None if action is None else (lambda p, x: action[(p, x)])
    op = FinSymOperad(elements, unit, mult, act, flavor, name)
    op.table = table
    op.action_table = action
    return op


def admitted_maps(op, N=None, total=None):
    """Maps sigma: [n] -> [k] with n, k <= N that op multiplies along, and
    whose fibers are all stored arities."""
    N = op.max_arity if N is None else N
    out = []
    for n in range(N + 1):
        for k in range(N + 1):
            pool = all_maps(n, k) if op.flavor == "S" else monotone_maps(n, k)
            for s in pool:
                if all(m in op.elements for m in s.fiber_sizes()):
                    out.append(s)
    return out


# -- validation

def _sample(pools, limit, rng):
    total = 1
    for p in pools:
        total *= len(p)
    if limit is None or total <= limit:
        return itertools.product(*pools)
    return (tuple(rng.choice(p) for p in pools) for _ in range(limit))


def _fiber_groups(omega: OrdMap):
    return [[i for i in range(1, omega.dom + 1) if omega(i) == j] for j in range(1, omega.cod + 1)]


def validate(op: FinSymOperad, max_arity=None, max_total=None, limit=None, seed=0):
    """List every failing instance of the operad axioms within the bounds.

    ``max_total`` bounds the domain size n of the maps [n] -> [l] -> [k]
    entering associativity; ``limit`` caps the element tuples tried per
    diagram (sampled with a fixed seed).
    """
    rng = random.Random(seed)
    N = op.max_arity if max_arity is None else max_arity
    total = N if max_total is None else max_total
    A = op.arity
    e = op.unit
    report = []
    if e not in A(1):
        return ["unit is not an element of arity 1"]

    memo = {}

    def mu(s, x, ys):
        key = (s, x, tuple(ys))
        try:
            return memo[key]
        except KeyError:
            memo[key] = out = op._mult(s, x, key[2])
            return out
        except TypeError:  # unhashable elements
            return op._mult(s, x, key[2])

    # units
    for n in range(N + 1):
        idn = identity(n)
        to_one = OrdMap([1] * n, 1)
        for x in A(n):
            if mu(idn, x, (e,) * n) != x:
                report.append(f"unit law for the identity of [{n}] fails on {x!r}")
            if mu(to_one, e, (x,)) != x:
                report.append(f"unit law for [{n}] -> [1] fails on {x!r}")

    # associativity
    pool = all_maps if op.flavor == "S" else monotone_maps
    for n in range(total + 1):
        for l in range(N + 1):
            for k in range(N + 1):
                for sigma in pool(n, l):
                    if any(m not in op.elements for m in sigma.fiber_sizes()):
                        continue
                    for omega in pool(l, k):
                        so = compose(sigma, omega)
                        if any(m > N for m in so.fiber_sizes()) or any(
                                m not in op.elements for m in omega.fiber_sizes()):
                            continue
                        groups = _fiber_groups(omega)
                        parts = [restrict(sigma, omega, j) for j in range(1, k + 1)]
                        pools = [A(k)] + [A(m) for m in omega.fiber_sizes()] + \
                            [A(m) for m in sigma.fiber_sizes()]
                        for inst in _sample(pools, limit, rng):
                            x, ys, zs = inst[0], inst[1:1 + k], inst[1 + k:]
                            lhs = mu(sigma, mu(omega, x, ys), zs)
                            rhs = mu(so, x, [mu(parts[j], ys[j], [zs[i - 1] for i in groups[j]])
                                             for j in range(k)])
                            if lhs != rhs:
                                report.append(f"associativity fails for sigma={format_map(sigma)}, "
                                              f"omega={format_map(omega)} on {inst!r}")
                                break
    if op.flavor == "S":
        return report

    act = op.right_act
    # the action is a contravariant functor
    for n in range(N + 1):
        for x in A(n):
            if act(identity(n), x) != x:
                report.append(f"identity of [{n}] acts nontrivially on {x!r}")
        for f in permutations(n):
            for g in permutations(n):
                for x in _sample([A(n)], limit, rng):
                    x = x[0]
                    if act(compose(f, g), x) != act(f, act(g, x)):
                        report.append(f"action is not functorial at {format_map(f)}, {format_map(g)}")
                        break

    # equivariance 1: permuting the blocks
    for n in range(total + 1):
        for k in range(N + 1):
            for sigma in monotone_maps(n, k):
                sizes = sigma.fiber_sizes()
                if any(m not in op.elements for m in sizes):
                    continue
                for rho in permutations(k):
                    new_sizes = [sizes[rho(j) - 1] for j in range(1, k + 1)]
                    sigma2 = OrdMap([j for j in range(1, k + 1) for _ in range(new_sizes[j - 1])], k)
                    p = blockmove(rho, new_sizes)
                    assert compose(p, sigma) == compose(sigma2, rho)
                    pools = [A(k)] + [A(m) for m in sizes]
                    for inst in _sample(pools, limit, rng):
                        x, ys = inst[0], inst[1:]
                        lhs = act(p, mu(sigma, x, ys))
                        rhs = mu(sigma2, act(rho, x), [ys[rho(j) - 1] for j in range(1, k + 1)])
                        if lhs != rhs:
                            report.append(f"equivariance 1 fails for sigma={format_map(sigma)}, "
                                          f"rho={format_map(rho)} on {inst!r}")
                            break

    # equivariance 2: permuting inside the blocks
    for n in range(total + 1):
        for k in range(N + 1):
            for sigma in monotone_maps(n, k):
                sizes = sigma.fiber_sizes()
                if any(m not in op.elements for m in sizes):
                    continue
                for taus in itertools.product(*(permutations(m) for m in sizes)):
                    p = blocksum(taus)
                    pools = [A(k)] + [A(m) for m in sizes]
                    for inst in _sample(pools, limit, rng):
                        x, ys = inst[0], inst[1:]
                        lhs = act(p, mu(sigma, x, ys))
                        rhs = mu(sigma, x, [act(t, y) for t, y in zip(taus, ys)])
                        if lhs != rhs:
                            report.append(f"equivariance 2 fails for sigma={format_map(sigma)}, "
                                          f"blocks={[format_map(t) for t in taus]} on {inst!r}")
                            break
    return report


# -- changing presentation

def to_right(op: FinSymOperad) -> FinSymOperad:
    if op.flavor == "right":
        return op
    if op.flavor == "left":
        return FinSymOperad(op.elements, op.unit, op._mult,
                            lambda p, x: op._act(p.inverse(), x), "right", op.name)
    return from_s(op)


def to_left(op: FinSymOperad) -> FinSymOperad:
    if op.flavor == "left":
        return op
    r = to_right(op)
    return FinSymOperad(r.elements, r.unit, r._mult,
                        lambda p, x: r._act(p.inverse(), x), "left", r.name)


def to_s(op: FinSymOperad) -> FinSymOperad:
    """Multiply along any map: mu^s_sigma = act(pi(sigma), mu_{nu(sigma)})."""
    if op.flavor == "S":
        return op
    r = to_right(op)

    def mult(sigma, x, ys):
        p, nu = factorize(sigma)
        return r._act(p, r._mult(nu, x, ys))

    return FinSymOperad(r.elements, r.unit, mult, None, "S", r.name)


def from_s(op: FinSymOperad) -> FinSymOperad:
    """Right operad with action act(p, x) = mu^s_p(x; e, ..., e)."""
    if op.flavor != "S":
        return to_right(op)

    def act(p, x):
        return op._mult(p, x, (op.unit,) * p.dom)

    return FinSymOperad(op.elements, op.unit, op._mult, act, "right", op.name)


# -- examples

def permutation_operad(N, nullary=True) -> FinSymOperad:
    """Symmetric groups with block composition, as a right operad."""
    if N < 1:
        raise ValueError("N must be at least 1")
    elements = {n: permutations(n) for n in range(0 if nullary else 1, N + 1)}

    def mult(sigma, x, ys):
        return gamma(x, ys)

    def act(p, x):
        return compose(p, x)

    return FinSymOperad(elements, identity(1), mult, act, "right", "permutations")


def _tuples(xs, n):
    return list(itertools.product(xs, repeat=n))


def endomorphism_operad(x, N, nullary=True) -> FinSymOperad:
    """Functions x^n -> x as a left operad.

    A function is stored as the tuple of its values on x^n listed in
    lexicographic order; ``(p . f)(t_1, ..., t_n) = f(t_{p(1)}, ..., t_{p(n)})``.
    """
    x = tuple(x)
    if not x or N < 1:
        raise ValueError("need a nonempty set and N >= 1")
    pos = {a: i for i, a in enumerate(x)}
    m = len(x)
    grid = {n: _tuples(x, n) for n in range(N + 1)}
    elements = {n: tuple(itertools.product(x, repeat=m ** n))
                for n in range(0 if nullary else 1, N + 1)}

    def ev(f, t):
        idx = 0
        for a in t:
            idx = idx * m + pos[a]
        return f[idx]

    def mult(sigma, f, gs):
        groups = _fiber_groups(sigma)
        out = []
        for t in grid[sigma.dom]:
            args = [ev(g, [t[p - 1] for p in grp]) for g, grp in zip(gs, groups)]
            out.append(ev(f, args))
        return tuple(out)

    def act(p, f):
        return tuple(ev(f, [t[p(r) - 1] for r in range(1, p.dom + 1)]) for t in grid[p.dom])

    return FinSymOperad(elements, tuple(x), mult, act, "left", f"End({len(x)})")


# -- desymmetrisation and the tensor power permutation

def desymmetrise(op: FinSymOperad, n, trees) -> FinNOperad:
    """Des_n(A)_T = A_{|T|}, m_sigma = act(pi(sigma)^{-1}) after mu_{nu(sigma)}."""
    left = to_left(op)
    trees = [T for T in trees if T.tips() in left.elements]

    split = {}

    def mult(sigma, x, ys):
        if sigma not in split:
            p, nu = factorize(omegan.tip_map(sigma))
            split[sigma] = p.inverse(), nu
        q, nu = split[sigma]
        return left._act(q, left._mult(nu, x, ys))

    return FinNOperad(n, {T: left.arity(T.tips()) for T in trees}, left.unit, mult,
                      name=f"Des_{n}({op.name})")


def _tip_count_blocks(sigma):
    return [F.tips() for F in omegan.fibers(sigma)]


def chi(sigma: omegan.TreeMorphism) -> Perm:
    """The reshuffle x^{T_1} x ... x x^{T_k} -> x^T built by induction over
    the suspension index of the target.

    Position q of the concatenated fibers is sent to the tip of the source
    it comes from.
    """
    T, S = sigma.source, sigma.target
    n = T.height
    if S == U(n):
        return identity(T.tips())
    l, pieces = canonical_decomposition(S)
    if any(P != U(n) for P in pieces):
        # go through S -> M_l^j
        omega = omegan.decomposition_morphism(S)
        outer = chi(omegan.compose(sigma, omega))
        inner = [chi(omegan.fiber_morphism(sigma, omega, a)) for a in range(1, len(pieces) + 1)]
        return compose(blocksum(inner), outer)
    # S = M_l^k
    m = susp_index(T)
    if m >= l:
        return identity(T.tips())
    k = len(pieces)
    tpieces = canonical_decomposition(T)[1]
    phis = [omegan.compose(omegan.piece_inclusion(T, a), sigma) for a in range(1, len(tpieces) + 1)]
    sizes = [[F.tips() for F in omegan.fibers(phi)] for phi in phis]
    p = len(phis)
    # blocks (i, a) listed with i outer are moved to a outer
    order = [(i, a) for i in range(k) for a in range(p)]
    slot = {ia: r for r, ia in enumerate(sorted(order, key=lambda t: (t[1], t[0])), 1)}
    tau = Perm([slot[ia] for ia in order])
    move = gamma(tau, [identity(sizes[a][i]) for i, a in order])
    return compose(move, blocksum(chi(phi) for phi in phis))


def endomorphism_n_operad(x, n, trees) -> FinNOperad:
    """End_n(x)_T = functions x^{|T|} -> x with multiplication reshuffled by chi."""
    x = tuple(x)
    pos = {a: i for i, a in enumerate(x)}
    m = len(x)
    trees = list(trees)
    ks = sorted({T.tips() for T in trees})
    grid = {k: _tuples(x, k) for k in ks}
    funcs = {k: tuple(itertools.product(x, repeat=m ** k)) for k in ks}

    def ev(f, t):
        idx = 0
        for a in t:
            idx = idx * m + pos[a]
        return f[idx]

    shuffle = {}

    def mult(sigma, f, gs):
        if sigma not in shuffle:
            shuffle[sigma] = chi(sigma), _tip_count_blocks(sigma)
        F, blocks = shuffle[sigma]
        out = []
        for t in grid[sigma.source.tips()]:
            u = [t[F(q) - 1] for q in range(1, F.dom + 1)]
            args, off = [], 0
            for g, b in zip(gs, blocks):
                args.append(ev(g, u[off:off + b]))
                off += b
            out.append(ev(f, args))
        return tuple(out)

    return FinNOperad(n, {T: funcs[T.tips()] for T in trees}, x, mult,
                      name=f"End_{n}({m})")


# -- json

def _name(x):
    return x if isinstance(x, str) else repr(x)


def to_json(op: FinSymOperad, max_arity=None) -> str:
    t = op if hasattr(op, "table") else op.tabulate(max_arity)
    arities = sorted(t.elements)
    names = {k: [_name(x) for x in t.arity(k)] for k in arities}
    lookup = {k: dict(zip(t.arity(k), names[k])) for k in arities}
    doc = {
        "schema_version": SCHEMA_VERSION,
        "kind": "symmetric_operad",
        "flavor": t.flavor,
        "name": t.name,
        "max_arity": max(arities),
        "elements": {str(k): names[k] for k in arities},
        "unit": lookup[1][t.unit],
    }
    if t.flavor != "S":
        doc["action"] = [
            {"perm": "[" + ",".join(map(str, p.images)) + "]", "arg": lookup[p.dom][x],
             "value": lookup[p.dom][v]}
            for (p, x), v in sorted(t.action_table.items(),
                                    key=lambda kv: (kv[0][0], names[kv[0][0].dom].index(lookup[kv[0][0].dom][kv[0][1]])))
        ]
    entries = []
    for (s, x, ys), v in t.table.items():
        key = (s.dom, s.cod, s.images, names[s.cod].index(lookup[s.cod][x]),
               tuple(names[m].index(lookup[m][y]) for m, y in zip(s.fiber_sizes(), ys)))
        entries.append((key, {"sigma": format_map(s), "args": [lookup[s.cod][x]] +
                              [lookup[m][y] for m, y in zip(s.fiber_sizes(), ys)],
                              "value": lookup[s.dom][v]}))
    doc["mult"] = [e for _, e in sorted(entries, key=lambda kv: kv[0])]
    return json.dumps(doc, indent=1, sort_keys=False)


def from_json(text: str) -> FinSymOperad:
    doc = json.loads(text)
    if doc.get("schema_version") != SCHEMA_VERSION or doc.get("kind") != "symmetric_operad":
        raise ValueError("not a symmetric operad document of a supported schema version")
    elements = {int(k): tuple(v) for k, v in doc["elements"].items()}
    action = None
    if doc["flavor"] != "S":
        action = {}
        for e in doc["action"]:
            action[(Perm(parse_map(e["perm"]).images), e["arg"])] = e["value"]
    table = {}
    for e in doc["mult"]:
        s = parse_map(e["sigma"])
        table[(s, e["args"][0], tuple(e["args"][1:]))] = e["value"]
    return table_operad(elements, doc["unit"], table, action, doc["flavor"], doc.get("name", ""))
