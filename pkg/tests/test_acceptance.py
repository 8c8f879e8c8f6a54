"""The acceptance criteria, one test each, run at the stated bounds.

Run alone with ``pytest tests/test_acceptance.py -v``; the summary section
lists one PASS/FAIL line per criterion.
"""

from functools import lru_cache
from math import factorial

from higherops import hcat, itmon, nops, omegan as om, symops
from higherops.ordmaps import (OrdMap, Perm, all_maps, compose, factorize, gamma, monotone_maps,
                               permutations, verify_pisigma)
from higherops.trees import M, NTree, U, enumerate_trees, tree_universe


def _keeps_fiber_order(p, s):
    return all(not (s(i) == s(j) and p(i) > p(j))
               for i in range(1, p.dom + 1) for j in range(i + 1, p.dom + 1))


def test_01_factorization_unique(criterion):
    checked = bad = 0
    for n in range(6):
        bijections = permutations(n)
        for k in range(1, 5):
            monos = monotone_maps(n, k)
            for s in all_maps(n, k):
                hits = [(p, v) for p in bijections for v in monos
                        if compose(p, v) == s and _keeps_fiber_order(p, s)]
                checked += 1
                bad += hits != [factorize(s)]
    assert criterion(1, "unique factorization", bad == 0,
                     f"{checked} maps [n]->[k], n <= 5, k <= 4, {bad} failures")


def test_02_pisigma(criterion):
    pairs = bad = 0
    for a in range(5):
        for b in range(5):
            for c in range(5):
                for s in monotone_maps(a, b):
                    for w in monotone_maps(b, c):
                        pairs += 1
                        bad += not verify_pisigma(s, w)
    assert criterion(2, "pi(sigma omega) identity", bad == 0 and pairs > 0,
                     f"{pairs} composable monotone pairs, sizes <= 4, {bad} failures")


def test_03_permutation_operad(criterion):
    g = gamma(Perm([1, 3, 2]), [Perm([2, 1]), Perm([1, 2]), Perm([1])])
    report = symops.validate(symops.permutation_operad(4), max_total=4)
    ok = g.images == (2, 1, 4, 5, 3) and report == []
    assert criterion(3, "permutation operad", ok,
                     f"Gamma((132);(21),(12),(1)) = {list(g.images)}, "
                     f"{len(report)} axiom failures at total size <= 4")


def test_04_chi_is_inverse_pi(criterion):
    ts = tree_universe(2, 4)
    count = bad = 0
    for S in ts:
        for T in ts:
            for s in om.hom(T, S):
                count += 1
                bad += symops.chi(s) != om.pi(s).inverse()
    assert criterion(4, "chi = pi^-1", bad == 0,
                     f"{count} morphisms between {len(ts)} 2-trees with <= 4 tips, {bad} failures")


def _endo_tables(ts, N):
    A = symops.endomorphism_n_operad((0, 1), 2, ts)
    B = symops.desymmetrise(symops.endomorphism_operad((0, 1), N), 2, ts)
    ms = A.morphisms()
    ta, tb = A.tabulate(ms), B.tabulate(ms)
    return len(ta), ta == tb and A.unit == B.unit


def test_05_endomorphism(criterion):
    entries, same = _endo_tables(hcat.connecting_trees(2, 3), 3)
    # nullary and unpruned arities at two tips
    ts0 = sorted(set(hcat.connecting_trees(2, 2)) | set(enumerate_trees(2, 2, 4)))
    entries0, same0 = _endo_tables(ts0, 2)
    assert criterion(5, "End_n(x) = Des_n(End(x))", same and same0,
                     f"|x| = 2, n = 2: {entries} entries over pruned trees <= 3 tips, "
                     f"{entries0} entries with degenerate trees <= 2 tips, identical = {same and same0}")


@lru_cache(maxsize=None)
def _pi0(n, k, V):
    return hcat.pi0(n, k, V, hcat.connecting_trees(n, k))


def test_06_pi0_height_one(criterion):
    got, stable = [], True
    for k in range(1, 5):
        count, report = _pi0(1, k, 3)
        got.append(count)
        stable &= report["stable"]
    ok = got == [factorial(k) for k in range(1, 5)] and stable
    assert criterion(6, "pi_0(h^1_k) = k!", ok, f"k = 1..4 at vertex bound 3: {got}, stable = {stable}")


def test_07_pi0_height_two(criterion):
    got, stable = [], True
    for k, V in ((1, 3), (2, 5), (3, 6)):
        count, report = _pi0(2, k, V)
        got.append((k, V, count, dict(report["counts"])))
        stable &= report["stable"]
    ok = [c for _, _, c, _ in got] == [1, 1, 1] and stable
    detail = "; ".join(f"k={k} V={V} counts {cs}" for k, V, _, cs in got)
    assert criterion(7, "pi_0(h^2_k) = 1", ok, detail + f", stable = {stable}")


def test_08_symmetrisation(criterion):
    ts1 = hcat.connecting_trees(1, 3)
    A = nops.free_n_operad({M(1, 0, 2): ["b"], M(1, 0, 3): ["t"]}, 2, ts1)
    free = []
    for k in (1, 2, 3):
        free.append((len(hcat.symmetrise(A, k, k + 1)), hcat.free_operad_symmetrisation_oracle(A, k)))
    terminal = []
    for k, V in ((1, 3), (2, 5), (3, 5)):
        ts = hcat.connecting_trees(2, k)
        sym = len(hcat.symmetrise(nops.terminal_operad(ts), k, V))
        terminal.append((sym, _pi0(2, k, max(V, {1: 3, 2: 5, 3: 6}[k]))[1]["counts"][V]))
    ok = all(a == b for a, b in free) and all(a == b for a, b in terminal)
    assert criterion(8, "symmetrisation", ok,
                     f"free n=1 (|Sym|, k!|A_k|) = {free}; terminal n=2 (|Sym|, pi_0) = {terminal}")


def test_09_free_operad_counts(criterion):
    cases = [
        (1, {M(1, 0, 2): ["a", "b"]}, enumerate_trees(1, 4)),
        (1, {M(1, 0, 2): ["a"], M(1, 0, 0): ["c"]}, enumerate_trees(1, 4)),
        (2, {M(2, 0, 2): ["a"], M(2, 1, 2): ["b"]}, hcat.connecting_trees(2, 3)),
        (2, {M(2, 0, 2): ["a"], U(2): ["u"]}, hcat.connecting_trees(2, 3)),
    ]
    rows, ok = [], True
    for n, C, ts in cases:
        counts = [hcat.freeop_count_check(C, T, 2, ts) for T in ts]
        ok &= all(eq for _, _, eq in counts)
        rows.append(f"n={n}: {[lhs for lhs, _, _ in counts]}")
    assert criterion(9, "free n-operad count identity", ok, "depth 2, " + "; ".join(rows))


def test_10_internal_operad(criterion):
    c2, f2 = itmon.verify_internal_operad(2, tree_universe(2, 4))
    c3, f3 = itmon.verify_internal_operad(3, tree_universe(3, 3))
    T = NTree([4, 2], [[1, 1, 2, 2], [1, 1]])
    s = om.TreeMorphism(T, M(2, 1, 2), [[1, 2, 1, 2], [1, 1]])
    lhs = itmon.substitute(itmon.a_tree(M(2, 1, 2)), [itmon.a_tree(F) for F in om.fibers(s)])
    rhs = itmon.perm_act(om.pi(s), itmon.a_tree(T))
    step = rhs in {itmon.MExpression(2, t) for t in itmon.rewrites(lhs.term, 2)}
    ok = not f2 and not f3 and step and itmon.render(itmon.a_tree(T)) == "(1 o1 2) o0 (3 o1 4)"
    assert criterion(10, "internal n-operad in m~^n", ok,
                     f"n=2: {c2} morphisms, {len(f2)} failures; n=3: {c3} morphisms, {len(f3)} failures; "
                     f"worked instance {itmon.render(lhs)} -> {itmon.render(rhs)} is one interchange: {step}")


def test_11_mtilde_square(criterion):
    objs = itmon.objects(2, 2)
    arrows = itmon.covering_arrows(2, 2)
    parsed = {s: itmon.parse(s, 2) for s in ("1 o1 2", "1 o0 2", "2 o0 1", "2 o1 1")}
    square = {(parsed["1 o1 2"], parsed["1 o0 2"]), (parsed["1 o1 2"], parsed["2 o0 1"]),
              (parsed["2 o1 1"], parsed["1 o0 2"]), (parsed["2 o1 1"], parsed["2 o0 1"])}
    pairs = bad = 0
    for k in (1, 2, 3):
        ob = itmon.objects(2, k)
        for A in ob:
            reach = itmon.reachable(A)
            for B in ob:
                pairs += 1
                bad += itmon.leq(A, B) != (B in reach)
    ok = len(objs) == 4 and set(arrows) == square and len(arrows) == 4 and bad == 0
    assert criterion(11, "m~^2_2 and the rewrite oracle", ok,
                     f"{len(objs)} objects, {len(arrows)} covering arrows; "
                     f"leq vs reachability on {pairs} pairs (k <= 3), {bad} disagreements")


def test_12_nerve(criterion):
    ts = hcat.decoration_trees(1, 2)
    rows = []
    for k in (0, 1, 2):
        for p in (0, 1):
            rows.append((k, p) + hcat.nerve_compare(1, k, p, 2, ts))
    ok = all(l == r for _, _, l, r in rows)
    assert criterion(12, "nerve comparison at n = 1", ok,
                     "vertex bound 2: " + ", ".join(f"(k={k},p={p}) {l}={r}" for k, p, l, r in rows))


def test_13_finality(criterion):
    ts = hcat.connecting_trees(2, 2)
    rows = [hcat.finality_probe(2, 2, V, ts) for V in (3, 4)]
    ok = all(r["ok"] and r["probed"] > 0 for r in rows)
    assert criterion(13, "finality of zeta", ok,
                     "; ".join(f"V={r['vertex_bound']}: {r['probed']} probes over "
                               f"{r['hinf_objects']} H^oo objects, {r['failures']} failures" for r in rows))
