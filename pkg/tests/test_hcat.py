from math import factorial

import pytest
from hypothesis import given, settings, strategies as st

from higherops import hcat, nops, omegan as om
from higherops.trees import M, NTree, U, format_tree

CT1 = {k: hcat.connecting_trees(1, k) for k in (1, 2, 3)}
CT2 = {k: hcat.connecting_trees(2, k) for k in (1, 2)}


def test_union_find():
    uf = hcat.UnionFind("abcd")
    uf.union("a", "c")
    uf.union("d", "c")
    assert uf.find("d") == "a"
    assert sorted(map(sorted, uf.classes())) == [["a", "c", "d"], ["b"]]


def test_terms():
    t = (M(2, 0, 2), None, (2, (U(2), None, (1,))))
    obj = hcat.HnObject(2, t)
    assert obj.arity == 2 and hcat.vertex_count(t) == 2
    assert hcat.render(t) == "{2; 2,2; rho_1=[1,2]; rho_0=[1,1]}(2,{2; 1,1; rho_1=[1]; rho_0=[1]}(1))"
    assert hcat.render(t, trees=False) == "v(2,v(1))"
    with pytest.raises(ValueError):
        hcat.HnObject(2, (M(2, 0, 2), None, (1,)))
    with pytest.raises(ValueError):
        hcat.HnObject(2, (M(2, 0, 2), None, (1, 1)))


def test_connecting_trees():
    assert len(CT2[2]) == 5 and len(hcat.connecting_trees(2, 3)) == 9
    assert NTree([1, 2], [[1], [1, 1]]) in CT2[2]
    assert NTree([1, 2], [[2], [1, 1]]) in CT2[2]


def test_enumeration_small():
    objs = hcat.enumerate_hn(1, 2, 1, CT1[2])
    assert sorted(hcat.render(t) for t in objs) == ["{1; 2; rho_0=[1,1]}(1,2)",
                                                    "{1; 2; rho_0=[1,1]}(2,1)"]
    corners = {hcat.single_vertex(T, ls) for T in (M(2, 0, 2), M(2, 1, 2))
               for ls in ((1, 2), (2, 1))}
    assert corners <= set(hcat.enumerate_hn(2, 2, 1, CT2[2]))
    objs = hcat.enumerate_hn(2, 1, 1, CT2[1])
    assert 1 in objs    # the bare leaf
    assert [t for t in objs if not hcat.is_leaf(t)] == [hcat.single_vertex(U(2))]


def test_generating_arrows():
    t = hcat.single_vertex(M(2, 0, 2))
    arrows = hcat.generating_arrows(t, CT2[2], vertex_bound=2)
    assert arrows and all(a.kind == "epsilon" for a in arrows)
    assert all(hcat.vertex_count(a.target) == 2 for a in arrows)
    # a two-level cluster of units contracts once per morphism into the base
    base = M(2, 0, 2)
    t = (base, None, ((U(2), None, (1,)), (U(2), None, (2,))))
    gammas = [a for a in hcat.generating_arrows(t, CT2[2]) if a.kind == "gamma" and a.path == ()]
    want = [s for S in [base] for T in CT2[2] for s in om.hom(T, S)
            if om.fibers(s) == [U(2), U(2)]]
    assert len(gammas) == len(want) == 1


def test_pasting_cluster():
    # M_1^2 over two copies of M_0^2 contracts to the four-tip tree
    T4 = NTree([4, 2], [[1, 1, 2, 2], [1, 1]])
    ts = sorted(set(hcat.connecting_trees(2, 4)) | {T4})
    t = (M(2, 1, 2), None, ((M(2, 0, 2), None, (1, 2)), (M(2, 0, 2), None, (3, 4))))
    targets = {a.target for a in hcat.generating_arrows(t, ts) if a.kind == "gamma" and a.path == ()}
    assert (T4, None, (1, 3, 2, 4)) in targets


def test_pi0_n1():
    for k in (1, 2, 3):
        count, report = hcat.pi0(1, k, 3, CT1[k])
        assert count == factorial(k) and report["stable"]


def test_pi0_n2_small():
    count, report = hcat.pi0(2, 2, 4, CT2[2])
    assert count == 1
    assert set(report["counts"]) == {2, 3, 4}
    count, report = hcat.pi0(2, 0, 3, hcat.decoration_trees(2, 2))
    assert count == 1 and report["stable"]


def test_symmetrise_free_n1():
    A = nops.free_n_operad({M(1, 0, 2): ["b"]}, 2, CT1[2])
    for k in (1, 2):
        classes = hcat.symmetrise(A, k, 3)
        assert len(classes) == hcat.free_operad_symmetrisation_oracle(A, k)
    unit_class = hcat.symmetrise(A, 1, 2)
    assert len(unit_class) == 1
    with pytest.raises(ValueError):
        hcat.symmetrise(A, 2, 3, list(CT1[3]) + [M(1, 0, 4)])


def test_symmetrise_terminal_matches_pi0():
    ts = CT2[2]
    classes = hcat.symmetrise(nops.terminal_operad(ts), 2, 4)
    assert len(classes) == hcat.pi0(2, 2, 4, ts)[0] == 1


def test_zeta_and_corolla():
    t = hcat.single_vertex(M(2, 0, 3), (2, 3, 1))
    assert hcat.zeta(t) == hcat.corolla((2, 3, 1))
    v = ((1, 2), (3, ()))
    path = hcat.contract_to_corolla(v)
    assert path[-1] == (1, 2, 3)
    assert hcat.render_inf(v) == "((1,2),(3,()))"


def test_finality_probe():
    r = hcat.finality_probe(2, 2, 3, CT2[2])
    assert r["ok"] and r["probed"] > 0
    # at height one the permutations are not connected: pi_0 is the symmetric group
    r1 = hcat.finality_probe(1, 2, 3, CT1[2])
    assert not r1["ok"]


def test_freeop_counts():
    ts = hcat.connecting_trees(2, 3)
    C = {M(2, 0, 2): ["a"], U(2): ["u"]}
    for T in ts:
        lhs, rhs, eq = hcat.freeop_count_check(C, T, 2, ts)
        assert eq
    assert hcat.freeop_count_check(C, M(2, 0, 2), 2, ts)[:2] == (5, 5)
    empty = {M(2, 0, 3): ["t"]}
    assert hcat.freeop_count_check(empty, M(2, 0, 2), 2, ts)[:2] == (0, 0)
    lhs, rhs, _ = hcat.freeop_count_check({}, U(2), 2, ts)
    assert lhs == rhs == 1


def test_nerve_small():
    ts = hcat.decoration_trees(1, 2)
    for k in (0, 1, 2):
        lhs, rhs = hcat.nerve_compare(1, k, 0, 2, ts)
        assert lhs == rhs
    assert hcat.nerve_compare(1, 1, 1, 2, ts) == (18, 18)
    with pytest.raises(ValueError):
        hcat.nerve_compare(1, 1, 3, 2, ts)


def test_exports():
    text = hcat.category_dot(2, 2, 2, CT2[2])
    assert text.startswith("digraph h {")
    for T in (M(2, 0, 2), M(2, 1, 2)):
        for ls in ("1,2", "2,1"):
            assert f'{{{format_tree(T)}}}({ls})' in text
    assert hcat.counts_csv([{"k": 1, "c": 1}], ["k", "c"]) == "k,c\n1,1\n"


OBJ = hcat.enumerate_hn(2, 2, 3, CT2[2])


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(OBJ))
def test_reaches_single_vertex(t):
    # every bounded object contracts to a one-vertex object along gamma arrows
    seen, frontier = {t}, [t]
    while frontier:
        s = frontier.pop()
        if not hcat.is_leaf(s) and hcat.vertex_count(s) == 1:
            return
        for a in hcat.generating_arrows(s, CT2[2], vertex_bound=3, through=True):
            if a.kind != "epsilon" and a.target not in seen:
                seen.add(a.target)
                frontier.append(a.target)
    assert False, hcat.render(t)


def _hinf_reach(v):
    # contractions and drops shrink a term, so the closure is finite
    seen, frontier = {v}, [v]
    while frontier:
        for _, w in hcat.hinf_arrows(frontier.pop()):
            if w not in seen:
                seen.add(w)
                frontier.append(w)
    return seen


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(OBJ))
def test_zeta_sends_arrows_to_hinf(t):
    # each generating arrow of h^n maps to a morphism of H^oo, in one direction or the other
    for a in hcat.generating_arrows(t, CT2[2], vertex_bound=3):
        src, dst = hcat.zeta(a.source), hcat.zeta(a.target)
        assert dst in _hinf_reach(src) or src in _hinf_reach(dst)
