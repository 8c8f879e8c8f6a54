import pytest
from hypothesis import given, settings, strategies as st

from higherops import nops, omegan as om, symops
from higherops.ordmaps import OrdMap, Perm, factorize, gamma, identity, permutations
from higherops.trees import M, NTree, U, enumerate_trees

T4 = NTree([4, 2], [[1, 1, 2, 2], [1, 1]])
EXAMPLE = om.TreeMorphism(T4, M(2, 1, 2), [[1, 2, 1, 2], [1, 1]])


def point_operad():
    return symops.FinSymOperad({n: ("*",) for n in range(4)}, "*", lambda s, x, ys: "*",
                               lambda p, x: "*", "right", "point")


def test_permutation_operad():
    op = symops.permutation_operad(3)
    assert [len(op.arity(n)) for n in range(4)] == [1, 1, 2, 6]
    assert symops.validate(op) == []
    assert op.mult(OrdMap([1, 1, 1, 2, 2, 3], 3), Perm([1, 3, 2]),
                   [Perm([2, 1]), Perm([1, 2]), Perm([1])]).images == (2, 1, 4, 5, 3)
    assert len(symops.permutation_operad(2, nullary=False).arity(0)) == 0


def test_point_operad_valid():
    assert symops.validate(point_operad()) == []


def test_corrupted_table_is_reported():
    t = symops.permutation_operad(3).tabulate()
    key = (OrdMap([1, 1, 2], 2), Perm([2, 1]), (Perm([1, 2]), Perm([1])))
    assert t.table[key] == Perm([2, 3, 1])
    t.table[key] = Perm([1, 2, 3])
    report = symops.validate(t)
    assert report
    assert any("sigma=" in line for line in report)


def test_corrupted_action_is_reported():
    t = symops.permutation_operad(3).tabulate()
    t.action_table[(Perm([2, 1]), Perm([1, 2]))] = Perm([1, 2])
    assert symops.validate(t)


def test_flavour_conversions():
    op = symops.permutation_operad(3)
    s = symops.to_s(op)
    sigma = OrdMap([2, 1, 2], 2)
    x, ys = Perm([1, 2]), (Perm([1, 2]), Perm([1]))
    p, nu = factorize(sigma)
    assert s.mult(sigma, x, ys) == op.right_act(p, op.mult(nu, x, ys))
    back = symops.from_s(s)
    for n in range(4):
        for q in permutations(n):
            for y in op.arity(n):
                assert back.act(q, y) == op.act(q, y)
    left = symops.to_left(op)
    assert symops.validate(left, max_total=3) == []
    assert symops.validate(s, max_total=3) == []
    assert symops.to_right(left).act(Perm([2, 3, 1]), identity(3)) == op.act(Perm([2, 3, 1]), identity(3))


def test_endomorphism_operad():
    op = symops.endomorphism_operad((0, 1), 2)
    assert len(op.arity(2)) == 16
    assert op.unit == (0, 1)
    assert symops.validate(op, max_total=2) == []


def test_s_operads_need_no_action():
    with pytest.raises(ValueError):
        symops.FinSymOperad({1: ("e",)}, "e", None, None, "right")
    with pytest.raises(ValueError):
        symops.permutation_operad(3).mult(OrdMap([2, 1], 2), Perm([1, 2]), [identity(1)] * 2)


def test_chi_examples():
    assert symops.chi(EXAMPLE) == Perm([1, 3, 2, 4])
    for T in enumerate_trees(2, 3, 5):
        assert symops.chi(om.terminal(T)) == identity(T.tips())


def test_chi_matches_inverse_pi_small():
    ts = enumerate_trees(2, 3, 5)
    for S in ts:
        for T in ts:
            for s in om.hom(T, S):
                assert symops.chi(s) == om.pi(s).inverse()


def test_desymmetrise_example_applies_inverse_permutation():
    E = symops.endomorphism_operad((0, 1), 4)
    D = symops.desymmetrise(E, 2, [T4, M(2, 1, 2), M(2, 0, 2), U(2)])
    f = E.arity(2)[6]                  # x xor y
    g = E.arity(2)[1]                  # x and y
    got = D.mult(EXAMPLE, f, [g, g])
    left = symops.to_left(E)
    want = left.act(Perm([1, 3, 2, 4]).inverse(), left.mult(OrdMap([1, 1, 2, 2], 2), f, [g, g]))
    assert got == want


def test_desymmetrised_permutations_valid():
    ts = enumerate_trees(2, 2, 3)
    D = symops.desymmetrise(symops.permutation_operad(3), 2, ts)
    assert nops.validate(D) == []


def test_endomorphism_n_operad_small():
    ts = enumerate_trees(2, 2, 3) + [M(2, 0, 2)]
    A = symops.endomorphism_n_operad((0, 1), 2, ts)
    B = symops.desymmetrise(symops.endomorphism_operad((0, 1), 2), 2, ts)
    ms = A.morphisms()
    assert A.unit == B.unit
    assert A.tabulate(ms) == B.tabulate(ms)
    assert nops.validate(A, limit=50) == []


def test_json_round_trip():
    op = symops.permutation_operad(3)
    text = symops.to_json(op)
    back = symops.from_json(text)
    assert symops.validate(back) == []
    assert back.flavor == "right" and len(back.arity(3)) == 6
    with pytest.raises(ValueError):
        symops.from_json('{"schema_version": 9, "kind": "symmetric_operad"}')


@settings(max_examples=60)
@given(st.lists(st.integers(0, 2), min_size=1, max_size=3), st.data())
def test_gamma_equivariance(sizes, data):
    # permuting blocks of the outer permutation moves them as contiguous segments
    k = len(sizes)
    x = data.draw(st.permutations(range(1, k + 1)).map(Perm))
    blocks = [data.draw(st.permutations(range(1, m + 1)).map(Perm)) for m in sizes]
    out = gamma(x, blocks)
    assert sorted(out.images) == list(range(1, sum(sizes) + 1))
    assert gamma(identity(k), [identity(m) for m in sizes]) == identity(sum(sizes))
