import itertools

from vstar.groups import Group, groups_isomorphic
from vstar.hf import EMPTY, atom, set_of
from vstar.structured import QuasiStructuredSet, automorphism_group


def cyclic(n):
    return Group.from_table([[(i + j) % n for j in range(n)] for i in range(n)])


def klein():
    return Group.from_table([[i ^ j for j in range(4)] for i in range(4)])


def brute_isomorphic(g, h):
    n = g.order
    if n != h.order:
        return False
    for perm in itertools.permutations(range(n)):
        if all(perm[g.mul(i, j)] == h.mul(perm[i], perm[j]) for i in range(n) for j in range(n)):
            return True
    return False


def test_axioms():
    for g in (cyclic(1), cyclic(4), klein(), cyclic(6)):
        assert g.check_axioms()


def test_order_mismatch():
    r = groups_isomorphic(cyclic(1), cyclic(2))
    assert not r and "order" in r.obstruction


def test_self_isomorphic():
    g = klein()
    r = groups_isomorphic(g, g)
    assert r and r.witness is not None


def test_c4_vs_klein():
    r = groups_isomorphic(cyclic(4), klein())
    assert not r
    assert sorted(cyclic(4).element_orders()) == [1, 2, 4, 4]
    assert sorted(klein().element_orders()) == [1, 2, 2, 2]
    assert brute_isomorphic(cyclic(4), klein()) is False


def test_against_brute_force():
    gs = [cyclic(1), cyclic(2), cyclic(3), cyclic(4), klein(), cyclic(6)]
    s3 = automorphism_group(QuasiStructuredSet(set_of(atom(i) for i in range(1, 4)), EMPTY))
    gs.append(s3)
    for g, h in itertools.product(gs, repeat=2):
        assert bool(groups_isomorphic(g, h)) == brute_isomorphic(g, h)


def test_from_maps_closed():
    g = automorphism_group(QuasiStructuredSet(set_of(atom(i) for i in range(1, 4)), EMPTY))
    assert g.order == 6 and g.check_axioms() and not g.is_abelian()
