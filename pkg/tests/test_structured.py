import itertools
import random

import pytest
from hypothesis import given, settings, strategies as st

from vstar.errors import LiteralSyntaxError, NotAQuasiDomain, NotSimple
from vstar.hf import EMPTY, atom, format_value, kpair, nat_encode, set_of, trcl
from vstar.random_gen import random_map, random_permutation, random_quasi
from vstar.structured import (
    AtomMap,
    QuasiStructuredSet,
    are_isomorphic,
    atomize,
    atomize_with_map,
    automorphism_group,
    automorphisms,
    check_quasi,
    check_structured,
    field,
    find_isomorphism,
    is_isomorphism,
    lift,
    lift_value,
    simple_isomorphisms,
)
from vstar.theories import catalog, enumerate_models

from conftest import sierpinski
from strategies import quasi_sets, seeds

U, V, W, X = (atom(i) for i in range(1, 5))


def S(*xs):
    return set_of(xs)


def powerset(xs):
    xs = list(xs)
    return S(*(S(*c) for r in range(len(xs) + 1) for c in itertools.combinations(xs, r)))


def lift_oracle(f: dict, x):
    """Memberwise image, written independently of the library."""
    if x.is_atom:
        return f[x]
    return S(*(lift_oracle(f, y) for y in x.elems))


# -- validity -------------------------------------------------------------------


def test_check_structured_examples():
    assert check_structured(S(U, V), kpair(U, V))
    v = check_structured(S(U), S(W))
    assert not v and W in trcl(S(W))
    assert check_structured(S(U), S(nat_encode(1)))


def diagram(dotted: bool):
    x0, x1, z0, z1 = (atom(i) for i in range(10, 14))
    b0, b1, b2 = S(x0), S(x0, x1), S(z0, z1)
    B = S(b0, b1, b2)
    b = kpair(b0, b1)
    if dotted:
        z2 = S(b2, z1)
        b = S(*b.elems, z0, z2)
    return B, b, z0


def test_diagram_without_dotted_edges_is_quasi():
    B, b, _ = diagram(False)
    assert check_quasi(B, b)


def test_diagram_with_dotted_edges_fails_clause_2b():
    B, b, z0 = diagram(True)
    v = check_quasi(B, b)
    assert not v
    assert v.clause == "2(b)"
    assert tuple(v.witness) == (z0, b)


def test_empty_in_domain_closure():
    v = check_quasi(S(EMPTY), EMPTY)
    assert not v and v.clause == "1(a)"


def test_atoms_domain_reading_agrees():
    # plain atom domains are quasi domains
    assert check_quasi(S(U, V), S(S(U)))
    assert check_quasi(S(S(U), S(V)), S(S(U)))


@settings(max_examples=60)
@given(seeds())
def test_structured_implies_quasi(rng):
    dom = S(*(atom(i) for i in range(1, rng.randint(1, 3) + 1)))
    from vstar.random_gen import random_hf

    s = random_hf(rng, list(dom.elems) + [EMPTY, atom(9)], 4)
    if check_structured(dom, s):
        assert check_quasi(dom, s)


def test_structured_implies_quasi_on_catalog_models():
    cat = catalog()
    for name in ("top", "sierpinski", "set2", "sub"):
        for n in (1, 2, 3):
            for m in enumerate_models(cat.theory(name), n):
                if check_structured(m.domain, m.structure):
                    assert check_quasi(m.domain, m.structure)


# -- field and lift ---------------------------------------------------------------


def test_field_examples():
    p = kpair(U, V)
    assert field(QuasiStructuredSet(S(U, V), p)) is S(U, V, S(U), S(U, V), p)
    assert field(QuasiStructuredSet(S(U), EMPTY)) is S(U, EMPTY)
    one = nat_encode(1)
    assert field(QuasiStructuredSet(S(U), S(one))) is S(U, EMPTY, one, S(one))


def test_lift_examples():
    q = QuasiStructuredSet(S(U, V), kpair(U, V))
    ident = lift(AtomMap.identity(q.domain), q)
    assert all(k is v for k, v in ident.items())
    swap = AtomMap([(U, V), (V, U)])
    assert lift(swap, q)[kpair(U, V)] is kpair(V, U)
    assert lift_value(swap, nat_encode(2), q.domain) is nat_encode(2)


@settings(max_examples=500)
@given(seeds())
def test_lift_functoriality(rng):
    a = random_quasi(rng, 3, 4)
    b_dom = S(*(atom(20 + i) for i in range(3)))
    c_dom = S(*(atom(30 + i) for i in range(3)))
    if not a.domain.elems[0].is_atom:
        return
    f = random_map(rng, a.domain, b_dom)
    g = random_map(rng, b_dom, c_dom)
    fl = lift(f, a)
    for x, fx in fl.items():
        assert lift_value(g, fx, b_dom) is lift_value(g.compose(f), x, a.domain)
        assert fx is lift_oracle(dict(f.items()), x)
    for x, y in lift(AtomMap.identity(a.domain), a).items():
        assert x is y


# -- isomorphisms -----------------------------------------------------------------


def test_sierpinski_isomorphism():
    a, b = sierpinski(U, V), sierpinski(W, X)
    assert is_isomorphism(AtomMap([(U, W), (V, X)]), a, b)
    assert not is_isomorphism(AtomMap([(U, V), (V, U)]), a, a)


def test_discrete_swap():
    d = QuasiStructuredSet(S(U, V), powerset([U, V]))
    assert is_isomorphism(AtomMap([(U, V), (V, U)]), d, d)


def test_automorphism_group_examples():
    assert automorphism_group(QuasiStructuredSet(S(U), EMPTY)).order == 1
    assert automorphism_group(QuasiStructuredSet(S(U, V), EMPTY)).order == 2
    assert automorphism_group(sierpinski(U, V)).order == 1
    assert automorphism_group(QuasiStructuredSet(S(U, V, W), EMPTY)).order == 6


def brute_isos(a, b):
    src = list(a.domain.elems)
    out = []
    for perm in itertools.permutations(b.domain.elems):
        f = dict(zip(src, perm))
        if lift_oracle(f, a.structure) is b.structure:
            out.append(f)
    return out


@settings(max_examples=80)
@given(seeds())
def test_search_matches_brute_force(rng):
    a = random_quasi(rng, 3, 4)
    if not a.domain.elems[0].is_atom:
        return
    f = random_permutation(rng, a.domain)
    b = QuasiStructuredSet(a.domain, lift_value(f, a.structure, a.domain))
    want = brute_isos(a, b)
    got = automorphisms(a)
    assert len(got) == len(brute_isos(a, a))
    found = find_isomorphism(a, b)
    assert found is not None and dict(found.items()) in want


def test_isomorphism_is_equivalence():
    cat = catalog()
    for name in ("top", "sierpinski", "sub"):
        models = list(enumerate_models(cat.theory(name), 3))[:12]
        for a in models:
            assert is_isomorphism(AtomMap.identity(a.domain), a, a)
        for a, b in itertools.product(models, repeat=2):
            f = find_isomorphism(a, b)
            if f is None:
                continue
            assert is_isomorphism(f.inverse(), b, a)
            for c in models:
                g = find_isomorphism(b, c)
                if g is not None:
                    assert is_isomorphism(g.compose(f), a, c)


def homeomorphism(f: dict, a, b) -> bool:
    opens = {frozenset(o.elems) for o in a.structure}
    target = {frozenset(o.elems) for o in b.structure}
    return {frozenset(f[x] for x in o) for o in opens} == target


def test_iso_is_homeomorphism_on_topologies():
    top = catalog().theory("top")
    models = list(enumerate_models(top, 3))
    for a, b in itertools.product(models[::3], models[::4]):
        for perm in itertools.permutations(b.domain.elems):
            f = dict(zip(a.domain.elems, perm))
            assert is_isomorphism(AtomMap(f.items()), a, b) == homeomorphism(f, a, b)


# -- atomization ----------------------------------------------------------------


def test_atomize_two_element_order():
    zero, one = EMPTY, S(EMPTY)
    m_dom, m_rel = S(zero, one), S(kpair(zero, one))
    q, corr = atomize_with_map(m_dom, m_rel, 2, S(U))
    assert check_quasi(q.domain, q.structure)
    assert len(q.domain) == 2 and len(q.structure) == 1
    assert q.structure.elems[0] is kpair(corr[zero], corr[one])
    assert list(simple_isomorphisms(q, m_dom, m_rel, 2))
    swap = {a: b for a, b in zip((U,), (V,))}
    copy = QuasiStructuredSet(lift_oracle(swap, q.domain), lift_oracle(swap, q.structure))
    assert are_isomorphic(q, copy)


def test_atomize_empty_relation():
    q = atomize(S(EMPTY), EMPTY, 1, S(U))
    assert check_quasi(q.domain, q.structure) and q.structure is EMPTY and len(q.domain) == 1


def test_atomize_three_cycle():
    n0, n1, n2 = (nat_encode(i) for i in range(3))
    rel = S(kpair(n0, n1), kpair(n1, n2), kpair(n2, n0))
    q = atomize(S(n0, n1, n2), rel, 2, S(U, V))
    assert check_quasi(q.domain, q.structure)
    assert automorphism_group(q).order == 3


def test_atomize_rejects_bad_input():
    with pytest.raises(NotSimple):
        atomize(S(U), EMPTY, 1, S(V))
    with pytest.raises(NotAQuasiDomain):
        atomize(S(EMPTY), EMPTY, 1, S(EMPTY))


# -- literals -------------------------------------------------------------------


@given(quasi_sets())
def test_structured_literal_round_trip(q):
    assert QuasiStructuredSet.parse(q.literal()) == q


def test_atom_map_literals():
    f = AtomMap.parse("@1->@2, @2->@1")
    assert f[U] is V and f[V] is U
    assert AtomMap.parse(f.literal()) == f
    assert f.is_bijection(S(U, V), S(U, V))
    assert f.compose(f) == AtomMap.identity(S(U, V))
    with pytest.raises(LiteralSyntaxError):
        QuasiStructuredSet.parse("{@1}")
    assert format_value(U) == "@1"
