import itertools
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from vstar.errors import LiteralSyntaxError, NotAFunction, NotANat, NotAPair, NotARational
from vstar.hf import (
    EMPTY,
    STORE,
    atom,
    format_value,
    function_view,
    is_pure,
    kpair,
    kpair_decode,
    mem,
    nat_decode,
    nat_encode,
    parse_value,
    rank,
    rat_decode,
    rat_encode,
    set_of,
    trcl,
)

from strategies import hf_values


def test_set_of_deduplicates_and_orders(u, v):
    assert set_of([u, u, v]) is set_of([u, v])
    assert set_of([v, u]) is set_of([u, v])
    assert list(set_of([v, u]).elems) == [u, v]
    assert set_of([]) is EMPTY and len(EMPTY) == 0


def test_atoms_are_memberless(u, v):
    assert atom(1) is u and atom(1) is not atom(2)
    assert mem(u, set_of([u, v]))
    assert not mem(u, v)
    assert not mem(set_of([u]), set_of([u]))
    assert len(u) == 0


def test_trcl(u):
    su = set_of([u])
    assert trcl(set_of([su])) is set_of([u, su])
    assert trcl(u) is EMPTY
    one = set_of([EMPTY])
    assert trcl(set_of([EMPTY, one])) is set_of([EMPTY, one])


def test_rank(u, v):
    assert rank(u) == 0 and rank(EMPTY) == 0
    assert rank(set_of([u])) == 1
    assert rank(set_of([set_of([u]), v])) == 2


def test_is_pure(u):
    assert is_pure(EMPTY)
    assert not is_pure(set_of([u]))
    assert is_pure(set_of([EMPTY, set_of([EMPTY])]))
    assert not is_pure(u)


def test_kpair(u, v):
    assert kpair(u, v) is set_of([set_of([u]), set_of([u, v])])
    assert kpair(u, u) is set_of([set_of([u])])
    assert kpair_decode(kpair(u, v)) == (u, v)
    assert kpair_decode(kpair(u, u)) == (u, u)
    with pytest.raises(NotAPair):
        kpair_decode(set_of([u, v]))
    with pytest.raises(NotAPair):
        kpair_decode(u)


def test_naturals():
    assert nat_encode(0) is EMPTY
    assert nat_encode(2) is set_of([EMPTY, set_of([EMPTY])])
    assert nat_decode(set_of([EMPTY])) == 1
    with pytest.raises(NotANat):
        nat_decode(set_of([set_of([EMPTY])]))


@given(st.fractions(min_value=-40, max_value=40, max_denominator=40))
def test_rationals_round_trip(q):
    x = rat_encode(q)
    assert rat_decode(x) == q
    assert is_pure(x)


def test_rational_errors(u):
    with pytest.raises(NotARational):
        rat_decode(u)
    assert rat_encode(Fraction(2, 4)) is rat_encode(Fraction(1, 2))


def test_function_view(u, v, w):
    su = set_of([u])
    assert function_view(set_of([kpair(u, su)])).lookup(u) is su
    with pytest.raises(NotAFunction):
        function_view(set_of([kpair(u, v), kpair(u, w)]))
    assert function_view(EMPTY).domain is EMPTY
    with pytest.raises(NotAFunction):
        function_view(set_of([u]))


def test_literals(u, v):
    x = set_of([kpair(u, v), EMPTY])
    assert parse_value(format_value(x)) is x
    assert parse_value("{@2, @1, @1}") is set_of([u, v])
    with pytest.raises(LiteralSyntaxError):
        parse_value("{@1,")


# properties


@given(hf_values(), hf_values())
def test_extensionality(x, y):
    same_extension = x.is_set and y.is_set and set(x.elems) == set(y.elems)
    if x.is_set and y.is_set:
        assert (x is y) == same_extension
    assert (x is y) == (format_value(x) == format_value(y))


@given(st.lists(hf_values(), min_size=1, max_size=4))
def test_rank_recurrence(cs):
    assert rank(set_of(cs)) == 1 + max(rank(c) for c in cs)


@given(hf_values())
def test_trcl_is_transitive(x):
    t = trcl(x)
    closed = set(t.elems) | {x}
    for y in closed:
        for z in y.elems:
            assert z in t
    assert set(trcl(t).elems) <= set(t.elems)


def test_kpair_injective_on_pool(u, v):
    pool = [u, v, EMPTY, set_of([u]), set_of([EMPTY]), kpair(u, v)]
    for a, b, c, d in itertools.product(pool, repeat=4):
        assert (kpair(a, b) is kpair(c, d)) == (a is c and b is d)


@given(hf_values())
def test_interning(x):
    again = parse_value(format_value(x))
    assert again is x
    if x.is_set:
        before = len(STORE)
        assert set_of(reversed(x.elems)) is x
        assert len(STORE) == before
