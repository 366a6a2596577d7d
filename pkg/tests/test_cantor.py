import pytest
from hypothesis import given, strategies as st

from vstar.acceptance import ABSTRACT_CASES
from vstar.cantor import (
    CYCLE,
    S_STOPPER,
    T_STOPPER,
    AbstractInjectionPair,
    cantor_bernstein,
    chase,
    degenerate,
    fiber_pair,
)
from vstar.errors import IncompleteCatalog, NotDomainPreserving, NotInjective
from vstar.interp import get_interp


@pytest.mark.parametrize("name", sorted(ABSTRACT_CASES))
def test_hand_chases(name):
    pair, expected = ABSTRACT_CASES[name]
    res = chase(pair)
    assert {s.element: (s.image, s.branch, s.chain) for s in res.trace} == expected


def test_bijectivity_of_examples():
    assert chase(ABSTRACT_CASES["t-stopper"][0]).bijective
    assert chase(ABSTRACT_CASES["cycle"][0]).bijective
    # only a0 to cover two S elements
    assert not chase(ABSTRACT_CASES["s-stopper"][0]).bijective


def test_identity_complement_fiber():
    pair = fiber_pair(get_interp("sub_id"), get_interp("sub_compl"), 2)
    res = cantor_bernstein(pair)
    assert res.bijective and all(res.u[x] == x for x in pair.T)
    assert {res.branch(x) for x in pair.T} == {CYCLE}
    assert degenerate(res, pair)


@pytest.mark.parametrize("t,s,n", [("sub_id", "sub_compl", 3), ("top_id", "top_id", 2), ("sub_id", "sub_id", 1)])
def test_fiber_degeneracy(t, s, n):
    res = cantor_bernstein(get_interp(t), get_interp(s), n)
    pair = fiber_pair(get_interp(t), get_interp(s), n)
    assert degenerate(res, pair) and res.bijective


def test_input_errors():
    with pytest.raises(IncompleteCatalog):
        AbstractInjectionPair(["a"], ["b"], {}, {})
    with pytest.raises(IncompleteCatalog):
        AbstractInjectionPair(["a"], ["b"], {"a": "c"}, {})
    with pytest.raises(NotInjective):
        AbstractInjectionPair(["a0", "a1"], ["b"], {"a0": "b", "a1": "b"}, {})
    with pytest.raises(NotDomainPreserving):
        fiber_pair(get_interp("set1_to_pset2"), get_interp("pset2_to_set1"), 1)
    with pytest.raises(NotInjective):
        fiber_pair(get_interp("metr_to_metrble"), get_interp("metrble_to_metr"), 2)


@st.composite
def injection_pairs(draw):
    n_t = draw(st.integers(1, 5))
    n_s = draw(st.integers(n_t, 6))
    T = [f"a{i}" for i in range(n_t)]
    S = [f"b{i}" for i in range(n_s)]
    t_img = draw(st.permutations(S))[:n_t]
    s_dom = draw(st.lists(st.sampled_from(S), unique=True, max_size=n_t))
    s_img = draw(st.permutations(T))[: len(s_dom)]
    return AbstractInjectionPair(T, S, dict(zip(T, t_img)), dict(zip(s_dom, s_img)))


@given(injection_pairs())
def test_chase_structure(pair):
    res = chase(pair)
    s_inv = {y: x for x, y in pair.s.items()}
    t_inv = {y: x for x, y in pair.t.items()}
    for step in res.trace:
        x = step.element
        # the chain steps back through preimages, alternating sides
        for i, (here, there) in enumerate(zip(step.chain, step.chain[1:])):
            back = s_inv if i % 2 == 0 else t_inv
            assert back[here] == there
        if step.branch == S_STOPPER:
            assert step.image == s_inv[x] and len(step.chain) % 2 == 0
            assert step.chain[-1] not in t_inv
        else:
            assert step.image == pair.t[x]
        if step.branch == T_STOPPER:
            assert len(step.chain) % 2 == 1 and step.chain[-1] not in s_inv
    assert res.bijective == (sorted(res.u.values()) == sorted(pair.S))


@given(st.integers(1, 6), st.randoms())
def test_total_injections_always_cycle(n, rnd):
    T = list(range(n))
    S = [f"b{i}" for i in range(n)]
    ts, ss = S[:], T[:]
    rnd.shuffle(ts)
    rnd.shuffle(ss)
    pair = AbstractInjectionPair(T, S, dict(zip(T, ts)), dict(zip(S, ss)))
    res = chase(pair)
    assert res.bijective and degenerate(res, pair)
    assert all(step.branch == CYCLE for step in res.trace)
