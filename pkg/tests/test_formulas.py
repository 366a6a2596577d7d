import random

import pytest
from hypothesis import given, settings, strategies as st

from vstar.errors import FormulaSyntaxError, MultipleWitnesses, NoWitness, RankCapExceeded, ScopeError
from vstar.formulas import LevyClass, classify, eval3, eval_formula, eval_term, parse_formula, parse_term, pretty
from vstar.formulas.syntax import Forall, In, Not, UExists, Var, Pow, SMALL_D, D
from vstar.hf import EMPTY, atom, set_of
from vstar.random_gen import random_formula, random_quasi
from vstar.structured import QuasiStructuredSet
from vstar.theories import catalog

from conftest import sierpinski

U, V = atom(1), atom(2)
S = lambda *xs: set_of(xs)  # noqa: E731
UV = QuasiStructuredSet(S(U, V), EMPTY)


def test_subset_sugar():
    phi = parse_formula("d subset pow(D)")
    assert isinstance(phi, Forall) and phi.bound == SMALL_D
    assert phi.body == In(Var(phi.var), Pow(D))


def test_top_intersection_axiom_parses():
    phi = parse_formula("forall X in d. forall Y in d. cap(X,Y) in d")
    assert isinstance(phi, Forall) and isinstance(phi.body, Forall)
    assert classify(phi) is LevyClass.DELTA0


def test_syntax_errors():
    with pytest.raises(FormulaSyntaxError):
        parse_formula("forall X in d Y in d")
    with pytest.raises(ScopeError):
        parse_formula("x in D")
    with pytest.raises(FormulaSyntaxError) as e:
        parse_formula("D in (d")
    assert "column" in str(e.value) or "position" in str(e.value) or ":" in str(e.value)


def test_eval_top():
    top = catalog().theory("top").formula
    assert eval_formula(top, sierpinski(U, V))
    assert not eval_formula(top, QuasiStructuredSet(S(U, V), S(EMPTY)))


@settings(max_examples=40)
@given(st.integers(0, 10**6))
def test_trivial_sentence(seed):
    assert eval_formula(parse_formula("D = D"), random_quasi(random.Random(seed)))


def test_eval_terms():
    assert eval_term(parse_term("pow(D)"), UV) is S(EMPTY, S(U), S(V), S(U, V))
    assert eval_term(parse_term("the(x in pow(D) | forall y in D. y in x)"), UV) is S(U, V)
    with pytest.raises(MultipleWitnesses):
        eval_term(parse_term("the(x in D | x = x)"), UV)
    with pytest.raises(NoWitness):
        eval_term(parse_term("the(x in D | not x = x)"), UV)


def test_classify_examples():
    assert classify(parse_formula("forall x in D. x in D")) is LevyClass.DELTA0
    s1 = parse_formula("uexists[3] x. x in d")
    assert classify(s1) is LevyClass.SIGMA1
    assert classify(Not(s1)) is LevyClass.PI1
    mixed = parse_formula("(uexists[3] x. x in d) and not (uexists[3] y. y in d)")
    assert classify(mixed) is LevyClass.OTHER


def test_catalog_round_trip():
    cat = catalog()
    for name in cat.theories:
        phi = cat.theory(name).formula
        assert parse_formula(pretty(phi)) == phi
        assert classify(phi) is LevyClass.DELTA0


@settings(max_examples=500)
@given(st.integers(0, 2**32 - 1))
def test_random_round_trip(seed):
    phi = random_formula(random.Random(seed), [], 3)
    assert parse_formula(pretty(phi)) == phi


def test_unknown_is_not_false():
    # no witness within the cap: unknown, never false
    phi = parse_formula("uexists[1] x. not x = x")
    assert eval3(phi, UV) is None
    with pytest.raises(RankCapExceeded):
        eval_formula(phi, UV)
    assert eval3(parse_formula("uexists[1] x. x = D"), UV) is True


@settings(max_examples=60)
@given(st.integers(0, 2**32 - 1))
def test_sigma1_persistence(seed):
    rng = random.Random(seed)
    q = random_quasi(rng, 2, 3)
    body = random_formula(rng, ["x"], 2)
    seen_true = False
    for k in range(2, 6):
        v = eval3(UExists("x", k, body), q, budget=3000)
        assert v in (True, None)
        if seen_true:
            assert v is True
        seen_true = seen_true or v is True


@settings(max_examples=100)
@given(st.integers(0, 2**32 - 1))
def test_delta0_ignores_caps(seed):
    rng = random.Random(seed)
    q = random_quasi(rng, 3, 3)
    phi = random_formula(rng, [], 3)
    results = {eval3(phi, q, budget=b) for b in (500, 50_000)}
    assert len(results) == 1 and None not in results
