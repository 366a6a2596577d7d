import random

from hypothesis import given, settings, strategies as st

from vstar.formulas import eval3, parse_formula
from vstar.random_gen import image, random_assignment, random_formula, random_permutation, random_quasi
from vstar.structured import automorphisms, check_quasi, is_isomorphism, lift_value


@settings(max_examples=300)
@given(st.integers(0, 2**32 - 1))
def test_transfer(seed):
    rng = random.Random(seed)
    a = random_quasi(rng, 3, 4)
    f = random_permutation(rng, a.domain)
    b = image(f, a)
    assert is_isomorphism(f, a, b)
    phi = random_formula(rng, ["c0", "c1"], 3)
    env = random_assignment(rng, a, ["c0", "c1"])
    memo: dict = {}
    moved = {k: lift_value(f, v, a.domain, memo) for k, v in env.items()}
    assert eval3(phi, a, env) == eval3(phi, b, moved)


def test_transfer_check_detects_a_wrong_lift():
    # leaving the assignment unmoved must break transfer on some cases
    rng = random.Random(7)
    phi = parse_formula("c0 in d", free=("c0",))
    broken = tried = 0
    for _ in range(300):
        a = random_quasi(rng, 3, 4)
        f = random_permutation(rng, a.domain)
        b = image(f, a)
        env = random_assignment(rng, a, ["c0"])
        moved = {"c0": lift_value(f, env["c0"], a.domain)}
        if moved["c0"] is env["c0"]:
            continue
        tried += 1
        assert eval3(phi, a, env) == eval3(phi, b, moved)
        broken += eval3(phi, a, env) != eval3(phi, b, env)
    assert tried > 50 and broken > 0


@settings(max_examples=200)
@given(st.integers(0, 2**32 - 1))
def test_generated_sets_are_valid(seed):
    rng = random.Random(seed)
    a = random_quasi(rng, 3, 4)
    assert check_quasi(a.domain, a.structure)
    assert len(a.structure) > 0
    for g in automorphisms(a):
        assert is_isomorphism(g, a, a)
