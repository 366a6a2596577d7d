"""Seeded generators for values, quasi-structured sets, maps and Δ₀ formulas."""

from __future__ import annotations

import random

from .formulas.syntax import (
    D,
    EMPTY_T,
    SMALL_D,
    And,
    BigUnion,
    Eq,
    Exists,
    Forall,
    Iff,
    Implies,
    In,
    Not,
    Or,
    Pair,
    Pow,
    Sep,
    Truth,
    Var,
)
from .hf import EMPTY, HF, atom, set_of
from .structured import AtomMap, QuasiStructuredSet, check_quasi, lift_value, u_members


def random_hf(rng: random.Random, leaves: list[HF], depth: int, width: int = 3) -> HF:
    """A value of rank at most depth above the leaves."""
    if depth == 0 or (leaves and rng.random() < 0.3):
        return rng.choice(leaves) if leaves else EMPTY
    k = rng.randint(0, width)
    return set_of(random_hf(rng, leaves, depth - 1, width) for _ in range(k))


def random_domain(rng: random.Random, n: int, first_atom: int = 1, wrapped: bool | None = None) -> HF:
    """n atoms, or (for quasi domains) n singletons of atoms."""
    atoms = [atom(first_atom + i) for i in range(n)]
    if wrapped is None:
        wrapped = rng.random() < 0.3
    if wrapped:
        return set_of(set_of((a,)) for a in atoms)
    return set_of(atoms)


def random_quasi(rng: random.Random, max_atoms: int = 3, rank: int = 4, first_atom: int = 1) -> QuasiStructuredSet:
    """A valid quasi-structured set whose structure has rank at most `rank`
    above its domain.  Invalid draws are retried."""
    while True:
        # larger domains and nonempty structures make more interesting cases
        n = max(rng.randint(1, max_atoms), rng.randint(1, max_atoms))
        dom = random_domain(rng, n, first_atom)
        leaves = list(dom.elems) + [EMPTY]
        depth = rng.randint(1, rank)
        s = set_of(random_hf(rng, leaves, depth - 1) for _ in range(rng.randint(1, 3)))
        if check_quasi(dom, s):
            return QuasiStructuredSet(dom, s)


def random_permutation(rng: random.Random, domain: HF) -> AtomMap:
    xs = list(domain.elems)
    ys = xs[:]
    rng.shuffle(ys)
    return AtomMap(zip(xs, ys))


def random_map(rng: random.Random, source: HF, target: HF) -> AtomMap:
    ys = list(target.elems)
    return AtomMap((x, rng.choice(ys)) for x in source.elems)


def image(f: AtomMap, a: QuasiStructuredSet) -> QuasiStructuredSet:
    """f*(a), the copy of a along f."""
    memo: dict = {}
    return QuasiStructuredSet(
        lift_value(f, a.domain, a.domain, memo), lift_value(f, a.structure, a.domain, memo)
    )


# -- formulas -------------------------------------------------------------------


def random_term(rng: random.Random, names: list[str], depth: int):
    base = [D, SMALL_D, EMPTY_T] + [Var(n) for n in names]
    if depth <= 0:
        return rng.choice(base)
    r = rng.random()
    if r < 0.45:
        return rng.choice(base)
    if r < 0.65:
        return BigUnion(random_term(rng, names, depth - 1))
    if r < 0.85:
        return Pair(random_term(rng, names, depth - 1), random_term(rng, names, depth - 1))
    if r < 0.92:
        return Pow(D)
    v = _fresh(names)
    return Sep(v, random_bound(rng, names), random_formula(rng, names + [v], 0))


def random_bound(rng: random.Random, names: list[str]):
    """Bounds stay small: D, d, a variable or one union of them."""
    base = [D, SMALL_D] + [Var(n) for n in names]
    t = rng.choice(base)
    return BigUnion(t) if rng.random() < 0.3 else t


def _fresh(names: list[str]) -> str:
    i = 0
    while f"x{i}" in names:
        i += 1
    return f"x{i}"


def random_formula(rng: random.Random, names: list[str], depth: int = 3):
    """A Δ₀ formula whose free variables are among names."""
    if depth <= 0:
        r = rng.random()
        if r < 0.05:
            return Truth(rng.random() < 0.5)
        # atoms that mention the assigned values tell structures apart
        left = Var(rng.choice(names)) if names and rng.random() < 0.6 else random_term(rng, names, 1)
        right = random_term(rng, names, 1)
        return Eq(left, right) if r < 0.4 else In(left, right)
    r = rng.random()
    sub = lambda: random_formula(rng, names, depth - 1)  # noqa: E731
    if r < 0.1:
        return Not(sub())
    if r < 0.25:
        return And(sub(), sub())
    if r < 0.38:
        return Or(sub(), sub())
    if r < 0.46:
        return Implies(sub(), sub())
    if r < 0.5:
        return Iff(sub(), sub())
    if r < 0.8:
        v = _fresh(names)
        q = Forall if rng.random() < 0.5 else Exists
        return q(v, random_bound(rng, names), random_formula(rng, names + [v], depth - 1))
    return random_formula(rng, names, 0)


def random_assignment(rng: random.Random, a: QuasiStructuredSet, names: list[str], rank: int = 3) -> dict:
    """Values from the universe over a's domain, biased towards its field."""
    leaves = list(a.domain.elems) + [EMPTY]
    parts = [a.structure, *u_members(a.structure, a.domain)]
    env = {}
    for n in names:
        if rng.random() < 0.4:
            env[n] = rng.choice(parts + leaves)
        else:
            env[n] = random_hf(rng, leaves, rank)
    return env
