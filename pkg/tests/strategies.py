"""Hypothesis strategies for values and structured sets."""

import random

from hypothesis import strategies as st

from vstar.hf import EMPTY, atom, set_of
from vstar.random_gen import random_quasi

ATOMS = [atom(i) for i in range(1, 4)]


def hf_values(max_rank: int = 4, atoms=ATOMS):
    leaves = st.sampled_from(list(atoms) + [EMPTY]) if atoms else st.just(EMPTY)
    return st.recursive(
        leaves,
        lambda kids: st.lists(kids, max_size=3).map(set_of),
        max_leaves=12,
    ).filter(lambda x: _rank(x) <= max_rank)


def pure_values(max_rank: int = 4):
    return hf_values(max_rank, atoms=())


def _rank(x):
    from vstar.hf import rank

    return rank(x)


def quasi_sets(max_atoms: int = 3, rank: int = 4):
    """Valid quasi-structured sets from the seeded generator."""
    return st.integers(0, 2**32 - 1).map(lambda s: random_quasi(random.Random(s), max_atoms, rank))


def seeds():
    return st.integers(0, 2**32 - 1).map(random.Random)
