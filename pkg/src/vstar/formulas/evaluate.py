"""Three-valued evaluation of formulas over a quasi-structured set.

D denotes the domain and d the structure.  Domain elements behave as atoms:
they have no members inside the universe built over the domain.  Bounded
quantifiers only range over values produced by terms, so Δ₀ evaluation is
exact and two-valued.  An unbounded existential searches the universe level
by level up to its rank cap and never concludes false; running out of
candidates yields unknown (None).
"""

from __future__ import annotations

import itertools
from typing import Optional

from ..errors import BoundExceeded, EvalError, MultipleWitnesses, NoWitness, NotARational, RankCapExceeded
from ..hf import EMPTY, HF, format_value, kpair, nat_encode, rat_decode, rat_encode, set_of
from ..structured import QuasiStructuredSet, u_members
from .syntax import (
    And,
    Arith,
    BigUnion,
    Const,
    Eq,
    Exists,
    Forall,
    Iff,
    Implies,
    In,
    NatLit,
    Not,
    Or,
    Pair,
    Pow,
    Prod,
    RatLit,
    Sep,
    The,
    Truth,
    UExists,
    Var,
)

DEFAULT_BUDGET = 50_000
MAX_POW_ARGUMENT = 16


class Evaluator:
    def __init__(self, q: QuasiStructuredSet, budget: int = DEFAULT_BUDGET):
        self.q = q
        self.domain = q.domain
        self.budget = budget
        self._memo: dict = {}
        self._levels: list[list[HF]] = []
        self._seen: set = set()

    def members(self, x: HF) -> tuple:
        return u_members(x, self.domain)

    # terms

    def term(self, t, env: dict) -> HF:
        key = (id(t),) + tuple(env[v] for v in t.fv_order)
        got = self._memo.get(key)
        if got is None:
            got = self._term(t, env)
            self._memo[key] = got
        return got

    def _term(self, t, env: dict) -> HF:
        if isinstance(t, Var):
            return env[t.name]
        if isinstance(t, Const):
            if t.name == "D":
                return self.q.domain
            if t.name == "d":
                return self.q.structure
            return EMPTY
        if isinstance(t, Pow):
            ms = self.members(self.term(t.arg, env))
            if len(ms) > MAX_POW_ARGUMENT:
                raise BoundExceeded(f"pow of a set with {len(ms)} members")
            return set_of(
                set_of(c) for k in range(len(ms) + 1) for c in itertools.combinations(ms, k)
            )
        if isinstance(t, BigUnion):
            return set_of(y for x in self.members(self.term(t.arg, env)) for y in self.members(x))
        if isinstance(t, Prod):
            a = self.members(self.term(t.left, env))
            b = self.members(self.term(t.right, env))
            return set_of(kpair(x, y) for x in a for y in b)
        if isinstance(t, Pair):
            return kpair(self.term(t.left, env), self.term(t.right, env))
        if isinstance(t, NatLit):
            return nat_encode(t.value)
        if isinstance(t, RatLit):
            return rat_encode(t.value)
        if isinstance(t, Arith):
            return self._arith(t, env)
        if isinstance(t, Sep):
            out = []
            for x in self.members(self.term(t.bound, env)):
                v = self.formula(t.body, {**env, t.var: x})
                if v is None:
                    raise RankCapExceeded(f"separation {t} is undetermined")
                if v:
                    out.append(x)
            return set_of(out)
        if isinstance(t, The):
            hits = []
            for x in self.members(self.term(t.bound, env)):
                v = self.formula(t.body, {**env, t.var: x})
                if v is None:
                    raise RankCapExceeded(f"description {t} is undetermined")
                if v:
                    hits.append(x)
            if not hits:
                raise NoWitness(f"no witness for {t}")
            if len(hits) > 1:
                raise MultipleWitnesses(
                    f"{len(hits)} witnesses for {t}: " + ", ".join(format_value(h) for h in hits[:3])
                )
            return hits[0]
        raise TypeError(f"not a term: {t!r}")

    def _arith(self, t: Arith, env: dict) -> HF:
        try:
            a = rat_decode(self.term(t.left, env))
            b = rat_decode(self.term(t.right, env))
        except NotARational:
            return EMPTY
        if t.op == "radd":
            return rat_encode(a + b)
        if t.op == "rmax":
            return rat_encode(max(a, b))
        raise TypeError(f"unknown arithmetic operation {t.op!r}")

    # formulas

    def formula(self, f, env: dict) -> Optional[bool]:
        if isinstance(f, Truth):
            return f.value
        if isinstance(f, (Eq, In)):
            try:
                a = self.term(f.left, env)
                b = self.term(f.right, env)
            except RankCapExceeded:
                return None
            if isinstance(f, Eq):
                return a is b
            return b.atom_id is None and b not in self.domain and a in b
        if isinstance(f, Not):
            v = self.formula(f.arg, env)
            return None if v is None else not v
        if isinstance(f, And):
            a = self.formula(f.left, env)
            if a is False:
                return False
            b = self.formula(f.right, env)
            if b is False:
                return False
            return None if a is None or b is None else True
        if isinstance(f, Or):
            a = self.formula(f.left, env)
            if a is True:
                return True
            b = self.formula(f.right, env)
            if b is True:
                return True
            return None if a is None or b is None else False
        if isinstance(f, Implies):
            a = self.formula(f.left, env)
            if a is False:
                return True
            b = self.formula(f.right, env)
            if b is True:
                return True
            return None if a is None or b is None else False
        if isinstance(f, Iff):
            a = self.formula(f.left, env)
            if a is None:
                return None
            b = self.formula(f.right, env)
            return None if b is None else a == b
        if isinstance(f, (Forall, Exists)):
            try:
                bound = self.term(f.bound, env)
            except RankCapExceeded:
                return None
            stop = isinstance(f, Exists)  # the value that settles the quantifier
            unknown = False
            for x in self.members(bound):
                v = self.formula(f.body, {**env, f.var: x})
                if v is stop:
                    return stop
                if v is None:
                    unknown = True
            return None if unknown else not stop
        if isinstance(f, UExists):
            for x in self.universe(f.cap):
                if self.formula(f.body, {**env, f.var: x}) is True:
                    return True
            return None
        raise TypeError(f"not a formula: {f!r}")

    # the universe over the domain, level by level

    def universe(self, cap: int):
        """Yield V_0, then the new members of V_1, ... up to V_cap, where
        V_0 is the domain and V_{n+1} adds every subset of V_n.  The order is
        fixed, so raising the cap only appends candidates.  Stops early once
        the evaluation budget is spent."""
        produced = 0
        level_index = 0
        while level_index <= cap:
            level = self._level(level_index)
            if level is None:
                return
            for x in level:
                if produced >= self.budget:
                    return
                produced += 1
                yield x
            level_index += 1

    def _level(self, n: int):
        while len(self._levels) <= n:
            k = len(self._levels)
            if k == 0:
                new = list(self.domain.elems)
            else:
                base = [x for lv in self._levels for x in lv]
                if len(base) > 20:
                    # far beyond any budget; never materialized
                    return None
                new = []
                for size in range(len(base) + 1):
                    for c in itertools.combinations(base, size):
                        s = set_of(c)
                        if s not in self._seen:
                            new.append(s)
                            self._seen.add(s)
                            if len(new) > self.budget:
                                break
                    if len(new) > self.budget:
                        break
            self._seen.update(new)
            self._levels.append(new)
        return self._levels[n]


def eval3(phi, q: QuasiStructuredSet, assignment: dict | None = None, budget: int = DEFAULT_BUDGET) -> Optional[bool]:
    """True, False, or None for unknown."""
    env = dict(assignment or {})
    missing = phi.fv - env.keys()
    if missing:
        raise EvalError(f"assignment misses free variables {sorted(missing)}")
    return Evaluator(q, budget).formula(phi, env)


def eval_formula(phi, q: QuasiStructuredSet, assignment: dict | None = None, budget: int = DEFAULT_BUDGET) -> bool:
    v = eval3(phi, q, assignment, budget)
    if v is None:
        raise RankCapExceeded(f"truth of {phi} is unknown within its rank caps")
    return v


def eval_term(t, q: QuasiStructuredSet, assignment: dict | None = None, budget: int = DEFAULT_BUDGET) -> HF:
    env = dict(assignment or {})
    missing = t.fv - env.keys()
    if missing:
        raise EvalError(f"assignment misses free variables {sorted(missing)}")
    return Evaluator(q, budget).term(t, env)
