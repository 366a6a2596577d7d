"""Abstract syntax for the bounded set-theoretic language with constants D and d."""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Union


class _Node:
    @cached_property
    def fv(self) -> frozenset:
        return _free_vars(self)

    @cached_property
    def fv_order(self) -> tuple:
        return tuple(sorted(self.fv))

    def __str__(self) -> str:
        return pretty(self)


# -- terms ---------------------------------------------------------------------


@dataclass(frozen=True, eq=True)
class Const(_Node):
    name: str  # "D", "d" or "Empty"


@dataclass(frozen=True, eq=True)
class Var(_Node):
    name: str


@dataclass(frozen=True, eq=True)
class Pow(_Node):
    arg: "Term"


@dataclass(frozen=True, eq=True)
class BigUnion(_Node):
    arg: "Term"


@dataclass(frozen=True, eq=True)
class Prod(_Node):
    left: "Term"
    right: "Term"


@dataclass(frozen=True, eq=True)
class Pair(_Node):
    left: "Term"
    right: "Term"


@dataclass(frozen=True, eq=True)
class NatLit(_Node):
    value: int


@dataclass(frozen=True, eq=True)
class RatLit(_Node):
    value: Fraction


@dataclass(frozen=True, eq=True)
class Arith(_Node):
    """Kernel rational arithmetic; non-rational arguments yield ∅."""

    op: str  # "radd" or "rmax"
    left: "Term"
    right: "Term"


@dataclass(frozen=True, eq=True)
class Sep(_Node):
    var: str
    bound: "Term"
    body: "Formula"


@dataclass(frozen=True, eq=True)
class The(_Node):
    var: str
    bound: "Term"
    body: "Formula"


Term = Union[Const, Var, Pow, BigUnion, Prod, Pair, NatLit, RatLit, Arith, Sep, The]
TERM_TYPES = (Const, Var, Pow, BigUnion, Prod, Pair, NatLit, RatLit, Arith, Sep, The)

D = Const("D")
SMALL_D = Const("d")
EMPTY_T = Const("Empty")


# -- formulas ------------------------------------------------------------------


@dataclass(frozen=True, eq=True)
class Truth(_Node):
    value: bool


@dataclass(frozen=True, eq=True)
class Eq(_Node):
    left: Term
    right: Term


@dataclass(frozen=True, eq=True)
class In(_Node):
    left: Term
    right: Term


@dataclass(frozen=True, eq=True)
class Not(_Node):
    arg: "Formula"


@dataclass(frozen=True, eq=True)
class And(_Node):
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True, eq=True)
class Or(_Node):
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True, eq=True)
class Implies(_Node):
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True, eq=True)
class Iff(_Node):
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True, eq=True)
class Forall(_Node):
    var: str
    bound: Term
    body: "Formula"


@dataclass(frozen=True, eq=True)
class Exists(_Node):
    var: str
    bound: Term
    body: "Formula"


@dataclass(frozen=True, eq=True)
class UExists(_Node):
    """Unbounded existential, searched over the universe up to a rank cap."""

    var: str
    cap: int
    body: "Formula"


Formula = Union[Truth, Eq, In, Not, And, Or, Implies, Iff, Forall, Exists, UExists]
FORMULA_TYPES = (Truth, Eq, In, Not, And, Or, Implies, Iff, Forall, Exists, UExists)
BINARY = (And, Or, Implies, Iff)
BINDERS = (Sep, The, Forall, Exists)


def children(node) -> tuple:
    if isinstance(node, (Const, Var, NatLit, RatLit, Truth)):
        return ()
    if isinstance(node, (Pow, BigUnion, Not)):
        return (node.arg,)
    if isinstance(node, (Prod, Pair, Arith, Eq, In) + BINARY):
        return (node.left, node.right)
    if isinstance(node, BINDERS):
        return (node.bound, node.body)
    if isinstance(node, UExists):
        return (node.body,)
    raise TypeError(f"not a syntax node: {node!r}")


def _free_vars(node) -> frozenset:
    if isinstance(node, Var):
        return frozenset((node.name,))
    if isinstance(node, BINDERS):
        return node.bound.fv | (node.body.fv - {node.var})
    if isinstance(node, UExists):
        return node.body.fv - {node.var}
    out = frozenset()
    for c in children(node):
        out |= c.fv
    return out


def walk(node):
    yield node
    for c in children(node):
        yield from walk(c)


def constants_used(node) -> set[str]:
    return {n.name for n in walk(node) if isinstance(n, Const)}


def names_in(node) -> set[str]:
    """Every variable name occurring in node, free or bound."""
    out = set()
    for n in walk(node):
        if isinstance(n, Var):
            out.add(n.name)
        elif isinstance(n, BINDERS + (UExists,)):
            out.add(n.var)
    return out


def fresh(avoid, stem: str = "_") -> str:
    i = 0
    while f"{stem}{i}" in avoid:
        i += 1
    return f"{stem}{i}"


def subst_const(node, name: str, replacement):
    """Replace the constant D or d by a closed term."""
    if isinstance(node, Const):
        return replacement if node.name == name else node
    if isinstance(node, (Var, NatLit, RatLit, Truth)):
        return node
    if isinstance(node, (Pow, BigUnion, Not)):
        return type(node)(subst_const(node.arg, name, replacement))
    if isinstance(node, Arith):
        return Arith(node.op, subst_const(node.left, name, replacement), subst_const(node.right, name, replacement))
    if isinstance(node, (Prod, Pair, Eq, In) + BINARY):
        return type(node)(subst_const(node.left, name, replacement), subst_const(node.right, name, replacement))
    if isinstance(node, BINDERS):
        return type(node)(node.var, subst_const(node.bound, name, replacement), subst_const(node.body, name, replacement))
    if isinstance(node, UExists):
        return UExists(node.var, node.cap, subst_const(node.body, name, replacement))
    raise TypeError(node)


def instantiate(node, mapping: dict):
    """Substitute terms for the constants named in `mapping`, renaming binders
    so that free variables of the replacements are never captured."""
    avoid = set()
    for t in mapping.values():
        avoid |= t.fv
    return _inst(node, mapping, avoid)


def _inst(node, mapping, avoid):
    if isinstance(node, Const):
        return mapping.get(node.name, node)
    if isinstance(node, (Var, NatLit, RatLit, Truth)):
        return node
    if isinstance(node, (Pow, BigUnion, Not)):
        return type(node)(_inst(node.arg, mapping, avoid))
    if isinstance(node, Arith):
        return Arith(node.op, _inst(node.left, mapping, avoid), _inst(node.right, mapping, avoid))
    if isinstance(node, (Prod, Pair, Eq, In) + BINARY):
        return type(node)(_inst(node.left, mapping, avoid), _inst(node.right, mapping, avoid))
    if isinstance(node, (UExists,) + BINDERS):
        var, body = node.var, node.body
        if var in avoid:
            new = fresh(avoid | names_in(body) | {var})
            body = rename_free(body, var, new)
            var = new
        body = _inst(body, mapping, avoid)
        if isinstance(node, UExists):
            return UExists(var, node.cap, body)
        return type(node)(var, _inst(node.bound, mapping, avoid), body)
    raise TypeError(node)


def rename_free(node, old: str, new: str):
    """Capture-free renaming of free variable `old` to `new`, assuming `new` is fresh."""
    if isinstance(node, Var):
        return Var(new) if node.name == old else node
    if isinstance(node, (Const, NatLit, RatLit, Truth)):
        return node
    if isinstance(node, (Pow, BigUnion, Not)):
        return type(node)(rename_free(node.arg, old, new))
    if isinstance(node, Arith):
        return Arith(node.op, rename_free(node.left, old, new), rename_free(node.right, old, new))
    if isinstance(node, (Prod, Pair, Eq, In) + BINARY):
        return type(node)(rename_free(node.left, old, new), rename_free(node.right, old, new))
    if isinstance(node, BINDERS):
        body = node.body if node.var == old else rename_free(node.body, old, new)
        return type(node)(node.var, rename_free(node.bound, old, new), body)
    if isinstance(node, UExists):
        body = node.body if node.var == old else rename_free(node.body, old, new)
        return UExists(node.var, node.cap, body)
    raise TypeError(node)


# -- Lévy classification ------------------------------------------------------------


class LevyClass(enum.Enum):
    DELTA0 = "Δ₀"
    SIGMA1 = "Σ₁"
    PI1 = "Π₁"
    OTHER = "Other"

    def __str__(self) -> str:
        return self.value


_D0, _S1, _P1, _OT = LevyClass.DELTA0, LevyClass.SIGMA1, LevyClass.PI1, LevyClass.OTHER


def _join(a: LevyClass, b: LevyClass) -> LevyClass:
    if a is _D0:
        return b
    if b is _D0 or a is b:
        return a
    return _OT


def _flip(c: LevyClass) -> LevyClass:
    return {_S1: _P1, _P1: _S1}.get(c, c)


def classify(node) -> LevyClass:
    """Syntactic class.  Δ₀: no unbounded quantifier.  Σ₁ (Π₁): unbounded
    existentials occur only positively (only negatively), under bounded
    quantifiers and connectives.  Terms take the join of their formulas."""
    if isinstance(node, (Const, Var, NatLit, RatLit, Truth)):
        return _D0
    if isinstance(node, UExists):
        return _join(_S1, classify(node.body)) if classify(node.body) in (_D0, _S1) else _OT
    if isinstance(node, Not):
        return _flip(classify(node.arg))
    if isinstance(node, Implies):
        return _join(_flip(classify(node.left)), classify(node.right))
    if isinstance(node, Iff):
        a, b = classify(node.left), classify(node.right)
        return _D0 if a is _D0 and b is _D0 else _OT
    if isinstance(node, (Sep, The)):
        # membership in a separated set is used both ways, so only Δ₀ bodies stay Δ₀
        body = classify(node.body)
        return _join(classify(node.bound), body)
    out = _D0
    for c in children(node):
        out = _join(out, classify(c))
    return out


# -- pretty printing ----------------------------------------------------------------


_ATOMIC_FORMULAS = (Truth, Eq, In)


def pretty(node) -> str:
    if isinstance(node, Const):
        return node.name
    if isinstance(node, Var):
        return node.name
    if isinstance(node, Pow):
        return f"pow({pretty(node.arg)})"
    if isinstance(node, BigUnion):
        return f"bigunion({pretty(node.arg)})"
    if isinstance(node, Prod):
        return f"prod({pretty(node.left)}, {pretty(node.right)})"
    if isinstance(node, Pair):
        return f"pair({pretty(node.left)}, {pretty(node.right)})"
    if isinstance(node, NatLit):
        return str(node.value)
    if isinstance(node, RatLit):
        return f"{node.value.numerator}/{node.value.denominator}"
    if isinstance(node, Arith):
        return f"{node.op}({pretty(node.left)}, {pretty(node.right)})"
    if isinstance(node, Sep):
        return f"{{{node.var} in {pretty(node.bound)} | {pretty(node.body)}}}"
    if isinstance(node, The):
        return f"the({node.var} in {pretty(node.bound)} | {pretty(node.body)})"
    if isinstance(node, Truth):
        return "true" if node.value else "false"
    if isinstance(node, Eq):
        return f"{pretty(node.left)} = {pretty(node.right)}"
    if isinstance(node, In):
        return f"{pretty(node.left)} in {pretty(node.right)}"
    if isinstance(node, Not):
        return f"not {_wrap(node.arg)}"
    if isinstance(node, BINARY):
        op = {And: "and", Or: "or", Implies: "->", Iff: "<->"}[type(node)]
        return f"{_wrap(node.left)} {op} {_wrap(node.right)}"
    if isinstance(node, Forall):
        return f"forall {node.var} in {pretty(node.bound)}. {pretty(node.body)}"
    if isinstance(node, Exists):
        return f"exists {node.var} in {pretty(node.bound)}. {pretty(node.body)}"
    if isinstance(node, UExists):
        return f"uexists[{node.cap}] {node.var}. {pretty(node.body)}"
    raise TypeError(f"not a syntax node: {node!r}")


def _wrap(f) -> str:
    if isinstance(f, _ATOMIC_FORMULAS) or isinstance(f, Not):
        return pretty(f)
    return f"({pretty(f)})"


def is_term(node) -> bool:
    return isinstance(node, TERM_TYPES)


def is_formula(node) -> bool:
    return isinstance(node, FORMULA_TYPES)
