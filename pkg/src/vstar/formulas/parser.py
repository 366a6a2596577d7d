"""Recursive-descent parser for formulas, terms and definition files.

Sugar is expanded while parsing, so the AST only ever contains core nodes.
Connective precedence, loosest first: ``<->``, ``->`` (right associative),
``or``, ``and``, ``not``.  A quantifier body extends as far right as it can.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction

from ..errors import FormulaSyntaxError, ScopeError
from .syntax import (
    And,
    Arith,
    BigUnion,
    Const,
    D,
    EMPTY_T,
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
    SMALL_D,
    Sep,
    The,
    Truth,
    UExists,
    Var,
    fresh,
    instantiate,
    names_in,
)

DEFAULT_RANK_CAP = 4

_TOKEN = re.compile(
    r"""
    (?P<ws>\s+|\#[^\n]*)
  | (?P<rat>-?\d+/\d+)
  | (?P<num>\d+)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_']*)
  | (?P<op><->|->|:=|!=|[=(){}\[\],.|;:])
    """,
    re.VERBOSE,
)

KEYWORDS = {
    "forall", "exists", "uexists", "in", "not", "and", "or", "true", "false",
    "the", "unpack", "as", "let", "theory", "interp", "subset", "notin",
}
CONSTANTS = {"D": D, "d": SMALL_D, "Empty": EMPTY_T}

# builtin term functions and their arities
_TERM_FUNCS = {
    "pow": 1, "bigunion": 1, "prod": 2, "pair": 2, "radd": 2, "rmax": 2,
    "cap": 2, "cup": 2, "diff": 2, "sing": 1, "upair": 2, "bigcup": 1,
    "funcapp": 2, "fst": 1, "snd": 1, "nth": 3,
}
_FORMULA_FUNCS = {"rle": 2, "rlt": 2, "israt": 1, "isfun": 3}


@dataclass
class Token:
    kind: str
    text: str
    pos: int


def tokenize(text: str) -> list[Token]:
    out = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise FormulaSyntaxError(f"unexpected character {text[pos]!r}", text, pos)
        kind = m.lastgroup
        if kind != "ws":
            tok = m.group()
            if kind == "ident" and tok in KEYWORDS:
                kind = "kw"
            out.append(Token(kind, tok, pos))
        pos = m.end()
    out.append(Token("eof", "", len(text)))
    return out


# -- sugar builders -------------------------------------------------------------


def _avoid(*nodes) -> set:
    out = set()
    for n in nodes:
        out |= names_in(n)
    return out


def subset(a, b):
    z = fresh(_avoid(a, b), "z")
    return Forall(z, a, In(Var(z), b))


def cap(a, b):
    z = fresh(_avoid(a, b), "z")
    return Sep(z, a, In(Var(z), b))


def diff(a, b):
    z = fresh(_avoid(a, b), "z")
    return Sep(z, a, Not(In(Var(z), b)))


def cup(a, b):
    return BigUnion(BigUnion(Pair(a, b)))


def sing(a):
    return BigUnion(Pair(a, a))


def upair(a, b):
    return BigUnion(Pair(a, b))


def funcapp(f, x):
    y = fresh(_avoid(f, x), "y")
    return The(y, BigUnion(BigUnion(f)), In(Pair(x, Var(y)), f))


def fst(p):
    x, y = fresh(_avoid(p), "x"), None
    y = fresh(_avoid(p) | {x}, "y")
    return The(x, BigUnion(p), Exists(y, BigUnion(p), Eq(Pair(Var(x), Var(y)), p)))


def snd(p):
    x = fresh(_avoid(p), "x")
    y = fresh(_avoid(p) | {x}, "y")
    return The(y, BigUnion(p), Exists(x, BigUnion(p), Eq(Pair(Var(x), Var(y)), p)))


def nth(t, i: int, n: int):
    """Component i (from 0) of a right-nested n-tuple."""
    if not 0 <= i < n:
        raise ValueError("tuple index out of range")
    if n == 1:
        return t
    if i == 0:
        return fst(t)
    return nth(snd(t), i - 1, n - 1)


def israt(r):
    return And(Eq(Arith("radd", r, RatLit(Fraction(0))), r), Not(Eq(r, EMPTY_T)))


def rle(a, b):
    return And(And(israt(a), israt(b)), Eq(Arith("rmax", a, b), b))


def rlt(a, b):
    return And(rle(a, b), Not(Eq(a, b)))


def isfun(f, a, b):
    avoid = _avoid(f, a, b)
    x = fresh(avoid, "x")
    y = fresh(avoid | {x}, "y")
    w = fresh(avoid | {x, y}, "w")
    # once f is inside prod(a, b), images are found in the field of f, which
    # is far smaller than b
    field = BigUnion(BigUnion(f))
    unique = Forall(w, field, Implies(In(Pair(Var(x), Var(w)), f), Eq(Var(w), Var(y))))
    total = Forall(x, a, Exists(y, field, And(In(Pair(Var(x), Var(y)), f), unique)))
    return And(subset(f, Prod(a, b)), total)


def unpack(t, names: list[str], body):
    """exists v1 ... vn with t = (v1, ..., vn) right-nested, and body."""
    if len(names) == 1:
        raise ValueError("unpack needs at least two names")
    avoid = _avoid(t, body) | set(names)
    first = names[0]
    if len(names) == 2:
        second = names[1]
        return Exists(first, BigUnion(t), Exists(second, BigUnion(t),
                      And(Eq(Pair(Var(first), Var(second)), t), body)))
    rest = fresh(avoid, "r")
    inner = unpack(Var(rest), names[1:], body)
    return Exists(first, BigUnion(t), Exists(rest, BigUnion(t),
                  And(Eq(Pair(Var(first), Var(rest)), t), inner)))


# -- parser ---------------------------------------------------------------------


class Parser:
    def __init__(
        self,
        text: str,
        macros: dict | None = None,
        theories: dict | None = None,
        rank_cap: int = DEFAULT_RANK_CAP,
    ):
        self.text = text
        self.toks = tokenize(text)
        self.i = 0
        self.macros = dict(macros or {})
        self.theories = theories or {}
        self.rank_cap = rank_cap
        self.scope: list[str] = []

    # token helpers

    @property
    def tok(self) -> Token:
        return self.toks[self.i]

    def peek(self, k: int = 1) -> Token:
        return self.toks[min(self.i + k, len(self.toks) - 1)]

    def at(self, text: str) -> bool:
        return self.tok.text == text and self.tok.kind in ("op", "kw")

    def advance(self) -> Token:
        t = self.tok
        self.i += 1
        return t

    def expect(self, text: str) -> Token:
        if not self.at(text):
            self.fail(f"expected {text!r}, found {self.tok.text or 'end of input'!r}")
        return self.advance()

    def ident(self) -> str:
        if self.tok.kind != "ident":
            self.fail(f"expected a name, found {self.tok.text or 'end of input'!r}")
        return self.advance().text

    def fail(self, message: str, pos: int | None = None):
        raise FormulaSyntaxError(message, self.text, self.tok.pos if pos is None else pos)

    def binder_name(self) -> str:
        pos = self.tok.pos
        name = self.ident()
        if name in CONSTANTS:
            self.fail(f"{name!r} is a constant and cannot be bound", pos)
        return name

    def bind(self, names):
        self.scope.extend(names)

    def unbind(self, k: int):
        del self.scope[len(self.scope) - k:]

    # formulas

    def formula(self):
        left = self.implication()
        if self.at("<->"):
            self.advance()
            return Iff(left, self.formula())
        return left

    def implication(self):
        left = self.disjunction()
        if self.at("->"):
            self.advance()
            return Implies(left, self.implication())
        return left

    def disjunction(self):
        left = self.conjunction()
        while self.at("or"):
            self.advance()
            left = Or(left, self.conjunction())
        return left

    def conjunction(self):
        left = self.unary()
        while self.at("and"):
            self.advance()
            left = And(left, self.unary())
        return left

    def unary(self):
        t = self.tok
        if self.at("not"):
            self.advance()
            return Not(self.unary())
        if self.at("forall") or self.at("exists"):
            return self.bounded_quantifier()
        if self.at("uexists"):
            return self.unbounded_exists()
        if self.at("unpack"):
            return self.unpack()
        if self.at("("):
            self.advance()
            f = self.formula()
            self.expect(")")
            return f
        if self.at("true") or self.at("false"):
            self.advance()
            return Truth(t.text == "true")
        if t.kind == "ident" and t.text in _FORMULA_FUNCS and self.peek().text == "(":
            return self.formula_call()
        if t.kind == "ident" and t.text in self.theories and t.text not in self.scope:
            return self.theory_ref()
        return self.atomic()

    def bounded_quantifier(self):
        kind = Forall if self.advance().text == "forall" else Exists
        bindings = []
        while True:
            names = [self.binder_name()]
            while self.at(","):
                self.advance()
                names.append(self.binder_name())
            self.expect("in")
            bound = self.term()
            for n in names:
                bindings.append((n, bound))
                self.bind([n])
            if self.at(","):
                self.advance()
                continue
            break
        self.expect(".")
        body = self.formula()
        self.unbind(len(bindings))
        for n, bound in reversed(bindings):
            body = kind(n, bound, body)
        return body

    def unbounded_exists(self):
        self.advance()
        cap = self.rank_cap
        if self.at("["):
            self.advance()
            if self.tok.kind != "num":
                self.fail("expected a rank cap")
            cap = int(self.advance().text)
            self.expect("]")
        names = [self.binder_name()]
        while self.at(","):
            self.advance()
            names.append(self.binder_name())
        self.expect(".")
        self.bind(names)
        body = self.formula()
        self.unbind(len(names))
        for n in reversed(names):
            body = UExists(n, cap, body)
        return body

    def unpack(self):
        self.advance()
        t = self.term()
        self.expect("as")
        self.expect("(")
        names = [self.binder_name()]
        while self.at(","):
            self.advance()
            names.append(self.binder_name())
        self.expect(")")
        self.expect(".")
        if len(names) < 2 or len(set(names)) != len(names):
            self.fail("unpack needs at least two distinct names")
        self.bind(names)
        body = self.formula()
        self.unbind(len(names))
        return unpack(t, names, body)

    def formula_call(self):
        t = self.advance()
        args = self.args()
        if len(args) != _FORMULA_FUNCS[t.text]:
            self.fail(f"{t.text} takes {_FORMULA_FUNCS[t.text]} arguments", t.pos)
        return {"rle": rle, "rlt": rlt, "israt": israt, "isfun": isfun}[t.text](*args)

    def theory_ref(self):
        name = self.advance().text
        phi = self.theories[name]
        if self.at("["):
            self.advance()
            mapping = {}
            while True:
                pos = self.tok.pos
                c = self.ident()
                if c not in ("D", "d"):
                    self.fail("only D and d can be substituted", pos)
                self.expect(":=")
                mapping[c] = self.term()
                if not self.at(","):
                    break
                self.advance()
            self.expect("]")
            phi = instantiate(phi, mapping)
        return phi

    def atomic(self):
        left = self.term()
        t = self.tok
        if self.at("="):
            self.advance()
            return Eq(left, self.term())
        if self.at("!="):
            self.advance()
            return Not(Eq(left, self.term()))
        if self.at("in"):
            self.advance()
            return In(left, self.term())
        if self.at("notin"):
            self.advance()
            return Not(In(left, self.term()))
        if self.at("subset"):
            self.advance()
            return subset(left, self.term())
        self.fail(f"expected a relation after a term, found {t.text or 'end of input'!r}")

    # terms

    def args(self) -> list:
        self.expect("(")
        out = [self.term()]
        while self.at(","):
            self.advance()
            out.append(self.term())
        self.expect(")")
        return out

    def term(self):
        t = self.tok
        if t.kind == "num":
            self.advance()
            return NatLit(int(t.text))
        if t.kind == "rat":
            self.advance()
            p, q = t.text.split("/")
            if int(q) == 0:
                self.fail("zero denominator", t.pos)
            return RatLit(Fraction(int(p), int(q)))
        if self.at("{"):
            return self.braces()
        if self.at("the"):
            self.advance()
            self.expect("(")
            var = self.binder_name()
            self.expect("in")
            bound = self.term()
            self.expect("|")
            self.bind([var])
            body = self.formula()
            self.unbind(1)
            self.expect(")")
            return The(var, bound, body)
        if t.kind != "ident":
            self.fail(f"expected a term, found {t.text or 'end of input'!r}")
        name = t.text
        self.advance()
        if name in self.scope:
            base = Var(name)
        elif name in CONSTANTS:
            base = CONSTANTS[name]
        elif name in _TERM_FUNCS and self.at("("):
            return self.term_call(name, t.pos)
        elif name in self.macros:
            base = self.macros[name]
        else:
            raise ScopeError(f"unbound name {name!r}", self.text, t.pos)
        if self.at("("):
            # application sugar: f(x) and f(x, y) for set-encoded functions
            args = self.args()
            if len(args) > 2:
                self.fail("application takes one or two arguments", t.pos)
            arg = args[0] if len(args) == 1 else Pair(args[0], args[1])
            return funcapp(base, arg)
        return base

    def term_call(self, name: str, pos: int):
        if name == "nth":
            self.expect("(")
            t = self.term()
            self.expect(",")
            i = self.natural()
            self.expect(",")
            n = self.natural()
            self.expect(")")
            if not 0 <= i < n:
                self.fail("tuple index out of range", pos)
            return nth(t, i, n)
        args = self.args()
        if len(args) != _TERM_FUNCS[name]:
            self.fail(f"{name} takes {_TERM_FUNCS[name]} arguments", pos)
        core = {
            "pow": Pow, "bigunion": BigUnion, "bigcup": BigUnion, "prod": Prod, "pair": Pair,
            "radd": lambda a, b: Arith("radd", a, b), "rmax": lambda a, b: Arith("rmax", a, b),
            "cap": cap, "cup": cup, "diff": diff, "sing": sing, "upair": upair,
            "funcapp": funcapp, "fst": fst, "snd": snd,
        }
        return core[name](*args)

    def natural(self) -> int:
        if self.tok.kind != "num":
            self.fail("expected a number")
        return int(self.advance().text)

    def braces(self):
        self.expect("{")
        if self.at("}"):
            self.advance()
            return EMPTY_T
        if self.tok.kind == "ident" and self.peek().text == "in" and self.tok.text not in CONSTANTS:
            var = self.binder_name()
            self.expect("in")
            bound = self.term()
            self.expect("|")
            self.bind([var])
            body = self.formula()
            self.unbind(1)
            self.expect("}")
            return Sep(var, bound, body)
        items = [self.term()]
        while self.at(","):
            self.advance()
            items.append(self.term())
        self.expect("}")
        out = sing(items[0]) if len(items) == 1 else upair(items[0], items[1])
        for extra in items[2:]:
            out = cup(out, sing(extra))
        return out

    def done(self):
        if self.tok.kind != "eof":
            self.fail(f"unexpected {self.tok.text!r}")


def parse_formula(text: str, free=(), **kw):
    p = Parser(text, **kw)
    p.bind(list(free))
    f = p.formula()
    p.done()
    return f


def parse_term(text: str, free=(), **kw):
    p = Parser(text, **kw)
    p.bind(list(free))
    t = p.term()
    p.done()
    return t


def parse(text: str, **kw):
    """A formula if the text parses as one, otherwise a term."""
    try:
        return parse_formula(text, **kw)
    except FormulaSyntaxError as first:
        try:
            return parse_term(text, **kw)
        except FormulaSyntaxError:
            raise first from None


# -- definition files -------------------------------------------------------------


@dataclass
class TheoryDef:
    name: str
    formula: object
    infinite: bool = False


@dataclass
class InterpDef:
    name: str
    source: str
    target: str
    tau_d: object
    tau_s: object
    eta: object = None
    pi_d: object = None
    pi_s: object = None
    claims: frozenset = frozenset()


@dataclass
class Definitions:
    theories: dict = field(default_factory=dict)
    interps: dict = field(default_factory=dict)
    macros: dict = field(default_factory=dict)

    def merge(self, other: "Definitions") -> "Definitions":
        return Definitions(
            {**self.theories, **other.theories},
            {**self.interps, **other.interps},
            {**self.macros, **other.macros},
        )


_CLAIMS = {"domain_preserving", "injective"}


def load_definitions(text: str, rank_cap: int = DEFAULT_RANK_CAP, base: Definitions | None = None) -> Definitions:
    """Parse `theory`, `interp` and top-level `let` blocks.

    Earlier theories may be referenced by name inside later formulas.
    """
    defs = Definitions() if base is None else Definitions(dict(base.theories), dict(base.interps), dict(base.macros))
    p = Parser(text, macros=defs.macros, rank_cap=rank_cap)
    p.theories = {n: t.formula for n, t in defs.theories.items()}
    while p.tok.kind != "eof":
        if p.at("let"):
            name, term = _let(p)
            p.macros[name] = term
            defs.macros[name] = term
        elif p.at("theory"):
            td = _theory(p)
            if td.name in defs.theories:
                p.fail(f"duplicate theory {td.name!r}")
            defs.theories[td.name] = td
            p.theories[td.name] = td.formula
        elif p.at("interp"):
            idef = _interp(p)
            if idef.name in defs.interps:
                p.fail(f"duplicate interpretation {idef.name!r}")
            defs.interps[idef.name] = idef
        else:
            p.fail(f"expected 'theory', 'interp' or 'let', found {p.tok.text!r}")
    return defs


def _let(p: Parser):
    p.expect("let")
    pos = p.tok.pos
    name = p.binder_name()
    if name in KEYWORDS or name in _TERM_FUNCS or name in _FORMULA_FUNCS:
        p.fail(f"{name!r} is reserved", pos)
    p.expect("=")
    term = p.term()
    p.expect(";")
    return name, term


def _local_lets(p: Parser) -> dict:
    saved = dict(p.macros)
    while p.at("let"):
        name, term = _let(p)
        p.macros[name] = term
    return saved


def _theory(p: Parser) -> TheoryDef:
    p.expect("theory")
    name = p.ident()
    infinite = False
    if p.tok.kind == "ident" and p.tok.text == "infinite":
        p.advance()
        infinite = True
    p.expect("{")
    saved = _local_lets(p)
    phi = p.formula()
    if p.at(";"):
        p.advance()
    p.expect("}")
    p.macros = saved
    return TheoryDef(name, phi, infinite)


def _interp(p: Parser) -> InterpDef:
    p.expect("interp")
    name = p.ident()
    p.expect(":")
    src = p.ident()
    p.expect("->")
    dst = p.ident()
    p.expect("{")
    saved = p.macros
    p.macros = dict(saved)
    fields: dict = {}
    claims = set()
    while not p.at("}"):
        if p.at("let"):
            n, term = _let(p)
            p.macros[n] = term
            continue
        pos = p.tok.pos
        key = p.ident()
        if key == "claim":
            c = p.ident()
            if c not in _CLAIMS:
                p.fail(f"unknown claim {c!r}", pos)
            claims.add(c)
            p.expect(";")
            continue
        if key not in ("tau_d", "tau_s", "eta", "pi_d", "pi_s"):
            p.fail(f"unknown field {key!r}", pos)
        if key in fields:
            p.fail(f"duplicate field {key!r}", pos)
        p.expect("=")
        if key.startswith("pi_"):
            tau = fields.get("tau_" + key[3:])
            if not isinstance(tau, The):
                p.fail(f"{key} needs a preceding tau_{key[3:]} of the form the(x in T | ...)", pos)
            p.bind([tau.var])
            fields[key] = p.formula()
            p.unbind(1)
        else:
            fields[key] = p.term()
        p.expect(";")
    p.expect("}")
    p.macros = saved
    for key in ("tau_d", "tau_s"):
        if key not in fields:
            p.fail(f"interpretation {name!r} lacks {key}")
    return InterpDef(
        name, src, dst, fields["tau_d"], fields["tau_s"],
        fields.get("eta"), fields.get("pi_d"), fields.get("pi_s"), frozenset(claims),
    )
