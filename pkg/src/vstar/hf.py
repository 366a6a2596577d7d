"""Hereditarily finite sets over atoms.

Every value is either an atom (a memberless urelement carrying an integer id)
or a finite set of values.  Values are hash-consed: two equal values are the
same Python object, so ``==`` is identity and hashing is cheap.  Children of a
set are kept sorted by a global total order (atoms before sets, atoms by id,
sets lexicographically by their child sequences) with duplicates removed.
"""

from __future__ import annotations

import threading
from fractions import Fraction
from typing import Iterable, Iterator

from .errors import LiteralSyntaxError, NotAFunction, NotANat, NotAPair, NotARational

__all__ = [
    "HF",
    "EMPTY",
    "atom",
    "set_of",
    "mem",
    "trcl",
    "rank",
    "is_pure",
    "kpair",
    "kpair_decode",
    "is_kpair",
    "nat_encode",
    "nat_decode",
    "rat_encode",
    "rat_decode",
    "is_rat",
    "FunctionView",
    "function_view",
    "atoms_of",
    "parse_value",
    "format_value",
    "ValueStore",
    "STORE",
]


class HF:
    """An interned hereditarily finite value.

    Do not instantiate directly; use :func:`atom` and :func:`set_of`.
    """

    __slots__ = ("atom_id", "elems", "key", "_members", "_rank", "_pure", "__weakref__")

    def __init__(self, atom_id, elems, key):
        self.atom_id = atom_id
        self.elems = elems
        self.key = key
        self._members = None
        self._rank = None
        self._pure = None

    @property
    def is_atom(self) -> bool:
        return self.atom_id is not None

    @property
    def is_set(self) -> bool:
        return self.atom_id is None

    def __iter__(self) -> Iterator[HF]:
        return iter(self.elems)

    def __len__(self) -> int:
        return len(self.elems)

    def __contains__(self, x) -> bool:
        if self.atom_id is not None:
            return False
        m = self._members
        if m is None:
            m = self._members = frozenset(self.elems)
        return x in m

    def __lt__(self, other: HF) -> bool:
        return self.key < other.key

    def __le__(self, other: HF) -> bool:
        return self.key <= other.key

    def __gt__(self, other: HF) -> bool:
        return self.key > other.key

    def __ge__(self, other: HF) -> bool:
        return self.key >= other.key

    def __reduce__(self):
        if self.atom_id is not None:
            return (atom, (self.atom_id,))
        return (set_of, (list(self.elems),))

    def __repr__(self) -> str:
        return f"HF({format_value(self)})"

    def __str__(self) -> str:
        return format_value(self)


class ValueStore:
    """Append-only interning table; insertion is guarded by a lock."""

    def __init__(self):
        self._atoms: dict[int, HF] = {}
        self._sets: dict[tuple, HF] = {}
        self._lock = threading.Lock()

    def atom(self, i: int) -> HF:
        node = self._atoms.get(i)
        if node is not None:
            return node
        if not isinstance(i, int) or isinstance(i, bool) or i < 0:
            raise ValueError(f"atom id must be a nonnegative integer, got {i!r}")
        with self._lock:
            node = self._atoms.get(i)
            if node is None:
                node = HF(i, (), (0, i))
                self._atoms[i] = node
        return node

    def set_from_sorted(self, elems: tuple) -> HF:
        node = self._sets.get(elems)
        if node is not None:
            return node
        with self._lock:
            node = self._sets.get(elems)
            if node is None:
                node = HF(None, elems, (1, tuple(e.key for e in elems)))
                self._sets[elems] = node
        return node

    def __len__(self) -> int:
        return len(self._atoms) + len(self._sets)


STORE = ValueStore()


def _sort_key(x: HF):
    return x.key


def atom(i: int) -> HF:
    return STORE.atom(i)


def set_of(children: Iterable[HF] = ()) -> HF:
    """The canonical set with the given members (duplicates dropped, sorted)."""
    uniq = set(children)
    if not uniq:
        return EMPTY
    for c in uniq:
        if not isinstance(c, HF):
            raise TypeError(f"set members must be HF values, got {type(c).__name__}")
    return STORE.set_from_sorted(tuple(sorted(uniq, key=_sort_key)))


EMPTY = STORE.set_from_sorted(())


def mem(x: HF, y: HF) -> bool:
    """x ∈ y; atoms have no members."""
    return x in y


def trcl(x: HF) -> HF:
    """All values reachable from x by one or more membership steps."""
    seen: set[HF] = set()
    stack = list(x.elems)
    while stack:
        y = stack.pop()
        if y in seen:
            continue
        seen.add(y)
        stack.extend(y.elems)
    return set_of(seen)


def rank(x: HF) -> int:
    r = x._rank
    if r is None:
        r = 1 + max(rank(c) for c in x.elems) if x.elems else 0
        x._rank = r
    return r


def is_pure(x: HF) -> bool:
    """True iff no atom occurs in trcl({x})."""
    p = x._pure
    if p is None:
        p = x.atom_id is None and all(is_pure(c) for c in x.elems)
        x._pure = p
    return p


def atoms_of(x: HF) -> frozenset:
    """The atoms occurring in trcl({x})."""
    out = set()
    seen = set()
    stack = [x]
    while stack:
        y = stack.pop()
        if y in seen:
            continue
        seen.add(y)
        if y.atom_id is not None:
            out.add(y)
        elif not is_pure(y):
            stack.extend(y.elems)
    return frozenset(out)


# -- pairs, naturals, rationals ---------------------------------------------


_PAIRS: dict[tuple, HF] = {}


def kpair(x: HF, y: HF) -> HF:
    """Kuratowski pair {{x},{x,y}}."""
    # values are interned, so the pair of arguments determines the result
    got = _PAIRS.get((x, y))
    if got is None:
        got = set_of((set_of((x,)), set_of((x, y))))
        _PAIRS[x, y] = got
    return got


def kpair_decode(p: HF) -> tuple[HF, HF]:
    if p.is_atom or not 1 <= len(p) <= 2:
        raise NotAPair(p)
    if len(p) == 1:
        (only,) = p.elems
        if only.is_atom or len(only) != 1:
            raise NotAPair(p)
        (x,) = only.elems
        return x, x
    a, b = p.elems
    if a.is_atom or b.is_atom:
        raise NotAPair(p)
    small, big = (a, b) if len(a) <= len(b) else (b, a)
    if len(small) != 1 or len(big) != 2:
        raise NotAPair(p)
    (x,) = small.elems
    if x not in big:
        raise NotAPair(p)
    y = big.elems[0] if big.elems[1] is x else big.elems[1]
    return x, y


def is_kpair(p: HF) -> bool:
    try:
        kpair_decode(p)
    except NotAPair:
        return False
    return True


_NATS: list[HF] = [EMPTY]
_NAT_INDEX: dict[HF, int] = {EMPTY: 0}


def nat_encode(n: int) -> HF:
    """von Neumann natural: 0 = ∅, n+1 = n ∪ {n}."""
    if n < 0:
        raise ValueError("naturals are nonnegative")
    while len(_NATS) <= n:
        prev = _NATS[-1]
        nxt = set_of(prev.elems + (prev,))
        _NAT_INDEX[nxt] = len(_NATS)
        _NATS.append(nxt)
    return _NATS[n]


def nat_decode(x: HF) -> int:
    n = _NAT_INDEX.get(x)
    if n is not None:
        return n
    if x.is_atom:
        raise NotANat(x)
    n = len(x)
    # a natural n has exactly n members, so encoding n and comparing suffices
    if nat_encode(n) is not x:
        raise NotANat(x)
    return n


def rat_encode(q) -> HF:
    """Exact rational as kpair(kpair(sign, |num|), den), lowest terms, den > 0."""
    q = Fraction(q)
    sign = 1 if q < 0 else 0
    num = kpair(nat_encode(sign), nat_encode(abs(q.numerator)))
    return kpair(num, nat_encode(q.denominator))


def rat_decode(x: HF) -> Fraction:
    try:
        num, den = kpair_decode(x)
        sign, mag = kpair_decode(num)
        s, m, q = nat_decode(sign), nat_decode(mag), nat_decode(den)
    except (NotAPair, NotANat):
        raise NotARational(x) from None
    if s not in (0, 1) or q == 0 or (s == 1 and m == 0):
        raise NotARational(x)
    value = Fraction(-m if s else m, q)
    if value.denominator != q:
        raise NotARational(x)
    return value


def is_rat(x: HF) -> bool:
    try:
        rat_decode(x)
    except NotARational:
        return False
    return True


# -- set-encoded functions --------------------------------------------------


class FunctionView:
    """Read-only view of a set of Kuratowski pairs with functional first coordinates."""

    def __init__(self, graph: HF, table: dict):
        self.graph = graph
        self._table = table

    def lookup(self, x: HF) -> HF:
        return self._table[x]

    def get(self, x: HF, default=None):
        return self._table.get(x, default)

    @property
    def domain(self) -> HF:
        return set_of(self._table)

    @property
    def range(self) -> HF:
        return set_of(self._table.values())

    def items(self):
        return self._table.items()

    def __contains__(self, x) -> bool:
        return x in self._table

    def __len__(self) -> int:
        return len(self._table)


def function_view(f: HF) -> FunctionView:
    if f.is_atom:
        raise NotAFunction(f, "an atom is not a set of pairs")
    table: dict[HF, HF] = {}
    for p in f.elems:
        try:
            x, y = kpair_decode(p)
        except NotAPair:
            raise NotAFunction(f, f"member {format_value(p)} is not a pair") from None
        if x in table and table[x] is not y:
            raise NotAFunction(f, f"two images for {format_value(x)}")
        table[x] = y
    return FunctionView(f, table)


# -- literal syntax ---------------------------------------------------------


def format_value(x: HF) -> str:
    if x.atom_id is not None:
        return f"@{x.atom_id}"
    return "{" + ", ".join(format_value(c) for c in x.elems) + "}"


def parse_value(text: str) -> HF:
    """Parse `@3`, `{}`, `{@1, {@2}}`; member order in the input is irrelevant."""
    value, pos = _parse_at(text, _skip(text, 0))
    pos = _skip(text, pos)
    if pos != len(text):
        raise LiteralSyntaxError(text, pos, "trailing input")
    return value


def _skip(text: str, pos: int) -> int:
    while pos < len(text) and text[pos].isspace():
        pos += 1
    return pos


def _parse_at(text: str, pos: int) -> tuple[HF, int]:
    if pos >= len(text):
        raise LiteralSyntaxError(text, pos, "unexpected end of input")
    ch = text[pos]
    if ch == "@":
        end = pos + 1
        while end < len(text) and text[end].isdigit():
            end += 1
        if end == pos + 1:
            raise LiteralSyntaxError(text, pos, "expected atom id after '@'")
        return atom(int(text[pos + 1 : end])), end
    if ch == "{":
        pos = _skip(text, pos + 1)
        items = []
        if pos < len(text) and text[pos] == "}":
            return EMPTY, pos + 1
        while True:
            item, pos = _parse_at(text, pos)
            items.append(item)
            pos = _skip(text, pos)
            if pos < len(text) and text[pos] == ",":
                pos = _skip(text, pos + 1)
                continue
            if pos < len(text) and text[pos] == "}":
                return set_of(items), pos + 1
            raise LiteralSyntaxError(text, pos, "expected ',' or '}'")
    raise LiteralSyntaxError(text, pos, f"unexpected character {ch!r}")
