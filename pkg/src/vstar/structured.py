"""Structured and quasi-structured sets: validity, fields, lifts, isomorphisms.

A quasi-structured set is a pair ⟨B, b⟩ where the domain B plays the role of
a set of atoms for the universe V(B) built over it.  Inside V(B) the elements
of B have no members; every other value is an ordinary finite set.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterator, Mapping

from .errors import (
    BoundExceeded,
    IncompleteMap,
    InvalidInput,
    LiteralSyntaxError,
    NotAQuasiDomain,
    NotSimple,
)
from .hf import HF, EMPTY, format_value, is_pure, kpair, kpair_decode, parse_value, set_of, trcl

DEFAULT_AUT_CAP = 8


@dataclass(frozen=True)
class QuasiStructuredSet:
    domain: HF
    structure: HF

    def literal(self) -> str:
        return f"{format_value(self.domain)} ; {format_value(self.structure)}"

    def __str__(self) -> str:
        return self.literal()

    @classmethod
    def parse(cls, text: str) -> "QuasiStructuredSet":
        parts = text.split(";")
        if len(parts) != 2:
            raise LiteralSyntaxError(text, 0, "expected '<domain> ; <structure>'")
        return cls(parse_value(parts[0].strip()), parse_value(parts[1].strip()))

    @property
    def size(self) -> int:
        return len(self.domain)


# Every structured set is a quasi-structured set; validity is checked, not typed.
StructuredSet = QuasiStructuredSet


@dataclass(frozen=True)
class Verdict:
    valid: bool
    clause: str | None = None
    witness: object = None
    message: str = ""
    # check_structured only: does the input also pass the literal trcl({a}) ⊆ A reading?
    literal_reading: bool | None = None

    def __bool__(self) -> bool:
        return self.valid

    def describe(self) -> str:
        if self.valid:
            return "valid"
        return f"invalid [{self.clause}] {self.message}"


# -- validity -----------------------------------------------------------------


def check_structured(domain: HF, structure: HF) -> Verdict:
    """Domain is a set of atoms and every atom under the structure lies in it.

    The verdict follows the atoms-only reading; ``literal_reading`` records
    whether the stricter trcl({a}) ⊆ A reading also holds.
    """
    if domain.is_atom:
        return Verdict(False, "domain", domain, "domain is an atom, not a set")
    for x in domain:
        if not x.is_atom:
            return Verdict(False, "domain", x, f"domain member {format_value(x)} is not an atom")
    closure = trcl(set_of((structure,)))
    literal = all(x in domain for x in closure)
    for x in closure:
        if x.is_atom and x not in domain:
            return Verdict(
                False, "foreign-atom", x, f"atom {format_value(x)} is not in the domain", literal
            )
    return Verdict(True, literal_reading=literal)


def check_quasi_domain(domain: HF) -> Verdict:
    if domain.is_atom:
        return Verdict(False, "domain", domain, "domain is an atom, not a set")
    closure = trcl(domain)
    if EMPTY in closure:
        holder = next(e for e in domain if e is EMPTY or EMPTY in trcl(e))
        return Verdict(False, "1(a)", holder, "∅ occurs in trcl(domain)")
    closures = {e: trcl(e) for e in domain}
    for x in domain:
        for y in domain:
            if x is not y and x in closures[y]:
                return Verdict(
                    False, "1(b)", (x, y),
                    f"{format_value(x)} lies in trcl({format_value(y)})",
                )
    return Verdict(True)


def check_quasi(domain: HF, structure: HF) -> Verdict:
    """All four quasi-structured-set clauses; the first violation is reported."""
    v = check_quasi_domain(domain)
    if not v:
        return v
    dom_closure = trcl(domain)
    nodes = trcl(set_of((structure,)))
    for x in nodes:
        if x.is_atom and x not in dom_closure:
            return Verdict(False, "2(a)", x, f"atom {format_value(x)} is not in trcl(domain)")
    below = set()
    for e in domain:
        below.update(trcl(e).elems)
    if structure in domain:
        return Verdict(True)
    # descend from the structure through non-domain nodes; anything below the
    # domain reached this way has a path that avoids the domain
    parent: dict[HF, HF | None] = {structure: None}
    queue = [structure]
    i = 0
    while i < len(queue):
        node = queue[i]
        i += 1
        for child in node.elems:
            if child in parent or child in domain:
                continue
            parent[child] = node
            if child in below:
                path = [child]
                while parent[path[-1]] is not None:
                    path.append(parent[path[-1]])
                return Verdict(
                    False, "2(b)", tuple(path),
                    "path " + " ∈ ".join(format_value(p) for p in path) + " avoids the domain",
                )
            queue.append(child)
    return Verdict(True)


def validate(q: QuasiStructuredSet) -> None:
    v = check_quasi(q.domain, q.structure)
    if not v:
        raise InvalidInput(f"not a quasi-structured set: {v.describe()}")


# -- universe and field ----------------------------------------------------------


def in_universe(x: HF, domain: HF, memo: dict | None = None) -> bool:
    """x ∈ V(domain): built from domain elements and ∅ by finite sets."""
    if memo is None:
        memo = {}
    stack = [(x, False)]
    while stack:
        node, expanded = stack.pop()
        if node in memo:
            continue
        if node in domain:
            memo[node] = True
            continue
        if node.is_atom:
            memo[node] = False
            continue
        if expanded:
            memo[node] = all(memo[c] for c in node.elems)
            continue
        stack.append((node, True))
        stack.extend((c, False) for c in node.elems if c not in memo)
    return memo[x]


def field(q: QuasiStructuredSet, check: bool = True) -> HF:
    """(domain ∪ trcl({structure})) ∩ V(domain)."""
    if check:
        validate(q)
    memo: dict = {}
    cands = set(q.domain.elems) | set(trcl(set_of((q.structure,))).elems)
    return set_of(x for x in cands if in_universe(x, q.domain, memo))


def u_members(x: HF, domain: HF) -> tuple:
    """Members of x as seen inside V(domain): domain elements are memberless."""
    if x.atom_id is not None or x in domain:
        return ()
    return x.elems


# -- maps and lifts ---------------------------------------------------------------


class AtomMap:
    """A finite map between domains, stored as pairs of values."""

    def __init__(self, pairs=()):
        if isinstance(pairs, Mapping):
            pairs = pairs.items()
        self._map: dict[HF, HF] = {}
        for x, y in pairs:
            if x in self._map and self._map[x] is not y:
                raise ValueError(f"map is not functional at {format_value(x)}")
            self._map[x] = y

    @classmethod
    def identity(cls, domain) -> "AtomMap":
        return cls((x, x) for x in domain)

    @classmethod
    def parse(cls, text: str) -> "AtomMap":
        pairs = []
        for chunk in _split_top(text):
            if "->" not in chunk:
                raise LiteralSyntaxError(text, 0, f"expected 'x->y' in {chunk!r}")
            left, right = chunk.split("->", 1)
            pairs.append((parse_value(left.strip()), parse_value(right.strip())))
        return cls(pairs)

    def __getitem__(self, x: HF) -> HF:
        return self._map[x]

    def get(self, x, default=None):
        return self._map.get(x, default)

    def __contains__(self, x) -> bool:
        return x in self._map

    def __len__(self) -> int:
        return len(self._map)

    def __iter__(self):
        return iter(self._map)

    def items(self):
        return self._map.items()

    def __eq__(self, other) -> bool:
        return isinstance(other, AtomMap) and self._map == other._map

    def __hash__(self) -> int:
        return hash(frozenset(self._map.items()))

    @property
    def source(self) -> HF:
        return set_of(self._map)

    @property
    def image(self) -> HF:
        return set_of(self._map.values())

    def is_injective(self) -> bool:
        return len(set(self._map.values())) == len(self._map)

    def is_bijection(self, source: HF, target: HF) -> bool:
        return (
            set(self._map) == set(source.elems)
            and set(self._map.values()) == set(target.elems)
            and self.is_injective()
        )

    def compose(self, inner: "AtomMap") -> "AtomMap":
        """self ∘ inner."""
        return AtomMap((x, self._map[y]) for x, y in inner.items())

    def inverse(self) -> "AtomMap":
        if not self.is_injective():
            raise ValueError("map is not injective")
        return AtomMap((y, x) for x, y in self._map.items())

    def literal(self) -> str:
        items = sorted(self._map.items(), key=lambda kv: kv[0].key)
        return ", ".join(f"{format_value(x)}->{format_value(y)}" for x, y in items)

    def __repr__(self) -> str:
        return f"AtomMap({self.literal()})"


def _split_top(text: str) -> list[str]:
    out, depth, cur = [], 0, []
    for ch in text:
        if ch == "{":
            depth += 1
        elif ch == "}":
            depth -= 1
        if ch == "," and depth == 0:
            out.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    if "".join(cur).strip():
        out.append("".join(cur))
    return [c for c in out if c.strip()]


def lift_value(f, x: HF, domain: HF, memo: dict | None = None) -> HF:
    """f* on V(domain): fixes pure values, applies f on the domain, recurses on sets."""
    if memo is None:
        memo = {}
    got = memo.get(x)
    if got is not None:
        return got
    if is_pure(x):
        out = x
    elif x in domain:
        try:
            out = f[x]
        except KeyError:
            raise IncompleteMap(f"no image for domain element {format_value(x)}") from None
    elif x.is_atom:
        raise InvalidInput(f"atom {format_value(x)} lies outside V(domain)")
    else:
        out = set_of(lift_value(f, c, domain, memo) for c in x.elems)
    memo[x] = out
    return out


def lift(f, source: QuasiStructuredSet) -> dict:
    """The lift f⁺ on field(source), as a dict x -> f⁺(x)."""
    validate(source)
    missing = [x for x in source.domain if x not in f]
    if missing:
        raise IncompleteMap(f"no image for domain element {format_value(missing[0])}")
    memo: dict = {}
    return {x: lift_value(f, x, source.domain, memo) for x in field(source, check=False)}


def is_isomorphism(f: AtomMap, a: QuasiStructuredSet, b: QuasiStructuredSet) -> bool:
    if not isinstance(f, AtomMap):
        f = AtomMap(f)
    if not f.is_bijection(a.domain, b.domain):
        return False
    return lift_value(f, a.structure, a.domain) is b.structure


# -- isomorphism search ------------------------------------------------------------


class _SearchSide:
    """Field graph of one quasi-structured set with refinable node colors."""

    def __init__(self, q: QuasiStructuredSet):
        self.q = q
        self.nodes = list(field(q, check=False).elems)
        self.node_set = set(self.nodes)
        self.domain = q.domain
        self.parents: dict[HF, list] = {n: [] for n in self.nodes}
        for n in self.nodes:
            for c in u_members(n, self.domain):
                self.parents[c].append(n)

    def initial(self, n: HF):
        if is_pure(n):
            return ("pure", n.key)
        if n in self.domain:
            return ("dom",)
        return ("set", n is self.q.structure)


def _refine(sides: list[_SearchSide]) -> list[dict]:
    colors = [{n: s.initial(n) for n in s.nodes} for s in sides]
    palette: dict = {}
    colors = [{n: palette.setdefault(c, len(palette)) for n, c in col.items()} for col in colors]
    n_classes = len(palette)
    while True:
        palette = {}
        new = []
        for s, col in zip(sides, colors):
            out = {}
            for n in s.nodes:
                sig = (
                    col[n],
                    tuple(sorted(col[c] for c in u_members(n, s.domain))),
                    tuple(sorted(col[p] for p in s.parents[n])),
                )
                out[n] = palette.setdefault(sig, len(palette))
            new.append(out)
        colors = new
        if len(palette) == n_classes:
            return colors
        n_classes = len(palette)


def find_isomorphisms(
    a: QuasiStructuredSet,
    b: QuasiStructuredSet,
    cap: int = DEFAULT_AUT_CAP,
    check: bool = True,
) -> Iterator[AtomMap]:
    """Yield every isomorphism a ≅ b, by backtracking with incremental lifting."""
    if check:
        validate(a)
        validate(b)
    if len(a.domain) != len(b.domain):
        return
    if len(a.domain) > cap:
        raise BoundExceeded(f"domain size {len(a.domain)} exceeds the search cap {cap}")
    if is_pure(a.structure) or is_pure(b.structure):
        if a.structure is not b.structure:
            return
    sa, sb = _SearchSide(a), _SearchSide(b)
    col_a, col_b = _refine([sa, sb])
    if sorted(col_a.values()) != sorted(col_b.values()):
        return

    dom_a = sorted(a.domain.elems, key=lambda x: (sum(1 for y in a.domain if col_a[y] == col_a[x]), x.key))
    position = {x: i for i, x in enumerate(dom_a)}
    by_color_b: dict[int, list] = {}
    for y in b.domain:
        by_color_b.setdefault(col_b[y], []).append(y)

    # support of each non-pure, non-domain node, and the level at which it is fixed
    support: dict[HF, int] = {}
    levels: list[list[HF]] = [[] for _ in dom_a]
    urank: dict = {}
    for n in sorted(sa.nodes, key=lambda x: _urank(x, a.domain, urank)):
        if is_pure(n) or n in a.domain:
            continue
        lv = max(
            position[c] if c in a.domain else support.get(c, -1)
            for c in n.elems
        )
        support[n] = lv
        levels[lv].append(n)

    assign: dict[HF, HF] = {}
    used: set = set()
    image: dict[HF, HF] = {}

    def img(x: HF) -> HF:
        if x in assign:
            return assign[x]
        if is_pure(x):
            return x
        return image[x]

    def extend(k: int) -> Iterator[AtomMap]:
        if k == len(dom_a):
            if img(a.structure) is b.structure:
                yield AtomMap(assign)
            return
        x = dom_a[k]
        for y in by_color_b.get(col_a[x], ()):
            if y in used:
                continue
            assign[x] = y
            used.add(y)
            ok = True
            done = []
            for n in levels[k]:
                m = set_of(img(c) for c in n.elems)
                if m not in sb.node_set or col_b[m] != col_a[n]:
                    ok = False
                    break
                image[n] = m
                done.append(n)
            if ok:
                yield from extend(k + 1)
            for n in done:
                del image[n]
            del assign[x]
            used.discard(y)

    yield from extend(0)


def _urank(x: HF, domain: HF, memo: dict) -> int:
    got = memo.get(x)
    if got is None:
        if x in domain or x.is_atom or not x.elems:
            got = 0
        else:
            got = 1 + max(_urank(c, domain, memo) for c in x.elems)
        memo[x] = got
    return got


def find_isomorphism(a, b, cap: int = DEFAULT_AUT_CAP) -> AtomMap | None:
    return next(find_isomorphisms(a, b, cap), None)


def are_isomorphic(a, b, cap: int = DEFAULT_AUT_CAP) -> bool:
    return find_isomorphism(a, b, cap) is not None


def automorphisms(a: QuasiStructuredSet, cap: int = DEFAULT_AUT_CAP) -> list[AtomMap]:
    return list(find_isomorphisms(a, a, cap))


def automorphism_group(a: QuasiStructuredSet, cap: int = DEFAULT_AUT_CAP):
    from .groups import Group

    return Group.from_maps(automorphisms(a, cap))


# -- atomization -------------------------------------------------------------------


def encode_tuple(items) -> HF:
    """1-tuples are bare values; longer tuples nest to the right as Kuratowski pairs."""
    items = list(items)
    if len(items) == 1:
        return items[0]
    return kpair(items[0], encode_tuple(items[1:]))


def decode_tuple(x: HF, arity: int) -> tuple:
    if arity == 1:
        return (x,)
    head, rest = kpair_decode(x)
    return (head,) + decode_tuple(rest, arity - 1)


def _check_simple(m_domain: HF, m_rel: HF, arity: int) -> list[tuple]:
    if arity < 1:
        raise NotSimple("arity must be at least 1")
    if m_domain.is_atom or not is_pure(m_domain) or not is_pure(m_rel) or m_rel.is_atom:
        raise NotSimple("domain and relation must be pure sets")
    tuples = []
    for t in m_rel:
        try:
            parts = decode_tuple(t, arity)
        except Exception:
            raise NotSimple(f"{format_value(t)} is not a {arity}-tuple") from None
        if any(p not in m_domain for p in parts):
            raise NotSimple(f"{format_value(t)} leaves the domain")
        tuples.append(parts)
    return tuples


def atomize_with_map(m_domain: HF, m_rel: HF, arity: int, b: HF) -> tuple[QuasiStructuredSet, dict]:
    """Push a simple kernel structure out over the quasi-domain b.

    Returns the quasi-structured set and the correspondence from elements of
    m_domain to the new domain elements.
    """
    tuples = _check_simple(m_domain, m_rel, arity)
    v = check_quasi_domain(b)
    if not v or not len(b):
        raise NotAQuasiDomain(v.describe() if not v else "quasi-domain must be nonempty")

    memo: dict[HF, HF] = {}

    def push(x: HF) -> HF:
        got = memo.get(x)
        if got is None:
            got = b if x is EMPTY else set_of(push(y) for y in x.elems)
            memo[x] = got
        return got

    a_star = set_of(push(x) for x in trcl(m_domain).elems)
    tag = set_of((a_star,))
    corr = {x: set_of((push(x), tag)) for x in m_domain}
    if len(set(corr.values())) != len(corr):
        raise NotAQuasiDomain("recursion over the quasi-domain is not injective")
    domain = set_of(corr.values())
    rel = set_of(encode_tuple(corr[p] for p in parts) for parts in tuples)
    q = QuasiStructuredSet(domain, rel)
    v = check_quasi(domain, rel)
    if not v:
        raise InvalidInput(f"atomization produced an invalid structure: {v.describe()}")
    return q, corr


def atomize(m_domain: HF, m_rel: HF, arity: int, b: HF) -> QuasiStructuredSet:
    return atomize_with_map(m_domain, m_rel, arity, b)[0]


def simple_isomorphisms(q: QuasiStructuredSet, m_domain: HF, m_rel: HF, arity: int) -> Iterator[dict]:
    """Bijections g: q.domain -> m_domain carrying q's relation onto m_rel (brute force)."""
    want = set(_check_simple(m_domain, m_rel, arity))
    src = list(q.domain.elems)
    have = [decode_tuple(t, arity) for t in q.structure]
    if len(src) != len(m_domain):
        return
    for perm in itertools.permutations(m_domain.elems):
        g = dict(zip(src, perm))
        if {tuple(g[p] for p in t) for t in have} == want and len(have) == len(want):
            yield g
