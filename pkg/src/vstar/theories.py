"""The theory catalog, satisfaction, and exhaustive model enumeration.

A theory is a sentence of the bounded language together with a shape hint:
a generator of candidate structures over a given domain that is known to
contain every model.  Enumeration filters the shape by the sentence.
Each catalog theory also carries a native checker written directly in
Python, used as an independent oracle for the sentence.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from importlib import resources
from typing import Callable, Iterable, Iterator

from .errors import BoundExceeded, NotAFunction, NotAPair, NotARational, UnsupportedTheory
from .formulas import eval_formula, load_definitions
from .formulas.parser import Definitions
from .hf import EMPTY, HF, atom, function_view, kpair, rat_decode, rat_encode, set_of
from .structured import QuasiStructuredSet, decode_tuple, encode_tuple, u_members, validate

DEFAULT_METRIC_POOL = (Fraction(1), Fraction(2))


@dataclass
class Theory:
    name: str
    formula: object
    shape: str = "families"
    infinite: bool = False
    max_atoms: int = 3
    native: Callable[[QuasiStructuredSet], bool] | None = None

    def satisfies(self, q: QuasiStructuredSet) -> bool:
        return satisfies(self, q)

    def __hash__(self) -> int:
        return id(self)

    def __eq__(self, other) -> bool:
        return self is other


@dataclass(frozen=True)
class ModelSet:
    theory: str
    domain: HF
    models: tuple = ()
    note: str = ""

    def __len__(self) -> int:
        return len(self.models)

    def __iter__(self) -> Iterator[QuasiStructuredSet]:
        return iter(self.models)

    def describe(self) -> str:
        extra = f", {self.note}" if self.note else ""
        return f"{self.theory} models on {len(self.domain)} atoms ({len(self.models)} models{extra})"


def satisfies(theory: Theory, q: QuasiStructuredSet) -> bool:
    validate(q)
    return eval_formula(theory.formula, q)


# -- helpers over the universe of a model ------------------------------------------


def _mem(x: HF, q: QuasiStructuredSet) -> frozenset:
    return frozenset(u_members(x, q.domain))


def _is_subset_of_domain(x: HF, q: QuasiStructuredSet) -> bool:
    return x.is_set and x not in q.domain and all(y in q.domain for y in x.elems)


def _family(q: QuasiStructuredSet):
    """The structure as a set of frozensets of domain elements, or None."""
    s = q.structure
    if s.is_atom or s in q.domain:
        return None
    out = set()
    for x in s.elems:
        if not _is_subset_of_domain(x, q):
            return None
        out.add(frozenset(x.elems))
    return out


def powerset(xs) -> list[frozenset]:
    xs = list(xs)
    return [frozenset(c) for k in range(len(xs) + 1) for c in itertools.combinations(xs, k)]


# -- native checkers ----------------------------------------------------------------


def native_top(q: QuasiStructuredSet) -> bool:
    fam = _family(q)
    if fam is None:
        return False
    dom = frozenset(q.domain.elems)
    if frozenset() not in fam or dom not in fam:
        return False
    return all(a & b in fam and a | b in fam for a in fam for b in fam)


def _neighbourhoods(q: QuasiStructuredSet):
    try:
        f = function_view(q.structure)
    except NotAFunction:
        return None
    if set(f.domain.elems) != set(q.domain.elems):
        return None
    out = {}
    for y, n in f.items():
        if n.is_atom or n in q.domain:
            return None
        fam = set()
        for z in n.elems:
            if not _is_subset_of_domain(z, q):
                return None
            fam.add(frozenset(z.elems))
        out[y] = fam
    return out


def native_nei(q: QuasiStructuredSet, literal: bool = False) -> bool:
    nb = _neighbourhoods(q)
    if nb is None:
        return False
    subsets = powerset(q.domain.elems)
    for y, fam in nb.items():
        if any(y not in z for z in fam):
            return False
        if any(z <= w and w not in fam for z in fam for w in subsets):
            return False
        if any(a & b not in fam for a in fam for b in fam):
            return False
        if not fam:
            return False
        if literal:
            if not any(all(z in nb[w] for w in z) for z in fam):
                return False
        elif not all(any(w <= z and all(w in nb[v] for v in w) for w in fam) for z in fam):
            return False
    return True


def native_nei_literal(q: QuasiStructuredSet) -> bool:
    return native_nei(q, literal=True)


def bool_parts(q: QuasiStructuredSet):
    """(meet, join, complement, top, bottom) as Python dicts and values, or None."""
    try:
        m, j, c, t, b = decode_tuple(q.structure, 5)
        fm, fj, fc = function_view(m), function_view(j), function_view(c)
    except (NotAPair, NotAFunction):
        return None
    dom = list(q.domain.elems)
    pairs = {kpair(x, y): (x, y) for x in dom for y in dom}
    meet, join = {}, {}
    for view, out in ((fm, meet), (fj, join)):
        if set(view.domain.elems) != set(pairs):
            return None
        for p, z in view.items():
            if z not in q.domain:
                return None
            out[pairs[p]] = z
    if set(fc.domain.elems) != set(dom) or any(v not in q.domain for _, v in fc.items()):
        return None
    if t not in q.domain or b not in q.domain:
        return None
    return meet, join, dict(fc.items()), t, b


def native_bool(q: QuasiStructuredSet) -> bool:
    parts = bool_parts(q)
    if parts is None:
        return False
    m, j, c, t, b = parts
    if t is b:
        return False
    dom = list(q.domain.elems)
    for x in dom:
        if m[x, x] is not x or j[x, x] is not x:
            return False
        if m[x, t] is not x or j[x, b] is not x or m[x, c[x]] is not b or j[x, c[x]] is not t:
            return False
        for y in dom:
            if m[x, y] is not m[y, x] or j[x, y] is not j[y, x]:
                return False
            if m[x, j[x, y]] is not x or j[x, m[x, y]] is not x:
                return False
            for z in dom:
                if m[m[x, y], z] is not m[x, m[y, z]] or j[j[x, y], z] is not j[x, j[y, z]]:
                    return False
                if m[x, j[y, z]] is not j[m[x, y], m[x, z]]:
                    return False
    return True


def native_stone(q: QuasiStructuredSet) -> bool:
    if not native_top(q) or not len(q.domain):
        return False
    return len(_family(q)) == 2 ** len(q.domain)


def metric_table(q: QuasiStructuredSet, structure: HF | None = None):
    """The metric as {(x, y): Fraction}, or None if it is not a total rational table."""
    s = q.structure if structure is None else structure
    try:
        f = function_view(s)
    except NotAFunction:
        return None
    dom = list(q.domain.elems)
    pairs = {kpair(x, y): (x, y) for x in dom for y in dom}
    if set(f.domain.elems) != set(pairs):
        return None
    try:
        return {pairs[p]: rat_decode(r) for p, r in f.items()}
    except NotARational:
        return None


def _is_metric(dist: dict, dom: list) -> bool:
    for x in dom:
        for y in dom:
            v = dist[x, y]
            if v < 0 or (v == 0) != (x is y) or v != dist[y, x]:
                return False
            if any(dist[x, z] > v + dist[y, z] for z in dom):
                return False
    return True


def native_metr(q: QuasiStructuredSet) -> bool:
    dist = metric_table(q)
    return dist is not None and _is_metric(dist, list(q.domain.elems))


def metric_topology(dist: dict, dom: list) -> set[frozenset]:
    """Open sets of the metric topology: unions of open balls."""
    radii = sorted({v for v in dist.values() if v > 0}) or [Fraction(1)]
    balls = {frozenset(y for y in dom if dist[x, y] < r) for x in dom for r in radii + [radii[-1] + 1]}
    opens = set()
    for k in range(len(balls) + 1):
        for combo in itertools.combinations(balls, k):
            opens.add(frozenset().union(*combo))
    return opens


def native_metrble(q: QuasiStructuredSet, pool=DEFAULT_METRIC_POOL) -> bool:
    """Some metric with values in the pool generates the topology."""
    if not native_top(q):
        return False
    fam = _family(q)
    dom = list(q.domain.elems)
    for dist in _metric_tables(dom, pool):
        if metric_topology(dist, dom) == fam:
            return True
    return False


def native_topmet(q: QuasiStructuredSet) -> bool:
    try:
        o, m = decode_tuple(q.structure, 2)
    except NotAPair:
        return False
    return native_top(QuasiStructuredSet(q.domain, o)) and native_metr(QuasiStructuredSet(q.domain, m))


def native_set1(q):
    return q.structure is EMPTY and len(q.domain) == 1


def native_set2(q):
    return q.structure is EMPTY and len(q.domain) == 2


def native_pset2(q):
    return q.structure in q.domain and len(q.domain) == 2


def native_sub(q):
    return _is_subset_of_domain(q.structure, q) or q.structure is EMPTY


def native_sierpinski(q):
    if len(q.domain) != 2:
        return False
    fam = _family(q)
    dom = frozenset(q.domain.elems)
    return fam is not None and any(fam == {frozenset(), frozenset({x}), dom} for x in dom)


def native_discrete2(q):
    return len(q.domain) == 2 and _family(q) == set(powerset(q.domain.elems))


# -- shapes -------------------------------------------------------------------------


def _metric_tables(dom: list, pool) -> Iterator[dict]:
    pairs = list(itertools.combinations(dom, 2))
    for values in itertools.product(pool, repeat=len(pairs)):
        dist = {(x, x): Fraction(0) for x in dom}
        for (x, y), v in zip(pairs, values):
            dist[x, y] = dist[y, x] = Fraction(v)
        yield dist


def _metric_value(dist: dict) -> HF:
    return set_of(kpair(kpair(x, y), rat_encode(v)) for (x, y), v in dist.items())


def shape_families(domain: HF, **_) -> Iterator[HF]:
    subsets = [set_of(s) for s in powerset(domain.elems)]
    for k in range(len(subsets) + 1):
        for combo in itertools.combinations(subsets, k):
            yield set_of(combo)


def _pointwise_filter(y: HF, fam: list[frozenset], subsets: list[frozenset]) -> bool:
    fs = set(fam)
    if not fs:
        return False
    if any(a & b not in fs for a in fs for b in fs):
        return False
    return all(w in fs for z in fs for w in subsets if z <= w)


def shape_nei(domain: HF, prefilter: bool = True, **_) -> Iterator[HF]:
    dom = list(domain.elems)
    subsets = powerset(dom)
    per_point = []
    for y in dom:
        holding = [s for s in subsets if y in s]
        fams = []
        for k in range(len(holding) + 1):
            for combo in itertools.combinations(holding, k):
                if prefilter and not _pointwise_filter(y, list(combo), subsets):
                    continue
                fams.append(set_of(set_of(s) for s in combo))
        per_point.append(fams)
    for choice in itertools.product(*per_point):
        yield set_of(kpair(y, n) for y, n in zip(dom, choice))


def _partial_orders(dom: list) -> Iterator[set]:
    off = [(x, y) for x in dom for y in dom if x is not y]
    for k in range(len(off) + 1):
        for chosen in itertools.combinations(off, k):
            le = set(chosen) | {(x, x) for x in dom}
            if any((y, x) in le for (x, y) in chosen):
                continue
            if all((x, z) in le for (x, y) in le for (y2, z) in le if y2 is y):
                yield le


def _lattice_ops(dom: list, le: set):
    def glb(x, y):
        lower = [z for z in dom if (z, x) in le and (z, y) in le]
        best = [z for z in lower if all((w, z) in le for w in lower)]
        return best[0] if len(best) == 1 else None

    def lub(x, y):
        upper = [z for z in dom if (x, z) in le and (y, z) in le]
        best = [z for z in upper if all((z, w) in le for w in upper)]
        return best[0] if len(best) == 1 else None

    meet, join = {}, {}
    for x in dom:
        for y in dom:
            m, j = glb(x, y), lub(x, y)
            if m is None or j is None:
                return None
            meet[x, y], join[x, y] = m, j
    tops = [z for z in dom if all((x, z) in le for x in dom)]
    bots = [z for z in dom if all((z, x) in le for x in dom)]
    if len(tops) != 1 or len(bots) != 1:
        return None
    return meet, join, tops[0], bots[0]


def bool_structure(dom: list, meet: dict, join: dict, comp: dict, top: HF, bot: HF) -> HF:
    m = set_of(kpair(kpair(x, y), meet[x, y]) for x in dom for y in dom)
    j = set_of(kpair(kpair(x, y), join[x, y]) for x in dom for y in dom)
    c = set_of(kpair(x, comp[x]) for x in dom)
    return encode_tuple([m, j, c, top, bot])


def shape_bool(domain: HF, **_) -> Iterator[HF]:
    """Bounded lattices from partial orders, with every complement choice."""
    dom = list(domain.elems)
    if not dom:
        return
    for le in _partial_orders(dom):
        ops = _lattice_ops(dom, le)
        if ops is None:
            continue
        meet, join, top, bot = ops
        choices = [[y for y in dom if meet[x, y] is bot and join[x, y] is top] for x in dom]
        if any(not c for c in choices):
            continue
        for pick in itertools.product(*choices):
            yield bool_structure(dom, meet, join, dict(zip(dom, pick)), top, bot)


def shape_metric(domain: HF, pool=DEFAULT_METRIC_POOL, **_) -> Iterator[HF]:
    for dist in _metric_tables(list(domain.elems), pool):
        yield _metric_value(dist)


def shape_metric_raw(domain: HF, pool=DEFAULT_METRIC_POOL, **_) -> Iterator[HF]:
    """Every table on ordered pairs with values in {0} ∪ pool (not only metrics)."""
    dom = list(domain.elems)
    pairs = [(x, y) for x in dom for y in dom]
    values = (Fraction(0),) + tuple(Fraction(v) for v in pool)
    for vs in itertools.product(values, repeat=len(pairs)):
        yield _metric_value(dict(zip(pairs, vs)))


def shape_topmet(domain: HF, pool=DEFAULT_METRIC_POOL, **_) -> Iterator[HF]:
    tops = [s for s in shape_families(domain) if native_top(QuasiStructuredSet(domain, s))]
    for o in tops:
        for m in shape_metric(domain, pool):
            yield kpair(o, m)


def shape_subset(domain: HF, **_) -> Iterator[HF]:
    for s in powerset(domain.elems):
        yield set_of(s)


def shape_empty(domain: HF, **_) -> Iterator[HF]:
    yield EMPTY
    yield domain


def shape_point(domain: HF, **_) -> Iterator[HF]:
    yield EMPTY
    yield from domain.elems


SHAPES: dict[str, Callable[..., Iterable[HF]]] = {
    "families": shape_families,
    "nei": shape_nei,
    "bool": shape_bool,
    "metric": shape_metric,
    "metric_raw": shape_metric_raw,
    "topmet": shape_topmet,
    "subset": shape_subset,
    "empty": shape_empty,
    "point": shape_point,
}

# theory name -> (shape, exhaustive atom cap, native checker)
CATALOG_META = {
    "top": ("families", 3, native_top),
    "nei": ("nei", 3, native_nei),
    "nei_literal": ("nei", 3, native_nei_literal),
    "bool": ("bool", 4, native_bool),
    "stone": ("families", 3, native_stone),
    "set1": ("empty", 8, native_set1),
    "set2": ("empty", 8, native_set2),
    "pset2": ("point", 8, native_pset2),
    "metr": ("metric", 3, native_metr),
    "metrble": ("families", 3, native_metrble),
    "topmet": ("topmet", 2, native_topmet),
    "sub": ("subset", 4, native_sub),
    "sierpinski": ("families", 3, native_sierpinski),
    "discrete2": ("families", 3, native_discrete2),
}


# -- the catalog ----------------------------------------------------------------------


@dataclass
class Catalog:
    definitions: Definitions
    theories: dict = field(default_factory=dict)

    def theory(self, name: str) -> Theory:
        try:
            return self.theories[name]
        except KeyError:
            raise KeyError(f"unknown theory {name!r}; known: {', '.join(sorted(self.theories))}") from None

    def interp_def(self, name: str):
        try:
            return self.definitions.interps[name]
        except KeyError:
            raise KeyError(
                f"unknown interpretation {name!r}; known: {', '.join(sorted(self.definitions.interps))}"
            ) from None


def catalog_text() -> str:
    return resources.files("vstar").joinpath("catalog.vst").read_text(encoding="utf-8")


def build_catalog(defs: Definitions) -> Catalog:
    cat = Catalog(defs)
    for name, td in defs.theories.items():
        shape, cap, native = CATALOG_META.get(name, ("families", 3, None))
        cat.theories[name] = Theory(name, td.formula, shape, td.infinite, cap, native)
    return cat


@lru_cache(maxsize=None)
def catalog() -> Catalog:
    return build_catalog(load_definitions(catalog_text()))


def load_catalog_file(path: str) -> Catalog:
    """A catalog file on disk, layered over the built-in definitions."""
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    return build_catalog(load_definitions(text, base=catalog().definitions))


def get_theory(name: str) -> Theory:
    return catalog().theory(name)


# -- enumeration ---------------------------------------------------------------------


def atom_domain(atoms) -> HF:
    """An int n means atoms @1..@n; otherwise a collection of ids or atoms."""
    if isinstance(atoms, HF):
        return atoms
    if isinstance(atoms, int):
        return set_of(atom(i) for i in range(1, atoms + 1))
    return set_of(a if isinstance(a, HF) else atom(a) for a in atoms)


def candidates(theory: Theory, atoms, raw: bool = False, pool=DEFAULT_METRIC_POOL) -> Iterator[QuasiStructuredSet]:
    """Candidate structures of the theory's shape.  With raw=True no native
    pruning is applied beyond the shape itself."""
    if theory.infinite:
        raise UnsupportedTheory(f"{theory.name} has only infinite models")
    domain = atom_domain(atoms)
    shape = theory.shape
    kw = {"pool": pool}
    if shape == "nei":
        kw["prefilter"] = not raw
    if raw and shape == "metric":
        shape = "metric_raw"
    for s in SHAPES[shape](domain, **kw):
        yield QuasiStructuredSet(domain, s)


def enumerate_models(theory: Theory, atoms, pool=DEFAULT_METRIC_POOL, max_atoms: int | None = None) -> ModelSet:
    if isinstance(theory, str):
        theory = get_theory(theory)
    domain = atom_domain(atoms)
    cap = theory.max_atoms if max_atoms is None else max_atoms
    if theory.infinite:
        raise UnsupportedTheory(f"{theory.name} has only infinite models")
    if len(domain) > cap:
        raise BoundExceeded(f"{theory.name}: {len(domain)} atoms exceeds the enumeration cap {cap}")
    return _enumerate(theory, domain, tuple(pool))


@lru_cache(maxsize=256)
def _enumerate(theory: Theory, domain: HF, pool: tuple) -> ModelSet:
    found = {}
    for q in candidates(theory, domain, pool=pool):
        if q.structure not in found and eval_formula(theory.formula, q):
            found[q.structure] = q
    models = tuple(found[s] for s in sorted(found, key=lambda s: s.key))
    note = f"metric pool {[str(p) for p in pool]}" if theory.shape in ("metric", "topmet") else ""
    return ModelSet(theory.name, domain, models, note)


# -- samples beyond the exhaustive caps ---------------------------------------------------


def powerset_algebra(k: int, first_atom: int = 1, order=None) -> QuasiStructuredSet:
    """The Boolean algebra of subsets of a k-element set, its 2**k elements
    labelled by consecutive atoms (in the given order of subsets, if any)."""
    subsets = powerset(range(k)) if order is None else list(order)
    label = {s: atom(first_atom + i) for i, s in enumerate(subsets)}
    dom = list(label.values())
    full = frozenset(range(k))
    meet = {(label[a], label[b]): label[a & b] for a in subsets for b in subsets}
    join = {(label[a], label[b]): label[a | b] for a in subsets for b in subsets}
    comp = {label[a]: label[full - a] for a in subsets}
    structure = bool_structure(dom, meet, join, comp, label[full], label[frozenset()])
    return QuasiStructuredSet(set_of(dom), structure)


def boolean_algebra_sample(size: int) -> list[QuasiStructuredSet]:
    """Exhaustive on up to 4 atoms; for larger powers of two, the powerset
    algebra under two labellings (natural and reversed)."""
    if size <= 4:
        return list(enumerate_models("bool", size))
    k = size.bit_length() - 1
    if 2 ** k != size:
        return []
    subsets = powerset(range(k))
    return [powerset_algebra(k), powerset_algebra(k, order=list(reversed(subsets)))]
