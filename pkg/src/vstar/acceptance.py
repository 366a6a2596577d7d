"""The acceptance criteria as runnable checks.

Each criterion returns a Criterion with a pass flag, a one-line summary and
a JSON-friendly detail dict.  Shared by `vstar suite` and the test suite.
"""

from __future__ import annotations

import itertools
import random
import time
from dataclasses import dataclass, field
from fractions import Fraction

from .cantor import (
    CYCLE,
    S_STOPPER,
    T_STOPPER,
    AbstractInjectionPair,
    chase,
    degenerate,
    fiber_pair,
)
from .config import SuiteConfig
from .formulas import eval3
from . import interp as _interp, theories as _theories
from .groups import groups_isomorphic
from .hf import EMPTY, atom, kpair, rat_encode, set_of, trcl
from .interp import (
    apply,
    aut_obstruction,
    check_biint,
    check_defeq,
    check_interpretation,
    default_sample,
    get_interp,
    get_pair,
)
from .random_gen import (
    image,
    random_assignment,
    random_formula,
    random_map,
    random_permutation,
    random_quasi,
)
from .structured import (
    AtomMap,
    QuasiStructuredSet,
    atomize,
    automorphism_group,
    automorphisms,
    check_quasi,
    check_structured,
    encode_tuple,
    field as field_of,
    find_isomorphism,
    is_isomorphism,
    lift_value,
)
from .theories import (
    atom_domain,
    enumerate_models,
    get_theory,
    native_top,
    powerset,
)


@dataclass
class Criterion:
    number: int
    name: str
    passed: bool
    summary: str
    seconds: float = 0.0
    detail: dict = field(default_factory=dict)

    def line(self) -> str:
        mark = "PASS" if self.passed else "FAIL"
        return f"[{mark}] {self.number}. {self.name}: {self.summary} ({self.seconds:.2f}s)"

    def to_dict(self, timings: bool = False) -> dict:
        out = {"criterion": self.number, "name": self.name, "passed": self.passed,
               "summary": self.summary, "detail": self.detail}
        if timings:
            out["seconds"] = round(self.seconds, 3)
        return out


def _timed(number: int, name: str, fn, *args) -> Criterion:
    t0 = time.perf_counter()
    passed, summary, detail = fn(*args)
    return Criterion(number, name, passed, summary, time.perf_counter() - t0, detail)


# -- 1 -------------------------------------------------------------------------------------------


def brute_force_topologies(n: int) -> int:
    """Every family of subsets of an n-set, filtered by the native axioms."""
    dom = atom_domain(n)
    subsets = [set_of(s) for s in powerset(dom.elems)]
    count = 0
    for k in range(len(subsets) + 1):
        for fam in itertools.combinations(subsets, k):
            if native_top(QuasiStructuredSet(dom, set_of(fam))):
                count += 1
    return count


def criterion_top_nei(cfg: SuiteConfig):
    top, nei = get_theory("top"), get_theory("nei")
    counts, oracle, nei_counts = [], [], []
    for n in (1, 2, 3):
        counts.append(len(enumerate_models(top, n)))
        oracle.append(brute_force_topologies(n))
        nei_counts.append(len(enumerate_models(nei, n)))
    t, s = get_pair("top-nei")
    report = check_defeq(t, s, (default_sample(top, 3), default_sample(nei, 3)))
    ok = counts == oracle == [1, 4, 29] and nei_counts == counts and report.verified
    summary = f"Top counts {counts} (oracle {oracle}), Nei counts {nei_counts}, defeq {report.status}"
    return ok, summary, {"top": counts, "oracle": oracle, "nei": nei_counts, "defeq": report.to_dict()}


# -- 2 -------------------------------------------------------------------------------------------


def criterion_bool_stone(cfg: SuiteConfig):
    t, s = get_pair("bool-stone")
    samples = (default_sample(t.source, 3), default_sample(s.source, cfg.bounds.max_atoms))
    bi = check_biint(t, s, samples)
    de = check_defeq(t, s, samples)
    sizes = sorted({len(m.domain) for m in samples[0]})
    mismatch = bool(de.counterexample) and de.counterexample.get("reason") == "domain differs"
    ok = bi.verified and de.refuted and mismatch and sizes == [2, 4, 8]
    summary = (f"biint {bi.status} on algebra sizes {sizes} with {len(bi.witnesses or [])} witnesses; "
               f"defeq {de.status} ({de.counterexample.get('reason') if de.counterexample else 'no counterexample'})")
    return ok, summary, {"biint_status": bi.status, "defeq": de.to_dict()}


# -- 3 -------------------------------------------------------------------------------------------


def criterion_set1_set2(cfg: SuiteConfig):
    set1, set2 = get_theory("set1"), get_theory("set2")
    a = enumerate_models(set1, 1).models[0]
    b = enumerate_models(set2, 2).models[0]
    ga, gb = automorphism_group(a), automorphism_group(b)
    cmp = groups_isomorphic(ga, gb)
    samples = (default_sample(set1, cfg.bounds.max_atoms), default_sample(set2, cfg.bounds.max_atoms))
    obs = aut_obstruction(set1, set2, samples)
    one_way = check_interpretation(get_interp("set2_to_set1"), samples[1])
    ok = (ga.order, gb.order) == (1, 2) and not cmp and "order" in (cmp.obstruction or "") \
        and obs.refuted and one_way.verified
    summary = (f"|Aut| = {ga.order} vs {gb.order}; groups_isomorphic: {cmp.obstruction}; "
               f"obstruction {obs.status}; set2_to_set1 {one_way.status}")
    return ok, summary, {"obstruction": obs.to_dict(), "interpretation": one_way.status}


# -- 4 -------------------------------------------------------------------------------------------


def constant_metric(domain, value) -> QuasiStructuredSet:
    xs = list(domain.elems)
    return QuasiStructuredSet(domain, set_of(
        kpair(kpair(x, y), rat_encode(Fraction(0) if x is y else Fraction(value))) for x in xs for y in xs
    ))


def criterion_metr(cfg: SuiteConfig):
    metr = get_theory("metr")
    dom = atom_domain(2)
    d1, d2 = constant_metric(dom, 1), constant_metric(dom, 2)
    i = get_interp("metr_to_metrble")
    o1, o2 = apply(i, d1), apply(i, d2)
    ok = metr.satisfies(d1) and metr.satisfies(d2) and d1 != d2 and o1 == o2
    summary = f"inputs equal: {d1 == d2}; outputs equal: {o1 == o2} ({o1.literal()})"
    return ok, summary, {"inputs": [d1.literal(), d2.literal()], "output": o1.literal()}


# -- 5 -------------------------------------------------------------------------------------------

ABSTRACT_CASES = {
    "t-stopper": (
        AbstractInjectionPair(["a0", "a1"], ["b0", "b1"], {"a0": "b0", "a1": "b1"}, {"b0": "a1"}),
        {"a0": ("b0", T_STOPPER, ["a0"]), "a1": ("b1", T_STOPPER, ["a1", "b0", "a0"])},
    ),
    "s-stopper": (
        AbstractInjectionPair(["a0"], ["b0", "b1"], {"a0": "b0"}, {"b1": "a0"}),
        {"a0": ("b1", S_STOPPER, ["a0", "b1"])},
    ),
    "cycle": (
        AbstractInjectionPair(["a0", "a1"], ["b0", "b1"], {"a0": "b0", "a1": "b1"}, {"b0": "a1", "b1": "a0"}),
        {"a0": ("b0", CYCLE, ["a0", "b1", "a1", "b0"]), "a1": ("b1", CYCLE, ["a1", "b0", "a0", "b1"])},
    ),
}

CB_FIBERS = (("sub_id", "sub_compl", (1, 2, 3, 4)), ("sub_id", "sub_id", (1, 2, 3)), ("top_id", "top_id", (1, 2, 3)))


def criterion_cantor(cfg: SuiteConfig):
    problems = []
    for name, (pair, expected) in ABSTRACT_CASES.items():
        res = chase(pair)
        got = {st.element: (st.image, st.branch, st.chain) for st in res.trace}
        if got != expected:
            problems.append(f"{name}: trace {got}")
    runs = 0
    t, s = get_interp("sub_id"), get_interp("sub_compl")
    pair = fiber_pair(t, s, 2)
    res = chase(pair)
    identity = all(res.u[x] == x for x in pair.T) and res.bijective
    if not identity:
        problems.append("identity/complement fiber did not give u = identity")
    for tn, sn, fibers in CB_FIBERS:
        for n in fibers:
            p = fiber_pair(get_interp(tn), get_interp(sn), n)
            r = chase(p)
            runs += 1
            if not (degenerate(r, p) and r.bijective):
                problems.append(f"{tn}/{sn} on {n} atoms is not degenerate")
    ok = not problems
    summary = (f"abstract branches {sorted(ABSTRACT_CASES)} match; u = identity on the sub fiber: {identity}; "
               f"degeneracy on {runs} fiber runs" if ok else "; ".join(problems))
    return ok, summary, {"problems": problems, "fiber_runs": runs}


# -- 6 -------------------------------------------------------------------------------------------


def criterion_transfer(cfg: SuiteConfig):
    rng = random.Random(cfg.seed)
    names = ["c0", "c1"]
    bad, unknown = [], 0
    for _ in range(cfg.transfer_cases):
        a = random_quasi(rng, 3, 4)
        if rng.random() < 0.5:
            f = rng.choice(automorphisms(a))
            b = a
        else:
            f = random_permutation(rng, a.domain)
            b = image(f, a)
        phi = random_formula(rng, names, 3)
        env = random_assignment(rng, a, names)
        memo: dict = {}
        moved = {k: lift_value(f, v, a.domain, memo) for k, v in env.items()}
        x, y = eval3(phi, a, env), eval3(phi, b, moved)
        unknown += x is None
        if x != y:
            bad.append({"a": a.literal(), "f": f.literal(), "formula": str(phi)})
    ok = not bad
    return ok, f"{cfg.transfer_cases} cases, {len(bad)} discrepancies", {"discrepancies": bad[:5]}


# -- 7 -------------------------------------------------------------------------------------------


def criterion_lift(cfg: SuiteConfig):
    rng = random.Random(cfg.seed + 1)
    failures = []
    for case in range(cfg.lift_cases):
        a = random_quasi(rng, 3, 4, first_atom=1)
        n_b, n_c = rng.randint(1, 3), rng.randint(1, 3)
        b_dom = set_of(atom(10 + i) for i in range(n_b))
        c_dom = set_of(atom(20 + i) for i in range(n_c))
        f = random_map(rng, a.domain, b_dom)
        g = random_map(rng, b_dom, c_dom)
        gf = g.compose(f)
        ident = AtomMap.identity(a.domain)
        m1, m2, m3, m4 = {}, {}, {}, {}
        for x in field_of(a).elems:
            fx = lift_value(f, x, a.domain, m1)
            if lift_value(gf, x, a.domain, m2) is not lift_value(g, fx, b_dom, m3):
                failures.append({"case": case, "law": "composition", "x": str(x)})
            if lift_value(ident, x, a.domain, m4) is not x:
                failures.append({"case": case, "law": "identity", "x": str(x)})
    ok = not failures
    return ok, f"{cfg.lift_cases} composable pairs, {len(failures)} failures", {"failures": failures[:5]}


# -- 8 -------------------------------------------------------------------------------------------

PURE_POOL = (EMPTY, set_of((EMPTY,)), set_of((set_of((EMPTY,)),)), set_of((EMPTY, set_of((EMPTY,)))))


def simple_structures(max_size: int = 3, max_arity: int = 2):
    """Every relation of arity ≤ max_arity on every domain of ≤ max_size
    elements drawn from the pure sets of rank < 3."""
    for k in range(1, max_size + 1):
        for dom in itertools.combinations(PURE_POOL, k):
            for arity in range(1, max_arity + 1):
                tuples = list(itertools.product(dom, repeat=arity))
                for r in range(len(tuples) + 1):
                    for rel in itertools.combinations(tuples, r):
                        yield set_of(dom), rel, arity


def _atom_copy(dom, rel, arity) -> QuasiStructuredSet:
    names = {x: atom(100 + i) for i, x in enumerate(dom.elems)}
    return QuasiStructuredSet(
        set_of(names.values()), set_of(encode_tuple(names[p] for p in t) for t in rel)
    )


def cycle3():
    n0 = EMPTY
    n1 = set_of((n0,))
    n2 = set_of((n0, n1))
    dom = set_of((n0, n1, n2))
    rel = [(n0, n1), (n1, n2), (n2, n0)]
    return dom, rel


def criterion_atomize(cfg: SuiteConfig):
    b = set_of((atom(1),))
    total, failures = 0, []
    for dom, rel, arity in simple_structures():
        total += 1
        m_rel = set_of(encode_tuple(t) for t in rel)
        q = atomize(dom, m_rel, arity, b)
        if not check_quasi(q.domain, q.structure) or find_isomorphism(q, _atom_copy(dom, rel, arity)) is None:
            failures.append({"domain": str(dom), "relation": str(m_rel), "arity": arity})
    dom, rel = cycle3()
    q = atomize(dom, set_of(encode_tuple(t) for t in rel), 2, set_of((atom(1), atom(2))))
    order = automorphism_group(q).order
    ok = not failures and order == 3
    return ok, f"{total} simple structures, {len(failures)} failures; cycle-of-3 |Aut| = {order}", {
        "failures": failures[:5], "cycle_order": order}


# -- 9 -------------------------------------------------------------------------------------------


def _homeomorphism(f: AtomMap, a: QuasiStructuredSet, b: QuasiStructuredSet) -> bool:
    if not f.is_bijection(a.domain, b.domain):
        return False
    opens_b = {frozenset(o.elems) for o in b.structure}
    images = {frozenset(f[x] for x in o.elems) for o in a.structure}
    return images == opens_b


def criterion_sanity(cfg: SuiteConfig):
    instances = []
    for name in ("top", "nei"):
        for ms in default_sample(get_theory(name), 3):
            instances.extend(ms.models)
    for name in ("bool", "stone"):
        for ms in default_sample(get_theory(name), 3):
            instances.extend(ms.models)
    implication_failures = [
        q.literal() for q in instances
        if check_structured(q.domain, q.structure) and not check_quasi(q.domain, q.structure)
    ]
    top = get_theory("top")
    pairs = mismatches = 0
    for n in (1, 2, 3):
        models = enumerate_models(top, n).models
        dom = list(models[0].domain.elems)
        maps = [AtomMap(zip(dom, perm)) for perm in itertools.permutations(dom)]
        for a in models:
            for b in models:
                pairs += 1
                for f in maps:
                    if is_isomorphism(f, a, b) != _homeomorphism(f, a, b):
                        mismatches += 1
    ok = not implication_failures and not mismatches
    summary = (f"structured ⇒ quasi on {len(instances)} instances ({len(implication_failures)} failures); "
               f"homeomorphism ⇔ isomorphism on {pairs} topology pairs ({mismatches} mismatches)")
    return ok, summary, {"implication_failures": implication_failures[:5], "mismatches": mismatches}


CRITERIA = (
    (1, "Top/Nei definitional equivalence", criterion_top_nei),
    (2, "Bool/Stone bi-interpretability", criterion_bool_stone),
    (3, "Set1/Set2 automorphism obstruction", criterion_set1_set2),
    (4, "Metr to Metrble non-injectivity", criterion_metr),
    (5, "Cantor-Bernstein", criterion_cantor),
    (6, "Transfer under lifting", criterion_transfer),
    (7, "Lift laws", criterion_lift),
    (8, "Atomization", criterion_atomize),
    (9, "Structural sanity", criterion_sanity),
)

# stated runtime limits, in seconds
TIME_LIMITS = {1: 10.0, 2: 10.0}


def run_criterion(number: int, cfg: SuiteConfig | None = None) -> Criterion:
    cfg = cfg or SuiteConfig()
    num, name, fn = CRITERIA[number - 1]
    # start cold, so timings do not depend on what ran earlier in the process
    _interp._APPLY_CACHE.clear()
    _theories._enumerate.cache_clear()
    c = _timed(num, name, fn, cfg)
    limit = TIME_LIMITS.get(num)
    if limit is not None and c.seconds >= limit:
        c.passed = False
        c.summary += f"; over the {limit:.0f}s limit"
    return c


def run_all(cfg: SuiteConfig | None = None) -> list[Criterion]:
    return [run_criterion(n, cfg) for n, _, _ in CRITERIA]
