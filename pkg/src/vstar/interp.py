"""Interpretations between theories and the checks built on them.

Every check is relative to an explicit finite sample of models and returns
a CheckReport whose status is verified, refuted or unknown.  Refuted
reports carry a counterexample with literal values that can be replayed.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from typing import Callable

from .errors import (
    EvalError,
    NotAFunction,
    RankCapExceeded,
    TargetViolation,
)
from .formulas import LevyClass, classify, eval3
from .formulas.evaluate import Evaluator
from .formulas.syntax import And, Sep, The, pretty
from .groups import DEFAULT_GROUP_CAP, groups_isomorphic
from .hf import EMPTY, HF, format_value, function_view, kpair, rat_encode, set_of
from .structured import (
    DEFAULT_AUT_CAP,
    AtomMap,
    QuasiStructuredSet,
    automorphism_group,
    check_quasi,
    find_isomorphisms,
    is_isomorphism,
)
from .theories import (
    ModelSet,
    Theory,
    _family,
    bool_parts,
    bool_structure,
    boolean_algebra_sample,
    catalog,
    enumerate_models,
    metric_table,
    metric_topology,
    powerset,
)

VERIFIED, REFUTED, UNKNOWN = "verified", "refuted", "unknown"


@dataclass
class Interpretation:
    name: str
    source: Theory
    target: Theory
    tau_d: object
    tau_s: object
    eta: object = None
    pi_d: object = None
    pi_s: object = None
    claims: frozenset = frozenset()
    native: Callable[[QuasiStructuredSet], tuple] | None = None

    def __hash__(self) -> int:
        return id(self)

    def __eq__(self, other) -> bool:
        return self is other

    def __call__(self, a: QuasiStructuredSet) -> QuasiStructuredSet:
        return apply(self, a)


@dataclass
class CheckReport:
    check: str
    status: str
    sample: str
    counterexample: dict | None = None
    witnesses: list | None = None
    message: str = ""

    @property
    def verified(self) -> bool:
        return self.status == VERIFIED

    @property
    def refuted(self) -> bool:
        return self.status == REFUTED

    def to_dict(self) -> dict:
        out = {"check": self.check, "status": self.status, "sample": self.sample}
        if self.counterexample is not None:
            out["counterexample"] = self.counterexample
        if self.witnesses is not None:
            out["witnesses"] = self.witnesses
        if self.message:
            out["message"] = self.message
        return out

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), ensure_ascii=False, **kw)

    def describe(self) -> str:
        lines = [f"{self.check}: {self.status} on {self.sample}"]
        if self.message:
            lines.append(f"  {self.message}")
        if self.counterexample:
            for k, v in self.counterexample.items():
                lines.append(f"  {k}: {v}")
        return "\n".join(lines)


# -- native fast paths ------------------------------------------------------------------


def _native_top_to_nei(a):
    fam = _family(a)
    subsets = powerset(a.domain.elems)
    graph = []
    for y in a.domain.elems:
        nbhd = [z for z in subsets if any(y in w and w <= z for w in fam)]
        graph.append(kpair(y, set_of(set_of(z) for z in nbhd)))
    return a.domain, set_of(graph)


def _native_nei_to_top(a):
    nb = {y: {frozenset(z.elems) for z in n.elems} for y, n in function_view(a.structure).items()}
    opens = [y for y in powerset(a.domain.elems) if all(y in nb[z] for z in y)]
    return a.domain, set_of(set_of(y) for y in opens)


def _ultrafilters(a):
    m, j, c, t, b = bool_parts(a)
    dom = list(a.domain.elems)
    out = []
    for u in powerset(dom):
        if t not in u or b in u:
            continue
        if all(m[x, y] in u for x in u for y in u) and all(j[x, y] in u for x in u for y in dom):
            if all(x in u or c[x] in u for x in dom):
                out.append(u)
    return out


def _native_bool_to_stone(a):
    ufs = _ultrafilters(a)
    basics = [frozenset(u for u in ufs if x in u) for x in a.domain.elems]
    opens = {frozenset()}
    for k in range(1, len(basics) + 1):
        for combo in itertools.combinations(basics, k):
            opens.add(frozenset().union(*combo))
    x = set_of(set_of(u) for u in ufs)
    return x, set_of(set_of(set_of(u) for u in o) for o in opens)


def _clopen_code(u, space: HF) -> HF:
    return set_of(tuple(u) + (space,))


def _native_stone_to_bool(a):
    fam = _family(a)
    dom = frozenset(a.domain.elems)
    clopens = [u for u in fam if dom - u in fam]
    code = {u: _clopen_code(u, a.domain) for u in clopens}
    meet = {(code[u], code[v]): code[u & v] for u in clopens for v in clopens}
    join = {(code[u], code[v]): code[u | v] for u in clopens for v in clopens}
    comp = {code[u]: code[dom - u] for u in clopens}
    k = list(code.values())
    return set_of(k), bool_structure(k, meet, join, comp, code[dom], code[frozenset()])


def _native_metr_to_metrble(a):
    dist = metric_table(a)
    opens = metric_topology(dist, list(a.domain.elems))
    return a.domain, set_of(set_of(o) for o in opens)


def _native_metrble_to_metr(a):
    one, zero = rat_encode(1), rat_encode(0)
    return a.domain, set_of(
        kpair(kpair(x, y), zero if x is y else one) for x in a.domain.elems for y in a.domain.elems
    )


NATIVE = {
    "top_to_nei": _native_top_to_nei,
    "nei_to_top": _native_nei_to_top,
    "top_id": lambda a: (a.domain, a.structure),
    "bool_to_stone": _native_bool_to_stone,
    "stone_to_bool": _native_stone_to_bool,
    "set2_to_set1": lambda a: (set_of((a.domain,)), EMPTY),
    "metr_to_metrble": _native_metr_to_metrble,
    "metrble_to_metr": _native_metrble_to_metr,
    "sub_id": lambda a: (a.domain, a.structure),
    "sub_compl": lambda a: (a.domain, set_of(x for x in a.domain.elems if x not in a.structure)),
}

# named interpretation pairs t: T -> S and s: S -> T
PAIRS = {
    "top-nei": ("top_to_nei", "nei_to_top"),
    "bool-stone": ("bool_to_stone", "stone_to_bool"),
    "set1-pset2": ("set1_to_pset2", "pset2_to_set1"),
    "set1-set2": ("set1_to_set2", "set2_to_set1"),
    "metr-metrble": ("metr_to_metrble", "metrble_to_metr"),
    "sub": ("sub_id", "sub_compl"),
}


def get_interp(name: str, cat=None) -> Interpretation:
    cat = catalog() if cat is None else cat
    key = (id(cat), name)
    got = _INTERP_CACHE.get(key)
    if got is None:
        idef = cat.interp_def(name)
        got = Interpretation(
            idef.name,
            cat.theory(idef.source),
            cat.theory(idef.target),
            idef.tau_d,
            idef.tau_s,
            idef.eta,
            idef.pi_d,
            idef.pi_s,
            idef.claims,
            NATIVE.get(name) if cat is catalog() else None,
        )
        _INTERP_CACHE[key] = got
    return got


_INTERP_CACHE: dict = {}


def get_pair(name: str, cat=None) -> tuple[Interpretation, Interpretation]:
    if name not in PAIRS:
        raise KeyError(f"unknown pair {name!r}; known: {', '.join(sorted(PAIRS))}")
    t, s = PAIRS[name]
    return get_interp(t, cat), get_interp(s, cat)


# -- apply ---------------------------------------------------------------------------------


def _settle(ev: Evaluator, tau, companion):
    """Value of a Σ₁ description or separation using its Π₁ companion.

    Each candidate is settled yes by the Σ₁ body or no by the companion;
    returns (value, None) or (None, reason)."""
    hits = []
    for x in ev.members(ev.term(tau.bound, {})):
        yes = ev.formula(tau.body, {tau.var: x})
        no = ev.formula(companion, {tau.var: x})
        if yes is True and no is False:
            return None, f"companion disagrees at {format_value(x)}"
        if yes is True or no is True:
            hits.append(x)
        elif yes is None and no is None:
            return None, f"candidate {format_value(x)} is unsettled"
    if isinstance(tau, Sep):
        return set_of(hits), None
    if len(hits) != 1:
        return None, f"{len(hits)} witnesses"
    return hits[0], None


def _eval_tau(ev: Evaluator, tau, companion):
    if companion is not None and isinstance(tau, (The, Sep)):
        value, reason = _settle(ev, tau, companion)
        if value is None:
            raise RankCapExceeded(reason)
        return value
    return ev.term(tau, {})


def _conjuncts(f):
    if isinstance(f, And):
        return _conjuncts(f.left) + _conjuncts(f.right)
    return [f]


def apply(i: Interpretation, a: QuasiStructuredSet, native: bool = False, check_target: bool | str = True) -> QuasiStructuredSet:
    """t(a) = ⟨τ_d, τ_s⟩ evaluated over V(a); raises TargetViolation when the
    output is not a valid model of the target theory.  check_target="formula"
    checks the target sentence itself rather than its native checker."""
    key = (id(i), a, native, check_target)
    got = _APPLY_CACHE.get(key)
    if got is not None:
        return got
    if native:
        if i.native is None:
            raise ValueError(f"{i.name} has no native construction")
        d, s = i.native(a)
    else:
        ev = Evaluator(a)
        d = _eval_tau(ev, i.tau_d, i.pi_d)
        s = _eval_tau(ev, i.tau_s, i.pi_s)
    out = QuasiStructuredSet(d, s)
    if check_target:
        v = check_quasi(d, s)
        if not v:
            raise TargetViolation(f"{i.name} output is not quasi-structured: {v.describe()}", v.clause)
        # the native checker agrees with the sentence on every enumerated
        # sample; the sentence is consulted when it is missing or fails
        if check_target == "formula" or i.target.native is None or not i.target.native(out):
            for c in _conjuncts(i.target.formula):
                if eval3(c, out) is not True:
                    raise TargetViolation(f"{i.name} output fails {i.target.name}: {pretty(c)}", pretty(c))
    _APPLY_CACHE[key] = out
    return out


_APPLY_CACHE: dict = {}


# -- samples -----------------------------------------------------------------------------------


def default_sample(theory: Theory, max_atoms: int = 3, respect_cap: bool = True) -> list[ModelSet]:
    """All models on 1..max_atoms atoms, capped per theory unless respect_cap
    is off.  Bool uses the algebra sizes 2, 4 and 8 instead."""
    if theory.name == "bool":
        out = []
        for size in (2, 4, 8):
            models = tuple(boolean_algebra_sample(size))
            note = "" if size <= 4 else "powerset algebra, two labellings"
            out.append(ModelSet("bool", models[0].domain, models, note))
        return out
    if respect_cap:
        return [enumerate_models(theory, n) for n in range(1, min(max_atoms, theory.max_atoms) + 1)]
    return [enumerate_models(theory, n, max_atoms=max_atoms) for n in range(1, max_atoms + 1)]


def _flatten(samples) -> tuple[list, str]:
    if isinstance(samples, ModelSet):
        samples = [samples]
    models, parts = [], []
    for s in samples:
        if isinstance(s, ModelSet):
            models.extend(s.models)
            parts.append(f"{len(s)} on {len(s.domain)}")
        else:
            models.append(s)
    name = next((s.theory for s in samples if isinstance(s, ModelSet)), "explicit")
    desc = f"{name} models ({', '.join(parts)})" if parts else f"{len(models)} explicit models"
    return models, desc


def _cx(a, **sides) -> dict:
    out = {"input": a.literal()}
    for k, v in sides.items():
        out[k] = v.literal() if isinstance(v, QuasiStructuredSet) else v
    return out


# -- checks ------------------------------------------------------------------------------------


def check_interpretation(i: Interpretation, sample, native: bool = False) -> CheckReport:
    """Every sample model maps to a valid model of the target."""
    models, desc = _flatten(sample)
    for a in models:
        try:
            apply(i, a, native=native)
        except (TargetViolation, EvalError) as e:
            return CheckReport("interpretation", REFUTED, desc, _cx(a, error=str(e)), message=i.name)
    return CheckReport("interpretation", VERIFIED, desc, message=i.name)


def check_domain_preserving(i: Interpretation, sample) -> CheckReport:
    models, desc = _flatten(sample)
    for a in models:
        out = apply(i, a)
        if out.domain is not a.domain:
            return CheckReport(
                "domain_preserving", REFUTED, desc,
                _cx(a, tau_d=format_value(out.domain), expected=format_value(a.domain)),
                message=f"{i.name} does not return the input domain",
            )
    return CheckReport("domain_preserving", VERIFIED, desc, message=i.name)


def check_defeq(t: Interpretation, s: Interpretation, samples) -> CheckReport:
    """s∘t(a) = a and t∘s(b) = b as canonical values on every sample model."""
    sample_t, sample_s = samples
    mt, dt = _flatten(sample_t)
    ms, ds = _flatten(sample_s)
    desc = f"{dt}; {ds}"
    for first, second, models, label in ((t, s, mt, "s∘t"), (s, t, ms, "t∘s")):
        for a in models:
            mid = apply(first, a)
            back = apply(second, mid)
            if back != a:
                reason = "domain differs" if back.domain is not a.domain else "structure differs"
                return CheckReport(
                    "defeq", REFUTED, desc,
                    _cx(a, composite=label, intermediate=mid, output=back, reason=reason),
                    message=f"{label} is not the identity ({reason})",
                )
    return CheckReport("defeq", VERIFIED, desc, message=f"{t.name} / {s.name}")


def eta_map(eta, a: QuasiStructuredSet) -> AtomMap:
    graph = Evaluator(a).term(eta, {})
    return AtomMap(function_view(graph).items())


def _biint_side(first, second, models, cap):
    """Per-model witnesses a ≅ second(first(a)); returns (status, payload)."""
    witnesses = []
    ambiguous = None
    for a in models:
        back = apply(second, apply(first, a))
        if first.eta is not None:
            try:
                f = eta_map(first.eta, a)
            except (NotAFunction, EvalError) as e:
                return REFUTED, _cx(a, round_trip=back, error=f"eta is not a function: {e}")
            if not is_isomorphism(f, a, back):
                return REFUTED, _cx(a, round_trip=back, eta=f.literal(), error="eta is not an isomorphism")
            witnesses.append({"input": a.literal(), "eta": f.literal(), "by": "term"})
            continue
        found = []
        for f in find_isomorphisms(a, back, cap):
            found.append(f)
            if len(found) > 1:
                break
        if not found:
            return REFUTED, _cx(a, round_trip=back, error="no isomorphism")
        if len(found) > 1:
            ambiguous = ambiguous or _cx(a, round_trip=back, error="several isomorphisms and no eta term")
            continue
        witnesses.append({"input": a.literal(), "eta": found[0].literal(), "by": "unique search"})
    if ambiguous is not None:
        return UNKNOWN, ambiguous
    return VERIFIED, witnesses


def check_biint(t: Interpretation, s: Interpretation, samples, cap: int = DEFAULT_AUT_CAP) -> CheckReport:
    sample_t, sample_s = samples
    mt, dt = _flatten(sample_t)
    ms, ds = _flatten(sample_s)
    desc = f"{dt}; {ds}"
    all_witnesses = []
    unknown = None
    for first, second, models, label in ((t, s, mt, "eta"), (s, t, ms, "nu")):
        status, payload = _biint_side(first, second, models, cap)
        if status == REFUTED:
            payload["side"] = label
            return CheckReport("biint", REFUTED, desc, payload, message=f"{label} fails")
        if status == UNKNOWN:
            payload["side"] = label
            unknown = unknown or payload
        else:
            all_witnesses.extend({"side": label, **w} for w in payload)
    if unknown is not None:
        return CheckReport(
            "biint", UNKNOWN, desc, None, all_witnesses,
            message=f"ambiguous witness on {unknown['side']} side for {unknown['input']}; "
            "search cannot certify a definable choice",
        )
    return CheckReport("biint", VERIFIED, desc, witnesses=all_witnesses, message=f"{t.name} / {s.name}")


def aut_obstruction(
    T: Theory, S: Theory, samples, aut_cap: int = DEFAULT_AUT_CAP, group_cap: int = DEFAULT_GROUP_CAP
) -> CheckReport:
    """Look for a model on either side whose automorphism group matches no
    automorphism group on the other side.  Finding none proves nothing."""
    sample_t, sample_s = samples
    mt, dt = _flatten(sample_t)
    ms, ds = _flatten(sample_s)
    desc = f"{dt}; {ds}"
    groups_t = [(a, automorphism_group(a, aut_cap)) for a in mt]
    groups_s = [(b, automorphism_group(b, aut_cap)) for b in ms]
    matches = []
    for left, right, lname, rname in ((groups_t, groups_s, T.name, S.name), (groups_s, groups_t, S.name, T.name)):
        for a, g in left:
            reasons = []
            hit = None
            for b, h in right:
                cmp = groups_isomorphic(g, h, group_cap)
                if cmp:
                    hit = b
                    break
                reasons.append(cmp.obstruction)
            if hit is None:
                return CheckReport(
                    "aut_obstruction", REFUTED, desc,
                    {
                        "model": a.literal(),
                        "theory": lname,
                        "group": g.invariants(),
                        "against": rname,
                        "candidate_groups": [h.invariants() for _, h in right],
                        "reasons": sorted(set(reasons)),
                    },
                    message=f"Aut of a {lname} model (order {g.order}) matches no {rname} model; "
                    "bi-interpretability is refuted",
                )
            matches.append({"model": a.literal(), "theory": lname, "order": g.order, "matched": hit.literal()})
    return CheckReport(
        "aut_obstruction", UNKNOWN, desc, witnesses=matches,
        message="no obstruction within the sample; this does not establish bi-interpretability",
    )


def check_computable(i: Interpretation, sample=()) -> CheckReport:
    """τ_d and τ_s are Δ₀, or Σ₁ with Π₁ companions that settle every
    candidate on the sample."""
    models, desc = _flatten(sample) if sample else ([], "no models")
    classes = {"tau_d": classify(i.tau_d), "tau_s": classify(i.tau_s)}
    info = [{k: str(v) for k, v in classes.items()}]
    bad = [k for k, c in classes.items() if c not in (LevyClass.DELTA0, LevyClass.SIGMA1)]
    if bad:
        return CheckReport("computable", REFUTED, desc, {"terms": bad, "classes": info[0]},
                           message=f"{', '.join(bad)} not Σ₁")
    sigma = [k for k, c in classes.items() if c is LevyClass.SIGMA1]
    if not sigma:
        return CheckReport("computable", VERIFIED, desc, witnesses=info, message="all terms Δ₀")
    for k in sigma:
        companion = i.pi_d if k == "tau_d" else i.pi_s
        tau = i.tau_d if k == "tau_d" else i.tau_s
        if companion is None:
            return CheckReport("computable", UNKNOWN, desc, witnesses=info,
                               message=f"{k} is Σ₁ and has no Π₁ companion")
        if classify(companion) not in (LevyClass.DELTA0, LevyClass.PI1):
            return CheckReport("computable", REFUTED, desc, {"companion": k, "class": str(classify(companion))},
                               message=f"companion of {k} is not Π₁")
        for a in models:
            value, reason = _settle(Evaluator(a), tau, companion)
            if value is None:
                status = REFUTED if reason.startswith("companion disagrees") else UNKNOWN
                return CheckReport("computable", status, desc, _cx(a, term=k, reason=reason), info,
                                   message=reason)
    return CheckReport("computable", VERIFIED, desc, witnesses=info,
                       message="Σ₁ terms settled by their Π₁ companions")


def check_native_agreement(i: Interpretation, sample) -> CheckReport:
    models, desc = _flatten(sample)
    if i.native is None:
        return CheckReport("native_agreement", UNKNOWN, desc, message=f"{i.name} has no native path")
    for a in models:
        x, y = apply(i, a), apply(i, a, native=True)
        if x != y:
            return CheckReport("native_agreement", REFUTED, desc, _cx(a, term=x, native=y))
    return CheckReport("native_agreement", VERIFIED, desc, message=i.name)


def check_injective(i: Interpretation, sample) -> CheckReport:
    models, desc = _flatten(sample)
    seen: dict = {}
    for a in models:
        out = apply(i, a)
        if out in seen and seen[out] != a:
            return CheckReport("injective", REFUTED, desc,
                               {"first": seen[out].literal(), "second": a.literal(), "output": out.literal()})
        seen[out] = a
    return CheckReport("injective", VERIFIED, desc, message=i.name)
