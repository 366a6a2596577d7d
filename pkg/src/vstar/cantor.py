"""Cantor–Bernstein by chasing histories.

For x in T, follow preimages backwards: x <- s⁻¹ ... <- t⁻¹ ...  If the chase
stops at a T element with no s-preimage, u(x) = t(x).  If it stops at an S
element with no t-preimage, u(x) = s⁻¹(x).  If it cycles, u(x) = t(x).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Hashable

from .errors import IncompleteCatalog, NotDomainPreserving, NotInjective
from .interp import Interpretation, apply
from .structured import QuasiStructuredSet
from .theories import enumerate_models

T_STOPPER, S_STOPPER, CYCLE = "T-stopper", "S-stopper", "cycle"


@dataclass
class AbstractInjectionPair:
    T: list
    S: list
    t: dict
    s: dict  # may be partial

    def __post_init__(self):
        self.T, self.S = list(self.T), list(self.S)
        self.t, self.s = dict(self.t), dict(self.s)
        tset, sset = set(self.T), set(self.S)
        missing = [x for x in self.T if x not in self.t]
        if missing:
            raise IncompleteCatalog(f"t is not total: no image for {missing[0]!r}")
        for name, f, dom, cod in (("t", self.t, tset, sset), ("s", self.s, sset, tset)):
            for x, y in f.items():
                if x not in dom or y not in cod:
                    raise IncompleteCatalog(
                        f"{name} maps {literal_names(x)} to {literal_names(y)}, outside the catalog"
                    )
            _check_injective(name, f)


def literal_names(x) -> str:
    return x.literal() if isinstance(x, QuasiStructuredSet) else repr(x)


def _check_injective(name: str, f: dict) -> None:
    seen: dict = {}
    for x, y in f.items():
        if y in seen:
            raise NotInjective(
                f"{name} sends {literal_names(seen[y])} and {literal_names(x)} to {literal_names(y)}"
            )
        seen[y] = x


@dataclass
class ChaseStep:
    element: Hashable
    branch: str
    image: Hashable
    chain: list = field(default_factory=list)


@dataclass
class CBResult:
    u: dict
    trace: list[ChaseStep]
    bijective: bool

    def branch(self, x) -> str:
        return next(step.branch for step in self.trace if step.element == x)

    def describe(self, show=repr) -> str:
        lines = []
        for step in self.trace:
            chain = " <- ".join(show(c) for c in step.chain)
            lines.append(f"u({show(step.element)}) = {show(step.image)}  [{step.branch}; {chain}]")
        lines.append(f"bijective: {self.bijective}")
        return "\n".join(lines)


def chase(pair: AbstractInjectionPair) -> CBResult:
    s_inv = {y: x for x, y in pair.s.items()}  # T element -> its s-preimage
    t_inv = {y: x for x, y in pair.t.items()}  # S element -> its t-preimage
    u, trace = {}, []
    for x in pair.T:
        chain = [x]
        seen = {("T", x)}
        side, cur = "T", x
        while True:
            back = s_inv if side == "T" else t_inv
            if cur not in back:
                branch = T_STOPPER if side == "T" else S_STOPPER
                break
            cur = back[cur]
            side = "S" if side == "T" else "T"
            if (side, cur) in seen:
                branch = CYCLE
                break
            seen.add((side, cur))
            chain.append(cur)
        image = s_inv[x] if branch == S_STOPPER else pair.t[x]
        u[x] = image
        trace.append(ChaseStep(x, branch, image, chain))
    images = list(u.values())
    bijective = len(set(images)) == len(images) and set(images) == set(pair.S)
    return CBResult(u, trace, bijective)


def fiber_pair(t: Interpretation, s: Interpretation, atoms) -> AbstractInjectionPair:
    """The injection pair induced by domain-preserving t: T -> S and s: S -> T
    on the models with a fixed domain."""
    if t.source is not s.target or t.target is not s.source:
        raise ValueError(f"{t.name} and {s.name} do not go in opposite directions")
    ts = enumerate_models(t.source, atoms)
    ss = enumerate_models(s.source, atoms)
    maps = {}
    for i, models in ((t, ts), (s, ss)):
        f = {}
        for a in models:
            b = apply(i, a)
            if b.domain is not a.domain:
                raise NotDomainPreserving(
                    f"{i.name} sends a model on {a.domain} to one on {b.domain}: {a.literal()}"
                )
            f[a] = b
        maps[i.name] = f
    try:
        return AbstractInjectionPair(ts.models, ss.models, maps[t.name], maps[s.name])
    except NotInjective as e:
        raise NotInjective(f"on the fiber over {ts.domain}: {e}") from None


def cantor_bernstein(pair_or_t, s: Interpretation | None = None, atoms=2) -> CBResult:
    """Abstract mode takes an AbstractInjectionPair; interpretation mode takes
    t, s and a fiber (atom count or domain)."""
    if isinstance(pair_or_t, AbstractInjectionPair):
        return chase(pair_or_t)
    if s is None:
        raise TypeError("interpretation mode needs both t and s")
    return chase(fiber_pair(pair_or_t, s, atoms))


def degenerate(result: CBResult, pair: AbstractInjectionPair) -> bool:
    """On a finite fiber with total injections every chase cycles, so u = t."""
    return all(result.u[x] == pair.t[x] for x in pair.T)

