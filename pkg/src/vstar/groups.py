"""Finite permutation groups given by explicit element lists."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass

from .errors import BoundExceeded
from .structured import AtomMap

DEFAULT_GROUP_CAP = 64


class Group:
    """Elements, a composition table ``table[i][j] = index(e_i ∘ e_j)`` and the identity."""

    def __init__(self, elements: list, table: list[list[int]], identity: int):
        self.elements = elements
        self.table = table
        self.identity = identity

    @classmethod
    def from_maps(cls, maps: list[AtomMap]) -> "Group":
        if not maps:
            raise ValueError("a group needs at least the identity")
        index = {m: i for i, m in enumerate(maps)}
        table = []
        for g in maps:
            row = []
            for h in maps:
                gh = g.compose(h)
                if gh not in index:
                    raise ValueError("element list is not closed under composition")
                row.append(index[gh])
            table.append(row)
        ident = [i for i, m in enumerate(maps) if all(m[x] is x for x in m)]
        if not ident:
            raise ValueError("identity missing")
        return cls(list(maps), table, ident[0])

    @classmethod
    def from_table(cls, table: list[list[int]], identity: int = 0) -> "Group":
        return cls(list(range(len(table))), table, identity)

    @property
    def order(self) -> int:
        return len(self.elements)

    def __len__(self) -> int:
        return len(self.elements)

    def mul(self, i: int, j: int) -> int:
        return self.table[i][j]

    def element_order(self, i: int) -> int:
        k, x = 1, i
        while x != self.identity:
            x = self.table[x][i]
            k += 1
        return k

    def element_orders(self) -> list[int]:
        return sorted(self.element_order(i) for i in range(self.order))

    def is_abelian(self) -> bool:
        n = self.order
        return all(self.table[i][j] == self.table[j][i] for i in range(n) for j in range(i + 1, n))

    def check_axioms(self) -> bool:
        n = self.order
        t = self.table
        if any(t[self.identity][i] != i or t[i][self.identity] != i for i in range(n)):
            return False
        if any(self.identity not in t[i] for i in range(n)):
            return False
        return all(
            t[t[i][j]][k] == t[i][t[j][k]] for i in range(n) for j in range(n) for k in range(n)
        )

    def invariants(self) -> dict:
        return {"order": self.order, "element_orders": self.element_orders()}


@dataclass
class GroupComparison:
    isomorphic: bool
    witness: dict | None = None
    obstruction: str | None = None

    def __bool__(self) -> bool:
        return self.isomorphic


def _generators(g: Group) -> list[int]:
    gens: list[int] = []
    span = {g.identity}
    for i in sorted(range(g.order), key=g.element_order, reverse=True):
        if i in span:
            continue
        gens.append(i)
        span = _closure(g, gens)
        if len(span) == g.order:
            break
    return gens


def _closure(g: Group, gens: list[int]) -> set[int]:
    seen = {g.identity}
    frontier = [g.identity]
    while frontier:
        x = frontier.pop()
        for s in gens:
            y = g.table[x][s]
            if y not in seen:
                seen.add(y)
                frontier.append(y)
    return seen


def groups_isomorphic(g: Group, h: Group, cap: int = DEFAULT_GROUP_CAP) -> GroupComparison:
    """Decide g ≅ h: invariant prefilter, then backtracking over generator images."""
    if g.order > cap or h.order > cap:
        raise BoundExceeded(f"group order exceeds the cap {cap}")
    if g.order != h.order:
        return GroupComparison(False, obstruction=f"order mismatch: {g.order} vs {h.order}")
    og, oh = g.element_orders(), h.element_orders()
    if Counter(og) != Counter(oh):
        return GroupComparison(False, obstruction=f"element-order multisets differ: {og} vs {oh}")
    gens = _generators(g)
    orders_h = {j: h.element_order(j) for j in range(h.order)}

    def try_images(images: list[int]):
        # extend generator images to a map by breadth-first products
        phi = {g.identity: h.identity}
        frontier = [g.identity]
        while frontier:
            x = frontier.pop()
            for s, t in zip(gens, images):
                y = g.table[x][s]
                z = h.table[phi[x]][t]
                if y in phi:
                    if phi[y] != z:
                        return None
                else:
                    phi[y] = z
                    frontier.append(y)
        if len(set(phi.values())) != g.order:
            return None
        for a in range(g.order):
            for b in range(g.order):
                if phi[g.table[a][b]] != h.table[phi[a]][phi[b]]:
                    return None
        return phi

    def search(k: int, images: list[int]):
        if k == len(gens):
            return try_images(images)
        want = g.element_order(gens[k])
        for j in range(h.order):
            if orders_h[j] == want:
                found = search(k + 1, images + [j])
                if found is not None:
                    return found
        return None

    phi = search(0, [])
    if phi is None:
        return GroupComparison(False, obstruction="no isomorphism found by exhaustive search")
    return GroupComparison(True, witness=phi)
