"""The Smyth convex poweralgebra over a finite interval-flat algebra.

Elements are non-empty convex upsets (in a finite space compact saturated
just means upward closed).  Q1 +_a Q2 is the saturation of the pointwise
mixes, the unit sends x to ↑x, and the order is reverse inclusion.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Iterable, Mapping

from .baryalg import AlgebraInstance, barycenter, barycenter_sub, weighted_pairs
from .convex import is_convex, upconv
from .errors import PreconditionError, SpaceMismatch, UnsupportedInstance
from .exactnum import XRat, unit

__all__ = [
    "ConvexUpset", "NotPrincipal", "smyth_mix", "smyth_eta", "smyth_order",
    "min_affine", "smyth_barycenter", "upconv_of", "all_convex_upsets", "SmythAlgebra",
]


def _flat(inst: AlgebraInstance):
    if not (inst.finite and inst.interval_flat):
        raise UnsupportedInstance(f"{inst.kind} instance is not finite and interval-flat")


@dataclass(frozen=True)
class ConvexUpset:
    inst: AlgebraInstance
    members: frozenset

    def __post_init__(self):
        _flat(self.inst)
        s = frozenset(self.members)
        object.__setattr__(self, "members", s)
        if not s:
            raise PreconditionError("Smyth elements are non-empty")
        bad = [x for x in s if x not in self.inst.space]
        if bad:
            raise KeyError(f"unknown elements {sorted(bad)!r}")
        if not self.inst.space.is_upset(s):
            raise PreconditionError("set is not upward closed", sorted(s))
        if not is_convex(self.inst, s):
            raise PreconditionError("set is not convex", sorted(s))

    def __iter__(self):
        return (x for x in self.inst.elements if x in self.members)

    def __contains__(self, x):
        return x in self.members

    def __len__(self):
        return len(self.members)

    def minimal(self) -> list:
        return self.inst.space.minimal(self.members)

    def to_json(self) -> dict:
        return {"members": list(self)}

    @classmethod
    def from_json(cls, inst: AlgebraInstance, obj: Mapping) -> "ConvexUpset":
        return cls(inst, frozenset(obj["members"]))

    def __repr__(self):
        return "Q{" + ", ".join(self) + "}"


@dataclass(frozen=True)
class NotPrincipal:
    """The candidate set Q has several minimal elements, so no single point
    is the barycenter."""

    upset: ConvexUpset
    minimal: tuple

    def to_json(self) -> dict:
        return {"principal": False, "upset": list(self.upset), "minimal": list(self.minimal)}


def _same(q1: ConvexUpset, q2: ConvexUpset):
    if q1.inst != q2.inst:
        raise SpaceMismatch("upsets over different algebras")


def smyth_mix(q1: ConvexUpset, a, q2: ConvexUpset) -> ConvexUpset:
    """↑{x1 +_a x2 | x1 ∈ Q1, x2 ∈ Q2}."""
    _same(q1, q2)
    a = unit(a)
    inst = q1.inst
    pts = {inst.mix(x, a, y) for x in q1.members for y in q2.members}
    return ConvexUpset(inst, inst.space.up_closure(pts))


def smyth_eta(inst: AlgebraInstance, x) -> ConvexUpset:
    return ConvexUpset(inst, inst.space.up(x))


def smyth_order(q1: ConvexUpset, q2: ConvexUpset) -> bool:
    """Q1 ⊑ Q2 iff Q1 ⊇ Q2."""
    _same(q1, q2)
    return q1.members >= q2.members


def min_affine(q: ConvexUpset, lam) -> XRat:
    f = lam.__getitem__ if isinstance(lam, Mapping) else lam
    if not q.members:
        raise PreconditionError("minimum over an empty set")
    return min(f(x) for x in q)


def upconv_of(inst: AlgebraInstance, E: Iterable) -> ConvexUpset:
    return ConvexUpset(inst, upconv(inst, E).members)


def all_convex_upsets(inst: AlgebraInstance) -> list[ConvexUpset]:
    _flat(inst)
    out = []
    for u in inst.space.opens():
        if u.members and is_convex(inst, u.members):
            out.append(ConvexUpset(inst, u.members))
    return out


class SmythAlgebra(AlgebraInstance):
    """The convex upsets of a finite interval-flat instance as an algebra in
    their own right, so the generic law checkers apply.  The whole carrier
    is least for reverse inclusion."""

    kind = "smyth"

    def __init__(self, inst: AlgebraInstance):
        _flat(inst)
        self.base = inst
        self._elements = all_convex_upsets(inst)
        # on a flat base every interior coefficient gives the same result
        self._mid: dict = {}

    def __eq__(self, other):
        return isinstance(other, SmythAlgebra) and other.base == self.base

    def __hash__(self):
        return hash(("smyth", self.base))

    def __repr__(self):
        return f"SmythAlgebra({self.base!r})"

    @property
    def elements(self):
        return list(self._elements)

    @property
    def bottom(self):
        return ConvexUpset(self.base, frozenset(self.base.elements))

    def mix(self, x, a, y):
        if a == 1:
            return x
        if a == 0:
            return y
        key = (x.members, y.members)
        if key not in self._mid:
            self._mid[key] = smyth_mix(x, a, y)
        return self._mid[key]

    def leq(self, x, y):
        return smyth_order(x, y)

    def contains(self, x):
        return isinstance(x, ConvexUpset) and x.inst == self.base

    def sort_key(self, x):
        return (len(x), sorted(self.base.elements.index(p) for p in x.members))

    def encode(self, x):
        return x.to_json()

    def decode(self, obj):
        return ConvexUpset.from_json(self.base, obj)


def smyth_barycenter(inst: AlgebraInstance, nu):
    """Q = ↑conv{barycenter of (a_i, y_i) | y_i ∈ ↑x_i}; its unique minimal
    element if there is one, otherwise :class:`NotPrincipal`.

    Total mass must be 1, or at most 1 on a pointed instance.
    """
    _flat(inst)
    pairs = [(a, x) for a, x in weighted_pairs(nu) if a]
    total = sum((a for a, _ in pairs), Fraction(0))
    if total > 1 or (total < 1 and not inst.pointed):
        raise PreconditionError(f"total mass {total} not allowed for this instance")
    ups = [sorted(inst.space.up(x), key=inst.sort_key) for _, x in pairs]
    weights = [a for a, _ in pairs]
    points = set()
    for choice in product(*ups):
        family = list(zip(weights, choice))
        points.add(barycenter(inst, family) if total == 1 else barycenter_sub(inst, family))
    q = ConvexUpset(inst, upconv(inst, points).members)
    mins = q.minimal()
    if len(mins) == 1:
        return mins[0]
    return NotPrincipal(q, tuple(mins))
