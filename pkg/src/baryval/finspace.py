"""Finite T0 spaces, viewed as posets with their Alexandroff topology.

Opens are exactly the upward-closed subsets, closed sets the downward-closed
ones.  Point identifiers are opaque strings and every iteration follows the
declared element order, so outputs are deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Iterable, Iterator, Sequence

from .errors import PreconditionError, SpaceMismatch

__all__ = [
    "FinPoset", "OpenSet", "Crescent", "saturate", "generate_lattice",
    "crescent_partition", "classify",
]


class FinPoset:
    """A finite partial order on string identifiers.

    ``relation`` may list covering pairs or any generating set of pairs;
    the reflexive-transitive closure is computed here and antisymmetry is
    validated.
    """

    def __init__(self, elements: Sequence[str], relation: Iterable[tuple[str, str]] = ()):
        elements = tuple(elements)
        if len(set(elements)) != len(elements):
            raise ValueError("duplicate point identifiers")
        self.elements = elements
        self.index = {x: i for i, x in enumerate(elements)}
        n = len(elements)
        le = [[i == j for j in range(n)] for i in range(n)]
        for x, y in relation:
            le[self._idx(x)][self._idx(y)] = True
        for k in range(n):
            for i in range(n):
                if le[i][k]:
                    row_k = le[k]
                    row_i = le[i]
                    for j in range(n):
                        if row_k[j]:
                            row_i[j] = True
        for i in range(n):
            for j in range(i + 1, n):
                if le[i][j] and le[j][i]:
                    raise ValueError(
                        f"relation is not antisymmetric: {elements[i]} and {elements[j]}")
        self._le = le
        self._up = {x: frozenset(elements[j] for j in range(n) if le[i][j])
                    for i, x in enumerate(elements)}
        self._down = {x: frozenset(elements[j] for j in range(n) if le[j][i])
                      for i, x in enumerate(elements)}

    # -- construction helpers -------------------------------------------------

    @classmethod
    def chain(cls, elements: Sequence[str]) -> "FinPoset":
        return cls(elements, zip(elements, elements[1:]))

    @classmethod
    def antichain(cls, elements: Sequence[str]) -> "FinPoset":
        return cls(elements)

    @classmethod
    def from_json(cls, obj: dict) -> "FinPoset":
        return cls(obj["elements"], [tuple(p) for p in obj.get("leq", [])])

    def to_json(self) -> dict:
        return {"elements": list(self.elements), "leq": [list(p) for p in self.covers()]}

    def _idx(self, x: str) -> int:
        try:
            return self.index[x]
        except KeyError:
            raise KeyError(f"unknown point {x!r}") from None

    # -- order queries --------------------------------------------------------

    def __len__(self):
        return len(self.elements)

    def __iter__(self) -> Iterator[str]:
        return iter(self.elements)

    def __contains__(self, x) -> bool:
        return x in self.index

    def __eq__(self, other):
        if not isinstance(other, FinPoset):
            return NotImplemented
        return self.elements == other.elements and self._le == other._le

    def __hash__(self):
        return hash((self.elements, tuple(map(tuple, self._le))))

    def __repr__(self):
        return f"FinPoset({list(self.elements)!r}, {self.covers()!r})"

    def leq(self, x: str, y: str) -> bool:
        return self._le[self._idx(x)][self._idx(y)]

    def up(self, x: str) -> frozenset:
        self._idx(x)
        return self._up[x]

    def down(self, x: str) -> frozenset:
        self._idx(x)
        return self._down[x]

    def pairs(self) -> list[tuple[str, str]]:
        """All pairs x <= y, reflexive ones included."""
        return [(x, y) for x in self.elements for y in self.elements if self.leq(x, y)]

    def covers(self) -> list[tuple[str, str]]:
        out = []
        for x, y in self.pairs():
            if x == y:
                continue
            if not any(z not in (x, y) and self.leq(x, z) and self.leq(z, y)
                       for z in self.elements):
                out.append((x, y))
        return out

    def least(self) -> str | None:
        for x in self.elements:
            if self._up[x] == frozenset(self.elements):
                return x
        return None

    def greatest(self) -> str | None:
        for x in self.elements:
            if self._down[x] == frozenset(self.elements):
                return x
        return None

    def minimal(self, subset: Iterable[str]) -> list[str]:
        s = set(subset)
        return [x for x in self.elements
                if x in s and not any(y != x and y in s and self.leq(y, x) for y in s)]

    def join(self, x: str, y: str) -> str | None:
        """Least upper bound, or None when it does not exist."""
        ub = self._up[x] & self._up[y]
        for z in self.elements:
            if z in ub and ub <= self._up[z]:
                return z
        return None

    def subspace(self, subset: Iterable[str]) -> "FinPoset":
        keep = set(subset)
        elems = [x for x in self.elements if x in keep]
        return FinPoset(elems, [(x, y) for x in elems for y in elems if self.leq(x, y)])

    # -- Alexandroff topology ---------------------------------------------------

    def up_closure(self, subset: Iterable[str]) -> frozenset:
        out = set()
        for x in subset:
            out |= self.up(x)
        return frozenset(out)

    def down_closure(self, subset: Iterable[str]) -> frozenset:
        out = set()
        for x in subset:
            out |= self.down(x)
        return frozenset(out)

    def is_upset(self, subset: Iterable[str]) -> bool:
        s = frozenset(subset)
        return all(self._up[x] <= s for x in s)

    def is_downset(self, subset: Iterable[str]) -> bool:
        s = frozenset(subset)
        return all(self._down[x] <= s for x in s)

    def open(self, members: Iterable[str]) -> "OpenSet":
        return OpenSet(self, frozenset(members))

    def whole(self) -> "OpenSet":
        return OpenSet(self, frozenset(self.elements))

    def empty(self) -> "OpenSet":
        return OpenSet(self, frozenset())

    def opens(self) -> list["OpenSet"]:
        """Every upset, each exactly once (including the empty set and X)."""
        order = sorted(self.elements, key=lambda x: -len(self._down[x]))
        found: list[frozenset] = []

        def rec(i, inside: frozenset, outside: frozenset):
            if i == len(order):
                found.append(inside)
                return
            x = order[i]
            if x in inside or x in outside:
                rec(i + 1, inside, outside)
                return
            if not (self._up[x] & outside):
                rec(i + 1, inside | self._up[x], outside)
            if not (self._down[x] & inside):
                rec(i + 1, inside, outside | self._down[x])

        rec(0, frozenset(), frozenset())
        rank = self.index
        found.sort(key=lambda s: (len(s), sorted(rank[x] for x in s)))
        return [OpenSet(self, s) for s in found]


@dataclass(frozen=True)
class OpenSet:
    space: FinPoset
    members: frozenset

    def __post_init__(self):
        unknown = [x for x in self.members if x not in self.space]
        if unknown:
            raise KeyError(f"unknown points {sorted(unknown)!r}")
        if not self.space.is_upset(self.members):
            raise PreconditionError(
                f"{sorted(self.members)} is not upward closed", sorted(self.members))

    def __contains__(self, x):
        return x in self.members

    def __iter__(self):
        return (x for x in self.space.elements if x in self.members)

    def __len__(self):
        return len(self.members)

    def _check(self, other):
        if self.space != other.space:
            raise SpaceMismatch("open sets live in different spaces")

    def __or__(self, other):
        self._check(other)
        return OpenSet(self.space, self.members | other.members)

    def __and__(self, other):
        self._check(other)
        return OpenSet(self.space, self.members & other.members)

    def __le__(self, other):
        return self.members <= other.members

    def sorted(self) -> list[str]:
        return list(self)

    def __repr__(self):
        return "OpenSet({" + ", ".join(self) + "})"


@dataclass(frozen=True)
class Crescent:
    """The set of points lying in exactly the opens indexed by ``label``."""

    label: frozenset
    members: frozenset

    def sorted_label(self) -> list[int]:
        return sorted(self.label)


def saturate(space: FinPoset, subset: Iterable[str]) -> OpenSet:
    """Smallest open (upward-closed) superset."""
    return OpenSet(space, space.up_closure(subset))


def generate_lattice(space: FinPoset, opens: Iterable[OpenSet]) -> list[OpenSet]:
    """Close ``opens`` together with the empty set and X under binary unions and
    intersections.  Output is deduplicated and sorted by size, then by the
    declared element order."""
    family = {frozenset(), frozenset(space.elements)}
    for u in opens:
        if u.space != space:
            raise SpaceMismatch("open set from another space")
        family.add(u.members)
    frontier = list(family)
    while frontier:
        fresh = []
        current = list(family)
        for a in frontier:
            for b in current:
                for c in (a | b, a & b):
                    if c not in family:
                        family.add(c)
                        fresh.append(c)
        frontier = fresh
    rank = space.index
    return [OpenSet(space, s) for s in
            sorted(family, key=lambda s: (len(s), sorted(rank[x] for x in s)))]


def classify(space: FinPoset, opens: Sequence[OpenSet]) -> dict[str, frozenset]:
    """Map each point x to the set of indices i with x in opens[i]."""
    return {x: frozenset(i for i, u in enumerate(opens) if x in u) for x in space.elements}


def crescent_partition(space: FinPoset, opens: Sequence[OpenSet],
                       include_empty: bool = True) -> list[Crescent]:
    """All 2^n crescents of ``opens`` (empty ones too unless ``include_empty``
    is false), ordered by label size then lexicographically."""
    for u in opens:
        if u.space != space:
            raise SpaceMismatch("open set from another space")
    f = classify(space, opens)
    n = len(opens)
    if include_empty:
        labels = [frozenset(i for i, bit in enumerate(bits) if bit)
                  for bits in product((0, 1), repeat=n)]
    else:
        labels = list(dict.fromkeys(f[x] for x in space.elements))
    labels.sort(key=lambda s: (len(s), sorted(s)))
    return [Crescent(lab, frozenset(x for x in space.elements if f[x] == lab))
            for lab in labels]
