"""Barycentric algebras: instances, law checkers, barycenters and cones.

An algebra is anything with a binary convex combination ``mix(x, a, y)``
(read x +_a y) for rational a in [0, 1], an order, and optionally a least
element.  Finite instances enumerate their carrier; symbolic ones
(rational vectors, KP, B-minus, valuations) expose exact closed-form
operations plus a deterministic sampling schedule for the checkers.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Any, Callable, Iterable, Mapping, NamedTuple, Sequence

from . import lp
from .errors import PreconditionError, UnsupportedInstance
from .exactnum import GRID, format_rat, rat, unit, xr_add, xr_mul
from .finspace import FinPoset
from .valuation import SimpleValuation, stochastic_le

__all__ = [
    "AlgebraInstance", "FiniteAlgebra", "FlatAlgebra", "Semilattice",
    "RationalConvex", "KP", "KPPoint", "BMinus", "ValuationAlgebra",
    "Violation", "Report", "ConeOps", "RATIONAL_CONE",
    "check_axioms", "check_entropic", "check_pointed_laws", "check_cone_laws",
    "barycenter", "barycenter_sub", "scalar", "cone_from_doubling",
    "extend_prob_to_bounded", "verify_barycenter_choquet", "affine_map_system",
    "instance_from_json", "weighted_pairs",
]

Elem = Any


class AlgebraInstance:
    """Interface shared by all instances.  Subclasses override ``mix`` and
    ``leq`` and set the flags."""

    kind = "abstract"
    interval_flat = False
    ordered = True
    # number of alpha-steps after which alpha· is injective and reflects the
    # order on its image; None means "not known" (finite carriers use
    # orbit search instead)
    stable_depth: int | None = None

    def mix(self, x: Elem, a: Fraction, y: Elem) -> Elem:
        raise NotImplementedError

    def leq(self, x: Elem, y: Elem) -> bool:
        raise NotImplementedError

    def eq(self, x: Elem, y: Elem) -> bool:
        return x == y

    @property
    def bottom(self) -> Elem | None:
        return None

    @property
    def pointed(self) -> bool:
        return self.bottom is not None

    @property
    def elements(self) -> list | None:
        """The carrier when finite, else None."""
        return None

    @property
    def finite(self) -> bool:
        return self.elements is not None

    def sample(self, rng: random.Random | None = None, n: int = 6) -> list:
        """Deterministic sample of carrier elements for the law checkers."""
        if self.elements is not None:
            return list(self.elements)
        raise NotImplementedError

    def sort_key(self, x: Elem):
        return repr(x)

    def encode(self, x: Elem):
        return x

    def decode(self, obj) -> Elem:
        return obj

    def to_json(self) -> dict:
        return {"kind": self.kind}

    def contains(self, x: Elem) -> bool:
        return True

    def scalar_preimages(self, y: Elem, b: Fraction) -> list:
        """Every x with b·x = y (symbolic instances only)."""
        if self.elements is not None:
            return [x for x in self.elements if self.eq(scalar(self, b, x), y)]
        raise UnsupportedInstance(f"{self.kind} has no preimage oracle")

    def conify_witness(self, x: Elem, a: Fraction, y: Elem) -> Elem | None:
        """Some x' with mix(x, a, x') <= y, or None if there is none."""
        if self.elements is not None:
            for z in self.elements:
                if self.leq(self.mix(x, a, z), y):
                    return z
            return None
        if self.pointed and self.ordered:
            # mix is monotone and the bottom is least, so it is the best try
            z = self.bottom
            return z if self.leq(self.mix(x, a, z), y) else None
        raise UnsupportedInstance(f"{self.kind} has no witness oracle for the cone order")


# ---------------------------------------------------------------------------
# finite instances


class FiniteAlgebra(AlgebraInstance):
    """Finite carrier with an arbitrary mix function.  Nothing is assumed
    about the laws; use the checkers to find out."""

    kind = "finite"

    def __init__(self, elements: Sequence[str], mix: Callable[[str, Fraction, str], str],
                 order: FinPoset | None = None, bottom: str | None = None):
        self._elements = list(elements)
        self._mix = mix
        self.space = order if order is not None else FinPoset.antichain(self._elements)
        if list(self.space.elements) != self._elements:
            raise ValueError("order must list the same elements in the same order")
        if bottom is not None and bottom not in self.space:
            raise KeyError(f"unknown bottom {bottom!r}")
        self._bottom = bottom

    @property
    def elements(self):
        return self._elements

    @property
    def bottom(self):
        return self._bottom

    def mix(self, x, a, y):
        return self._mix(x, Fraction(a), y)

    def leq(self, x, y):
        return self.space.leq(x, y)

    def sort_key(self, x):
        return self.space.index[x]

    def decode(self, obj):
        if obj not in self.space:
            raise KeyError(f"unknown element {obj!r}")
        return obj

    def contains(self, x):
        return x in self.space


class FlatAlgebra(FiniteAlgebra):
    """Finite algebra whose mix is a fixed binary operation m for every
    a in (0, 1); a = 1 and a = 0 return the left and right argument.

    The laws force m to be a semilattice operation.  The order defaults to
    x <= y iff m(x, y) = y but may be any order making m monotone.
    """

    kind = "flat"
    interval_flat = True

    def __init__(self, elements: Sequence[str], table: Mapping[tuple, str] | Callable,
                 order: FinPoset | None = None, bottom: str | None = "auto"):
        elements = list(elements)
        if callable(table):
            tab = {(x, y): table(x, y) for x in elements for y in elements}
        else:
            tab = dict(table)
        for x in elements:
            for y in elements:
                if (x, y) not in tab:
                    raise ValueError(f"midpoint table misses ({x}, {y})")
                if tab[(x, y)] not in elements:
                    raise ValueError(f"midpoint of ({x}, {y}) is not an element")
        self.table = tab
        if order is None:
            order = FinPoset(elements, [(x, y) for x in elements for y in elements
                                        if tab[(x, y)] == y])
        if bottom == "auto":
            bottom = order.least()
        super().__init__(elements, self._flat_mix, order, bottom)

    def _flat_mix(self, x, a, y):
        if a == 1:
            return x
        if a == 0:
            return y
        return self.table[(x, y)]

    def m(self, x: str, y: str) -> str:
        return self.table[(x, y)]

    def to_json(self):
        els = self.elements
        return {"kind": "flat", "elements": list(els),
                "table": [[self.table[(x, y)] for y in els] for x in els],
                "leq": [list(p) for p in self.space.covers()]}

    def __eq__(self, other):
        return (isinstance(other, FlatAlgebra) and self.table == other.table
                and self.space == other.space and self.bottom == other.bottom)

    def __hash__(self):
        return hash((self.space, tuple(sorted(self.table.items()))))

    def __repr__(self):
        return f"{type(self).__name__}({self.elements!r})"


class Semilattice(FlatAlgebra):
    """A finite sup-semilattice with x +_a y = x ∨ y for a in (0, 1)."""

    kind = "semilattice"

    def __init__(self, space: FinPoset):
        table = {}
        for x in space.elements:
            for y in space.elements:
                j = space.join(x, y)
                if j is None:
                    raise PreconditionError(f"{x!r} and {y!r} have no join", (x, y))
                table[(x, y)] = j
        super().__init__(space.elements, table, space)

    def to_json(self):
        els = self.elements
        return {"kind": "semilattice", "elements": list(els),
                "join": [[self.table[(x, y)] for y in els] for x in els]}


# ---------------------------------------------------------------------------
# symbolic instances


def _rng(rng):
    return rng if rng is not None else random.Random(0)


def _positive(b) -> Fraction:
    b = unit(b)
    if b == 0:
        raise ValueError("preimages under 0· are not finite")
    return b


def _rand_rat(rng: random.Random, lo=0, hi=2, den=8) -> Fraction:
    d = rng.randint(1, den)
    return Fraction(rng.randint(lo * d, hi * d), d)


class RationalConvex(AlgebraInstance):
    """The cone Q≥0^d as a barycentric algebra: exact affine combinations,
    componentwise order, pointed by the origin."""

    kind = "rational_convex"

    def __init__(self, dim: int):
        if dim < 1:
            raise ValueError("dimension must be positive")
        self.dim = dim
        self.stable_depth = 0

    def __eq__(self, other):
        return isinstance(other, RationalConvex) and other.dim == self.dim

    def __hash__(self):
        return hash(("rational_convex", self.dim))

    def __repr__(self):
        return f"RationalConvex({self.dim})"

    def point(self, *coords) -> tuple:
        if len(coords) == 1 and isinstance(coords[0], (list, tuple)):
            coords = coords[0]
        if len(coords) != self.dim:
            raise ValueError(f"expected {self.dim} coordinates")
        return tuple(rat(c) for c in coords)

    def mix(self, x, a, y):
        a = Fraction(a)
        return tuple(a * u + (1 - a) * v for u, v in zip(x, y))

    def leq(self, x, y):
        return all(u <= v for u, v in zip(x, y))

    @property
    def bottom(self):
        return tuple(Fraction(0) for _ in range(self.dim))

    def contains(self, x):
        return isinstance(x, tuple) and len(x) == self.dim and all(
            isinstance(c, Fraction) and c >= 0 for c in x)

    def sample(self, rng=None, n=6):
        rng = _rng(rng)
        out = [self.bottom]
        while len(out) < n:
            out.append(tuple(_rand_rat(rng) for _ in range(self.dim)))
        return out

    def sort_key(self, x):
        return x

    def encode(self, x):
        return [format_rat(c) for c in x]

    def decode(self, obj):
        return self.point([Fraction(c) for c in obj])

    def to_json(self):
        return {"kind": "rational_convex", "dim": self.dim}

    def scalar_preimages(self, y, b):
        b = _positive(b)
        return [tuple(c / b for c in y)]


class KPPoint(NamedTuple):
    """A point of the KP algebra: (−∞, s) when ``finite_head`` is false,
    otherwise the special point (0, 1)."""

    finite_head: bool
    s: Fraction

    def __repr__(self):
        return "(0, 1)" if self.finite_head else f"(-inf, {format_rat(self.s)})"


class KP(AlgebraInstance):
    """Pointed algebra of points (−∞, s), s in [0, 1], plus (0, 1), with
    pointwise operations and order.  Two distinct points become equal after
    any scalar multiplication by r in (0, 1)."""

    kind = "kp"
    stable_depth = 1

    TOP = KPPoint(True, Fraction(1))

    def __eq__(self, other):
        return isinstance(other, KP)

    def __hash__(self):
        return hash("kp")

    def __repr__(self):
        return "KP()"

    @staticmethod
    def neg_inf(s) -> KPPoint:
        return KPPoint(False, unit(s))

    def mix(self, x, a, y):
        a = Fraction(a)
        # first coordinates live in {−∞, 0}: a·u + (1−a)·v is 0 only when every
        # weighted term is 0
        head = (x.finite_head or a == 0) and (y.finite_head or a == 1)
        return KPPoint(head, a * x.s + (1 - a) * y.s)

    def leq(self, x, y):
        return (not x.finite_head or y.finite_head) and x.s <= y.s

    @property
    def bottom(self):
        return KPPoint(False, Fraction(0))

    def contains(self, x):
        return isinstance(x, KPPoint) and (x.s == 1 if x.finite_head else 0 <= x.s <= 1)

    def sample(self, rng=None, n=6):
        rng = _rng(rng)
        out = [self.bottom, self.TOP, KPPoint(False, Fraction(1))]
        while len(out) < n:
            d = rng.randint(1, 8)
            out.append(KPPoint(False, Fraction(rng.randint(0, d), d)))
        return out

    def sort_key(self, x):
        # every (−∞, s) sorts before (0, 1)
        return (1 if x.finite_head else 0, x.s)

    def encode(self, x):
        return ["0", "1"] if x.finite_head else ["-inf", format_rat(x.s)]

    def decode(self, obj):
        head, s = obj
        if str(head) in ("0",):
            if Fraction(s) != 1:
                raise ValueError("the only point with finite head is (0, 1)")
            return self.TOP
        if str(head) not in ("-inf", "-∞"):
            raise ValueError(f"bad KP point {obj!r}")
        return self.neg_inf(Fraction(s))

    def scalar_preimages(self, y, b):
        b = _positive(b)
        if b == 1:
            return [y]
        if y.finite_head:
            return []
        out = []
        if y.s / b <= 1:
            out.append(KPPoint(False, y.s / b))
        if y.s == b:
            out.append(self.TOP)
        return out


class BMinus(AlgebraInstance):
    """Nonpositive rationals with affine combinations and the usual order.
    Not pointed; the cone order has a closed-form witness."""

    kind = "bminus"
    stable_depth = 0

    def __eq__(self, other):
        return isinstance(other, BMinus)

    def __hash__(self):
        return hash("bminus")

    def __repr__(self):
        return "BMinus()"

    def mix(self, x, a, y):
        a = Fraction(a)
        return a * x + (1 - a) * y

    def leq(self, x, y):
        return x <= y

    def contains(self, x):
        return isinstance(x, Fraction) and x <= 0

    def sample(self, rng=None, n=6):
        rng = _rng(rng)
        out = [Fraction(0), Fraction(-1)]
        while len(out) < n:
            out.append(-_rand_rat(rng, 0, 3))
        return out

    def sort_key(self, x):
        return x

    def encode(self, x):
        return format_rat(x)

    def decode(self, obj):
        q = Fraction(obj)
        if q > 0:
            raise ValueError("B-minus holds nonpositive rationals only")
        return q

    def conify_witness(self, x, a, y):
        # x +_a x' <= y iff x' <= (y - a x) / (1 - a); any smaller x' works
        if a == 1:
            return Fraction(0) if x <= y else None
        return min(Fraction(0), (y - a * x) / (1 - a))


class ValuationAlgebra(AlgebraInstance):
    """Simple valuations on a finite space under pointwise mixing, ordered
    stochastically.  ``mode`` is "prob" (total mass 1) or "subprob" (≤ 1)."""

    kind = "valuations"
    stable_depth = 0

    def __init__(self, space: FinPoset, mode: str = "subprob"):
        if mode not in ("prob", "subprob"):
            raise ValueError("mode must be 'prob' or 'subprob'")
        self.space = space
        self.mode = mode

    def __eq__(self, other):
        return (isinstance(other, ValuationAlgebra) and other.space == self.space
                and other.mode == self.mode)

    def __hash__(self):
        return hash(("valuations", self.space, self.mode))

    def __repr__(self):
        return f"ValuationAlgebra({self.space!r}, {self.mode!r})"

    def mix(self, x, a, y):
        a = Fraction(a)
        b = 1 - a
        out = {p: a * m for p, m in x.masses.items()} if a else {}
        if b:
            for p, m in y.masses.items():
                out[p] = out.get(p, 0) + b * m
        return SimpleValuation._trusted(self.space, out)

    def leq(self, x, y):
        return stochastic_le(x, y).related

    @property
    def bottom(self):
        if self.mode == "subprob":
            return SimpleValuation.zero(self.space)
        least = self.space.least()
        return None if least is None else SimpleValuation.dirac(self.space, least)

    def contains(self, x):
        if not isinstance(x, SimpleValuation) or x.space != self.space:
            return False
        return x.total() == 1 if self.mode == "prob" else x.total() <= 1

    def sample(self, rng=None, n=5):
        rng = _rng(rng)
        out = [] if self.bottom is None else [self.bottom]
        pts = list(self.space.elements)
        while len(out) < n:
            raw = {x: Fraction(rng.randint(0, 4)) for x in pts}
            tot = sum(raw.values())
            if tot == 0:
                continue
            scale = Fraction(1, 1) if self.mode == "prob" else Fraction(rng.randint(1, 4), 4)
            out.append(SimpleValuation(self.space, {x: v / tot * scale for x, v in raw.items()}))
        return out

    def sort_key(self, x):
        return tuple(x.mass(p) for p in self.space.elements)

    def encode(self, x):
        return x.to_json()

    def decode(self, obj):
        nu = SimpleValuation.from_json(obj, self.space)
        if not self.contains(nu):
            raise ValueError(f"valuation outside the {self.mode} carrier")
        return nu

    def to_json(self):
        return {"kind": "valuations", "space": self.space.to_json(), "mode": self.mode}

    def scalar_preimages(self, y, b):
        b = _positive(b)
        bot = self.bottom
        rest = y - bot.scale(1 - b) if self.mode == "prob" else y
        x = rest.scale(1 / b)
        return [x] if self.contains(x) else []


def instance_from_json(obj: Mapping) -> AlgebraInstance:
    kind = obj.get("kind")
    if kind == "semilattice":
        els = obj["elements"]
        if "join" in obj:
            table = {(x, y): obj["join"][i][j] for i, x in enumerate(els)
                     for j, y in enumerate(els)}
            inst = FlatAlgebra(els, table)
            return Semilattice(inst.space)
        return Semilattice(FinPoset(els, [tuple(p) for p in obj.get("leq", [])]))
    if kind == "flat":
        els = obj["elements"]
        table = {(x, y): obj["table"][i][j] for i, x in enumerate(els)
                 for j, y in enumerate(els)}
        order = FinPoset(els, [tuple(p) for p in obj["leq"]]) if "leq" in obj else None
        return FlatAlgebra(els, table, order)
    if kind == "rational_convex":
        return RationalConvex(int(obj["dim"]))
    if kind == "kp":
        return KP()
    if kind == "bminus":
        return BMinus()
    if kind == "valuations":
        return ValuationAlgebra(FinPoset.from_json(obj["space"]), obj.get("mode", "subprob"))
    raise ValueError(f"unknown instance kind {kind!r}")


# ---------------------------------------------------------------------------
# law checkers


@dataclass(frozen=True)
class Violation:
    law: str
    args: tuple
    lhs: Any
    rhs: Any


@dataclass
class Report:
    violations: list[Violation] = field(default_factory=list)
    checked: int = 0

    @property
    def passed(self) -> bool:
        return not self.violations

    def __bool__(self):
        return self.passed

    def expect(self, law: str, args: tuple, lhs, rhs, eq=None):
        self.checked += 1
        if not (eq(lhs, rhs) if eq else lhs == rhs):
            self.violations.append(Violation(law, args, lhs, rhs))

    def to_json(self, encode=lambda x: x) -> dict:
        def enc(v):
            if isinstance(v, Fraction):
                return format_rat(v)
            try:
                return encode(v)
            except Exception:
                return repr(v)
        return {"pass": self.passed, "checked": self.checked,
                "violations": [{"law": v.law, "args": [enc(a) for a in v.args],
                                "lhs": enc(v.lhs), "rhs": enc(v.rhs)}
                               for v in self.violations]}


def _schedule(inst: AlgebraInstance, sample, grid, n: int = 6):
    elems = list(sample) if sample is not None else inst.sample(n=n)
    return elems, [unit(a) for a in grid]


def check_axioms(inst: AlgebraInstance, grid: Iterable = GRID, sample=None) -> Report:
    """x +_1 y = x, x +_a x = x, x +_a y = y +_{1-a} x, and
    (x +_a y) +_b z = x +_{ab} (y +_{(1-a)b/(1-ab)} z) for a, b < 1."""
    elems, grid = _schedule(inst, sample, grid)
    rep = Report()
    mix, eq = inst.mix, inst.eq
    for x in elems:
        for a in grid:
            rep.expect("idempotence", (x, a), mix(x, a, x), x, eq)
        for y in elems:
            rep.expect("unit", (x, y), mix(x, Fraction(1), y), x, eq)
            for a in grid:
                rep.expect("skew-commutativity", (x, a, y), mix(x, a, y), mix(y, 1 - a, x), eq)
    for x, y, z in product(elems, repeat=3):
        for a in grid:
            if a == 1:
                continue
            xy = {}
            for b in grid:
                if b == 1:
                    continue
                if a not in xy:
                    xy[a] = mix(x, a, y)
                lhs = mix(xy[a], b, z)
                ab = a * b
                rhs = mix(x, ab, mix(y, (1 - a) * b / (1 - ab), z))
                rep.expect("skew-associativity", (x, a, y, b, z), lhs, rhs, eq)
    return rep


def check_entropic(inst: AlgebraInstance, grid: Iterable = GRID, sample=None) -> Report:
    """(x +_a y) +_b (z +_a t) = (x +_b z) +_a (y +_b t)."""
    # four-fold products grow fast, so symbolic instances get a smaller sample
    elems, grid = _schedule(inst, sample, grid, n=4)
    rep = Report()
    mix, eq = inst.mix, inst.eq
    for x, y, z, t in product(elems, repeat=4):
        for a in grid:
            xy, zt = mix(x, a, y), mix(z, a, t)
            for b in grid:
                lhs = mix(xy, b, zt)
                rhs = mix(mix(x, b, z), a, mix(y, b, t))
                rep.expect("entropic", (x, y, z, t, a, b), lhs, rhs, eq)
    return rep


def scalar(inst: AlgebraInstance, a, x: Elem) -> Elem:
    """a·x = x +_a ⊥ on a pointed instance."""
    if not inst.pointed:
        raise UnsupportedInstance(f"{inst.kind} instance is not pointed")
    return inst.mix(x, unit(a), inst.bottom)


def check_pointed_laws(inst: AlgebraInstance, grid: Iterable = GRID, sample=None) -> Report:
    """0·x = ⊥, (ab)·x = a·(b·x), 1·x = x, a·⊥ = ⊥, a·(x +_b y) = a·x +_b a·y
    and a·x +_r b·x = (ra + (1−r)b)·x."""
    elems, grid = _schedule(inst, sample, grid)
    rep = Report()
    bot, mix, eq = inst.bottom, inst.mix, inst.eq
    sc = lambda a, x: scalar(inst, a, x)
    for a in grid:
        rep.expect("a·⊥ = ⊥", (a,), sc(a, bot), bot, eq)
    for x in elems:
        rep.expect("0·x = ⊥", (x,), sc(0, x), bot, eq)
        rep.expect("1·x = x", (x,), sc(1, x), x, eq)
        for a in grid:
            ax = sc(a, x)
            for b in grid:
                rep.expect("(ab)·x = a·(b·x)", (a, b, x), sc(a * b, x), sc(a, sc(b, x)), eq)
                bx = sc(b, x)
                for r in grid:
                    rep.expect("a·x +_r b·x = (ra+(1-r)b)·x", (a, b, r, x),
                               mix(ax, r, bx), sc(r * a + (1 - r) * b, x), eq)
        for y in elems:
            for a in grid:
                for b in grid:
                    rep.expect("a·(x +_b y) = a·x +_b a·y", (a, b, x, y),
                               sc(a, mix(x, b, y)), mix(sc(a, x), b, sc(a, y)), eq)
    return rep


# ---------------------------------------------------------------------------
# barycenters


def weighted_pairs(weighted) -> list[tuple[Fraction, Elem]]:
    """Normalise a SimpleValuation, a mapping elem -> weight, or a list of
    (weight, elem) pairs into a list of pairs."""
    if isinstance(weighted, SimpleValuation):
        return [(m, x) for x, m in weighted.masses.items()]
    if isinstance(weighted, Mapping):
        return [(rat(w), x) for x, w in weighted.items()]
    return [(rat(w), x) for w, x in weighted]


def barycenter(inst: AlgebraInstance, weighted) -> Elem:
    """Barycenter of points with weights summing to 1, by the recursion
    (sum_{i<n} a_i/(1-a_n) x_i) +_{1-a_n} x_n."""
    pairs = weighted_pairs(weighted)
    if not pairs:
        raise PreconditionError("barycenter of an empty family")
    total = sum((a for a, _ in pairs), Fraction(0))
    if total != 1:
        raise PreconditionError(f"weights sum to {total}, not 1")
    return _bary(inst, pairs)


def _bary(inst, pairs):
    a_n, x_n = pairs[-1]
    if len(pairs) == 1 or a_n == 1:
        return x_n
    rest = _bary(inst, [(a / (1 - a_n), x) for a, x in pairs[:-1]])
    return inst.mix(rest, 1 - a_n, x_n)


def barycenter_sub(inst: AlgebraInstance, weighted) -> Elem:
    """Pointed barycenter for weights summing to at most 1."""
    if not inst.pointed:
        raise UnsupportedInstance(f"{inst.kind} instance is not pointed")
    pairs = weighted_pairs(weighted)
    total = sum((a for a, _ in pairs), Fraction(0))
    if total > 1:
        raise PreconditionError(f"weights sum to {total} > 1")
    if total == 0:
        return inst.bottom
    return scalar(inst, total, _bary(inst, [(a / total, x) for a, x in pairs]))


# ---------------------------------------------------------------------------
# cones


@dataclass(frozen=True)
class ConeOps:
    add: Callable[[Any, Any], Any]
    smul: Callable[[Fraction, Any], Any]
    zero: Any
    eq: Callable[[Any, Any], bool] = lambda u, v: u == v


RATIONAL_CONE = ConeOps(add=xr_add, smul=lambda a, v: xr_mul(rat(a), v), zero=Fraction(0))


def cone_from_doubling(inst: AlgebraInstance, dbl: Callable[[Elem], Elem],
                       sample=None, grid: Iterable = GRID) -> ConeOps:
    """Cone structure x + y = dbl(x +_{1/2} y), a·x = dbl^k((a/2^k)·x).

    ``dbl`` must be linear with dbl((1/2)·x) = x; this is spot-checked on the
    sample and grid before the operations are handed out.
    """
    if not inst.pointed:
        raise UnsupportedInstance(f"{inst.kind} instance is not pointed")
    elems, grid = _schedule(inst, sample, grid)
    eq, half = inst.eq, Fraction(1, 2)
    if not eq(dbl(inst.bottom), inst.bottom):
        raise PreconditionError("doubling map does not fix the bottom")
    for x in elems:
        if not eq(dbl(scalar(inst, half, x)), x):
            raise PreconditionError("dbl((1/2)·x) != x", x)
        for y in elems:
            for a in grid:
                if not eq(dbl(inst.mix(x, a, y)), inst.mix(dbl(x), a, dbl(y))):
                    raise PreconditionError("doubling map is not affine", (x, a, y))

    def add(x, y):
        return dbl(inst.mix(x, half, y))

    def smul(a, x):
        a = rat(a)
        if a == 0:
            return inst.bottom
        k = 0
        while a / 2 ** k > 1:
            k += 1
        out = scalar(inst, a / 2 ** k, x)
        for _ in range(k):
            out = dbl(out)
        return out

    return ConeOps(add=add, smul=smul, zero=inst.bottom, eq=eq)


def check_cone_laws(cone: ConeOps, elems: Sequence, scalars: Iterable) -> Report:
    """Commutative monoid laws plus 0x = 0, (ab)x = a(bx), 1x = x, a0 = 0,
    a(x+y) = ax + ay and (a+b)x = ax + bx."""
    rep = Report()
    eq, add, sm, zero = cone.eq, cone.add, cone.smul, cone.zero
    scalars = [rat(a) for a in scalars]
    for a in scalars:
        rep.expect("a·0 = 0", (a,), sm(a, zero), zero, eq)
    for x in elems:
        rep.expect("x + 0 = x", (x,), add(x, zero), x, eq)
        rep.expect("0·x = 0", (x,), sm(0, x), zero, eq)
        rep.expect("1·x = x", (x,), sm(1, x), x, eq)
        for a in scalars:
            for b in scalars:
                rep.expect("(ab)x = a(bx)", (a, b, x), sm(a * b, x), sm(a, sm(b, x)), eq)
                rep.expect("(a+b)x = ax+bx", (a, b, x), sm(a + b, x), add(sm(a, x), sm(b, x)), eq)
        for y in elems:
            rep.expect("x + y = y + x", (x, y), add(x, y), add(y, x), eq)
            for a in scalars:
                rep.expect("a(x+y) = ax+ay", (a, x, y), sm(a, add(x, y)),
                           add(sm(a, x), sm(a, y)), eq)
            for z in elems:
                rep.expect("(x+y)+z = x+(y+z)", (x, y, z), add(add(x, y), z),
                           add(x, add(y, z)), eq)
    return rep


def extend_prob_to_bounded(f: Callable[[SimpleValuation], Any], nu: SimpleValuation,
                           cone: ConeOps = RATIONAL_CONE):
    """Extend an affine map on probability valuations to all bounded ones:
    0 goes to 0 and nu to total(nu)·f(nu / total(nu))."""
    total = nu.total()
    if total == 0:
        return cone.zero
    return cone.smul(total, f(nu.scale(1 / total)))


# ---------------------------------------------------------------------------
# Choquet-style barycenter verification


def affine_map_system(inst: AlgebraInstance, upper=1, linear: bool = False,
                      monotone: bool = True) -> tuple[lp.LinearSystem, dict]:
    """LP whose feasible points are the monotone affine maps h on a finite
    interval-flat instance with 0 <= h <= ``upper`` (no bound if None).

    For a, b distinct in (0, 1) the value h(m(x, y)) is the same while
    a h(x) + (1 - a) h(y) moves unless h(x) = h(y), so affinity reduces to
    h(x) = h(y) = h(m(x, y)) for every pair.
    """
    if not (inst.finite and inst.interval_flat):
        raise UnsupportedInstance("affine-map LP needs a finite interval-flat instance")
    els = inst.elements
    var = {x: f"h{i}" for i, x in enumerate(els)}
    sys = lp.system(var.values())
    for x in els:
        if upper is not None:
            sys.add({var[x]: 1}, "<=", upper)
    for i, x in enumerate(els):
        for y in els[i + 1:]:
            mid = inst.mix(x, Fraction(1, 2), y)
            sys.add({var[x]: 1, var[y]: -1}, "=", 0)
            if mid != x:
                sys.add({var[x]: 1, var[mid]: -1}, "=", 0)
    if monotone:
        for x, y in inst.space.pairs():
            if x != y:
                sys.add({var[x]: 1, var[y]: -1}, "<=", 0)
    if linear:
        if not inst.pointed:
            raise UnsupportedInstance("linear maps need a pointed instance")
        sys.add({var[inst.bottom]: 1}, "=", 0)
    return sys, var


def verify_barycenter_choquet(inst: AlgebraInstance, nu, x0) -> bool:
    """Is x0 a barycenter of nu, i.e. Λ(x0) = ∫Λ dν for every admissible Λ?

    Rational vectors: coordinate maps are affine and separate points, so the
    test is x0 = Σ a_i x_i.  Finite interval-flat instances: the functional
    Λ -> Λ(x0) − Σ a_i Λ(x_i) must vanish on the polytope of monotone affine
    maps bounded by 1 (linear ones when the mass is below 1).
    """
    pairs = weighted_pairs(nu)
    total = sum((a for a, _ in pairs), Fraction(0))
    if isinstance(inst, RationalConvex):
        if total != 1:
            raise PreconditionError(f"total mass {total} is not 1")
        for _, x in pairs:
            if not inst.contains(x):
                raise PreconditionError(f"{x!r} is not a point of the instance")
        target = tuple(sum((a * x[k] for a, x in pairs), Fraction(0)) for k in range(inst.dim))
        return tuple(x0) == target
    if inst.finite and inst.interval_flat:
        if total > 1 or (total < 1 and not inst.pointed):
            raise PreconditionError(f"total mass {total} not allowed for this instance")
        sys, var = affine_map_system(inst, upper=1, linear=total < 1)
        obj: dict[str, Fraction] = {var[x0]: Fraction(1)}
        for a, x in pairs:
            obj[var[x]] = obj.get(var[x], Fraction(0)) - a
        for sense in ("max", "min"):
            res = lp.optimize(sys, sense, obj)
            if not isinstance(res, lp.Optimum) or res.value != 0:
                return False
        return True
    raise UnsupportedInstance(f"no finite reduction for {inst.kind} instances")
