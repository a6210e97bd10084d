"""Convexity on barycentric algebras.

On a finite interval-flat instance every "for all a in [0, 1]" condition
collapses to a statement about the midpoint operation m, so hulls,
convexity tests, concavity tests and the sandwich problem all become finite
set computations or exact LPs.  Rational vector instances get generator
representations with LP membership instead.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from . import lp
from .baryalg import AlgebraInstance, RationalConvex, affine_map_system
from .errors import PreconditionError, UnsupportedInstance
from .exactnum import GRID, INF, XRat, unit, xr_mul
from .finspace import OpenSet
from .free import ConifyElem
from .valuation import (Decomposition, SimpleValuation, check_lattice,
                        schroder_simpson_split, second_split)

__all__ = [
    "ConvexSet", "conv", "upconv", "closed_conv", "is_convex", "is_halfspace",
    "is_concave", "is_convex_map", "is_semiconcave", "minkowski_of_semiconcave",
    "upmix", "check_strong_consistency", "consistency_witness",
    "SeparationResult", "is_linearly_separated", "sandwich",
]


def _flat(inst: AlgebraInstance):
    if not (inst.finite and inst.interval_flat):
        raise UnsupportedInstance(f"{inst.kind} instance is not finite and interval-flat")


def _finite(inst: AlgebraInstance):
    if not inst.finite:
        raise UnsupportedInstance(f"{inst.kind} instance has no finite carrier")


def _m(inst, x, y):
    return inst.mix(x, Fraction(1, 2), y)


def _members(inst, A) -> frozenset:
    s = frozenset(A)
    bad = [x for x in s if not inst.contains(x)]
    if bad:
        raise KeyError(f"not elements of the instance: {bad!r}")
    return s


@dataclass(frozen=True)
class ConvexSet:
    """Either an explicit member set (finite instances) or a generator list
    whose convex hull is tested by LP (rational vectors)."""

    inst: AlgebraInstance
    members: frozenset | None = None
    generators: tuple | None = None

    def __contains__(self, x) -> bool:
        if self.members is not None:
            return x in self.members
        return _in_hull(self.inst, self.generators, x)

    def __iter__(self):
        if self.members is None:
            raise TypeError("generator-represented convex sets are not enumerable")
        if self.inst.finite:
            return (x for x in self.inst.elements if x in self.members)
        return iter(sorted(self.members, key=self.inst.sort_key))

    def __len__(self):
        if self.members is None:
            raise TypeError("generator-represented convex sets are not enumerable")
        return len(self.members)

    def sorted(self) -> list:
        return list(self)


def _in_hull(inst: RationalConvex, gens: Sequence[tuple], x) -> bool:
    if not gens:
        return False
    names = [f"w{i}" for i in range(len(gens))]
    sys = lp.system(names)
    sys.add({n: 1 for n in names}, "=", 1)
    for k in range(inst.dim):
        sys.add({n: g[k] for n, g in zip(names, gens)}, "=", x[k])
    return lp.feasible(sys) is not lp.Infeasible


def _closure(inst, A) -> frozenset:
    out = set(A)
    frontier = list(out)
    while frontier:
        fresh = []
        for x in frontier:
            for y in list(out):
                z = _m(inst, x, y)
                if z not in out:
                    out.add(z)
                    fresh.append(z)
        frontier = fresh
    return frozenset(out)


def conv(inst: AlgebraInstance, A: Iterable) -> ConvexSet:
    """Convex hull: closure under m on finite interval-flat instances,
    generator form on rational vectors."""
    if isinstance(inst, RationalConvex):
        gens = tuple(dict.fromkeys(inst.point(x) for x in A))
        return ConvexSet(inst, generators=gens)
    _flat(inst)
    return ConvexSet(inst, members=_closure(inst, _members(inst, A)))


def upconv(inst: AlgebraInstance, A: Iterable) -> ConvexSet:
    """Saturated convex hull ↑conv A."""
    _flat(inst)
    hull = conv(inst, A).members
    return ConvexSet(inst, members=inst.space.up_closure(hull))


def closed_conv(inst: AlgebraInstance, A: Iterable) -> ConvexSet:
    """Closed convex hull: the down-closure of conv A, checked convex."""
    _flat(inst)
    hull = conv(inst, A).members
    out = inst.space.down_closure(hull)
    if not is_convex(inst, out):
        raise PreconditionError("closure of a convex set is not convex; mix is not monotone",
                                sorted(out, key=inst.sort_key))
    return ConvexSet(inst, members=out)


def is_convex(inst: AlgebraInstance, A: Iterable) -> bool:
    _flat(inst)
    s = _members(inst, A)
    return all(_m(inst, x, y) in s for x in s for y in s)


def is_halfspace(inst: AlgebraInstance, A: Iterable) -> bool:
    _flat(inst)
    s = _members(inst, A)
    return is_convex(inst, s) and is_convex(inst, set(inst.elements) - s)


# ---------------------------------------------------------------------------
# maps into the extended nonnegative reals


def _values(inst, h) -> dict:
    f = h.__getitem__ if isinstance(h, Mapping) else h
    return {x: f(x) for x in inst.elements}


def _monotone(inst, v) -> bool:
    return all(v[x] <= v[y] for x, y in inst.space.pairs())


def is_concave(inst: AlgebraInstance, q) -> bool:
    """q(x +_a y) ≥ a q(x) + (1−a) q(y): on a flat instance q(m(x,y)) ≥ max."""
    _flat(inst)
    v = _values(inst, q)
    return all(v[_m(inst, x, y)] >= max(v[x], v[y]) for x in v for y in v)


def is_convex_map(inst: AlgebraInstance, p) -> bool:
    """p(x +_a y) ≤ a p(x) + (1−a) p(y): on a flat instance p(m(x,y)) ≤ min."""
    _flat(inst)
    v = _values(inst, p)
    return all(v[_m(inst, x, y)] <= min(v[x], v[y]) for x in v for y in v)


def is_semiconcave(inst: AlgebraInstance, h, sample=None, grid=GRID) -> bool:
    """h(x +_a y) ≥ a·h(x) for all a, and h monotone.

    Finite flat instances are checked exhaustively (the supremum over a < 1
    gives h(m(x, y)) ≥ h(x)); symbolic ones on the sampling schedule.
    """
    f = h.__getitem__ if isinstance(h, Mapping) else h
    if inst.finite and inst.interval_flat:
        v = _values(inst, f)
        return _monotone(inst, v) and all(v[_m(inst, x, y)] >= v[x] for x in v for y in v)
    elems = list(sample) if sample is not None else inst.sample()
    for x in elems:
        for y in elems:
            if inst.leq(x, y) and not f(x) <= f(y):
                return False
            for a in grid:
                a = unit(a)
                if not f(inst.mix(x, a, y)) >= xr_mul(a, f(x)):
                    return False
    return True


def minkowski_of_semiconcave(inst: AlgebraInstance, h, u: ConifyElem, sample=None) -> XRat:
    """h^cext(u): 0 at the zero, r·h(x) at (r, x).  This is the upper
    Minkowski functional of the cone open classified by h."""
    if not is_semiconcave(inst, h, sample):
        raise PreconditionError("map is not semi-concave")
    f = h.__getitem__ if isinstance(h, Mapping) else h
    if u.is_zero:
        return Fraction(0)
    return xr_mul(u.r, f(u.x))


# ---------------------------------------------------------------------------
# consistency


def upmix(inst: AlgebraInstance, U: Iterable, a, V: Iterable) -> frozenset:
    """↑{x +_a y | x ∈ U, y ∈ V}."""
    _finite(inst)
    a = unit(a)
    pts = {inst.mix(x, a, y) for x in U for y in V}
    return inst.space.up_closure(pts)


def check_strong_consistency(inst: AlgebraInstance, U, V, a) -> bool:
    """Whether ↑(U +_a V) is open.  In a finite Alexandroff model it always
    is; the check guards against invalid instances."""
    _flat(inst)
    for W in (U, V):
        s = W.members if isinstance(W, OpenSet) else frozenset(W)
        if not inst.space.is_upset(s):
            raise PreconditionError("input is not an open (upward-closed) set", sorted(s))
    up = upmix(inst, U, a, V)
    return inst.space.is_upset(up)


def consistency_witness(mu: SimpleValuation, nu: SimpleValuation, varpi: SimpleValuation,
                        a, c, lattice: Sequence[OpenSet]) -> Decomposition:
    """Valuations mu', nu' with mu' + nu' ≤ varpi pointwise, c·a·mu ≤ mu' and
    c·(1−a)·nu ≤ nu' on the lattice, and totals c·a·mu(X), c·(1−a)·nu(X).

    First split varpi between m = c·a·mu and n = c·(1−a)·nu, then shrink each
    part so its total matches exactly.
    """
    a, c = unit(a), unit(c)
    if not (0 < a < 1 and 0 < c < 1):
        raise PreconditionError("a and c must lie strictly between 0 and 1")
    check_lattice(varpi.space, lattice)
    m = mu.scale(c * a)
    n = nu.scale(c * (1 - a))
    mu1, nu1 = second_split(m, n, varpi, lattice)
    mu2 = schroder_simpson_split(m, mu1, lattice).first
    nu2 = schroder_simpson_split(n, nu1, lattice).first
    return Decomposition(mu2, nu2)


# ---------------------------------------------------------------------------
# separation and the sandwich problem


@dataclass(frozen=True)
class SeparationResult:
    separated: bool
    counterexample: tuple | None = None

    def __bool__(self):
        return self.separated


def is_linearly_separated(inst: AlgebraInstance, points: Sequence | None = None) -> SeparationResult:
    """Whenever x ≰ y, is there a monotone affine h with h(x) > h(y)?

    Finite flat instances: one LP per incomparable pair.  Rational vectors
    (restricted to ``points``): coordinate maps always do the job.
    """
    if isinstance(inst, RationalConvex):
        pts = list(points or [])
        for x in pts:
            for y in pts:
                if not inst.leq(x, y) and not any(u > v for u, v in zip(x, y)):
                    return SeparationResult(False, (x, y))
        return SeparationResult(True)
    _flat(inst)
    sys, var = affine_map_system(inst, upper=1)
    for x in inst.elements:
        for y in inst.elements:
            if inst.leq(x, y):
                continue
            res = lp.optimize(sys, "max", {var[x]: 1, var[y]: -1})
            if not (isinstance(res, lp.Optimum) and res.value > 0):
                return SeparationResult(False, (x, y))
    return SeparationResult(True)


def sandwich(inst: AlgebraInstance, q, p, validate: bool = True):
    """A monotone affine h with q ≤ h ≤ p, found by exact LP.

    With ``validate`` the inputs are checked first (q concave and monotone,
    p convex, q ≤ p, finite rational values) and existence is guaranteed;
    :data:`lp.Infeasible` can only come back when validation is skipped.
    """
    _flat(inst)
    qv, pv = _values(inst, q), _values(inst, p)
    for name, v in (("q", qv), ("p", pv)):
        for x, val in v.items():
            if val is INF:
                raise PreconditionError(f"{name}({x}) is infinite", x)
            if Fraction(val) < 0:
                raise PreconditionError(f"{name}({x}) is negative", x)
    if validate:
        if not _monotone(inst, qv):
            raise PreconditionError("q is not monotone")
        if not is_concave(inst, qv):
            raise PreconditionError("q is not concave")
        if not is_convex_map(inst, pv):
            raise PreconditionError("p is not convex")
        for x in inst.elements:
            if qv[x] > pv[x]:
                raise PreconditionError(f"q({x}) > p({x})", x)
    sys, var = affine_map_system(inst, upper=None)
    for x in inst.elements:
        sys.add({var[x]: 1}, ">=", qv[x])
        sys.add({var[x]: 1}, "<=", pv[x])
    sol = lp.feasible(sys)
    if sol is lp.Infeasible:
        if validate:
            raise AssertionError("validated sandwich instance has no solution")
        return lp.Infeasible
    return {x: sol[var[x]] for x in inst.elements}
