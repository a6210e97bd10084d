"""Free constructions over barycentric algebras.

``conify(B)`` is the free cone: formal pairs (r, x) with r > 0 plus a zero.
``conify_{≤1}(B)`` is the part of level at most 1, the free pointed algebra.
The telescope ``tscope_α(B)`` is the free cone over a pointed algebra: pairs
(n, x) modulo (n, x) ≡ (n+1, α·x).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Callable

from .baryalg import RATIONAL_CONE, AlgebraInstance, ConeOps, scalar
from .errors import BoundExceeded, PreconditionError, SpaceMismatch, UnsupportedInstance
from .exactnum import format_rat, rat, unit

__all__ = [
    "ConifyElem", "conify_zero", "conify_eta", "conify_pair", "conify_add",
    "conify_smul", "conify_mix", "conify_le", "conify_extend", "level",
    "conify_le1_member", "conify_le1_mix", "conify_le1_extend",
    "Telescope", "TelescopeElem", "tele_equiv", "tele_canonicalize", "tele_mix",
    "tele_smul", "tele_add", "tele_le", "tele_extend",
]


# ---------------------------------------------------------------------------
# conify(B)


@dataclass(frozen=True)
class ConifyElem:
    """``r == 0`` encodes the zero of the cone (then ``x`` is None)."""

    inst: AlgebraInstance
    r: Fraction
    x: Any = None

    def __post_init__(self):
        if self.r < 0:
            raise ValueError("negative level")
        if self.r == 0 and self.x is not None:
            object.__setattr__(self, "x", None)

    @property
    def is_zero(self) -> bool:
        return self.r == 0

    def to_json(self) -> dict:
        if self.is_zero:
            return {"zero": True}
        return {"r": format_rat(self.r), "x": self.inst.encode(self.x)}

    @classmethod
    def from_json(cls, inst: AlgebraInstance, obj) -> "ConifyElem":
        if obj.get("zero"):
            return conify_zero(inst)
        r = rat(obj["r"])
        if r == 0:
            raise ValueError("pairs need a positive level; use {\"zero\": true}")
        return cls(inst, r, inst.decode(obj["x"]))

    def __repr__(self):
        return "0" if self.is_zero else f"({format_rat(self.r)}, {self.x!r})"


def conify_zero(inst: AlgebraInstance) -> ConifyElem:
    return ConifyElem(inst, Fraction(0))


def conify_eta(inst: AlgebraInstance, x) -> ConifyElem:
    return ConifyElem(inst, Fraction(1), x)


def conify_pair(inst: AlgebraInstance, r, x) -> ConifyElem:
    r = rat(r)
    return ConifyElem(inst, r, x if r else None)


def _same(u: ConifyElem, v: ConifyElem):
    if u.inst != v.inst:
        raise SpaceMismatch("cone elements over different algebras")


def conify_add(u: ConifyElem, v: ConifyElem) -> ConifyElem:
    """(r, x) + (s, y) = (r+s, x +_{r/(r+s)} y); 0 is neutral."""
    _same(u, v)
    if u.is_zero:
        return v
    if v.is_zero:
        return u
    t = u.r + v.r
    return ConifyElem(u.inst, t, u.inst.mix(u.x, u.r / t, v.x))


def conify_smul(a, u: ConifyElem) -> ConifyElem:
    a = rat(a)
    if a == 0 or u.is_zero:
        return conify_zero(u.inst)
    return ConifyElem(u.inst, a * u.r, u.x)


def conify_mix(u: ConifyElem, a, v: ConifyElem) -> ConifyElem:
    a = unit(a)
    return conify_add(conify_smul(a, u), conify_smul(1 - a, v))


def level(u: ConifyElem) -> Fraction:
    return u.r


def conify_le(u: ConifyElem, v: ConifyElem) -> bool:
    """The cone preorder: u ≤ v iff u = 0, or v = (s, y) and u + u' = (s, y1)
    with y1 ≤ y for some u'.

    For (r, x) and (s, y) with r < s this asks for some x' with
    x +_{r/s} x' ≤ y; the instance supplies the search (exhaustive on finite
    carriers, closed form on symbolic ones).
    """
    _same(u, v)
    if u.is_zero:
        return True
    if v.is_zero:
        return False
    if u.r > v.r:
        return False
    if u.r == v.r:
        return u.inst.leq(u.x, v.x)
    return u.inst.conify_witness(u.x, u.r / v.r, v.x) is not None


def conify_extend(f: Callable[[Any], Any], cone: ConeOps = RATIONAL_CONE) -> Callable[[ConifyElem], Any]:
    """The linear extension f^cext: 0 -> 0, (r, x) -> r·f(x)."""
    def ext(u: ConifyElem):
        if u.is_zero:
            return cone.zero
        return cone.smul(u.r, f(u.x))
    return ext


def conify_le1_member(u: ConifyElem) -> bool:
    return u.r <= 1


def conify_le1_mix(u: ConifyElem, a, v: ConifyElem) -> ConifyElem:
    for w in (u, v):
        if not conify_le1_member(w):
            raise PreconditionError(f"{w!r} has level above 1", w)
    return conify_mix(u, a, v)


def conify_le1_extend(f: Callable[[Any], Any], target: AlgebraInstance) -> Callable[[ConifyElem], Any]:
    """Extension of f: B -> C (C pointed) to conify_{≤1}(B): 0 -> ⊥ and
    (r, x) -> r·f(x) computed in C."""
    if not target.pointed:
        raise UnsupportedInstance("target algebra must be pointed")

    def ext(u: ConifyElem):
        if not conify_le1_member(u):
            raise PreconditionError(f"{u!r} has level above 1", u)
        if u.is_zero:
            return target.bottom
        return scalar(target, u.r, f(u.x))
    return ext


# ---------------------------------------------------------------------------
# the telescope


@dataclass(frozen=True)
class TelescopeElem:
    """A class [(n, x)]_α stored in canonical form (see
    :meth:`Telescope.canonicalize`)."""

    tele: "Telescope"
    n: int
    x: Any

    def to_json(self) -> dict:
        return {"n": self.n, "x": self.tele.inst.encode(self.x), "alpha": format_rat(self.tele.alpha)}

    def __repr__(self):
        return f"[({self.n}, {self.x!r})]"


class Telescope:
    """Operations on tscope_α(B) for a pointed instance B.

    Finite carriers decide everything by walking α-orbits until a state
    repeats.  Symbolic instances must declare ``stable_depth`` d (after d
    steps α· is injective and reflects the order) and a preimage oracle.
    """

    def __init__(self, inst: AlgebraInstance, alpha=Fraction(1, 2), cap: int = 64):
        alpha = unit(alpha)
        if not 0 < alpha < 1:
            raise ValueError("alpha must lie strictly between 0 and 1")
        if not inst.pointed:
            raise UnsupportedInstance(f"{inst.kind} instance is not pointed")
        self.inst = inst
        self.alpha = alpha
        self.cap = cap

    def __eq__(self, other):
        return (isinstance(other, Telescope) and other.inst == self.inst
                and other.alpha == self.alpha)

    def __hash__(self):
        return hash((self.inst, self.alpha))

    def __repr__(self):
        return f"Telescope({self.inst!r}, {format_rat(self.alpha)})"

    # -- helpers --------------------------------------------------------------

    def step(self, x, times: int = 1):
        for _ in range(times):
            x = scalar(self.inst, self.alpha, x)
        return x

    def _symbolic_depth(self) -> int:
        d = self.inst.stable_depth
        if d is None:
            raise BoundExceeded(f"{self.inst.kind} instance declares no stable depth")
        return d

    def _check(self, u: TelescopeElem):
        if u.tele != self:
            raise SpaceMismatch("telescope elements from a different telescope")

    # -- equivalence and canonical forms --------------------------------------

    def equiv(self, m: int, x, n: int, y) -> bool:
        """(m, x) ≡ (n, y): α^{k-m}·x = α^{k-n}·y for some k ≥ m, n."""
        inst = self.inst
        k = max(m, n)
        xs, ys = self.step(x, k - m), self.step(y, k - n)
        if not inst.finite:
            d = self._symbolic_depth()
            return inst.eq(self.step(xs, d), self.step(ys, d))
        seen = set()
        for _ in range(self.cap):
            if inst.eq(xs, ys):
                return True
            if (xs, ys) in seen:
                return False
            seen.add((xs, ys))
            xs, ys = self.step(xs), self.step(ys)
        raise BoundExceeded(f"no orbit cycle within {self.cap} steps")

    def same_level(self, z) -> list:
        """Every w with (n, w) ≡ (n, z), i.e. α^j·w = α^j·z for some j."""
        inst = self.inst
        if inst.finite:
            return [w for w in inst.elements if self.equiv(0, w, 0, z)]
        d = self._symbolic_depth()
        return inst.scalar_preimages(self.step(z, d), self.alpha ** d)

    def canonicalize(self, n: int, x) -> TelescopeElem:
        """Least level n0 carrying a representative, and the least
        representative there under the instance's sort key."""
        if n < 0:
            raise ValueError("levels are natural numbers")
        inst = self.inst
        for j in range(n + 1):
            if inst.finite:
                cands = [w for w in inst.elements if self.equiv(j, w, n, x)]
            else:
                d = self._symbolic_depth()
                cands = inst.scalar_preimages(self.step(x, d), self.alpha ** (n - j + d))
                cands = [w for w in cands if inst.contains(w)]
            if cands:
                return TelescopeElem(self, j, min(cands, key=inst.sort_key))
        raise AssertionError("the input pair is its own representative")

    def elem(self, n: int, x) -> TelescopeElem:
        return self.canonicalize(n, x)

    def eta(self, x) -> TelescopeElem:
        return self.canonicalize(0, x)

    def zero(self) -> TelescopeElem:
        return self.canonicalize(0, self.inst.bottom)

    # -- algebra ------------------------------------------------------------------

    def mix(self, u: TelescopeElem, a, v: TelescopeElem) -> TelescopeElem:
        self._check(u)
        self._check(v)
        a = unit(a)
        k = max(u.n, v.n)
        z = self.inst.mix(self.step(u.x, k - u.n), a, self.step(v.x, k - v.n))
        return self.canonicalize(k, z)

    def smul(self, a, u: TelescopeElem) -> TelescopeElem:
        """a·[(n, x)] = [(n+k, (α^k a)·x)] for the least k with α^k a ≤ 1."""
        self._check(u)
        a = rat(a)
        if a == 0:
            return self.zero()
        k = 0
        while self.alpha ** k * a > 1:
            k += 1
        return self.canonicalize(u.n + k, scalar(self.inst, self.alpha ** k * a, u.x))

    def add(self, u: TelescopeElem, v: TelescopeElem) -> TelescopeElem:
        return self.smul(2, self.mix(u, Fraction(1, 2), v))

    def cone(self) -> ConeOps:
        return ConeOps(add=self.add, smul=self.smul, zero=self.zero())

    def le(self, u: TelescopeElem, v: TelescopeElem) -> bool:
        """Search common levels for representatives x ≤ y, starting at the
        larger canonical level."""
        self._check(u)
        self._check(v)
        inst = self.inst
        k = max(u.n, v.n)
        xs, ys = self.step(u.x, k - u.n), self.step(v.x, k - v.n)

        def related(p, q):
            return any(inst.leq(a, b) for a in self.same_level(p) for b in self.same_level(q))

        if not inst.finite:
            for _ in range(self._symbolic_depth() + 2):
                if related(xs, ys):
                    return True
                xs, ys = self.step(xs), self.step(ys)
            return False
        seen = set()
        for _ in range(self.cap):
            if related(xs, ys):
                return True
            if (xs, ys) in seen:
                return False
            seen.add((xs, ys))
            xs, ys = self.step(xs), self.step(ys)
        raise BoundExceeded(f"no orbit cycle within {self.cap} steps")

    def extend(self, f: Callable[[Any], Any], cone: ConeOps = RATIONAL_CONE,
               sample=None) -> Callable[[TelescopeElem], Any]:
        """[(n, x)] -> (1/α)^n·f(x), after spot-checking f(α·x) = α·f(x)."""
        elems = list(sample) if sample is not None else self.inst.sample()
        for x in elems:
            if not cone.eq(f(self.step(x)), cone.smul(self.alpha, f(x))):
                raise PreconditionError("map does not commute with α·", x)
        inv = 1 / self.alpha

        def ext(u: TelescopeElem):
            self._check(u)
            return cone.smul(inv ** u.n, f(u.x))
        return ext

    def from_json(self, obj) -> TelescopeElem:
        if "alpha" in obj and Fraction(obj["alpha"]) != self.alpha:
            raise ValueError("element built for a different alpha")
        return self.canonicalize(int(obj["n"]), self.inst.decode(obj["x"]))


def tele_equiv(inst: AlgebraInstance, mx: tuple, ny: tuple, alpha=Fraction(1, 2)) -> bool:
    (m, x), (n, y) = mx, ny
    return Telescope(inst, alpha).equiv(m, x, n, y)


def tele_canonicalize(inst: AlgebraInstance, n: int, x, alpha=Fraction(1, 2)) -> TelescopeElem:
    return Telescope(inst, alpha).canonicalize(n, x)


def tele_mix(u: TelescopeElem, a, v: TelescopeElem) -> TelescopeElem:
    return u.tele.mix(u, a, v)


def tele_smul(a, u: TelescopeElem) -> TelescopeElem:
    return u.tele.smul(a, u)


def tele_add(u: TelescopeElem, v: TelescopeElem) -> TelescopeElem:
    return u.tele.add(u, v)


def tele_le(u: TelescopeElem, v: TelescopeElem) -> bool:
    return u.tele.le(u, v)


def tele_extend(tele: Telescope, f, cone: ConeOps = RATIONAL_CONE, sample=None):
    return tele.extend(f, cone, sample)
