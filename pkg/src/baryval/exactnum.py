"""Exact nonnegative rationals extended with an infinite top element.

Rationals are plain :class:`fractions.Fraction` values (always reduced).
The infinite element is the singleton :data:`INF`; it compares above every
Fraction and absorbs addition, with the convention ``0 * INF == 0``.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Union

__all__ = [
    "INF", "XRat", "GRID", "rat", "unit", "xrat", "xr_add", "xr_mul",
    "xr_sum", "way_below", "parse_xrat", "format_xrat", "format_rat",
]


class _Infinity:
    __slots__ = ()
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "INF"

    def __reduce__(self):
        return (_Infinity, ())

    def __hash__(self):
        return hash("baryval.INF")

    def __eq__(self, other):
        return other is self

    def __lt__(self, other):
        if other is self or isinstance(other, (int, Fraction)):
            return False
        return NotImplemented

    def __le__(self, other):
        if other is self:
            return True
        if isinstance(other, (int, Fraction)):
            return False
        return NotImplemented

    def __gt__(self, other):
        if other is self:
            return False
        if isinstance(other, (int, Fraction)):
            return True
        return NotImplemented

    def __ge__(self, other):
        if other is self or isinstance(other, (int, Fraction)):
            return True
        return NotImplemented

    def __add__(self, other):
        if other is self or isinstance(other, (int, Fraction)):
            return self
        return NotImplemented

    __radd__ = __add__

    def __mul__(self, other):
        if other is self:
            return self
        if isinstance(other, (int, Fraction)):
            return Fraction(0) if other == 0 else self
        return NotImplemented

    __rmul__ = __mul__


INF = _Infinity()

XRat = Union[Fraction, _Infinity]

# Coefficient grid used by the law checkers.
GRID = tuple(Fraction(s) for s in ("0", "1/4", "1/3", "1/2", "2/3", "3/4", "1"))


def rat(value) -> Fraction:
    """Coerce to a nonnegative Fraction; strings like ``"3/4"`` are accepted."""
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, float):
        raise TypeError("floats are not accepted; pass a string or Fraction")
    q = Fraction(value)
    if q < 0:
        raise ValueError(f"negative rational {q}")
    return q


def unit(value) -> Fraction:
    """Coerce to a rational in [0, 1]."""
    q = rat(value)
    if q > 1:
        raise ValueError(f"{q} is not in [0, 1]")
    return q


def xrat(value) -> XRat:
    if value is INF:
        return INF
    if isinstance(value, str) and value.strip() in ("inf", "∞"):
        return INF
    return rat(value)


def xr_add(a: XRat, b: XRat) -> XRat:
    return a + b


def xr_mul(a: XRat, b: XRat) -> XRat:
    if a is INF or b is INF:
        return Fraction(0) if a == 0 or b == 0 else INF
    return a * b


def xr_sum(values) -> XRat:
    total: XRat = Fraction(0)
    for v in values:
        total = total + v
    return total


def way_below(s: XRat, t: XRat) -> bool:
    """The way-below relation on the extended nonnegative reals: s = 0 or s < t."""
    return s == 0 or s < t


def parse_xrat(text) -> XRat:
    """Parse ``"p/q"``, ``"p"`` or ``"inf"``; ints and Fractions pass through."""
    if isinstance(text, str):
        return xrat(text.strip())
    return xrat(text)


def format_rat(q: Fraction) -> str:
    q = Fraction(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def format_xrat(v: XRat) -> str:
    return "inf" if v is INF else format_rat(v)
