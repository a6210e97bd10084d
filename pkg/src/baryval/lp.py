"""Exact rational linear programming.

A two-phase primal simplex over :class:`fractions.Fraction` with Bland's
pivoting rule, so it always terminates and is fully deterministic.  Sizes are
desk scale (tens of variables); no attempt is made at sparse or revised
variants.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping

log = logging.getLogger(__name__)

__all__ = [
    "Constraint", "LinearSystem", "Solution", "Infeasible", "Optimum",
    "Unbounded", "feasible", "optimize", "format_tableau",
]

RELATIONS = ("<=", "=", ">=")


@dataclass(frozen=True)
class Constraint:
    coeffs: Mapping[str, Fraction]
    rel: str
    rhs: Fraction

    def holds(self, values: Mapping[str, Fraction]) -> bool:
        lhs = sum((Fraction(c) * values[v] for v, c in self.coeffs.items()), Fraction(0))
        if self.rel == "<=":
            return lhs <= self.rhs
        if self.rel == ">=":
            return lhs >= self.rhs
        return lhs == self.rhs


@dataclass
class LinearSystem:
    """Variables are nonnegative unless listed in ``free``."""

    variables: list[str]
    constraints: list[Constraint] = field(default_factory=list)
    free: set[str] = field(default_factory=set)
    objective: dict[str, Fraction] | None = None

    def add(self, coeffs: Mapping[str, object], rel: str, rhs) -> None:
        if rel not in RELATIONS:
            raise ValueError(f"unknown relation {rel!r}")
        unknown = [v for v in coeffs if v not in self._varset()]
        if unknown:
            raise ValueError(f"unknown variables {unknown!r}")
        row = {v: Fraction(c) for v, c in coeffs.items() if Fraction(c) != 0}
        self.constraints.append(Constraint(row, rel, Fraction(rhs)))

    def _varset(self) -> set:
        return set(self.variables)

    def validate(self) -> None:
        if len(set(self.variables)) != len(self.variables):
            raise ValueError("duplicate variable names")
        names = self._varset()
        for con in self.constraints:
            if con.rel not in RELATIONS:
                raise ValueError(f"unknown relation {con.rel!r}")
            if not set(con.coeffs) <= names:
                raise ValueError("constraint mentions undeclared variables")
        if not self.free <= names:
            raise ValueError("free set mentions undeclared variables")
        if self.objective is not None and not set(self.objective) <= names:
            raise ValueError("objective mentions undeclared variables")

    def satisfied_by(self, values: Mapping[str, Fraction]) -> bool:
        if any(values[v] < 0 for v in self.variables if v not in self.free):
            return False
        return all(con.holds(values) for con in self.constraints)


@dataclass(frozen=True)
class Solution:
    values: dict[str, Fraction]

    def __getitem__(self, name: str) -> Fraction:
        return self.values[name]


class _InfeasibleType:
    _inst = None

    def __new__(cls):
        if cls._inst is None:
            cls._inst = super().__new__(cls)
        return cls._inst

    def __repr__(self):
        return "Infeasible"

    def __bool__(self):
        return False


Infeasible = _InfeasibleType()


@dataclass(frozen=True)
class Optimum:
    value: Fraction
    point: Solution


@dataclass(frozen=True)
class Unbounded:
    """``point`` is feasible and ``point + t * ray`` stays feasible for every
    t >= 0 while the objective improves without bound."""

    point: Solution
    ray: dict[str, Fraction]


# ---------------------------------------------------------------------------
# tableau machinery


class _Tableau:
    def __init__(self, rows, rhs, basis, ncols):
        self.rows = rows          # list[list[Fraction]]
        self.rhs = rhs            # list[Fraction]
        self.basis = basis        # list[int]
        self.ncols = ncols

    def pivot(self, r: int, c: int) -> None:
        row = self.rows[r]
        piv = row[c]
        if piv != 1:
            inv = 1 / piv
            self.rows[r] = row = [v * inv for v in row]
            self.rhs[r] *= inv
        for i, other in enumerate(self.rows):
            if i == r:
                continue
            f = other[c]
            if f:
                self.rows[i] = [a - f * b for a, b in zip(other, row)]
                self.rhs[i] -= f * self.rhs[r]
        self.basis[r] = c

    def values(self) -> list[Fraction]:
        x = [Fraction(0)] * self.ncols
        for i, b in enumerate(self.basis):
            x[b] = self.rhs[i]
        return x


def _minimize(tab: _Tableau, cost: list[Fraction], allowed: int):
    """Bland's-rule simplex on ``tab`` minimising ``cost``; only columns
    below ``allowed`` may enter.  Returns None at optimum or the entering
    column index when the objective is unbounded."""
    while True:
        cb = [cost[b] for b in tab.basis]
        entering = None
        for j in range(allowed):
            if j in tab.basis:
                continue
            red = cost[j] - sum((cb[i] * tab.rows[i][j] for i in range(len(cb))
                                 if tab.rows[i][j]), Fraction(0))
            if red < 0:
                entering = j
                break
        if entering is None:
            return None
        best = None
        for i, row in enumerate(tab.rows):
            a = row[entering]
            if a > 0:
                ratio = tab.rhs[i] / a
                key = (ratio, tab.basis[i])
                if best is None or key < best[0]:
                    best = (key, i)
        if best is None:
            return entering
        if log.isEnabledFor(logging.DEBUG):
            log.debug("pivot row %d col %d\n%s", best[1], entering, format_tableau(tab))
        tab.pivot(best[1], entering)


def format_tableau(tab: _Tableau) -> str:
    lines = []
    for b, row, r in zip(tab.basis, tab.rows, tab.rhs):
        lines.append(f"x{b:<3}| " + " ".join(f"{str(v):>6}" for v in row) + f" | {r}")
    return "\n".join(lines)


def _standard_form(sys: LinearSystem):
    """Columns: structural (free vars split in two), then slacks, then
    artificials.  Returns the phase-1 tableau plus bookkeeping."""
    sys.validate()
    cols: list[tuple[str, int]] = []
    colmap: dict[str, list[tuple[int, int]]] = {}
    for v in sys.variables:
        colmap[v] = [(len(cols), 1)]
        cols.append((v, 1))
        if v in sys.free:
            colmap[v].append((len(cols), -1))
            cols.append((v, -1))
    nstruct = len(cols)
    rows_spec = []
    for con in sys.constraints:
        coeff = [Fraction(0)] * nstruct
        for v, c in con.coeffs.items():
            for idx, sign in colmap[v]:
                coeff[idx] += sign * c
        rel, rhs = con.rel, con.rhs
        if rhs < 0:
            coeff = [-c for c in coeff]
            rhs = -rhs
            rel = {"<=": ">=", ">=": "<=", "=": "="}[rel]
        rows_spec.append((coeff, rel, rhs))
    nslack = sum(1 for _, rel, _ in rows_spec if rel != "=")
    nart = sum(1 for _, rel, _ in rows_spec if rel != "<=")
    ncols = nstruct + nslack + nart
    rows, rhs, basis = [], [], []
    s = nstruct
    a = nstruct + nslack
    for coeff, rel, b in rows_spec:
        row = coeff + [Fraction(0)] * (nslack + nart)
        if rel == "<=":
            row[s] = Fraction(1)
            basis.append(s)
            s += 1
        elif rel == ">=":
            row[s] = Fraction(-1)
            s += 1
            row[a] = Fraction(1)
            basis.append(a)
            a += 1
        else:
            row[a] = Fraction(1)
            basis.append(a)
            a += 1
        rows.append(row)
        rhs.append(b)
    tab = _Tableau(rows, rhs, basis, ncols)
    return tab, cols, colmap, nstruct, nstruct + nslack


def _phase_one(tab: _Tableau, first_art: int) -> bool:
    cost = [Fraction(0)] * first_art + [Fraction(1)] * (tab.ncols - first_art)
    _minimize(tab, cost, tab.ncols)
    if any(tab.rhs[i] != 0 for i, b in enumerate(tab.basis) if b >= first_art):
        return False
    # drive remaining (zero-valued) artificials out of the basis
    i = 0
    while i < len(tab.basis):
        if tab.basis[i] >= first_art:
            col = next((j for j in range(first_art)
                        if tab.rows[i][j] != 0 and j not in tab.basis), None)
            if col is None:
                del tab.rows[i], tab.rhs[i], tab.basis[i]
                continue
            tab.pivot(i, col)
        i += 1
    return True


def _extract(sys: LinearSystem, x: list[Fraction], colmap) -> Solution:
    return Solution({v: sum((sign * x[idx] for idx, sign in colmap[v]), Fraction(0))
                     for v in sys.variables})


def _solve(sys: LinearSystem, objective: dict[str, Fraction] | None, maximize: bool):
    tab, cols, colmap, nstruct, first_art = _standard_form(sys)
    if not _phase_one(tab, first_art):
        return Infeasible
    if objective is None:
        sol = _extract(sys, tab.values(), colmap)
        assert sys.satisfied_by(sol.values)
        return sol
    sign = -1 if maximize else 1
    cost = [Fraction(0)] * tab.ncols
    for v, c in objective.items():
        for idx, s in colmap[v]:
            cost[idx] += sign * s * Fraction(c)
    entering = _minimize(tab, cost, first_art)
    sol = _extract(sys, tab.values(), colmap)
    assert sys.satisfied_by(sol.values)
    if entering is not None:
        d = [Fraction(0)] * tab.ncols
        d[entering] = Fraction(1)
        for i, b in enumerate(tab.basis):
            d[b] = -tab.rows[i][entering]
        ray = {v: sum((s * d[idx] for idx, s in colmap[v]), Fraction(0))
               for v in sys.variables}
        return Unbounded(sol, ray)
    value = sum((Fraction(c) * sol[v] for v, c in objective.items()), Fraction(0))
    return Optimum(value, sol)


def feasible(sys: LinearSystem):
    """A :class:`Solution` satisfying every constraint exactly, or
    :data:`Infeasible`."""
    return _solve(sys, None, False)


def optimize(sys: LinearSystem, sense: str = "max", objective: Mapping | None = None):
    """Optimise ``objective`` (default ``sys.objective``) over the system.

    Returns :class:`Optimum`, :class:`Unbounded` or :data:`Infeasible`.
    """
    if sense not in ("max", "min"):
        raise ValueError("sense must be 'max' or 'min'")
    obj = objective if objective is not None else sys.objective
    if obj is None:
        raise ValueError("no objective given")
    obj = {v: Fraction(c) for v, c in obj.items()}
    if not set(obj) <= set(sys.variables):
        raise ValueError("objective mentions undeclared variables")
    return _solve(sys, obj, sense == "max")


def system(variables: Iterable[str], free: Iterable[str] = ()) -> LinearSystem:
    return LinearSystem(list(variables), free=set(free))
