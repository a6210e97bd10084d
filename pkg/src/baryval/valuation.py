"""Simple valuations on finite spaces.

On a finite space every valuation is a finite sum of point masses, so a
:class:`SimpleValuation` is just a mapping point -> nonnegative rational.
Besides evaluation and integration this module decides the stochastic order
(with a transport-matrix witness), pushes valuations forward, constricts them
to crescents, and implements the two decomposition lemmas used to build
consistency witnesses.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Callable, Hashable, Iterable, Mapping, Sequence

from . import lp
from .errors import PreconditionError, SpaceMismatch
from .exactnum import INF, XRat, format_rat, rat, xr_mul, xr_sum
from .finspace import Crescent, FinPoset, OpenSet, classify

__all__ = [
    "SimpleValuation", "TransportMatrix", "OrderResult", "Decomposition",
    "evaluate", "integrate", "choquet_integral", "transport", "stochastic_le",
    "image_valuation", "constrict", "masses_from_table", "eval_table",
    "schroder_simpson_split", "second_split", "edalat_to_sub", "edalat_to_prob",
    "check_lattice",
]


class SimpleValuation:
    """Finite sum of point masses on a :class:`FinPoset`; zero masses are dropped."""

    __slots__ = ("space", "masses")

    def __init__(self, space: FinPoset, masses: Mapping[str, object] | None = None):
        clean = {}
        for x, m in (masses or {}).items():
            if x not in space:
                raise KeyError(f"unknown point {x!r}")
            q = rat(m)
            if q:
                clean[x] = clean.get(x, Fraction(0)) + q
        self.space = space
        self.masses = {x: clean[x] for x in space.elements if x in clean}

    @classmethod
    def _trusted(cls, space: FinPoset, masses: dict) -> "SimpleValuation":
        """Skip validation for masses already known to be positive Fractions
        on points of the space."""
        out = cls.__new__(cls)
        out.space = space
        out.masses = {x: masses[x] for x in space.elements if masses.get(x)}
        return out

    @classmethod
    def dirac(cls, space: FinPoset, x: str, weight=1) -> "SimpleValuation":
        return cls(space, {x: weight})

    @classmethod
    def zero(cls, space: FinPoset) -> "SimpleValuation":
        return cls(space, {})

    @classmethod
    def from_json(cls, obj: Mapping, space: FinPoset | None = None) -> "SimpleValuation":
        if "space" in obj and isinstance(obj["space"], Mapping):
            space = FinPoset.from_json(obj["space"])
        if space is None:
            raise ValueError("valuation JSON needs a space")
        return cls(space, dict(obj.get("masses", {})))

    def to_json(self, with_space: bool = False) -> dict:
        out = {"masses": {x: format_rat(m) for x, m in self.masses.items()}}
        if with_space:
            out["space"] = self.space.to_json()
        return out

    def mass(self, x: str) -> Fraction:
        return self.masses.get(x, Fraction(0))

    def support(self) -> list[str]:
        return list(self.masses)

    def total(self) -> Fraction:
        return sum(self.masses.values(), Fraction(0))

    def __call__(self, subset) -> Fraction:
        return evaluate(self, subset)

    def _same(self, other: "SimpleValuation"):
        if self.space != other.space:
            raise SpaceMismatch("valuations live on different spaces")

    def __add__(self, other: "SimpleValuation") -> "SimpleValuation":
        self._same(other)
        out = dict(self.masses)
        for x, m in other.masses.items():
            out[x] = out.get(x, Fraction(0)) + m
        return SimpleValuation._trusted(self.space, out)

    def __sub__(self, other: "SimpleValuation") -> "SimpleValuation":
        """Pointwise difference; raises if some mass would become negative."""
        self._same(other)
        out = dict(self.masses)
        for x, m in other.masses.items():
            out[x] = out.get(x, Fraction(0)) - m
            if out[x] < 0:
                raise ValueError(f"negative mass at {x!r}")
        return SimpleValuation(self.space, out)

    def scale(self, a) -> "SimpleValuation":
        a = rat(a)
        return SimpleValuation._trusted(self.space, {x: a * m for x, m in self.masses.items()})

    __rmul__ = scale

    def __le__(self, other: "SimpleValuation") -> bool:
        """Pointwise (not stochastic) comparison of masses."""
        self._same(other)
        return all(m <= other.mass(x) for x, m in self.masses.items())

    def __eq__(self, other):
        if not isinstance(other, SimpleValuation):
            return NotImplemented
        return self.space == other.space and self.masses == other.masses

    def __hash__(self):
        return hash((self.space, tuple(self.masses.items())))

    def __repr__(self):
        if not self.masses:
            return "0"
        return " + ".join(f"{format_rat(m)}·δ_{x}" for x, m in self.masses.items())


def _members(nu: SimpleValuation, subset) -> frozenset:
    if isinstance(subset, OpenSet):
        if subset.space != nu.space:
            raise SpaceMismatch("open set from another space")
        return subset.members
    if isinstance(subset, Crescent):
        return subset.members
    s = frozenset(subset)
    unknown = [x for x in s if x not in nu.space]
    if unknown:
        raise KeyError(f"unknown points {sorted(unknown)!r}")
    return s


def evaluate(nu: SimpleValuation, subset) -> Fraction:
    """Mass of an open set (or of any subset of points)."""
    s = _members(nu, subset)
    return sum((m for x, m in nu.masses.items() if x in s), Fraction(0))


def integrate(nu: SimpleValuation, h: Callable[[str], XRat] | Mapping[str, XRat]) -> XRat:
    """Sum of mass(x) * h(x) with 0 * inf = 0."""
    f = h.__getitem__ if isinstance(h, Mapping) else h
    return xr_sum(xr_mul(m, f(x)) for x, m in nu.masses.items())


def choquet_integral(nu: SimpleValuation, h: Callable[[str], XRat] | Mapping[str, XRat]) -> XRat:
    """Layer-cake formula: integral over t of nu(h > t).  Meant for monotone h,
    where every superlevel set is open."""
    f = h.__getitem__ if isinstance(h, Mapping) else h
    values = {x: f(x) for x in nu.space.elements}
    levels = sorted(set(v for v in values.values() if v != 0), key=lambda v: (v is INF, v))
    total: XRat = Fraction(0)
    prev = Fraction(0)
    for t in levels:
        above = evaluate(nu, [x for x, v in values.items() if v >= t])
        if t is INF:
            if above:
                return INF
            break
        total += (t - prev) * above
        prev = t
    return total


# ---------------------------------------------------------------------------
# transport matrices and the stochastic order


@dataclass(frozen=True)
class TransportMatrix:
    rows: tuple
    cols: tuple
    entries: Mapping[tuple, Fraction]

    def row_sum(self, r) -> Fraction:
        return sum((v for (i, _), v in self.entries.items() if i == r), Fraction(0))

    def col_sum(self, c) -> Fraction:
        return sum((v for (_, j), v in self.entries.items() if j == c), Fraction(0))

    def violations(self, source: Mapping, target: Mapping,
                   le: Callable[[Hashable, Hashable], bool]) -> list[str]:
        """Conditions (a) support on le-related pairs, (b) row sums equal the
        source masses, (c) column sums bounded by the target masses."""
        out = []
        for (i, j), v in self.entries.items():
            if v < 0:
                out.append(f"negative entry at {i!r}->{j!r}")
            if v != 0 and not le(i, j):
                out.append(f"entry {i!r}->{j!r} on an unrelated pair")
        for i in set(self.rows) | set(source):
            if self.row_sum(i) != source.get(i, 0):
                out.append(f"row {i!r} sums to {self.row_sum(i)} instead of {source.get(i, 0)}")
        for j in set(self.cols) | {j for _, j in self.entries}:
            if self.col_sum(j) > target.get(j, 0):
                out.append(f"column {j!r} exceeds {target.get(j, 0)}")
        return out

    def to_json(self, key=str) -> list:
        return [[key(i), key(j), format_rat(v)] for (i, j), v in self.entries.items() if v]


def transport(source: Mapping, target: Mapping, le: Callable) -> TransportMatrix | None:
    """A transport matrix from ``source`` masses to ``target`` masses supported
    on ``le``-related pairs, or None when none exists."""
    rows = [i for i, m in source.items() if m]
    cols = [j for j, m in target.items() if m]
    pairs = [(r, c) for r, i in enumerate(rows) for c, j in enumerate(cols) if le(i, j)]
    names = [f"t{r}_{c}" for r, c in pairs]
    sys = lp.system(names)
    for r, i in enumerate(rows):
        sys.add({f"t{r}_{c}": 1 for rr, c in pairs if rr == r}, "=", source[i])
    for c, j in enumerate(cols):
        sys.add({f"t{r}_{c}": 1 for r, cc in pairs if cc == c}, "<=", target[j])
    sol = lp.feasible(sys)
    if sol is lp.Infeasible:
        return None
    entries = {(rows[r], cols[c]): sol[f"t{r}_{c}"] for r, c in pairs if sol[f"t{r}_{c}"]}
    tm = TransportMatrix(tuple(rows), tuple(cols), entries)
    bad = tm.violations(source, target, le)
    if bad:
        raise AssertionError(f"LP returned an invalid transport matrix: {bad}")
    return tm


@dataclass(frozen=True)
class OrderResult:
    related: bool
    witness: TransportMatrix | None = None
    violation: OpenSet | None = None

    def __bool__(self):
        return self.related


def stochastic_le(mu: SimpleValuation, nu: SimpleValuation) -> OrderResult:
    """Decide mu <= nu in the stochastic order.

    When related, ``witness`` is a transport matrix from the masses of mu to
    those of nu; otherwise ``violation`` is an open U with mu(U) > nu(U).
    """
    mu._same(nu)
    space = mu.space
    tm = transport(mu.masses, nu.masses, space.leq)
    if tm is not None:
        return OrderResult(True, witness=tm)
    supp = mu.support()
    for k in range(1, len(supp) + 1):
        for chosen in combinations(supp, k):
            u = OpenSet(space, space.up_closure(chosen))
            if evaluate(mu, u) > evaluate(nu, u):
                return OrderResult(False, violation=u)
    raise AssertionError("transport infeasible but no violating open found")


def image_valuation(f: Mapping[str, str] | Callable[[str], str], nu: SimpleValuation,
                    target: FinPoset) -> SimpleValuation:
    """Push ``nu`` forward along a monotone map into ``target``."""
    g = f.__getitem__ if isinstance(f, Mapping) else f
    src = nu.space
    image = {x: g(x) for x in src.elements}
    for y in image.values():
        if y not in target:
            raise KeyError(f"map lands outside the target: {y!r}")
    for x, y in src.pairs():
        if not target.leq(image[x], image[y]):
            raise PreconditionError(f"map is not monotone on {x!r} <= {y!r}", (x, y))
    out: dict[str, Fraction] = {}
    for x, m in nu.masses.items():
        out[image[x]] = out.get(image[x], Fraction(0)) + m
    return SimpleValuation(target, out)


def constrict(nu: SimpleValuation, crescent) -> SimpleValuation:
    """U -> nu(U ∩ C), i.e. keep only the masses sitting inside C."""
    members = _members(nu, crescent)
    return SimpleValuation(nu.space, {x: m for x, m in nu.masses.items() if x in members})


def eval_table(nu: SimpleValuation) -> dict[frozenset, Fraction]:
    return {u.members: evaluate(nu, u) for u in nu.space.opens()}


def masses_from_table(space: FinPoset, table: Mapping) -> SimpleValuation:
    """Recover point masses from the values of a valuation on every open.

    The table must be strict, monotone and modular; the mass at x is
    table(↑x) - table(↑x minus x).
    """
    tab = {}
    for key, v in table.items():
        members = key.members if isinstance(key, OpenSet) else frozenset(key)
        tab[members] = Fraction(v)
    opens = [u.members for u in space.opens()]
    missing = [sorted(u) for u in opens if u not in tab]
    if missing:
        raise PreconditionError("table does not cover every open", missing[0])
    extra = [sorted(k) for k in tab if k not in set(opens)]
    if extra:
        raise PreconditionError("table has a key that is not open", extra[0])
    if tab[frozenset()] != 0:
        raise PreconditionError("table is not strict", [])
    for u in opens:
        if tab[u] < 0:
            raise PreconditionError("negative table value", sorted(u))
    for u in opens:
        for v in opens:
            if u <= v and tab[u] > tab[v]:
                raise PreconditionError("table is not monotone", (sorted(u), sorted(v)))
            if tab[u] + tab[v] != tab[u | v] + tab[u & v]:
                raise PreconditionError("table is not modular", (sorted(u), sorted(v)))
    masses = {}
    for x in space.elements:
        up = space.up(x)
        m = tab[up] - tab[up - {x}]
        if m < 0:
            raise PreconditionError(f"negative mass at {x!r}", x)
        masses[x] = m
    nu = SimpleValuation(space, masses)
    assert all(evaluate(nu, u) == tab[u] for u in opens)
    return nu


# ---------------------------------------------------------------------------
# decomposition lemmas


def check_lattice(space: FinPoset, lattice: Sequence[OpenSet]) -> list[OpenSet]:
    """Validate that ``lattice`` contains X and is closed under binary unions
    and intersections; returns it deduplicated."""
    members = {u.members for u in lattice}
    for u in lattice:
        if u.space != space:
            raise SpaceMismatch("lattice member from another space")
    if frozenset(space.elements) not in members:
        raise PreconditionError("lattice must contain the whole space")
    for a in members:
        for b in members:
            if a | b not in members or a & b not in members:
                raise PreconditionError("family is not closed under union/intersection",
                                        (sorted(a), sorted(b)))
    seen, out = set(), []
    for u in lattice:
        if u.members not in seen:
            seen.add(u.members)
            out.append(u)
    return out


@dataclass
class Decomposition:
    """Result of a splitting lemma.  Iterates as the pair of valuations so it
    can be unpacked directly."""

    first: SimpleValuation
    second: SimpleValuation
    coefficients: dict = field(default_factory=dict)
    transport: TransportMatrix | None = None

    def __iter__(self):
        yield self.first
        yield self.second


def _crescents(space: FinPoset, lattice: Sequence[OpenSet]) -> dict[frozenset, frozenset]:
    """Non-empty crescents keyed by their label (set of lattice indices)."""
    f = classify(space, lattice)
    out: dict[frozenset, set] = {}
    for x in space.elements:
        out.setdefault(f[x], set()).add(x)
    return {lab: frozenset(pts) for lab, pts in out.items()}


def _require_dominated(lhs: Callable[[OpenSet], Fraction], rhs: Callable[[OpenSet], Fraction],
                       lattice: Sequence[OpenSet], what: str):
    for u in lattice:
        if lhs(u) > rhs(u):
            raise PreconditionError(f"{what} fails on lattice member {u.sorted()}", u)


def schroder_simpson_split(mu: SimpleValuation, nu: SimpleValuation,
                           lattice: Sequence[OpenSet]) -> Decomposition:
    """Split nu = nu1 + nu2 so that mu(U) <= nu1(U) on the lattice and
    nu1(X) = mu(X); nu1 and nu2 are combinations of constrictions of nu to
    the crescents of the lattice."""
    mu._same(nu)
    space = nu.space
    lattice = check_lattice(space, lattice)
    _require_dominated(mu, nu, lattice, "mu(U) <= nu(U)")
    cres = _crescents(space, lattice)
    a = {lab: evaluate(mu, c) for lab, c in cres.items()}
    b = {lab: evaluate(nu, c) for lab, c in cres.items()}
    tm = transport(a, b, lambda i, j: i <= j)
    if tm is None:
        raise AssertionError("image valuations not stochastically ordered")
    coeff = {lab: (tm.col_sum(lab) / b[lab] if b[lab] else Fraction(0)) for lab in cres}
    first = {}
    for lab, members in cres.items():
        for x in members:
            first[x] = coeff[lab] * nu.mass(x)
    nu1 = SimpleValuation(space, first)
    return Decomposition(nu1, nu - nu1, coeff, tm)


def second_split(mu: SimpleValuation, nu: SimpleValuation, varpi: SimpleValuation,
                 lattice: Sequence[OpenSet]) -> Decomposition:
    """From mu(U) + nu(U) <= varpi(U) on the lattice, build mu', nu' with
    mu' + nu' <= varpi everywhere and mu <= mu', nu <= nu' on the lattice."""
    mu._same(nu)
    mu._same(varpi)
    space = varpi.space
    lattice = check_lattice(space, lattice)
    _require_dominated(lambda u: evaluate(mu, u) + evaluate(nu, u), varpi, lattice,
                       "mu(U) + nu(U) <= varpi(U)")
    cres = _crescents(space, lattice)
    a = {lab: evaluate(mu, c) for lab, c in cres.items()}
    b = {lab: evaluate(nu, c) for lab, c in cres.items()}
    c = {lab: evaluate(varpi, m) for lab, m in cres.items()}
    tm = transport({lab: a[lab] + b[lab] for lab in cres}, c, lambda i, j: i <= j)
    if tm is None:
        raise AssertionError("image valuations not stochastically ordered")
    u_col: dict[frozenset, Fraction] = {lab: Fraction(0) for lab in cres}
    v_col: dict[frozenset, Fraction] = {lab: Fraction(0) for lab in cres}
    for (i, j), t in tm.entries.items():
        s = a[i] + b[i]
        if s:
            u_col[j] += a[i] / s * t
            v_col[j] += b[i] / s * t
    a_prime = {lab: (u_col[lab] / c[lab] if c[lab] else Fraction(0)) for lab in cres}
    b_prime = {lab: (v_col[lab] / c[lab] if c[lab] else Fraction(0)) for lab in cres}
    first, second = {}, {}
    for lab, members in cres.items():
        for x in members:
            first[x] = a_prime[lab] * varpi.mass(x)
            second[x] = b_prime[lab] * varpi.mass(x)
    return Decomposition(SimpleValuation(space, first), SimpleValuation(space, second),
                         {"a": a_prime, "b": b_prime}, tm)


# ---------------------------------------------------------------------------
# Edalat's isomorphism


def _bottom(space: FinPoset) -> str:
    bot = space.least()
    if bot is None:
        raise PreconditionError("space has no least element")
    return bot


def edalat_to_sub(nu: SimpleValuation) -> SimpleValuation:
    """Probability valuation on a pointed space -> subprobability valuation on
    the space with its least point removed."""
    bot = _bottom(nu.space)
    if nu.total() != 1:
        raise PreconditionError(f"total mass is {nu.total()}, not 1")
    sub = nu.space.subspace(x for x in nu.space.elements if x != bot)
    return SimpleValuation(sub, {x: m for x, m in nu.masses.items() if x != bot})


def edalat_to_prob(nu_sub: SimpleValuation, space: FinPoset) -> SimpleValuation:
    """Inverse of :func:`edalat_to_sub`: the missing mass goes to the bottom."""
    bot = _bottom(space)
    if nu_sub.space != space.subspace(x for x in space.elements if x != bot):
        raise SpaceMismatch("valuation does not live on the space minus its bottom")
    deficit = 1 - nu_sub.total()
    if deficit < 0:
        raise PreconditionError(f"total mass {nu_sub.total()} exceeds 1")
    masses = dict(nu_sub.masses)
    masses[bot] = deficit
    return SimpleValuation(space, masses)


def valuations_equal_on(mu: SimpleValuation, nu: SimpleValuation,
                        opens: Iterable[OpenSet]) -> bool:
    return all(evaluate(mu, u) == evaluate(nu, u) for u in opens)
