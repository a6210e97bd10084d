"""Random generators and independent oracles shared by the tests.

The oracles deliberately avoid the package's own machinery (no
``FinPoset.opens``, no simplex) so they can catch mistakes in it.
"""

from __future__ import annotations

import random
from fractions import Fraction
from functools import lru_cache
from itertools import combinations, permutations, product

from baryval.baryalg import FlatAlgebra, Semilattice
from baryval.finspace import FinPoset, OpenSet, generate_lattice
from baryval.valuation import SimpleValuation

DIAMOND = FinPoset(["bot", "a", "b", "top"],
                   [("bot", "a"), ("bot", "b"), ("a", "top"), ("b", "top")])


def names(n):
    return [f"p{i}" for i in range(n)]


# ---------------------------------------------------------------------------
# posets


def _closed(n, rel):
    return all((i, k) in rel for i, j in rel for j2, k in rel if j == j2)


def labeled_posets(n: int) -> list[FinPoset]:
    """Every partial order on n labeled points."""
    off = [(i, j) for i in range(n) for j in range(n) if i != j]
    out = []
    for bits in product((0, 1), repeat=len(off)):
        rel = {p for p, b in zip(off, bits) if b}
        if any((j, i) in rel for i, j in rel):
            continue
        if not _closed(n, rel):
            continue
        els = names(n)
        out.append(FinPoset(els, [(els[i], els[j]) for i, j in rel]))
    return out


def _canon(n, rel):
    return min(tuple(sorted((p[i], p[j]) for i, j in rel)) for p in permutations(range(n)))


@lru_cache(maxsize=None)
def unlabeled_posets(n: int) -> tuple:
    """One representative per isomorphism class, via natural labelings."""
    upper = [(i, j) for i in range(n) for j in range(i + 1, n)]
    seen, out = set(), []
    for bits in product((0, 1), repeat=len(upper)):
        rel = {p for p, b in zip(upper, bits) if b}
        if not _closed(n, rel):
            continue
        key = _canon(n, rel)
        if key in seen:
            continue
        seen.add(key)
        els = names(n)
        out.append(FinPoset(els, [(els[i], els[j]) for i, j in rel]))
    return tuple(out)


@lru_cache(maxsize=None)
def small_semilattices(max_n: int = 5) -> tuple:
    """All join-semilattices with 1..max_n elements up to isomorphism."""
    out = []
    for n in range(1, max_n + 1):
        for P in unlabeled_posets(n):
            if all(P.join(x, y) is not None for x in P for y in P):
                out.append(Semilattice(P))
    return tuple(out)


def random_poset(rng: random.Random, n: int, p: float = 0.35) -> FinPoset:
    els = names(n)
    perm = els[:]
    rng.shuffle(perm)
    rel = [(perm[i], perm[j]) for i in range(n) for j in range(i + 1, n) if rng.random() < p]
    return FinPoset(els, rel)


def random_semilattice(rng: random.Random, atoms: int = 3, gens: int = 3) -> Semilattice:
    """Union-closed family of random subsets, ordered by inclusion."""
    family = set()
    for _ in range(gens):
        family.add(frozenset(i for i in range(atoms) if rng.random() < 0.5))
    changed = True
    while changed:
        changed = False
        for a in list(family):
            for b in list(family):
                if a | b not in family:
                    family.add(a | b)
                    changed = True
    fam = sorted(family, key=lambda s: (len(s), sorted(s)))
    label = {s: "s" + "".join(map(str, sorted(s))) for s in fam}
    P = FinPoset([label[s] for s in fam],
                 [(label[a], label[b]) for a in fam for b in fam if a < b])
    return Semilattice(P)


def random_flat(rng: random.Random) -> FlatAlgebra:
    """A random semilattice table with a random compatible order (the
    midpoint operation must be monotone for it)."""
    S = random_semilattice(rng, atoms=rng.randint(2, 3), gens=rng.randint(2, 4))
    els = S.elements
    for _ in range(20):
        rel = [(x, y) for x in els for y in els if x != y and rng.random() < 0.3]
        try:
            P = FinPoset(els, rel)
        except ValueError:
            continue
        mono = all(P.leq(S.m(x, z), S.m(y, z)) for x, y in P.pairs() for z in els)
        if mono:
            return FlatAlgebra(els, S.table, P)
    return FlatAlgebra(els, S.table, FinPoset.antichain(els))


# ---------------------------------------------------------------------------
# valuations


def random_rat(rng: random.Random, den: int = 8, top: int = 8) -> Fraction:
    return Fraction(rng.randint(0, top), rng.randint(1, den))


def random_valuation(rng: random.Random, space: FinPoset, density: float = 0.6) -> SimpleValuation:
    return SimpleValuation(space, {x: random_rat(rng) for x in space if rng.random() < density})


def random_probability(rng: random.Random, space: FinPoset) -> SimpleValuation:
    while True:
        nu = random_valuation(rng, space)
        if nu.total():
            return nu.scale(1 / nu.total())


def push_up(rng: random.Random, nu: SimpleValuation) -> SimpleValuation:
    """Move every mass to a random point above it and maybe add mass, giving
    something stochastically above nu."""
    out = {}
    for x, m in nu.masses.items():
        y = rng.choice(sorted(nu.space.up(x)))
        out[y] = out.get(y, 0) + m
    for x in nu.space:
        if rng.random() < 0.2:
            out[x] = out.get(x, 0) + random_rat(rng)
    return SimpleValuation(nu.space, out)


def push_down(rng: random.Random, nu: SimpleValuation) -> SimpleValuation:
    """Move every mass to a random point below it and keep a random fraction
    of it, giving something below nu on every upset."""
    out = {}
    for x, m in nu.masses.items():
        y = rng.choice(sorted(nu.space.down(x)))
        out[y] = out.get(y, 0) + m * Fraction(rng.randint(1, 4), 4)
    return SimpleValuation(nu.space, out)


def random_opens(rng: random.Random, space: FinPoset, k: int) -> list[OpenSet]:
    out = []
    for _ in range(k):
        seeds = [x for x in space if rng.random() < 0.3]
        out.append(OpenSet(space, space.up_closure(seeds)))
    return out


def random_lattice(rng: random.Random, space: FinPoset, max_gens: int = 3, min_gens: int = 0):
    return generate_lattice(space, random_opens(rng, space, rng.randint(min_gens, max_gens)))


# ---------------------------------------------------------------------------
# oracles


def brute_upsets(space: FinPoset) -> list[frozenset]:
    """Every upward-closed subset, by filtering all 2^n subsets with the raw
    order relation."""
    els = list(space.elements)
    out = []
    for bits in product((0, 1), repeat=len(els)):
        s = {x for x, b in zip(els, bits) if b}
        if all(y in s for x in s for y in els if space.leq(x, y)):
            out.append(frozenset(s))
    return out


def brute_mass(nu: SimpleValuation, s) -> Fraction:
    return sum((m for x, m in nu.masses.items() if x in s), Fraction(0))


def brute_stochastic_le(mu: SimpleValuation, nu: SimpleValuation) -> bool:
    return all(brute_mass(mu, u) <= brute_mass(nu, u) for u in brute_upsets(mu.space))


def layer_cake(nu: SimpleValuation, h: dict):
    """∫_0^∞ nu(h > t) dt for finite nonnegative h, summed over the
    breakpoints of h."""
    levels = sorted(set(h.values()) | {Fraction(0)})
    total = Fraction(0)
    for lo, hi in zip(levels, levels[1:]):
        total += (hi - lo) * brute_mass(nu, {x for x in h if h[x] > lo})
    return total


def fourier_motzkin_feasible(sys) -> bool:
    """Feasibility by eliminating variables one at a time from a list of
    inequalities  sum c_v x_v <= b."""
    rows = []
    for con in sys.constraints:
        c = {v: Fraction(a) for v, a in con.coeffs.items()}
        if con.rel in ("<=", "="):
            rows.append((c, con.rhs))
        if con.rel in (">=", "="):
            rows.append(({v: -a for v, a in c.items()}, -con.rhs))
    for v in sys.variables:
        if v not in sys.free:
            rows.append(({v: Fraction(-1)}, Fraction(0)))
    for v in sys.variables:
        pos = [(c, b) for c, b in rows if c.get(v, 0) > 0]
        neg = [(c, b) for c, b in rows if c.get(v, 0) < 0]
        rest = [(c, b) for c, b in rows if c.get(v, 0) == 0]
        for cp, bp in pos:
            for cn, bn in neg:
                sp, sn = cp[v], -cn[v]
                c = {}
                for w in set(cp) | set(cn):
                    if w == v:
                        continue
                    val = cp.get(w, 0) / sp + cn.get(w, 0) / sn
                    if val:
                        c[w] = val
                rest.append((c, bp / sp + bn / sn))
        rows = rest
    return all(b >= 0 for c, b in rows)


def grid_barycenters(inst, A) -> set:
    """Barycenters of every non-empty subfamily of A with positive weights:
    grid weights where they fit, uniform weights otherwise."""
    from baryval.baryalg import barycenter

    A = list(A)
    out = set()
    for k in range(1, len(A) + 1):
        for S in combinations(A, k):
            out.add(barycenter(inst, [(Fraction(1, k), x) for x in S]))
            for w in product([Fraction(1, 4), Fraction(1, 3), Fraction(1, 2), Fraction(2, 3),
                              Fraction(3, 4)], repeat=k):
                if sum(w) == 1:
                    out.add(barycenter(inst, list(zip(w, S))))
    return out
