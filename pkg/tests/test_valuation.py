import random
from fractions import Fraction as F

import pytest
from hypothesis import given
from hypothesis import strategies as st

from baryval.errors import PreconditionError, SpaceMismatch
from baryval.exactnum import INF
from baryval.finspace import FinPoset, crescent_partition, generate_lattice
from baryval.valuation import (SimpleValuation, choquet_integral, constrict, edalat_to_prob,
                               edalat_to_sub, eval_table, evaluate, image_valuation, integrate,
                               masses_from_table, schroder_simpson_split, second_split,
                               stochastic_le)
from helpers import (DIAMOND, brute_mass, brute_stochastic_le, brute_upsets, layer_cake, push_up,
                     random_lattice, random_poset, random_valuation)

CHAIN = FinPoset.chain(["a", "b"])
seeds = st.integers(0, 10 ** 9)


def V(space, **m):
    return SimpleValuation(space, {k: F(v) for k, v in m.items()})


def test_eval_examples():
    d = SimpleValuation.dirac(DIAMOND, "a")
    assert evaluate(d, DIAMOND.open({"a", "top"})) == 1
    assert evaluate(d, DIAMOND.open({"b", "top"})) == 0
    assert evaluate(SimpleValuation.zero(DIAMOND), DIAMOND.whole()) == 0
    nu = V(CHAIN, a="1/2", b="1/3")
    assert evaluate(nu, CHAIN.open({"b"})) == F(1, 3)
    with pytest.raises(SpaceMismatch):
        evaluate(nu, DIAMOND.whole())


def test_integrate_examples():
    assert integrate(SimpleValuation.dirac(CHAIN, "b"), {"a": F(5), "b": F(7)}) == 7
    nu = V(CHAIN, a="1/2", b="1/2")
    h = {"a": F(1), "b": F(3)}
    assert integrate(nu, h) == 2 == layer_cake(nu, h)
    assert integrate(nu, lambda x: INF) is INF
    assert integrate(SimpleValuation.zero(CHAIN), lambda x: INF) == 0


def test_stochastic_examples():
    res = stochastic_le(V(CHAIN, a=1), V(CHAIN, b=1))
    assert res.related and dict(res.witness.entries) == {("a", "b"): 1}
    res = stochastic_le(V(CHAIN, b=1), V(CHAIN, a=1))
    assert not res.related and res.violation.members == {"b"}
    A = FinPoset.antichain(["x", "y"])
    res = stochastic_le(V(A, x="1/2", y="1/2"), V(A, x=1))
    assert not res.related and res.violation.members == {"y"}


def test_image_valuation_examples():
    nu = V(DIAMOND, a="1/2", b="1/4", bot="1/4")
    assert image_valuation({x: x for x in DIAMOND}, nu, DIAMOND) == nu
    assert image_valuation(lambda x: "top", nu, DIAMOND) == SimpleValuation.dirac(DIAMOND, "top")
    with pytest.raises(PreconditionError):
        image_valuation({"bot": "top", "a": "a", "b": "b", "top": "top"}, nu, DIAMOND)


def test_image_along_classification():
    C = FinPoset.chain(["a", "b", "c"])
    opens = [C.open({"b", "c"}), C.open({"c"})]
    labels = crescent_partition(C, opens)
    M = FinPoset([str(sorted(c.label)) for c in labels],
                 [(str(sorted(c.label)), str(sorted(d.label))) for c in labels for d in labels
                  if c.label <= d.label])
    f = {x: str(sorted(c.label)) for c in labels for x in c.members}
    mu = V(C, a="1/2", b="1/8", c="1/3")
    img = image_valuation(f, mu, M)
    assert img.masses == {"[]": F(1, 2), "[0]": F(1, 8), "[0, 1]": F(1, 3)}


def test_constrict_examples():
    nu = V(CHAIN, a="1/2", b="1/3")
    assert constrict(nu, CHAIN.elements) == nu
    assert constrict(nu, []) == SimpleValuation.zero(CHAIN)
    assert constrict(nu, {"b"}) == V(CHAIN, b="1/3")


def test_masses_from_table_examples():
    assert masses_from_table(CHAIN, eval_table(V(CHAIN, b=1))) == V(CHAIN, b=1)
    zero = {u.members: 0 for u in CHAIN.opens()}
    assert masses_from_table(CHAIN, zero) == SimpleValuation.zero(CHAIN)
    nu = V(DIAMOND, a="1/2", top="1/2")
    assert masses_from_table(DIAMOND, eval_table(nu)) == nu


def test_masses_from_table_rejects_bad_tables():
    good = eval_table(V(DIAMOND, a="1/2", top="1/2"))
    bad = dict(good)
    bad[frozenset()] = F(1, 8)
    with pytest.raises(PreconditionError, match="strict"):
        masses_from_table(DIAMOND, bad)
    bad = dict(good)
    bad[frozenset({"top"})] = F(1)
    with pytest.raises(PreconditionError):
        masses_from_table(DIAMOND, bad)
    bad = {u: F(1) for u in good}
    bad[frozenset()] = bad[frozenset({"top"})] = F(0)
    with pytest.raises(PreconditionError, match="modular"):
        masses_from_table(DIAMOND, bad)
    with pytest.raises(PreconditionError, match="cover"):
        masses_from_table(DIAMOND, {frozenset(): 0})


def test_first_split_examples():
    lat = generate_lattice(CHAIN, [CHAIN.open({"b"})])
    nu1, nu2 = schroder_simpson_split(V(CHAIN, a=1), V(CHAIN, b=2), lat)
    assert nu1 == V(CHAIN, b=1) and nu2 == V(CHAIN, b=1)
    nu = V(CHAIN, a="1/2", b="1/3")
    assert tuple(schroder_simpson_split(nu, nu, lat)) == (nu, SimpleValuation.zero(CHAIN))
    assert tuple(schroder_simpson_split(SimpleValuation.zero(CHAIN), nu, lat)) == \
        (SimpleValuation.zero(CHAIN), nu)


def test_first_split_reports_violating_member():
    lat = generate_lattice(CHAIN, [CHAIN.open({"b"})])
    with pytest.raises(PreconditionError) as exc:
        schroder_simpson_split(V(CHAIN, b=1), V(CHAIN, a=1), lat)
    assert exc.value.witness.members == {"b"}
    with pytest.raises(PreconditionError, match="whole space"):
        schroder_simpson_split(V(CHAIN, a=1), V(CHAIN, b=1), [CHAIN.open({"b"})])


def test_second_split_examples():
    lat = generate_lattice(CHAIN, [CHAIN.open({"b"})])
    zero = SimpleValuation.zero(CHAIN)
    assert tuple(second_split(zero, zero, V(CHAIN, b=1), lat)) == (zero, zero)
    mu, nu = second_split(V(CHAIN, a="1/2"), V(CHAIN, a="1/2"), V(CHAIN, b=2), lat)
    assert (mu, nu) == (V(CHAIN, b="1/2"), V(CHAIN, b="1/2"))
    mu, nu = second_split(V(CHAIN, a=1), zero, V(CHAIN, b=2), lat)
    assert nu == zero and mu.total() >= 1


def test_edalat_examples():
    sub = edalat_to_sub(SimpleValuation.dirac(DIAMOND, "bot"))
    assert sub.total() == 0 and "bot" not in sub.space
    half = V(DIAMOND, bot="1/2", a="1/2")
    assert edalat_to_sub(half).masses == {"a": F(1, 2)}
    assert edalat_to_prob(edalat_to_sub(half), DIAMOND) == half
    assert edalat_to_sub(V(DIAMOND, a=1)).masses == {"a": 1}
    with pytest.raises(PreconditionError):
        edalat_to_sub(V(DIAMOND, a="1/2"))
    with pytest.raises(PreconditionError):
        edalat_to_sub(V(FinPoset.antichain(["x", "y"]), x=1))


def test_valuation_json_and_arith():
    nu = V(DIAMOND, a="1/2", top="1/3")
    assert SimpleValuation.from_json(nu.to_json(with_space=True)) == nu
    assert nu + nu == nu.scale(2)
    assert (nu + nu) - nu == nu
    with pytest.raises(ValueError):
        nu - nu.scale(2)
    assert V(DIAMOND, a=0).masses == {}


# ---------------------------------------------------------------------------
# properties


@given(seeds, st.integers(1, 5))
def test_stochastic_order_matches_bruteforce(seed, n):
    rng = random.Random(seed)
    P = random_poset(rng, n)
    mu = random_valuation(rng, P)
    nu = push_up(rng, mu) if rng.random() < 0.5 else random_valuation(rng, P)
    res = stochastic_le(mu, nu)
    assert res.related == brute_stochastic_le(mu, nu)
    if res.related:
        assert res.witness.violations(mu.masses, nu.masses, P.leq) == []
    else:
        assert evaluate(mu, res.violation) > evaluate(nu, res.violation)


@given(seeds, st.integers(1, 5))
def test_eval_is_strict_modular_monotone(seed, n):
    rng = random.Random(seed)
    P = random_poset(rng, n)
    nu = random_valuation(rng, P)
    ups = brute_upsets(P)
    assert evaluate(nu, frozenset()) == 0
    for u in ups:
        for v in ups:
            assert evaluate(nu, u) + evaluate(nu, v) == evaluate(nu, u | v) + evaluate(nu, u & v)
            if u <= v:
                assert evaluate(nu, u) <= evaluate(nu, v)


@given(seeds, st.integers(1, 5))
def test_table_roundtrips(seed, n):
    rng = random.Random(seed)
    P = random_poset(rng, n)
    nu = random_valuation(rng, P)
    table = eval_table(nu)
    assert masses_from_table(P, table) == nu
    assert eval_table(masses_from_table(P, table)) == table


@given(seeds, st.integers(1, 5))
def test_change_of_variables(seed, n):
    rng = random.Random(seed)
    P = random_poset(rng, n)
    Q = random_poset(rng, rng.randint(1, 4))
    # monotone map: send each point to the least-indexed point above the
    # image of everything below it, which is monotone by construction
    f = {}
    for x in sorted(P, key=lambda x: len(P.down(x))):
        below = [f[y] for y in P.down(x) if y != x]
        cands = [q for q in Q if all(Q.leq(b, q) for b in below)]
        if not cands:
            return
        f[x] = rng.choice(cands)
    nu = random_valuation(rng, P)
    h = {q: F(rng.randint(0, 5)) for q in Q}
    for x, y in Q.pairs():
        h[y] = max(h[y], h[x])
    for q in sorted(Q, key=lambda q: len(Q.down(q))):
        h[q] = max([h[q]] + [h[p] for p in Q.down(q)])
    img = image_valuation(f, nu, Q)
    assert integrate(img, h) == integrate(nu, lambda x: h[f[x]])
    assert choquet_integral(img, h) == integrate(img, h) == layer_cake(img, h)
    for u in brute_upsets(Q):
        assert evaluate(img, u) == brute_mass(nu, {x for x in P if f[x] in u})


def _scaled_below(mu, nu, lattice):
    """Largest t <= 1 with t·mu <= nu on the lattice."""
    t = F(1)
    for u in lattice:
        m = evaluate(mu, u)
        if m:
            t = min(t, evaluate(nu, u) / m)
    return mu.scale(t)


@given(seeds, st.integers(1, 6))
def test_first_split_post(seed, n):
    rng = random.Random(seed)
    P = random_poset(rng, n)
    lat = random_lattice(rng, P)
    nu = random_valuation(rng, P)
    mu = _scaled_below(random_valuation(rng, P), nu, lat)
    d = schroder_simpson_split(mu, nu, lat)
    assert d.first + d.second == nu
    assert d.first.total() == mu.total()
    assert all(evaluate(mu, u) <= evaluate(d.first, u) for u in lat)
    assert all(0 <= c <= 1 for c in d.coefficients.values())


@given(seeds, st.integers(1, 6))
def test_second_split_post(seed, n):
    rng = random.Random(seed)
    P = random_poset(rng, n)
    lat = random_lattice(rng, P)
    w = random_valuation(rng, P)
    both = _scaled_below(random_valuation(rng, P) + random_valuation(rng, P), w, lat)
    # split the scaled sum into two pieces pointwise
    mu = SimpleValuation(P, {x: m * F(rng.randint(0, 4), 4) for x, m in both.masses.items()})
    nu = both - mu
    m1, n1 = second_split(mu, nu, w, lat)
    for u in brute_upsets(P):
        assert evaluate(m1, u) + evaluate(n1, u) <= evaluate(w, u)
    for u in lat:
        assert evaluate(mu, u) <= evaluate(m1, u)
        assert evaluate(nu, u) <= evaluate(n1, u)
