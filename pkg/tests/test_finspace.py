import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from baryval.errors import PreconditionError, SpaceMismatch
from baryval.finspace import (FinPoset, OpenSet, classify, crescent_partition, generate_lattice,
                              saturate)
from helpers import DIAMOND, brute_upsets, labeled_posets, random_poset


def test_saturate_examples():
    C = FinPoset.chain(["a", "b", "c"])
    assert saturate(C, {"a"}).members == {"a", "b", "c"}
    assert saturate(C, set()).members == frozenset()
    assert saturate(DIAMOND, {"a"}).members == {"a", "top"}
    with pytest.raises(KeyError):
        saturate(C, {"zz"})


def test_generate_lattice_examples():
    C = FinPoset.chain(["a", "b"])
    assert [u.sorted() for u in generate_lattice(C, [])] == [[], ["a", "b"]]
    assert [u.sorted() for u in generate_lattice(C, [C.open({"b"})])] == [[], ["b"], ["a", "b"]]
    A = FinPoset.antichain(["x", "y"])
    lat = generate_lattice(A, [A.open({"x"}), A.open({"y"})])
    assert {u.members for u in lat} == {frozenset(), frozenset("x"), frozenset("y"), frozenset("xy")}


def test_crescent_examples():
    C = FinPoset.chain(["a", "b"])
    cres = {c.label: c.members for c in crescent_partition(C, [C.open({"b"})])}
    assert cres == {frozenset(): {"a"}, frozenset({0}): {"b"}}
    (only,) = crescent_partition(C, [])
    assert only.label == frozenset() and only.members == {"a", "b"}
    A = FinPoset.antichain(["x", "y"])
    cres = {c.label: c.members for c in crescent_partition(A, [A.open({"x"}), A.open({"y"})])}
    assert cres == {frozenset(): frozenset(), frozenset({0}): {"x"}, frozenset({1}): {"y"},
                    frozenset({0, 1}): frozenset()}
    assert len(crescent_partition(A, [A.open({"x"}), A.open({"y"})], include_empty=False)) == 2


def test_validation():
    with pytest.raises(ValueError):
        FinPoset(["a", "b"], [("a", "b"), ("b", "a")])
    with pytest.raises(ValueError):
        FinPoset(["a", "a"])
    with pytest.raises(PreconditionError):
        OpenSet(DIAMOND, frozenset({"a"}))
    other = FinPoset.chain(["a", "b"])
    with pytest.raises(SpaceMismatch):
        DIAMOND.whole() | other.whole()


def test_order_queries():
    assert DIAMOND.least() == "bot" and DIAMOND.greatest() == "top"
    assert DIAMOND.join("a", "b") == "top"
    assert FinPoset.antichain(["x", "y"]).join("x", "y") is None
    assert DIAMOND.minimal({"a", "b", "top"}) == ["a", "b"]
    assert set(DIAMOND.covers()) == {("bot", "a"), ("bot", "b"), ("a", "top"), ("b", "top")}
    assert FinPoset.from_json(DIAMOND.to_json()) == DIAMOND
    assert DIAMOND.subspace(["a", "top"]).leq("a", "top")


def test_transitive_closure_from_covers():
    C = FinPoset(["a", "b", "c"], [("a", "b"), ("b", "c")])
    assert C.leq("a", "c") and not C.leq("c", "a")


def test_opens_match_bruteforce_on_all_small_posets():
    for n in range(4):
        for P in labeled_posets(n):
            assert sorted(map(sorted, (u.members for u in P.opens()))) == \
                sorted(map(sorted, brute_upsets(P)))


@given(st.integers(0, 10 ** 6), st.integers(1, 6), st.integers(0, 3))
def test_lattice_and_partition_invariants(seed, n, k):
    rng = random.Random(seed)
    P = random_poset(rng, n)
    opens = [saturate(P, [x for x in P if rng.random() < 0.3]) for _ in range(k)]
    lat = generate_lattice(P, opens)
    fam = {u.members for u in lat}
    assert len(fam) == len(lat)
    assert all(a | b in fam and a & b in fam for a in fam for b in fam)
    assert {u.members for u in opens} <= fam
    assert len(lat) <= 2 ** (2 ** k)
    cres = crescent_partition(P, opens)
    assert len(cres) == 2 ** k
    seen = set()
    for c in cres:
        assert not (seen & c.members)
        seen |= c.members
    assert seen == set(P.elements)
    f = classify(P, opens)
    for c in cres:
        assert all(f[x] == c.label for x in c.members)


@given(st.integers(0, 10 ** 6), st.integers(1, 6))
def test_alexandroff_duality(seed, n):
    rng = random.Random(seed)
    P = random_poset(rng, n)
    for s in brute_upsets(P):
        OpenSet(P, s)
        assert P.is_downset(set(P.elements) - s)
