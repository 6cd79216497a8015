import random
from functools import lru_cache

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cpaths.rewriting import normalize
from cpaths.terms import parse
from cpaths.trs2 import (
    DerivationError,
    Inv2,
    NotAnInterleaving,
    Refl2,
    Step,
    Vert2,
    canonical2,
    cd2_canonical,
    chain,
    endpoints2,
    interleaving_count,
    interleavings,
    leaves,
    normalize2,
    parse_derivation,
    random_derivation,
    rw2_equal,
    split_interleaving,
)

SS = Step(2, (), parse("sigma(sigma(a))"))
T = parse("tau(a,b)")


def steps_of(text):
    """The innermost rewrite path of a term, as level-2 steps."""
    p = parse(text)
    _, trace = normalize(p)
    return [Step(s.rule_id, s.position, s.before) for s in trace.steps]


def tower(n):
    return "sigma(" * n + "rho" + ")" * n


@lru_cache(maxsize=None)
def count_shuffles(n, m):
    if n == 0 or m == 0:
        return 1
    return count_shuffles(n - 1, m) + count_shuffles(n, m - 1)


def is_irreducible(d):
    if isinstance(d, Inv2):
        return not isinstance(d.d, (Refl2, Inv2)) and is_irreducible(d.d)
    if isinstance(d, Vert2):
        a, b = d.first, d.second
        if isinstance(a, (Vert2, Refl2)) or isinstance(b, Refl2):
            return False
        if b == Inv2(a) or a == Inv2(b):
            return False
        return is_irreducible(a) and is_irreducible(b)
    return True


def test_step_validation():
    assert SS.target == parse("a")
    with pytest.raises(DerivationError):
        Step(1, (), parse("sigma(a)"))
    with pytest.raises(DerivationError):
        Step(2, (0, 0, 0), parse("sigma(a)"))
    with pytest.raises(DerivationError):
        Step(99, (), parse("a"))


def test_level2_rules():
    assert normalize2(Inv2(Refl2(T)))[0] == Refl2(T)
    assert normalize2(Inv2(Inv2(SS)))[0] == SS
    assert normalize2(Vert2(SS, Inv2(SS)))[0] == Refl2(SS.at)
    assert normalize2(Vert2(Inv2(SS), SS))[0] == Refl2(SS.target)
    assert normalize2(Vert2(SS, Refl2(SS.target)))[0] == SS
    assert normalize2(Vert2(Refl2(SS.at), SS))[0] == SS
    a, b, c = steps_of(tower(3))
    d, trace = normalize2(Vert2(Vert2(a, b), c))
    assert d == Vert2(a, Vert2(b, c)) and [s.rule for s in trace] == ["tt2"]


def test_vert2_must_chain():
    with pytest.raises(DerivationError):
        endpoints2(Vert2(SS, SS))


def test_text_round_trip_and_names():
    d = Vert2(SS, Inv2(Refl2(parse("a"))))
    assert d.to_text() == "vert2(step(ss,root,sigma(sigma(a))),inv2(refl2(a)))"
    assert parse_derivation(d.to_text()) == d
    assert parse_derivation("step(2,root,sigma(sigma(a)))") == SS
    with pytest.raises(DerivationError):
        parse_derivation("step(nope,root,a)")
    with pytest.raises(DerivationError):
        parse_derivation("vert2(refl2(a))")


@pytest.mark.parametrize("n", range(1, 6))
@pytest.mark.parametrize("m", range(1, 6))
def test_interleaving_family(n, m):
    theta, phi = steps_of(tower(n)), steps_of(tower(m))
    assert len(theta) == n and len(phi) == m
    family = interleavings(theta, phi)
    assert len(family) == len(set(family)) == count_shuffles(n, m) == interleaving_count(n, m)
    ends = {endpoints2(d) for d in family}
    assert ends == {(parse(f"tau({tower(n)},{tower(m)})"), parse("tau(rho,rho)"))}
    canon = cd2_canonical(family[-1])
    assert canon == family[0]
    for d in family[:: max(1, len(family) // 7)]:
        assert cd2_canonical(d) == canon
        assert rw2_equal(d, family[-1])


def test_interleavings_need_both_sides():
    with pytest.raises(DerivationError):
        interleavings([], steps_of(tower(1)))
    with pytest.raises(NotAnInterleaving):
        split_interleaving([SS])


def test_single_swap_is_rw2_equal():
    (x,), (y,) = steps_of(tower(1)), steps_of(tower(2))[:1]
    left_first, right_first = interleavings([x], [y])
    assert left_first != right_first
    assert rw2_equal(left_first, right_first)


def test_rw2_equal_rejects_different_endpoints():
    with pytest.raises(DerivationError):
        rw2_equal(SS, Refl2(T))


def test_rw2_equal_distinguishes():
    # two different one-step derivations between the same terms are kept apart
    p = parse("tau(rho,rho)")
    d5, d6 = Step(5, (), p), Step(6, (), p)
    assert endpoints2(d5) == endpoints2(d6)
    assert not rw2_equal(d5, d6)


@settings(max_examples=200)
@given(st.integers(0, 2**32 - 1))
def test_random_derivations(seed):
    d = random_derivation(random.Random(seed), max_leaves=16)
    assert leaves(d) <= 16
    n, trace = normalize2(d)
    assert endpoints2(n) == endpoints2(d)
    assert is_irreducible(n)
    assert normalize2(n)[1] == []
    for s in trace:
        assert endpoints2(s.after) == endpoints2(d)
    assert parse_derivation(d.to_text()) == d
    c = canonical2(d)
    assert canonical2(c) == c
    assert rw2_equal(d, c)
    assert rw2_equal(Inv2(Inv2(d)), d)
    assert rw2_equal(Vert2(d, Refl2(endpoints2(d)[1])), d)


def test_chain_and_leaves():
    a, b = steps_of(tower(2))
    assert chain([a, b]) == Vert2(a, b)
    assert leaves(Vert2(Inv2(a), Refl2(a.at))) == 2
    with pytest.raises(DerivationError):
        chain([])
