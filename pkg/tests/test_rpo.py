from collections import Counter
from itertools import product

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import terms
from cpaths.rpo import (
    Precedence,
    multiset_greater,
    rpo_greater,
    rpo_witness,
    symbol_key,
    verify_orientation,
)
from cpaths.rules import RuleSet
from cpaths.terms import parse, parse_schema

PREC = Precedence.standard()


def huet_oppen(S, T, gt):
    """M > N iff M != N and every y with N(y) > M(y) has some x > y with M(x) > N(x)."""
    m, n = Counter(S), Counter(T)
    if m == n:
        return False
    return all(any(m[x] > n[x] and gt(x, y) for x in m)
               for y in n if n[y] > m[y])


def naive_rpo(s, t, prec=PREC):
    if s == t or s.op == "var":
        return False
    if any(a == t or naive_rpo(a, t, prec) for a in s.args):
        return True
    if t.op == "var":
        return False
    f, g = symbol_key(s), symbol_key(t)
    if prec.greater(f, g):
        return all(naive_rpo(s, b, prec) for b in t.args)
    if f == g:
        if s.op in prec.lex and len(s.args) == len(t.args):
            for a, b in zip(s.args, t.args):
                if a != b:
                    return naive_rpo(a, b, prec) and all(naive_rpo(s, c, prec) for c in t.args)
            return False
        return huet_oppen(s.args, t.args, lambda x, y: naive_rpo(x, y, prec))
    return False


def test_multiset_examples():
    gt = lambda a, b: a > b
    assert multiset_greater([3], [2, 2, 1], gt)
    assert multiset_greater([3, 1], [2, 1, 1], gt)
    assert not multiset_greater([2, 1], [2, 1], gt)
    assert not multiset_greater([1], [1, 1], gt)
    assert multiset_greater([1, 1], [1], gt)


@given(st.lists(st.integers(0, 4), max_size=5), st.lists(st.integers(0, 4), max_size=5))
def test_multiset_matches_brute_force(S, T):
    gt = lambda a, b: a > b
    assert multiset_greater(S, T, gt) == huet_oppen(S, T, gt)


def test_multiset_exhaustive_small():
    # divisibility is a partial order, which exercises incomparable elements
    gt = lambda a, b: a != b and a % b == 0
    values = [1, 2, 3, 4, 6]
    bags = [list(b) for k in range(3) for b in product(values, repeat=k)]
    for S in bags:
        for T in bags:
            assert multiset_greater(S, T, gt) == huet_oppen(S, T, gt), (S, T)


def test_precedence_closure_and_cycles():
    prec = Precedence.from_pairs([("a", "b"), ("b", "c")])
    assert ("a", "c") in prec.pairs
    with pytest.raises(ValueError):
        Precedence.from_pairs([("a", "b"), ("b", "a")])
    assert PREC.greater(("sigma", 1), ("rho", 0))
    assert PREC.greater(("sigma", 1), ("xi", 2))
    assert not PREC.greater(("tau", 2), ("subr", 2))
    assert PREC.compare(("sigma", 1), ("tau", 2)) == "greater"
    assert PREC.compare(("subl", 2), ("subr", 2)) == "incomparable"


def test_fun_label_extension():
    prec = Precedence.extended()
    short, long_ = parse("muf(f,r)"), parse("muf(g.f,r)")
    assert prec.greater(symbol_key(short), symbol_key(long_))
    assert not prec.greater(symbol_key(long_), symbol_key(short))
    assert prec.greater(("tau", 2), symbol_key(short))
    assert not PREC.greater(("tau", 2), symbol_key(short))


@given(terms(max_leaves=10), terms(max_leaves=10))
def test_rpo_matches_naive(s, t):
    assert rpo_greater(s, t) == naive_rpo(s, t)


@given(terms(max_leaves=10), terms(max_leaves=10))
def test_lex_rpo_matches_naive(s, t):
    prec = Precedence.lexicographic_tau()
    assert rpo_greater(s, t, prec) == naive_rpo(s, t, prec)


@given(terms(max_leaves=12), terms(max_leaves=12))
def test_rpo_is_irreflexive_and_asymmetric(s, t):
    assert not rpo_greater(s, s)
    assert not (rpo_greater(s, t) and rpo_greater(t, s))


@given(terms(max_leaves=12))
def test_subterm_property(s):
    for a in s.args:
        assert rpo_greater(s, a)


def _check_witness(w, prec):
    l, r = w.left, w.right
    if w.case == "equal":
        assert l == r
    elif w.case == "subterm":
        (c,) = w.children
        assert c.left in l.args and c.right == r
    elif w.case == "precedence":
        assert prec.greater(symbol_key(l), symbol_key(r))
        assert [c.right for c in w.children] == list(r.args)
        assert all(c.left == l for c in w.children)
    elif w.case == "multiset":
        assert symbol_key(l) == symbol_key(r)
        assert huet_oppen(l.args, r.args, lambda x, y: rpo_greater(x, y, prec))
    elif w.case == "lexicographic":
        assert l.op in prec.lex
    else:
        raise AssertionError(w.case)
    for c in w.children:
        _check_witness(c, prec)


@given(terms(max_leaves=10), terms(max_leaves=10))
def test_witnesses_are_sound(s, t):
    w = rpo_witness(s, t)
    if w is not None:
        _check_witness(w, PREC)


def test_metavariables_are_minimal():
    x = parse_schema("r")
    assert rpo_greater(parse_schema("sigma(r)"), x)
    assert not rpo_greater(x, parse("rho"))
    assert not rpo_greater(parse_schema("sigma(s)"), x)


def test_orientation_with_given_precedence():
    report = verify_orientation(RuleSet())
    assert len(report) == 39
    assert report.failing == (35, 36, 37)
    w = next(e for e in report.entries if e.rule_id == 26).witnesses[0]
    assert w.case == "precedence" and w.note == "sigma/1 > subr/2"


def test_associativity_is_never_multiset_decreasing():
    # every precedence leaves tau(tau(t,r),s) and tau(t,tau(r,s)) incomparable
    lhs, rhs = parse_schema("tau(tau(t,r),s)"), parse_schema("tau(t,tau(r,s))")
    for prec in (PREC, Precedence.from_pairs([("tau", "rho")]), Precedence.from_pairs([])):
        assert not rpo_greater(lhs, rhs, prec)
        assert not rpo_greater(rhs, lhs, prec)


def test_lexicographic_tau_orients_everything():
    assert verify_orientation(RuleSet(), Precedence.lexicographic_tau()).all_decreasing
    rules = RuleSet(extended_40_42=True)
    assert verify_orientation(rules, Precedence.lexicographic_tau(fun_labels=True)).all_decreasing


def test_report_serializes():
    report = verify_orientation(RuleSet.of(1, 2))
    rec = report.to_record()
    assert rec["decreasing"] == rec["total"] == 2
    assert "2/2 rules decreasing" in report.to_text(derivations=True)
