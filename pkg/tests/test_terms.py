import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import terms, typed_terms
from cpaths.terms import (
    Atom,
    Context,
    EndpointError,
    FunLabel,
    MuF,
    ParseError,
    Rho,
    Sigma,
    SubL,
    Tau,
    TermError,
    Xi1,
    XiPair,
    Mu1,
    Mu2,
    endpoints,
    format_position,
    parse,
    parse_position,
    parse_schema,
    positions,
    replace_at,
    subterm_at,
    to_text,
)

r, s, t = Atom("r"), Atom("s"), Atom("t")


def test_parse_examples():
    assert parse("sigma(rho)") == Sigma(Rho())
    assert parse("tau(tau(t,r),s)") == Tau(Tau(t, r), s)
    assert parse("xi(mu1(r),mu2(r))") == XiPair(Mu1(r), Mu2(r))


def test_parse_ignores_whitespace():
    assert parse(" tau ( r ,\n sigma( r ) ) ") == Tau(r, Sigma(r))


@pytest.mark.parametrize("text, line, col", [
    ("tau(r)", 1, 1),
    ("tau(r,", 1, 7),
    ("sigma(r) s", 1, 10),
    ("frob(r)", 1, 1),
    ("tau(r,\n  $)", 2, 3),
])
def test_parse_errors_carry_location(text, line, col):
    with pytest.raises(ParseError) as err:
        parse(text)
    assert (err.value.line, err.value.column) == (line, col)


def test_arity_is_part_of_the_symbol():
    assert parse("xi(r)") != parse("xi(r,r)")
    assert parse("mu(r)").symbol != parse("mu(r,s)").symbol


def test_uppercase_atoms_rejected_outside_schemas():
    with pytest.raises(ParseError):
        parse("R")
    assert parse_schema("R").op == "var"


def test_rho_basepoint_is_metadata():
    assert parse("rho@x0") == Rho()
    assert to_text(parse("rho@x0")) == "rho@x0"
    assert hash(Rho("x")) == hash(Rho())


def test_fun_labels():
    p = parse("muf(g.f,r)")
    assert p.label == FunLabel.composite(FunLabel.plain("g"), FunLabel.plain("f"))
    assert p.label.size == 2
    assert parse("muf(id,r)").label.kind == "identity"
    assert to_text(MuF("f", r)) == "muf(f,r)"
    with pytest.raises(TermError):
        FunLabel.plain("id")


@given(terms(extended=True))
def test_print_parse_round_trip(p):
    assert parse(to_text(p)) == p


@given(terms())
def test_print_is_canonical(p):
    text = to_text(p)
    assert " " not in text
    assert to_text(parse(text)) == text


def test_subterm_and_replace_examples():
    assert subterm_at(Sigma(Sigma(r)), [0]) == Sigma(r)
    assert replace_at(Tau(r, s), [1], Rho()) == Tau(r, Rho())
    with pytest.raises(TermError):
        subterm_at(r, [0])


@given(terms(max_leaves=40), st.data())
def test_replace_inverts_subterm(p, data):
    pos = data.draw(st.sampled_from(list(positions(p))))
    assert replace_at(p, pos, subterm_at(p, pos)) == p
    q = Atom("z")
    assert subterm_at(replace_at(p, pos, q), pos) == q


def test_positions_are_preorder():
    p = parse("tau(sigma(r),s)")
    assert list(positions(p)) == [(), (0,), (0, 0), (1,)]


def test_position_text():
    assert format_position(()) == "root"
    assert format_position((0, 1)) == "0.1"
    assert parse_position("0.1") == (0, 1)
    assert parse_position("root") == ()


def test_context_plug_unplug():
    ctx = Context.around(parse("xi1(sigma(r))"), (0,))
    assert ctx.plug(r) == Xi1(r)
    assert ctx.unplug(Xi1(s)) == s
    assert ctx.unplug(Sigma(s)) is None
    assert Context.trivial().plug(s) == s


ENV = {"s": ("x0", "x1"), "r": ("x1", "x2")}


def test_endpoint_examples():
    assert endpoints(Tau(s, r), ENV) == ("x0", "x2")
    assert endpoints(Sigma(s), ENV) == ("x1", "x0")
    with pytest.raises(EndpointError):
        endpoints(Tau(r, r), ENV)
    with pytest.raises(EndpointError):
        endpoints(SubL(r, s), ENV)
    with pytest.raises(EndpointError):
        endpoints(Rho(), ENV)
    assert endpoints(Rho("x3"), ENV) == ("x3", "x3")


LOOPS = {"a": ("x0", "x0"), "b": ("x0", "x1"), "c": ("x1", "x0")}


@given(typed_terms(LOOPS), typed_terms(LOOPS))
def test_endpoint_functoriality(p, q):
    ps, pt = endpoints(p, {})
    qs, qt = endpoints(q, {})
    if pt == qs:
        assert endpoints(Tau(p, q), {}) == (ps, qt)
    else:
        with pytest.raises(EndpointError):
            endpoints(Tau(p, q), {})
    assert endpoints(Sigma(p), {}) == (pt, ps)
