import sys

import hypothesis.strategies as st
from hypothesis import HealthCheck, settings

from cpaths.terms import ARITIES, Atom, FunLabel, PathTerm, Rho

settings.register_profile(
    "default", max_examples=100, deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("default")

ATOM_NAMES = ("a", "b", "c")
_OPS = [(op, n) for op, ns in ARITIES.items() if op != "muf" for n in ns]


def _node(children, op, n):
    return st.tuples(*([children] * n)).map(lambda args: PathTerm(op, tuple(args)))


def terms(max_leaves=24, extended=False):
    leaves = st.one_of(st.sampled_from(ATOM_NAMES).map(Atom), st.just(Rho()))

    def extend(children):
        options = [_node(children, op, n) for op, n in _OPS]
        if extended:
            labels = st.one_of(st.sampled_from("fgh").map(FunLabel.plain),
                               st.just(FunLabel.identity()))
            options.append(st.tuples(labels, children).map(
                lambda x: PathTerm("muf", (x[1],), x[0])))
        return st.one_of(*options)

    return st.recursive(leaves, extend, max_leaves=max_leaves)


def typed_terms(env, max_leaves=12):
    """Well-typed terms of the {atom, rho, sigma, tau} fragment."""
    objects = sorted({o for ends in env.values() for o in ends})

    @st.composite
    def build(draw, src, budget):
        if budget <= 1 or draw(st.integers(0, 3)) == 0:
            choices = [Atom(g, ends) for g, ends in env.items() if ends[0] == src]
            choices += [PathTerm("sigma", (Atom(g, ends),)) for g, ends in env.items()
                        if ends[1] == src]
            choices.append(Rho(src))
            return draw(st.sampled_from(choices))
        kind = draw(st.sampled_from(["sigma", "tau"]))
        if kind == "sigma":
            inner = draw(build(src, budget - 1))
            return PathTerm("sigma", (_flip(inner),))
        left = draw(build(src, budget // 2))
        return PathTerm("tau", (left, draw(build(_target(left), budget - budget // 2))))

    def _target(p):
        if p.op == "rho":
            return p.meta
        if p.op == "atom":
            return p.meta[1]
        if p.op == "sigma":
            return _source(p.args[0])
        return _target(p.args[1])

    def _source(p):
        if p.op == "rho":
            return p.meta
        if p.op == "atom":
            return p.meta[0]
        if p.op == "sigma":
            return _target(p.args[0])
        return _source(p.args[0])

    def _flip(p):
        # a path with swapped endpoints, so that sigma of it starts at src
        if p.op == "atom":
            return PathTerm("sigma", (p,))
        if p.op == "sigma":
            return p.args[0]
        if p.op == "tau":
            return PathTerm("tau", (_flip(p.args[1]), _flip(p.args[0])))
        return p

    return st.sampled_from(objects).flatmap(lambda o: build(o, max_leaves))


def pytest_terminal_summary(terminalreporter):
    module = sys.modules.get("test_acceptance")
    RESULTS = getattr(module, "RESULTS", None)
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for _, line in sorted(RESULTS.items()):
            terminalreporter.write_line(line)
