"""The path rewrite rule catalog (rules 1-39) and the functoriality rules 40-42."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Optional, Tuple

from .terms import PathTerm, metavars, parse_schema, to_text

# (id, name, lhs, rhs). Schema syntax: identifiers are metavariables,
# C[...] is a context slot, muf(f,...) carries a function-label variable.
CORE_TABLE: tuple[tuple[int, str, str, str], ...] = (
    (1, "sr", "sigma(rho)", "rho"),
    (2, "ss", "sigma(sigma(r))", "r"),
    (3, "tr", "tau(C[r],C[sigma(r)])", "C[rho]"),
    (4, "tsr", "tau(C[sigma(r)],C[r])", "C[rho]"),
    (5, "trr", "tau(C[r],C[rho])", "C[r]"),
    (6, "tlr", "tau(C[rho],C[r])", "C[r]"),
    (7, "slr", "subl(C[r],C[rho])", "C[r]"),
    (8, "srr", "subr(C[rho],C[r])", "C[r]"),
    (9, "sls", "subl(subl(s,C[r]),C[sigma(r)])", "s"),
    (10, "slss", "subl(subl(s,C[sigma(r)]),C[r])", "s"),
    (11, "srs", "subr(C[s],subr(C[sigma(s)],r))", "r"),
    (12, "srrr", "subr(C[sigma(s)],subr(C[s],r))", "r"),
    (13, "mx2l1", "mu1(xi1(r))", "r"),
    (14, "mx2l2", "mu1(xiand(r,s))", "r"),
    (15, "mx2r1", "mu2(xiand(r,s))", "s"),
    (16, "mx2r2", "mu2(xi2(s))", "s"),
    (17, "mx3l", "mu(xi1(r),s,u)", "s"),
    (18, "mx3r", "mu(xi2(r),s,u)", "u"),
    (19, "mxl", "nu(xi(r))", "r"),
    (20, "mxr", "mu(xi2(r),s)", "s"),
    (21, "mx", "xi(mu1(r),mu2(r))", "r"),
    (22, "mxx", "mu(t,xi1(r),xi2(s))", "t"),
    (23, "xmr", "xi(nu(r))", "r"),
    (24, "mx1r", "mu(s,xi2(r))", "s"),
    (25, "stss", "sigma(tau(r,s))", "tau(sigma(s),sigma(r))"),
    (26, "ssbl", "sigma(subl(r,s))", "subr(sigma(s),sigma(r))"),
    (27, "ssbr", "sigma(subr(r,s))", "subl(sigma(s),sigma(r))"),
    (28, "sx", "sigma(xi(r))", "xi(sigma(r))"),
    (29, "sxss", "sigma(xi(s,r))", "xi(sigma(s),sigma(r))"),
    (30, "sm", "sigma(mu(r))", "mu(sigma(r))"),
    (31, "smss", "sigma(mu(s,r))", "mu(sigma(s),sigma(r))"),
    (32, "smsss", "sigma(mu(r,u,v))", "mu(sigma(r),sigma(u),sigma(v))"),
    (33, "tsbll", "tau(r,subl(rho,s))", "subl(r,s)"),
    (34, "tsbrl", "tau(r,subr(s,rho))", "subl(r,s)"),
    (35, "tsblr", "tau(subl(r,s),t)", "tau(r,subr(s,t))"),
    (36, "tsbrr", "tau(subr(s,t),u)", "subr(s,tau(t,u))"),
    (37, "tt", "tau(tau(t,r),s)", "tau(t,tau(r,s))"),
    (38, "tts", "tau(C[u],tau(C[sigma(u)],v))", "v"),
    (39, "tst", "tau(C[sigma(u)],tau(C[u],v))", "v"),
)

EXTENDED_TABLE: tuple[tuple[int, str, str, str], ...] = (
    (40, "tf", "tau(muf(f,p),muf(f,q))", "muf(f,tau(p,q))"),
    (41, "cf", "muf(g,muf(f,p))", "muf(g.f,p)"),
    (42, "ci", "muf(id,p)", "p"),
)

# The sigma-distribution rules are written with a generic xi / mu head;
# they also apply to the other congruences of the same arity.
FAMILY_VARIANTS: dict[int, tuple[tuple[str, str], ...]] = {
    28: (("sigma(xi1(r))", "xi1(sigma(r))"),
         ("sigma(xi2(r))", "xi2(sigma(r))")),
    29: (("sigma(xiand(s,r))", "xiand(sigma(s),sigma(r))"),),
    30: (("sigma(mu1(r))", "mu1(sigma(r))"),
         ("sigma(mu2(r))", "mu2(sigma(r))")),
}
EXTENDED_FAMILY_VARIANTS: dict[int, tuple[tuple[str, str], ...]] = {
    30: (("sigma(muf(f,r))", "muf(f,sigma(r))"),),
}


class RuleError(ValueError):
    pass


def _ctx_names(p: PathTerm, out: Optional[list] = None) -> list:
    if out is None:
        out = []
    if p.op == "ctx" and p.label not in out:
        out.append(p.label)
    for a in p.args:
        _ctx_names(a, out)
    return out


def _fun_vars(p: PathTerm, out: Optional[set] = None) -> set:
    if out is None:
        out = set()
    if p.op == "muf":
        stack = [p.label]
        while stack:
            lab = stack.pop()
            if lab.kind == "meta":
                out.add(lab.name)
            stack.extend(lab.parts)
    for a in p.args:
        _fun_vars(a, out)
    return out


@dataclass(frozen=True)
class RewriteRule:
    """One named rule schema; ``variants`` lists every (lhs, rhs) it covers."""

    id: int
    name: str
    lhs: PathTerm
    rhs: PathTerm
    variants: Tuple[Tuple[PathTerm, PathTerm], ...] = ()
    context_slots: Tuple[str, ...] = ()

    def __post_init__(self):
        if not self.variants:
            object.__setattr__(self, "variants", ((self.lhs, self.rhs),))
        for lhs, rhs in self.variants:
            if not metavars(rhs) <= metavars(lhs):
                raise RuleError(f"rule {self.id}: rhs variable not bound by lhs")
            if not set(_ctx_names(rhs)) <= set(_ctx_names(lhs)):
                raise RuleError(f"rule {self.id}: rhs context not bound by lhs")
            if not _fun_vars(rhs) <= _fun_vars(lhs):
                raise RuleError(f"rule {self.id}: rhs function label not bound by lhs")
        if not self.context_slots:
            object.__setattr__(self, "context_slots", tuple(_ctx_names(self.lhs)))

    @classmethod
    def from_text(cls, id: int, name: str, lhs: str, rhs: str,
                  variants: Iterable[tuple[str, str]] = ()) -> "RewriteRule":
        main = (parse_schema(lhs), parse_schema(rhs))
        extra = tuple((parse_schema(l), parse_schema(r)) for l, r in variants)
        return cls(id, name, main[0], main[1], (main,) + extra)

    def to_record(self) -> dict:
        return {
            "id": self.id,
            "name": self.name,
            "lhs": to_text(self.lhs),
            "rhs": to_text(self.rhs),
            "context_slots": list(self.context_slots),
            "variants": [[to_text(l), to_text(r)] for l, r in self.variants[1:]],
        }

    def __str__(self):
        return f"{self.id}. {to_text(self.lhs)} |>_{self.name} {to_text(self.rhs)}"


def _build(table, extended: bool) -> dict[int, RewriteRule]:
    out = {}
    for id_, name, lhs, rhs in table:
        variants = list(FAMILY_VARIANTS.get(id_, ()))
        if extended:
            variants += EXTENDED_FAMILY_VARIANTS.get(id_, ())
        out[id_] = RewriteRule.from_text(id_, name, lhs, rhs, variants)
    return out


_CORE = _build(CORE_TABLE, extended=False)
_CORE_EXT = _build(CORE_TABLE, extended=True)
_EXTENDED = _build(EXTENDED_TABLE, extended=True)


def rule(id_: int, extended: bool = False) -> RewriteRule:
    if id_ in _EXTENDED:
        return _EXTENDED[id_]
    return (_CORE_EXT if extended else _CORE)[id_]


@dataclass(frozen=True)
class RuleSet:
    """The active rule collection.

    ``only`` restricts to the listed ids (experiments); ``extra`` appends
    ad-hoc rules, e.g. deliberately non-terminating ones.
    """

    with_38_39: bool = True
    extended_40_42: bool = False
    only: Optional[frozenset] = None
    extra: Tuple[RewriteRule, ...] = field(default=())

    @classmethod
    def core(cls) -> "RuleSet":
        return cls()

    @classmethod
    def of(cls, *ids: int, extended: bool = False) -> "RuleSet":
        return cls(extended_40_42=extended, only=frozenset(ids))

    @property
    def rules(self) -> Tuple[RewriteRule, ...]:
        return _rules_for(self)

    @property
    def enabled_ids(self) -> Tuple[int, ...]:
        return tuple(r.id for r in self.rules)

    def __iter__(self):
        return iter(self.rules)

    def __len__(self):
        return len(self.rules)

    def manifest(self) -> list[dict]:
        return [r.to_record() for r in self.rules]


_RULES_CACHE: dict = {}


def _rules_for(rs: RuleSet) -> Tuple[RewriteRule, ...]:
    if rs in _RULES_CACHE:
        return _RULES_CACHE[rs]
    table = _CORE_EXT if rs.extended_40_42 else _CORE
    chosen = []
    for id_, r in table.items():
        if id_ in (38, 39) and not rs.with_38_39:
            continue
        chosen.append(r)
    if rs.extended_40_42:
        chosen.extend(_EXTENDED.values())
    if rs.only is not None:
        chosen = [r for r in chosen if r.id in rs.only]
    chosen.extend(rs.extra)
    chosen.sort(key=lambda r: r.id)
    out = tuple(chosen)
    _RULES_CACHE[rs] = out
    return out
