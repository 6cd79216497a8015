"""Recursive path ordering with witnesses, and rule orientation reports."""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass, field
from typing import Callable, Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple

from .rules import RewriteRule, RuleSet
from .terms import PathTerm, to_text

# Precedence keys: operator families. "xi" stands for both arities and "mu"
# for all three, mirroring how the precedence list names them.
BASE_PRECEDENCE: Tuple[Tuple[str, str], ...] = (
    ("sigma", "tau"), ("tau", "rho"),
    ("sigma", "xi"), ("sigma", "xiand"), ("sigma", "xi1"), ("sigma", "xi2"),
    ("sigma", "mu"), ("sigma", "mu1"), ("sigma", "mu2"),
    ("sigma", "subl"), ("sigma", "subr"),
    ("tau", "subl"),
)


def symbol_key(t: PathTerm) -> tuple:
    """Head symbol used by the ordering; metavariables have none."""
    if t.op == "muf":
        return ("muf", t.label)
    if t.op == "atom":
        return ("atom", t.label)
    if t.op == "ctx":
        return ("ctx", t.label)
    return (t.op, len(t.args))


@dataclass(frozen=True)
class Precedence:
    """Strict partial order on operator symbols (transitively closed).

    ``fun_labels`` enables the muf extension: sigma and tau dominate every
    muf symbol and ``muf_f > muf_g`` iff ``size(f) < size(g)``.
    ``lex`` lists families compared with lexicographic (left to right)
    status instead of multiset status.
    """

    pairs: FrozenSet[Tuple[str, str]]
    fun_labels: bool = False
    lex: FrozenSet[str] = frozenset()

    @classmethod
    def from_pairs(cls, pairs: Iterable[Tuple[str, str]], fun_labels: bool = False,
                   lex: Iterable[str] = ()) -> "Precedence":
        closure = set(pairs)
        changed = True
        while changed:
            changed = False
            for a, b in list(closure):
                for c, d in list(closure):
                    if b == c and (a, d) not in closure:
                        closure.add((a, d))
                        changed = True
        for a, b in closure:
            if a == b:
                raise ValueError(f"precedence is cyclic through {a}")
        return cls(frozenset(closure), fun_labels, frozenset(lex))

    @classmethod
    def standard(cls) -> "Precedence":
        return cls.from_pairs(BASE_PRECEDENCE)

    @classmethod
    def extended(cls) -> "Precedence":
        return cls.from_pairs(BASE_PRECEDENCE, fun_labels=True)

    @classmethod
    def lexicographic_tau(cls, fun_labels: bool = False) -> "Precedence":
        """Supplementary: tau with lexicographic status and tau > subr."""
        return cls.from_pairs(BASE_PRECEDENCE + (("tau", "subr"),),
                              fun_labels=fun_labels, lex=("tau",))

    def greater(self, f: tuple, g: tuple) -> bool:
        if f[0] == "muf" or g[0] == "muf":
            if not self.fun_labels:
                return False
            if f[0] == "muf" and g[0] == "muf":
                return f[1].size < g[1].size
            if g[0] == "muf":
                return f[0] in ("sigma", "tau")
            return False
        if f[0] in ("atom", "ctx") or g[0] in ("atom", "ctx"):
            return False
        return (f[0], g[0]) in self.pairs

    def compare(self, f: tuple, g: tuple) -> str:
        if f == g:
            return "equal"
        if self.greater(f, g):
            return "greater"
        if self.greater(g, f):
            return "less"
        return "incomparable"

    def to_record(self) -> dict:
        return {"pairs": sorted(map(list, self.pairs)), "fun_labels": self.fun_labels,
                "lex": sorted(self.lex)}


@dataclass(frozen=True)
class Witness:
    """One node of an RPO derivation tree for ``left > right``."""

    left: PathTerm
    right: PathTerm
    case: str
    note: str = ""
    children: Tuple["Witness", ...] = ()

    def to_record(self) -> dict:
        out = {"goal": f"{to_text(self.left)} > {to_text(self.right)}", "case": self.case}
        if self.note:
            out["note"] = self.note
        if self.children:
            out["premises"] = [c.to_record() for c in self.children]
        return out

    def lines(self, indent: int = 0) -> List[str]:
        head = f"{'  ' * indent}{to_text(self.left)} >* {to_text(self.right)}  [{self.case}"
        head += f": {self.note}]" if self.note else "]"
        out = [head]
        for c in self.children:
            out.extend(c.lines(indent + 1))
        return out

    def size(self) -> int:
        return 1 + sum(c.size() for c in self.children)


class _RPO:
    def __init__(self, prec: Precedence):
        self.prec = prec
        self.memo: Dict[Tuple[PathTerm, PathTerm], Optional[Witness]] = {}

    def ge(self, s: PathTerm, t: PathTerm) -> Optional[Witness]:
        if s == t:
            return Witness(s, t, "equal")
        return self.gt(s, t)

    def gt(self, s: PathTerm, t: PathTerm) -> Optional[Witness]:
        key = (s, t)
        if key in self.memo:
            return self.memo[key]
        self.memo[key] = None
        w = self._gt(s, t)
        self.memo[key] = w
        return w

    def _gt(self, s: PathTerm, t: PathTerm) -> Optional[Witness]:
        if s.op == "var" or s == t:
            return None
        f = symbol_key(s)
        if t.op != "var":
            g = symbol_key(t)
            if f == g:
                w = self.same_head(s, t)
                if w is not None:
                    return w
            elif self.prec.greater(f, g):
                subs = []
                for tj in t.args:
                    w = self.gt(s, tj)
                    if w is None:
                        break
                    subs.append(w)
                else:
                    return Witness(s, t, "precedence",
                                   f"{_sym_text(f)} > {_sym_text(g)}", tuple(subs))
        for i, si in enumerate(s.args):
            w = self.ge(si, t)
            if w is not None:
                return Witness(s, t, "subterm", f"argument {i + 1}", (w,))
        return None

    def same_head(self, s: PathTerm, t: PathTerm) -> Optional[Witness]:
        if s.op in self.prec.lex and len(s.args) == len(t.args):
            return self.lex_greater(s, t)
        ok, subs = _multiset(s.args, t.args, self.gt)
        if not ok:
            return None
        return Witness(s, t, "multiset", "equal heads, arguments decrease", subs)

    def lex_greater(self, s: PathTerm, t: PathTerm) -> Optional[Witness]:
        for i, (a, b) in enumerate(zip(s.args, t.args)):
            if a == b:
                continue
            first = self.gt(a, b)
            if first is None:
                return None
            rest = []
            for tj in t.args[i + 1:]:
                w = self.gt(s, tj)
                if w is None:
                    return None
                rest.append(w)
            return Witness(s, t, "lexicographic", f"argument {i + 1} decreases",
                           (first,) + tuple(rest))
        return None


def _sym_text(f: tuple) -> str:
    if f[0] == "muf":
        return f"muf[{f[1]}]"
    if f[0] in ("atom", "ctx"):
        return str(f[1])
    return f"{f[0]}/{f[1]}"


def _multiset(S: Sequence[PathTerm], T: Sequence[PathTerm], gt) -> Tuple[bool, Tuple[Witness, ...]]:
    """Dershowitz-Manna extension: cancel common elements, then every
    remaining element of T needs a strictly greater remaining element of S."""
    cs, ct = Counter(S), Counter(T)
    common = cs & ct
    rest_s = list((cs - common).elements())
    rest_t = list((ct - common).elements())
    if not rest_s:
        return False, ()
    subs = []
    for t in rest_t:
        for s in rest_s:
            w = gt(s, t)
            if w is not None:
                subs.append(w)
                break
        else:
            return False, ()
    return True, tuple(subs)


def multiset_greater(S: Sequence, T: Sequence, cmp: Callable[[object, object], bool]) -> bool:
    """Multiset extension of the strict order ``cmp``."""
    ok, _ = _multiset(S, T, lambda s, t: Witness(s, t, "cmp") if cmp(s, t) else None)
    return ok


def rpo_witness(s: PathTerm, t: PathTerm, prec: Optional[Precedence] = None) -> Optional[Witness]:
    return _RPO(prec or Precedence.standard()).gt(s, t)


def rpo_greater(s: PathTerm, t: PathTerm, prec: Optional[Precedence] = None) -> bool:
    return rpo_witness(s, t, prec) is not None


@dataclass(frozen=True)
class RuleOrientation:
    rule_id: int
    name: str
    decreasing: bool
    witnesses: Tuple[Optional[Witness], ...]
    variants: Tuple[Tuple[PathTerm, PathTerm], ...]

    def to_record(self) -> dict:
        return {
            "rule_id": self.rule_id,
            "name": self.name,
            "decreasing": self.decreasing,
            "variants": [
                {"lhs": to_text(l), "rhs": to_text(r),
                 "witness": None if w is None else w.to_record()}
                for (l, r), w in zip(self.variants, self.witnesses)
            ],
        }


@dataclass(frozen=True)
class OrientationReport:
    entries: Tuple[RuleOrientation, ...]
    precedence: Precedence = field(default_factory=Precedence.standard)

    @property
    def all_decreasing(self) -> bool:
        return all(e.decreasing for e in self.entries)

    @property
    def failing(self) -> Tuple[int, ...]:
        return tuple(e.rule_id for e in self.entries if not e.decreasing)

    def __len__(self):
        return len(self.entries)

    def to_record(self) -> dict:
        return {
            "all_decreasing": self.all_decreasing,
            "decreasing": sum(e.decreasing for e in self.entries),
            "total": len(self.entries),
            "precedence": self.precedence.to_record(),
            "rules": [e.to_record() for e in self.entries],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_record(), indent=2)

    def to_text(self, derivations: bool = False) -> str:
        lines = []
        for e in self.entries:
            verdict = "DECREASING" if e.decreasing else "NOT-DECREASING"
            lines.append(f"{e.rule_id:>3}  {e.name:<6} {verdict}")
            if derivations:
                for (l, r), w in zip(e.variants, e.witnesses):
                    if w is None:
                        lines.append(f"       no derivation for {to_text(l)} > {to_text(r)}")
                    else:
                        lines.extend("       " + x for x in w.lines())
        n = sum(e.decreasing for e in self.entries)
        lines.append(f"{n}/{len(self.entries)} rules decreasing")
        return "\n".join(lines)


def orient_rule(rule: RewriteRule, prec: Precedence) -> RuleOrientation:
    engine = _RPO(prec)
    ws = tuple(engine.gt(l, r) for l, r in rule.variants)
    return RuleOrientation(rule.id, rule.name, all(w is not None for w in ws), ws, rule.variants)


def verify_orientation(rules: RuleSet = RuleSet(), prec: Optional[Precedence] = None) -> OrientationReport:
    if prec is None:
        prec = Precedence.extended() if rules.extended_40_42 else Precedence.standard()
    return OrientationReport(tuple(orient_rule(r, prec) for r in rules), prec)

