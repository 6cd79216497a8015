"""Unification, critical pairs by superposition, and joinability checks.

Context rules are second order. They are made first order by plugging in
every congruence context up to a fixed hole depth; the remaining arguments
of each context are fresh metavariables.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from typing import Dict, Iterator, List, Optional, Tuple

from .rewriting import DEFAULT_FUEL, FuelExhausted, Trace, normalize
from .rules import RewriteRule, RuleSet
from .terms import (
    ARITIES,
    CONGRUENCE_OPS,
    HOLE,
    Atom,
    Context,
    FunLabel,
    MetaVar,
    PathTerm,
    Position,
    format_position,
    replace_at,
    to_text,
)

Substitution = Dict[str, object]


# -- unification ------------------------------------------------------------

def _walk(t, sub):
    while t.op == "var" and t.label in sub:
        t = sub[t.label]
    return t


def _walk_label(lab: FunLabel, sub) -> FunLabel:
    while lab.kind == "meta" and "fun:" + lab.name in sub:
        lab = sub["fun:" + lab.name]
    return lab


def _occurs(name: str, t: PathTerm, sub) -> bool:
    t = _walk(t, sub)
    if t.op == "var":
        return t.label == name
    return any(_occurs(name, a, sub) for a in t.args)


def _label_occurs(name: str, lab: FunLabel, sub) -> bool:
    lab = _walk_label(lab, sub)
    if lab.kind == "meta":
        return lab.name == name
    return any(_label_occurs(name, p, sub) for p in lab.parts)


def _unify_label(a: FunLabel, b: FunLabel, sub) -> bool:
    a, b = _walk_label(a, sub), _walk_label(b, sub)
    if a == b:
        return True
    if a.kind == "meta":
        if _label_occurs(a.name, b, sub):
            return False
        sub["fun:" + a.name] = b
        return True
    if b.kind == "meta":
        return _unify_label(b, a, sub)
    if a.kind == "composite" and b.kind == "composite":
        return all(_unify_label(x, y, sub) for x, y in zip(a.parts, b.parts))
    return False


def unify(s: PathTerm, t: PathTerm) -> Optional[Substitution]:
    """Most general unifier of two first-order schemas, or None."""
    sub: Substitution = {}
    stack = [(s, t)]
    while stack:
        a, b = stack.pop()
        a, b = _walk(a, sub), _walk(b, sub)
        if a == b and a.op != "muf":
            continue
        if a.op == "var":
            if _occurs(a.label, b, sub):
                return None
            sub[a.label] = b
            continue
        if b.op == "var":
            stack.append((b, a))
            continue
        if a.op != b.op or len(a.args) != len(b.args):
            return None
        if a.op == "atom" and a.label != b.label:
            return None
        if a.op == "muf" and not _unify_label(a.label, b.label, sub):
            return None
        stack.extend(zip(a.args, b.args))
    return {k: (apply_label(v, sub) if k.startswith("fun:") else apply(v, sub))
            for k, v in sub.items()}


def apply_label(lab: FunLabel, sub: Substitution) -> FunLabel:
    lab = _walk_label(lab, sub)
    if lab.kind == "composite":
        return FunLabel.composite(apply_label(lab.parts[0], sub), apply_label(lab.parts[1], sub))
    return lab


def apply(t: PathTerm, sub: Substitution) -> PathTerm:
    """Apply a substitution (fully resolving chains)."""
    if t.op == "var":
        u = sub.get(t.label)
        return t if u is None else apply(u, sub)
    if not t.args:
        return t
    args = tuple(apply(a, sub) for a in t.args)
    if t.op == "muf":
        return PathTerm("muf", args, apply_label(t.label, sub))
    return t.with_args(args)


def rename(t: PathTerm, suffix: str) -> PathTerm:
    """Rename every metavariable and function-label variable apart."""
    if t.op == "var":
        return MetaVar(t.label + suffix)
    if not t.args:
        return t
    args = tuple(rename(a, suffix) for a in t.args)
    if t.op == "muf":
        return PathTerm("muf", args, _rename_label(t.label, suffix))
    return t.with_args(args)


def _rename_label(lab: FunLabel, suffix: str) -> FunLabel:
    if lab.kind == "meta":
        return FunLabel.meta(lab.name + suffix)
    if lab.kind == "composite":
        return FunLabel.composite(*(_rename_label(p, suffix) for p in lab.parts))
    return lab


# -- first-order instances of context rules ---------------------------------

def congruence_contexts(depth: int, with_muf: bool = False) -> List[Context]:
    """Contexts with the hole at depth <= ``depth`` under congruence ops only.

    Side arguments are fresh metavariables z1, z2, ...; muf nodes get
    function-label variables zf1, zf2, ...
    """
    counter = itertools.count(1)
    ops = sorted((op, n) for op in CONGRUENCE_OPS for n in ARITIES[op]
                 if with_muf or op != "muf")
    layer = [Context.trivial()]
    out = list(layer)
    for _ in range(depth):
        nxt = []
        for ctx in layer:
            for op, n in ops:
                for i in range(n):
                    args = [HOLE if j == i else MetaVar(f"z{next(counter)}") for j in range(n)]
                    label = FunLabel.meta(f"zf{next(counter)}") if op == "muf" else None
                    frame = PathTerm(op, tuple(args), label)
                    nxt.append(Context(ctx.plug(frame), ctx.hole_position + (i,)))
        out.extend(nxt)
        layer = nxt
    return out


def _plug_contexts(schema: PathTerm, env: Dict[str, Context]) -> PathTerm:
    if schema.op == "ctx":
        return env[schema.label].plug(_plug_contexts(schema.args[0], env))
    if not schema.args:
        return schema
    return schema.with_args(tuple(_plug_contexts(a, env) for a in schema.args))


@dataclass(frozen=True)
class RuleInstance:
    rule_id: int
    name: str
    variant: int
    context: Optional[str]
    lhs: PathTerm
    rhs: PathTerm

    @property
    def tag(self) -> str:
        out = f"{self.rule_id}"
        if self.variant:
            out += f".v{self.variant}"
        if self.context is not None:
            out += f"[C={self.context}]"
        return out


def rule_instances(rule: RewriteRule, depth: int, with_muf: bool = False) -> List[RuleInstance]:
    out = []
    ctxs = congruence_contexts(depth, with_muf) if rule.context_slots else [None]
    for k, (lhs, rhs) in enumerate(rule.variants):
        for ctx in ctxs:
            if ctx is None:
                out.append(RuleInstance(rule.id, rule.name, k, None, lhs, rhs))
                continue
            env = {name: ctx for name in rule.context_slots}
            out.append(RuleInstance(rule.id, rule.name, k, to_text(ctx.host),
                                    _plug_contexts(lhs, env), _plug_contexts(rhs, env)))
    return out


# -- critical pairs ---------------------------------------------------------

@dataclass
class JoinResult:
    joinable: bool
    left_normal: PathTerm
    right_normal: PathTerm
    left_trace: Trace
    right_trace: Trace
    error: str = ""

    def to_record(self) -> dict:
        return {"joinable": self.joinable,
                "left_normal": to_text(self.left_normal),
                "right_normal": to_text(self.right_normal),
                "left_trace": self.left_trace.to_record(),
                "right_trace": self.right_trace.to_record(),
                **({"error": self.error} if self.error else {})}


@dataclass
class CriticalPair:
    overlap: PathTerm
    position: Position
    rule_a: int
    rule_b: int
    left: PathTerm
    right: PathTerm
    instance_a: str = ""
    instance_b: str = ""
    join: Optional[JoinResult] = field(default=None, compare=False)

    @property
    def joinable(self) -> Optional[bool]:
        return None if self.join is None else self.join.joinable

    def sort_key(self):
        return (self.rule_a, self.rule_b, self.position, self.instance_a,
                self.instance_b, to_text(self.overlap))

    def to_record(self) -> dict:
        out = {"rule_a": self.rule_a, "rule_b": self.rule_b,
               "instance_a": self.instance_a, "instance_b": self.instance_b,
               "position": format_position(self.position),
               "overlap": to_text(self.overlap),
               "left": to_text(self.left), "right": to_text(self.right)}
        if self.join is not None:
            out["join"] = self.join.to_record()
        return out


def _nonvar_positions(t: PathTerm, pos: Position = ()) -> Iterator[Tuple[Position, PathTerm]]:
    if t.op == "var":
        return
    yield pos, t
    for i, a in enumerate(t.args):
        yield from _nonvar_positions(a, pos + (i,))


def _all_instances(rules: RuleSet, depth: int) -> List[RuleInstance]:
    out = []
    for r in rules:
        out.extend(rule_instances(r, depth, with_muf=rules.extended_40_42))
    return out


def critical_pairs(rules: RuleSet = RuleSet(), context_depth: int = 1) -> List[CriticalPair]:
    """Overlaps of every instance lhs into non-variable positions of every
    instance lhs. ``left`` is the root step of ``rule_a``, ``right`` the
    inner step of ``rule_b``."""
    instances = _all_instances(rules, context_depth)
    by_head: Dict[Tuple[str, int], List[RuleInstance]] = {}
    renamed = {}
    for inst in instances:
        lhs_b = rename(inst.lhs, "_b")
        renamed[id(inst)] = (lhs_b, rename(inst.rhs, "_b"))
        by_head.setdefault((lhs_b.op, len(lhs_b.args)), []).append(inst)
    pairs: Dict[tuple, CriticalPair] = {}
    for a in instances:
        for pos, sub_a in _nonvar_positions(a.lhs):
            for b in by_head.get((sub_a.op, len(sub_a.args)), ()):
                if not pos and b is a:
                    continue
                lhs_b, rhs_b = renamed[id(b)]
                mgu = unify(sub_a, lhs_b)
                if mgu is None:
                    continue
                overlap = apply(a.lhs, mgu)
                left = apply(a.rhs, mgu)
                right = replace_at(overlap, pos, apply(rhs_b, mgu))
                cp = CriticalPair(overlap, pos, a.rule_id, b.rule_id, left, right, a.tag, b.tag)
                key = (a.rule_id, b.rule_id, pos, to_text(overlap), to_text(left), to_text(right))
                pairs.setdefault(key, cp)
    return sorted(pairs.values(), key=CriticalPair.sort_key)


def skolemize(t: PathTerm) -> PathTerm:
    """Replace metavariables by fresh atoms and label variables by plain labels."""
    if t.op == "var":
        return Atom(t.label.lower())
    if not t.args:
        return t
    args = tuple(skolemize(a) for a in t.args)
    if t.op == "muf":
        return PathTerm("muf", args, _skolem_label(t.label))
    return t.with_args(args)


def _skolem_label(lab: FunLabel) -> FunLabel:
    if lab.kind == "meta":
        return FunLabel.plain(lab.name)
    if lab.kind == "composite":
        return FunLabel.composite(*(_skolem_label(p) for p in lab.parts))
    return lab


def joinable(cp: CriticalPair, rules: RuleSet = RuleSet(), fuel: int = DEFAULT_FUEL) -> bool:
    """Normalize both branches; the result and traces are stored on ``cp``."""
    left, right = skolemize(cp.left), skolemize(cp.right)
    try:
        ln, lt = normalize(left, rules, fuel=fuel)
        rn, rt = normalize(right, rules, fuel=fuel)
    except FuelExhausted as exc:
        cp.join = JoinResult(False, exc.trace.end, right, exc.trace, Trace(right), str(exc))
        raise
    cp.join = JoinResult(ln == rn, ln, rn, lt, rt)
    return cp.join.joinable


@dataclass
class ConfluenceReport:
    pairs: List[CriticalPair]
    context_depth: int
    rule_ids: Tuple[int, ...]

    @property
    def total(self) -> int:
        return len(self.pairs)

    @property
    def joinable_count(self) -> int:
        return sum(1 for p in self.pairs if p.joinable)

    @property
    def witnesses(self) -> List[CriticalPair]:
        return [p for p in self.pairs if not p.joinable]

    @property
    def all_joinable(self) -> bool:
        return not self.witnesses

    def to_record(self) -> dict:
        return {"context_depth": self.context_depth, "rules": list(self.rule_ids),
                "pairs": self.total, "joinable": self.joinable_count,
                "non_joinable": len(self.witnesses),
                "witnesses": [p.to_record() for p in self.witnesses],
                "all_pairs": [p.to_record() for p in self.pairs]}

    def to_json(self) -> str:
        return json.dumps(self.to_record(), indent=2)

    def to_text(self, show_all: bool = False) -> str:
        rows = self.pairs if show_all else self.witnesses
        lines = [f"{'rules':<10} {'pos':<6} {'verdict':<13} overlap"]
        for p in rows:
            verdict = "joinable" if p.joinable else "NON-JOINABLE"
            lines.append(f"{p.rule_a:>3}/{p.rule_b:<6} {format_position(p.position):<6} "
                         f"{verdict:<13} {to_text(p.overlap)}")
            if not p.joinable and p.join is not None:
                lines.append(f"{'':>18}left  {to_text(p.left)} ->* {to_text(p.join.left_normal)}")
                lines.append(f"{'':>18}right {to_text(p.right)} ->* {to_text(p.join.right_normal)}")
        lines.append(f"{self.joinable_count}/{self.total} critical pairs joinable "
                     f"(context depth {self.context_depth})")
        return "\n".join(lines)


def confluence_report(rules: RuleSet = RuleSet(), context_depth: int = 1,
                      fuel: int = DEFAULT_FUEL) -> ConfluenceReport:
    pairs = critical_pairs(rules, context_depth)
    for cp in pairs:
        try:
            joinable(cp, rules, fuel)
        except FuelExhausted:
            pass
    return ConfluenceReport(pairs, context_depth, rules.enabled_ids)


def necessity_witnesses(context_depth: int = 1, fuel: int = DEFAULT_FUEL) -> List[CriticalPair]:
    """Pairs that diverge without rules 38/39 but join once they are back.

    These are the divergences the two rules exist to repair.
    """
    without = confluence_report(RuleSet(with_38_39=False), context_depth, fuel)
    full = RuleSet()
    out = []
    for cp in without.witnesses:
        try:
            a = normalize(skolemize(cp.left), full, fuel=fuel)[0]
            b = normalize(skolemize(cp.right), full, fuel=fuel)[0]
        except FuelExhausted:
            continue
        if a == b:
            out.append(cp)
    return out
