"""Single-step contraction, normalization, traces and rw-equality."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Dict, Iterator, List, Mapping, Optional, Tuple

from .rules import RewriteRule, RuleSet
from .terms import (
    CONGRUENCE_OPS,
    HOLE,
    Context,
    FunLabel,
    PathTerm,
    Position,
    format_position,
    replace_at,
    subterm_at,
    to_text,
)

INNERMOST = "leftmost_innermost"
OUTERMOST = "leftmost_outermost"
_STRATEGY_ALIASES = {"in": INNERMOST, "innermost": INNERMOST, INNERMOST: INNERMOST,
                     "out": OUTERMOST, "outermost": OUTERMOST, OUTERMOST: OUTERMOST}

DEFAULT_FUEL = 10_000

Binding = Dict[str, object]


class FuelExhausted(RuntimeError):
    """Normalization ran out of steps; carries the partial trace."""

    def __init__(self, trace: "Trace", fuel: int):
        super().__init__(f"fuel of {fuel} steps exhausted while normalizing {to_text(trace.start)}")
        self.trace = trace
        self.fuel = fuel


def strategy_name(strategy: str) -> str:
    try:
        return _STRATEGY_ALIASES[strategy]
    except KeyError:
        raise ValueError(f"unknown strategy {strategy!r}") from None


# -- matching ---------------------------------------------------------------

def context_positions(t: PathTerm) -> Iterator[Position]:
    """Candidate hole positions: root, then by increasing depth, leftmost first.

    Holes only descend through congruence constructors.
    """
    queue: deque = deque([((), t)])
    while queue:
        pos, s = queue.popleft()
        yield pos
        if s.op in CONGRUENCE_OPS:
            for i, a in enumerate(s.args):
                queue.append((pos + (i,), a))


def _match_label(pat: FunLabel, lab: FunLabel, b: Binding) -> Optional[Binding]:
    if pat.kind == "meta":
        key = "fun:" + pat.name
        if key in b:
            return b if b[key] == lab else None
        nb = dict(b)
        nb[key] = lab
        return nb
    if pat.kind == "composite":
        if lab.kind != "composite":
            return None
        b2 = _match_label(pat.parts[0], lab.parts[0], b)
        return None if b2 is None else _match_label(pat.parts[1], lab.parts[1], b2)
    return b if pat == lab else None


def _match(pat: PathTerm, t: PathTerm, b: Binding) -> Iterator[Binding]:
    op = pat.op
    if op == "var":
        bound = b.get(pat.label)
        if bound is None:
            nb = dict(b)
            nb[pat.label] = t
            yield nb
        elif bound == t:
            yield b
        return
    if op == "ctx":
        name = pat.label
        bound = b.get(name)
        if bound is not None:
            inner = bound.unplug(t)
            if inner is not None:
                yield from _match(pat.args[0], inner, b)
            return
        for pos in context_positions(t):
            nb = dict(b)
            nb[name] = Context(replace_at(t, pos, HOLE), pos)
            yield from _match(pat.args[0], subterm_at(t, pos), nb)
        return
    if op != t.op or len(pat.args) != len(t.args):
        return
    if op == "muf":
        b = _match_label(pat.label, t.label, b)
        if b is None:
            return
    elif op == "atom" and pat.label != t.label:
        return
    yield from _match_args(pat.args, t.args, 0, b)


def _match_args(pats, ts, i, b) -> Iterator[Binding]:
    if i == len(pats):
        yield b
        return
    for b2 in _match(pats[i], ts[i], b):
        yield from _match_args(pats, ts, i + 1, b2)


def _instantiate_label(lab: FunLabel, b: Binding) -> FunLabel:
    if lab.kind == "meta":
        return b["fun:" + lab.name]
    if lab.kind == "composite":
        return FunLabel.composite(_instantiate_label(lab.parts[0], b),
                                  _instantiate_label(lab.parts[1], b))
    return lab


def instantiate(schema: PathTerm, b: Mapping[str, object]) -> PathTerm:
    op = schema.op
    if op == "var":
        return b[schema.label]
    if op == "ctx":
        return b[schema.label].plug(instantiate(schema.args[0], b))
    if not schema.args:
        return schema
    args = tuple(instantiate(a, b) for a in schema.args)
    if op == "muf":
        return PathTerm(op, args, _instantiate_label(schema.label, b))
    return schema.with_args(args)


def match_rule(rule: RewriteRule, p: PathTerm) -> Optional[Binding]:
    """First binding (in context search order) of any variant of ``rule`` at the root."""
    found = _match_rule_variant(rule, p)
    return None if found is None else found[1]


def _match_rule_variant(rule: RewriteRule, p: PathTerm):
    for k, (lhs, _) in enumerate(rule.variants):
        for b in _match(lhs, p, {}):
            return k, b
    return None


def contract(rule: RewriteRule, p: PathTerm) -> Optional[Tuple[PathTerm, Binding]]:
    """Root contraction of ``p`` by ``rule``: (reduct, binding) or None."""
    found = _match_rule_variant(rule, p)
    if found is None:
        return None
    k, b = found
    return instantiate(rule.variants[k][1], b), b


# -- steps and traces -------------------------------------------------------

@dataclass(frozen=True)
class RewriteStep:
    rule_id: int
    position: Position
    before: PathTerm
    after: PathTerm
    binding: Mapping[str, object] = field(default_factory=dict, compare=False)
    rule_name: str = field(default="", compare=False)

    def to_record(self) -> dict:
        return {
            "rule": self.rule_name or str(self.rule_id),
            "rule_id": self.rule_id,
            "position": format_position(self.position),
            "before": to_text(self.before),
            "after": to_text(self.after),
        }

    def __str__(self):
        return (f"{to_text(self.before)} |>_{self.rule_name or self.rule_id}"
                f"@{format_position(self.position)} {to_text(self.after)}")


@dataclass(frozen=True)
class Trace:
    start: PathTerm
    steps: Tuple[RewriteStep, ...] = ()

    @property
    def end(self) -> PathTerm:
        return self.steps[-1].after if self.steps else self.start

    def __len__(self):
        return len(self.steps)

    def to_record(self) -> dict:
        return {"start": to_text(self.start), "end": to_text(self.end),
                "steps": [s.to_record() for s in self.steps]}


class _Index:
    """Rules bucketed by the head operator of their left-hand sides."""

    def __init__(self, rules: RuleSet):
        self.by_head: Dict[Tuple[str, int], List[RewriteRule]] = {}
        self.ctx_rooted: List[RewriteRule] = []
        for r in rules:
            heads = set()
            for lhs, _ in r.variants:
                if lhs.op in ("ctx", "var"):
                    heads = None
                    break
                heads.add((lhs.op, len(lhs.args)))
            if heads is None:
                self.ctx_rooted.append(r)
                continue
            for h in heads:
                self.by_head.setdefault(h, []).append(r)

    def candidates(self, t: PathTerm) -> List[RewriteRule]:
        found = self.by_head.get((t.op, len(t.args)), [])
        if self.ctx_rooted:
            found = sorted(found + self.ctx_rooted, key=lambda r: r.id)
        return found


_INDEX_CACHE: Dict[RuleSet, _Index] = {}


def _index(rules: RuleSet) -> _Index:
    idx = _INDEX_CACHE.get(rules)
    if idx is None:
        idx = _INDEX_CACHE[rules] = _Index(rules)
    return idx


def _root_step(t: PathTerm, idx: _Index):
    for r in idx.candidates(t):
        res = contract(r, t)
        if res is not None:
            return r, res[0], res[1]
    return None


def _find_redex(t: PathTerm, idx: _Index, strategy: str, normal: set):
    """Locate the first redex in strategy order, skipping known-normal subterms."""
    if t in normal:
        return None
    if strategy == OUTERMOST:
        hit = _root_step(t, idx)
        if hit is not None:
            return (), hit
    for i, a in enumerate(t.args):
        found = _find_redex(a, idx, strategy, normal)
        if found is not None:
            return (i,) + found[0], found[1]
    if strategy == INNERMOST:
        hit = _root_step(t, idx)
        if hit is not None:
            return (), hit
    normal.add(t)
    return None


def rewrite_once(p: PathTerm, rules: RuleSet = RuleSet(), strategy: str = INNERMOST,
                 _normal: Optional[set] = None) -> Optional[RewriteStep]:
    """The step at the first redex in strategy order; lowest rule id wins."""
    strategy = strategy_name(strategy)
    found = _find_redex(p, _index(rules), strategy, set() if _normal is None else _normal)
    if found is None:
        return None
    pos, (r, reduct, binding) = found
    return RewriteStep(r.id, pos, p, replace_at(p, pos, reduct), binding, r.name)


def normalize(p: PathTerm, rules: RuleSet = RuleSet(), strategy: str = INNERMOST,
              fuel: int = DEFAULT_FUEL) -> Tuple[PathTerm, Trace]:
    if fuel <= 0:
        raise ValueError("fuel must be positive")
    strategy = strategy_name(strategy)
    normal: set = set()
    steps: List[RewriteStep] = []
    t = p
    while True:
        step = rewrite_once(t, rules, strategy, normal)
        if step is None:
            return t, Trace(p, tuple(steps))
        if len(steps) >= fuel:
            raise FuelExhausted(Trace(p, tuple(steps)), fuel)
        steps.append(step)
        t = step.after


def normal_form(p: PathTerm, rules: RuleSet = RuleSet(), strategy: str = INNERMOST,
                fuel: int = DEFAULT_FUEL) -> PathTerm:
    return normalize(p, rules, strategy, fuel)[0]


def rw_equal(p: PathTerm, q: PathTerm, rules: RuleSet = RuleSet(),
             fuel: int = DEFAULT_FUEL, strategy: str = INNERMOST) -> Tuple[bool, Tuple[Trace, Trace]]:
    np_, tp = normalize(p, rules, strategy, fuel)
    nq, tq = normalize(q, rules, strategy, fuel)
    return np_ == nq, (tp, tq)


def applicable_rules(p: PathTerm, rules: RuleSet = RuleSet()) -> List[Tuple[int, Position]]:
    """Every redex as (rule id, position): positions in pre-order, ids ascending."""
    from .terms import positions

    idx = _index(rules)
    out = []
    for pos in positions(p):
        sub = subterm_at(p, pos)
        for r in idx.candidates(sub):
            if match_rule(r, sub) is not None:
                out.append((r.id, pos))
    return out


def replay(step: RewriteStep, rules: RuleSet = RuleSet(extended_40_42=True)) -> bool:
    """Check a step against its own invariant."""
    r = next((x for x in rules if x.id == step.rule_id), None)
    if r is None:
        return False
    try:
        redex = subterm_at(step.before, step.position)
    except ValueError:
        return False
    res = contract(r, redex)
    return res is not None and replace_at(step.before, step.position, res[0]) == step.after


def check_trace(trace: Trace, rules: RuleSet = RuleSet(extended_40_42=True)) -> bool:
    prev = trace.start
    for s in trace.steps:
        if s.before != prev or not replay(s, rules):
            return False
        prev = s.after
    return True
