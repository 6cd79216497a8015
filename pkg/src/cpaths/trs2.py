"""Level-2 rewriting over rw-equality derivations.

A derivation is built from single forward steps, ``refl2``, ``inv2`` and
``vert2``. The seven level-2 rules mirror rules 1-6 and 37 with
(sigma, tau, rho) read as (inv2, vert2, refl2). Independence of choice
(cd2) is oriented towards the left-first interleaving.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from math import comb
from typing import List, Optional, Sequence, Tuple

from .rewriting import DEFAULT_FUEL, contract
from .rules import CORE_TABLE, EXTENDED_TABLE, rule
from .terms import (
    PathTerm,
    Position,
    format_position,
    parse,
    parse_position,
    replace_at,
    subterm_at,
    to_text,
)

_NAME_TO_ID = {name: id_ for id_, name, _, _ in CORE_TABLE + EXTENDED_TABLE}
_ID_TO_NAME = {id_: name for name, id_ in _NAME_TO_ID.items()}


class DerivationError(ValueError):
    """Ill-formed derivation: a step that does not apply or broken chaining."""


class NotAnInterleaving(DerivationError):
    pass


class Derivation:
    __slots__ = ()

    def to_text(self) -> str:
        raise NotImplementedError

    def __str__(self):
        return self.to_text()


@dataclass(frozen=True)
class Step(Derivation):
    """One forward rw-contraction of ``at`` by ``rule_id`` at ``position``."""

    rule_id: int
    position: Position
    at: PathTerm
    target: PathTerm = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "position", tuple(self.position))
        try:
            r = rule(self.rule_id, extended=True)
        except KeyError:
            raise DerivationError(f"unknown rule {self.rule_id}") from None
        try:
            redex = subterm_at(self.at, self.position)
        except ValueError as exc:
            raise DerivationError(str(exc)) from None
        res = contract(r, redex)
        if res is None:
            raise DerivationError(
                f"rule {r.name} does not apply at {format_position(self.position)} "
                f"of {to_text(self.at)}")
        object.__setattr__(self, "target", replace_at(self.at, self.position, res[0]))

    def to_text(self) -> str:
        return f"step({_ID_TO_NAME[self.rule_id]},{format_position(self.position)},{to_text(self.at)})"


@dataclass(frozen=True)
class Refl2(Derivation):
    term: PathTerm

    def to_text(self) -> str:
        return f"refl2({to_text(self.term)})"


@dataclass(frozen=True)
class Inv2(Derivation):
    d: Derivation

    def to_text(self) -> str:
        return f"inv2({self.d.to_text()})"


@dataclass(frozen=True)
class Vert2(Derivation):
    first: Derivation
    second: Derivation

    def to_text(self) -> str:
        return f"vert2({self.first.to_text()},{self.second.to_text()})"


def endpoints2(d: Derivation) -> Tuple[PathTerm, PathTerm]:
    if isinstance(d, Step):
        return d.at, d.target
    if isinstance(d, Refl2):
        return d.term, d.term
    if isinstance(d, Inv2):
        s, t = endpoints2(d.d)
        return t, s
    if isinstance(d, Vert2):
        s, m = endpoints2(d.first)
        m2, t = endpoints2(d.second)
        if m != m2:
            raise DerivationError(f"vert2 does not chain: {to_text(m)} vs {to_text(m2)}")
        return s, t
    raise TypeError(f"not a derivation: {d!r}")


def chain(ds: Sequence[Derivation]) -> Derivation:
    """Right-nested vertical composite of a non-empty sequence."""
    if not ds:
        raise DerivationError("empty chain")
    out = ds[-1]
    for d in reversed(ds[:-1]):
        out = Vert2(d, out)
    return out


def leaves(d: Derivation) -> int:
    if isinstance(d, Inv2):
        return leaves(d.d)
    if isinstance(d, Vert2):
        return leaves(d.first) + leaves(d.second)
    return 1


# -- the seven level-2 rules ------------------------------------------------

def _rewrite_root(d: Derivation) -> Optional[Tuple[str, Derivation]]:
    if isinstance(d, Inv2):
        if isinstance(d.d, Refl2):
            return "sr2", d.d
        if isinstance(d.d, Inv2):
            return "ss2", d.d.d
        return None
    if isinstance(d, Vert2):
        a, b = d.first, d.second
        if isinstance(b, Inv2) and b.d == a:
            return "tr2", Refl2(endpoints2(a)[0])
        if isinstance(a, Inv2) and a.d == b:
            return "tsr2", Refl2(endpoints2(b)[1])
        if isinstance(b, Refl2):
            return "trr2", a
        if isinstance(a, Refl2):
            return "tlr2", b
        if isinstance(a, Vert2):
            return "tt2", Vert2(a.first, Vert2(a.second, b))
    return None


RULES2 = ("sr2", "ss2", "tr2", "tsr2", "trr2", "tlr2", "tt2", "cd2")


@dataclass(frozen=True)
class Step2:
    rule: str
    path: Tuple[int, ...]
    before: Derivation
    after: Derivation


def _once(d: Derivation, path=()) -> Optional[Tuple[str, Tuple[int, ...], Derivation]]:
    """Leftmost-innermost level-2 step."""
    if isinstance(d, Inv2):
        hit = _once(d.d, path + (0,))
        if hit is not None:
            return hit[0], hit[1], Inv2(hit[2])
    elif isinstance(d, Vert2):
        hit = _once(d.first, path + (0,))
        if hit is not None:
            return hit[0], hit[1], Vert2(hit[2], d.second)
        hit = _once(d.second, path + (1,))
        if hit is not None:
            return hit[0], hit[1], Vert2(d.first, hit[2])
    root = _rewrite_root(d)
    if root is not None:
        return root[0], path, root[1]
    return None


class Fuel2Exhausted(RuntimeError):
    def __init__(self, trace, fuel):
        super().__init__(f"level-2 fuel of {fuel} steps exhausted")
        self.trace = trace


def normalize2(d: Derivation, fuel: int = DEFAULT_FUEL) -> Tuple[Derivation, List[Step2]]:
    endpoints2(d)
    trace: List[Step2] = []
    while True:
        hit = _once(d)
        if hit is None:
            return d, trace
        if len(trace) >= fuel:
            raise Fuel2Exhausted(trace, fuel)
        trace.append(Step2(hit[0], hit[1], d, hit[2]))
        d = hit[2]


# -- independence of choice -------------------------------------------------

def _check_chain(steps: Sequence[Step], side: str):
    for a, b in zip(steps, steps[1:]):
        if a.target != b.at:
            raise DerivationError(f"{side} steps do not chain at {to_text(b.at)}")


def interleavings(theta: Sequence[Step], phi: Sequence[Step]) -> List[Derivation]:
    """Every monotone interleaving of ``theta`` (steps inside the left
    argument) and ``phi`` (inside the right) as derivations on
    ``tau(src(theta), src(phi))``, left-first choice strings first."""
    theta, phi = list(theta), list(phi)
    if not theta or not phi:
        raise DerivationError("interleavings need at least one step on each side")
    _check_chain(theta, "left")
    _check_chain(phi, "right")
    n, m = len(theta), len(phi)
    out = []
    for lefts in itertools.combinations(range(n + m), n):
        out.append(_realize(theta, phi, set(lefts)))
    return out


def _realize(theta, phi, lefts) -> Derivation:
    s, t = theta[0].at, phi[0].at
    i = j = 0
    steps = []
    for k in range(len(theta) + len(phi)):
        if k in lefts:
            st = theta[i]
            steps.append(Step(st.rule_id, (0,) + st.position, PathTerm("tau", (s, t))))
            s, i = st.target, i + 1
        else:
            st = phi[j]
            steps.append(Step(st.rule_id, (1,) + st.position, PathTerm("tau", (s, t))))
            t, j = st.target, j + 1
    return chain(steps)


def flatten(d: Derivation) -> List[Derivation]:
    if isinstance(d, Vert2):
        return flatten(d.first) + flatten(d.second)
    return [d]


def split_interleaving(steps: Sequence[Derivation]) -> Tuple[List[Step], List[Step]]:
    """Recover (theta, phi) from a chain of steps inside a tau, or raise."""
    theta, phi = [], []
    for st in steps:
        if not isinstance(st, Step) or st.at.op != "tau" or not st.position:
            raise NotAnInterleaving("every member must be a forward step inside a tau")
        side = st.position[0]
        inner = Step(st.rule_id, st.position[1:], st.at.args[side])
        (theta if side == 0 else phi).append(inner)
    _check_chain(list(steps), "interleaved")
    if not theta or not phi:
        raise NotAnInterleaving("an interleaving needs steps on both sides")
    return theta, phi


def cd2_canonical(d: Derivation) -> Derivation:
    """The left-first member of the interleaving family containing ``d``."""
    theta, phi = split_interleaving(flatten(d))
    return _realize(theta, phi, set(range(len(theta))))


def _inside_tau(d: Derivation) -> bool:
    return isinstance(d, Step) and d.at.op == "tau" and bool(d.position)


def _cd2_pass(d: Derivation) -> Derivation:
    """Canonicalize every maximal run of interleaved steps in a chain."""
    if isinstance(d, Inv2):
        return Inv2(_cd2_pass(d.d))
    if not isinstance(d, Vert2):
        return d
    parts = [_cd2_pass(x) if isinstance(x, Inv2) else x for x in flatten(d)]
    out: List[Derivation] = []
    i = 0
    while i < len(parts):
        if not _inside_tau(parts[i]):
            out.append(parts[i])
            i += 1
            continue
        j = i
        while j < len(parts) and _inside_tau(parts[j]):
            j += 1
        run = parts[i:j]
        if len({st.position[0] for st in run}) == 2:
            out.extend(flatten(cd2_canonical(chain(run))))
        else:
            out.extend(run)
        i = j
    return chain(out)


def canonical2(d: Derivation, fuel: int = DEFAULT_FUEL) -> Derivation:
    """normalize2 and cd2 to a joint fixpoint."""
    for _ in range(fuel):
        n, _ = normalize2(d, fuel)
        c = _cd2_pass(n)
        if c == n:
            return n
        d = c
    raise Fuel2Exhausted([], fuel)


def rw2_equal(d1: Derivation, d2: Derivation, fuel: int = DEFAULT_FUEL) -> bool:
    e1, e2 = endpoints2(d1), endpoints2(d2)
    if e1 != e2:
        raise DerivationError(
            f"endpoints differ: {to_text(e1[0])} => {to_text(e1[1])} "
            f"vs {to_text(e2[0])} => {to_text(e2[1])}")
    return canonical2(d1, fuel) == canonical2(d2, fuel)


def interleaving_count(n: int, m: int) -> int:
    return comb(n + m, n)


# -- text form --------------------------------------------------------------

def _split_args(text: str) -> List[str]:
    parts, depth, start = [], 0, 0
    for i, ch in enumerate(text):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        elif ch == "," and depth == 0:
            parts.append(text[start:i])
            start = i + 1
    parts.append(text[start:])
    return [p.strip() for p in parts]


def parse_derivation(text: str) -> Derivation:
    text = text.strip()
    head, sep, rest = text.partition("(")
    head = head.strip()
    if not sep or not rest.endswith(")"):
        raise DerivationError(f"cannot parse derivation {text!r}")
    args = _split_args(rest[:-1])
    if head == "refl2" and len(args) == 1:
        return Refl2(parse(args[0]))
    if head == "inv2" and len(args) == 1:
        return Inv2(parse_derivation(args[0]))
    if head == "vert2" and len(args) == 2:
        return Vert2(parse_derivation(args[0]), parse_derivation(args[1]))
    if head == "step" and len(args) >= 3:
        name, pos = args[0], args[1]
        term = ",".join(args[2:])
        rid = int(name) if name.isdigit() else _NAME_TO_ID.get(name)
        if rid is None:
            raise DerivationError(f"unknown rule {name!r}")
        return Step(rid, parse_position(pos), parse(term))
    raise DerivationError(f"cannot parse derivation {text!r}")


# -- random derivations -----------------------------------------------------

def random_derivation(rng: random.Random, max_leaves: int = 16, max_depth: int = 5,
                      path_len: int = 6) -> Derivation:
    """A random derivation with at most ``max_leaves`` step/refl leaves.

    A random forward rewrite path t0 -> ... -> tk is built first; the
    derivation then walks between its points with random bracketing,
    reversals and detours.
    """
    from .generators import random_term
    from .rewriting import applicable_rules

    path_steps: List[Step] = []
    while True:
        t = random_term(rng, max_depth)
        path_steps = []
        for _ in range(path_len):
            redexes = applicable_rules(t)
            if not redexes:
                break
            rid, pos = rng.choice(redexes)
            st = Step(rid, pos, t)
            path_steps.append(st)
            t = st.target
        if path_steps:
            break
    points = [path_steps[0].at] + [s.target for s in path_steps]
    k = len(path_steps)

    def build(i: int, j: int, budget: int) -> Derivation:
        if i == j and (budget <= 1 or rng.random() < 0.3):
            return Refl2(points[i])
        if i > j:
            return Inv2(build(j, i, budget))
        if j == i + 1 and (budget <= 1 or rng.random() < 0.6):
            return path_steps[i]
        if budget <= 1:
            return path_steps[i] if j == i + 1 else Refl2(points[i])
        if j - i > budget:
            raise AssertionError("budget below distance")
        mids = [x for x in range(k + 1)
                if max(1, abs(x - i)) + max(1, abs(j - x)) <= budget]
        mid = rng.choice(mids)
        lo, hi = max(1, abs(mid - i)), budget - max(1, abs(j - mid))
        lb = rng.randint(lo, hi)
        return Vert2(build(i, mid, lb), build(mid, j, budget - lb))

    while True:
        i, j = rng.randint(0, k), rng.randint(0, k)
        if abs(i - j) <= max_leaves:
            d = build(i, j, max_leaves)
            if leaves(d) <= max_leaves:
                return d
