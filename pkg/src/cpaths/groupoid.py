"""Fundamental group and groupoid structure on typed paths.

Paths here live in the typed fragment (atoms, rho, sigma, tau). Every law
is checked as equality of normal forms under the core rules.
"""

from __future__ import annotations

import json
import random
from collections import deque
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from .generators import random_bracketing, random_typed_path
from .rewriting import DEFAULT_FUEL, normal_form
from .rules import RuleSet
from .terms import (
    Atom,
    EndpointError,
    ParseError,
    PathTerm,
    Rho,
    Sigma,
    Tau,
    endpoints,
    parse,
    to_text,
)

Letter = Tuple[str, int]  # (generator, +1 or -1)
Word = Tuple[Letter, ...]

CORE = RuleSet()


class PresentationError(ValueError):
    def __init__(self, message: str, line: Optional[int] = None):
        super().__init__(message if line is None else f"line {line}: {message}")
        self.line = line


def nf(p: PathTerm, fuel: int = DEFAULT_FUEL) -> PathTerm:
    return normal_form(p, CORE, fuel=fuel)


# -- typing with unannotated rho --------------------------------------------

class _Objects:
    """Union-find over object names and placeholders for bare rho."""

    def __init__(self):
        self.parent: Dict[str, str] = {}

    def find(self, x: str) -> str:
        self.parent.setdefault(x, x)
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, a: str, b: str, where: PathTerm):
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return
        if not ra.startswith("?") and not rb.startswith("?"):
            raise EndpointError(f"endpoint mismatch {ra} vs {rb} in {to_text(where)}")
        if ra.startswith("?"):
            self.parent[ra] = rb
        else:
            self.parent[rb] = ra


def infer_endpoints(p: PathTerm, env: Mapping[str, Tuple[str, str]]) -> Tuple[str, str]:
    """Endpoints of a typed term where a bare ``rho`` takes whatever object
    its neighbours force. Unforced objects come back as ``?n``."""
    uf = _Objects()
    counter = [0]

    def go(t: PathTerm) -> Tuple[str, str]:
        if t.op == "rho":
            if t.meta is not None:
                return t.meta, t.meta
            counter[0] += 1
            v = f"?{counter[0]}"
            return v, v
        if t.op == "atom":
            return endpoints(t, env)
        if t.op == "sigma":
            x, y = go(t.args[0])
            return y, x
        if t.op == "tau":
            x, y = go(t.args[0])
            y2, z = go(t.args[1])
            uf.union(y, y2, t)
            return x, z
        raise EndpointError(f"{t.op} is outside the typed fragment")

    x, y = go(p)
    return uf.find(x), uf.find(y)


# -- presentations ----------------------------------------------------------

@dataclass(frozen=True)
class GroupoidPresentation:
    objects: Tuple[str, ...]
    generators: Tuple[Tuple[str, Tuple[str, str]], ...]
    relations: Tuple[Tuple[PathTerm, PathTerm], ...] = ()
    basepoint: Optional[str] = None

    def __post_init__(self):
        objs = set(self.objects)
        if self.basepoint is None and self.objects:
            object.__setattr__(self, "basepoint", self.objects[0])
        if self.basepoint is not None and self.basepoint not in objs:
            raise PresentationError(f"basepoint {self.basepoint} is not a declared object")
        seen = set()
        for name, (src, tgt) in self.generators:
            if name in seen:
                raise PresentationError(f"generator {name} declared twice")
            seen.add(name)
            for o in (src, tgt):
                if o not in objs:
                    raise PresentationError(f"generator {name} uses undeclared object {o}")
        for lhs, rhs in self.relations:
            self.relation_endpoints(lhs, rhs)

    @property
    def env(self) -> Dict[str, Tuple[str, str]]:
        return dict(self.generators)

    def relation_endpoints(self, lhs: PathTerm, rhs: PathTerm) -> Tuple[str, str]:
        env = self.env
        for a in _atoms(lhs) | _atoms(rhs):
            if a not in env:
                raise PresentationError(f"relation uses unknown generator {a}")
        l, r = infer_endpoints(lhs, env), infer_endpoints(rhs, env)
        ends = []
        for a, b in zip(l, r):
            if a.startswith("?"):
                a = b
            if b.startswith("?"):
                b = a
            if a != b:
                raise PresentationError(
                    f"relation sides have different endpoints: {to_text(lhs)} = {to_text(rhs)}")
            ends.append(a)
        return ends[0], ends[1]

    def typed(self, p: PathTerm) -> PathTerm:
        """Attach endpoints to atoms and basepoints to bare rho where forced."""
        return _annotate(p, self.env)

    def adjacency(self) -> Dict[str, List[Tuple[PathTerm, str]]]:
        adj: Dict[str, List[Tuple[PathTerm, str]]] = {o: [] for o in self.objects}
        for name, (src, tgt) in self.generators:
            a = Atom(name, (src, tgt))
            adj[src].append((a, tgt))
            adj[tgt].append((Sigma(a), src))
        return adj

    def components(self) -> List[List[str]]:
        adj = self.adjacency()
        seen, out = set(), []
        for o in self.objects:
            if o in seen:
                continue
            comp, queue = [], deque([o])
            seen.add(o)
            while queue:
                x = queue.popleft()
                comp.append(x)
                for _, y in adj[x]:
                    if y not in seen:
                        seen.add(y)
                        queue.append(y)
            out.append(comp)
        return out

    def connected(self) -> bool:
        return len(self.components()) <= 1

    def shortest_path(self, src: str, tgt: str) -> Optional[List[PathTerm]]:
        """Letters of a shortest generator word from ``src`` to ``tgt``."""
        adj = self.adjacency()
        prev: Dict[str, Tuple[str, PathTerm]] = {}
        queue, seen = deque([src]), {src}
        while queue:
            x = queue.popleft()
            if x == tgt:
                word = []
                while x != src:
                    x, letter = prev[x]
                    word.append(letter)
                return word[::-1]
            for letter, y in adj[x]:
                if y not in seen:
                    seen.add(y)
                    prev[y] = (x, letter)
                    queue.append(y)
        return None

    def to_text(self) -> str:
        lines = [f"object {o}" for o in self.objects]
        lines += [f"gen {n} : {s} -> {t}" for n, (s, t) in self.generators]
        lines += [f"rel {to_text(l)} = {to_text(r)}" for l, r in self.relations]
        if self.basepoint is not None:
            lines.append(f"base {self.basepoint}")
        return "\n".join(lines) + "\n"


def _atoms(p: PathTerm) -> set:
    if p.op == "atom":
        return {p.label}
    out = set()
    for a in p.args:
        out |= _atoms(a)
    return out


def _annotate(p: PathTerm, env: Mapping[str, Tuple[str, str]]) -> PathTerm:
    if p.op == "atom":
        ends = env.get(p.label, p.meta)
        return Atom(p.label, tuple(ends) if ends is not None else None)
    if p.op == "rho" and p.meta is None:
        return p
    if not p.args:
        return p
    return p.with_args(tuple(_annotate(a, env) for a in p.args))


def parse_presentation(text: str) -> GroupoidPresentation:
    objects: List[str] = []
    gens: List[Tuple[str, Tuple[str, str]]] = []
    rels: List[Tuple[PathTerm, PathTerm]] = []
    base = None
    rel_lines = []
    for n, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        kw, _, rest = line.partition(" ")
        rest = rest.strip()
        if kw == "object":
            if not rest or " " in rest:
                raise PresentationError("expected: object <name>", n)
            if rest in objects:
                raise PresentationError(f"object {rest} declared twice", n)
            objects.append(rest)
        elif kw == "gen":
            name, colon, arrow = rest.partition(":")
            src, sep, tgt = arrow.partition("->")
            name, src, tgt = name.strip(), src.strip(), tgt.strip()
            if not colon or not sep or not name or not src or not tgt:
                raise PresentationError("expected: gen <name> : <obj> -> <obj>", n)
            gens.append((name, (src, tgt)))
        elif kw == "rel":
            lhs, eq, rhs = rest.partition("=")
            if not eq:
                raise PresentationError("expected: rel <path> = <path>", n)
            try:
                rels.append((parse(lhs), parse(rhs)))
            except ParseError as exc:
                raise PresentationError(str(exc), n) from None
            rel_lines.append(n)
        elif kw == "base":
            if not rest:
                raise PresentationError("expected: base <object>", n)
            base = rest
        else:
            raise PresentationError(f"unknown directive {kw!r}", n)
    if base is None and objects:
        base = objects[0]
    try:
        pres = GroupoidPresentation(tuple(objects), tuple(gens), (), base)
        for (l, r), n in zip(rels, rel_lines):
            try:
                pres.relation_endpoints(l, r)
            except (PresentationError, EndpointError) as exc:
                raise PresentationError(str(exc), n) from None
        return GroupoidPresentation(tuple(objects), tuple(gens), tuple(rels), base)
    except EndpointError as exc:
        raise PresentationError(str(exc)) from None


def load_presentation(path: str) -> GroupoidPresentation:
    with open(path, encoding="utf-8") as fh:
        return parse_presentation(fh.read())


# -- path classes and group operations ---------------------------------------

@dataclass(frozen=True)
class PathClass:
    representative: PathTerm
    source: str
    target: str

    @classmethod
    def of(cls, p: PathTerm, env: Mapping[str, Tuple[str, str]] = {}) -> "PathClass":
        src, tgt = endpoints(p, env)
        return cls(nf(p), src, tgt)

    def __str__(self):
        return f"[{to_text(self.representative)}] : {self.source} -> {self.target}"


def compose(r: PathTerm, s: PathTerm, env: Optional[Mapping[str, Tuple[str, str]]] = None) -> PathTerm:
    """``r . s``: first ``s``, then ``r``."""
    if env is not None:
        _, ts = endpoints(s, env)
        sr, _ = endpoints(r, env)
        if ts != sr:
            raise EndpointError(f"cannot compose: {to_text(s)} ends at {ts}, "
                                f"{to_text(r)} starts at {sr}")
    return Tau(s, r)


def inverse(r: PathTerm) -> PathTerm:
    return Sigma(r)


def identity(x: str) -> PathTerm:
    return Rho(x)


def rw_eq(p: PathTerm, q: PathTerm) -> bool:
    return nf(p) == nf(q)


# -- law reports -------------------------------------------------------------

@dataclass
class LawResult:
    checked: int = 0
    failures: List[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures

    def record(self, ok: bool, counterexample: str):
        self.checked += 1
        if not ok:
            self.failures.append(counterexample)


@dataclass
class LawReport:
    title: str
    laws: Dict[str, LawResult] = field(default_factory=dict)
    notes: List[str] = field(default_factory=list)

    def law(self, name: str) -> LawResult:
        return self.laws.setdefault(name, LawResult())

    @property
    def passed(self) -> bool:
        return all(l.passed for l in self.laws.values())

    @property
    def violations(self) -> int:
        return sum(len(l.failures) for l in self.laws.values())

    def to_record(self) -> dict:
        return {"title": self.title, "passed": self.passed, "notes": self.notes,
                "laws": {k: {"checked": v.checked, "violations": len(v.failures),
                             "counterexamples": v.failures[:5]}
                         for k, v in self.laws.items()}}

    def to_json(self) -> str:
        return json.dumps(self.to_record(), indent=2)

    def to_text(self) -> str:
        lines = [self.title]
        for name, res in self.laws.items():
            verdict = "PASS" if res.passed else "FAIL"
            lines.append(f"  {name:<16} {verdict}  {res.checked - len(res.failures)}/{res.checked}")
            for c in res.failures[:3]:
                lines.append(f"      counterexample: {c}")
        lines.extend(f"  note: {n}" for n in self.notes)
        return "\n".join(lines)


def random_loop(rng: random.Random, pres: GroupoidPresentation, at: Optional[str] = None,
                max_len: int = 6) -> PathTerm:
    at = at or pres.basepoint
    p = random_typed_path(rng, pres.env, at, max_len, end=at)
    return Rho(at) if p is None else p


def random_path(rng: random.Random, pres: GroupoidPresentation, src: str, tgt: str,
                max_len: int = 6) -> PathTerm:
    """A random path src -> tgt: loop, shortest connection, loop."""
    bridge = pres.shortest_path(src, tgt)
    if bridge is None:
        raise EndpointError(f"{src} and {tgt} are not connected")
    parts = []
    for at, where in ((src, 0), (tgt, 1)):
        loop = random_loop(rng, pres, at, max(0, (max_len - len(bridge)) // 2))
        if loop.op != "rho" or rng.random() < 0.2:
            parts.append((where, loop))
    word = [p for w, p in parts if w == 0] + bridge + [p for w, p in parts if w == 1]
    if not word:
        return Rho(src)
    return random_bracketing(rng, word)


def check_group(pres: GroupoidPresentation, samples: int = 1000, max_word_len: int = 6,
                seed: int = 0) -> LawReport:
    rng = random.Random(seed)
    env, base = pres.env, pres.basepoint
    report = LawReport(f"group laws at {base}")
    if not pres.connected():
        report.notes.append("presentation is not connected; loops sampled at the basepoint only")
    e = identity(base)
    for _ in range(samples):
        r, s, t = (random_loop(rng, pres, base, max_word_len) for _ in range(3))
        rs = compose(r, s, env)
        report.law("closure").record(endpoints(rs, env) == (base, base), to_text(rs))
        report.law("identity").record(
            rw_eq(compose(r, e, env), r) and rw_eq(compose(e, r, env), r), to_text(r))
        report.law("inverse").record(
            rw_eq(compose(inverse(r), r, env), e) and rw_eq(compose(r, inverse(r), env), e),
            to_text(r))
        report.law("associativity").record(
            rw_eq(compose(r, compose(s, t, env), env), compose(compose(r, s, env), t, env)),
            f"{to_text(r)} ; {to_text(s)} ; {to_text(t)}")
    return report


def check_weak_groupoid(pres: GroupoidPresentation, samples: int = 1000, max_word_len: int = 6,
                        seed: int = 0) -> LawReport:
    """Category laws on composable (not necessarily closed) paths."""
    rng = random.Random(seed)
    report = LawReport("weak groupoid laws")
    objs = list(pres.objects)
    comps = {o: c for c in pres.components() for o in c}
    for _ in range(samples):
        x = rng.choice(objs)
        y, z, w = (rng.choice(comps[x]) for _ in range(3))
        r = random_path(rng, pres, x, y, max_word_len)
        s = random_path(rng, pres, y, z, max_word_len)
        t = random_path(rng, pres, z, w, max_word_len)
        report.law("associativity").record(
            rw_eq(Tau(Tau(r, s), t), Tau(r, Tau(s, t))),
            f"{to_text(r)} ; {to_text(s)} ; {to_text(t)}")
        report.law("left unit").record(rw_eq(Tau(Rho(x), r), r), to_text(r))
        report.law("right unit").record(rw_eq(Tau(r, Rho(y)), r), to_text(r))
        report.law("inverse").record(
            rw_eq(Tau(r, Sigma(r)), Rho(x)) and rw_eq(Tau(Sigma(r), r), Rho(y)), to_text(r))
    return report


# -- basepoint change and transport morphisms ---------------------------------

@dataclass(frozen=True)
class BasepointChange:
    """Conjugation along ``s : x0 -> x1`` and its inverse."""

    s: PathTerm
    source_base: str
    target_base: str

    def forward(self, alpha: PathTerm) -> PathTerm:
        return nf(Tau(Tau(Sigma(self.s), alpha), self.s))

    def backward(self, beta: PathTerm) -> PathTerm:
        return nf(Tau(Tau(self.s, beta), Sigma(self.s)))


def basepoint_change(pres: GroupoidPresentation, s: PathTerm) -> BasepointChange:
    x0, x1 = endpoints(s, pres.env)
    return BasepointChange(s, x0, x1)


@dataclass(frozen=True)
class TransportMorphism:
    """``f_phi``: conjugation by the transport path ``phi : x -> y``."""

    phi: PathTerm
    source_base: str
    target_base: str

    @classmethod
    def along(cls, phi: PathTerm, env: Mapping[str, Tuple[str, str]] = {}) -> "TransportMorphism":
        x, y = endpoints(phi, env)
        return cls(phi, x, y)

    @classmethod
    def identity(cls, x: str) -> "TransportMorphism":
        return cls(Rho(x), x, x)

    def check(self, env: Mapping[str, Tuple[str, str]]):
        if endpoints(self.phi, env) != (self.source_base, self.target_base):
            raise EndpointError(f"transport path {to_text(self.phi)} is not "
                                f"{self.source_base} -> {self.target_base}")

    def __call__(self, alpha: PathTerm) -> PathTerm:
        return apply_morphism(self, alpha)

    def inverse(self) -> "TransportMorphism":
        return TransportMorphism(Sigma(self.phi), self.target_base, self.source_base)


def apply_morphism(m: TransportMorphism, alpha: PathTerm,
                   env: Optional[Mapping[str, Tuple[str, str]]] = None) -> PathTerm:
    if env is not None:
        src, tgt = endpoints(alpha, env)
        if src != m.source_base or tgt != m.source_base:
            raise EndpointError(f"{to_text(alpha)} is not a loop at {m.source_base}")
    return nf(Tau(Tau(Sigma(m.phi), alpha), m.phi))


def compose_morphisms(f: TransportMorphism, g: TransportMorphism) -> TransportMorphism:
    """``g . f`` (apply ``f`` first)."""
    if f.target_base != g.source_base:
        raise EndpointError(f"cannot compose morphisms: {f.target_base} vs {g.source_base}")
    return TransportMorphism(Tau(f.phi, g.phi), f.source_base, g.target_base)


def check_homomorphism(m: TransportMorphism, pres: GroupoidPresentation, samples: int = 1000,
                       max_word_len: int = 6, seed: int = 0) -> LawReport:
    rng = random.Random(seed)
    report = LawReport(f"homomorphism of f[{to_text(m.phi)}]")
    for _ in range(samples):
        a = random_loop(rng, pres, m.source_base, max_word_len)
        b = random_loop(rng, pres, m.source_base, max_word_len)
        lhs = m(compose(b, a))
        rhs = nf(compose(m(b), m(a)))
        report.law("homomorphism").record(lhs == rhs, f"alpha={to_text(a)} beta={to_text(b)}")
    return report


def check_isomorphism(m: TransportMorphism, pres: GroupoidPresentation, samples: int = 1000,
                      max_word_len: int = 6, seed: int = 0) -> LawReport:
    rng = random.Random(seed)
    inv = m.inverse()
    report = LawReport(f"isomorphism of f[{to_text(m.phi)}]")
    for _ in range(samples):
        a = random_loop(rng, pres, m.source_base, max_word_len)
        report.law("inverse after").record(inv(m(a)) == nf(a), to_text(a))
        b = random_loop(rng, pres, m.target_base, max_word_len)
        report.law("inverse before").record(m(inv(b)) == nf(b), to_text(b))
    return report


def check_morphism_laws(pres: GroupoidPresentation, samples: int = 1000, max_word_len: int = 6,
                        seed: int = 0) -> LawReport:
    """Identity, composite, associativity, unit, homomorphism, isomorphism."""
    rng = random.Random(seed)
    report = LawReport("transport morphism laws")
    objs = list(pres.objects)
    comps = {o: c for c in pres.components() for o in c}
    for _ in range(samples):
        x = rng.choice(objs)
        y, z, w = (rng.choice(comps[x]) for _ in range(3))
        f = TransportMorphism(random_path(rng, pres, x, y, max_word_len), x, y)
        g = TransportMorphism(random_path(rng, pres, y, z, max_word_len), y, z)
        h = TransportMorphism(random_path(rng, pres, z, w, max_word_len), z, w)
        a = random_loop(rng, pres, x, max_word_len)
        b = random_loop(rng, pres, x, max_word_len)
        tag = f"phi={to_text(f.phi)} alpha={to_text(a)}"
        ix = TransportMorphism.identity(x)
        report.law("identity").record(ix(a) == nf(a), tag)
        report.law("composite").record(compose_morphisms(f, g)(a) == g(f(a)), tag)
        report.law("associativity").record(
            compose_morphisms(compose_morphisms(f, g), h)(a)
            == compose_morphisms(f, compose_morphisms(g, h))(a), tag)
        iy = TransportMorphism.identity(y)
        report.law("unit").record(
            compose_morphisms(ix, f)(a) == f(a) and compose_morphisms(f, iy)(a) == f(a), tag)
        report.law("homomorphism").record(f(compose(b, a)) == nf(compose(f(b), f(a))),
                                          f"{tag} beta={to_text(b)}")
        report.law("isomorphism").record(f.inverse()(f(a)) == nf(a), tag)
    return report


def check_basepoint_change(pres: GroupoidPresentation, samples: int = 1000,
                           max_word_len: int = 6, seed: int = 0) -> LawReport:
    rng = random.Random(seed)
    report = LawReport("basepoint change round trip")
    objs = list(pres.objects)
    comps = {o: c for c in pres.components() for o in c}
    for _ in range(samples):
        x0 = rng.choice(objs)
        x1 = rng.choice(comps[x0])
        s = random_path(rng, pres, x0, x1, max_word_len)
        ch = basepoint_change(pres, s)
        a = random_loop(rng, pres, x0, max_word_len)
        b = random_loop(rng, pres, x1, max_word_len)
        report.law("round trip x0").record(ch.backward(ch.forward(a)) == nf(a),
                                           f"s={to_text(s)} alpha={to_text(a)}")
        report.law("round trip x1").record(ch.forward(ch.backward(b)) == nf(b),
                                           f"s={to_text(s)} beta={to_text(b)}")
    return report


# -- elements of pi* ----------------------------------------------------------

def word_of(p: PathTerm) -> Word:
    """Letters of a normal form in the typed fragment (right-nested tau)."""
    if p.op == "rho":
        return ()
    if p.op == "atom":
        return ((p.label, 1),)
    if p.op == "sigma" and p.args[0].op == "atom":
        return ((p.args[0].label, -1),)
    if p.op == "tau":
        return word_of(p.args[0]) + word_of(p.args[1])
    raise ValueError(f"{to_text(p)} is not a generator word")


def term_of(word: Sequence[Letter], env: Mapping[str, Tuple[str, str]], at: str) -> PathTerm:
    letters = [Atom(g, tuple(env[g])) if e > 0 else Sigma(Atom(g, tuple(env[g])))
               for g, e in word]
    if not letters:
        return Rho(at)
    out = letters[-1]
    for l in reversed(letters[:-1]):
        out = Tau(l, out)
    return out


def free_reduce(word: Iterable[Letter]) -> Word:
    out: List[Letter] = []
    for g, e in word:
        if out and out[-1] == (g, -e):
            out.pop()
        else:
            out.append((g, e))
    return tuple(out)


def _loop_words(pres: GroupoidPresentation, max_len: int) -> List[Word]:
    env, base = pres.env, pres.basepoint
    moves: Dict[str, List[Tuple[Letter, str]]] = {}
    for name, (src, tgt) in env.items():
        moves.setdefault(src, []).append(((name, 1), tgt))
        moves.setdefault(tgt, []).append(((name, -1), src))
    out: List[Word] = []
    frontier: List[Tuple[Word, str]] = [((), base)]
    for _ in range(max_len + 1):
        nxt = []
        for w, here in frontier:
            if here == base:
                out.append(w)
            for letter, there in moves.get(here, ()):
                nxt.append((w + (letter,), there))
        frontier = nxt
    return out


@dataclass(frozen=True)
class PiStarResult:
    classes: Tuple[PathClass, ...]
    members: Tuple[Tuple[PathTerm, ...], ...]
    best_effort: bool
    search_depth: int

    def __len__(self):
        return len(self.classes)

    def to_record(self) -> dict:
        return {"best_effort": self.best_effort, "search_depth": self.search_depth,
                "classes": [{"representative": to_text(c.representative),
                             "members": [to_text(m) for m in ms]}
                            for c, ms in zip(self.classes, self.members)]}


def _relation_words(pres: GroupoidPresentation) -> List[Tuple[Word, Word]]:
    env = pres.env
    out = []
    for l, r in pres.relations:
        wl = word_of(nf(_annotate(l, env)))
        wr = word_of(nf(_annotate(r, env)))
        out.append((wl, wr))
        out.append((wr, wl))
    return out


def _neighbours(word: Word, rels: Sequence[Tuple[Word, Word]]) -> Iterable[Word]:
    for l, r in rels:
        n = len(l)
        for i in range(len(word) - n + 1):
            if word[i:i + n] == l:
                yield free_reduce(word[:i] + r + word[i + n:])


def _word_key(w: Word):
    # shorter first, then generators before their inverses
    return len(w), tuple((g, -e) for g, e in w)


def pi_star_elements(pres: GroupoidPresentation, max_word_len: int = 2,
                     search_depth: int = 2) -> PiStarResult:
    """Classes of loops at the basepoint up to ``max_word_len`` letters.

    Relations are applied in both directions at every position (the empty
    word matches everywhere) for at most ``search_depth`` rounds; classes
    whose search frontiers meet are merged. With relations this is a
    bounded search and is reported as best effort.
    """
    env, base = pres.env, pres.basepoint
    if base is None:
        return PiStarResult((), (), False, search_depth)
    reduced: Dict[Word, None] = {}
    for w in _loop_words(pres, max_word_len):
        reduced.setdefault(word_of(nf(term_of(w, env, base))), None)
    words = sorted(reduced, key=_word_key)
    rels = _relation_words(pres)
    parent = {w: w for w in words}

    def find(w):
        while parent[w] != w:
            parent[w] = parent[parent[w]]
            w = parent[w]
        return w

    if rels:
        owner: Dict[Word, Word] = {}
        for w in words:
            reach, frontier = {w}, [w]
            for _ in range(search_depth):
                frontier = [n for x in frontier for n in _neighbours(x, rels) if n not in reach]
                reach.update(frontier)
            for x in reach:
                if x in owner:
                    a, b = find(owner[x]), find(w)
                    if a != b:
                        keep, drop = sorted((a, b), key=_word_key)
                        parent[drop] = keep
                else:
                    owner[x] = w
    groups: Dict[Word, List[Word]] = {}
    for w in words:
        groups.setdefault(find(w), []).append(w)
    classes, members = [], []
    for rep in sorted(groups, key=_word_key):
        t = term_of(rep, env, base)
        classes.append(PathClass(t, base, base))
        members.append(tuple(term_of(m, env, base) for m in groups[rep]))
    return PiStarResult(tuple(classes), tuple(members), bool(rels), search_depth)


# -- random presentations -------------------------------------------------------

def random_presentation(rng: random.Random, max_generators: int = 3,
                        max_objects: int = 3) -> GroupoidPresentation:
    """A connected presentation without relations."""
    n_gen = rng.randint(0, max_generators)
    n_obj = rng.randint(1, min(max_objects, n_gen + 1))
    objects = tuple(f"x{i}" for i in range(n_obj))
    gens = []
    for i in range(1, n_obj):
        j = rng.randrange(i)
        src, tgt = (objects[j], objects[i]) if rng.random() < 0.5 else (objects[i], objects[j])
        gens.append((f"g{len(gens)}", (src, tgt)))
    while len(gens) < n_gen:
        gens.append((f"g{len(gens)}", (rng.choice(objects), rng.choice(objects))))
    return GroupoidPresentation(objects, tuple(gens), (), objects[0])
