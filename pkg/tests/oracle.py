"""A deliberately naive rewriting oracle, independent of the package matcher.

Terms are plain tuples, rules come from the hand-written table in
``data/rules.txt``, contexts are enumerated exhaustively and every
match is collected rather than the first one.
"""

import re
from pathlib import Path

TABLE = Path(__file__).parent / "data" / "rules.txt"
CONGRUENCES = {"xi1", "xi2", "xiand", "xi", "mu1", "mu2", "mu", "nu", "muf"}
# rules whose generic head stands for the whole family of that arity
FAMILY = {28: {"xi1", "xi2", "xi"}, 29: {"xiand", "xi"}, 30: {"mu1", "mu2", "mu"}}


def load_table(path=TABLE):
    rules, extended = [], False
    for line in path.read_text().splitlines():
        if line.startswith("# extended"):
            extended = True
        if not line.strip() or line.startswith("#"):
            continue
        id_, name, lhs, rhs = (x.strip() for x in line.split("|"))
        rules.append((int(id_), name, read(lhs, schema=True), read(rhs, schema=True), extended))
    return rules


def read(text, schema=False):
    toks = re.findall(r"[A-Za-z_][A-Za-z0-9_.]*|[()\[\],]", text)
    pos = 0

    def take():
        nonlocal pos
        pos += 1
        return toks[pos - 1]

    def peek():
        return toks[pos] if pos < len(toks) else None

    def term():
        tok = take()
        if peek() == "[":
            take()
            inner = term()
            take()
            return ("ctx", tok, inner)
        if peek() == "(":
            take()
            args = []
            if tok == "muf":
                args.append(label_of(take(), schema))
                take()
            args.append(term())
            while take() == ",":
                args.append(term())
            return (tok, *args)
        if tok == "rho":
            return ("rho",)
        return ("var", tok) if schema else ("atom", tok)

    return term()


def label_of(text, schema=False):
    if text == "id":
        return ("id",)
    if "." in text:
        g, f = text.split(".", 1)
        return ("comp", label_of(g, schema), label_of(f, schema))
    return ("lvar", text) if schema else ("plain", text)


def from_term(p):
    """Convert a package term into the tuple form."""
    if p.op == "atom":
        return ("atom", p.label)
    if p.op == "rho":
        return ("rho",)
    args = tuple(from_term(a) for a in p.args)
    if p.op == "muf":
        return ("muf", _from_label(p.label), *args)
    return (p.op, *args)


def _from_label(lab):
    if lab.kind == "identity":
        return ("id",)
    if lab.kind == "composite":
        return ("comp", _from_label(lab.parts[0]), _from_label(lab.parts[1]))
    return ("plain", lab.name)


def children(t):
    return t[2:] if t[0] == "muf" else t[1:] if t[0] not in ("atom", "rho") else ()


def rebuild(t, kids):
    if t[0] == "muf":
        return (t[0], t[1], *kids)
    return (t[0], *kids)


def decompositions(t):
    """Every (host-with-hole, subterm) with the hole under congruences only."""
    yield ("hole",), t
    if t[0] in CONGRUENCES:
        kids = children(t)
        for i, k in enumerate(kids):
            for host, sub in decompositions(k):
                yield rebuild(t, kids[:i] + (host,) + kids[i + 1:]), sub


def plug(host, t):
    if host == ("hole",):
        return t
    if host[0] in ("atom", "rho"):
        return host
    return rebuild(host, tuple(plug(k, t) for k in children(host)))


def match(pat, t, b, family=None):
    kind = pat[0]
    if kind == "var":
        if pat[1] in b:
            if b[pat[1]] == t:
                yield b
        else:
            yield {**b, pat[1]: t}
        return
    if kind == "ctx":
        for host, sub in decompositions(t):
            key = "ctx:" + pat[1]
            if key in b and b[key] != host:
                continue
            yield from match(pat[2], sub, {**b, key: host}, family)
        return
    if kind == "muf":
        if t[0] != "muf":
            return
        for b2 in match_label(pat[1], t[1], b):
            yield from match_list(pat[2:], t[2:], b2, family)
        return
    heads = family if family and kind in ("xi", "mu") else {kind}
    if t[0] == "muf" and "muf" in heads and len(pat) == 2:
        yield from match(pat[1], t[2], {**b, "head:" + kind: "muf", "label:" + kind: t[1]},
                         family)
        return
    if t[0] not in heads or len(t) != len(pat):
        return
    if kind == "atom":
        if pat == t:
            yield b
        return
    nb = {**b, "head:" + kind: t[0]} if heads is family else b
    yield from match_list(pat[1:], t[1:], nb, family)


def match_list(pats, ts, b, family):
    if not pats:
        yield b
        return
    for b2 in match(pats[0], ts[0], b, family):
        yield from match_list(pats[1:], ts[1:], b2, family)


def match_label(pat, lab, b):
    if pat[0] == "lvar":
        key = "lab:" + pat[1]
        if key in b:
            if b[key] == lab:
                yield b
        else:
            yield {**b, key: lab}
    elif pat[0] == "comp":
        if lab[0] == "comp":
            for b2 in match_label(pat[1], lab[1], b):
                yield from match_label(pat[2], lab[2], b2)
    elif pat == lab:
        yield b


def build(pat, b):
    kind = pat[0]
    if kind == "var":
        return b[pat[1]]
    if kind == "ctx":
        return plug(b["ctx:" + pat[1]], build(pat[2], b))
    if kind == "rho":
        return pat
    if kind == "muf":
        return ("muf", build_label(pat[1], b), *(build(a, b) for a in pat[2:]))
    args = tuple(build(a, b) for a in pat[1:])
    head = b.get("head:" + kind, kind)
    if head == "muf":
        return ("muf", b["label:" + kind], *args)
    return (head, *args)


def build_label(lab, b):
    if lab[0] == "lvar":
        return b["lab:" + lab[1]]
    if lab[0] == "comp":
        return ("comp", build_label(lab[1], b), build_label(lab[2], b))
    return lab


class Oracle:
    def __init__(self, with_38_39=True, extended=False):
        self.rules = [r for r in load_table()
                      if (extended or not r[4]) and (with_38_39 or r[0] not in (38, 39))]
        self.extended = extended

    def _family(self, id_):
        fam = FAMILY.get(id_)
        if fam and id_ == 30 and self.extended:
            fam = fam | {"muf"}
        return fam

    def root_reducts(self, t, id_):
        (_, _, lhs, rhs, _), = [r for r in self.rules if r[0] == id_]
        fam = self._family(id_)
        out = set()
        for b in match(lhs, t, {}, fam):
            out.add(build(rhs, b))
        return out

    def redexes(self, t, pos=()):
        found = set()
        for r in self.rules:
            if self.root_reducts(t, r[0]):
                found.add((r[0], pos))
        for i, k in enumerate(children(t)):
            found |= self.redexes(k, pos + (i,))
        return found

    def reducts_at(self, t, id_, pos):
        if not pos:
            return self.root_reducts(t, id_)
        kids = children(t)
        i = pos[0]
        return {rebuild(t, kids[:i] + (k,) + kids[i + 1:])
                for k in self.reducts_at(kids[i], id_, pos[1:])}

    def is_normal(self, t):
        return not self.redexes(t)
