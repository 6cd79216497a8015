"""Path-label algebra: terms, positions, contexts, parsing and printing.

Every path label is a :class:`PathTerm`. A term is identified by its
operator family ``op``, its ``args`` and, for atoms, metavariables and
``muf`` nodes, a ``label``. Operators of one family with different arity
(``xi(p)`` and ``xi(p,q)``) are different symbols.

Basepoint annotations on ``rho`` and endpoint annotations on atoms are
metadata: they are printed and parsed but never take part in equality.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterator, Mapping, Optional, Sequence, Tuple, Union

Position = Tuple[int, ...]
ObjectId = str

# family -> admissible arities
ARITIES: dict[str, tuple[int, ...]] = {
    "sigma": (1,),
    "tau": (2,),
    "xi1": (1,),
    "xi2": (1,),
    "xiand": (2,),
    "xi": (1, 2),
    "mu1": (1,),
    "mu2": (1,),
    "mu": (1, 2, 3),
    "nu": (1,),
    "subl": (2,),
    "subr": (2,),
    "muf": (1,),
}

# Congruence constructors: the path counterparts of term constructors.
# Context holes of rules 3-12, 38, 39 may only sit under these.
CONGRUENCE_OPS = frozenset({"xi1", "xi2", "xiand", "xi", "mu1", "mu2", "mu", "nu", "muf"})

LEAF_OPS = frozenset({"atom", "rho", "var", "hole"})

KEYWORDS = frozenset(ARITIES) | {"rho"}


class TermError(ValueError):
    """Malformed term or invalid position."""


class ParseError(TermError):
    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"{message} at line {line}, column {column}")
        self.line = line
        self.column = column


class EndpointError(TermError):
    """Endpoint bookkeeping failed (mismatch or untyped constructor)."""


@dataclass(frozen=True)
class FunLabel:
    """Function label carried by a ``muf`` node.

    ``kind`` is ``plain``, ``identity``, ``composite`` or ``meta`` (the
    last only inside rule schemas). A composite's name is derived from its
    parts and is never chosen by the caller.
    """

    name: str
    kind: str = "plain"
    parts: Tuple["FunLabel", ...] = ()

    @staticmethod
    def plain(name: str) -> "FunLabel":
        if name == "id" or "." in name:
            raise TermError(f"reserved function name {name!r}")
        return FunLabel(name)

    @staticmethod
    def identity() -> "FunLabel":
        return FunLabel("id", "identity")

    @staticmethod
    def meta(name: str) -> "FunLabel":
        return FunLabel(name, "meta")

    @staticmethod
    def composite(g: "FunLabel", f: "FunLabel") -> "FunLabel":
        """The label of ``g . f`` (apply ``f`` first)."""
        return FunLabel(f"{g.name}.{f.name}", "composite", (g, f))

    @property
    def size(self) -> int:
        if self.kind == "composite":
            return sum(p.size for p in self.parts)
        return 1

    def __str__(self) -> str:
        return self.name


class PathTerm:
    """Immutable path label.

    Leaves are ``atom`` (label = name), ``rho``, ``var`` (schema
    metavariable, label = name) and ``hole``. Schema-only context slots
    use op ``ctx`` with the slot name as label and the plugged pattern as
    the single argument.
    """

    __slots__ = ("op", "args", "label", "meta", "_hash")

    def __init__(self, op: str, args: Tuple["PathTerm", ...] = (), label=None, meta=None):
        object.__setattr__(self, "op", op)
        object.__setattr__(self, "args", args)
        object.__setattr__(self, "label", label)
        object.__setattr__(self, "meta", meta)
        object.__setattr__(self, "_hash", hash((op, label, args)))

    def __setattr__(self, key, value):
        raise AttributeError("PathTerm is immutable")

    def __reduce__(self):
        return (PathTerm, (self.op, self.args, self.label, self.meta))

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, PathTerm):
            return NotImplemented
        return (
            self._hash == other._hash
            and self.op == other.op
            and self.label == other.label
            and self.args == other.args
        )

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"PathTerm({to_text(self)!r})"

    def __str__(self):
        return to_text(self)

    @property
    def arity(self) -> int:
        return len(self.args)

    @property
    def symbol(self) -> tuple:
        """Operator symbol: (family, arity, label) for compound nodes."""
        if self.op == "atom":
            return ("atom", self.label)
        if self.op in ("var", "ctx"):
            return (self.op, self.label)
        return (self.op, len(self.args), self.label)

    def with_args(self, args: Sequence["PathTerm"]) -> "PathTerm":
        return PathTerm(self.op, tuple(args), self.label, self.meta)

    def size(self) -> int:
        return 1 + sum(a.size() for a in self.args)

    def depth(self) -> int:
        return 1 + max((a.depth() for a in self.args), default=0)

    def is_ground(self) -> bool:
        """True when the term has no metavariables, holes or context slots."""
        if self.op in ("var", "hole", "ctx"):
            return False
        if self.op == "muf" and self.label.kind == "meta":
            return False
        return all(a.is_ground() for a in self.args)


# -- constructors -----------------------------------------------------------

def Atom(name: str, endpoints: Optional[Tuple[ObjectId, ObjectId]] = None) -> PathTerm:
    return PathTerm("atom", (), name, endpoints)


def Rho(at: Optional[ObjectId] = None) -> PathTerm:
    return PathTerm("rho", (), None, at)


def MetaVar(name: str) -> PathTerm:
    return PathTerm("var", (), name)


HOLE = PathTerm("hole")


def Sigma(p): return PathTerm("sigma", (p,))
def Tau(p, q): return PathTerm("tau", (p, q))
def Xi1(p): return PathTerm("xi1", (p,))
def Xi2(p): return PathTerm("xi2", (p,))
def XiAnd(p, q): return PathTerm("xiand", (p, q))
def Xi(p): return PathTerm("xi", (p,))
def XiPair(p, q): return PathTerm("xi", (p, q))
def Mu1(p): return PathTerm("mu1", (p,))
def Mu2(p): return PathTerm("mu2", (p,))
def MuU(p): return PathTerm("mu", (p,))
def MuB(p, q): return PathTerm("mu", (p, q))
def MuT(p, q, r): return PathTerm("mu", (p, q, r))
def Nu(p): return PathTerm("nu", (p,))
def SubL(p, q): return PathTerm("subl", (p, q))
def SubR(p, q): return PathTerm("subr", (p, q))


def MuF(fn: Union[FunLabel, str], p: PathTerm) -> PathTerm:
    if isinstance(fn, str):
        fn = parse_fun_label(fn)
    return PathTerm("muf", (p,), fn)


def Ctx(name: str, inner: PathTerm) -> PathTerm:
    """Context slot ``name[inner]``; schema-only."""
    return PathTerm("ctx", (inner,), name)


def app(op: str, *args: PathTerm, label=None) -> PathTerm:
    if op not in ARITIES or len(args) not in ARITIES[op]:
        raise TermError(f"no operator {op} of arity {len(args)}")
    return PathTerm(op, tuple(args), label)


# -- positions --------------------------------------------------------------

def subterm_at(p: PathTerm, pos: Sequence[int]) -> PathTerm:
    t = p
    for depth, i in enumerate(pos):
        if not 0 <= i < len(t.args):
            raise TermError(f"invalid position {format_position(pos)}: "
                            f"{to_text(t)} has no child {i} (depth {depth})")
        t = t.args[i]
    return t


def replace_at(p: PathTerm, pos: Sequence[int], q: PathTerm) -> PathTerm:
    if not pos:
        return q
    i = pos[0]
    if not 0 <= i < len(p.args):
        raise TermError(f"invalid position {format_position(pos)} in {to_text(p)}")
    args = list(p.args)
    args[i] = replace_at(args[i], pos[1:], q)
    return p.with_args(args)


def positions(p: PathTerm) -> Iterator[Position]:
    """All positions in pre-order (root first, then children left to right)."""
    stack: list[Position] = [()]
    while stack:
        pos = stack.pop()
        yield pos
        t = subterm_at(p, pos)
        for i in reversed(range(len(t.args))):
            stack.append(pos + (i,))


def format_position(pos: Sequence[int]) -> str:
    return ".".join(str(i) for i in pos) if pos else "root"


def parse_position(text: str) -> Position:
    text = text.strip()
    if text in ("", "root", "e"):
        return ()
    try:
        return tuple(int(x) for x in text.split("."))
    except ValueError:
        raise TermError(f"bad position {text!r}") from None


@dataclass(frozen=True)
class Context:
    """A term with exactly one hole."""

    host: PathTerm
    hole_position: Position

    @staticmethod
    def trivial() -> "Context":
        return Context(HOLE, ())

    @staticmethod
    def around(p: PathTerm, pos: Position) -> "Context":
        return Context(replace_at(p, pos, HOLE), tuple(pos))

    def plug(self, q: PathTerm) -> PathTerm:
        return replace_at(self.host, self.hole_position, q)

    def unplug(self, t: PathTerm) -> Optional[PathTerm]:
        """Subterm of ``t`` sitting at the hole if ``t`` fits around it."""
        host = self.host
        for i in self.hole_position:
            if (t.op != host.op or t.label != host.label
                    or len(t.args) != len(host.args)):
                return None
            for j, (a, b) in enumerate(zip(t.args, host.args)):
                if j != i and a != b:
                    return None
            t, host = t.args[i], host.args[i]
        return t

    @property
    def depth(self) -> int:
        return len(self.hole_position)

    def __str__(self) -> str:
        return to_text(self.host)


# -- endpoints --------------------------------------------------------------

def endpoints(p: PathTerm, env: Mapping[str, Tuple[ObjectId, ObjectId]]) -> Tuple[ObjectId, ObjectId]:
    """Source and target objects of a term of the typed fragment.

    Only atoms, ``rho``, ``sigma`` and ``tau`` are typed. A bare ``rho``
    carries no object and is rejected; use ``rho@x``.
    """
    op = p.op
    if op == "atom":
        if p.label in env:
            return tuple(env[p.label])
        if p.meta is not None:
            return tuple(p.meta)
        raise EndpointError(f"atom {p.label!r} has no endpoints")
    if op == "rho":
        if p.meta is None:
            raise EndpointError("rho without a basepoint has no endpoints")
        return (p.meta, p.meta)
    if op == "sigma":
        x, y = endpoints(p.args[0], env)
        return (y, x)
    if op == "tau":
        x, y = endpoints(p.args[0], env)
        y2, z = endpoints(p.args[1], env)
        if y != y2:
            raise EndpointError(
                f"cannot compose {to_text(p.args[0])} ending at {y} "
                f"with {to_text(p.args[1])} starting at {y2}")
        return (x, z)
    raise EndpointError(f"{op} is outside the typed fragment")


# -- printing ---------------------------------------------------------------

def to_text(p: PathTerm) -> str:
    op = p.op
    if op == "atom" or op == "var":
        return p.label
    if op == "rho":
        return "rho" if p.meta is None else f"rho@{p.meta}"
    if op == "hole":
        return "[]"
    if op == "ctx":
        return f"{p.label}[{to_text(p.args[0])}]"
    inner = ",".join(to_text(a) for a in p.args)
    if op == "muf":
        return f"muf({p.label},{inner})"
    return f"{op}({inner})"


# -- parsing ----------------------------------------------------------------

_TOKEN = re.compile(r"""
    (?P<ws>\s+)
  | (?P<name>[A-Za-z][A-Za-z0-9_]*(?:\.[A-Za-z][A-Za-z0-9_]*)*)
  | (?P<punct>[(),@\[\]])
""", re.VERBOSE)

_ATOM_RE = re.compile(r"[a-z][a-z0-9_]*\Z")


def _tokenize(text: str):
    pos, line, line_start = 0, 1, 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {text[pos]!r}", line, pos - line_start + 1)
        kind = m.lastgroup
        if kind == "ws":
            chunk = m.group()
            nl = chunk.count("\n")
            if nl:
                line += nl
                line_start = pos + chunk.rfind("\n") + 1
        else:
            yield kind, m.group(), line, pos - line_start + 1
        pos = m.end()
    yield "eof", "", line, pos - line_start + 1


class _Parser:
    def __init__(self, text: str, schema: bool):
        self.tokens = list(_tokenize(text))
        self.i = 0
        self.schema = schema

    def peek(self):
        return self.tokens[self.i]

    def take(self, value: Optional[str] = None):
        tok = self.tokens[self.i]
        if value is not None and tok[1] != value:
            what = "end of input" if tok[0] == "eof" else repr(tok[1])
            raise ParseError(f"expected {value!r}, found {what}", tok[2], tok[3])
        self.i += 1
        return tok

    def parse(self) -> PathTerm:
        t = self.term()
        tok = self.peek()
        if tok[0] != "eof":
            raise ParseError(f"trailing input {tok[1]!r}", tok[2], tok[3])
        return t

    def term(self) -> PathTerm:
        kind, value, line, col = self.take()
        if kind != "name":
            what = "end of input" if kind == "eof" else repr(value)
            raise ParseError(f"expected a term, found {what}", line, col)
        if value == "rho":
            if self.peek()[1] == "@":
                self.take("@")
                k, obj, l2, c2 = self.take()
                if k != "name":
                    raise ParseError("expected an object name after '@'", l2, c2)
                return Rho(obj)
            return Rho()
        if self.schema and value[0].isupper() and self.peek()[1] == "[":
            self.take("[")
            inner = self.term()
            self.take("]")
            return Ctx(value, inner)
        if value in ARITIES:
            if self.peek()[1] != "(":
                raise ParseError(f"operator {value!r} needs arguments", line, col)
            self.take("(")
            label = None
            if value == "muf":
                k, fun, l2, c2 = self.take()
                if k != "name":
                    raise ParseError("expected a function label", l2, c2)
                label = parse_fun_label(fun, schema=self.schema)
                self.take(",")
            args = [self.term()]
            while self.peek()[1] == ",":
                self.take(",")
                args.append(self.term())
            self.take(")")
            if len(args) not in ARITIES[value]:
                allowed = "/".join(str(a) for a in ARITIES[value])
                raise ParseError(
                    f"{value} takes {allowed} argument(s), got {len(args)}", line, col)
            return PathTerm(value, tuple(args), label)
        if self.peek()[1] == "(":
            raise ParseError(f"unknown operator {value!r}", line, col)
        if self.schema:
            return MetaVar(value)
        if not _ATOM_RE.match(value):
            raise ParseError(f"invalid atom name {value!r}", line, col)
        return Atom(value)


def parse_fun_label(text: str, schema: bool = False) -> FunLabel:
    parts = text.split(".")
    if len(parts) > 1:
        label = parse_fun_label(parts[-1], schema)
        for name in reversed(parts[:-1]):
            label = FunLabel.composite(parse_fun_label(name, schema), label)
        return label
    if text == "id":
        return FunLabel.identity()
    if schema:
        return FunLabel.meta(text)
    return FunLabel.plain(text)


def parse(text: str) -> PathTerm:
    """Parse a user path term. Identifiers that are not keywords are atoms."""
    return _Parser(text, schema=False).parse()


def parse_schema(text: str) -> PathTerm:
    """Parse a rule schema: identifiers are metavariables, ``C[...]`` a context slot."""
    return _Parser(text, schema=True).parse()


def metavars(p: PathTerm) -> set[str]:
    out: set[str] = set()

    def walk(t):
        if t.op == "var":
            out.add(t.label)
        for a in t.args:
            walk(a)

    walk(p)
    return out


def atoms(p: PathTerm) -> set[str]:
    out: set[str] = set()

    def walk(t):
        if t.op == "atom":
            out.add(t.label)
        for a in t.args:
            walk(a)

    walk(p)
    return out
