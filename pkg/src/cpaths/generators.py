"""Seeded random terms, contexts and loop words for property tests and suites."""

from __future__ import annotations

import random
from typing import Mapping, Optional, Sequence, Tuple

from .terms import (
    ARITIES,
    CONGRUENCE_OPS,
    HOLE,
    Atom,
    Context,
    FunLabel,
    PathTerm,
    Rho,
    Sigma,
    Tau,
)

DEFAULT_ATOMS = ("a", "b", "c")

# (op, arity) pairs of the label signature
SIGNATURE: Tuple[Tuple[str, int], ...] = tuple(
    (op, n) for op, ns in ARITIES.items() if op != "muf" for n in ns
)
FUN_NAMES = ("f", "g", "h")


def random_term(rng: random.Random, max_depth: int = 8, atoms: Sequence[str] = DEFAULT_ATOMS,
                extended: bool = False, leaf_bias: float = 0.1) -> PathTerm:
    """A term of depth at most ``max_depth`` over the whole signature.

    The chance of stopping grows with depth so that sizes stay moderate.
    """
    ops = SIGNATURE + ((("muf", 1),) if extended else ())

    def build(depth: int) -> PathTerm:
        stop = leaf_bias + (1 - leaf_bias) * depth / max_depth
        if depth >= max_depth - 1 or rng.random() < stop:
            if rng.random() < 0.25:
                return Rho()
            return Atom(rng.choice(atoms))
        op, n = rng.choice(ops)
        args = tuple(build(depth + 1) for _ in range(n))
        if op == "muf":
            label = FunLabel.plain(rng.choice(FUN_NAMES))
            if rng.random() < 0.2:
                label = FunLabel.identity()
            return PathTerm(op, args, label)
        return PathTerm(op, args)

    return build(0)


def random_context(rng: random.Random, max_depth: int = 3, atoms: Sequence[str] = DEFAULT_ATOMS,
                   congruence_only: bool = False) -> Context:
    """A context whose hole sits at depth at most ``max_depth``."""
    depth = rng.randint(0, max_depth)
    ops = [(o, n) for o, n in SIGNATURE if not congruence_only or o in CONGRUENCE_OPS]
    host, pos = HOLE, ()
    for _ in range(depth):
        op, n = rng.choice(ops)
        i = rng.randrange(n)
        args = [random_term(rng, 3, atoms) for _ in range(n)]
        args[i] = host
        host = PathTerm(op, tuple(args))
        pos = (i,) + pos
    return Context(host, pos)


def random_bracketing(rng: random.Random, parts: Sequence[PathTerm]) -> PathTerm:
    """Fold ``parts`` left to right under tau with a random tree shape."""
    if not parts:
        raise ValueError("cannot bracket an empty word")
    if len(parts) == 1:
        return parts[0]
    k = rng.randint(1, len(parts) - 1)
    return Tau(random_bracketing(rng, parts[:k]), random_bracketing(rng, parts[k:]))


def random_typed_path(rng: random.Random, generators: Mapping[str, Tuple[str, str]],
                      start: str, length: int, end: Optional[str] = None,
                      max_tries: int = 200) -> Optional[PathTerm]:
    """A random composable word of at most ``length`` letters from ``start``.

    Letters are generators or their inverses. With ``end`` the walk must
    finish there; None is returned when no such walk is found.
    """
    moves = {}
    for name, (src, tgt) in generators.items():
        moves.setdefault(src, []).append(Atom(name, (src, tgt)))
        moves.setdefault(tgt, []).append(Sigma(Atom(name, (src, tgt))))
    for _ in range(max_tries):
        n = rng.randint(0, length)
        here, word, visited = start, [], [start]
        for _ in range(n):
            options = moves.get(here)
            if not options:
                break
            letter = rng.choice(options)
            word.append(letter)
            a = letter.args[0] if letter.op == "sigma" else letter
            src, tgt = generators[a.label]
            here = src if letter.op == "sigma" else tgt
            visited.append(here)
        if end is not None and here != end:
            continue
        if not word:
            return Rho(start)
        if rng.random() < 0.15:
            k = rng.randrange(len(word) + 1)
            word.insert(k, Rho(visited[k]))
        return random_bracketing(rng, word)
    return None
