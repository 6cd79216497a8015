"""Rewriting toolkit for computational paths.

Path labels, the rewrite system on them, termination and confluence
checks, level-2 derivations and the groupoid laws.
"""

from .rewriting import (
    INNERMOST,
    OUTERMOST,
    FuelExhausted,
    RewriteStep,
    Trace,
    applicable_rules,
    match_rule,
    normal_form,
    normalize,
    rewrite_once,
    rw_equal,
)
from .rules import RewriteRule, RuleSet, rule
from .terms import (
    Atom,
    Context,
    FunLabel,
    MuF,
    PathTerm,
    Rho,
    Sigma,
    Tau,
    endpoints,
    parse,
    replace_at,
    subterm_at,
    to_text,
)

__all__ = [
    "applicable_rules",
    "Atom",
    "Context",
    "endpoints",
    "FuelExhausted",
    "FunLabel",
    "INNERMOST",
    "match_rule",
    "MuF",
    "normal_form",
    "normalize",
    "OUTERMOST",
    "parse",
    "PathTerm",
    "replace_at",
    "rewrite_once",
    "RewriteRule",
    "RewriteStep",
    "Rho",
    "rule",
    "RuleSet",
    "rw_equal",
    "Sigma",
    "subterm_at",
    "Tau",
    "to_text",
    "Trace",
]

__version__ = "0.1.0"
