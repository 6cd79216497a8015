"""Command-line front end.

Exit status: 0 on success, 1 when a law fails, a pair does not join, terms
are not rw-equal or fuel runs out, 2 on usage and parse errors.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from typing import List, Optional

from . import confluence, groupoid, rpo, trs2
from .rewriting import DEFAULT_FUEL, FuelExhausted, normalize, rw_equal
from .rules import RuleSet
from .terms import EndpointError, TermError, format_position, parse, to_text

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _rules(args) -> RuleSet:
    return RuleSet(with_38_39=not args.no_3839, extended_40_42=args.extended)


def _emit(args, record: dict, text: str):
    if args.json:
        print(json.dumps(record, indent=2))
    else:
        print(text)


def _trace_lines(trace) -> List[str]:
    out = []
    for i, s in enumerate(trace.steps, 1):
        out.append(f"  {i:>3}. {s.rule_name:<6} @ {format_position(s.position):<8} "
                   f"{to_text(s.before)}  ->  {to_text(s.after)}")
    return out


def cmd_normalize(args) -> int:
    p = parse(args.term)
    n, trace = normalize(p, _rules(args), args.strategy, args.fuel)
    steps = f"{len(trace)} step" + ("" if len(trace) == 1 else "s")
    text = "\n".join([to_text(n), f"  ({steps}, strategy {args.strategy})"]
                     + _trace_lines(trace))
    _emit(args, {"normal_form": to_text(n), "trace": trace.to_record()}, text)
    return EXIT_OK


def cmd_trace(args) -> int:
    p = parse(args.term)
    n, trace = normalize(p, _rules(args), args.strategy, args.fuel)
    lines = _trace_lines(trace) or ["  (already in normal form)"]
    _emit(args, trace.to_record()["steps"], "\n".join(lines + [f"normal form: {to_text(n)}"]))
    return EXIT_OK


def cmd_eq(args) -> int:
    p, q = parse(args.left), parse(args.right)
    same, (tp, tq) = rw_equal(p, q, _rules(args), args.fuel, args.strategy)
    verdict = "equal" if same else "not equal"
    text = "\n".join([verdict,
                      f"left  normal form {to_text(tp.end)}", *_trace_lines(tp),
                      f"right normal form {to_text(tq.end)}", *_trace_lines(tq)])
    _emit(args, {"equal": same, "left": tp.to_record(), "right": tq.to_record()}, text)
    return EXIT_OK if same else EXIT_FAIL


def cmd_rules(args) -> int:
    rules = _rules(args)
    lines = [f"{r.id:>3}  {r.name:<6} {to_text(r.lhs)}  |>  {to_text(r.rhs)}" for r in rules]
    _emit(args, {"rules": rules.manifest()}, "\n".join(lines))
    return EXIT_OK


def cmd_orient(args) -> int:
    rules = _rules(args)
    if args.rule:
        rules = RuleSet(with_38_39=rules.with_38_39, extended_40_42=rules.extended_40_42,
                        only=frozenset(args.rule))
    if args.lex_tau:
        prec = rpo.Precedence.lexicographic_tau(fun_labels=args.extended)
    else:
        prec = rpo.Precedence.extended() if args.extended else rpo.Precedence.standard()
    report = rpo.verify_orientation(rules, prec)
    _emit(args, report.to_record(), report.to_text(derivations=args.derivations))
    return EXIT_OK if report.all_decreasing else EXIT_FAIL


def cmd_pairs(args) -> int:
    if args.necessity:
        witnesses = confluence.necessity_witnesses(args.depth, args.fuel)
        lines = [f"{len(witnesses)} pairs diverge without rules 38/39 and join with them"]
        for cp in witnesses:
            lines.append(f"  {cp.rule_a}/{cp.rule_b} @ {format_position(cp.position)}  "
                         f"{to_text(cp.overlap)}")
            lines.append(f"      {to_text(cp.join.left_normal)}  vs  {to_text(cp.join.right_normal)}")
        _emit(args, {"witnesses": [cp.to_record() for cp in witnesses]}, "\n".join(lines))
        return EXIT_FAIL if witnesses else EXIT_OK
    report = confluence.confluence_report(_rules(args), args.depth, args.fuel)
    _emit(args, report.to_record(), report.to_text(show_all=args.all))
    return EXIT_OK if report.all_joinable else EXIT_FAIL


def _load(path: str) -> groupoid.GroupoidPresentation:
    try:
        return groupoid.load_presentation(path)
    except OSError as exc:
        raise groupoid.PresentationError(f"cannot read {path}: {exc.strerror}") from None


def _reports_out(args, reports) -> int:
    _emit(args, {"reports": [r.to_record() for r in reports]},
          "\n".join(r.to_text() for r in reports))
    return EXIT_OK if all(r.passed for r in reports) else EXIT_FAIL


def cmd_group_check(args) -> int:
    pres = _load(args.presentation)
    reports = [groupoid.check_group(pres, args.samples, args.max_len, args.seed),
               groupoid.check_weak_groupoid(pres, args.samples, args.max_len, args.seed)]
    return _reports_out(args, reports)


def cmd_morphism_check(args) -> int:
    pres = _load(args.presentation)
    if args.phi is None:
        return _reports_out(args, [groupoid.check_morphism_laws(pres, args.samples,
                                                                args.max_len, args.seed)])
    phi = pres.typed(parse(args.phi))
    m = groupoid.TransportMorphism.along(phi, pres.env)
    reports = [groupoid.check_homomorphism(m, pres, args.samples, args.max_len, args.seed),
               groupoid.check_isomorphism(m, pres, args.samples, args.max_len, args.seed)]
    return _reports_out(args, reports)


def cmd_level2(args) -> int:
    d = trs2.parse_derivation(args.derivation)
    src, tgt = trs2.endpoints2(d)
    n, trace = trs2.normalize2(d, args.fuel)
    canon = trs2.canonical2(d, args.fuel)
    record = {"source": to_text(src), "target": to_text(tgt), "normal_form": n.to_text(),
              "canonical": canon.to_text(),
              "trace": [{"rule": s.rule, "path": format_position(s.path),
                         "after": s.after.to_text()} for s in trace]}
    lines = [f"{to_text(src)}  =>  {to_text(tgt)}", f"normal form: {n.to_text()}"]
    lines += [f"  {s.rule:<5} @ {format_position(s.path)}" for s in trace]
    if canon != n:
        lines.append(f"after cd2: {canon.to_text()}")
    status = EXIT_OK
    if args.compare is not None:
        other = trs2.parse_derivation(args.compare)
        same = trs2.rw2_equal(d, other, args.fuel)
        record["rw2_equal"] = same
        lines.append("rw2-equal" if same else "not rw2-equal")
        status = EXIT_OK if same else EXIT_FAIL
    _emit(args, record, "\n".join(lines))
    return status


def cmd_presentation_run(args) -> int:
    pres = _load(args.presentation)
    comps = pres.components()
    elems = groupoid.pi_star_elements(pres, args.max_len, args.depth)
    reports = [groupoid.check_group(pres, args.samples, args.max_len, args.seed),
               groupoid.check_basepoint_change(pres, args.samples, args.max_len, args.seed)]
    lines = [f"objects: {' '.join(pres.objects)}",
             f"generators: {' '.join(f'{n}:{s}->{t}' for n, (s, t) in pres.generators) or '-'}",
             f"relations: {len(pres.relations)}",
             f"basepoint: {pres.basepoint}",
             f"connected: {'yes' if len(comps) <= 1 else 'no ' + str(comps)}",
             f"pi* classes up to length {args.max_len}"
             + (f" (best effort, search depth {args.depth})" if elems.best_effort else "")
             + f": {len(elems)}"]
    for c, ms in zip(elems.classes, elems.members):
        extra = f"  = {', '.join(to_text(m) for m in ms[1:])}" if len(ms) > 1 else ""
        lines.append(f"  [{to_text(c.representative)}]{extra}")
    lines += [r.to_text() for r in reports]
    record = {"objects": list(pres.objects), "connected": len(comps) <= 1,
              "components": comps, "pi_star": elems.to_record(),
              "reports": [r.to_record() for r in reports]}
    _emit(args, record, "\n".join(lines))
    return EXIT_OK if all(r.passed for r in reports) else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--strategy", choices=("in", "out"), default="in")
    common.add_argument("--fuel", type=int, default=DEFAULT_FUEL)
    common.add_argument("--extended", action="store_true", help="enable rules 40-42")
    common.add_argument("--no-3839", action="store_true", help="drop rules 38 and 39")
    common.add_argument("--depth", type=int, default=1,
                        help="context depth for pairs, search depth for presentation-run")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--json", action="store_true")

    parser = _Parser(prog="cpaths", description="Rewriting toolkit for computational paths.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, func, help_):
        p = sub.add_parser(name, parents=[common], help=help_)
        p.set_defaults(func=func)
        return p

    p = add("normalize", cmd_normalize, "print the normal form and its trace")
    p.add_argument("term")
    p = add("trace", cmd_trace, "print every rewrite step")
    p.add_argument("term")
    p = add("eq", cmd_eq, "decide rw-equality")
    p.add_argument("left")
    p.add_argument("right")
    add("rules", cmd_rules, "list the active rules")
    p = add("orient", cmd_orient, "check every rule against the path ordering")
    p.add_argument("--all", action="store_true", help="all enabled rules (the default)")
    p.add_argument("--rule", type=int, action="append", help="restrict to a rule id")
    p.add_argument("--derivations", action="store_true", help="print comparison trees")
    p.add_argument("--lex-tau", action="store_true",
                   help="compare tau arguments lexicographically, with tau > subr")
    p = add("pairs", cmd_pairs, "enumerate critical pairs and check joinability")
    p.add_argument("--all", action="store_true", help="list joinable pairs too")
    p.add_argument("--necessity", action="store_true",
                   help="show the pairs that only join with rules 38/39")
    for name, func, help_ in (("group-check", cmd_group_check, "check the group laws"),
                              ("morphism-check", cmd_morphism_check,
                               "check the transport morphism laws")):
        p = add(name, func, help_)
        p.add_argument("presentation")
        p.add_argument("--samples", type=int, default=1000)
        p.add_argument("--max-len", type=int, default=6)
        if name == "morphism-check":
            p.add_argument("--phi", help="transport path; random ones when omitted")
    p = add("level2", cmd_level2, "normalize a level-2 derivation")
    p.add_argument("derivation")
    p.add_argument("--compare", help="a second derivation to test for rw2-equality")
    p = add("presentation-run", cmd_presentation_run, "summarize a presentation")
    p.add_argument("presentation")
    p.add_argument("--samples", type=int, default=200)
    p.add_argument("--max-len", type=int, default=3)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if getattr(args, "fuel", 1) <= 0:
        print("cpaths: error: --fuel must be positive", file=sys.stderr)
        return EXIT_USAGE
    random.seed(args.seed)
    try:
        return args.func(args)
    except FuelExhausted as exc:
        print(f"cpaths: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except (TermError, EndpointError, groupoid.PresentationError, trs2.DerivationError) as exc:
        print(f"cpaths: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
