"""Command-line front end.

Exit codes: 0 success, 1 usage error, 2 Parry constraint violation,
3 build failure (index overflow, resource cap, constants too small),
4 oracle mismatch in ``table --oracle``.
"""

from __future__ import annotations

import argparse
import io
import json
import logging
import os
import sys
from dataclasses import dataclass

from . import dfao as dfao_mod, oracle
from .errors import (
    ConstantsTooSmall,
    ConstraintViolation,
    DigitRange,
    EmptyInput,
    ExponentRangeError,
    IndexOverflow,
    ResourceLimit,
    SpecSyntaxError,
)
from .estimator import build_automaton
from .numeration import Numeration, format_digits, greedy_urep
from .substitution import fixed_point_prefix, parse_spec, show, spectral_balance_check, validate

EXIT_OK, EXIT_USAGE, EXIT_CONSTRAINT, EXIT_BUILD, EXIT_MISMATCH = 0, 1, 2, 3, 4


@dataclass
class CommandOutcome:
    exit_code: int
    report: str
    errors: str = ""


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(f"{self.prog}: {message}")

    def exit(self, status=0, message=None):
        if status:
            raise _UsageError(message or "")
        if message:
            sys.stdout.write(message)
        raise SystemExit(status)


def _read_spec(arg: str):
    """A spec is shorthand, inline JSON, or a path to a JSON file."""
    if not arg.strip().startswith("{") and os.path.isfile(arg):
        with open(arg, encoding="utf-8") as fh:
            return parse_spec(fh.read())
    return parse_spec(arg)


def _load_automaton_or_none(arg: str):
    if not os.path.isfile(arg):
        return None
    with open(arg, encoding="utf-8") as fh:
        text = fh.read()
    try:
        doc = json.loads(text)
    except json.JSONDecodeError:
        return None
    if isinstance(doc, dict) and "delta" in doc:
        return dfao_mod.from_json(doc)
    return None


def _positive_int(text):
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if value < 0:
        raise argparse.ArgumentTypeError(f"must be non-negative: {value}")
    return value


def make_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="parry-ac", description="Abelian complexity automata for Parry words.")
    parser.add_argument("-v", "--verbose", action="store_true", help="log build progress")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("validate", help="check the Parry constraints of a spec")
    p.add_argument("spec")

    p = sub.add_parser("prefix", help="print a prefix of the fixed point")
    p.add_argument("spec")
    p.add_argument("-n", type=_positive_int, required=True)

    p = sub.add_parser("urep", help="print the normal U-representation of N")
    p.add_argument("spec")
    p.add_argument("N", type=_positive_int)

    p = sub.add_parser("balance", help="spectral balance check and empirical balance bound")
    p.add_argument("spec")
    p.add_argument("--cap", type=_positive_int, default=None, help="longest prefix scanned")

    p = sub.add_parser("build", help="build the automaton and write it as JSON")
    p.add_argument("spec")
    p.add_argument("--c", type=_positive_int, default=None, dest="c")
    p.add_argument("--c-margin", type=_positive_int, default=0)
    p.add_argument("--minimize", action="store_true")
    p.add_argument("--prune", action="store_true", help="drop states no greedy representation reaches")
    p.add_argument("--reproducible", action="store_true", help="zero the timestamp field")
    p.add_argument("-o", "--output", default=None)

    p = sub.add_parser("eval", help="evaluate AC(N) or B(N) with a built automaton")
    p.add_argument("automaton")
    p.add_argument("N", type=_positive_int)
    p.add_argument("--fn", choices=("ac", "balance"), default="ac")

    p = sub.add_parser("table", help="TSV table of values, optionally checked against brute force")
    p.add_argument("source", help="spec or automaton JSON file")
    p.add_argument("--from", dest="start", type=_positive_int, default=1)
    p.add_argument("--to", dest="stop", type=_positive_int, required=True)
    p.add_argument("--oracle", action="store_true")
    p.add_argument("--c", type=_positive_int, default=None, dest="c")
    p.add_argument("--c-margin", type=_positive_int, default=0)

    p = sub.add_parser("export", help="convert an automaton JSON file to Graphviz DOT")
    p.add_argument("automaton")
    p.add_argument("--dot", required=True)
    return parser


def _cmd_validate(args, out):
    sub = _read_spec(args.spec)
    validate(sub)
    out.write(f"ok {sub.shorthand()}\n")
    return EXIT_OK


def _cmd_prefix(args, out):
    sub = _read_spec(args.spec)
    validate(sub)
    out.write(show(fixed_point_prefix(sub, args.n)) + "\n")
    return EXIT_OK


def _cmd_urep(args, out):
    sub = _read_spec(args.spec)
    validate(sub)
    digits = greedy_urep(Numeration(sub), args.N)
    out.write(format_digits(digits, sub.alpha0) + "\n")
    return EXIT_OK


def _cmd_balance(args, out):
    sub = _read_spec(args.spec)
    validate(sub)
    spectral = spectral_balance_check(sub)
    est = oracle.estimate_c(sub, cap_len=args.cap)
    out.write(f"spectral\t{spectral.value}\n")
    out.write(f"c\t{est.c}\n")
    out.write(f"status\t{est.status.value}\n")
    out.write(f"scanned\t{est.scan_len}\n")
    return EXIT_OK


def _cmd_build(args, out):
    sub = _read_spec(args.spec)
    automaton, fix, consts = build_automaton(
        sub,
        c=args.c,
        c_margin=args.c_margin,
        minimize=args.minimize,
        reproducible=args.reproducible,
        prune=args.prune,
    )
    text = dfao_mod.to_json(automaton)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
        out.write(
            f"wrote {args.output}: {automaton.num_states} states "
            f"(c={consts.c}, H={consts.H}, L={consts.L}, rounds={fix.iterations})\n"
        )
    else:
        out.write(text + "\n")
    return EXIT_OK


def _cmd_eval(args, out):
    automaton = _load_automaton_or_none(args.automaton)
    if automaton is None:
        raise _UsageError(f"not an automaton JSON file: {args.automaton}")
    num = dfao_mod.numeration_for(automaton)
    out.write(f"{dfao_mod.eval_n(automaton, num, args.N, args.fn)}\n")
    return EXIT_OK


def _cmd_table(args, out):
    automaton = _load_automaton_or_none(args.source)
    if automaton is None:
        sub = _read_spec(args.source)
        automaton, _, _ = build_automaton(sub, c=args.c, c_margin=args.c_margin, reproducible=True)
    else:
        sub = parse_spec(automaton.substitution)
    if args.start < 1 or args.stop < args.start:
        raise _UsageError("need 1 <= --from <= --to")
    num = Numeration(sub)
    header = ["n", "urep", "ac", "b"]
    if args.oracle:
        header += ["ac_oracle", "b_oracle", "match"]
    out.write("\t".join(header) + "\n")
    mismatches = 0
    for n in range(args.start, args.stop + 1):
        digits = greedy_urep(num, n)
        ac = dfao_mod.eval_digits(automaton, digits, dfao_mod.AC)
        b = dfao_mod.eval_digits(automaton, digits, dfao_mod.BALANCE)
        row = [str(n), format_digits(digits, sub.alpha0), str(ac), str(b)]
        if args.oracle:
            ac_o = oracle.ac_bruteforce(sub, n)
            b_o = oracle.balance_bruteforce(sub, n)
            ok = ac == ac_o and b == b_o
            mismatches += not ok
            row += [str(ac_o), str(b_o), "yes" if ok else "no"]
        out.write("\t".join(row) + "\n")
    return EXIT_MISMATCH if mismatches else EXIT_OK


def _cmd_export(args, out):
    automaton = _load_automaton_or_none(args.automaton)
    if automaton is None:
        raise _UsageError(f"not an automaton JSON file: {args.automaton}")
    with open(args.dot, "w", encoding="utf-8") as fh:
        fh.write(dfao_mod.to_dot(automaton))
    out.write(f"wrote {args.dot}: {automaton.num_states} states\n")
    return EXIT_OK


COMMANDS = {
    "validate": _cmd_validate,
    "prefix": _cmd_prefix,
    "urep": _cmd_urep,
    "balance": _cmd_balance,
    "build": _cmd_build,
    "eval": _cmd_eval,
    "table": _cmd_table,
    "export": _cmd_export,
}


def run(argv) -> CommandOutcome:
    out = io.StringIO()
    try:
        args = make_parser().parse_args(argv)
        if args.verbose:
            logging.basicConfig(level=logging.INFO, format="%(message)s")
        code = COMMANDS[args.command](args, out)
        return CommandOutcome(code, out.getvalue())
    except _UsageError as exc:
        return CommandOutcome(EXIT_USAGE, out.getvalue(), str(exc).strip() + "\n")
    except (SpecSyntaxError, ExponentRangeError, DigitRange, EmptyInput, OSError, ValueError) as exc:
        if isinstance(exc, ConstraintViolation):
            return CommandOutcome(EXIT_CONSTRAINT, out.getvalue(), f"constraint violation: {exc}\n")
        return CommandOutcome(EXIT_USAGE, out.getvalue(), f"error: {exc}\n")
    except (IndexOverflow, ResourceLimit, ConstantsTooSmall) as exc:
        return CommandOutcome(EXIT_BUILD, out.getvalue(), f"build failed: {exc}\n")


def main(argv=None) -> int:
    try:
        outcome = run(sys.argv[1:] if argv is None else argv)
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    sys.stdout.write(outcome.report)
    sys.stderr.write(outcome.errors)
    return outcome.exit_code


if __name__ == "__main__":
    sys.exit(main())
