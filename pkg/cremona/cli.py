"""Command-line frontend.

    python -m cremona classify trepalin.model
    python -m cremona conjugate y1.model y2.model --json
    python -m cremona equiv-forms --left "1;-1" --right "t;-t" --both

Exit codes: 0 success, 1 usage error, 2 parse error, 3 invalid model or
input, 4 verdict Unknown, 5 decider disagreement.
"""

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import List, Optional

from cremona import __version__
from cremona.core.errors import CremonaError, InvalidParameters
from cremona.core.logging import configure_logging
from cremona.models.reports import Report
from cremona.services.model_files import format_conic_bundle, read_model_file
from cremona.services.polytext import parse_poly, parse_rational
from cremona.services.reporting import (
    classify_report,
    conjugate_report,
    corollary_family_report,
    curve_components_report,
    curve_gaussian_report,
    curve_iso_report,
    curve_ovals_report,
    equiv_forms_report,
    execute,
    invariants_report,
    matrix_report,
    normalize_report,
    render_json,
    render_text,
    selfcheck_report,
    trepalin_family_report,
    validate_report,
)
from cremona.services.wittforms import CriterionMode, Decider

logger = logging.getLogger(__name__)

EXIT_USAGE = 1


class _Parser(argparse.ArgumentParser):
    """Usage errors exit with status 1."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _sign(text: str) -> int:
    signs = {"+": 1, "+1": 1, "1": 1, "-": -1, "-1": -1}
    if text not in signs:
        raise argparse.ArgumentTypeError(f"sign must be + or -, got '{text}'")
    return signs[text]


def _rationals(text: str):
    return [parse_rational(item.strip()) for item in text.split(",")]


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="cremona", description="Real plane Cremona involutions: models, invariants, conjugacy")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("--json", action="store_true", help="emit the report as JSON")
    parser.add_argument("--timing", action="store_true", help="include the elapsed time in the report")
    parser.add_argument("-v", "--verbose", action="count", default=0, help="log INFO (-v) or DEBUG (-vv) to stderr")
    parser.add_argument(
        "--no-reparam",
        dest="reparametrize",
        action="store_false",
        help="do not move an empty fibre to infinity when validation fails there",
    )
    commands = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    for name, text in (
        ("validate", "check a model stanza"),
        ("invariants", "compute the invariants of a model"),
        ("classify", "name the class of an involution model"),
    ):
        sub = commands.add_parser(name, help=text)
        sub.add_argument("file")

    sub = commands.add_parser("normalize", help="normal form of a conic bundle model")
    sub.add_argument("file")
    sub.add_argument("-o", "--output", help="write the normalized model as a stanza")

    sub = commands.add_parser("conjugate", help="decide conjugacy of two involution models")
    sub.add_argument("file1")
    sub.add_argument("file2")
    sub.add_argument("--fix-base", action="store_true", help="only allow the identity on the base line")

    sub = commands.add_parser("matrix", help="pairwise conjugacy verdicts")
    sub.add_argument("files", nargs="+")

    sub = commands.add_parser("equiv-forms", help="equivalence of binary forms <A, B> and <C, D> over R(t)")
    sub.add_argument("--left", required=True, help='form literal "A;B"')
    sub.add_argument("--right", required=True, help='form literal "C;D"')
    deciders = sub.add_mutually_exclusive_group()
    deciders.add_argument("--criterion", dest="decider", action="store_const", const=Decider.CRITERION)
    deciders.add_argument("--oracle", dest="decider", action="store_const", const=Decider.ORACLE)
    deciders.add_argument("--both", dest="decider", action="store_const", const=Decider.BOTH)
    sub.add_argument(
        "--criterion-mode",
        choices=[m.value for m in CriterionMode],
        default=CriterionMode.ALL_ROOTS.value,
    )
    sub.set_defaults(decider=Decider.CRITERION)

    curve = commands.add_parser("curve", help="real hyperelliptic and quartic curves")
    operations = curve.add_subparsers(dest="operation", required=True, metavar="OPERATION")
    sub = operations.add_parser("components", help="components of w^2 = sign * f")
    sub.add_argument("form", help='binary form "poly deg=N"')
    sub.add_argument("--sign", type=_sign, default=1)
    sub = operations.add_parser("iso", help="real isomorphism of w^2 = f and w^2 = g")
    sub.add_argument("form1")
    sub.add_argument("form2")
    sub = operations.add_parser("gaussian", help="is w^2 = f isomorphic to w^2 = -f")
    sub.add_argument("form")
    sub = operations.add_parser("ovals", help="real ovals of a Kowalevskaya quartic stanza")
    sub.add_argument("file")

    family = commands.add_parser("family", help="families of pairwise non-conjugate involutions")
    kinds = family.add_subparsers(dest="family", required=True, metavar="FAMILY")
    sub = kinds.add_parser("corollary", help="conic bundles sharing one fixed curve")
    sub.add_argument("--r", type=int, required=True)
    sub.add_argument("--s", type=int, default=0)
    sub.add_argument("--eps", type=_rationals, required=True, help="comma separated, increasing")
    sub.add_argument("--quadratic", action="append", default=[], help="factor without real roots; repeat s times")
    sub.add_argument("--a", type=parse_rational, required=True)
    sub.add_argument("--b", type=parse_rational, required=True)
    sub.add_argument("--count", type=int, required=True)
    sub.add_argument("--seed", type=int)
    sub = kinds.add_parser("trepalin", help="0-twisted Trepalin involutions with fixed singular fibres")
    sub.add_argument("--eps", type=_rationals, required=True)
    sub.add_argument("--a", type=parse_rational, required=True)
    sub.add_argument("--b", type=parse_rational, required=True)
    sub.add_argument("--count", type=int, required=True)
    sub.add_argument("--seed", type=int)

    sub = commands.add_parser("selfcheck", help="differential test of the two form deciders")
    sub.add_argument("--samples", type=int)
    sub.add_argument("--seed", type=int)
    sub.add_argument(
        "--paired",
        type=float,
        help="fraction of quadruples drawn from a small factor pool so that equivalent pairs occur (default uniform)",
    )
    return parser


def _normalize(args) -> Report:
    report, model = normalize_report(read_model_file(args.file), args.reparametrize)
    if args.output:
        try:
            Path(args.output).write_text(format_conic_bundle(model), encoding="utf-8")
        except OSError as e:
            raise InvalidParameters(f"cannot write {args.output}: {e.strerror}")
        report.witnesses["output"] = args.output
    return report


def _curve(args) -> Report:
    if args.operation == "components":
        return execute(curve_components_report, args.form, args.sign, timing=args.timing)
    if args.operation == "iso":
        return execute(curve_iso_report, args.form1, args.form2, timing=args.timing)
    if args.operation == "gaussian":
        return execute(curve_gaussian_report, args.form, timing=args.timing)
    return execute(curve_ovals_report, read_model_file(args.file), timing=args.timing)


def _family(args) -> Report:
    if args.family == "corollary":
        return execute(
            corollary_family_report,
            args.r,
            args.s,
            args.eps,
            [parse_poly(q) for q in args.quadratic],
            args.a,
            args.b,
            args.count,
            args.seed,
            timing=args.timing,
        )
    return execute(trepalin_family_report, args.eps, args.a, args.b, args.count, args.seed, timing=args.timing)


def run(args) -> Report:
    """Build the report for parsed arguments."""
    timing = args.timing
    if args.command == "validate":
        return execute(validate_report, read_model_file(args.file), args.reparametrize, timing=timing)
    if args.command == "invariants":
        return execute(invariants_report, read_model_file(args.file), args.reparametrize, timing=timing)
    if args.command == "classify":
        return execute(classify_report, read_model_file(args.file), args.reparametrize, timing=timing)
    if args.command == "normalize":
        return execute(_normalize, args, timing=timing)
    if args.command == "conjugate":
        return execute(
            conjugate_report,
            read_model_file(args.file1),
            read_model_file(args.file2),
            args.fix_base,
            args.reparametrize,
            timing=timing,
        )
    if args.command == "matrix":
        return execute(matrix_report, args.files, args.reparametrize, timing=timing)
    if args.command == "equiv-forms":
        return execute(
            equiv_forms_report, args.left, args.right, args.decider, args.criterion_mode, timing=timing
        )
    if args.command == "curve":
        return _curve(args)
    if args.command == "family":
        return _family(args)
    return execute(selfcheck_report, args.samples, args.seed, args.paired, timing=timing)


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else EXIT_USAGE

    configure_logging({1: "INFO", 2: "DEBUG"}.get(min(args.verbose, 2)))
    try:
        report = run(args)
    except CremonaError as e:
        logger.debug("%s failed", args.command, exc_info=True)
        if args.json:
            sys.stdout.write(json.dumps({"command": args.command, "error": e.to_dict()}, indent=2) + "\n")
        else:
            print(f"error: {e.code}: {e.message}", file=sys.stderr)
        return e.exit_code

    sys.stdout.write(render_json(report) if args.json else render_text(report))
    return report.exit_code
