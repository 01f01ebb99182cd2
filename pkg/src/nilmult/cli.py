"""``nilmult`` command line.

Every subcommand prints a JSON envelope ``{"ok", "result", "warnings",
"error"}`` by default, or a short human-readable line with ``--format text``.

Exit codes: 0 success, 1 bad input or failed hypothesis, 2 resource cap,
3 verification mismatch.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass, field
from typing import Any, Optional

from .crosscheck import run_crosscheck
from .engine import DEFAULT_SUBGROUP_CAP, build_group, parse_word, verify_multiplier
from .errors import NilmultError, PreconditionError
from .hallbasis import DEFAULT_BASIS_CAP, enumerate_basis
from .multiplier import (
    ProductSpec,
    multiplier_closed_form,
    multiplier_general,
    multiplier_two_factor,
    split_orders,
    validate_spec,
)
from .numtheory import witt_chi

EXIT_OK, EXIT_INPUT, EXIT_CAP, EXIT_MISMATCH = 0, 1, 2, 3
OUTSIDE = "outside theorem hypotheses"


@dataclass
class Outcome:
    result: Any
    text: str
    warnings: list[str] = field(default_factory=list)
    exit_code: int = EXIT_OK


def _env_cap(name: str, default: int) -> int:
    value = os.environ.get(name)
    return int(value) if value else default


def _positive(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return value


def _orders(text: str) -> tuple[int, ...]:
    try:
        orders = tuple(int(part) for part in text.split(",") if part.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"orders must be comma-separated integers, got {text!r}")
    if not orders or any(a < 0 for a in orders):
        raise argparse.ArgumentTypeError(f"orders must be non-negative and non-empty, got {text!r}")
    return orders


def cmd_witt(args) -> Outcome:
    chi = witt_chi(args.weight, args.generators)
    return Outcome({"chi": chi}, str(chi))


def cmd_hall(args) -> Outcome:
    table = enumerate_basis(args.generators, args.max_weight, args.basis_cap)
    if args.count_only:
        counts = {w: len(table.weight_range(w)) for w in range(1, args.max_weight + 1)}
        text = ", ".join(f"{w}:{n}" for w, n in counts.items())
        return Outcome({"counts": {str(w): n for w, n in counts.items()}}, "{" + text + "}")
    listing = [u.render() for u in table]
    return Outcome({"commutators": listing, "count": len(listing)}, ", ".join(listing))


def cmd_multiplier(args) -> Outcome:
    spec = ProductSpec(args.class_n, args.orders)
    n, c = args.class_n, args.c
    verdict = validate_spec(spec, c)
    warnings, notes = [], []
    if not verdict.ok:
        if not args.force:
            raise PreconditionError(verdict.describe(), verdict.violations)
        warnings.append(f"{OUTSIDE}: {verdict.describe()}")

    structures = {}
    methods = ["general", "closed", "two-factor"] if args.method == "all" else [args.method]
    for method in methods:
        if method == "general":
            structures[method] = multiplier_general(spec, c, force=args.force, cap=args.basis_cap)
        elif method == "closed":
            split = split_orders(spec.orders)
            if split is None:
                if args.method != "all":
                    raise PreconditionError("closed form needs zeros first, then a divisibility chain")
                notes.append("closed form skipped: orders are not zeros followed by a divisibility chain")
                continue
            structures[method] = multiplier_closed_form(split[0], split[1], n, c, force=args.force)
        else:
            if spec.q != 2 or not spec.is_finite:
                if args.method != "all":
                    raise PreconditionError("two-factor form needs exactly two finite orders")
                notes.append("two-factor form skipped: needs exactly two finite orders")
                continue
            r, s = spec.orders
            structures[method] = multiplier_two_factor(r, s, n, c, force=args.force)

    values = list(structures.values())
    agreement = all(v == values[0] for v in values) if len(values) > 1 else None
    result = {
        "class": n,
        "c": c,
        "orders": list(spec.orders),
        "validation": verdict.to_json(),
        "structures": {k: {**v.to_json(), "text": str(v)} for k, v in structures.items()},
        "agreement": agreement,
        "notes": notes,
    }
    if len(structures) == 1:
        text = str(values[0])
    else:
        lines = [f"{k}: {v}" for k, v in structures.items()] + notes
        lines.append("agreement: " + ("yes" if agreement else "NO"))
        text = "\n".join(lines)
    if not verdict.ok:
        text += f"  ({OUTSIDE})"
    code = EXIT_MISMATCH if agreement is False else EXIT_OK
    return Outcome(result, text, warnings, code)


def cmd_normal_form(args) -> Outcome:
    ctx = build_group(ProductSpec(args.class_n, args.orders), force=args.force, basis_cap=args.basis_cap)
    g = ctx.collect(parse_word(args.word))
    warnings = [f"{OUTSIDE}: {ctx.verdict.describe()}"] if ctx.outside_hypotheses else []
    result = {
        "normal_form": str(g),
        "exponents": list(g.exponents),
        "basis": [u.render("g") for u in ctx.basis],
        "moduli": list(ctx.moduli),
    }
    return Outcome(result, str(g), warnings)


def cmd_verify(args) -> Outcome:
    report = verify_multiplier(
        ProductSpec(args.class_n, args.orders), args.c,
        force=args.force, basis_cap=args.basis_cap, subgroup_cap=args.subgroup_cap,
    )
    verdict = "match" if report.match else "MISMATCH"
    return Outcome(
        report.to_json(), f"{verdict}: {report.predicted}", report.warnings,
        EXIT_OK if report.match else EXIT_MISMATCH,
    )


def cmd_crosscheck(args) -> Outcome:
    report = run_crosscheck(args.trials, args.seed)
    text = "all routes agree" if report.ok else f"{len(report.mismatches)} mismatches"
    return Outcome(report.to_json(), text, exit_code=EXIT_OK if report.ok else EXIT_MISMATCH)


class _Parser(argparse.ArgumentParser):
    # usage errors are input errors, not the resource-cap exit code argparse uses
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--format", choices=["json", "text"], default="json")
    common.add_argument("--basis-cap", type=_positive,
                        default=_env_cap("NILMULT_BASIS_CAP", DEFAULT_BASIS_CAP))
    common.add_argument("--subgroup-cap", type=_positive,
                        default=_env_cap("NILMULT_SUBGROUP_CAP", DEFAULT_SUBGROUP_CAP))
    common.add_argument("--force", action="store_true",
                        help="skip the prime hypothesis check; output is flagged as unproven")

    parser = _Parser(prog="nilmult", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("witt", parents=[common], help="Witt count of basic commutators")
    p.add_argument("--weight", type=_positive, required=True)
    p.add_argument("--generators", type=int, required=True)
    p.set_defaults(func=cmd_witt)

    p = sub.add_parser("hall", parents=[common], help="list Hall basic commutators")
    p.add_argument("--generators", type=int, required=True)
    p.add_argument("--max-weight", type=_positive, required=True)
    p.add_argument("--count-only", action="store_true")
    p.set_defaults(func=cmd_hall)

    p = sub.add_parser("multiplier", parents=[common], help="c-nilpotent multiplier")
    p.add_argument("--class", dest="class_n", type=_positive, required=True)
    p.add_argument("--c", type=_positive, required=True)
    p.add_argument("--orders", type=_orders, required=True, help="comma-separated, 0 = infinite")
    p.add_argument("--method", choices=["general", "closed", "two-factor", "all"], default="general")
    p.set_defaults(func=cmd_multiplier)

    p = sub.add_parser("normal-form", parents=[common], help="collect a word into normal form")
    p.add_argument("--class", dest="class_n", type=_positive, required=True)
    p.add_argument("--orders", type=_orders, required=True)
    p.add_argument("--word", required=True, help='e.g. "g1 g2 g1^-1 g2^-1"')
    p.set_defaults(func=cmd_normal_form)

    p = sub.add_parser("verify", parents=[common], help="check the multiplier by brute force")
    p.add_argument("--class", dest="class_n", type=_positive, required=True)
    p.add_argument("--c", type=_positive, required=True)
    p.add_argument("--orders", type=_orders, required=True)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("crosscheck", parents=[common], help="randomized agreement of all routes")
    p.add_argument("--trials", type=_positive, default=200)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_crosscheck)
    return parser


def _error_payload(exc: Exception) -> dict:
    payload = {"type": type(exc).__name__, "message": str(exc)}
    violations = getattr(exc, "violations", None)
    if violations:
        payload["violations"] = [{"prime": v.prime, "order": v.order} for v in violations]
    return payload


def main(argv: Optional[list[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        outcome = args.func(args)
    except NilmultError as exc:
        code = exc.exit_code
        if args.format == "json":
            envelope = {"ok": False, "result": None, "warnings": [], "error": _error_payload(exc)}
            print(json.dumps(envelope))
        else:
            label = "unsupported" if type(exc).__name__ == "UnsupportedError" else "error"
            print(f"{label}: {exc}")
        return code
    for w in outcome.warnings:
        print(f"warning: {w}", file=sys.stderr)
    if args.format == "json":
        envelope = {
            "ok": outcome.exit_code == EXIT_OK,
            "result": outcome.result,
            "warnings": outcome.warnings,
            "error": None,
        }
        print(json.dumps(envelope))
    else:
        print(outcome.text)
    return outcome.exit_code


if __name__ == "__main__":
    sys.exit(main())
