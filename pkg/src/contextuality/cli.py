"""Command-line front end.

    cbd analyze <file> [--json] [--no-lp]
    cbd generate <scenario> [--n N] [--seed S]
    cbd compat <system> <connections> [--json]

Exit codes: 0 ok, 1 input error, 2 numerical breakdown, 3 oracle disagreement.
``CBD_TOLERANCE`` overrides the 1e-9 contextuality threshold.
"""
from __future__ import annotations

import argparse
import json
import os
import sys

from . import scenarios
from .coupling import Mode, build_cyclic_program
from .cyclic import MAX_LP_RANK, VERDICT_TOL, AnalysisReport, analyze, compatibility, compatibility_lp
from .errors import ContextualityError, NumericalBreakdown, SchemaError
from .generic import GenericReport, analyze_generic
from .oracle import cross_validate, cross_validate_generic, disagreements
from .schema import (
    cyclic_to_json,
    dumps,
    expectations_to_json,
    generic_to_json,
    load_connections,
    load_system,
)
from .simplex import verify_certificate
from .systems import CyclicSystem, GenericSystem, generic_to_cyclic, validate_system

EXIT_OK, EXIT_INPUT, EXIT_NUMERICAL, EXIT_ORACLE = 0, 1, 2, 3


class InputError(Exception):
    pass


def _tolerance() -> float:
    raw = os.environ.get("CBD_TOLERANCE")
    if raw is None:
        return VERDICT_TOL
    try:
        value = float(raw)
    except ValueError:
        raise InputError(f"CBD_TOLERANCE={raw!r} is not a number") from None
    if not value > 0.0:
        raise InputError(f"CBD_TOLERANCE must be positive, got {raw!r}")
    return value


def _read_json(path: str):
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: line {exc.lineno} column {exc.colno}: {exc.msg}") from None


def _load_valid(path: str) -> CyclicSystem | GenericSystem:
    try:
        system = load_system(_read_json(path))
    except SchemaError as exc:
        raise InputError(f"{path}: {exc}") from None
    violations = validate_system(system)
    if violations:
        raise InputError(f"{path}: invalid system\n" + "\n".join(f"  {v}" for v in violations))
    return system


def _fmt(x: float | None) -> str:
    return "n/a" if x is None else f"{x:.9f}"


def _verdict_line(value: float | None, contextual: bool | None) -> str:
    if value is None:
        return "CNTX = n/a (LP route not run)"
    shown = "0" if value == 0.0 else f"{value:.9f}"
    return f"CNTX = {shown}, {'contextual' if contextual else 'noncontextual'}"


def _print_cyclic(report: AnalysisReport, verdicts, out) -> None:
    cc = "consistently connected" if report.consistently_connected else "inconsistently connected"
    print(f"cyclic system, rank {report.n} ({cc})", file=out)
    if report.labels != list(range(1, report.n + 1)):
        print(f"  relabeled from properties {report.labels}", file=out)
    print(f"  Delta0          = {_fmt(report.delta0)}", file=out)
    tag = "closed form, conjectural for this rank" if report.conjectural else "closed form"
    print(f"  Delta_min       = {_fmt(report.delta_min_closed)}  ({tag})", file=out)
    print(f"  Delta_min (LP)  = {_fmt(report.delta_min_lp)}", file=out)
    print(f"  s_odd(<VW>)     = {_fmt(report.s_odd)}", file=out)
    print(_verdict_line(report.cntx, report.contextual), file=out)
    print("criteria:", file=out)
    for method, crit in report.criteria.items():
        word = "noncontextual" if crit.noncontextual else "contextual"
        print(f"  {method:<7} {word:<14} margin {crit.margin:+.9f}", file=out)
    special = report.special_cases
    if special.get("applicable"):
        kind = special["kind"]
        holds = "holds" if special["noncontextual"] else "violated"
        if kind == "chsh":
            print(f"special case (CHSH): max |combination| = {_fmt(special['max_abs'])} vs 2, {holds}", file=out)
        elif kind == "kcbs":
            print(f"special case (KCBS): sum p_i = {_fmt(special['sum_p'])} vs 2, {holds}", file=out)
        else:
            print(
                f"special case (Suppes-Zanotti): -1 <= {_fmt(special['total'])} <= {_fmt(special['upper'])}, {holds}",
                file=out,
            )
    elif special.get("kind"):
        print(f"special case ({special['kind']}): skipped, {special.get('reason')}", file=out)
    for note in report.notes:
        print(f"note: {note}", file=out)
    _print_oracle(verdicts, out)


def _print_oracle(verdicts, out) -> None:
    bad = disagreements(verdicts)
    print(f"oracle: {len(verdicts) - len(bad)}/{len(verdicts)} checks agree", file=out)
    for verdict in bad:
        print(f"  {verdict}", file=out)


def _print_generic(report: GenericReport, verdicts, out) -> None:
    print(f"generic system: {report.variables} variables, {report.connections} connections", file=out)
    print(f"  Delta0          = {_fmt(report.delta0)}", file=out)
    print(f"  Delta_min (LP)  = {_fmt(report.delta_min_lp)}", file=out)
    print(_verdict_line(report.cntx, report.contextual), file=out)
    maximal = report.certificates.get("maximal_connections")
    if maximal is not None:
        print(f"maximal-connections coupling LP: {maximal['status']}", file=out)
    for note in report.notes:
        print(f"note: {note}", file=out)
    if report.cyclic is not None:
        cyc = report.cyclic
        print(
            f"cyclic encoding: rank {cyc.n}, Delta_min closed = {_fmt(cyc.delta_min_closed)}, "
            + _verdict_line(cyc.cntx, cyc.contextual),
            file=out,
        )
    _print_oracle(verdicts, out)


def cmd_analyze(args, out) -> int:
    system = _load_valid(args.file)
    tol = _tolerance()
    if isinstance(system, CyclicSystem):
        report = analyze(system, lp=not args.no_lp, tol=tol)
        verdicts = cross_validate(system, report, tol)
    else:
        report = analyze_generic(system, lp=not args.no_lp, tol=tol)
        verdicts = cross_validate_generic(system, report)
    if args.json:
        document = {
            "system": "cyclic" if isinstance(system, CyclicSystem) else "generic",
            "report": report.to_dict(),
            "oracle": [
                {"subject": v.subject, "agreement": v.agreement, "discrepancy": v.discrepancy}
                for v in verdicts
            ],
        }
        print(dumps(document), file=out)
    elif isinstance(system, CyclicSystem):
        _print_cyclic(report, verdicts, out)
    else:
        _print_generic(report, verdicts, out)
    return EXIT_ORACLE if disagreements(verdicts) else EXIT_OK


def cmd_generate(args, out) -> int:
    name = args.scenario
    if name == "random":
        if args.n is None or args.seed is None:
            raise InputError("random needs --n and --seed")
        if not 3 <= args.n <= 12:
            raise InputError(f"--n must be in [3, 12], got {args.n}")
        if not 0 <= args.seed < 2**64:
            raise InputError("--seed must be a 64-bit unsigned integer")
        document = cyclic_to_json(scenarios.random_system(args.n, args.seed))
    elif name == "pr-box":
        document = expectations_to_json(scenarios.pr_box_summary())
    elif name == "tsirelson":
        document = expectations_to_json(scenarios.tsirelson_summary())
    elif name == "kcbs-quantum":
        document = cyclic_to_json(scenarios.kcbs_quantum())
    elif name == "specker":
        document = generic_to_json(scenarios.specker())
    elif name == "all-correlated":
        n = 4 if args.n is None else args.n
        if n < 3:
            raise InputError(f"--n must be at least 3, got {n}")
        document = cyclic_to_json(scenarios.all_correlated(n))
    else:
        raise InputError(f"unknown scenario {name!r}")
    print(dumps(document), file=out)
    return EXIT_OK


def cmd_compat(args, out) -> int:
    system = _load_valid(args.system)
    if isinstance(system, GenericSystem):
        cyclic = generic_to_cyclic(system)
        if cyclic is None:
            raise InputError(f"{args.system}: compat needs a cyclic system")
        system = cyclic
    try:
        connections = load_connections(_read_json(args.connections), system.n)
    except SchemaError as exc:
        raise InputError(f"{args.connections}: {exc}") from None
    for i, pair in enumerate(connections, start=1):
        problems = validate_system(CyclicSystem(3, (pair,) * 3))
        if problems:
            raise InputError(f"{args.connections}: connection {i} is not a valid pmf")

    tol = _tolerance()
    result = compatibility(system, connections, tol)
    lp_feasible = None
    lp_certified = None
    if system.n <= MAX_LP_RANK:
        solution = compatibility_lp(system, connections)
        lp_feasible = solution.optimal
        program = build_cyclic_program(system, Mode.FIX_CONNECTIONS, connections)
        lp_certified = verify_certificate(program.problem, solution)
    # the LP has no user threshold, so compare at solver precision
    strict = result.s_odd <= result.bound + 2.0 * min(tol, VERDICT_TOL)
    disagree = lp_feasible is not None and (lp_feasible != strict or not lp_certified)

    if args.json:
        print(dumps({
            "compatible": result.compatible,
            "s_odd": result.s_odd,
            "bound": result.bound,
            "odd_bunches_even_connections": result.odd_bunches_even_connections,
            "even_bunches_odd_connections": result.even_bunches_odd_connections,
            "lp_feasible": lp_feasible,
            "lp_certificate_verified": lp_certified,
        }), file=out)
    else:
        relation = "<=" if result.compatible else ">"
        verdict = "compatible" if result.compatible else "incompatible"
        print(f"s_odd = {result.s_odd:g} {relation} {result.bound:g} : {verdict}", file=out)
        print(f"  split form: {result.odd_bunches_even_connections:g} and "
              f"{result.even_bunches_odd_connections:g} against {result.bound:g}", file=out)
        if lp_feasible is None:
            print("  LP cross-check skipped (rank too large)", file=out)
        else:
            status = "feasible" if lp_feasible else "infeasible"
            check = "verified" if lp_certified else "NOT verified"
            print(f"  LP cross-check: {status} (certificate {check})", file=out)
    return EXIT_ORACLE if disagree else EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cbd", description="Contextuality analysis of binary systems")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="analyze a system file")
    p.add_argument("file")
    p.add_argument("--json", action="store_true", help="machine-readable report")
    p.add_argument("--no-lp", action="store_true", help="closed forms only")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("generate", help="emit a bundled or random system")
    p.add_argument("scenario", choices=scenarios.SCENARIOS)
    p.add_argument("--n", type=int)
    p.add_argument("--seed", type=int)
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("compat", help="check connection couplings against a cyclic system")
    p.add_argument("system")
    p.add_argument("connections")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_compat)
    return parser


def main(argv=None, out=None) -> int:
    out = sys.stdout if out is None else out
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_INPUT
    try:
        return args.func(args, out)
    except (InputError, ContextualityError) as exc:
        if isinstance(exc, NumericalBreakdown):
            print(f"error: numerical breakdown: {exc}", file=sys.stderr)
            return EXIT_NUMERICAL
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
