"""Command-line front end.

    intersample verify system.json [options]

Exit codes: 0 every checked facet is satisfied, 1 at least one certified
violation, 2 no violation but at least one inconclusive facet, 3 bad input
or configuration.
"""

from __future__ import annotations

import argparse
import os
import sys

from .overestimators import OverestimatorKind
from .solver import ConfigInvalid, SolverConfig
from .verifier import (
    VERDICT_INCONCLUSIVE,
    VerificationReport,
    dump_json,
    load_system_file,
    report_to_dict,
    trace_event_to_dict,
    verify_system,
    write_samples_csv,
)

_KIND_BY_FLAG = {
    "pwa": OverestimatorKind.PIECEWISE_AFFINE,
    "pwq": OverestimatorKind.PIECEWISE_QUADRATIC,
    "concave": OverestimatorKind.CONCAVE_SHIFT,
}

EXIT_SATISFIED = 0
EXIT_VIOLATION = 1
EXIT_INCONCLUSIVE = 2
EXIT_BAD_INPUT = 3


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="intersample",
        description="Certified bounds on polytope constraints between samples "
        "of a linear system under zero-order hold.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    run = sub.add_parser(
        "verify", help="verify every query in a system description file"
    )
    run.add_argument("spec", help="path to the system JSON file")
    run.add_argument(
        "--epsilon", type=float, default=1e-6, help="optimality gap target"
    )
    run.add_argument(
        "--k", type=int, default=10, help="truncation order of the series enclosure"
    )
    run.add_argument(
        "--l", type=int, default=10, help="number of scaling-and-squaring halvings"
    )
    run.add_argument(
        "--overestimator",
        choices=sorted(_KIND_BY_FLAG),
        default="pwq",
        help="concave bounding surrogate used on indefinite windows",
    )
    run.add_argument(
        "--facet",
        type=int,
        action="append",
        default=None,
        metavar="J",
        help="restrict to facet row J (repeatable; default: all rows)",
    )
    run.add_argument(
        "--max-bisections",
        type=int,
        default=100_000,
        help="bisection budget per facet",
    )
    run.add_argument("--output", metavar="PATH", help="write the JSON report here")
    run.add_argument(
        "--csv",
        metavar="PATH",
        help="write trajectory samples for the single selected facet",
    )
    run.add_argument(
        "--samples",
        type=int,
        default=200,
        help="number of rows in the CSV trajectory table",
    )
    run.add_argument(
        "--trace",
        action="store_true",
        help="stream per-node solver events to stderr as JSON lines",
    )
    run.add_argument(
        "--jobs", type=int, default=1, help="solve facets in this many threads"
    )
    return parser


def _exit_code(report: VerificationReport) -> int:
    if report.any_violation:
        return EXIT_VIOLATION
    for q in report.queries:
        for fr in q.facets:
            if fr.verdict == VERDICT_INCONCLUSIVE:
                return EXIT_INCONCLUSIVE
    return EXIT_SATISFIED


def _csv_path(base: str, label: str, many: bool) -> str:
    if not many:
        return base
    root, ext = os.path.splitext(base)
    return f"{root}-{label}{ext or '.csv'}"


def run_verify(args: argparse.Namespace) -> int:
    try:
        spec, queries = load_system_file(args.spec)
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BAD_INPUT

    try:
        cfg = SolverConfig(
            epsilon=args.epsilon,
            k=args.k,
            l=args.l,
            overestimator=_KIND_BY_FLAG[args.overestimator],
            max_bisections=args.max_bisections,
        )
    except ConfigInvalid as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BAD_INPUT

    if args.jobs < 1:
        print("error: --jobs must be at least 1", file=sys.stderr)
        return EXIT_BAD_INPUT
    if args.csv is not None and (args.facet is None or len(args.facet) != 1):
        print("error: --csv needs exactly one --facet selection", file=sys.stderr)
        return EXIT_BAD_INPUT

    try:
        report = verify_system(
            spec,
            queries,
            cfg,
            facets=args.facet,
            jobs=args.jobs,
            with_trace=args.trace,
        )
    except (ConfigInvalid, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BAD_INPUT

    if args.trace:
        for q in report.queries:
            for fr in q.facets:
                for event in fr.trace:
                    line = {"query": q.label, "facet": fr.index}
                    line.update(trace_event_to_dict(event))
                    dump_json(line, sys.stderr)
                    sys.stderr.write("\n")

    for q in report.queries:
        flags = []
        if not q.x0_in_x:
            flags.append("x0 outside X")
        if not q.u0_in_u:
            flags.append("u0 outside U")
        if not q.next_state_in_x:
            flags.append("next state outside X")
        note = f"  [{'; '.join(flags)}]" if flags else ""
        print(f"query {q.label}:{note}")
        for fr in q.facets:
            rep = fr.report
            print(
                f"  facet {fr.index}: sup f = [{rep.f_lower:.9g}, {rep.f_upper:.9g}]"
                f"  {fr.verdict}  ({rep.bisections} bisections,"
                f" {rep.convex_ops} convex ops, {rep.status.value})"
            )

    if args.output is not None:
        try:
            with open(args.output, "w", encoding="utf-8") as fh:
                dump_json(report_to_dict(report), fh, indent=2)
                fh.write("\n")
        except OSError as exc:
            print(f"error: cannot write {args.output}: {exc}", file=sys.stderr)
            return EXIT_BAD_INPUT

    if args.csv is not None:
        many = len(report.queries) > 1
        facet_index = args.facet[0]
        try:
            for q, query in zip(report.queries, queries):
                path = _csv_path(args.csv, q.label, many)
                with open(path, "w", encoding="utf-8") as fh:
                    write_samples_csv(fh, spec, query, facet_index, args.samples)
        except (OSError, ValueError) as exc:
            print(f"error: cannot write samples: {exc}", file=sys.stderr)
            return EXIT_BAD_INPUT

    return _exit_code(report)


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "verify":
        return run_verify(args)
    parser.error(f"unknown command {args.command!r}")
    return EXIT_BAD_INPUT


if __name__ == "__main__":
    sys.exit(main())
