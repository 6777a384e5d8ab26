"""Command-line front end: parse, validate, analyze, and export promise
documents with CI-friendly exit codes.

Exit code 0: success (and, for analyze/report, no finding at or above the
--fail-on threshold). 1: findings at or above the threshold. 2: unusable
input (parse, validation, IO, or flag errors). Diagnostics go to stderr,
artifacts to stdout, so json/dot output can be piped safely.
"""

from __future__ import annotations

import argparse
import os
import sys
from typing import IO, List, Optional

from .analysis import AnalysisConfig, Severity, TrustParams, analyze_all, trust
from .export import ReportFormat, render_report, to_dot, to_json, viewpoint
from .lexer import ParseFailure
from .lower import LowerFailure, load
from .model import PromiseGraph

_SEVERITY_RANKS = {s.value: s.rank for s in Severity}


def _build_arg_parser() -> argparse.ArgumentParser:
    root = argparse.ArgumentParser(
        prog="promisegraph",
        description="Static analyzer for promise-declaration documents.",
    )
    commands = root.add_subparsers(dest="command", required=True)

    def add_input(parser: argparse.ArgumentParser) -> None:
        parser.add_argument("input", help="document path, or - for stdin")

    def add_trust_flags(parser: argparse.ArgumentParser) -> None:
        parser.add_argument("--trust-initial", type=float, default=0.5,
                            help="starting trust for unassessed pairs")
        parser.add_argument("--trust-alpha", type=float, default=0.2,
                            help="gain applied on a kept assessment")
        parser.add_argument("--trust-beta", type=float, default=0.6,
                            help="loss applied on a not-kept assessment")

    def add_analysis_flags(parser: argparse.ArgumentParser) -> None:
        parser.add_argument("--quorum", type=int, default=2,
                            help="distinct sources a consumer should accept")
        parser.add_argument("--fail-on", choices=["info", "warning", "violation"],
                            default="violation",
                            help="lowest severity that fails the run")
        add_trust_flags(parser)

    check = commands.add_parser("check", help="parse and validate only")
    add_input(check)

    analyze = commands.add_parser("analyze", help="full analysis report")
    add_input(analyze)
    analyze.add_argument("--format", choices=["text", "json"], default="text")
    add_analysis_flags(analyze)

    trust_cmd = commands.add_parser("trust", help="trust table only")
    add_input(trust_cmd)
    trust_cmd.add_argument("--format", choices=["text", "json"], default="text")
    add_trust_flags(trust_cmd)

    export = commands.add_parser("export", help="serialize the graph")
    add_input(export)
    export.add_argument("--format", choices=["json", "dot"], default="json")
    export.add_argument("--viewpoint", metavar="AGENT",
                        help="restrict to what one agent can see")

    report = commands.add_parser("report", help="human-readable summary")
    add_input(report)
    add_analysis_flags(report)

    return root


def _read_input(path: str, stdin: IO[str]) -> str:
    if path == "-":
        return stdin.read()
    with open(path, "r", encoding="utf-8") as handle:
        return handle.read()


def _load_graph(path: str, stdin: IO[str], stderr: IO[str]) -> Optional[PromiseGraph]:
    """Parse and lower, reporting diagnostics; None means exit 2."""
    try:
        text = _read_input(path, stdin)
    except OSError as exc:
        print("error: cannot read %s: %s" % (path, exc), file=stderr)
        return None
    except UnicodeDecodeError as exc:
        print("error: %s is not valid UTF-8: %s" % (path, exc), file=stderr)
        return None
    try:
        return load(text)
    except ParseFailure as failure:
        for error in failure.errors:
            print("error: %s:%s" % (path, error), file=stderr)
        return None
    except LowerFailure as failure:
        for error in failure.errors:
            print("error: %s:%s" % (path, error), file=stderr)
        return None


def _want_color(stdout: IO[str]) -> bool:
    if os.environ.get("PROMISEGRAPH_NO_COLOR"):
        return False
    return hasattr(stdout, "isatty") and stdout.isatty()


def _findings_exit_code(report, fail_on: str) -> int:
    threshold = _SEVERITY_RANKS[fail_on]
    if any(f.severity.rank >= threshold for f in report.findings):
        return 1
    return 0


def run(argv: List[str], stdin: IO[str] = None, stdout: IO[str] = None,
        stderr: IO[str] = None) -> int:
    stdin = stdin if stdin is not None else sys.stdin
    stdout = stdout if stdout is not None else sys.stdout
    stderr = stderr if stderr is not None else sys.stderr

    arg_parser = _build_arg_parser()
    try:
        args = arg_parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on bad flags, 0 on --help
        return int(exc.code or 0)

    graph = _load_graph(args.input, stdin, stderr)
    if graph is None:
        return 2

    if args.command == "check":
        return 0

    if args.command in ("analyze", "report"):
        try:
            config = AnalysisConfig(
                quorum=args.quorum,
                trust=TrustParams(args.trust_initial, args.trust_alpha,
                                  args.trust_beta),
            )
        except ValueError as exc:
            print("error: %s" % exc, file=stderr)
            return 2
        report = analyze_all(graph, config)
        if args.command == "report":
            format_ = ReportFormat.TEXT
        else:
            format_ = ReportFormat(args.format)
        color = format_ is ReportFormat.TEXT and _want_color(stdout)
        if args.command == "report":
            stdout.write("%d agents, %d promises, %d impositions, %d assessments\n"
                         % (len(graph.agents), len(graph.promises),
                            len(graph.impositions), len(graph.assessments)))
        stdout.write(render_report(report, format_, color=color))
        return _findings_exit_code(report, args.fail_on)

    if args.command == "trust":
        try:
            params = TrustParams(args.trust_initial, args.trust_alpha,
                                 args.trust_beta)
        except ValueError as exc:
            print("error: %s" % exc, file=stderr)
            return 2
        table = trust(graph, params)
        entries = sorted(table.entries.items())
        if args.format == "json":
            import json as json_module
            payload = {"initial": table.initial, "trust": [
                {"assessor": a, "subject": s, "value": v}
                for (a, s), v in entries
            ]}
            stdout.write(json_module.dumps(payload, sort_keys=True,
                                           separators=(",", ":")) + "\n")
        else:
            for (assessor, subject), value in entries:
                stdout.write("%s -> %s: %r\n" % (assessor, subject, value))
        return 0

    if args.command == "export":
        target = graph
        if args.viewpoint is not None:
            try:
                target = viewpoint(graph, args.viewpoint).graph
            except KeyError:
                print("error: unknown viewpoint agent %r" % args.viewpoint,
                      file=stderr)
                return 2
        if args.format == "dot":
            stdout.write(to_dot(target))
        else:
            stdout.write(to_json(target).decode("utf-8"))
        return 0

    raise AssertionError("unhandled command %r" % args.command)


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
