"""Command-line entry point: ``adjunct run | parse | enumerate``."""

from __future__ import annotations

import argparse
import os
import sys

from adjunct.checks import HypothesisFailed

from .documents import ParseError, TaskSpec, parse, render as render_document
from .enumerate import KINDS, enumerate_documents, line
from .tasks import OPS, UnknownTask, render, run_task

EXIT_PASS, EXIT_FAIL, EXIT_ERROR = 0, 1, 2


def _read(path: str) -> bytes:
    if path == "-":
        return sys.stdin.buffer.read()
    with open(path, "rb") as fh:
        return fh.read()


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="adjunct", description="Exhaustive checks on finite structures.")
    sub = p.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run a task document and print its report")
    run.add_argument("document", help="task document path, or - for stdin")
    run.add_argument("--budget", type=int, default=10**6, help="candidate budget (default 10^6)")
    run.add_argument("--format", choices=("text", "machine"), default="text")
    run.add_argument("--seed", type=int, default=0,
                     help="search-order seed; every search here is exhaustive, so verdicts never depend on it")
    run.add_argument("--timing", action="store_true", help="include wall-clock timing in the report")

    pa = sub.add_parser("parse", help="validate a document and print its normalized form")
    pa.add_argument("document")

    en = sub.add_parser("enumerate", help="stream structures as one JSON document per line")
    en.add_argument("kind", choices=KINDS)
    en.add_argument("--size", type=int, default=2, help="elements or vertices")
    en.add_argument("--max-edges", type=int, default=1, help="edges per vertex pair (graphs)")
    en.add_argument("--nonassociative", action="store_true", help="magmas: skip associative tables")
    en.add_argument("--up-to-iso", action="store_true", help="graphs: one per isomorphism class")

    sub.add_parser("tasks", help="list task names")
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    out = sys.stdout
    try:
        if args.command == "tasks":
            out.write("".join(f"{name}\n" for name in sorted(OPS)))
            return EXIT_PASS
        if args.command == "enumerate":
            for doc in enumerate_documents(args.kind, args.size, args.max_edges,
                                           nonassociative=args.nonassociative, up_to_iso=args.up_to_iso):
                out.write(line(doc) + "\n")
            return EXIT_PASS
        doc = parse(_read(args.document))
        if args.command == "parse":
            out.write(render_document(doc))
            return EXIT_PASS
        if not isinstance(doc.value, TaskSpec):
            raise ParseError(f"expected a task document, got {doc.kind!r}", "$.kind")
        if args.budget < 0:
            raise ParseError("budget must be non-negative")
        report = run_task(doc.value, args.budget, timing=args.timing)
        out.write(render(report, args.format))
        return report.exit_code
    except BrokenPipeError:
        # The reader went away (e.g. ``| head``); silence the flush at exit.
        sys.stdout = open(os.devnull, "w")
        return EXIT_PASS
    except (ParseError, UnknownTask, HypothesisFailed, OSError) as exc:
        sys.stderr.write(f"adjunct: error: {exc}\n")
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
