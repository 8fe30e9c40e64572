"""Command line client around the service handlers.

Exit codes: 0 success, 1 validation or input failure, 2 a cross-check
requested with --check disagreed with the main pipeline.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .documents import load_document, render_output
from .errors import Contradiction, OracleMismatch, TopologyError
from .service import run_circle, run_cocycle, run_level, run_sublevel, run_validate


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cocyclepers",
        description="Persistence for 0-cochains, circle-valued maps, and almost integral 1-cocycles.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser) -> None:
        p.add_argument("input", help="input document (JSON)")
        p.add_argument("--out", help="write the output document here instead of stdout")
        p.add_argument("--check", action="store_true", help="cross-verify with the elimination oracle")

    p = sub.add_parser("validate", help="validate the input document")
    common(p)

    p = sub.add_parser("sublevel", help="sublevel persistence of the cochain0")
    common(p)

    p = sub.add_parser("level", help="level persistence of the cochain0")
    common(p)
    p.add_argument("--at", help="single level value p/q instead of the whole grid")

    p = sub.add_parser("circle", help="level persistence of a circle-valued map")
    common(p)
    p.add_argument("--theta", required=True, help="cut angle p/q")
    p.add_argument("--max-copies", type=int, help="window budget (default: simplex count)")

    p = sub.add_parser("cocycle", help="persistence of an almost integral 1-cocycle")
    common(p)
    p.add_argument("--theta", required=True, help="cut angle p/q")
    p.add_argument("--base", help="base vertex name for the angle assignment")
    p.add_argument("--max-copies", type=int, help="window budget (default: simplex count)")

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    return parser


def _dispatch(args: argparse.Namespace):
    doc = load_document(args.input)
    if args.command == "validate":
        return run_validate(doc)
    if args.command == "sublevel":
        return run_sublevel(doc, check=args.check)
    if args.command == "level":
        return run_level(doc, at=args.at, check=args.check)
    if args.command == "circle":
        return run_circle(doc, args.theta, check=args.check, max_copies=args.max_copies)
    if args.command == "cocycle":
        return run_cocycle(doc, args.theta, base=args.base, check=args.check, max_copies=args.max_copies)
    raise AssertionError(args.command)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "serve":
        import uvicorn

        from .service import app

        uvicorn.run(app, host=args.host, port=args.port)
        return 0
    try:
        out = _dispatch(args)
    except (OracleMismatch, Contradiction) as exc:
        print(f"error: {exc.code}: {exc}", file=sys.stderr)
        return 2
    except TopologyError as exc:
        print(f"error: {exc.code}: {exc}", file=sys.stderr)
        return 1
    text = render_output(out)
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return 0 if out.status == "ok" else 1


if __name__ == "__main__":
    sys.exit(main())
