"""``densig`` command line entry point."""
from __future__ import annotations

import argparse
import sys

from densig import tensor_core as tc
from densig.cli.demos import DEMOS
from densig.cli.parser import parse_state_spec
from densig.cli.runner import render_report, run
from densig.errors import DensigError, NumericalError, ParseError

EXIT_OK = 0
EXIT_PARSE = 1
EXIT_STATE = 2
EXIT_NUMERIC = 3


def exit_code(exc: DensigError) -> int:
    if isinstance(exc, ParseError):
        return EXIT_PARSE
    if isinstance(exc, NumericalError):
        return EXIT_NUMERIC
    return EXIT_STATE


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="densig", description="Block-expansion entanglement signatures.")
    ap.add_argument(
        "--rank-tol",
        type=float,
        default=tc.RANK_TOL,
        metavar="FLOAT",
        help="relative eigenvalue threshold for the X rank (default %(default)g)",
    )
    sub = ap.add_subparsers(dest="command", required=True)
    p = sub.add_parser("analyze", help="parse and run a state-description file")
    p.add_argument("file")
    p = sub.add_parser("demo", help="run a built-in program")
    p.add_argument("name", choices=sorted(DEMOS))
    return ap


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if args.rank_tol <= 0:
        print("densig: --rank-tol must be positive", file=sys.stderr)
        return EXIT_STATE
    if args.command == "demo":
        source, origin = DEMOS[args.name], f"<demo {args.name}>"
    else:
        origin = args.file
        try:
            with open(args.file, encoding="utf-8") as fh:
                source = fh.read()
        except (OSError, UnicodeDecodeError) as exc:
            print(f"densig: cannot read {args.file}: {exc}", file=sys.stderr)
            return EXIT_PARSE
    try:
        text = render_report(run(parse_state_spec(source), rank_tol=args.rank_tol))
    except DensigError as exc:
        print(f"{origin}: {type(exc).__name__}: {exc}", file=sys.stderr)
        return exit_code(exc)
    sys.stdout.write(text)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
