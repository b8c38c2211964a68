"""cheqlab command line: build, check, morphism, export-dot, verify-paper, logs.

Exit codes: 0 the property holds, 1 it definitively fails, 2 usage, parse
or I/O error, 3 a size or search budget was exhausted.
"""
from __future__ import annotations

import argparse
import logging
import sys
from typing import List, Optional

from pydantic import ValidationError

from .commands import build, check, export_dot, logs, morphism, verify_paper
from .services.errors import BudgetError, CheqlabError

log = logging.getLogger(__name__)

EXIT_USAGE = 2
EXIT_BUDGET = 3


def _common() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--budget", type=int, default=None, help="search budget, or point budget for build (default: CHEQLAB_BUDGET or 10^8)")
    common.add_argument("--workers", type=int, default=None, help="worker processes for non-deterministic runs")
    common.add_argument("--deterministic", action="store_true", help="sequential canonical search order")
    common.add_argument("-v", "--verbose", action="store_true", help="debug logging on stderr")
    return common


def create_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cheqlab", description="Finite Kripke frames, p-morphisms and validity.")
    sub = parser.add_subparsers(dest="command", required=True)
    parents = [_common()]
    for module in (build, check, morphism, export_dot, verify_paper, logs):
        module.register(sub, parents)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = create_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.WARNING,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )
    if args.budget is not None and args.budget < 1:
        print("error: --budget must be a positive integer", file=sys.stderr)
        return EXIT_USAGE
    if args.workers is not None and args.workers < 1:
        print("error: --workers must be a positive integer", file=sys.stderr)
        return EXIT_USAGE
    try:
        return args.handler(args)
    except BudgetError as e:
        print(f"budget exhausted: {e}", file=sys.stderr)
        return EXIT_BUDGET
    except (CheqlabError, OSError, ValidationError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
