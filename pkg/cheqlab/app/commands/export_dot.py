from __future__ import annotations

import argparse
import sys
from pathlib import Path

from ..services.documents import load_frame, to_dot


def register(sub: argparse._SubParsersAction, parents) -> None:
    p = sub.add_parser("export-dot", parents=parents, help="print the Hasse diagram as DOT")
    p.add_argument("frame", help="frame document (JSON)")
    p.add_argument("--out", help="write the DOT text here instead of stdout")
    p.set_defaults(handler=run)


def run(args: argparse.Namespace) -> int:
    text = to_dot(load_frame(args.frame))
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return 0
