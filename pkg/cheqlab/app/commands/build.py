from __future__ import annotations

import argparse
import logging
import sys

from ..services.documents import dump_frame, save_frame
from ..services.frames import FAMILIES, build_family
from ..services.logging_service import log_event

log = logging.getLogger(__name__)


def register(sub: argparse._SubParsersAction, parents) -> None:
    p = sub.add_parser("build", parents=parents, help="construct a frame and write its document")
    p.add_argument("family", choices=FAMILIES)
    p.add_argument("n", type=int, nargs="?", default=0, help="frame index (ignored for fork and h)")
    p.add_argument("--out", help="write the document here instead of stdout")
    p.set_defaults(handler=run)


def run(args: argparse.Namespace) -> int:
    frame = build_family(args.family, args.n, args.budget)
    if args.out:
        save_frame(frame, args.out)
        print(f"{frame.name}: {frame.size} points, {len(frame.covers)} covers -> {args.out}")
    else:
        sys.stdout.write(dump_frame(frame))
    log_event("frame_built", {"family": args.family, "n": args.n, "points": frame.size, "covers": len(frame.covers)})
    return 0
