from __future__ import annotations

import argparse
import json

from ..services.logging_service import list_events


def register(sub: argparse._SubParsersAction, parents) -> None:
    p = sub.add_parser("logs", parents=parents, help="show the newest event log entries")
    p.add_argument("--limit", type=int, default=20)
    p.set_defaults(handler=run)


def run(args: argparse.Namespace) -> int:
    for entry in list_events(limit=max(1, args.limit)):
        print(json.dumps(entry, sort_keys=True))
    return 0
