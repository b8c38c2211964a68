from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from ..services.logging_service import log_event
from ..services.suite import PROFILES, check_ids, render_table, run_suite

log = logging.getLogger(__name__)


def register(sub: argparse._SubParsersAction, parents) -> None:
    p = sub.add_parser("verify-paper", parents=parents, help="re-establish each result at desk scale and report")
    p.add_argument("--profile", choices=PROFILES, default="quick")
    p.add_argument("--json", action="store_true", help="print the report as JSON")
    p.add_argument("--only", action="append", choices=check_ids(), help="run only this check (repeatable)")
    p.add_argument("--out", help="also write the JSON report here")
    p.set_defaults(handler=run)


def run(args: argparse.Namespace) -> int:
    report = run_suite(args.profile, args.deterministic, args.budget, args.workers, args.only)
    text = report.model_dump_json(indent=2) + "\n"
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    sys.stdout.write(text if args.json else render_table(report))
    log_event("verify_paper", {"profile": args.profile, **report.counts()})
    return 0 if report.ok else 1
