from __future__ import annotations

import argparse
import logging
from pathlib import Path

from ..models import CheckResult
from ..services.documents import dump_valuation, load_frame, load_valuation
from ..services.errors import NotRootedError
from ..services.formulas import parse, to_text
from ..services.logging_service import log_event
from ..services.poset import root_of
from ..services.semantics import check_validity, check_validity_at

log = logging.getLogger(__name__)


def register(sub: argparse._SubParsersAction, parents) -> None:
    p = sub.add_parser("check", parents=parents, help="decide whether a frame validates a formula")
    p.add_argument("frame", help="frame document (JSON)")
    p.add_argument("formula", help="formula text, or one of sa, kp, wem")
    p.add_argument("--valuation", help="check one valuation (JSON object of label lists) instead of all")
    p.add_argument("--point", help="point label for --valuation (default: the root)")
    p.add_argument("--save-valuation", metavar="PATH", help="write a countermodel valuation in the --valuation format")
    p.add_argument("--json", action="store_true", help="print the result as JSON")
    p.set_defaults(handler=run)


def run(args: argparse.Namespace) -> int:
    frame = load_frame(args.frame)
    formula = parse(args.formula)
    if args.valuation:
        return _check_one(args, frame, formula)

    res = check_validity(frame, formula, args.budget, args.deterministic, args.workers)
    out = CheckResult(
        frame=frame.name or args.frame,
        formula=to_text(formula),
        valid=res.valid,
        point=frame.labels[res.point] if res.point is not None else None,
        valuation=res.valuation.to_labels() if res.valuation else {},
        explored=res.explored,
        space=res.space,
    )
    log_event("validity_checked", out.model_dump())
    if args.save_valuation and res.valuation is not None:
        Path(args.save_valuation).write_text(dump_valuation(res.valuation), encoding="utf-8")
    if args.json:
        print(out.model_dump_json(indent=2))
    elif res.valid:
        print(f"valid: {out.formula} holds on {out.frame} ({res.space} valuations)")
    else:
        print(f"countermodel: {out.formula} fails at {out.point}")
        for name, labels in out.valuation.items():
            print(f"  {name} = {{{', '.join(labels)}}}")
    return 0 if res.valid else 1


def _check_one(args: argparse.Namespace, frame, formula) -> int:
    valuation = load_valuation(args.valuation, frame)
    if args.point:
        point = frame.index_of(args.point)
    else:
        point = root_of(frame)
        if point is None:
            raise NotRootedError("frame has no root; pass --point")
    holds = check_validity_at(frame, formula, valuation, point)
    out = CheckResult(
        frame=frame.name or args.frame,
        formula=to_text(formula),
        valid=holds,
        point=frame.labels[point],
        valuation=valuation.to_labels(),
        explored=1,
        space=1,
    )
    log_event("point_checked", out.model_dump())
    if args.json:
        print(out.model_dump_json(indent=2))
    else:
        verdict = "forces" if holds else "does not force"
        print(f"{out.point} {verdict} {out.formula}")
    return 0 if holds else 1
