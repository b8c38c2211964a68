from __future__ import annotations

import argparse
import json
import logging
import sys

from ..services.documents import dump_map, load_frame, load_map, save_map
from ..services.logging_service import log_event
from ..services.morphisms import check_p_morphism, search_p_morphism

log = logging.getLogger(__name__)


def register(sub: argparse._SubParsersAction, parents) -> None:
    p = sub.add_parser("morphism", parents=parents, help="search for or verify a p-morphism")
    p.add_argument("src", help="source frame document")
    p.add_argument("dst", help="target frame document")
    p.add_argument("--onto", action="store_true", help="require the map to be surjective")
    p.add_argument("--map", dest="map_path", help="verify this map instead of searching")
    p.add_argument("--out", help="write a found map here instead of stdout")
    p.set_defaults(handler=run)


def run(args: argparse.Namespace) -> int:
    src = load_frame(args.src)
    dst = load_frame(args.dst)
    if args.map_path:
        m = load_map(args.map_path, src, dst)
        rep = check_p_morphism(m, require_onto=args.onto)
        log_event("morphism_verified", {"src": args.src, "dst": args.dst, "ok": rep.ok, "violations": len(rep.violations)})
        if rep.ok:
            print("ok: p-morphism" + (" onto" if args.onto else ""))
            return 0
        for line in rep.describe(m):
            print(line)
        if rep.truncated:
            print("(more violations not shown)")
        return 1

    m = search_p_morphism(src, dst, args.onto, args.deterministic, args.budget, args.workers)
    log_event("morphism_search", {"src": args.src, "dst": args.dst, "onto": args.onto, "found": m is not None})
    if m is None:
        print("none: no p-morphism" + (" onto" if args.onto else "") + " exists")
        return 1
    if args.out:
        save_map(m, args.out)
        print(f"found: {json.dumps(m.to_labels())} -> {args.out}")
    else:
        sys.stdout.write(dump_map(m))
    return 0
