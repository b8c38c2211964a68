"""Flat-file formats: frame documents, point maps, valuations, DOT.

Frames are saved canonically (sorted keys, covers as the sorted transitive
reduction, fixed indentation) so that load-then-save is byte-identical.
"""
from __future__ import annotations

import json
import logging
from pathlib import Path
from typing import Any, Dict, List, Union

from pydantic import ValidationError

from ..models import FrameDocument, PointEntry
from .errors import DocumentError, MapError
from .morphisms import PointMap
from .poset import Poset, from_covers
from .semantics import Valuation

log = logging.getLogger(__name__)

PathLike = Union[str, Path]


def frame_to_document(p: Poset) -> FrameDocument:
    return FrameDocument(
        name=p.name,
        points=[PointEntry(id=i, label=lb) for i, lb in enumerate(p.labels)],
        covers=sorted(p.covers),
    )


def document_to_frame(doc: FrameDocument) -> Poset:
    return from_covers([pt.label for pt in doc.points], doc.covers, name=doc.name)


def dump_document(doc: FrameDocument) -> str:
    data = doc.model_dump()
    data["covers"] = [list(c) for c in sorted(data["covers"])]
    return json.dumps(data, sort_keys=True, indent=2) + "\n"


def dump_frame(p: Poset) -> str:
    return dump_document(frame_to_document(p))


def _read_json(path: PathLike) -> Any:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise DocumentError(f"cannot read {path}: {e.strerror or e}") from e
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise DocumentError(f"{path} is not valid JSON: {e.msg} (line {e.lineno})") from e


def parse_document(data: Any, source: str = "document") -> FrameDocument:
    try:
        return FrameDocument.model_validate(data)
    except ValidationError as e:
        first = e.errors()[0]
        where = ".".join(str(p) for p in first.get("loc", ()))
        raise DocumentError(f"{source}: {first['msg']}" + (f" at {where}" if where else "")) from e


def load_document(path: PathLike) -> FrameDocument:
    return parse_document(_read_json(path), str(path))


def load_frame(path: PathLike) -> Poset:
    p = document_to_frame(load_document(path))
    log.debug("loaded %s: %d points, %d covers", path, p.size, len(p.covers))
    return p


def save_frame(p: Poset, path: PathLike) -> FrameDocument:
    doc = frame_to_document(p)
    out = Path(path)
    if out.parent and not out.parent.exists():
        out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(dump_document(doc), encoding="utf-8")
    return doc


# point maps


def dump_map(m: PointMap) -> str:
    return json.dumps(m.pairs()) + "\n"


def save_map(m: PointMap, path: PathLike) -> None:
    Path(path).write_text(dump_map(m), encoding="utf-8")


def load_map(path: PathLike, source: Poset, target: Poset) -> PointMap:
    data = _read_json(path)
    if not isinstance(data, list):
        raise DocumentError(f"{path}: a map is a JSON list of [source_id, target_id] pairs")
    try:
        return PointMap.from_pairs(source, target, data)
    except (TypeError, ValueError) as e:
        raise MapError(f"{path}: malformed map entry ({e})") from e


# valuations


def load_valuation(path: PathLike, p: Poset) -> Valuation:
    """JSON object mapping each variable to the labels of the points where it holds."""
    data = _read_json(path)
    if not isinstance(data, dict) or not all(isinstance(v, list) for v in data.values()):
        raise DocumentError(f"{path}: a valuation is a JSON object of label lists")
    return Valuation.from_labels(p, {str(k): [str(x) for x in v] for k, v in data.items()})


def dump_valuation(v: Valuation) -> str:
    return json.dumps(v.to_labels(), sort_keys=True) + "\n"


# DOT


def _quote(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


def to_dot(p: Poset) -> str:
    """Hasse diagram, edges from lower to upper point, one rank per height."""
    lines = [f"digraph {_quote(p.name or 'frame')} {{", "  rankdir=BT;", "  node [shape=plaintext];"]
    for x, lb in enumerate(p.labels):
        lines.append(f"  {x} [label={_quote(lb)}];")
    levels: Dict[int, List[int]] = {}
    for x in range(p.size):
        levels.setdefault(p.height[x], []).append(x)
    for h in sorted(levels):
        if len(levels[h]) > 1:
            lines.append("  {rank=same; " + " ".join(str(x) for x in levels[h]) + ";}")
    for a, b in p.covers:
        lines.append(f"  {a} -> {b};")
    lines.append("}")
    return "\n".join(lines) + "\n"
