from __future__ import annotations

import json
import logging
import os
from datetime import datetime, timezone
from pathlib import Path
from typing import Any, Dict, List

log = logging.getLogger(__name__)

EVENTS_FILE = "cheqlab_events.jsonl"


def _file_log_path() -> Path:
    base = Path(os.environ.get("CHEQLAB_LOG_DIR") or (Path.cwd() / "data" / "logs"))
    base.mkdir(parents=True, exist_ok=True)
    return base / EVENTS_FILE


def _sink() -> str:
    return (os.environ.get("CHEQLAB_LOG_SINK") or "file").lower()


def log_event(event_type: str, payload: Dict[str, Any]) -> None:
    entry = {
        "ts": datetime.now(timezone.utc).isoformat(),
        "type": event_type,
        "payload": payload,
    }
    if _sink() == "none":
        return
    try:
        path = _file_log_path()
        with path.open("a", encoding="utf-8") as f:
            f.write(json.dumps(entry, default=str) + "\n")
    except OSError as e:
        # best effort
        log.debug("event sink unavailable: %s", e)


def list_events(limit: int = 100) -> List[Dict[str, Any]]:
    """Newest first."""
    if _sink() == "none":
        return []
    path = _file_log_path()
    if not path.exists():
        return []
    lines = path.read_text(encoding="utf-8").splitlines()[-limit:]
    out: List[Dict[str, Any]] = []
    for ln in lines:
        try:
            out.append(json.loads(ln))
        except json.JSONDecodeError:
            continue
    return out[::-1]
