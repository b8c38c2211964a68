from __future__ import annotations

import os
from pathlib import Path
from typing import Optional

from pydantic import BaseModel, Field, ValidationError

from .errors import ConfigError

DEFAULT_POINT_BUDGET = 20_000
DEFAULT_SEARCH_BUDGET = 100_000_000

_ENV_KEYS = (
    "CHEQLAB_BUDGET",
    "CHEQLAB_POINT_BUDGET",
    "CHEQLAB_WORKERS",
    "CHEQLAB_LOG_SINK",
    "CHEQLAB_LOG_DIR",
)


# Fill unset CHEQLAB_* variables from a .env file in the working directory.
# Values already present in the environment are never overwritten.
def _load_dotenv_if_missing() -> None:
    missing = [k for k in _ENV_KEYS if not os.environ.get(k)]
    if not missing:
        return
    for name in (".env", ".env.local"):
        p = Path.cwd() / name
        if not p.exists():
            continue
        try:
            for ln in p.read_text(encoding="utf-8").splitlines():
                ln = ln.strip()
                if not ln or ln.startswith("#") or "=" not in ln:
                    continue
                k, v = ln.split("=", 1)
                k = k.strip()
                if k.startswith("export "):
                    k = k[len("export "):].strip()
                v = v.strip().strip('"').strip("'")
                if k in missing and not os.environ.get(k):
                    os.environ[k] = v
            break
        except OSError:
            continue


class Settings(BaseModel):
    """Runtime knobs, resolved from the environment on each call."""

    point_budget: int = Field(DEFAULT_POINT_BUDGET, ge=1)
    search_budget: int = Field(DEFAULT_SEARCH_BUDGET, ge=1)
    workers: int = Field(1, ge=1)
    log_sink: str = Field("file", pattern="^(file|none)$")
    log_dir: Optional[Path] = None

    @classmethod
    def from_env(cls) -> "Settings":
        _load_dotenv_if_missing()
        raw = {
            "point_budget": os.environ.get("CHEQLAB_POINT_BUDGET"),
            "search_budget": os.environ.get("CHEQLAB_BUDGET"),
            "workers": os.environ.get("CHEQLAB_WORKERS"),
            "log_sink": (os.environ.get("CHEQLAB_LOG_SINK") or "").lower() or None,
            "log_dir": os.environ.get("CHEQLAB_LOG_DIR"),
        }
        try:
            return cls(**{k: v for k, v in raw.items() if v not in (None, "")})
        except ValidationError as e:
            raise ConfigError(f"invalid CHEQLAB_* environment: {e.errors()[0]['msg']}") from e


def get_settings() -> Settings:
    return Settings.from_env()


def resolve_point_budget(budget: Optional[int]) -> int:
    return budget if budget is not None else get_settings().point_budget


def resolve_search_budget(budget: Optional[int]) -> int:
    return budget if budget is not None else get_settings().search_budget


def resolve_workers(workers: Optional[int]) -> int:
    return workers if workers is not None else get_settings().workers
