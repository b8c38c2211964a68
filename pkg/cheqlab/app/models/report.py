from __future__ import annotations

from typing import Any, Dict, List, Literal, Optional

from pydantic import BaseModel, Field

Status = Literal["pass", "fail", "skipped"]


class CheckResult(BaseModel):
    """Outcome of ``cheqlab check``."""

    frame: str
    formula: str
    valid: bool
    point: Optional[str] = None
    valuation: Dict[str, List[str]] = Field(default_factory=dict)
    explored: int = 0
    space: int = 0


class CheckRecord(BaseModel):
    check_id: str
    theorem_ref: str
    status: Status
    detail: str = ""
    witness: Optional[Any] = None
    elapsed: float = 0.0


class VerificationReport(BaseModel):
    profile: str
    checks: List[CheckRecord] = Field(default_factory=list)

    @property
    def failed(self) -> List[CheckRecord]:
        return [c for c in self.checks if c.status == "fail"]

    @property
    def skipped(self) -> List[CheckRecord]:
        return [c for c in self.checks if c.status == "skipped"]

    @property
    def ok(self) -> bool:
        return not self.failed

    def counts(self) -> Dict[str, int]:
        out = {"pass": 0, "fail": 0, "skipped": 0}
        for c in self.checks:
            out[c.status] += 1
        return out
