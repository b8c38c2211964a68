from .documents import FrameDocument, PointEntry
from .report import CheckRecord, CheckResult, VerificationReport

__all__ = ["CheckRecord", "CheckResult", "FrameDocument", "PointEntry", "VerificationReport"]
