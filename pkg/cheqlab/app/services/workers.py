from __future__ import annotations

import logging
import multiprocessing
from typing import Callable, List, Optional, Sequence, Tuple, TypeVar

log = logging.getLogger(__name__)

T = TypeVar("T")
R = TypeVar("R")


def chunks(total: int, parts: int) -> List[Tuple[int, int]]:
    """Split ``range(total)`` into at most ``parts`` contiguous half-open ranges."""
    parts = max(1, min(parts, total))
    step, extra = divmod(total, parts)
    out = []
    lo = 0
    for i in range(parts):
        hi = lo + step + (1 if i < extra else 0)
        out.append((lo, hi))
        lo = hi
    return out


def first_hit(fn: Callable[[T], Optional[R]], tasks: Sequence[T], workers: int) -> Optional[R]:
    """First non-None result of ``fn`` over ``tasks``.

    With one worker the tasks run in order and the result is the first in
    task order; with more, whichever process finishes a hit first wins and
    the pool is terminated.
    """
    if workers <= 1 or len(tasks) <= 1:
        for task in tasks:
            res = fn(task)
            if res is not None:
                return res
        return None
    procs = min(workers, len(tasks))
    log.debug("first_hit: %d tasks on %d processes", len(tasks), procs)
    with multiprocessing.Pool(procs) as pool:
        for res in pool.imap_unordered(fn, tasks):
            if res is not None:
                return res
    return None
