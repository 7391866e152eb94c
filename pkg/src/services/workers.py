"""Order-preserving fan-out over worker processes."""

from __future__ import annotations

import logging
from collections.abc import Callable, Sequence
from multiprocessing import Pool
from typing import TypeVar

logger = logging.getLogger(__name__)

T = TypeVar("T")
R = TypeVar("R")


def map_tasks(func: Callable[[T], R], tasks: Sequence[T], threads: int = 1) -> list[R]:
    """Apply ``func`` to every task, in order.

    With ``threads > 1`` the tasks run in a process pool; ``func`` must be a
    module-level function. Results come back in task order either way, so
    callers reduce them identically for any worker count.
    """
    if threads <= 1 or len(tasks) <= 1:
        return [func(task) for task in tasks]
    workers = min(threads, len(tasks))
    logger.debug("Dispatching tasks", extra={"nodes": len(tasks)})
    with Pool(processes=workers) as pool:
        return pool.map(func, tasks)
