from __future__ import annotations

import logging
import os
from concurrent.futures import ProcessPoolExecutor
from typing import Callable, Iterable, TypeVar

logger = logging.getLogger(__name__)

T = TypeVar("T")
R = TypeVar("R")


def thread_count() -> int:
    """
    Worker count from LAB_THREADS, default 1.
    """

    value = os.environ.get("LAB_THREADS", "1")
    try:
        return max(1, int(value))
    except ValueError:
        logger.warning("Ignoring invalid LAB_THREADS value '%s'", value)
        return 1


def parallel_map(
    function: Callable[[T], R], items: Iterable[T], workers: int | None = None
) -> list[R]:
    """
    Maps function over items, results in item order whatever the worker count.
    """

    items = list(items)
    workers = thread_count() if workers is None else workers
    if workers <= 1 or len(items) <= 1:
        return [function(item) for item in items]

    with ProcessPoolExecutor(max_workers=min(workers, len(items))) as executor:
        return list(executor.map(function, items))
