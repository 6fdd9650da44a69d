"""
Replica worker pool.

Work is split into fixed chunks before it reaches the pool and results come back in chunk order,
so the thread count only changes wall time.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Sequence, TypeVar

from config.settings import settings

T = TypeVar("T")
R = TypeVar("R")


def resolve_threads(requested: int | None = None) -> int:
    if settings.threads is not None:
        return max(1, settings.threads)
    if requested is not None:
        return max(1, requested)
    return max(1, os.cpu_count() or 1)


def map_ordered(
    fn: Callable[[T], R], items: Sequence[T], threads: int | None = None
) -> list[R]:
    """Apply fn to every item, returning results in input order."""
    workers = min(resolve_threads(threads), max(1, len(items)))
    if workers == 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=workers) as executor:
        return list(executor.map(fn, items))
