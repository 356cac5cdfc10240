"""
Per-image fan-out.

Work is keyed by image id and results come back in the order of the keys
given, whatever the completion order. The pool size is BOXKIT_THREADS.
"""

from collections.abc import Callable, Sequence
from concurrent.futures import ThreadPoolExecutor
from typing import TypeVar

from src.config import get_settings

T = TypeVar("T")
R = TypeVar("R")


def map_images(fn: Callable[[T], R], items: Sequence[T], threads: int | None = None) -> list[R]:
    """Apply fn to every item, on a thread pool when more than one worker is allowed."""
    workers = threads if threads is not None else get_settings().threads
    if workers <= 1 or len(items) <= 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=min(workers, len(items))) as pool:
        return list(pool.map(fn, items))
