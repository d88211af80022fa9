"""Worker pool over frequency nodes."""

import logging
from collections.abc import Callable, Iterable
from concurrent.futures import ThreadPoolExecutor
from typing import TypeVar

import psutil

logger = logging.getLogger(__name__)

T = TypeVar("T")
R = TypeVar("R")


def default_threads() -> int:
    """Number of physical cores, 1 when psutil cannot tell."""
    return psutil.cpu_count(logical=False) or 1


def map_modes(fn: Callable[[T], R], items: Iterable[T], threads: int = 1) -> list[R]:
    """``fn`` over ``items`` in input order; ``threads <= 1`` runs inline.

    numpy and scipy release the GIL inside the dense kernels, so threads overlap
    the per-mode factorizations.
    """
    items = list(items)
    if threads <= 1 or len(items) <= 1:
        return [fn(item) for item in items]
    workers = min(threads, len(items))
    logger.debug("mapping %d modes over %d threads", len(items), workers)
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))
