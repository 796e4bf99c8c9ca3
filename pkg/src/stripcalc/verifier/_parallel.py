"""Ordered thread-pool map capped by ``STRIPCALC_THREADS``."""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, TypeVar

import numpy as np

T = TypeVar("T")
R = TypeVar("R")


def thread_count() -> int:
    raw = os.environ.get("STRIPCALC_THREADS", "").strip()
    if not raw:
        return 1
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def ordered_map(fn: Callable[[T], R], items: Iterable[T]) -> list[R]:
    """``[fn(x) for x in items]``, run on up to ``STRIPCALC_THREADS`` threads."""
    items = list(items)
    k = min(thread_count(), len(items))
    if k <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=k) as pool:
        return list(pool.map(fn, items))


def task_rng(seed: int, *task: int) -> np.random.Generator:
    """Independent generator for one task, derived from the root seed."""
    return np.random.default_rng(np.random.SeedSequence([int(seed), *map(int, task)]))
