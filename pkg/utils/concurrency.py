import os
import logging
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, List, TypeVar

logger = logging.getLogger(__name__)

T = TypeVar('T')
R = TypeVar('R')

# Below this many items the pool costs more than it saves
MIN_PARALLEL_ITEMS = 64


def pool_size() -> int:
    """Worker count from CLONEFORGE_THREADS, falling back to the CPU count"""
    raw = os.environ.get('CLONEFORGE_THREADS')
    if raw:
        try:
            return max(1, int(raw))
        except ValueError:
            logger.warning(f"Ignoring invalid CLONEFORGE_THREADS value: {raw}")
    return max(1, os.cpu_count() or 1)


def parallel_map(fn: Callable[[T], R], items: Iterable[T]) -> List[R]:
    """Map fn over items on the shared pool; results keep the input order"""
    work = list(items)
    workers = pool_size()
    if workers == 1 or len(work) < MIN_PARALLEL_ITEMS:
        return [fn(item) for item in work]
    with ThreadPoolExecutor(max_workers=workers) as executor:
        return list(executor.map(fn, work))
