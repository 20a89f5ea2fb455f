"""
Replica worker pool

Replicas run on a thread pool and are collected in replica order, so every
reduction downstream sees the same sequence whatever the thread count.
"""

from concurrent.futures import ThreadPoolExecutor
from typing import Callable, List, TypeVar

from tqdm import tqdm

from ..utils.logger import LoggerMixin

T = TypeVar("T")


class ReplicaPool(LoggerMixin):
    """Runs ``fn(replica_id)`` for replica_id = 0..R-1"""

    def __init__(self, threads: int = 1, progress: bool = True):
        self.threads = max(1, int(threads))
        self.progress = progress

    def map(self, fn: Callable[[int], T], replicas: int, desc: str = "replicas") -> List[T]:
        ids = range(replicas)
        if self.threads == 1:
            iterator = (fn(i) for i in ids)
            return list(tqdm(iterator, total=replicas, desc=desc, disable=not self.progress))

        self.logger.debug(f"Running {replicas} {desc} on {self.threads} threads")
        with ThreadPoolExecutor(max_workers=self.threads) as executor:
            # Executor.map yields in submission order
            results = executor.map(fn, ids)
            return list(tqdm(results, total=replicas, desc=desc, disable=not self.progress))
