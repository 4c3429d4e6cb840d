"""
Parallel Task Executor

Runs independent evaluations (optimizer restarts, scaling-study orbits)
on a thread pool. Results come back in submission order regardless of
completion order, so any reduction over them is independent of the
worker count.
"""

import logging
import time
from collections import deque
from concurrent.futures import ThreadPoolExecutor, as_completed
from dataclasses import dataclass
from threading import Lock
from typing import Any, Callable, Deque, Dict, List, Optional, Sequence

logger = logging.getLogger(__name__)

DEFAULT_HISTORY_LIMIT = 10_000


# ============================================================================
# TASK RESULT
# ============================================================================

@dataclass
class TaskResult:
    """Outcome of one task: its value or the exception it raised."""
    task_id: int
    label: str
    success: bool
    value: Any = None
    error: Optional[BaseException] = None
    execution_time: float = 0.0


# ============================================================================
# EXECUTOR
# ============================================================================

class RestartExecutor:
    """
    Maps a function over independent inputs on a thread pool.

    Exceptions are captured per task instead of propagating. Finished tasks
    are appended to execution_history, which keeps only the most recent
    history_limit results; task, failure and busy-time totals cover every
    batch ever run.
    """

    def __init__(self, max_workers: int = 4, history_limit: int = DEFAULT_HISTORY_LIMIT):
        self.max_workers = max(1, int(max_workers))
        self.history_limit = max(1, int(history_limit))
        self.execution_history: Deque[TaskResult] = deque(maxlen=self.history_limit)
        self._task_count = 0
        self._failed_count = 0
        self._busy_time = 0.0
        self._lock = Lock()

    def execute_batch(
        self,
        fn: Callable[[Any], Any],
        items: Sequence[Any],
        labels: Optional[Sequence[str]] = None,
    ) -> List[TaskResult]:
        """
        Apply fn to every item in parallel.

        Args:
            fn: Function of one item
            items: Inputs
            labels: Optional human-readable label per item

        Returns:
            TaskResults ordered like items
        """
        labels = list(labels) if labels is not None else [f"task_{i}" for i in range(len(items))]
        results: Dict[int, TaskResult] = {}

        if self.max_workers == 1 or len(items) <= 1:
            for i, item in enumerate(items):
                results[i] = self._execute_single_task(i, labels[i], fn, item)
        else:
            with ThreadPoolExecutor(max_workers=self.max_workers) as executor:
                future_to_task = {
                    executor.submit(self._execute_single_task, i, labels[i], fn, item): i
                    for i, item in enumerate(items)
                }
                for future in as_completed(future_to_task):
                    i = future_to_task[future]
                    results[i] = future.result()

        ordered = [results[i] for i in range(len(items))]
        with self._lock:
            self.execution_history.extend(ordered)
            self._task_count += len(ordered)
            self._failed_count += sum(1 for r in ordered if not r.success)
            self._busy_time += sum(r.execution_time for r in ordered)
        return ordered

    def _execute_single_task(self, task_id: int, label: str, fn: Callable, item: Any) -> TaskResult:
        start_time = time.perf_counter()
        try:
            value = fn(item)
            return TaskResult(task_id, label, True, value=value,
                              execution_time=time.perf_counter() - start_time)
        except Exception as e:
            logger.debug("Task %s failed: %s", label, e)
            return TaskResult(task_id, label, False, error=e,
                              execution_time=time.perf_counter() - start_time)

    def get_execution_stats(self) -> Dict[str, Any]:
        """
        Totals over every batch; failed labels and the slowest task come from
        the retained history only.
        """
        with self._lock:
            history = list(self.execution_history)
            tasks, failed, busy = self._task_count, self._failed_count, self._busy_time
        if not tasks:
            return {"message": "No tasks run yet"}

        slowest = max(history, key=lambda r: r.execution_time)
        return {
            "tasks": tasks,
            "failed": failed,
            "failed_labels": [r.label for r in history if not r.success],
            "mean_task_time": busy / tasks,
            "busy_time": busy,
            "slowest": slowest.label,
            "retained": len(history),
        }

    def print_stats(self) -> None:
        stats = self.get_execution_stats()
        if "message" in stats:
            print(stats["message"])
            return
        print(f"\n⏱️  {stats['tasks']} tasks on {self.max_workers} workers, "
              f"{stats['failed']} failed, {stats['busy_time']:.2f}s busy "
              f"(mean {stats['mean_task_time'] * 1e3:.1f} ms, slowest {stats['slowest']})")
        for label in stats["failed_labels"]:
            print(f"   ❌ {label}")


def raise_first_failure(results: Sequence[TaskResult]) -> None:
    """Re-raise the exception of the first failed task, if any."""
    for result in results:
        if not result.success and result.error is not None:
            raise result.error


# ============================================================================
# FACTORY FUNCTIONS
# ============================================================================

def create_executor(max_workers: int = 4, history_limit: int = DEFAULT_HISTORY_LIMIT) -> RestartExecutor:
    """Executor with at least one worker."""
    return RestartExecutor(max_workers=max_workers, history_limit=history_limit)
