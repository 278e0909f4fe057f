import logging
import queue
import threading
from dataclasses import dataclass, field
from typing import Callable

logger = logging.getLogger(__name__)


@dataclass
class PoolResult:
    outcomes: dict = field(default_factory=dict)
    failures: dict = field(default_factory=dict)

    def ordered(self) -> list:
        """Outcomes in task order, whatever order the workers finished in."""
        return [self.outcomes[i] for i in sorted(self.outcomes)]


class CampaignTaskPool:
    """Worker threads pulling independent tasks from one shared queue."""

    REFRESH_INTERVAL = 50

    def __init__(self, max_workers: int = 1):
        self.max_workers = max(1, int(max_workers))

    def run(self, handler: Callable, tasks) -> PoolResult:
        tasks = list(tasks)
        result = PoolResult()
        if self.max_workers == 1 or len(tasks) <= 1:
            for task in tasks:
                self._safe_handle(handler, task, result)
                self._report(result, len(tasks))
            return result

        pending = queue.SimpleQueue()
        for task in tasks:
            pending.put(task)
        lock = threading.Lock()

        threads = []
        for _ in range(min(self.max_workers, len(tasks))):
            t = threading.Thread(
                target=self._run_worker,
                args=(handler, pending, result, lock, len(tasks)),
                daemon=True,
            )
            t.start()
            threads.append(t)
        self._wait(threads)
        return result

    def _run_worker(self, handler, pending, result, lock, total) -> None:
        while True:
            try:
                task = pending.get_nowait()
            except queue.Empty:
                return
            outcome = self._call(handler, task)
            with lock:
                self._store(result, task, outcome)
                self._report(result, total)

    def _safe_handle(self, handler, task, result) -> None:
        self._store(result, task, self._call(handler, task))

    def _call(self, handler, task):
        try:
            return True, handler(task)
        except Exception as exc:
            logger.warning("task %d failed: %s", task.index, exc, exc_info=logger.isEnabledFor(logging.DEBUG))
            return False, f"{type(exc).__name__}: {exc}"

    def _store(self, result, task, outcome) -> None:
        ok, value = outcome
        if ok:
            result.outcomes[task.index] = value
        else:
            result.failures[task.index] = value

    def _report(self, result, total) -> None:
        done = len(result.outcomes) + len(result.failures)
        if done % self.REFRESH_INTERVAL == 0 or done == total:
            logger.info("campaign progress: %d/%d tasks, %d failed", done, total, len(result.failures))

    def _wait(self, threads):
        for t in threads:
            t.join()
