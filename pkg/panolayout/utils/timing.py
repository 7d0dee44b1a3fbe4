"""
Stage Timer

Tracks wall-clock time per pipeline stage (render, solve, evaluate).
"""

import time
from collections import defaultdict, deque
from contextlib import contextmanager
from typing import Deque, Dict, Iterator


class StageTimer:
    """
    Keeps a rolling window of durations for each named stage.
    """

    def __init__(self, history_size: int = 10_000):
        self.history_size = history_size
        self._durations: Dict[str, Deque[float]] = defaultdict(
            lambda: deque(maxlen=self.history_size)
        )

    @contextmanager
    def stage(self, name: str) -> Iterator[None]:
        """Time the body of a ``with`` block under ``name``."""
        start = time.perf_counter()
        try:
            yield
        finally:
            self.record(name, (time.perf_counter() - start) * 1000.0)

    def record(self, name: str, duration_ms: float) -> None:
        self._durations[name].append(duration_ms)

    def count(self, name: str) -> int:
        return len(self._durations.get(name, ()))

    def mean_ms(self, name: str) -> float:
        """Average duration of a stage, 0 when never recorded."""
        values = self._durations.get(name)
        if not values:
            return 0.0
        return sum(values) / len(values)

    def total_ms(self, name: str) -> float:
        return float(sum(self._durations.get(name, ())))

    def summary(self) -> Dict[str, Dict[str, float]]:
        return {
            name: {"count": float(len(v)), "mean_ms": self.mean_ms(name), "total_ms": self.total_ms(name)}
            for name, v in sorted(self._durations.items())
        }
