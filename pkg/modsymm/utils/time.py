import time
from contextlib import contextmanager
from datetime import datetime, timezone
from typing import Iterator


def utc_now() -> datetime:
    """Return the current time as an aware datetime object in UTC."""
    return datetime.now(timezone.utc)


class Stopwatch:
    """Wall-clock interval measured with the performance counter."""

    def __init__(self):
        self.started_at: float | None = None
        self.elapsed: float = 0.0

    def start(self) -> "Stopwatch":
        self.started_at = time.perf_counter()
        return self

    def stop(self) -> float:
        if self.started_at is not None:
            self.elapsed = time.perf_counter() - self.started_at
            self.started_at = None
        return self.elapsed


@contextmanager
def measure() -> Iterator[Stopwatch]:
    """
    Context manager timing the enclosed block in wall seconds.

    The stopwatch is stopped even when the block raises, so failed solves
    still report how long they ran.
    """
    watch = Stopwatch().start()
    try:
        yield watch
    finally:
        watch.stop()
