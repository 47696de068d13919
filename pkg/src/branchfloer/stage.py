"""Cached pipeline stages.

A Stage wraps a zero-argument function. The first ``get()`` runs it while
tracking every setting and stage it reads; the result is cached until one of
those dependencies changes, at which point the stage and everything built on
it are marked dirty. Stages are lazy: nothing is recomputed until read, so
changing ``report`` never reruns a differential.
"""

from __future__ import annotations

import logging
import time
from typing import Callable, Generic, TypeVar

from branchfloer._tracking import current_stage, invalidate_observers, record_read

logger = logging.getLogger("branchfloer.stage")

T = TypeVar("T")

_UNSET = object()


class Stage(Generic[T]):
    """A lazily evaluated, dependency-tracked pipeline step."""

    __slots__ = ("_fn", "name", "_value", "_dirty", "_dependencies", "_observers", "elapsed", "runs")

    def __init__(self, fn: Callable[[], T], name: str | None = None) -> None:
        self._fn = fn
        self.name = name or fn.__name__
        self._value: object = _UNSET
        self._dirty = True
        self._dependencies: set = set()
        self._observers: set[Stage] = set()
        self.elapsed: float | None = None
        self.runs = 0

    def get(self) -> T:
        record_read(self)
        if self._dirty:
            self._recompute()
        return self._value  # type: ignore[return-value]

    @property
    def dirty(self) -> bool:
        return self._dirty

    def _recompute(self) -> None:
        for dep in self._dependencies:
            dep._remove_observer(self)
        self._dependencies.clear()

        token = current_stage.set(self)
        started = time.perf_counter()
        try:
            self._value = self._fn()
        finally:
            current_stage.reset(token)
        self.elapsed = time.perf_counter() - started
        self.runs += 1
        self._dirty = False
        logger.debug("Stage %s finished in %.3fs", self.name, self.elapsed)

    def _invalidate(self) -> None:
        """Mark dirty and pass the invalidation on to dependent stages."""
        if not self._dirty:
            self._dirty = True
            self._value = _UNSET
            invalidate_observers(self)

    def _remove_observer(self, observer: Stage) -> None:
        self._observers.discard(observer)

    def __repr__(self) -> str:
        state = "dirty" if self._dirty else f"cached after {self.runs} run(s)"
        return f"Stage({self.name}, {state})"

