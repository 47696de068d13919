"""Dependency tracking for pipeline stages.

A contextvar holds the stage currently being evaluated, so every setting or
stage read during the evaluation registers itself as a dependency.
"""

from __future__ import annotations

import contextvars
from typing import TYPE_CHECKING, Any

if TYPE_CHECKING:
    from branchfloer.stage import Stage

# The stage being evaluated; reads of settings and stages register on it.
current_stage: contextvars.ContextVar[Stage | None] = contextvars.ContextVar("current_stage", default=None)


def record_read(source: Any) -> None:
    """Make the stage being evaluated, if any, depend on ``source``."""
    reader = current_stage.get()
    if reader is not None:
        source._observers.add(reader)
        reader._dependencies.add(source)


def invalidate_observers(source: Any) -> None:
    """Mark every stage that read ``source`` dirty."""
    for observer in list(source._observers):
        observer._invalidate()
