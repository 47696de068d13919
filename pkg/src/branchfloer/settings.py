"""Run options as tracked cells.

Settings is a fixed schema of named cells. Reading a cell from inside a
stage makes the stage depend on it; writing a different value invalidates
those stages. Invalidation only marks stages dirty; nothing reruns until a
stage is read, so several writes in a row cost one recomputation.
"""

from __future__ import annotations

from typing import TYPE_CHECKING, Any, Mapping

from branchfloer._tracking import invalidate_observers, record_read

if TYPE_CHECKING:
    from branchfloer.stage import Stage

DEFAULT_SETTINGS: dict[str, object] = {
    "lift": None,
    "max_domain_coeff": None,
    "report": "text",
    "timing": False,
    "checks": False,
}


class Setting:
    """One tracked value."""

    __slots__ = ("name", "_value", "_observers")

    def __init__(self, name: str, value: object) -> None:
        self.name = name
        self._value = value
        self._observers: set[Stage] = set()

    def get(self) -> object:
        record_read(self)
        return self._value

    def set(self, value: object) -> None:
        old = self._value
        if old is not value and old != value:
            self._value = value
            invalidate_observers(self)

    def _remove_observer(self, observer: Stage) -> None:
        self._observers.discard(observer)

    def __repr__(self) -> str:
        return f"Setting({self.name}={self._value!r})"


class Settings:
    """Keyed option store over a fixed schema."""

    def __init__(
        self,
        schema: Mapping[str, object] = DEFAULT_SETTINGS,
        initial: Mapping[str, object] | None = None,
    ) -> None:
        unknown = set(initial or {}) - set(schema)
        if unknown:
            raise KeyError(f"unknown settings: {', '.join(sorted(unknown))}")
        self._cells = {
            key: Setting(key, (initial or {}).get(key, default)) for key, default in schema.items()
        }

    def _cell(self, key: str) -> Setting:
        try:
            return self._cells[key]
        except KeyError:
            raise KeyError(f"unknown setting {key!r}") from None

    def get(self, key: str) -> Any:
        return self._cell(key).get()

    def set(self, key: str, value: object) -> None:
        self._cell(key).set(value)

    def update(self, values: Mapping[str, object]) -> None:
        """Set several values; no value is written if any key is unknown."""
        for key in values:
            self._cell(key)
        for key, value in values.items():
            self.set(key, value)

    def as_dict(self) -> dict[str, object]:
        return {key: cell._value for key, cell in self._cells.items()}
