from __future__ import annotations

from typing import Any, TypeVar, cast

from two_photon_cqed.types import RunId

T = TypeVar("T")


class ComponentStore:
    """Components indexed by type, then by run."""

    def __init__(self) -> None:
        self._components: dict[type[Any], dict[RunId, Any]] = {}

    def add(self, run_id: RunId, component: Any) -> None:
        self._components.setdefault(type(component), {})[run_id] = component

    def get(self, run_id: RunId, component_type: type[T]) -> T | None:
        runs = self._components.get(component_type)
        if runs is None:
            return None
        return cast(T | None, runs.get(run_id))

    def remove(self, run_id: RunId, component_type: type[Any]) -> None:
        runs = self._components.get(component_type)
        if runs is None:
            return
        runs.pop(run_id, None)
        if not runs:
            del self._components[component_type]

    def has(self, run_id: RunId, component_type: type[Any]) -> bool:
        runs = self._components.get(component_type)
        return runs is not None and run_id in runs

    def get_all(self, component_type: type[T]) -> dict[RunId, T]:
        return cast(dict[RunId, T], self._components.get(component_type, {}))
