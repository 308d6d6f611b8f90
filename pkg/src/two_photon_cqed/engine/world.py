from __future__ import annotations

from typing import Any, TypeVar

from two_photon_cqed.engine.component import ComponentStore
from two_photon_cqed.engine.event_bus import EventBus
from two_photon_cqed.engine.system import System, SystemExecutor
from two_photon_cqed.types import RunId

T = TypeVar("T")


class World:
    """Container of protocol runs (entities), their components and the systems acting on them."""

    def __init__(self) -> None:
        self._last_run_id = 0
        self._components = ComponentStore()
        self._systems = SystemExecutor()
        self._event_bus = EventBus()

    @property
    def event_bus(self) -> EventBus:
        return self._event_bus

    def create_run(self) -> RunId:
        self._last_run_id += 1
        return RunId(self._last_run_id)

    def add_component(self, run_id: RunId, component: Any) -> None:
        self._components.add(run_id, component)

    def get_component(self, run_id: RunId, component_type: type[T]) -> T | None:
        return self._components.get(run_id, component_type)

    def remove_component(self, run_id: RunId, component_type: type[Any]) -> None:
        self._components.remove(run_id, component_type)

    def has_component(self, run_id: RunId, component_type: type[Any]) -> bool:
        return self._components.has(run_id, component_type)

    def register_system(self, system: System, priority: int) -> None:
        self._systems.register(system, priority)

    async def process(self) -> None:
        await self._systems.execute(self)

    def query(
        self, *component_types: type[Any], exclude: tuple[type[Any], ...] = ()
    ) -> list[tuple[RunId, tuple[Any, ...]]]:
        """Runs holding every type in ``component_types`` and none in ``exclude``, by run id."""
        if not component_types:
            return []

        results: list[tuple[RunId, tuple[Any, ...]]] = []
        for run_id in sorted(self._components.get_all(component_types[0])):
            if any(self._components.has(run_id, excluded) for excluded in exclude):
                continue
            if not all(self._components.has(run_id, item) for item in component_types[1:]):
                continue
            components = tuple(
                self._components.get(run_id, component_type)
                for component_type in component_types
            )
            results.append((run_id, components))
        return results
