from dataclasses import dataclass

import pytest

from two_photon_cqed.engine import EventBus, World
from two_photon_cqed.types import RunId


@dataclass(slots=True)
class Tag:
    label: str


@dataclass(slots=True)
class Marker:
    value: int


class TrackingSystem:
    def __init__(self, marker: str, log: list[str]) -> None:
        self._marker = marker
        self._log = log

    async def process(self, world: World) -> None:
        _ = world
        self._log.append(self._marker)


def test_world_create_run_returns_incrementing_ids() -> None:
    world = World()
    assert world.create_run() == RunId(1)
    assert world.create_run() == RunId(2)


def test_world_event_bus_property_exposes_event_bus_instance() -> None:
    assert isinstance(World().event_bus, EventBus)


def test_world_add_get_remove_component() -> None:
    world = World()
    run = world.create_run()

    assert world.get_component(run, Tag) is None
    world.add_component(run, Tag("a"))
    assert world.get_component(run, Tag) == Tag("a")
    assert world.has_component(run, Tag)

    world.remove_component(run, Tag)
    assert not world.has_component(run, Tag)


def test_world_add_component_overwrites_same_type() -> None:
    world = World()
    run = world.create_run()
    world.add_component(run, Marker(1))
    world.add_component(run, Marker(2))

    assert world.get_component(run, Marker) == Marker(2)
    assert world.query(Marker) == [(run, (Marker(2),))]


def test_world_query_orders_by_run_id_and_honours_exclude() -> None:
    world = World()
    runs = [world.create_run() for _ in range(4)]
    # insert out of order
    for run in reversed(runs):
        world.add_component(run, Marker(int(run)))
    world.add_component(runs[0], Tag("skip"))
    world.add_component(runs[2], Tag("skip"))

    results = world.query(Marker, exclude=(Tag,))

    assert [run for run, _ in results] == [runs[1], runs[3]]
    assert results[0][1] == (Marker(2),)


def test_world_query_requires_every_component() -> None:
    world = World()
    first, second = world.create_run(), world.create_run()
    world.add_component(first, Marker(1))
    world.add_component(first, Tag("x"))
    world.add_component(second, Marker(2))

    assert world.query(Tag, Marker) == [(first, (Tag("x"), Marker(1)))]
    assert world.query() == []


@pytest.mark.asyncio
async def test_world_process_runs_registered_systems_in_priority_order() -> None:
    world = World()
    log: list[str] = []
    world.register_system(TrackingSystem("late", log), priority=5)
    world.register_system(TrackingSystem("early", log), priority=0)

    await world.process()

    assert log == ["early", "late"]
