"""Entity-component-system engine evaluating batches of protocol runs."""

from .component import ComponentStore
from .event_bus import EventBus
from .runner import Runner
from .system import System, SystemExecutor
from .world import World

__all__ = ["ComponentStore", "EventBus", "Runner", "System", "SystemExecutor", "World"]
