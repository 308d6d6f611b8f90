"""Tick loop driving a World until every run has finished."""

from two_photon_cqed.components.definitions import ProtocolComponent, TerminalComponent
from two_photon_cqed.engine.world import World
from two_photon_cqed.logging import get_logger

logger = get_logger(__name__)


class Runner:
    """Orchestrates the main execution loop."""

    async def run(self, world: World, max_ticks: int | None = 100) -> int:
        """Process ``world`` until no run is left without a TerminalComponent.

        When ``max_ticks`` is reached the unfinished runs receive
        ``TerminalComponent(reason="max_ticks")``. Pass None for no limit.

        Returns:
            The number of ticks processed.
        """
        tick = 0
        while True:
            active = world.query(ProtocolComponent, exclude=(TerminalComponent,))
            if not active:
                logger.debug("runner_finished", ticks=tick)
                return tick

            if max_ticks is not None and tick >= max_ticks:
                for run_id, _ in active:
                    world.add_component(run_id, TerminalComponent(reason="max_ticks"))
                logger.warning("runner_max_ticks", ticks=tick, unfinished=len(active))
                return tick

            await world.process()
            tick += 1
