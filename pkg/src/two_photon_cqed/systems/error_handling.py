"""ErrorHandlingSystem: logs failed runs and retires them."""

from two_photon_cqed.components import ErrorComponent, TerminalComponent
from two_photon_cqed.engine.world import World
from two_photon_cqed.logging import get_logger
from two_photon_cqed.types import ErrorOccurredEvent

logger = get_logger(__name__)


class ErrorHandlingSystem:
    """System that handles error cleanup and logging."""

    def __init__(self, priority: int = 99) -> None:
        """Initialize ErrorHandlingSystem with priority.

        Args:
            priority: System execution priority (default 99 - runs last)
        """
        self.priority = priority

    async def process(self, world: World) -> None:
        """Log every ErrorComponent, publish ErrorOccurredEvent and terminate the run.

        The component is removed; the run keeps a TerminalComponent with
        ``reason="error"`` so the runner stops waiting for it.
        """
        for run_id, (error_comp,) in world.query(ErrorComponent):
            logger.error(
                "run_error",
                run_id=run_id,
                system_name=error_comp.system_name,
                error=error_comp.error,
            )

            await world.event_bus.publish(
                ErrorOccurredEvent(
                    run_id=run_id,
                    error=error_comp.error,
                    system_name=error_comp.system_name,
                )
            )

            world.remove_component(run_id, ErrorComponent)
            world.add_component(run_id, TerminalComponent(reason="error"))
