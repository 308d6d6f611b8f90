"""DetectionSystem: projects the atom once a run has no passes left."""

import time

from two_photon_cqed.components import (
    CursorComponent,
    DetectionComponent,
    ErrorComponent,
    ProtocolComponent,
    StateComponent,
    TerminalComponent,
)
from two_photon_cqed.engine.world import World
from two_photon_cqed.protocol import EMPTY_BRANCH_THRESHOLD, project_atom
from two_photon_cqed.types import AtomLevel


class DetectionSystem:
    """Heralds on ``spec.detection``; runs without detection still report P(|g⟩)."""

    def __init__(self, priority: int = 1, fallback_level: AtomLevel = AtomLevel.G) -> None:
        self.priority = priority
        self.fallback_level = fallback_level

    async def process(self, world: World) -> None:
        for run_id, components in world.query(
            ProtocolComponent,
            StateComponent,
            CursorComponent,
            exclude=(DetectionComponent, TerminalComponent, ErrorComponent),
        ):
            protocol, state, cursor = components
            if cursor.next_pass < len(protocol.spec.passes):
                continue

            level = protocol.spec.detection or self.fallback_level
            try:
                probability = sum(abs(value) ** 2 for value in state.state.branch(level).values())
                collapsed = (
                    project_atom(state.state, level)
                    if probability >= EMPTY_BRANCH_THRESHOLD
                    else None
                )
            except Exception as exc:
                world.add_component(
                    run_id,
                    ErrorComponent(
                        error=str(exc),
                        system_name="DetectionSystem",
                        timestamp=time.time(),
                    ),
                )
                continue

            world.add_component(
                run_id, DetectionComponent(probability=probability, collapsed=collapsed)
            )
