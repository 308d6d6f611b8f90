"""CavityPassSystem: applies one cavity pass per tick to every running protocol."""

import time

from two_photon_cqed.components import (
    CursorComponent,
    ErrorComponent,
    ProtocolComponent,
    StateComponent,
    TerminalComponent,
)
from two_photon_cqed.engine.world import World
from two_photon_cqed.protocol import apply_cavity_pass
from two_photon_cqed.types import PassAppliedEvent


class CavityPassSystem:
    def __init__(self, priority: int = 0) -> None:
        self.priority = priority

    async def process(self, world: World) -> None:
        notify = world.event_bus.has_subscribers(PassAppliedEvent)
        for run_id, components in world.query(
            ProtocolComponent,
            StateComponent,
            CursorComponent,
            exclude=(TerminalComponent, ErrorComponent),
        ):
            protocol, state, cursor = components
            passes = protocol.spec.passes
            if cursor.next_pass >= len(passes):
                continue

            current = passes[cursor.next_pass]
            try:
                state.state = apply_cavity_pass(
                    state.state, current.cavity, current.duration, protocol.spec.params
                )
            except Exception as exc:
                world.add_component(
                    run_id,
                    ErrorComponent(
                        error=str(exc),
                        system_name="CavityPassSystem",
                        timestamp=time.time(),
                    ),
                )
                continue

            if notify:
                await world.event_bus.publish(
                    PassAppliedEvent(
                        run_id=run_id,
                        pass_index=cursor.next_pass,
                        cavity=current.cavity,
                        duration=current.duration,
                    )
                )
            cursor.next_pass += 1
