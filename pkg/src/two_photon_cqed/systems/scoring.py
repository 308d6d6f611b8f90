"""ScoringSystem: computes the figures of merit of detected runs and finishes them."""

import math
import time

from two_photon_cqed.components import (
    DetectionComponent,
    ErrorComponent,
    ScoreComponent,
    StateComponent,
    TerminalComponent,
)
from two_photon_cqed.engine.world import World
from two_photon_cqed.metrics import TargetState, collapsed_fidelity, fidelity_no_detection
from two_photon_cqed.types import RunScoredEvent


class ScoringSystem:
    def __init__(self, target: TargetState, priority: int = 2) -> None:
        self.target = target
        self.priority = priority

    async def process(self, world: World) -> None:
        notify = world.event_bus.has_subscribers(RunScoredEvent)
        for run_id, components in world.query(
            DetectionComponent,
            StateComponent,
            exclude=(TerminalComponent, ErrorComponent),
        ):
            detection, state = components
            try:
                branch_empty = detection.collapsed is None
                fidelity = (
                    math.nan
                    if detection.collapsed is None
                    else collapsed_fidelity(detection.collapsed, self.target)
                )
                unheralded = fidelity_no_detection(state.state, self.target)
            except Exception as exc:
                world.add_component(
                    run_id,
                    ErrorComponent(
                        error=str(exc),
                        system_name="ScoringSystem",
                        timestamp=time.time(),
                    ),
                )
                continue

            world.add_component(
                run_id,
                ScoreComponent(
                    fidelity=fidelity,
                    probability=min(1.0, detection.probability),
                    fidelity_no_detection=unheralded,
                    branch_empty=branch_empty,
                ),
            )
            world.add_component(run_id, TerminalComponent(reason="scored"))

            if notify:
                await world.event_bus.publish(
                    RunScoredEvent(
                        run_id=run_id,
                        fidelity=fidelity,
                        probability=detection.probability,
                        branch_empty=branch_empty,
                    )
                )
