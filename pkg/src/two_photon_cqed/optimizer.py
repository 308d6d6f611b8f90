"""Interaction-time sweeps and the grid + coordinate-refinement optimizer.

Every batch of time tuples is evaluated in one :class:`World`: one run entity
per tuple, advanced by the pass, detection and scoring systems. Records are
read back by run id, so their order never depends on completion order.
"""

from __future__ import annotations

import asyncio
import itertools
import math
from collections.abc import Awaitable, Callable, Mapping, Sequence
from dataclasses import dataclass, field

import numpy as np

from two_photon_cqed.components import (
    CursorComponent,
    ProtocolComponent,
    ScoreComponent,
    StateComponent,
)
from two_photon_cqed.engine import Runner, World
from two_photon_cqed.logging import get_logger
from two_photon_cqed.metrics import TargetState
from two_photon_cqed.protocol import ProtocolSpec, make_initial_state
from two_photon_cqed.systems import (
    CavityPassSystem,
    DetectionSystem,
    ErrorHandlingSystem,
    ScoringSystem,
)
from two_photon_cqed.types import (
    DomainError,
    NoFeasiblePointError,
    Objective,
    RunId,
    RunScoredEvent,
)

logger = get_logger(__name__)

DEFAULT_COARSE_POINTS = 64
REFINEMENT_TOLERANCE = 1e-3

TimeTuple = tuple[float, ...]
ProgressHandler = Callable[[RunScoredEvent], Awaitable[None]]


@dataclass(frozen=True, slots=True)
class SweepRecord:
    """Figures of merit at one time tuple.

    ``fidelity`` is nan when the detection branch is empty.
    """

    times: TimeTuple
    fidelity: float
    probability: float
    fidelity_no_detection: float
    branch_empty: bool = False

    def objective_value(self, objective: Objective) -> float:
        if objective is Objective.FIDELITY:
            return self.fidelity
        return self.fidelity_no_detection


@dataclass(frozen=True, slots=True)
class SweepResult:
    variables: tuple[str, ...]
    axes: tuple[tuple[float, ...], ...]
    records: tuple[SweepRecord, ...]
    objective: Objective
    best: SweepRecord | None


@dataclass(frozen=True, slots=True)
class OptimizationResult:
    """Best feasible record plus the search trail that produced it.

    ``history`` holds the incumbent after the coarse grid and after every
    refinement round; its objective values never decrease.
    """

    variables: tuple[str, ...]
    best: SweepRecord
    objective: Objective
    min_probability: float | None
    coarse: SweepResult
    history: tuple[SweepRecord, ...] = field(default=())
    evaluations: int = 0


def _is_feasible(
    record: SweepRecord, objective: Objective, min_probability: float | None
) -> bool:
    if not math.isfinite(record.objective_value(objective)):
        return False
    if min_probability is None:
        return True
    return math.isfinite(record.probability) and record.probability >= min_probability


def select_best(
    records: Sequence[SweepRecord],
    objective: Objective,
    min_probability: float | None = None,
) -> SweepRecord | None:
    """Deterministic argmax of ``objective`` over feasible records.

    Empty-branch records have no post-selected fidelity and drop out under the
    fidelity objective. Ties go to the lexicographically smallest time tuple.
    """
    best: SweepRecord | None = None
    for record in sorted(records, key=lambda item: item.times):
        if not _is_feasible(record, objective, min_probability):
            continue
        if best is None or record.objective_value(objective) > best.objective_value(objective):
            best = record
    return best


def _check_target(spec: ProtocolSpec, target: TargetState) -> None:
    if target.n_modes != spec.n_cavities:
        raise DomainError(
            f"target {target.label!r} has {target.n_modes} modes, protocol has {spec.n_cavities} cavities"
        )


def build_world(
    spec_template: ProtocolSpec,
    time_tuples: Sequence[Sequence[float]],
    target: TargetState,
) -> tuple[World, list[RunId]]:
    """World holding one run per time tuple, with the evaluation systems registered."""
    _check_target(spec_template, target)
    world = World()
    for system in (
        CavityPassSystem(),
        DetectionSystem(),
        ScoringSystem(target),
        ErrorHandlingSystem(),
    ):
        world.register_system(system, priority=system.priority)

    run_ids: list[RunId] = []
    for times in time_tuples:
        spec = spec_template.with_durations(times)
        run_id = world.create_run()
        world.add_component(run_id, ProtocolComponent(spec=spec))
        world.add_component(
            run_id,
            StateComponent(
                state=make_initial_state(spec.initial_atom, spec.n_cavities, spec.n_max)
            ),
        )
        world.add_component(run_id, CursorComponent())
        run_ids.append(run_id)
    return world, run_ids


async def evaluate_batch(
    spec_template: ProtocolSpec,
    time_tuples: Sequence[Sequence[float]],
    target: TargetState,
    progress: ProgressHandler | None = None,
) -> list[SweepRecord]:
    """Score every time tuple; the result is aligned with ``time_tuples``.

    ``progress`` is subscribed to :class:`RunScoredEvent` for the batch.
    """
    world, run_ids = build_world(spec_template, time_tuples, target)
    if not run_ids:
        return []
    if progress is not None:
        world.event_bus.subscribe(RunScoredEvent, progress)

    # passes, then detection and scoring, plus one tick of slack
    await Runner().run(world, max_ticks=len(spec_template.passes) + 3)

    records: list[SweepRecord] = []
    for run_id, times in zip(run_ids, time_tuples):
        score = world.get_component(run_id, ScoreComponent)
        key = tuple(float(value) for value in times)
        if score is None:
            records.append(SweepRecord(key, math.nan, math.nan, math.nan))
            continue
        records.append(
            SweepRecord(
                times=key,
                fidelity=score.fidelity,
                probability=score.probability,
                fidelity_no_detection=score.fidelity_no_detection,
                branch_empty=score.branch_empty,
            )
        )
    return records


def _axes_from_grids(
    spec_template: ProtocolSpec, grids: Mapping[str, Sequence[float]]
) -> tuple[tuple[str, ...], tuple[tuple[float, ...], ...]]:
    variables = spec_template.time_variables
    unknown = set(grids) - set(variables)
    if unknown:
        raise DomainError(f"unknown time variables {sorted(unknown)}; expected {list(variables)}")

    axes: list[tuple[float, ...]] = []
    for name, duration in zip(variables, spec_template.durations):
        axis = tuple(float(value) for value in grids.get(name, (duration,)))
        if not axis:
            raise DomainError(f"grid for {name} is empty")
        if any(not math.isfinite(value) or value < 0 for value in axis):
            raise DomainError(f"grid for {name} must hold finite nonnegative times")
        axes.append(axis)
    return variables, tuple(axes)


async def sweep_async(
    spec_template: ProtocolSpec,
    grids: Mapping[str, Sequence[float]],
    objective: Objective,
    target: TargetState,
    progress: ProgressHandler | None = None,
) -> SweepResult:
    """Evaluate the Cartesian product of ``grids``.

    Variables without a grid keep the template's duration. Records come out
    in lexicographic order of their times.
    """
    variables, axes = _axes_from_grids(spec_template, grids)
    points = list(itertools.product(*axes))
    records = sorted(
        await evaluate_batch(spec_template, points, target, progress), key=lambda item: item.times
    )
    best = select_best(records, objective)
    logger.info(
        "sweep_completed",
        protocol=spec_template.name,
        points=len(records),
        empty_branches=sum(record.branch_empty for record in records),
        best_times=None if best is None else best.times,
        best_value=None if best is None else best.objective_value(objective),
    )
    return SweepResult(
        variables=variables,
        axes=axes,
        records=tuple(records),
        objective=objective,
        best=best,
    )


def sweep(
    spec_template: ProtocolSpec,
    grids: Mapping[str, Sequence[float]],
    objective: Objective,
    target: TargetState,
    progress: ProgressHandler | None = None,
) -> SweepResult:
    return asyncio.run(sweep_async(spec_template, grids, objective, target, progress))


def _validate_bounds(
    spec_template: ProtocolSpec, bounds: Mapping[str, tuple[float, float]]
) -> list[tuple[float, float]]:
    variables = spec_template.time_variables
    unknown = set(bounds) - set(variables)
    if unknown:
        raise DomainError(f"unknown time variables {sorted(unknown)}; expected {list(variables)}")

    intervals: list[tuple[float, float]] = []
    for name, duration in zip(variables, spec_template.durations):
        low, high = bounds.get(name, (duration, duration))
        if not (math.isfinite(low) and math.isfinite(high)) or low < 0 or high < low:
            raise DomainError(f"invalid bounds for {name}: [{low}, {high}]")
        intervals.append((float(low), float(high)))
    return intervals


async def optimize_times_async(
    spec_template: ProtocolSpec,
    bounds: Mapping[str, tuple[float, float]],
    target: TargetState,
    objective: Objective = Objective.FIDELITY,
    min_probability: float | None = None,
    coarse_points: int = DEFAULT_COARSE_POINTS,
) -> OptimizationResult:
    """Maximize ``objective`` over the box ``bounds``.

    A coarse grid of ``coarse_points`` per axis picks the starting incumbent.
    Refinement then tries incumbent ± h on each axis in turn, moving only on
    strict improvement, and halves every h after a full pass; it stops once
    h < 10⁻³ of the axis width on every axis.

    Raises:
        NoFeasiblePointError: no coarse point meets ``min_probability``.
    """
    if min_probability is not None and not 0.0 <= min_probability <= 1.0:
        raise DomainError(f"min_probability must lie in [0, 1], got {min_probability}")
    if coarse_points < 1:
        raise DomainError(f"coarse_points must be positive, got {coarse_points}")
    intervals = _validate_bounds(spec_template, bounds)
    variables = spec_template.time_variables

    grids = {
        name: [low] if high == low else np.linspace(low, high, coarse_points).tolist()
        for name, (low, high) in zip(variables, intervals)
    }
    coarse = await sweep_async(spec_template, grids, objective, target)
    evaluations = len(coarse.records)

    incumbent = select_best(coarse.records, objective, min_probability)
    if incumbent is None:
        raise NoFeasiblePointError(
            f"no grid point of {spec_template.name} satisfies probability >= {min_probability}"
        )
    history = [incumbent]

    widths = [high - low for low, high in intervals]
    steps = [width / max(1, len(grids[name]) - 1) for name, width in zip(variables, widths)]
    active = [axis for axis, width in enumerate(widths) if width > 0]

    def unresolved() -> bool:
        return any(steps[axis] >= REFINEMENT_TOLERANCE * widths[axis] for axis in active)

    while active and unresolved():
        for axis in active:
            low, high = intervals[axis]
            candidates: list[TimeTuple] = []
            for sign in (-1.0, 1.0):
                moved = min(high, max(low, incumbent.times[axis] + sign * steps[axis]))
                point = incumbent.times[:axis] + (moved,) + incumbent.times[axis + 1 :]
                if point != incumbent.times and point not in candidates:
                    candidates.append(point)
            if not candidates:
                continue

            trial = await evaluate_batch(spec_template, candidates, target)
            evaluations += len(trial)
            challenger = select_best(trial, objective, min_probability)
            if challenger is not None and challenger.objective_value(
                objective
            ) > incumbent.objective_value(objective):
                incumbent = challenger

        steps = [step / 2.0 for step in steps]
        history.append(incumbent)
        logger.debug(
            "refinement_step",
            round=len(history) - 1,
            times=incumbent.times,
            value=incumbent.objective_value(objective),
        )

    logger.info(
        "optimization_completed",
        protocol=spec_template.name,
        times=incumbent.times,
        fidelity=incumbent.fidelity,
        probability=incumbent.probability,
        evaluations=evaluations,
    )
    return OptimizationResult(
        variables=variables,
        best=incumbent,
        objective=objective,
        min_probability=min_probability,
        coarse=coarse,
        history=tuple(history),
        evaluations=evaluations,
    )


def optimize_times(
    spec_template: ProtocolSpec,
    bounds: Mapping[str, tuple[float, float]],
    target: TargetState,
    objective: Objective = Objective.FIDELITY,
    min_probability: float | None = None,
    coarse_points: int = DEFAULT_COARSE_POINTS,
) -> OptimizationResult:
    return asyncio.run(
        optimize_times_async(
            spec_template, bounds, target, objective, min_probability, coarse_points
        )
    )
