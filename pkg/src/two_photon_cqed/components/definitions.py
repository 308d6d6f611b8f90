"""Component dataclass definitions attached to protocol runs."""

from dataclasses import dataclass

from two_photon_cqed.protocol import CollapsedState, JointState, ProtocolSpec


@dataclass(slots=True)
class ProtocolComponent:
    """The protocol a run executes, with its pass durations already applied."""

    spec: ProtocolSpec


@dataclass(slots=True)
class StateComponent:
    """Current joint atom-field state."""

    state: JointState


@dataclass(slots=True)
class CursorComponent:
    """Index of the next cavity pass to apply."""

    next_pass: int = 0


@dataclass(slots=True)
class DetectionComponent:
    """Outcome of projecting the atom; ``collapsed`` is None for an empty branch."""

    probability: float
    collapsed: CollapsedState | None


@dataclass(slots=True)
class ScoreComponent:
    fidelity: float
    probability: float
    fidelity_no_detection: float
    branch_empty: bool


@dataclass(slots=True)
class ErrorComponent:
    """Error information."""

    error: str
    system_name: str
    timestamp: float


@dataclass(slots=True)
class TerminalComponent:
    """Marks a finished run."""

    reason: str
