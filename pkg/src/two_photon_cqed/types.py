"""Core type definitions for the two-photon cavity-QED simulator."""

import math
from dataclasses import dataclass
from enum import Enum
from typing import NewType

RunId = NewType("RunId", int)
ManifoldIndex = NewType("ManifoldIndex", int)

PhotonTuple = tuple[int, ...]


class AtomLevel(Enum):
    """Atomic levels of the ladder |e⟩ → |f⟩ → |g⟩."""

    E = "e"
    F = "f"
    G = "g"


class FrequencyConvention(Enum):
    """Whether rates are radian frequencies or cycle frequencies."""

    ANGULAR = "angular"
    CYCLIC = "cyclic"


class Objective(Enum):
    """Quantity maximized by sweeps and the optimizer."""

    FIDELITY = "fidelity"
    FIDELITY_NO_DETECTION = "fidelity_no_detection"


@dataclass(frozen=True, slots=True)
class PhysicalParams:
    """Coupling constants and detuning sharing one frequency unit.

    Cyclic values are multiplied by 2π before use; every property below is in
    radian frequency.
    """

    g1: float
    g2: float
    delta: float
    convention: FrequencyConvention = FrequencyConvention.ANGULAR

    def __post_init__(self) -> None:
        if self.g1 < 0 or self.g2 < 0:
            raise DomainError(f"coupling constants must be nonnegative, got g1={self.g1}, g2={self.g2}")
        for name, value in (("g1", self.g1), ("g2", self.g2), ("delta", self.delta)):
            if not math.isfinite(value):
                raise DomainError(f"{name} must be finite, got {value}")

    @property
    def scale(self) -> float:
        return 2.0 * math.pi if self.convention is FrequencyConvention.CYCLIC else 1.0

    @property
    def g1_rad(self) -> float:
        return self.g1 * self.scale

    @property
    def g2_rad(self) -> float:
        return self.g2 * self.scale

    @property
    def delta_rad(self) -> float:
        return self.delta * self.scale


@dataclass(frozen=True, slots=True)
class CavityPass:
    """One atom transit: the cavity index (0-based) and the interaction time."""

    cavity: int
    duration: float


@dataclass(slots=True)
class PassAppliedEvent:
    """Event emitted after a cavity pass is applied to a run."""

    run_id: RunId
    pass_index: int
    cavity: int
    duration: float


@dataclass(slots=True)
class RunScoredEvent:
    """Event emitted when a run has been scored."""

    run_id: RunId
    fidelity: float
    probability: float
    branch_empty: bool


@dataclass(slots=True)
class ErrorOccurredEvent:
    run_id: RunId
    error: str
    system_name: str


class DomainError(ValueError):
    """Raised when an operation's precondition is violated."""


class EmptyBranchError(Exception):
    """Raised when a detection outcome has (numerically) zero probability."""

    def __init__(self, level: AtomLevel, probability: float) -> None:
        super().__init__(
            f"detection branch |{level.value}⟩ is empty (probability={probability:.3e})"
        )
        self.level = level
        self.probability = probability


class NoFeasiblePointError(Exception):
    """Raised when no evaluated point satisfies the success-probability floor."""


class ConfigError(ValueError):
    """Raised for semantically invalid run configurations."""
