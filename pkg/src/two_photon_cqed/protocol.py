"""Joint atom ⊗ multi-cavity states, cavity passes and atomic detection.

A single atom crosses vacuum-prepared cavities one after another. Each pass
couples the atom to one cavity only; transit between cavities is
instantaneous and adds no phase. Detection is an ideal projection on one
atomic level.

In a decoupled initial state the amplitude of |f,n+1⟩ is C_f·C_{n+1} and that
of |g,n+2⟩ is C_g·C_{n+2} (older notations write C_b and C_c for these).
"""

from __future__ import annotations

import math
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass, field, replace
from types import MappingProxyType

import numpy as np

from two_photon_cqed.dynamics import (
    manifold_levels,
    manifold_of,
    manifold_propagator,
    photons_in_manifold,
)
from two_photon_cqed.types import (
    AtomLevel,
    CavityPass,
    DomainError,
    EmptyBranchError,
    FrequencyConvention,
    PhotonTuple,
    PhysicalParams,
)

Ket = tuple[AtomLevel, PhotonTuple]

EMPTY_BRANCH_THRESHOLD = 1e-14
NORM_TOLERANCE = 1e-10
DEFAULT_N_MAX = 2


@dataclass(frozen=True, slots=True)
class JointState:
    """Sparse pure state over (atom level, photon number per cavity)."""

    amplitudes: Mapping[Ket, complex]
    n_cavities: int
    n_max: int = DEFAULT_N_MAX

    def __post_init__(self) -> None:
        if self.n_cavities < 1:
            raise DomainError(f"need at least one cavity, got {self.n_cavities}")
        for level, photons in self.amplitudes:
            if len(photons) != self.n_cavities:
                raise DomainError(f"ket {photons} does not match {self.n_cavities} cavities")
            if any(count < 0 or count > self.n_max for count in photons):
                raise DomainError(f"ket {photons} lies outside truncation n_max={self.n_max}")
        object.__setattr__(self, "amplitudes", MappingProxyType(dict(self.amplitudes)))

    def amplitude(self, level: AtomLevel, photons: Iterable[int]) -> complex:
        return self.amplitudes.get((level, tuple(photons)), 0j)

    def norm(self) -> float:
        return math.sqrt(sum(abs(value) ** 2 for value in self.amplitudes.values()))

    def branch(self, level: AtomLevel) -> dict[PhotonTuple, complex]:
        """Unnormalized field amplitudes accompanying ``level``."""
        return {
            photons: value
            for (item, photons), value in self.amplitudes.items()
            if item is level
        }

    def with_phase(self, phase: complex) -> JointState:
        return replace(
            self, amplitudes={ket: value * phase for ket, value in self.amplitudes.items()}
        )


@dataclass(frozen=True, slots=True)
class CollapsedState:
    """Field state left after detecting the atom in ``level``."""

    level: AtomLevel
    field_amplitudes: Mapping[PhotonTuple, complex]
    probability: float

    @property
    def normalization(self) -> float:
        """The renormalizing constant N = 1/√P."""
        return 1.0 / math.sqrt(self.probability)


@dataclass(frozen=True, slots=True)
class ProtocolSpec:
    """Ordered cavity passes applied to one atom, then optional detection."""

    params: PhysicalParams
    n_cavities: int
    passes: tuple[CavityPass, ...]
    initial_atom: AtomLevel = AtomLevel.E
    detection: AtomLevel | None = AtomLevel.G
    n_max: int = DEFAULT_N_MAX
    name: str = field(default="custom", compare=False)

    def __post_init__(self) -> None:
        if self.n_cavities < 1:
            raise DomainError(f"need at least one cavity, got {self.n_cavities}")
        for item in self.passes:
            if not 0 <= item.cavity < self.n_cavities:
                raise DomainError(f"cavity index {item.cavity} out of range")
            if item.duration < 0:
                raise DomainError(f"pass duration must be nonnegative, got {item.duration}")

    @property
    def time_variables(self) -> tuple[str, ...]:
        return tuple(f"t{index + 1}" for index in range(len(self.passes)))

    @property
    def durations(self) -> tuple[float, ...]:
        return tuple(item.duration for item in self.passes)

    @property
    def total_time(self) -> float:
        return sum(self.durations)

    def with_durations(self, durations: Sequence[float]) -> ProtocolSpec:
        """Copy with the pass durations replaced in order."""
        if len(durations) != len(self.passes):
            raise DomainError(
                f"expected {len(self.passes)} durations, got {len(durations)}"
            )
        passes = tuple(
            CavityPass(cavity=item.cavity, duration=float(duration))
            for item, duration in zip(self.passes, durations)
        )
        return replace(self, passes=passes)


def make_initial_state(
    atom: AtomLevel, n_cavities: int, n_max: int = DEFAULT_N_MAX
) -> JointState:
    """Atom in ``atom``, every cavity in vacuum."""
    return JointState(
        amplitudes={(atom, (0,) * n_cavities): 1.0 + 0j},
        n_cavities=n_cavities,
        n_max=n_max,
    )


def _require_normalized(values: Iterable[complex], label: str) -> None:
    norm = math.sqrt(sum(abs(value) ** 2 for value in values))
    if abs(norm - 1.0) > NORM_TOLERANCE:
        raise DomainError(f"{label} is not normalized (norm={norm})")


def make_product_state(
    atom_amplitudes: Mapping[AtomLevel, complex],
    field_amplitudes: Sequence[Mapping[int, complex]],
    n_max: int | None = None,
) -> JointState:
    """Decoupled initial state (C_e|e⟩ + C_f|f⟩ + C_g|g⟩) ⊗ cavity 1 ⊗ … ⊗ cavity N."""
    if not field_amplitudes:
        raise DomainError("need at least one cavity")
    _require_normalized(atom_amplitudes.values(), "atomic state")
    for index, cavity in enumerate(field_amplitudes):
        _require_normalized(cavity.values(), f"field state of cavity {index + 1}")

    kets: dict[PhotonTuple, complex] = {(): 1.0 + 0j}
    for cavity in field_amplitudes:
        kets = {
            photons + (count,): value * amplitude
            for photons, value in kets.items()
            for count, amplitude in cavity.items()
            if amplitude != 0
        }
    amplitudes = {
        (level, photons): atom_value * value
        for level, atom_value in atom_amplitudes.items()
        if atom_value != 0
        for photons, value in kets.items()
    }
    largest = max((max(photons) for _, photons in amplitudes), default=0)
    return JointState(
        amplitudes=amplitudes,
        n_cavities=len(field_amplitudes),
        n_max=max(DEFAULT_N_MAX if n_max is None else n_max, largest),
    )


def apply_cavity_pass(
    state: JointState, cavity: int, duration: float, params: PhysicalParams
) -> JointState:
    """Let the atom interact with ``cavity`` for ``duration``.

    Amplitudes are grouped by the spectator cavities' photon numbers and by
    excitation manifold of (atom, target cavity); each group is multiplied by
    the manifold propagator.
    """
    if not 0 <= cavity < state.n_cavities:
        raise DomainError(f"cavity index {cavity} out of range for {state.n_cavities} cavities")
    if duration < 0:
        raise DomainError(f"pass duration must be nonnegative, got {duration}")

    groups: dict[tuple[PhotonTuple, int], dict[int, complex]] = {}
    for (level, photons), value in state.amplitudes.items():
        n, position = manifold_of(level, photons[cavity])
        spectators = photons[:cavity] + photons[cavity + 1 :]
        groups.setdefault((spectators, n), {})[position] = value

    evolved: dict[Ket, complex] = {}
    n_max = state.n_max
    for (spectators, n), components in groups.items():
        levels = manifold_levels(n)
        vector = np.zeros(len(levels), dtype=np.complex128)
        for position, value in components.items():
            vector[position] = value
        result = manifold_propagator(params, n, duration).apply(vector)
        for position, level in enumerate(levels):
            value = complex(result[position])
            if value == 0:
                continue
            count = photons_in_manifold(level, n)
            n_max = max(n_max, count)
            photons = spectators[:cavity] + (count,) + spectators[cavity:]
            evolved[(level, photons)] = value

    return JointState(amplitudes=evolved, n_cavities=state.n_cavities, n_max=n_max)


def branch_probabilities(state: JointState) -> dict[AtomLevel, float]:
    """Probability of detecting each atomic level."""
    probabilities = {level: 0.0 for level in AtomLevel}
    for (level, _), value in state.amplitudes.items():
        probabilities[level] += abs(value) ** 2
    return probabilities


def project_atom(state: JointState, level: AtomLevel) -> CollapsedState:
    """Ideal detection of the atom in ``level``; raises EmptyBranchError if improbable."""
    branch = state.branch(level)
    probability = sum(abs(value) ** 2 for value in branch.values())
    if probability < EMPTY_BRANCH_THRESHOLD:
        raise EmptyBranchError(level, probability)
    scale = 1.0 / math.sqrt(probability)
    return CollapsedState(
        level=level,
        field_amplitudes=MappingProxyType(
            {photons: value * scale for photons, value in branch.items()}
        ),
        probability=probability,
    )


def evolve(spec: ProtocolSpec) -> JointState:
    """Initial state followed by every pass of ``spec``, before detection."""
    state = make_initial_state(spec.initial_atom, spec.n_cavities, spec.n_max)
    for item in spec.passes:
        state = apply_cavity_pass(state, item.cavity, item.duration, spec.params)
    return state


def run_protocol(spec: ProtocolSpec) -> tuple[JointState, CollapsedState | None]:
    """Evolve ``spec`` and, if it detects, project the atom."""
    state = evolve(spec)
    if spec.detection is None:
        return state, None
    return state, project_atom(state, spec.detection)


def rydberg_params(convention: FrequencyConvention = FrequencyConvention.ANGULAR) -> PhysicalParams:
    """g₁ = g₂ = 17.5 per μs and δ = 30g: Rydberg atoms with principal number ≈ 90."""
    g = 17.5
    return PhysicalParams(g1=g, g2=g, delta=30.0 * g, convention=convention)


def epr_protocol(params: PhysicalParams, t1: float = 0.0, t2: float = 0.0) -> ProtocolSpec:
    """|e,0,0⟩ through cavities 1 and 2, heralded by detecting |g⟩."""
    return ProtocolSpec(
        params=params,
        n_cavities=2,
        passes=(CavityPass(0, t1), CavityPass(1, t2)),
        name="epr",
    )


def w_protocol(
    params: PhysicalParams, t1: float = 0.0, t2: float = 0.0, t3: float = 0.0
) -> ProtocolSpec:
    """|e,0,0,0⟩ through cavities 1, 2 and 3, heralded by detecting |g⟩."""
    return ProtocolSpec(
        params=params,
        n_cavities=3,
        passes=(CavityPass(0, t1), CavityPass(1, t2), CavityPass(2, t3)),
        name="w",
    )
