"""Target states and the fidelity / success-probability figures of merit."""

from __future__ import annotations

import cmath
import math
from collections.abc import Mapping
from dataclasses import dataclass, replace
from enum import Enum
from types import MappingProxyType

from two_photon_cqed.protocol import CollapsedState, JointState, project_atom
from two_photon_cqed.types import AtomLevel, DomainError, PhotonTuple

TARGET_NORM_TOLERANCE = 1e-12

# qubit label → photon number used when comparing W_ζ members with photonic states
QUBIT_TO_PHOTONS = {0: 0, 1: 2}


class Basis(Enum):
    PHOTON = "photon"
    QUBIT = "qubit"


@dataclass(frozen=True, slots=True)
class TargetState:
    """Normalized field state that a protocol aims to produce."""

    field_amplitudes: Mapping[PhotonTuple, complex]
    label: str
    basis: Basis = Basis.PHOTON

    def __post_init__(self) -> None:
        if not self.field_amplitudes:
            raise DomainError("target state has no amplitudes")
        lengths = {len(key) for key in self.field_amplitudes}
        if len(lengths) != 1:
            raise DomainError("target kets have inconsistent lengths")
        norm = math.sqrt(sum(abs(value) ** 2 for value in self.field_amplitudes.values()))
        if abs(norm - 1.0) > TARGET_NORM_TOLERANCE:
            raise DomainError(f"target {self.label!r} is not normalized (norm={norm})")
        object.__setattr__(
            self, "field_amplitudes", MappingProxyType(dict(self.field_amplitudes))
        )

    @property
    def n_modes(self) -> int:
        return len(next(iter(self.field_amplitudes)))

    def overlap(self, amplitudes: Mapping[PhotonTuple, complex]) -> complex:
        """⟨target|φ⟩ for a photon-basis field state φ."""
        photonic = self.in_photon_basis()
        return sum(
            (value.conjugate() * amplitudes.get(key, 0j)
             for key, value in photonic.field_amplitudes.items()),
            0j,
        )

    def in_photon_basis(self) -> TargetState:
        return self if self.basis is Basis.PHOTON else qubit_to_photon(self)


def target_epr() -> TargetState:
    """(|0,2⟩ + |2,0⟩)/√2."""
    amplitude = 1.0 / math.sqrt(2.0)
    return TargetState({(0, 2): amplitude, (2, 0): amplitude}, label="epr")


def target_w_two_photon() -> TargetState:
    """(|0,0,2⟩ + |0,2,0⟩ + √2|2,0,0⟩)/2."""
    return TargetState(
        {(0, 0, 2): 0.5, (0, 2, 0): 0.5, (2, 0, 0): math.sqrt(2.0) / 2.0},
        label="w",
    )


def target_w_zeta(zeta: float, gamma: float = 0.0, delta_phase: float = 0.0) -> TargetState:
    """Qubit-basis W-class member (|001⟩ + √ζ e^{iγ}|010⟩ + √(ζ+1) e^{iδ}|100⟩)/√(2+2ζ).

    ``gamma`` and ``delta_phase`` are phases, unrelated to the detuning.
    """
    if zeta < 0:
        raise DomainError(f"zeta must be nonnegative, got {zeta}")
    scale = 1.0 / math.sqrt(2.0 + 2.0 * zeta)
    amplitudes = {
        (0, 0, 1): scale + 0j,
        (0, 1, 0): scale * math.sqrt(zeta) * cmath.exp(1j * gamma),
        (1, 0, 0): scale * math.sqrt(zeta + 1.0) * cmath.exp(1j * delta_phase),
    }
    return TargetState(
        {key: value for key, value in amplitudes.items() if value != 0},
        label=f"w_zeta({zeta:g})",
        basis=Basis.QUBIT,
    )


def qubit_to_photon(target: TargetState) -> TargetState:
    """Encode qubit labels as photon numbers: 0 → |0⟩, 1 → |2⟩."""
    if target.basis is Basis.PHOTON:
        return target
    return replace(
        target,
        field_amplitudes={
            tuple(QUBIT_TO_PHOTONS[bit] for bit in key): value
            for key, value in target.field_amplitudes.items()
        },
        basis=Basis.PHOTON,
    )


def _check_modes(state: JointState, target: TargetState) -> None:
    if target.n_modes != state.n_cavities:
        raise DomainError(
            f"target {target.label!r} has {target.n_modes} modes, state has {state.n_cavities} cavities"
        )


def _clamp(value: float) -> float:
    return min(1.0, max(0.0, value))


def collapsed_fidelity(collapsed: CollapsedState, target: TargetState) -> float:
    """|⟨target|collapsed⟩|²."""
    return _clamp(abs(target.overlap(collapsed.field_amplitudes)) ** 2)


def fidelity_post_selected(
    state: JointState, detect: AtomLevel, target: TargetState
) -> tuple[float, float]:
    """(fidelity, probability) of the field state heralded by detecting ``detect``.

    Raises EmptyBranchError when the outcome has no weight.
    """
    _check_modes(state, target)
    collapsed = project_atom(state, detect)
    return collapsed_fidelity(collapsed, target), _clamp(collapsed.probability)


def branch_overlaps(state: JointState, target: TargetState) -> dict[AtomLevel, float]:
    """|⟨target|φ_level⟩|² for each unnormalized atomic branch φ_level."""
    _check_modes(state, target)
    return {level: abs(target.overlap(state.branch(level))) ** 2 for level in AtomLevel}


def fidelity_no_detection(state: JointState, target: TargetState) -> float:
    """⟨target| Tr_atom ρ |target⟩: fidelity of the field when the atom is not measured."""
    return _clamp(sum(branch_overlaps(state, target).values()))
