"""Printed closed forms of the EPR and W protocols.

Every expression here is written in terms of single-pass coefficients
C_{out}^{(in)}(t), the propagator element taking |in, vacuum-ish⟩ to |out⟩
within one cavity. They are independent of the sparse-state engine and serve as
its structural reference.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from two_photon_cqed.dynamics import manifold_propagator
from two_photon_cqed.protocol import Ket
from two_photon_cqed.types import AtomLevel, PhysicalParams

E, F, G = AtomLevel.E, AtomLevel.F, AtomLevel.G


@dataclass(frozen=True, slots=True)
class PassCoefficients:
    """The five single-pass coefficients reachable from |e,0⟩ or |f,0⟩."""

    e0_e0: complex
    f1_e0: complex
    g2_e0: complex
    f0_f0: complex
    g1_f0: complex

    @classmethod
    def at(cls, params: PhysicalParams, t: float) -> PassCoefficients:
        from_e = manifold_propagator(params, 0, t)
        from_f = manifold_propagator(params, -1, t)
        return cls(
            e0_e0=from_e.element(E, E),
            f1_e0=from_e.element(F, E),
            g2_e0=from_e.element(G, E),
            f0_f0=from_f.element(F, F),
            g1_f0=from_f.element(G, F),
        )


def epr_expanded_state(params: PhysicalParams, t1: float, t2: float) -> dict[Ket, complex]:
    """Two-pass joint state written out as coefficient products."""
    c1, c2 = PassCoefficients.at(params, t1), PassCoefficients.at(params, t2)
    return {
        (E, (0, 0)): c1.e0_e0 * c2.e0_e0,
        (F, (0, 1)): c1.e0_e0 * c2.f1_e0,
        (G, (0, 2)): c1.e0_e0 * c2.g2_e0,
        (F, (1, 0)): c1.f1_e0 * c2.f0_f0,
        (G, (1, 1)): c1.f1_e0 * c2.g1_f0,
        (G, (2, 0)): c1.g2_e0,
    }


def epr_success_probability(params: PhysicalParams, t1: float, t2: float) -> float:
    c1, c2 = PassCoefficients.at(params, t1), PassCoefficients.at(params, t2)
    return (
        abs(c1.e0_e0) ** 2 * abs(c2.g2_e0) ** 2
        + abs(c1.f1_e0) ** 2 * abs(c2.g1_f0) ** 2
        + abs(c1.g2_e0) ** 2
    )


def epr_fidelity(params: PhysicalParams, t1: float, t2: float) -> float:
    c1, c2 = PassCoefficients.at(params, t1), PassCoefficients.at(params, t2)
    probability = epr_success_probability(params, t1, t2)
    return abs(c1.e0_e0 * c2.g2_e0 + c1.g2_e0) ** 2 / (2.0 * probability)


def epr_fidelity_no_detection(params: PhysicalParams, t1: float, t2: float) -> float:
    c1, c2 = PassCoefficients.at(params, t1), PassCoefficients.at(params, t2)
    return 0.5 * abs(c1.e0_e0 * c2.g2_e0 + c1.g2_e0) ** 2


def w_expanded_state(
    params: PhysicalParams, t1: float, t2: float, t3: float
) -> dict[Ket, complex]:
    """Three-pass joint state written out as coefficient products."""
    c1, c2, c3 = (PassCoefficients.at(params, t) for t in (t1, t2, t3))
    return {
        (E, (0, 0, 0)): c1.e0_e0 * c2.e0_e0 * c3.e0_e0,
        (F, (0, 0, 1)): c1.e0_e0 * c2.e0_e0 * c3.f1_e0,
        (G, (0, 0, 2)): c1.e0_e0 * c2.e0_e0 * c3.g2_e0,
        (F, (0, 1, 0)): c1.e0_e0 * c2.f1_e0 * c3.f0_f0,
        (G, (0, 1, 1)): c1.e0_e0 * c2.f1_e0 * c3.g1_f0,
        (G, (0, 2, 0)): c1.e0_e0 * c2.g2_e0,
        (F, (1, 0, 0)): c1.f1_e0 * c2.f0_f0 * c3.f0_f0,
        (G, (1, 0, 1)): c1.f1_e0 * c2.f0_f0 * c3.g1_f0,
        (G, (1, 1, 0)): c1.f1_e0 * c2.g1_f0,
        (G, (2, 0, 0)): c1.g2_e0,
    }


def w_success_probability(params: PhysicalParams, t1: float, t2: float, t3: float) -> float:
    c1, c2, c3 = (PassCoefficients.at(params, t) for t in (t1, t2, t3))
    return (
        abs(c1.e0_e0) ** 2 * abs(c2.e0_e0) ** 2 * abs(c3.g2_e0) ** 2
        + abs(c1.e0_e0) ** 2 * abs(c2.f1_e0) ** 2 * abs(c3.g1_f0) ** 2
        + abs(c1.e0_e0) ** 2 * abs(c2.g2_e0) ** 2
        + abs(c1.f1_e0) ** 2 * abs(c2.f0_f0) ** 2 * abs(c3.g1_f0) ** 2
        + abs(c1.f1_e0) ** 2 * abs(c2.g1_f0) ** 2
        + abs(c1.g2_e0) ** 2
    )


def w_fidelity(params: PhysicalParams, t1: float, t2: float, t3: float) -> float:
    c1, c2, c3 = (PassCoefficients.at(params, t) for t in (t1, t2, t3))
    probability = w_success_probability(params, t1, t2, t3)
    amplitude = (
        c1.e0_e0 * c2.e0_e0 * c3.g2_e0
        + c1.e0_e0 * c2.g2_e0
        + math.sqrt(2.0) * c1.g2_e0
    )
    return abs(amplitude) ** 2 / (4.0 * probability)
