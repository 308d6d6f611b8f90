import cmath
import math

import numpy as np
import pytest

from two_photon_cqed.metrics import (
    Basis,
    TargetState,
    branch_overlaps,
    fidelity_no_detection,
    fidelity_post_selected,
    qubit_to_photon,
    target_epr,
    target_w_two_photon,
    target_w_zeta,
)
from two_photon_cqed.protocol import JointState, branch_probabilities, epr_protocol, evolve, w_protocol
from two_photon_cqed.types import AtomLevel, DomainError, EmptyBranchError, PhysicalParams

E, F, G = AtomLevel.E, AtomLevel.F, AtomLevel.G
ROOT_HALF = 1 / math.sqrt(2)


class TestTargets:
    def test_epr_amplitudes(self) -> None:
        target = target_epr()
        assert dict(target.field_amplitudes) == {(0, 2): ROOT_HALF, (2, 0): ROOT_HALF}
        assert target.n_modes == 2

    def test_w_two_photon_amplitudes(self) -> None:
        amplitudes = target_w_two_photon().field_amplitudes
        assert amplitudes[(0, 0, 2)] == 0.5
        assert amplitudes[(0, 2, 0)] == 0.5
        assert amplitudes[(2, 0, 0)] == pytest.approx(math.sqrt(2) / 2)

    def test_w_zeta_one_encodes_the_two_photon_w_state(self) -> None:
        encoded = qubit_to_photon(target_w_zeta(1.0))
        assert encoded.basis is Basis.PHOTON
        for key, value in target_w_two_photon().field_amplitudes.items():
            assert encoded.field_amplitudes[key] == pytest.approx(value)

    def test_w_zeta_zero_drops_the_vanishing_term(self) -> None:
        target = target_w_zeta(0.0)
        assert set(target.field_amplitudes) == {(0, 0, 1), (1, 0, 0)}
        assert target.basis is Basis.QUBIT

    def test_w_zeta_phases(self) -> None:
        target = target_w_zeta(2.0, gamma=math.pi / 2, delta_phase=math.pi)
        assert target.field_amplitudes[(0, 1, 0)] == pytest.approx(1j * math.sqrt(2 / 6))
        assert target.field_amplitudes[(1, 0, 0)] == pytest.approx(-math.sqrt(3 / 6))

    def test_negative_zeta_rejected(self) -> None:
        with pytest.raises(DomainError):
            target_w_zeta(-0.1)

    def test_unnormalized_target_rejected(self) -> None:
        with pytest.raises(DomainError, match="normalized"):
            TargetState({(0, 2): 1.0, (2, 0): 1.0}, label="bad")


class TestFidelities:
    def test_exact_target_in_detected_branch(self) -> None:
        state = JointState(
            amplitudes={(G, (0, 2)): 0.5, (G, (2, 0)): 0.5, (E, (0, 0)): ROOT_HALF},
            n_cavities=2,
        )
        fidelity, probability = fidelity_post_selected(state, G, target_epr())
        assert fidelity == pytest.approx(1.0)
        assert probability == pytest.approx(0.5)

    def test_no_detection_sums_branch_overlaps(self) -> None:
        state = JointState(
            amplitudes={(G, (0, 2)): 0.5, (G, (2, 0)): 0.5, (E, (0, 0)): ROOT_HALF},
            n_cavities=2,
        )
        overlaps = branch_overlaps(state, target_epr())
        assert overlaps[G] == pytest.approx(0.5)
        assert overlaps[E] == 0.0
        assert fidelity_no_detection(state, target_epr()) == pytest.approx(0.5)

    def test_empty_branch_signals(self) -> None:
        state = JointState(amplitudes={(E, (0, 0)): 1.0}, n_cavities=2)
        with pytest.raises(EmptyBranchError):
            fidelity_post_selected(state, G, target_epr())

    def test_mode_mismatch_rejected(self, params: PhysicalParams) -> None:
        state = evolve(epr_protocol(params, 1.0, 1.0))
        with pytest.raises(DomainError, match="modes"):
            fidelity_no_detection(state, target_w_two_photon())

    def test_no_detection_never_exceeds_detected_weighted(
        self, params: PhysicalParams, rng: np.random.Generator
    ) -> None:
        for _ in range(20):
            t1, t2 = (float(value) for value in rng.uniform(0, 10, size=2))
            state = evolve(epr_protocol(params, t1, t2))
            fidelity, probability = fidelity_post_selected(state, G, target_epr())
            unheralded = fidelity_no_detection(state, target_epr())
            # only the |g⟩ branch overlaps a two-photon target
            assert unheralded == pytest.approx(fidelity * probability, abs=1e-12)
            assert 0.0 <= unheralded <= 1.0


class TestInvariants:
    def test_w_zeta_is_normalized_for_random_draws(self, rng: np.random.Generator) -> None:
        for _ in range(1000):
            zeta = float(rng.uniform(0.0, 20.0))
            gamma, delta_phase = (float(value) for value in rng.uniform(0.0, 2 * math.pi, size=2))
            target = target_w_zeta(zeta, gamma, delta_phase)
            for encoded in (target, qubit_to_photon(target)):
                norm = sum(abs(value) ** 2 for value in encoded.field_amplitudes.values())
                assert norm == pytest.approx(1.0, abs=1e-12)

    def test_global_phase_changes_no_metric(
        self, params: PhysicalParams, rng: np.random.Generator
    ) -> None:
        for _ in range(10):
            t1, t2, t3 = (float(value) for value in rng.uniform(0, 40, size=3))
            phase = cmath.exp(1j * float(rng.uniform(0.0, 2 * math.pi)))
            for state, target in (
                (evolve(epr_protocol(params, t1, t2)), target_epr()),
                (evolve(w_protocol(params, t1, t2, t3)), target_w_two_photon()),
            ):
                rotated = state.with_phase(phase)
                assert fidelity_no_detection(rotated, target) == pytest.approx(
                    fidelity_no_detection(state, target), abs=1e-12
                )
                for level, value in branch_probabilities(rotated).items():
                    assert value == pytest.approx(branch_probabilities(state)[level], abs=1e-12)
                if branch_probabilities(state)[G] > 1e-8:
                    fidelity, probability = fidelity_post_selected(rotated, G, target)
                    expected = fidelity_post_selected(state, G, target)
                    assert fidelity == pytest.approx(expected[0], abs=1e-10)
                    assert probability == pytest.approx(expected[1], abs=1e-12)
