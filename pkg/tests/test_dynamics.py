import math

import numpy as np
import pytest

from two_photon_cqed.dynamics import (
    alpha_n,
    compose,
    frame_phase,
    gamma_n,
    lambda_n,
    manifold_levels,
    manifold_of,
    manifold_propagator,
    photons_in_manifold,
)
from two_photon_cqed.oracle import oracle_matrix
from two_photon_cqed.types import AtomLevel, DomainError, PhysicalParams

E, F, G = AtomLevel.E, AtomLevel.F, AtomLevel.G


class TestManifolds:
    def test_levels_per_manifold(self) -> None:
        assert manifold_levels(4) == (E, F, G)
        assert manifold_levels(-1) == (F, G)
        assert manifold_levels(-2) == (G,)
        with pytest.raises(DomainError):
            manifold_levels(-3)

    @pytest.mark.parametrize(
        "level,photons,expected",
        [(E, 0, (0, 0)), (F, 1, (0, 1)), (G, 2, (0, 2)), (F, 0, (-1, 0)), (G, 1, (-1, 1)), (G, 0, (-2, 0))],
    )
    def test_manifold_of(self, level: AtomLevel, photons: int, expected: tuple[int, int]) -> None:
        assert manifold_of(level, photons) == expected
        n, _ = expected
        assert photons_in_manifold(level, n) == photons


class TestFrequencies:
    def test_alpha_examples(self) -> None:
        g = PhysicalParams(g1=2.0, g2=2.0, delta=0.0)
        assert alpha_n(g, 0) == pytest.approx(math.sqrt(3) * 2.0)
        assert alpha_n(g, -1) == pytest.approx(2.0)
        assert alpha_n(PhysicalParams(g1=1.0, g2=2.0, delta=0.0), 3) == pytest.approx(math.sqrt(24))

    def test_alpha_rejects_dark_manifold(self) -> None:
        with pytest.raises(DomainError):
            alpha_n(PhysicalParams(1.0, 1.0, 0.0), -2)

    def test_lambda_examples(self) -> None:
        resonant = PhysicalParams(g1=1.3, g2=0.7, delta=0.0)
        assert lambda_n(resonant, 2) == pytest.approx(alpha_n(resonant, 2))
        detuned = PhysicalParams(g1=1.0, g2=1.0, delta=30.0)
        assert lambda_n(detuned, 0) == pytest.approx(math.sqrt(225 + 3))
        assert lambda_n(PhysicalParams(g1=0.0, g2=0.0, delta=2.0), 0) == pytest.approx(1.0)

    def test_lambda_bounds(self, rng: np.random.Generator) -> None:
        for _ in range(50):
            g1, g2 = rng.uniform(0, 5, size=2)
            params = PhysicalParams(float(g1), float(g2), float(rng.uniform(-20, 20)))
            n = int(rng.integers(-1, 6))
            lam = lambda_n(params, n)
            assert lam >= abs(params.delta) / 2 - 1e-12
            assert lam >= alpha_n(params, n) - 1e-12

    def test_gamma_vanishes_at_zero(self, params: PhysicalParams) -> None:
        assert gamma_n(params, 0, 0.0) == 0

    def test_gamma_resonant_form(self) -> None:
        params = PhysicalParams(g1=1.0, g2=0.5, delta=0.0)
        alpha = alpha_n(params, 1)
        for t in (0.1, 1.0, 7.3):
            assert gamma_n(params, 1, t) == pytest.approx(alpha * (math.cos(alpha * t) - 1.0))

    def test_gamma_rejects_negative_time(self, params: PhysicalParams) -> None:
        with pytest.raises(DomainError):
            gamma_n(params, 0, -1.0)


class TestManifoldPropagator:
    @pytest.mark.parametrize("n,dimension", [(-2, 1), (-1, 2), (0, 3), (3, 3)])
    def test_identity_at_zero_time(self, params: PhysicalParams, n: int, dimension: int) -> None:
        propagator = manifold_propagator(params, n, 0.0)
        assert propagator.dimension == dimension
        np.testing.assert_allclose(propagator.entries, np.eye(dimension), atol=1e-15)

    def test_unitarity_on_random_cases(self, rng: np.random.Generator) -> None:
        for _ in range(200):
            g1, g2 = rng.uniform(0.1, 50, size=2)
            params = PhysicalParams(float(g1), float(g2), float(rng.uniform(-50, 50) * g1))
            n = int(rng.choice([-1, 0, 1, 2, 5]))
            t = float(rng.uniform(0, 200 / lambda_n(params, n)))
            propagator = manifold_propagator(params, n, t)
            assert propagator.unitarity_residual() <= 1e-10
            np.testing.assert_allclose(
                np.linalg.norm(propagator.entries, axis=0), 1.0, atol=1e-12
            )

    def test_entries_are_read_only(self, params: PhysicalParams) -> None:
        propagator = manifold_propagator(params, 0, 1.0)
        with pytest.raises(ValueError):
            propagator.entries[0, 0] = 0.0

    def test_negative_time_rejected(self, params: PhysicalParams) -> None:
        with pytest.raises(DomainError):
            manifold_propagator(params, 0, -0.5)

    def test_resonant_two_photon_transfer(self, resonant: PhysicalParams) -> None:
        t = math.pi / math.sqrt(3.0)
        element = manifold_propagator(resonant, 0, t).element(G, E)
        assert abs(element) ** 2 == pytest.approx(8 / 9, abs=1e-12)

    def test_uncoupled_manifold_is_stationary(self) -> None:
        params = PhysicalParams(g1=0.0, g2=0.0, delta=3.0)
        np.testing.assert_array_equal(manifold_propagator(params, 1, 2.0).entries, np.eye(3))

    @pytest.mark.parametrize("n", [-1, 0, 2])
    def test_matches_integrated_amplitude_equations(self, n: int) -> None:
        params = PhysicalParams(g1=1.2, g2=0.8, delta=-2.5)
        t = 3.0
        np.testing.assert_allclose(
            manifold_propagator(params, n, t).entries, oracle_matrix(params, n, t), atol=1e-9
        )


class TestComposition:
    def test_frame_corrected_composition(self, rng: np.random.Generator) -> None:
        params = PhysicalParams(g1=1.0, g2=1.4, delta=6.0)
        for n in (-1, 0, 1):
            t1, t2 = (float(value) for value in rng.uniform(0, 3, size=2))
            composed = compose(manifold_propagator(params, n, t1), manifold_propagator(params, n, t2))
            np.testing.assert_allclose(
                composed, manifold_propagator(params, n, t1 + t2).entries, atol=1e-10
            )

    def test_plain_product_at_resonance(self, resonant: PhysicalParams) -> None:
        first = manifold_propagator(resonant, 0, 0.4)
        second = manifold_propagator(resonant, 0, 1.1)
        np.testing.assert_allclose(
            second.entries @ first.entries,
            manifold_propagator(resonant, 0, 1.5).entries,
            atol=1e-12,
        )

    def test_mismatched_manifolds_rejected(self, params: PhysicalParams) -> None:
        with pytest.raises(DomainError):
            compose(manifold_propagator(params, 0, 1.0), manifold_propagator(params, 1, 1.0))

    def test_frame_phase_acts_on_f_only(self) -> None:
        params = PhysicalParams(g1=1.0, g2=1.0, delta=2.0)
        phase = frame_phase(params, -1, 0.5)
        np.testing.assert_allclose(np.diag(phase), [np.exp(1j), 1.0])
