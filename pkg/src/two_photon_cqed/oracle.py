"""Brute-force integration of the coupled amplitude equations.

Integrates the interaction-picture equations with their explicit e^{±iδt}
phases using classical fixed-step RK4. This path shares no algebra with
:mod:`two_photon_cqed.dynamics` and serves as its independent check.
"""

from __future__ import annotations

import math
from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray

from two_photon_cqed.dynamics import lambda_n, manifold_couplings, manifold_levels
from two_photon_cqed.types import AtomLevel, DomainError, ManifoldIndex, PhysicalParams

DEFAULT_STEP_RATIO = 0.05
PRECISE_STEP_RATIO = 0.002
NORMALIZATION_TOLERANCE = 1e-12

ComplexArray = NDArray[np.complex128]
FloatArray = NDArray[np.float64]


@dataclass(frozen=True, slots=True)
class ManifoldAmplitudes:
    """Amplitudes of |e,n⟩, |f,n+1⟩, |g,n+2⟩ at time ``t``.

    Entries absent from a degenerate manifold are None.
    """

    n: ManifoldIndex
    t: float
    c_e: complex | None
    c_f: complex | None
    c_g: complex

    @classmethod
    def from_vector(
        cls, n: int, t: float, vector: Sequence[complex] | ComplexArray
    ) -> ManifoldAmplitudes:
        """Build from a full (e, f, g) vector, dropping absent components."""
        levels = manifold_levels(n)
        return cls(
            n=ManifoldIndex(n),
            t=t,
            c_e=complex(vector[0]) if AtomLevel.E in levels else None,
            c_f=complex(vector[1]) if AtomLevel.F in levels else None,
            c_g=complex(vector[2]),
        )

    @classmethod
    def basis(cls, n: int, level: AtomLevel, t: float = 0.0) -> ManifoldAmplitudes:
        levels = manifold_levels(n)
        if level not in levels:
            raise DomainError(f"level {level.value} is absent from manifold {n}")
        vector = [1.0 + 0j if item is level else 0j for item in (AtomLevel.E, AtomLevel.F, AtomLevel.G)]
        return cls.from_vector(n, t, vector)

    def as_vector(self) -> ComplexArray:
        """Full (e, f, g) vector with zeros for absent components."""
        return np.array(
            [self.c_e or 0j, self.c_f or 0j, self.c_g], dtype=np.complex128
        )

    def manifold_vector(self) -> ComplexArray:
        """Vector restricted to the states present in the manifold."""
        offset = 3 - len(manifold_levels(self.n))
        return self.as_vector()[offset:]

    def norm(self) -> float:
        return float(np.linalg.norm(self.as_vector()))

    def normalized(self) -> ManifoldAmplitudes:
        return ManifoldAmplitudes.from_vector(self.n, self.t, self.as_vector() / self.norm())


@dataclass(frozen=True, slots=True)
class OracleCase:
    """One initial-value problem for the batched integrator."""

    params: PhysicalParams
    n: int
    initial: ManifoldAmplitudes
    t_final: float


def default_max_step(params: PhysicalParams, n: int, ratio: float = DEFAULT_STEP_RATIO) -> float:
    """Step satisfying ``max_step · Λ_n <= ratio``; unbounded for the dark state."""
    if n <= -2:
        return math.inf
    lam = lambda_n(params, n)
    return ratio / lam if lam > 0 else math.inf


def _derivative(
    t: FloatArray, y: ComplexArray, a: FloatArray, b: FloatArray, delta: FloatArray
) -> ComplexArray:
    forward = np.exp(1j * delta * t)
    backward = forward.conj()
    dy = np.empty_like(y)
    dy[:, 0] = -1j * a * y[:, 1] * backward
    dy[:, 1] = -1j * (a * y[:, 0] + b * y[:, 2]) * forward
    dy[:, 2] = -1j * b * y[:, 1] * backward
    return dy


def _rk4_step(
    t: FloatArray,
    y: ComplexArray,
    h: FloatArray,
    a: FloatArray,
    b: FloatArray,
    delta: FloatArray,
) -> ComplexArray:
    half = (0.5 * h)[:, None]
    k1 = _derivative(t, y, a, b, delta)
    k2 = _derivative(t + 0.5 * h, y + half * k1, a, b, delta)
    k3 = _derivative(t + 0.5 * h, y + half * k2, a, b, delta)
    k4 = _derivative(t + h, y + h[:, None] * k3, a, b, delta)
    return y + (h / 6.0)[:, None] * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


def _check_initial(initial: ManifoldAmplitudes, n: int) -> ComplexArray:
    if initial.n != n:
        raise DomainError(f"amplitudes belong to manifold {initial.n}, not {n}")
    manifold_levels(n)
    deviation = abs(initial.norm() - 1.0)
    if deviation > NORMALIZATION_TOLERANCE:
        raise DomainError(f"initial amplitudes are not normalized (|norm - 1| = {deviation:.3e})")
    return initial.as_vector()


def _coefficients(params: PhysicalParams, n: int) -> tuple[float, float, float]:
    a, b = manifold_couplings(params, n)
    return a, b, params.delta_rad


def integrate_manifold(
    params: PhysicalParams,
    n: int,
    initial: ManifoldAmplitudes,
    t_final: float,
    max_step: float,
) -> ManifoldAmplitudes:
    """Integrate from ``initial.t`` to ``t_final`` with fixed RK4 steps.

    Steps of exactly ``max_step`` are taken; the last one is shortened to land
    on ``t_final``. Integrating backwards (``t_final < initial.t``) is allowed.
    """
    if not max_step > 0:
        raise DomainError(f"max_step must be positive, got {max_step}")
    if not math.isfinite(max_step) and n > -2 and lambda_n(params, n) > 0:
        raise DomainError(f"max_step must be finite for coupled manifold {n}")
    y = _check_initial(initial, n)[None, :]
    a, b, delta = (np.array([value]) for value in _coefficients(params, n))

    span = t_final - initial.t
    direction = 1.0 if span >= 0 else -1.0
    full_steps = int(abs(span) // max_step) if math.isfinite(max_step) else 0
    step = np.array([direction * max_step])
    t = initial.t
    for k in range(full_steps):
        y = _rk4_step(np.array([t]), y, step, a, b, delta)
        t = initial.t + direction * (k + 1) * max_step
    remainder = t_final - t
    if remainder != 0.0:
        y = _rk4_step(np.array([t]), y, np.array([remainder]), a, b, delta)
    return ManifoldAmplitudes.from_vector(n, t_final, y[0])


def integrate_manifold_batch(
    cases: Sequence[OracleCase],
    step_ratio: float = PRECISE_STEP_RATIO,
) -> list[ManifoldAmplitudes]:
    """Integrate many independent problems in lockstep.

    Every case advances from its own ``initial.t`` in N equal steps, with N
    chosen so each case's step obeys ``h · Λ_n <= step_ratio``.
    """
    if not cases:
        return []
    if not step_ratio > 0:
        raise DomainError(f"step_ratio must be positive, got {step_ratio}")

    y = np.stack([_check_initial(case.initial, case.n) for case in cases])
    coefficients = np.array([_coefficients(case.params, case.n) for case in cases])
    a, b, delta = coefficients[:, 0], coefficients[:, 1], coefficients[:, 2]
    start = np.array([case.initial.t for case in cases], dtype=np.float64)
    span = np.array([case.t_final for case in cases], dtype=np.float64) - start

    steps = 1
    for case, width in zip(cases, span):
        max_step = default_max_step(case.params, case.n, step_ratio)
        if math.isfinite(max_step):
            steps = max(steps, math.ceil(abs(width) / max_step))
    h = span / steps

    for k in range(steps):
        y = _rk4_step(start + k * h, y, h, a, b, delta)

    return [
        ManifoldAmplitudes.from_vector(case.n, case.t_final, row)
        for case, row in zip(cases, y)
    ]


def oracle_matrix(
    params: PhysicalParams, n: int, t: float, step_ratio: float = PRECISE_STEP_RATIO
) -> ComplexArray:
    """Integrated propagator: column j is the evolved j-th basis state of manifold ``n``."""
    levels = manifold_levels(n)
    cases = [
        OracleCase(params=params, n=n, initial=ManifoldAmplitudes.basis(n, level), t_final=t)
        for level in levels
    ]
    columns = [result.manifold_vector() for result in integrate_manifold_batch(cases, step_ratio)]
    return np.stack(columns, axis=1)
