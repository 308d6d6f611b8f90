"""Closed-form evolution of the two-photon Jaynes-Cummings ladder.

The interaction couples |e,n⟩ ↔ |f,n+1⟩ ↔ |g,n+2⟩, so every excitation
manifold evolves on its own. Propagators act on column vectors ordered
(e, f, g); degenerate manifolds keep only the states with nonnegative photon
numbers: n = -1 is {|f,0⟩, |g,1⟩} and n = -2 is the dark state {|g,0⟩}.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from numpy.typing import NDArray

from two_photon_cqed.types import AtomLevel, DomainError, ManifoldIndex, PhysicalParams

ComplexMatrix = NDArray[np.complex128]

# photons carried by |level, n + offset⟩ inside manifold n
_PHOTON_OFFSET: dict[AtomLevel, int] = {AtomLevel.E: 0, AtomLevel.F: 1, AtomLevel.G: 2}
_FULL_LEVELS = (AtomLevel.E, AtomLevel.F, AtomLevel.G)


def manifold_levels(n: int) -> tuple[AtomLevel, ...]:
    """Atomic levels present in manifold ``n``, in propagator order."""
    if n >= 0:
        return _FULL_LEVELS
    if n == -1:
        return (AtomLevel.F, AtomLevel.G)
    if n == -2:
        return (AtomLevel.G,)
    raise DomainError(f"manifold index must be >= -2, got {n}")


def manifold_of(level: AtomLevel, photons: int) -> tuple[ManifoldIndex, int]:
    """Return the manifold holding |level, photons⟩ and its position in it."""
    if photons < 0:
        raise DomainError(f"photon number must be nonnegative, got {photons}")
    n = photons - _PHOTON_OFFSET[level]
    return ManifoldIndex(n), manifold_levels(n).index(level)


def photons_in_manifold(level: AtomLevel, n: int) -> int:
    return n + _PHOTON_OFFSET[level]


def manifold_couplings(params: PhysicalParams, n: int) -> tuple[float, float]:
    """Couplings g₁√(n+1) and g₂√(n+2) in radian frequency."""
    # √(n+1), √(n+2) clamped to zero for absent states
    a = params.g1_rad * math.sqrt(n + 1) if n + 1 > 0 else 0.0
    b = params.g2_rad * math.sqrt(n + 2) if n + 2 > 0 else 0.0
    return a, b


def alpha_n(params: PhysicalParams, n: int) -> float:
    """Effective coupling √(g₁²(n+1) + g₂²(n+2)) in radian frequency."""
    if n <= -2:
        raise DomainError(f"manifold {n} has no coupling")
    a, b = manifold_couplings(params, n)
    return math.hypot(a, b)


def lambda_n(params: PhysicalParams, n: int) -> float:
    """Rabi frequency √(δ²/4 + α_n²) of manifold ``n``."""
    return math.hypot(params.delta_rad / 2.0, alpha_n(params, n))


def gamma_n(params: PhysicalParams, n: int, t: float) -> complex:
    """The bracketed time factor shared by the |e⟩ and |g⟩ amplitudes.

    [Λ cos(Λt) + i(δ/2) sin(Λt) − Λ e^{iδt/2}] e^{−iδt/2}; vanishes at t = 0.
    """
    if t < 0:
        raise DomainError(f"time must be nonnegative, got {t}")
    lam = lambda_n(params, n)
    delta = params.delta_rad
    bracket = (
        lam * math.cos(lam * t)
        + 0.5j * delta * math.sin(lam * t)
        - lam * cmath.exp(0.5j * delta * t)
    )
    return bracket * cmath.exp(-0.5j * delta * t)


@dataclass(frozen=True, slots=True)
class ManifoldPropagator:
    """Unitary evolving one excitation manifold for ``duration``.

    ``entries`` is read-only; column j is the image of the j-th basis state of
    :func:`manifold_levels`.
    """

    n: ManifoldIndex
    duration: float
    params: PhysicalParams
    entries: ComplexMatrix

    @property
    def levels(self) -> tuple[AtomLevel, ...]:
        return manifold_levels(self.n)

    @property
    def dimension(self) -> int:
        return int(self.entries.shape[0])

    def element(self, out_level: AtomLevel, in_level: AtomLevel) -> complex:
        """Amplitude ⟨out_level| U |in_level⟩ within this manifold."""
        levels = self.levels
        return complex(self.entries[levels.index(out_level), levels.index(in_level)])

    def apply(self, vector: NDArray[np.complex128]) -> NDArray[np.complex128]:
        return self.entries @ vector

    def unitarity_residual(self) -> float:
        """max |U†U − I| over all entries."""
        product = self.entries.conj().T @ self.entries
        return float(np.max(np.abs(product - np.eye(self.dimension))))


def _full_matrix(params: PhysicalParams, n: int, t: float) -> ComplexMatrix:
    a, b = manifold_couplings(params, n)
    alpha_sq = a * a + b * b
    if alpha_sq == 0.0:
        # no coupling at all: every state is stationary in this frame
        return np.eye(3, dtype=np.complex128)

    delta = params.delta_rad
    lam = lambda_n(params, n)
    sin_t = math.sin(lam * t)
    cos_t = math.cos(lam * t)
    phase = cmath.exp(0.5j * delta * t)
    shared = gamma_n(params, n, t) / (lam * alpha_sq)

    return np.array(
        [
            [1.0 + a * a * shared, -1j * a / lam * sin_t / phase, a * b * shared],
            [
                -1j * a / lam * sin_t * phase,
                (cos_t - 0.5j * delta / lam * sin_t) * phase,
                -1j * b / lam * sin_t * phase,
            ],
            [a * b * shared, -1j * b / lam * sin_t / phase, 1.0 + b * b * shared],
        ],
        dtype=np.complex128,
    )


@lru_cache(maxsize=65536)
def manifold_propagator(params: PhysicalParams, n: int, t: float) -> ManifoldPropagator:
    """Closed-form propagator of manifold ``n`` over an interaction time ``t``.

    Results are cached; the returned matrix is immutable.
    """
    if t < 0:
        raise DomainError(f"time must be nonnegative, got {t}")
    dimension = len(manifold_levels(n))
    if dimension == 1:
        entries = np.eye(1, dtype=np.complex128)
    else:
        # n = -1 uses the same formulas with the |e⟩ row/column dropped (a = 0)
        entries = _full_matrix(params, n, t)[3 - dimension :, 3 - dimension :].copy()
    entries.flags.writeable = False
    return ManifoldPropagator(n=ManifoldIndex(n), duration=t, params=params, entries=entries)


def frame_phase(params: PhysicalParams, n: int, t: float) -> ComplexMatrix:
    """Diagonal phase e^{iδt} on the |f⟩ component relating the printed frame to a rotating one."""
    levels = manifold_levels(n)
    diagonal = [
        cmath.exp(1j * params.delta_rad * t) if level is AtomLevel.F else 1.0
        for level in levels
    ]
    return np.diag(np.array(diagonal, dtype=np.complex128))


def compose(first: ManifoldPropagator, second: ManifoldPropagator) -> ComplexMatrix:
    """Propagator for ``first`` followed by ``second`` within one cavity.

    The coupling phases e^{±iδt} make the evolution time-inhomogeneous, so the
    later segment is conjugated by the frame phase accumulated during the first:
    U(t₁+t₂) = R(t₁) U(t₂) R(t₁)† U(t₁). At δ = 0 this is the plain product.
    """
    if first.n != second.n or first.params != second.params:
        raise DomainError("propagators belong to different manifolds or parameters")
    shift = frame_phase(first.params, first.n, first.duration)
    return shift @ second.entries @ shift.conj().T @ first.entries
