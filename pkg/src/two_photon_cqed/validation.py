"""Self-checks run by the ``validate`` command.

Each check draws reproducible random cases from a seeded generator, measures
the largest residual against its tolerance and reports pass or fail.
"""

from __future__ import annotations

import math
import time
from collections.abc import Callable
from dataclasses import dataclass, field
from typing import Any

import numpy as np

from two_photon_cqed import closed_forms
from two_photon_cqed.dynamics import (
    ComplexMatrix,
    compose,
    lambda_n,
    manifold_levels,
    manifold_propagator,
)
from two_photon_cqed.logging import get_logger
from two_photon_cqed.metrics import (
    fidelity_no_detection,
    fidelity_post_selected,
    target_epr,
    target_w_two_photon,
)
from two_photon_cqed.oracle import (
    PRECISE_STEP_RATIO,
    ManifoldAmplitudes,
    OracleCase,
    integrate_manifold_batch,
)
from two_photon_cqed.protocol import (
    EMPTY_BRANCH_THRESHOLD,
    branch_probabilities,
    epr_protocol,
    evolve,
    rydberg_params,
    w_protocol,
)
from two_photon_cqed.types import AtomLevel, PhysicalParams

logger = get_logger(__name__)

MANIFOLDS = (-1, 0, 1, 2, 5)
MAX_PHASE = 200.0
# excitations carried by the atom: |e⟩ holds two quanta, |f⟩ one
ATOM_EXCITATION = {AtomLevel.E: 2, AtomLevel.F: 1, AtomLevel.G: 0}
# post-selected fidelity is ill-conditioned for nearly empty branches
MIN_STRUCTURAL_PROBABILITY = 1e-8


@dataclass(frozen=True, slots=True)
class ValidationSizes:
    propagators: int = 10_000
    oracle_sets: int = 100
    time_tuples: int = 1_000
    protocol_runs: int = 500


@dataclass(frozen=True, slots=True)
class CheckResult:
    name: str
    passed: bool
    max_residual: float
    tolerance: float
    samples: int
    seconds: float
    detail: str = ""

    def as_dict(self) -> dict[str, Any]:
        return {
            "name": self.name,
            "passed": self.passed,
            "max_residual": self.max_residual,
            "tolerance": self.tolerance,
            "samples": self.samples,
            "seconds": round(self.seconds, 3),
            "detail": self.detail,
        }


@dataclass(frozen=True, slots=True)
class ValidationReport:
    checks: tuple[CheckResult, ...] = field(default=())

    @property
    def passed(self) -> bool:
        return all(check.passed for check in self.checks)

    def as_dict(self) -> dict[str, Any]:
        return {"passed": self.passed, "checks": [check.as_dict() for check in self.checks]}

    def render(self) -> str:
        lines = []
        for check in self.checks:
            status = "PASS" if check.passed else "FAIL"
            line = (
                f"{status} {check.name:<22} max_residual={check.max_residual:.3e} "
                f"tolerance={check.tolerance:.0e} samples={check.samples}"
            )
            if check.detail:
                line += f" ({check.detail})"
            lines.append(line)
        lines.append("all checks passed" if self.passed else "validation FAILED")
        return "\n".join(lines) + "\n"


def random_params(rng: np.random.Generator) -> PhysicalParams:
    """g₁, g₂ in [0.1, 50] and δ in [−50g₁, 50g₁], angular."""
    g1, g2 = rng.uniform(0.1, 50.0, size=2)
    delta = rng.uniform(-50.0, 50.0) * g1
    return PhysicalParams(g1=float(g1), g2=float(g2), delta=float(delta))


def _random_case(rng: np.random.Generator) -> tuple[PhysicalParams, int, float]:
    params = random_params(rng)
    n = int(rng.choice(MANIFOLDS))
    t = float(rng.uniform(0.0, MAX_PHASE / lambda_n(params, n)))
    return params, n, t


def _perturb(entries: ComplexMatrix, perturbation: float) -> ComplexMatrix:
    if perturbation == 0.0:
        return entries
    perturbed = entries.copy()
    perturbed[0, 0] += perturbation
    return perturbed


def _timed(
    name: str,
    tolerance: float,
    body: Callable[[], tuple[float, int, str]],
) -> CheckResult:
    started = time.perf_counter()
    residual, samples, detail = body()
    seconds = time.perf_counter() - started
    result = CheckResult(
        name=name,
        passed=bool(residual <= tolerance),
        max_residual=residual,
        tolerance=tolerance,
        samples=samples,
        seconds=seconds,
        detail=detail,
    )
    logger.info(
        "check_completed",
        check=name,
        passed=result.passed,
        max_residual=residual,
        seconds=round(seconds, 3),
    )
    return result


def check_unitarity(
    rng: np.random.Generator, count: int, perturbation: float = 0.0
) -> CheckResult:
    """max |U†U − I| and |U(0) − I| over random propagators."""

    def body() -> tuple[float, int, str]:
        worst = 0.0
        for _ in range(count):
            params, n, t = _random_case(rng)
            entries = _perturb(manifold_propagator(params, n, t).entries, perturbation)
            identity = np.eye(entries.shape[0])
            worst = max(worst, float(np.max(np.abs(entries.conj().T @ entries - identity))))
            at_zero = manifold_propagator(params, n, 0.0).entries
            worst = max(worst, float(np.max(np.abs(at_zero - identity))))
        return worst, count, ""

    return _timed("unitarity", 1e-10, body)


def check_composition(
    rng: np.random.Generator, count: int, perturbation: float = 0.0
) -> CheckResult:
    """Frame-corrected composition of two segments against one long segment."""

    def body() -> tuple[float, int, str]:
        worst = 0.0
        for _ in range(count):
            params, n, total = _random_case(rng)
            split = float(rng.uniform(0.0, total))
            first = manifold_propagator(params, n, split)
            second = manifold_propagator(params, n, total - split)
            whole = _perturb(manifold_propagator(params, n, total).entries, perturbation)
            worst = max(worst, float(np.max(np.abs(compose(first, second) - whole))))
        return worst, count, ""

    return _timed("composition", 1e-10, body)


def check_oracle_equivalence(
    rng: np.random.Generator, count: int, step_ratio: float = PRECISE_STEP_RATIO
) -> CheckResult:
    """Closed-form columns against RK4 integration, all cases in one batch."""

    def body() -> tuple[float, int, str]:
        draws = [_random_case(rng) for _ in range(count)]
        cases = [
            OracleCase(params=params, n=n, initial=ManifoldAmplitudes.basis(n, level), t_final=t)
            for params, n, t in draws
            for level in manifold_levels(n)
        ]
        results = iter(integrate_manifold_batch(cases, step_ratio))
        worst = 0.0
        for params, n, t in draws:
            closed = manifold_propagator(params, n, t).entries
            for column in range(closed.shape[1]):
                integrated = next(results).manifold_vector()
                worst = max(worst, float(np.max(np.abs(closed[:, column] - integrated))))
        return worst, count, f"step_ratio={step_ratio:g}"

    return _timed("oracle_equivalence", 1e-8, body)


def check_resonance() -> CheckResult:
    """δ = 0, g₁ = g₂ = g from |e,0⟩: |C_g|² = 8/9 once √3·g·t = π."""

    def body() -> tuple[float, int, str]:
        params = PhysicalParams(g1=1.0, g2=1.0, delta=0.0)
        t = math.pi / math.sqrt(3.0)
        closed = abs(manifold_propagator(params, 0, t).element(AtomLevel.G, AtomLevel.E)) ** 2
        (integrated,) = integrate_manifold_batch(
            [
                OracleCase(
                    params=params,
                    n=0,
                    initial=ManifoldAmplitudes.basis(0, AtomLevel.E),
                    t_final=t,
                )
            ]
        )
        oracle = abs(integrated.c_g) ** 2
        residual = max(abs(closed - 8.0 / 9.0), abs(oracle - 8.0 / 9.0))
        return residual, 2, f"closed={closed:.12f} oracle={oracle:.12f}"

    return _timed("resonance", 1e-8, body)


def check_branch_completeness(rng: np.random.Generator, count: int) -> CheckResult:
    """Detection probabilities of every run sum to one."""

    def body() -> tuple[float, int, str]:
        worst = 0.0
        for index in range(count):
            params = random_params(rng)
            times = rng.uniform(0.0, 40.0, size=3)
            spec = (
                epr_protocol(params, *times[:2])
                if index % 2 == 0
                else w_protocol(params, *times)
            )
            total = sum(branch_probabilities(evolve(spec)).values())
            worst = max(worst, abs(total - 1.0))
        return worst, count, ""

    return _timed("branch_completeness", 1e-10, body)


def check_excitation_bound(rng: np.random.Generator, count: int) -> CheckResult:
    """Excitations are conserved, so no cavity ever holds more than two photons."""

    def body() -> tuple[float, int, str]:
        violations = 0
        for index in range(count):
            params = random_params(rng)
            times = rng.uniform(0.0, 40.0, size=3)
            spec = (
                epr_protocol(params, *times[:2])
                if index % 2 == 0
                else w_protocol(params, *times)
            )
            for level, photons in evolve(spec).amplitudes:
                if max(photons) > 2 or ATOM_EXCITATION[level] + sum(photons) != 2:
                    violations += 1
        return float(violations), count, f"violations={violations}"

    return _timed("excitation_bound", 0.0, body)


def check_structural_identity(rng: np.random.Generator, count: int) -> CheckResult:
    """Overlap-based F and P against the written-out EPR and W expressions."""
    params = rydberg_params()
    epr_target, w_target = target_epr(), target_w_two_photon()

    def body() -> tuple[float, int, str]:
        worst = 0.0
        skipped = 0
        for _ in range(count):
            t1, t2, t3 = (float(value) for value in rng.uniform(0.0, 40.0, size=3))

            epr_state = evolve(epr_protocol(params, t1, t2))
            worst = max(
                worst,
                abs(
                    fidelity_no_detection(epr_state, epr_target)
                    - closed_forms.epr_fidelity_no_detection(params, t1, t2)
                ),
            )
            epr_probability = closed_forms.epr_success_probability(params, t1, t2)
            if epr_probability >= max(MIN_STRUCTURAL_PROBABILITY, EMPTY_BRANCH_THRESHOLD):
                fidelity, probability = fidelity_post_selected(epr_state, AtomLevel.G, epr_target)
                worst = max(
                    worst,
                    abs(probability - epr_probability),
                    abs(fidelity - closed_forms.epr_fidelity(params, t1, t2)),
                )
            else:
                skipped += 1

            w_state = evolve(w_protocol(params, t1, t2, t3))
            w_probability = closed_forms.w_success_probability(params, t1, t2, t3)
            if w_probability >= max(MIN_STRUCTURAL_PROBABILITY, EMPTY_BRANCH_THRESHOLD):
                fidelity, probability = fidelity_post_selected(w_state, AtomLevel.G, w_target)
                worst = max(
                    worst,
                    abs(probability - w_probability),
                    abs(fidelity - closed_forms.w_fidelity(params, t1, t2, t3)),
                )
            else:
                skipped += 1
        return worst, count, f"skipped={skipped}"

    return _timed("structural_identity", 1e-10, body)


def run_validation(
    seed: int = 0,
    sizes: ValidationSizes | None = None,
    perturbation: float = 0.0,
    step_ratio: float = PRECISE_STEP_RATIO,
) -> ValidationReport:
    """Run every check.

    ``perturbation`` is added to one entry of each propagator in the unitarity
    and composition checks; any nonzero value should make them fail.
    """
    sizes = sizes or ValidationSizes()
    rng = np.random.default_rng(seed)
    checks = (
        check_unitarity(rng, sizes.propagators, perturbation),
        check_composition(rng, sizes.propagators, perturbation),
        check_oracle_equivalence(rng, sizes.oracle_sets, step_ratio),
        check_resonance(),
        check_branch_completeness(rng, sizes.protocol_runs),
        check_excitation_bound(rng, sizes.protocol_runs),
        check_structural_identity(rng, sizes.time_tuples),
    )
    report = ValidationReport(checks=checks)
    logger.info("validation_completed", passed=report.passed, checks=len(checks))
    return report
