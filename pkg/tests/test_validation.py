import numpy as np
import pytest

from two_photon_cqed.validation import (
    ValidationSizes,
    check_composition,
    check_excitation_bound,
    check_oracle_equivalence,
    check_resonance,
    check_unitarity,
    run_validation,
)

SMALL = ValidationSizes(propagators=200, oracle_sets=4, time_tuples=30, protocol_runs=20)


def test_small_validation_passes() -> None:
    report = run_validation(seed=3, sizes=SMALL)

    assert report.passed, report.render()
    assert [check.name for check in report.checks] == [
        "unitarity",
        "composition",
        "oracle_equivalence",
        "resonance",
        "branch_completeness",
        "excitation_bound",
        "structural_identity",
    ]
    assert report.render().endswith("all checks passed\n")


def test_perturbation_breaks_unitarity_and_composition() -> None:
    rng = np.random.default_rng(0)
    unitarity = check_unitarity(rng, 10, perturbation=1e-4)
    composition = check_composition(rng, 10, perturbation=1e-4)

    assert not unitarity.passed
    assert unitarity.max_residual >= 1e-4
    assert not composition.passed


def test_resonance_check_reports_both_values() -> None:
    result = check_resonance()
    assert result.passed
    assert "closed=0.888888888889" in result.detail


def test_oracle_check_reports_its_step_ratio() -> None:
    result = check_oracle_equivalence(np.random.default_rng(1), 2, step_ratio=0.05)
    assert result.samples == 2
    assert "step_ratio=0.05" in result.detail


def test_excitation_bound_is_exact() -> None:
    result = check_excitation_bound(np.random.default_rng(2), 10)
    assert result.max_residual == 0.0
    assert result.as_dict()["passed"] is True


def test_report_serializes() -> None:
    document = run_validation(seed=4, sizes=SMALL).as_dict()
    assert document["passed"] is True
    assert {"name", "max_residual", "tolerance", "samples", "seconds"} <= set(document["checks"][0])


@pytest.mark.slow
def test_full_size_validation_passes() -> None:
    assert run_validation().passed
