"""Figure-preset sweeps through the command line."""

from pathlib import Path

import pytest

from two_photon_cqed.cli import EXIT_OK, main


def _rows(path: Path) -> list[list[str]]:
    return [line.split(",") for line in path.read_text(encoding="utf-8").splitlines()[2:]]


def test_epr_t2_curves_have_two_branches(tmp_path: Path) -> None:
    out = tmp_path / "curves.csv"
    assert main(["sweep", "--figure", "epr-t2-curves", "--grid", "t2=0:10:21", "--out", str(out)]) == EXIT_OK

    rows = _rows(out)
    assert len(rows) == 42
    assert {row[0] for row in rows} == {"2", "5"}


def test_w_no_detection_curves(tmp_path: Path) -> None:
    out = tmp_path / "w.csv"
    assert main(["sweep", "--figure", "w-t3-no-detection", "--grid", "t3=0:40:9", "--out", str(out)]) == EXIT_OK

    rows = _rows(out)
    assert len(rows) == 27
    assert {(row[0], row[1]) for row in rows} == {("2", "2"), ("13", "13"), ("16", "16")}
    assert all(0.0 <= float(row[3]) <= 1.0 for row in rows)


@pytest.mark.slow
def test_no_detection_ceiling_is_near_eight_tenths(tmp_path: Path) -> None:
    out = tmp_path / "surface.csv"
    assert main(["sweep", "--figure", "epr-no-detection", "--out", str(out)]) == EXIT_OK

    rows = _rows(out)
    assert len(rows) == 201 * 201
    assert 0.75 <= max(float(row[2]) for row in rows) <= 0.85
