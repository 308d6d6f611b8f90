import csv
import io
import json
import math
from pathlib import Path

import pytest

from two_photon_cqed.optimizer import SweepRecord
from two_photon_cqed.serialization import (
    config_comment,
    format_float,
    json_safe,
    record_to_dict,
    render_sweep_csv,
    render_sweep_json,
    render_text_report,
    write_output,
)
from two_photon_cqed.types import Objective

RECORDS = [
    SweepRecord((0.0, 0.0), math.nan, 0.0, 0.0, branch_empty=True),
    SweepRecord((3.0, 3.0), 0.968912345678901, 0.3971, 0.3847),
]


def test_format_float_uses_twelve_significant_digits() -> None:
    assert format_float(1 / 3) == "0.333333333333"
    assert format_float(3.0) == "3"
    assert format_float(1e-20) == "1e-20"
    assert format_float(math.nan) == "nan"


def test_sweep_csv_layout() -> None:
    text = render_sweep_csv(RECORDS, ("t1", "t2"), Objective.FIDELITY, {"preset": "epr"})
    lines = text.split("\n")
    assert lines[0] == '# config={"preset":"epr"}'
    assert lines[1] == "t1,t2,fidelity,probability"
    assert lines[2] == "0,0,nan,0"
    assert lines[3] == "3,3,0.968912345679,0.3971"
    assert lines[4] == ""
    assert "\r" not in text


def test_sweep_csv_reads_back_with_csv_module() -> None:
    text = render_sweep_csv(RECORDS, ("t1", "t2"), Objective.FIDELITY, {"preset": "epr"})
    body = io.StringIO(text.split("\n", 1)[1])
    rows = list(csv.DictReader(body))
    assert [row["fidelity"] for row in rows] == ["nan", "0.968912345679"]
    assert float(rows[1]["probability"]) == 0.3971


def test_no_detection_csv_uses_unheralded_fidelity() -> None:
    text = render_sweep_csv(RECORDS[1:], ("t1", "t2"), Objective.FIDELITY_NO_DETECTION)
    assert text.splitlines() == ["t1,t2,fidelity,probability", "3,3,0.3847,0.3971"]


def test_config_comment_is_key_sorted() -> None:
    assert config_comment({"b": 1, "a": [2]}) == '# config={"a":[2],"b":1}'


def test_sweep_json_replaces_nan_with_null() -> None:
    document = json.loads(render_sweep_json(RECORDS, ("t1", "t2"), Objective.FIDELITY, {"preset": "epr"}))
    first = document["records"][0]
    assert first["fidelity"] is None
    assert first["branch_empty"] is True
    assert first["times"] == {"t1": 0.0, "t2": 0.0}
    assert document["variables"] == ["t1", "t2"]


def test_record_to_dict_reports_objective() -> None:
    record = record_to_dict(RECORDS[1], ("t1", "t2"), Objective.FIDELITY_NO_DETECTION)
    assert record["objective"] == "fidelity_no_detection"
    assert record["objective_value"] == 0.3847


def test_json_safe_is_recursive() -> None:
    assert json_safe({"a": [math.nan, 1.0], "b": {"c": math.nan}}) == {"a": [None, 1.0], "b": {"c": None}}


def test_text_report() -> None:
    text = render_text_report({"protocol": "epr", "fidelity": 2 / 3, "times_us": {"t1": 3.0, "t2": 3.0}})
    assert text == "protocol: epr\nfidelity: 0.666666666667\ntimes_us: t1=3 t2=3\n"


def test_write_output_creates_parent_directories(tmp_path: Path) -> None:
    path = tmp_path / "nested" / "out.csv"
    write_output("a,b\n1,2\n", path)
    assert path.read_bytes() == b"a,b\n1,2\n"


def test_write_output_defaults_to_stdout(capsys: pytest.CaptureFixture[str]) -> None:
    write_output("hello\n", None)
    assert capsys.readouterr().out == "hello\n"
