"""CSV and JSON rendering of sweep records and run reports.

Floats are written with 12 significant digits so repeated runs of the same
configuration produce byte-identical files.
"""

from __future__ import annotations

import csv
import io
import json
import math
import sys
from collections.abc import Iterable, Mapping, Sequence
from pathlib import Path
from typing import Any

from two_photon_cqed.optimizer import SweepRecord
from two_photon_cqed.types import Objective


def format_float(value: float) -> str:
    if math.isnan(value):
        return "nan"
    return f"{value:.12g}"


def _json_float(value: float) -> float | None:
    # JSON has no nan; an undefined value is written as null
    return None if math.isnan(value) else float(format_float(value))


def config_comment(config: Mapping[str, Any]) -> str:
    return "# config=" + json.dumps(config, sort_keys=True, separators=(",", ":"))


def render_sweep_csv(
    records: Iterable[SweepRecord],
    variables: Sequence[str],
    objective: Objective,
    config: Mapping[str, Any] | None = None,
) -> str:
    """Header ``t1,t2[,t3],fidelity,probability`` then one row per record.

    The fidelity column holds the objective's fidelity; the probability column
    is always the detection probability.
    """
    buffer = io.StringIO()
    if config is not None:
        buffer.write(config_comment(config) + "\n")
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow([*variables, "fidelity", "probability"])
    for record in records:
        writer.writerow(
            [
                *(format_float(value) for value in record.times),
                format_float(record.objective_value(objective)),
                format_float(record.probability),
            ]
        )
    return buffer.getvalue()


def record_to_dict(
    record: SweepRecord, variables: Sequence[str], objective: Objective
) -> dict[str, Any]:
    return {
        "times": {name: _json_float(value) for name, value in zip(variables, record.times)},
        "fidelity": _json_float(record.fidelity),
        "fidelity_no_detection": _json_float(record.fidelity_no_detection),
        "probability": _json_float(record.probability),
        "branch_empty": record.branch_empty,
        "objective": objective.value,
        "objective_value": _json_float(record.objective_value(objective)),
    }


def render_sweep_json(
    records: Iterable[SweepRecord],
    variables: Sequence[str],
    objective: Objective,
    config: Mapping[str, Any] | None = None,
) -> str:
    document = {
        "config": dict(config or {}),
        "variables": list(variables),
        "records": [record_to_dict(record, variables, objective) for record in records],
    }
    return render_json(document)


def render_json(document: Mapping[str, Any]) -> str:
    return json.dumps(document, sort_keys=True, indent=2, allow_nan=False) + "\n"


def write_output(text: str, path: Path | None) -> None:
    """Write ``text`` to ``path``, or to stdout when ``path`` is None."""
    if path is None:
        sys.stdout.write(text)
        return
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", encoding="utf-8", newline="\n") as handle:
        handle.write(text)


def render_text_report(report: Mapping[str, Any]) -> str:
    """``key: value`` lines; floats use the CSV precision."""
    lines = []
    for key, value in report.items():
        if isinstance(value, float):
            text = format_float(value)
        elif isinstance(value, Mapping):
            text = " ".join(
                f"{name}={format_float(item) if isinstance(item, float) else item}"
                for name, item in value.items()
            )
        else:
            text = str(value)
        lines.append(f"{key}: {text}")
    return "\n".join(lines) + "\n"


def json_safe(value: Any) -> Any:
    """Replace nan by None recursively and round floats to the CSV precision."""
    if isinstance(value, float):
        return _json_float(value)
    if isinstance(value, Mapping):
        return {str(key): json_safe(item) for key, item in value.items()}
    if isinstance(value, (list, tuple)):
        return [json_safe(item) for item in value]
    return value
