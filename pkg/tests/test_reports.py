import json

import numpy as np
import pytest

from config.enums import GraphFamily
from config.errors import DomainError
from reports.models import DemoReportModel, SpectrumReportModel, validate_report
from reports.writer import (
    EXPERIMENT_COLUMNS,
    canonical,
    canonical_float,
    demo_table,
    experiment_table,
    spectrum_table,
    to_csv,
    to_json,
    write_csv,
    write_json,
)


SPECTRUM = {
    "graph": "circle:1",
    "entries": [{"value": 0.34, "multiplicity": 1, "certainty": "certain", "error": 0.05,
                 "representatives": [], "classes": [[1]]}],
    "covering_spectrum": [[0.51, 1]],
    "eps_min": 0.05,
    "eps_max": 0.45,
    "eta": 0.04,
    "resolution": 0.01,
    "unresolved": [],
    "certain": True,
}

ROW = {"i": 2, "target": "eps-cover@0.35", "scale": 1 / 3, "gh_lower": 0.125, "gh_upper": 0.25,
       "map_distortion": None, "deck_rank": 0, "deck_torsion": [2, 6], "error": 0.04}


# ----------------------------------------------------------------------
# Canonical values
# ----------------------------------------------------------------------

def test_canonical_float_rounds_and_drops_negative_zero():
    assert canonical_float(-0.0) == 0.0
    assert str(canonical_float(-0.0)) == "0.0"
    assert canonical_float(1 / 3) == 0.333333333333
    assert canonical_float(0.1 + 0.2) == 0.3


def test_canonical_unwraps_numpy_and_enums():
    data = canonical({"a": np.float64(2.5), "b": np.int64(3), "c": np.bool_(True),
                      "d": GraphFamily.TORUS, "e": (1, 2), 7: None})
    assert data == {"a": 2.5, "b": 3, "c": True, "d": "torus", "e": [1, 2], "7": None}
    assert type(data["b"]) is int
    assert type(data["c"]) is bool


def test_json_is_sorted_and_newline_terminated():
    text = to_json({"b": 1, "a": {"z": 0.1 + 0.2, "y": -0.0}})
    assert text.endswith("}\n")
    assert text.index('"a"') < text.index('"b"')
    assert json.loads(text) == {"a": {"y": 0.0, "z": 0.3}, "b": 1}
    assert to_json({"a": 1, "b": 2}) == to_json({"b": 2, "a": 1})


def test_models_serialise_like_dicts():
    model = validate_report(SpectrumReportModel, SPECTRUM)
    assert json.loads(to_json(model))["format_version"] == 1
    assert json.loads(to_json(model))["entries"][0]["value"] == 0.34


# ----------------------------------------------------------------------
# CSV
# ----------------------------------------------------------------------

def test_csv_joins_lists_and_blanks_missing_cells():
    text = to_csv([ROW], EXPERIMENT_COLUMNS)
    header, line = text.splitlines()
    assert header.split(",") == EXPERIMENT_COLUMNS
    cells = dict(zip(EXPERIMENT_COLUMNS, line.split(",")))
    assert cells["deck_torsion"] == "2 6"
    assert cells["map_distortion"] == ""
    assert cells["scale"] == "0.333333333333"


def test_writers_create_parent_directories(tmp_path):
    json_path = write_json(str(tmp_path / "nested" / "report.json"), {"x": 1})
    csv_path = write_csv(str(tmp_path / "nested" / "rows.csv"), [ROW])
    assert json.loads(open(json_path, encoding="utf-8").read()) == {"x": 1}
    assert open(csv_path, encoding="utf-8").read().startswith("i,target,scale")


# ----------------------------------------------------------------------
# Validation and tables
# ----------------------------------------------------------------------

def test_validate_report_rejects_bad_documents():
    with pytest.raises(DomainError):
        validate_report(SpectrumReportModel, {**SPECTRUM, "entries": [{"value": 0.3, "multiplicity": 0,
                                                                        "certainty": "certain", "error": 0.0}]})
    with pytest.raises(DomainError):
        validate_report(DemoReportModel, {"floor": 0.1})


def test_tables_render():
    assert "covering value" in spectrum_table(SPECTRUM)
    assert "0.51" in spectrum_table(SPECTRUM)
    assert "unresolved clusters: [0.2, 0.25]" in spectrum_table({**SPECTRUM, "unresolved": [[0.2, 0.25]]})
    assert "eps-cover@0.35" in experiment_table([ROW])
    table = demo_table([{"stage": 2, "valency": 4, "critical_values": [1 / 3, 1 / 6]}])
    assert "0.3333, 0.1667" in table
