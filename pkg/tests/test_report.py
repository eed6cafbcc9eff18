"""Deterministic report serialization and tabular output."""

import json

import numpy as np
import pytest

from fitcoef import report


def test_round_trip_lossless(tmp_path):
    doc = report.make_report(
        "demo",
        {"family": "gumbel", "delta": 0.05},
        42,
        {
            "alpha": 0.1 + 0.2,  # not exactly representable in decimal
            "theta": np.array([62.1234567890123456, 5.4]),
            "flags": [True, False, None],
            "nested": {"count": 7, "tiny": 1e-300},
        },
    )
    path = tmp_path / "r.json"
    report.dump(doc, path)
    loaded = report.load(path)
    assert loaded["results"]["alpha"] == 0.1 + 0.2
    assert loaded["results"]["theta"] == [62.1234567890123456, 5.4]
    assert loaded["results"]["nested"]["tiny"] == 1e-300
    assert loaded["schema_version"] == report.SCHEMA_VERSION


def test_bytes_independent_of_insertion_order():
    a = report.make_report("x", {"b": 1, "a": 2}, 0, {"z": 1.5, "y": [1, 2]})
    b = report.make_report("x", {"a": 2, "b": 1}, 0, {"y": [1, 2], "z": 1.5})
    assert report.dumps(a) == report.dumps(b)


def test_floats_keep_17_significant_digits():
    doc = report.make_report("x", {}, None, {"v": 0.1})
    text = report.dumps(doc)
    assert "0.10000000000000001" in text
    assert json.loads(text)["results"]["v"] == 0.1


def test_integers_stay_integers_and_floats_stay_floats():
    text = report.dumps(report.make_report("x", {}, 3, {"n": 400, "v": 2.0}))
    loaded = json.loads(text)
    assert loaded["results"]["n"] == 400 and isinstance(loaded["results"]["n"], int)
    assert isinstance(loaded["results"]["v"], float)


def test_nonfinite_rejected():
    with pytest.raises(ValueError):
        report.dumps(report.make_report("x", {}, None, {"v": float("inf")}))


def test_unserializable_type_rejected():
    with pytest.raises(TypeError):
        report.dumps(report.make_report("x", {}, None, {"v": object()}))


def test_write_table(tmp_path):
    rows = [
        {"grid_value": 0.5, "estimator": "lr", "metric": "alpha", "mean": 0.75, "count": 10},
        {"grid_value": 1.0, "estimator": "os", "metric": "alpha", "mean": 0.25, "count": 10},
    ]
    path = tmp_path / "t.csv"
    report.write_table(rows, path)
    lines = path.read_text().splitlines()
    assert lines[0] == "grid_value,estimator,metric,mean,count"
    assert lines[1].startswith("0.5") and ",lr,alpha," in lines[1]
    assert len(lines) == 3
