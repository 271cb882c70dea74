"""Serialization tests: formatting, round trips, malformed-input handling."""

from __future__ import annotations

import numpy as np
import pytest

from cellgraph import io
from cellgraph.errors import DataError


# --- float formatting ----------------------------------------------------------


def test_fmt_basic_values():
    assert io.fmt(0.0) == "0"
    assert io.fmt(1.0) == "1"
    assert io.fmt(-3.5) == "-3.5"
    assert io.fmt(0.1) == "0.1"
    assert io.fmt(1e-20) == "1e-20"


def test_fmt_quantization_is_idempotent(rng):
    # 15 significant digits drop the last bit of a double, so the parse-render
    # cycle must converge after a single pass and then be a fixed point.
    values = np.concatenate(
        [
            rng.uniform(-10, 10, size=200),
            rng.normal(scale=1e-8, size=100),
            rng.normal(scale=1e12, size=100),
            np.array([np.pi, -np.e, 2.0 / 3.0]),
        ]
    )
    for x in values:
        once = io.fmt(x)
        assert io.fmt(float(once)) == once


def test_fmt_preserves_fifteen_digits():
    x = 3.14159265358979
    assert float(io.fmt(x)) == x


# --- stage telemetry files -------------------------------------------------------


def test_stage_round_trip_bytes(tmp_path, healthy_series):
    first = tmp_path / io.stage_filename(healthy_series.cycle)
    io.write_stage_csv(healthy_series, first)
    parsed = io.read_stage_csv(first)
    second = tmp_path / "again"
    second.mkdir()
    second = second / io.stage_filename(parsed.cycle)
    io.write_stage_csv(parsed, second)
    assert first.read_bytes() == second.read_bytes()


def test_stage_round_trip_values(tmp_path, healthy_series):
    path = io.write_stage_csv(healthy_series, tmp_path / "stage_0.csv")
    parsed = io.read_stage_csv(path)
    assert parsed.cycle == 0
    assert len(parsed) == len(healthy_series)
    # Stored values agree with the originals to the serialized precision.
    np.testing.assert_allclose(
        parsed.voltage_v, healthy_series.voltage_v, rtol=1e-14
    )
    np.testing.assert_array_equal(parsed.time_s, healthy_series.time_s)


def test_stage_header_and_newlines(tmp_path, healthy_series):
    path = io.write_stage_csv(healthy_series, tmp_path / "stage_0.csv")
    raw = path.read_bytes()
    assert raw.startswith(b"time_s,current_a,voltage_v\n")
    assert b"\r" not in raw
    assert raw.endswith(b"\n")


def test_cycle_inference_and_override(tmp_path, healthy_series):
    path = io.write_stage_csv(healthy_series, tmp_path / "stage_140.csv")
    assert io.read_stage_csv(path).cycle == 140
    assert io.read_stage_csv(path, cycle=7).cycle == 7
    odd = tmp_path / "telemetry.csv"
    odd.write_bytes(path.read_bytes())
    with pytest.raises(DataError, match="cannot infer cycle"):
        io.read_stage_csv(odd)
    assert io.read_stage_csv(odd, cycle=3).cycle == 3


def test_missing_stage_file(tmp_path):
    with pytest.raises(DataError, match="cannot read stage file"):
        io.read_stage_csv(tmp_path / "stage_0.csv")


@pytest.mark.parametrize(
    "body",
    [
        "wrong,header,names\n0,0,3.6\n1,0,3.6\n",
        "time_s,current_a,voltage_v\n0,0\n1,0\n",
        "time_s,current_a,voltage_v\n0,0,3.6\n1,zero,3.6\n",
        "time_s,current_a,voltage_v\n0,0,3.6\n",
        "time_s,current_a,voltage_v\n0,0,3.6\n1,0,3.6\n3,0,3.6\n",
        "",
    ],
)
def test_malformed_stage_files(tmp_path, body):
    path = tmp_path / "stage_0.csv"
    path.write_text(body)
    with pytest.raises(DataError):
        io.read_stage_csv(path)


def test_stage_filename_helpers():
    assert io.stage_filename(0) == "stage_0.csv"
    assert io.stage_filename(360) == "stage_360.csv"
    assert io.modes_filename(20) == "modes_20.csv"


# --- metrics table ----------------------------------------------------------------


def make_rows():
    return [
        {
            "cycle": 0, "mu": 0.012345678901234, "edges": 4200,
            "connectivity": 0.63, "q_proxy": 0.22, "n_rows": 100,
            "n_cols": 71, "one_step_rmse": 7.5e-4,
        },
        {
            "cycle": 20, "mu": 0.011, "edges": 4100,
            "connectivity": 0.61, "q_proxy": 0.23, "n_rows": 100,
            "n_cols": 72, "one_step_rmse": 8.1e-4,
        },
    ]


def test_metrics_round_trip(tmp_path):
    path = io.write_metrics_csv(make_rows(), tmp_path / "metrics.csv")
    parsed = io.read_metrics_csv(path)
    assert parsed == [
        {key: (value if isinstance(value, int) else float(io.fmt(value)))
         for key, value in row.items()}
        for row in make_rows()
    ]
    assert all(isinstance(row["edges"], int) for row in parsed)
    assert all(isinstance(row["mu"], float) for row in parsed)


def test_metrics_rewrite_is_byte_stable(tmp_path):
    first = io.write_metrics_csv(make_rows(), tmp_path / "a.csv")
    parsed = io.read_metrics_csv(first)
    second = io.write_metrics_csv(parsed, tmp_path / "b.csv")
    assert first.read_bytes() == second.read_bytes()


def test_metrics_header_enforced(tmp_path):
    path = tmp_path / "metrics.csv"
    path.write_text("cycle,mu\n0,0.1\n")
    with pytest.raises(DataError):
        io.read_metrics_csv(path)
    path.write_text(io.METRICS_HEADER + "\n1,2,3\n")
    with pytest.raises(DataError):
        io.read_metrics_csv(path)


# --- mode surfaces ----------------------------------------------------------------


def test_modes_round_trip(tmp_path, rng):
    d, r = 7, 3
    magnitude = rng.uniform(0.0, 1.0, size=(d, r))
    phase = rng.uniform(-3.1, 3.1, size=(d, r))
    mask = rng.uniform(size=(d, r)) < 0.2
    phase[mask] = 0.0
    path = io.write_modes_csv(magnitude, phase, mask, tmp_path / "modes_0.csv")
    mag2, ph2, mask2 = io.read_modes_csv(path)
    assert mag2.shape == (d, r)
    np.testing.assert_allclose(mag2, magnitude, rtol=1e-14)
    np.testing.assert_allclose(ph2, phase, rtol=1e-14)
    np.testing.assert_array_equal(mask2, mask)


def test_modes_layout_is_mode_major(tmp_path):
    magnitude = np.array([[1.0, 3.0], [2.0, 4.0]])
    phase = np.zeros((2, 2))
    mask = np.zeros((2, 2), dtype=bool)
    path = io.write_modes_csv(magnitude, phase, mask, tmp_path / "modes_0.csv")
    lines = path.read_text().splitlines()
    assert lines[0] == io.MODES_HEADER
    assert lines[1].startswith("0,0,1")
    assert lines[2].startswith("0,1,2")
    assert lines[3].startswith("1,0,3")


def test_modes_header_enforced(tmp_path):
    path = tmp_path / "modes.csv"
    path.write_text("bogus\n")
    with pytest.raises(DataError):
        io.read_modes_csv(path)


# --- report JSON -------------------------------------------------------------------


def test_report_json_is_canonical(tmp_path):
    report = {"zeta": 1, "alpha": {"b": 2, "a": [1, 2]}}
    path = io.write_report_json(report, tmp_path / "report.json")
    text = path.read_text()
    assert text.endswith("\n")
    assert text.index('"alpha"') < text.index('"zeta"')
    again = io.write_report_json(report, tmp_path / "report2.json")
    assert path.read_bytes() == again.read_bytes()
