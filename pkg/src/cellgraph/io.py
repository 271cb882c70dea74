"""Delimited-file formats of the pipeline.

All writers are deterministic: numbers carry up to 15 significant digits
with no locale dependence, rows end in LF, encoding is UTF-8. Fifteen
digits round-trip through a float and back to the identical string, which
the golden-file tests rely on.

Stage telemetry files are named ``stage_<cycle>.csv`` and carry the columns
``time_s,current_a,voltage_v`` with positive current meaning discharge.
"""

from __future__ import annotations

import json
import re
from pathlib import Path

import numpy as np

from .battery import TimeSeries
from .errors import DataError

STAGE_HEADER = "time_s,current_a,voltage_v"
METRICS_HEADER = "cycle,mu,edges,connectivity,q_proxy,n_rows,n_cols,one_step_rmse"
MODES_HEADER = "mode_idx,embed_idx,magnitude,phase_rad,masked"

_STAGE_NAME = re.compile(r"stage_(\d+)\.csv$")


def fmt(value: float) -> str:
    """Render a float with up to 15 significant digits."""
    return format(float(value), ".15g")


def stage_filename(cycle: int) -> str:
    return f"stage_{cycle}.csv"


def modes_filename(cycle: int) -> str:
    return f"modes_{cycle}.csv"


def write_stage_csv(series: TimeSeries, path: Path | str) -> Path:
    path = Path(path)
    lines = [STAGE_HEADER]
    for t, i, v in zip(series.time_s, series.current_a, series.voltage_v):
        lines.append(f"{fmt(t)},{fmt(i)},{fmt(v)}")
    path.write_text("\n".join(lines) + "\n", encoding="utf-8", newline="\n")
    return path


def read_stage_csv(path: Path | str, cycle: int | None = None) -> TimeSeries:
    """Parse one stage file; the cycle comes from the filename unless given."""
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise DataError(f"cannot read stage file {path}: {exc}") from exc
    if cycle is None:
        match = _STAGE_NAME.search(path.name)
        if not match:
            raise DataError(
                f"cannot infer cycle from filename {path.name!r}; pass it explicitly"
            )
        cycle = int(match.group(1))
    lines = text.strip().splitlines()
    if not lines or lines[0].strip() != STAGE_HEADER:
        raise DataError(f"{path}: expected header {STAGE_HEADER!r}")
    rows = []
    for lineno, line in enumerate(lines[1:], start=2):
        parts = line.split(",")
        if len(parts) != 3:
            raise DataError(f"{path}:{lineno}: expected 3 comma-separated values")
        try:
            rows.append(tuple(float(p) for p in parts))
        except ValueError as exc:
            raise DataError(f"{path}:{lineno}: {exc}") from exc
    if len(rows) < 2:
        raise DataError(f"{path}: need at least 2 samples")
    data = np.array(rows)
    sample_period = float(data[1, 0] - data[0, 0])
    try:
        return TimeSeries(
            cycle=cycle,
            time_s=data[:, 0],
            current_a=data[:, 1],
            voltage_v=data[:, 2],
            sample_period=sample_period,
        )
    except ValueError as exc:
        raise DataError(f"{path}: {exc}") from exc


def write_metrics_csv(rows: list[dict], path: Path | str) -> Path:
    """Write the campaign metric table; one dict per stage row."""
    path = Path(path)
    lines = [METRICS_HEADER]
    for row in rows:
        lines.append(
            ",".join(
                [
                    str(int(row["cycle"])),
                    fmt(row["mu"]),
                    str(int(row["edges"])),
                    fmt(row["connectivity"]),
                    fmt(row["q_proxy"]),
                    str(int(row["n_rows"])),
                    str(int(row["n_cols"])),
                    fmt(row["one_step_rmse"]),
                ]
            )
        )
    path.write_text("\n".join(lines) + "\n", encoding="utf-8", newline="\n")
    return path


def read_metrics_csv(path: Path | str) -> list[dict]:
    path = Path(path)
    lines = path.read_text(encoding="utf-8").strip().splitlines()
    if not lines or lines[0] != METRICS_HEADER:
        raise DataError(f"{path}: expected header {METRICS_HEADER!r}")
    names = METRICS_HEADER.split(",")
    int_cols = {"cycle", "edges", "n_rows", "n_cols"}
    rows = []
    for line in lines[1:]:
        parts = line.split(",")
        if len(parts) != len(names):
            raise DataError(f"{path}: malformed row {line!r}")
        rows.append(
            {n: int(p) if n in int_cols else float(p) for n, p in zip(names, parts)}
        )
    return rows


def write_modes_csv(
    magnitude: np.ndarray, phase: np.ndarray, mask: np.ndarray, path: Path | str
) -> Path:
    """Long-form mode surface export: one row per (mode, embedding coordinate)."""
    path = Path(path)
    d, r = magnitude.shape
    lines = [MODES_HEADER]
    for j in range(r):
        for i in range(d):
            lines.append(
                f"{j},{i},{fmt(magnitude[i, j])},{fmt(phase[i, j])},{int(mask[i, j])}"
            )
    path.write_text("\n".join(lines) + "\n", encoding="utf-8", newline="\n")
    return path


def read_modes_csv(path: Path | str) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Reassemble (magnitude, phase, mask) matrices from a mode export."""
    path = Path(path)
    lines = path.read_text(encoding="utf-8").strip().splitlines()
    if not lines or lines[0] != MODES_HEADER:
        raise DataError(f"{path}: expected header {MODES_HEADER!r}")
    entries = []
    for line in lines[1:]:
        j_s, i_s, mag_s, ph_s, mask_s = line.split(",")
        entries.append((int(j_s), int(i_s), float(mag_s), float(ph_s), int(mask_s)))
    r = 1 + max(e[0] for e in entries)
    d = 1 + max(e[1] for e in entries)
    magnitude = np.zeros((d, r))
    phase = np.zeros((d, r))
    mask = np.zeros((d, r), dtype=bool)
    for j, i, mag, ph, mk in entries:
        magnitude[i, j] = mag
        phase[i, j] = ph
        mask[i, j] = bool(mk)
    return magnitude, phase, mask


def write_report_json(report_dict: dict, path: Path | str) -> Path:
    path = Path(path)
    path.write_text(
        json.dumps(report_dict, indent=2, sort_keys=True) + "\n",
        encoding="utf-8",
        newline="\n",
    )
    return path
