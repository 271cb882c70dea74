"""Delay-embedded snapshot matrices for system identification.

A scalar voltage record becomes a d-dimensional state by stacking d
consecutive samples; the resulting Hankel-structured matrices define the
current states X, the one-step-advanced states X', and the input row U.
Each embedded coordinate later becomes one node of the mode graph.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .battery import TimeSeries
from .errors import InsufficientDataError


@dataclass(frozen=True)
class SnapshotSet:
    """Snapshot matrices of one stage.

    ``x`` and ``x_next`` are d x m with the Hankel shift structure
    x_next[:, j] == x[:, j+1]; ``u`` is q x m. The centering offsets are zero
    until :func:`center_snapshots` fills them in, so downstream consumers can
    always uncenter with a plain add.
    """

    x: np.ndarray
    x_next: np.ndarray
    u: np.ndarray
    state_offsets: np.ndarray
    input_offsets: np.ndarray

    def __post_init__(self) -> None:
        if self.x.shape != self.x_next.shape:
            raise ValueError("x and x_next must have identical shape")
        if self.u.ndim != 2 or self.u.shape[1] != self.m:
            raise ValueError("u must be q x m")
        if self.state_offsets.shape != (self.d,):
            raise ValueError("state_offsets must have length d")
        if self.input_offsets.shape != (self.q,):
            raise ValueError("input_offsets must have length q")

    @property
    def d(self) -> int:
        return self.x.shape[0]

    @property
    def m(self) -> int:
        return self.x.shape[1]

    @property
    def q(self) -> int:
        return self.u.shape[0]


def from_matrices(x: np.ndarray, x_next: np.ndarray, u: np.ndarray) -> SnapshotSet:
    """Wrap pre-built snapshot matrices (zero offsets)."""
    x = np.asarray(x, dtype=float)
    x_next = np.asarray(x_next, dtype=float)
    u = np.asarray(u, dtype=float)
    return SnapshotSet(
        x=x,
        x_next=x_next,
        u=u,
        state_offsets=np.zeros(x.shape[0]),
        input_offsets=np.zeros(u.shape[0]),
    )


def build_snapshots(series: TimeSeries, d: int) -> SnapshotSet:
    """Delay-embed one stage's telemetry with window length ``d``.

    Column k of X stacks voltages v_k .. v_{k+d-1}; X' is the same
    construction shifted one sample; the input row carries the current at
    the last sample of each state window, i.e. the input acting on the
    transition X[:, k] -> X'[:, k]. m = len(series) - d columns result.
    """
    if d < 1:
        raise ValueError(f"embedding dimension must be >= 1, got {d}")
    length = len(series)
    if length < d + 1:
        raise InsufficientDataError(
            f"series has {length} samples; embedding with d={d} needs at least {d + 1}"
        )
    m = length - d
    v = np.asarray(series.voltage_v, dtype=float)
    i = np.asarray(series.current_a, dtype=float)
    # Row r of the Hankel block holds v_{k+r} for columns k = 0..m-1.
    x = np.lib.stride_tricks.sliding_window_view(v[: m + d - 1], m).copy()
    x_next = np.lib.stride_tricks.sliding_window_view(v[1 : m + d], m).copy()
    u = i[d - 1 : d - 1 + m][np.newaxis, :].copy()
    return SnapshotSet(
        x=x,
        x_next=x_next,
        u=u,
        state_offsets=np.zeros(d),
        input_offsets=np.zeros(1),
    )


def center_snapshots(s: SnapshotSet) -> tuple[SnapshotSet, np.ndarray]:
    """Remove per-row means so the SVD energy reflects dynamics, not offsets.

    The row means of ``x`` are subtracted from both ``x`` and ``x_next`` (one
    offset per embedded coordinate) and the row means of ``u`` from ``u``.
    Returns the centered set and the state offsets; both offset vectors also
    travel on the returned set for later reconstruction.
    """
    state_off = s.x.mean(axis=1)
    input_off = s.u.mean(axis=1)
    centered = SnapshotSet(
        x=s.x - state_off[:, None],
        x_next=s.x_next - state_off[:, None],
        u=s.u - input_off[:, None],
        state_offsets=s.state_offsets + state_off,
        input_offsets=s.input_offsets + input_off,
    )
    return centered, state_off


def uncenter_snapshots(s: SnapshotSet) -> SnapshotSet:
    """Add the stored offsets back, restoring the original matrices."""
    return replace(
        s,
        x=s.x + s.state_offsets[:, None],
        x_next=s.x_next + s.state_offsets[:, None],
        u=s.u + s.input_offsets[:, None],
        state_offsets=np.zeros(s.d),
        input_offsets=np.zeros(s.q),
    )
