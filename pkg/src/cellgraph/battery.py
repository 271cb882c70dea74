"""Synthetic HPPC telemetry from an aging two-branch Thevenin cell model.

The simulator exists so the identification pipeline can be exercised end to
end without lab data: a 2RC equivalent circuit produces the voltage response
to pulse-test current profiles, and a degradation schedule drifts the circuit
parameters with cycle count.

Sign convention: positive current discharges the cell.
"""

from __future__ import annotations

import importlib.resources
from dataclasses import dataclass, replace

import numpy as np

from .errors import DataError

VOLTAGE_MIN = 2.5
VOLTAGE_MAX = 4.2

_SOC_TOL = 1e-12


@dataclass(frozen=True)
class EcmParameters:
    """Equivalent-circuit parameters of one cell.

    ``ocv_table`` holds (soc, open-circuit voltage) breakpoints with strictly
    increasing soc and nondecreasing voltage, anchored at (0, 2.5 V) and
    (1, 4.2 V).
    """

    r0: float
    r1: float
    r2: float
    c1: float
    c2: float
    capacity: float
    ocv_table: tuple[tuple[float, float], ...]

    def __post_init__(self) -> None:
        if self.r0 < 0 or self.r1 < 0 or self.r2 < 0:
            raise ValueError("resistances must be >= 0")
        if self.c1 <= 0 or self.c2 <= 0:
            raise ValueError("capacitances must be > 0")
        if self.capacity <= 0:
            raise ValueError("capacity must be > 0")
        if len(self.ocv_table) < 2:
            raise ValueError("ocv_table needs at least two breakpoints")
        socs = [s for s, _ in self.ocv_table]
        volts = [v for _, v in self.ocv_table]
        if any(b <= a for a, b in zip(socs, socs[1:])):
            raise ValueError("ocv_table soc values must be strictly increasing")
        if any(b < a for a, b in zip(volts, volts[1:])):
            raise ValueError("ocv_table voltages must be nondecreasing")
        if socs[0] != 0.0 or socs[-1] != 1.0:
            raise ValueError("ocv_table must span soc 0..1")
        if volts[0] != VOLTAGE_MIN or volts[-1] != VOLTAGE_MAX:
            raise ValueError(
                f"ocv_table must be anchored at {VOLTAGE_MIN} V and {VOLTAGE_MAX} V"
            )


@dataclass(frozen=True)
class DegradationSchedule:
    """Per-cycle fractional drift applied to the circuit parameters.

    All rates compound geometrically, so cycle 0 reproduces the fresh
    parameters exactly.
    """

    r0_growth_per_cycle: float = 0.0
    capacity_fade_per_cycle: float = 0.0
    rc_drift_per_cycle: float = 0.0

    def __post_init__(self) -> None:
        if not 0.0 <= self.capacity_fade_per_cycle < 1.0:
            raise ValueError("capacity_fade_per_cycle must be in [0, 1)")


@dataclass(frozen=True)
class HppcProfile:
    """Pulse-test schedule: at each soc step a discharge pulse, rest, charge
    pulse and rest are applied, with constant-current moves between steps.

    The series starts at ``initial_soc``; if that differs from the first soc
    step a constant-current move precedes the first pulse block.
    """

    pulse_current: float
    pulse_duration: float
    rest_duration: float
    soc_steps: tuple[float, ...]
    sample_period: float
    initial_soc: float

    def __post_init__(self) -> None:
        if self.sample_period <= 0:
            raise ValueError("sample_period must be > 0")
        if self.pulse_current < 0:
            raise ValueError("pulse_current must be >= 0")
        for name in ("pulse_duration", "rest_duration"):
            dur = getattr(self, name)
            steps = dur / self.sample_period
            if abs(steps - round(steps)) > 1e-9:
                raise ValueError(f"{name} must be an integer multiple of sample_period")
        if not self.soc_steps:
            raise ValueError("soc_steps must not be empty")
        if any(not 0.0 <= s <= 1.0 for s in self.soc_steps):
            raise ValueError("soc_steps must lie in [0, 1]")
        diffs = [b - a for a, b in zip(self.soc_steps, self.soc_steps[1:])]
        if diffs and not (all(d > 0 for d in diffs) or all(d < 0 for d in diffs)):
            raise ValueError("soc_steps must be strictly monotone")
        if not 0.0 <= self.initial_soc <= 1.0:
            raise ValueError("initial_soc must lie in [0, 1]")


@dataclass(frozen=True)
class TimeSeries:
    """Uniformly sampled telemetry of one aging stage.

    ``current_a[k]`` is the commanded current taking effect at ``time_s[k]``
    and held until the next sample, so each voltage sample is driven by the
    current recorded one sample earlier; the final entry is 0 (end of test).
    ``truncated`` records that a segment was cut short to keep the terminal
    voltage inside [2.5, 4.2] V; ``saturated`` that the soc hit a bound.
    """

    cycle: int
    time_s: np.ndarray
    current_a: np.ndarray
    voltage_v: np.ndarray
    sample_period: float
    truncated: bool = False
    saturated: bool = False

    def __post_init__(self) -> None:
        if self.cycle < 0:
            raise ValueError("cycle must be a nonnegative integer")
        n = len(self.time_s)
        if len(self.current_a) != n or len(self.voltage_v) != n:
            raise ValueError("time, current and voltage must have equal length")
        if n >= 2:
            gaps = np.diff(self.time_s)
            if np.any(gaps <= 0):
                raise ValueError("timestamps must be strictly increasing")
            if np.max(np.abs(gaps - self.sample_period)) > 1e-9 * self.sample_period:
                raise ValueError("timestamps must be spaced by sample_period")

    def __len__(self) -> int:
        return len(self.time_s)


@dataclass(frozen=True)
class EcmState:
    """Instantaneous simulator state: soc plus the two RC branch voltages."""

    soc: float
    v_rc1: float = 0.0
    v_rc2: float = 0.0


def default_ocv_table() -> tuple[tuple[float, float], ...]:
    """Breakpoints of the shipped open-circuit-voltage curve."""
    text = (
        importlib.resources.files("cellgraph")
        .joinpath("data/ocv_default.csv")
        .read_text(encoding="utf-8")
    )
    rows = []
    for line in text.strip().splitlines()[1:]:
        soc_s, ocv_s = line.split(",")
        rows.append((float(soc_s), float(ocv_s)))
    return tuple(rows)


def default_parameters() -> EcmParameters:
    """Fresh-cell parameters of the shipped desk-scale 3 Ah cell.

    Time constants are 6 s (r1·c1) and 60 s (r2·c2), so a 10 s pulse
    saturates the fast branch while the slow branch integrates.
    """
    return EcmParameters(
        r0=25e-3,
        r1=15e-3,
        r2=12e-3,
        c1=400.0,
        c2=5.0e3,
        capacity=3.0,
        ocv_table=default_ocv_table(),
    )


def default_schedule() -> DegradationSchedule:
    """Aging rates used by the shipped synthetic campaign."""
    return DegradationSchedule(
        r0_growth_per_cycle=1.0e-3,
        capacity_fade_per_cycle=5.0e-4,
        rc_drift_per_cycle=1.0e-3,
    )


def default_profile() -> HppcProfile:
    """Pulse-test profile used by the shipped synthetic campaign: 1C pulses
    at six states of charge with 1C moves between them."""
    return HppcProfile(
        pulse_current=3.0,
        pulse_duration=10.0,
        rest_duration=40.0,
        soc_steps=(0.8, 0.7, 0.6, 0.5, 0.4, 0.3),
        sample_period=1.0,
        initial_soc=0.8,
    )


def ocv_lookup(params: EcmParameters, soc: float) -> float:
    """Open-circuit voltage at ``soc``, piecewise-linear over the table."""
    if not 0.0 <= soc <= 1.0:
        raise ValueError(f"soc must lie in [0, 1], got {soc}")
    socs = np.array([s for s, _ in params.ocv_table])
    volts = np.array([v for _, v in params.ocv_table])
    return float(np.interp(soc, socs, volts))


def step_ecm(
    state: EcmState, current: float, dt: float, params: EcmParameters
) -> tuple[EcmState, float, bool]:
    """Advance the circuit one step under a constant ``current``.

    The RC branches use the exact zero-order-hold discretization, so any
    step size is stable. Returns the new state, the terminal voltage and a
    flag set when the soc had to be clipped to [0, 1].

    Positive current discharges.
    """
    if dt <= 0:
        raise ValueError(f"dt must be > 0, got {dt}")
    soc = state.soc - current * dt / (3600.0 * params.capacity)
    saturated = False
    if soc < 0.0 or soc > 1.0:
        soc = min(max(soc, 0.0), 1.0)
        saturated = True
    v_rcs = []
    for v, r, c in ((state.v_rc1, params.r1, params.c1), (state.v_rc2, params.r2, params.c2)):
        if r == 0.0:
            v_rcs.append(0.0)  # shorted branch carries no voltage
        else:
            decay = np.exp(-dt / (r * c))
            v_rcs.append(v * decay + r * (1.0 - decay) * current)
    new_state = EcmState(soc=soc, v_rc1=v_rcs[0], v_rc2=v_rcs[1])
    v_term = ocv_lookup(params, soc) - current * params.r0 - v_rcs[0] - v_rcs[1]
    return new_state, float(v_term), saturated


def degrade_params(
    params0: EcmParameters, cycle: int, schedule: DegradationSchedule
) -> EcmParameters:
    """Circuit parameters after ``cycle`` aging cycles under ``schedule``."""
    if cycle < 0:
        raise ValueError(f"cycle must be >= 0, got {cycle}")
    if cycle == 0:
        return params0
    growth = (1.0 + schedule.r0_growth_per_cycle) ** cycle
    fade = (1.0 - schedule.capacity_fade_per_cycle) ** cycle
    drift = (1.0 + schedule.rc_drift_per_cycle) ** cycle
    return replace(
        params0,
        r0=params0.r0 * growth,
        r1=params0.r1 * drift,
        r2=params0.r2 * drift,
        capacity=params0.capacity * fade,
    )


class _SeriesBuilder:
    """Accumulates samples while simulating, clipping out-of-range voltage."""

    def __init__(self, params: EcmParameters, profile: HppcProfile, state: EcmState):
        self.params = params
        self.dt = profile.sample_period
        self.state = state
        self.currents: list[float] = []
        self.voltages: list[float] = [
            ocv_lookup(params, state.soc) - state.v_rc1 - state.v_rc2
        ]
        self.truncated = False
        self.saturated = False

    def run_segment(self, current: float, n_steps: int) -> None:
        """Simulate ``n_steps`` samples at constant ``current``; stop early if
        the terminal voltage leaves the admissible window."""
        for _ in range(n_steps):
            state, v_term, sat = step_ecm(self.state, current, self.dt, self.params)
            if not VOLTAGE_MIN <= v_term <= VOLTAGE_MAX:
                self.truncated = True
                return
            self.state = state
            self.saturated = self.saturated or sat
            # The command becomes the current column of the sample it takes
            # effect at, one position before the voltage it produces.
            self.currents.append(current)
            self.voltages.append(v_term)

    def finish(self, cycle: int) -> TimeSeries:
        n = len(self.voltages)
        return TimeSeries(
            cycle=cycle,
            time_s=np.arange(n) * self.dt,
            current_a=np.asarray(self.currents + [0.0]),
            voltage_v=np.asarray(self.voltages),
            sample_period=self.dt,
            truncated=self.truncated,
            saturated=self.saturated,
        )


def _transition_steps(
    delta_soc: float, nominal_current: float, capacity: float, dt: float
) -> tuple[float, int]:
    """Constant-current segment landing exactly on the target soc.

    The step count comes from the nominal current rounded to the sample
    grid; the actual current is then adjusted so the soc change is exact.
    """
    charge_s = abs(delta_soc) * 3600.0 * capacity
    n = max(1, round(charge_s / (nominal_current * dt)))
    current = delta_soc * 3600.0 * capacity / (n * dt)
    return current, n


def generate_hppc(
    params: EcmParameters,
    profile: HppcProfile,
    cycle: int,
    noise_std: float = 0.0,
    rng: np.random.Generator | None = None,
) -> TimeSeries:
    """Simulate one pulse-test stage and return its telemetry.

    Optional additive Gaussian voltage noise of ``noise_std`` volts is drawn
    from ``rng``; with the default amplitude of zero the output depends only
    on (params, profile, cycle).
    """
    if cycle < 0:
        raise ValueError(f"cycle must be >= 0, got {cycle}")
    if noise_std < 0:
        raise ValueError("noise_std must be >= 0")
    dt = profile.sample_period
    pulse_n = round(profile.pulse_duration / dt)
    rest_n = round(profile.rest_duration / dt)
    builder = _SeriesBuilder(params, profile, EcmState(soc=profile.initial_soc))

    # Transitions fall back to a 1C rate when the pulses carry no current.
    nominal = profile.pulse_current if profile.pulse_current > 0 else params.capacity
    for target in profile.soc_steps:
        delta = target - builder.state.soc
        if abs(delta) > _SOC_TOL:
            current, n = _transition_steps(-delta, nominal, params.capacity, dt)
            builder.run_segment(current, n)
        builder.run_segment(profile.pulse_current, pulse_n)
        builder.run_segment(0.0, rest_n)
        builder.run_segment(-profile.pulse_current, pulse_n)
        builder.run_segment(0.0, rest_n)

    series = builder.finish(cycle)
    if noise_std > 0.0:
        if rng is None:
            raise ValueError("noise_std > 0 requires an rng")
        noisy = series.voltage_v + rng.normal(0.0, noise_std, len(series))
        series = replace(series, voltage_v=noisy)
    if len(series) < 2:
        raise DataError("profile produced fewer than two admissible samples")
    return series
