"""Campaign orchestration: telemetry in, degradation report out.

Each stage runs the same pure chain (embed, center, fit, mode magnitudes,
graph metrics), so stages are independent and could execute in parallel;
the report is a deterministic reduction ordered by cycle. Stage telemetry
either comes from a CSV file or is synthesized on the fly by the shipped
cell simulator ("simulate" source).
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from . import __version__, battery, dmdc, embedding, io
from .battery import TimeSeries
from .errors import CellgraphError, ConfigError, StageError
from .graph_metrics import DEFAULT_EPSILON, GraphMetrics, WeightedGraph, compute_metrics

SIMULATE = "simulate"


@dataclass(frozen=True)
class StageSpec:
    """One campaign entry: the cycle label and where its telemetry comes from."""

    cycle: int
    source: str = SIMULATE


@dataclass(frozen=True)
class CampaignConfig:
    """Resolved settings of one campaign run.

    ``rank_state``/``rank_joint`` follow ``energy_mode`` semantics (fractions
    when true, counts otherwise). The first stage acts as the healthy
    reference. ``seed`` and ``noise_std`` control the optional Gaussian
    voltage noise of simulated stages; the default amplitude of zero keeps
    stages exactly reproducible.
    """

    stages: tuple[StageSpec, ...]
    embedding_dim: int = 100
    centering: bool = True
    rank_state: float = 0.9999
    rank_joint: float = 0.9999
    energy_mode: bool = True
    epsilon: float = DEFAULT_EPSILON
    output_dir: str = "campaign_out"
    seed: int = 0
    noise_std: float = 0.0

    def __post_init__(self) -> None:
        if not self.stages:
            raise ConfigError("campaign needs at least one stage")
        cycles = [s.cycle for s in self.stages]
        if any(c < 0 for c in cycles):
            raise ConfigError("stage cycles must be nonnegative")
        if any(b <= a for a, b in zip(cycles, cycles[1:])):
            raise ConfigError("stage cycles must be strictly increasing")
        if self.embedding_dim < 1:
            raise ConfigError("embedding_dim must be >= 1")
        if self.epsilon <= 0:
            raise ConfigError("epsilon must be > 0")
        if self.noise_std < 0:
            raise ConfigError("noise_std must be >= 0")
        try:
            self.dmdc_config()
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc

    def dmdc_config(self) -> dmdc.DmdcConfig:
        return dmdc.DmdcConfig(
            rank_state=self.rank_state,
            rank_joint=self.rank_joint,
            energy_mode=self.energy_mode,
        )

    def echo(self) -> dict:
        """JSON-ready view of the fully resolved configuration."""
        data = asdict(self)
        data["stages"] = [asdict(s) for s in self.stages]
        return data


@dataclass(frozen=True)
class StageResult:
    """Artifacts of one identified stage."""

    cycle: int
    model: dmdc.DmdcModel
    metrics: GraphMetrics
    one_step_rmse: float


@dataclass(frozen=True)
class CampaignReport:
    """Ordered per-stage metric rows plus the provenance that produced them."""

    rows: tuple[dict, ...]
    config_echo: dict = field(repr=False)
    tool_version: str = __version__

    def healthy_cycle(self) -> int:
        return int(self.rows[0]["cycle"])


def default_config(**overrides) -> CampaignConfig:
    """The shipped synthetic campaign: cycles 0..360 every 20, simulated."""
    stages = overrides.pop(
        "stages", tuple(StageSpec(cycle=c) for c in range(0, 361, 20))
    )
    return CampaignConfig(stages=stages, **overrides)


_CONFIG_KEYS = {
    "stages",
    "embedding_dim",
    "centering",
    "rank_state",
    "rank_joint",
    "energy_mode",
    "epsilon",
    "output_dir",
    "seed",
    "noise_std",
}


def load_config(path: Path | str, overrides: dict | None = None) -> CampaignConfig:
    """Build a config from a JSON document plus CLI overrides.

    Precedence: override > file value > built-in default. Unknown keys are
    rejected rather than ignored so typos surface immediately.
    """
    path = Path(path)
    try:
        raw = json.loads(path.read_text(encoding="utf-8"))
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config file {path} is not valid JSON: {exc}") from exc
    if not isinstance(raw, dict):
        raise ConfigError(f"config file {path} must hold a JSON object")
    return resolve_config(raw, overrides)


def resolve_config(file_values: dict | None, overrides: dict | None = None) -> CampaignConfig:
    merged: dict = {}
    for source in (file_values or {}), (overrides or {}):
        for key, value in source.items():
            if value is None:
                continue
            if key not in _CONFIG_KEYS:
                raise ConfigError(f"unknown config key {key!r}")
            merged[key] = value
    if "stages" in merged:
        merged["stages"] = _parse_stages(merged["stages"])
    try:
        return default_config(**merged)
    except (TypeError, ValueError) as exc:
        raise ConfigError(str(exc)) from exc


def _parse_stages(raw) -> tuple[StageSpec, ...]:
    if isinstance(raw, tuple) and all(isinstance(s, StageSpec) for s in raw):
        return raw
    stages = []
    for entry in raw:
        if isinstance(entry, StageSpec):
            stages.append(entry)
            continue
        if not isinstance(entry, dict) or "cycle" not in entry:
            raise ConfigError(f"stage entry must be an object with a 'cycle': {entry!r}")
        extra = set(entry) - {"cycle", "source"}
        if extra:
            raise ConfigError(f"unknown stage keys {sorted(extra)}")
        stages.append(StageSpec(cycle=int(entry["cycle"]), source=str(entry.get("source", SIMULATE))))
    return tuple(stages)


def simulate_stage(cycle: int, config: CampaignConfig) -> TimeSeries:
    """Synthesize one stage's telemetry at the configured noise level."""
    params = battery.degrade_params(
        battery.default_parameters(), cycle, battery.default_schedule()
    )
    rng = (
        np.random.default_rng((config.seed, cycle)) if config.noise_std > 0 else None
    )
    return battery.generate_hppc(
        params, battery.default_profile(), cycle, noise_std=config.noise_std, rng=rng
    )


def load_stage(spec: StageSpec, config: CampaignConfig) -> TimeSeries:
    if spec.source == SIMULATE:
        return simulate_stage(spec.cycle, config)
    return io.read_stage_csv(spec.source, cycle=spec.cycle)


def run_stage(series: TimeSeries, config: CampaignConfig) -> StageResult:
    """Identify one stage and measure its mode graph."""
    try:
        snapshots = embedding.build_snapshots(series, config.embedding_dim)
        if config.centering:
            snapshots, _ = embedding.center_snapshots(snapshots)
        model = dmdc.fit(snapshots, config.dmdc_config())
        metrics = compute_metrics(
            WeightedGraph(dmdc.mode_magnitude(model)), epsilon=config.epsilon
        )
        rmse = dmdc.training_rmse(model, snapshots)
    except CellgraphError as exc:
        raise StageError(series.cycle, exc) from exc
    return StageResult(
        cycle=series.cycle, model=model, metrics=metrics, one_step_rmse=rmse
    )


def report_row(result: StageResult) -> dict:
    """Flatten one stage result into a metrics-table row."""
    m = result.metrics
    return {
        "cycle": result.cycle,
        "mu": m.mu,
        "edges": m.edges,
        "connectivity": m.connectivity,
        "q_proxy": m.q_proxy,
        "n_rows": m.n_rows,
        "n_cols": m.n_cols,
        "one_step_rmse": result.one_step_rmse,
    }


def run_campaign(
    config: CampaignConfig, output_dir: Path | str | None = None
) -> tuple[CampaignReport, list[StageResult]]:
    """Run every stage and write the report files.

    Returns the assembled report and the per-stage artifacts. Outputs go to
    ``output_dir`` (defaulting to the configured one): ``metrics.csv``,
    ``report.json`` and one mode-surface CSV per stage. Pass ``output_dir``
    explicitly as None-disabling is not supported; stage failures abort the
    campaign wrapped in a :class:`StageError` naming the cycle.
    """
    out = Path(output_dir) if output_dir is not None else Path(config.output_dir)
    results = []
    for spec in config.stages:
        try:
            series = load_stage(spec, config)
        except CellgraphError as exc:
            raise StageError(spec.cycle, exc) from exc
        results.append(run_stage(series, config))
    report = CampaignReport(
        rows=tuple(report_row(r) for r in results),
        config_echo=config.echo(),
        tool_version=__version__,
    )
    try:
        out.mkdir(parents=True, exist_ok=True)
        for result in results:
            phase, mask = dmdc.mode_phase(result.model)
            io.write_modes_csv(
                dmdc.mode_magnitude(result.model),
                phase,
                mask,
                out / io.modes_filename(result.cycle),
            )
        export_report(report, out)
    except OSError as exc:
        raise CellgraphError(f"cannot write campaign outputs to {out}: {exc}") from exc
    return report, results


def export_report(report: CampaignReport, directory: Path | str) -> dict[str, Path]:
    """Write ``metrics.csv`` and ``report.json`` into ``directory``."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    metrics_path = io.write_metrics_csv(list(report.rows), directory / "metrics.csv")
    first, last = report.rows[0], report.rows[-1]
    summary = {
        "healthy_cycle": report.healthy_cycle(),
        "final_cycle": int(last["cycle"]),
        "connectivity_change": last["connectivity"] - first["connectivity"],
        "q_proxy_change": last["q_proxy"] - first["q_proxy"],
    }
    report_path = io.write_report_json(
        {
            "tool_version": report.tool_version,
            "config_echo": report.config_echo,
            "summary": summary,
            "rows": list(report.rows),
        },
        directory / "report.json",
    )
    return {"metrics": metrics_path, "report": report_path}
