"""Mode-graph degradation analysis for battery pulse telemetry.

The package turns raw current/voltage pulse trains into a small set of
graph metrics that track cell aging: telemetry is delay-embedded into
snapshot matrices, a low-rank input-aware linear model is fitted, and the
magnitude of its mode matrix is read as a weighted bipartite graph whose
connectivity and strength dispersion evolve with degradation.
"""

__version__ = "0.1.0"

from .battery import (
    DegradationSchedule,
    EcmParameters,
    EcmState,
    HppcProfile,
    TimeSeries,
    default_ocv_table,
    default_parameters,
    default_profile,
    default_schedule,
    degrade_params,
    generate_hppc,
    ocv_lookup,
    step_ecm,
)
from .dmdc import (
    DmdcConfig,
    DmdcModel,
    fit,
    mode_magnitude,
    mode_phase,
    predict_one_step,
    training_rmse,
)
from .embedding import (
    SnapshotSet,
    build_snapshots,
    center_snapshots,
    from_matrices,
    uncenter_snapshots,
)
from .errors import (
    CellgraphError,
    ConfigError,
    DataError,
    InfeasibleRankError,
    InsufficientDataError,
    NumericalError,
    RankDeficiencyError,
    StageError,
)
from .graph_metrics import (
    GraphMetrics,
    WeightedGraph,
    adaptive_threshold,
    binarize,
    compute_metrics,
    connectivity,
    modularity_proxy,
    node_strengths,
)
from .pipeline import (
    CampaignConfig,
    CampaignReport,
    StageResult,
    StageSpec,
    default_config,
    load_config,
    resolve_config,
    run_campaign,
    run_stage,
    simulate_stage,
)

__all__ = [
    "__version__",
    "CampaignConfig",
    "CampaignReport",
    "CellgraphError",
    "ConfigError",
    "DataError",
    "DegradationSchedule",
    "DmdcConfig",
    "DmdcModel",
    "EcmParameters",
    "EcmState",
    "GraphMetrics",
    "HppcProfile",
    "InfeasibleRankError",
    "InsufficientDataError",
    "NumericalError",
    "RankDeficiencyError",
    "SnapshotSet",
    "StageError",
    "StageResult",
    "StageSpec",
    "TimeSeries",
    "WeightedGraph",
    "adaptive_threshold",
    "binarize",
    "build_snapshots",
    "center_snapshots",
    "compute_metrics",
    "connectivity",
    "default_config",
    "default_ocv_table",
    "default_parameters",
    "default_profile",
    "default_schedule",
    "degrade_params",
    "fit",
    "from_matrices",
    "generate_hppc",
    "load_config",
    "mode_magnitude",
    "mode_phase",
    "modularity_proxy",
    "node_strengths",
    "ocv_lookup",
    "predict_one_step",
    "resolve_config",
    "run_campaign",
    "run_stage",
    "simulate_stage",
    "step_ecm",
    "training_rmse",
    "uncenter_snapshots",
]
