"""Command line front end: simulate, analyze, campaign and export-modes.

Exit codes: 0 on success, 1 for configuration and usage problems, 2 for
data and filesystem problems, 3 for numerical failures.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from . import __version__, dmdc, figures, io, pipeline
from .errors import (
    CellgraphError,
    ConfigError,
    DataError,
    NumericalError,
    StageError,
)

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_DATA = 2
EXIT_NUMERICAL = 3

_INT_KEYS = {"cycle", "edges", "n_rows", "n_cols"}


class _Parser(argparse.ArgumentParser):
    """Argument parser that reports usage problems instead of exiting."""

    def error(self, message):
        raise ConfigError(message)


def _rank_value(text: str):
    """Rank flags accept a count ("12") or an energy fraction ("0.99")."""
    try:
        return int(text)
    except ValueError:
        pass
    try:
        return float(text)
    except ValueError:
        raise ConfigError(f"invalid rank value {text!r}") from None


def parse_cycles(text: str) -> tuple[int, ...]:
    """Parse a cycle list: either "0,20,40" or an inclusive "start:stop:step"."""
    text = text.strip()
    try:
        if ":" in text:
            parts = [int(p) for p in text.split(":")]
            if len(parts) == 2:
                start, stop, step = parts[0], parts[1], 1
            elif len(parts) == 3:
                start, stop, step = parts
            else:
                raise ValueError(text)
            if step <= 0 or stop < start:
                raise ValueError(text)
            return tuple(range(start, stop + 1, step))
        return tuple(int(p) for p in text.split(","))
    except ValueError:
        raise ConfigError(
            f"invalid cycles spec {text!r}: expected 'a,b,c' or 'start:stop:step'"
        ) from None


def _add_analysis_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--embedding-dim", type=int, default=None,
                        help="number of delay rows in the snapshot matrices")
    parser.add_argument("--rank-state", type=_rank_value, default=None,
                        help="state-space rank: energy fraction or count")
    parser.add_argument("--rank-joint", type=_rank_value, default=None,
                        help="joint-space rank: energy fraction or count")
    parser.add_argument("--rank-mode", choices=("energy", "count"), default=None,
                        help="interpret rank values as energy fractions or counts")
    parser.add_argument("--centering", action=argparse.BooleanOptionalAction,
                        default=None, help="subtract per-row means before fitting")
    parser.add_argument("--epsilon", type=float, default=None,
                        help="regularizer in the modularity proxy denominator")


def _add_noise_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--seed", type=int, default=None,
                        help="base seed for simulated measurement noise")
    parser.add_argument("--noise-std", type=float, default=None,
                        help="Gaussian voltage noise amplitude in volts")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="cellgraph",
                     description="Mode-graph degradation analysis of cell telemetry.")
    parser.add_argument("--version", action="version", version=f"cellgraph {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("simulate",
                       help="synthesize one stage of pulse-train telemetry")
    p.add_argument("--cycle", type=int, default=0, help="aging cycle to simulate")
    p.add_argument("--output-dir", default=".", help="directory for the stage CSV")
    _add_noise_flags(p)
    p.set_defaults(handler=_cmd_simulate)

    p = sub.add_parser("analyze",
                       help="fit one stage CSV and print its graph metrics")
    p.add_argument("stage_csv", help="stage telemetry CSV to analyze")
    p.add_argument("--cycle", type=int, default=None,
                   help="cycle label override (default: from the filename)")
    p.add_argument("--output-dir", default=None,
                   help="also write the mode CSV and mode-surface figure here")
    _add_analysis_flags(p)
    p.set_defaults(handler=_cmd_analyze)

    p = sub.add_parser("campaign",
                       help="run a multi-stage aging campaign and write the report")
    p.add_argument("--config", default=None, help="JSON campaign configuration file")
    p.add_argument("--cycles", default=None,
                   help="simulated cycles, e.g. '0:360:20' or '0,40,80'")
    p.add_argument("--output-dir", default=None, help="directory for all outputs")
    p.add_argument("--figures", action=argparse.BooleanOptionalAction, default=True,
                   help="render trend figures alongside the delimited outputs")
    _add_analysis_flags(p)
    _add_noise_flags(p)
    p.set_defaults(handler=_cmd_campaign)

    p = sub.add_parser("export-modes",
                       help="fit one stage CSV and export its mode surfaces")
    p.add_argument("stage_csv", help="stage telemetry CSV to fit")
    p.add_argument("--cycle", type=int, default=None,
                   help="cycle label override (default: from the filename)")
    p.add_argument("--output-dir", default=".", help="directory for the mode CSV")
    p.add_argument("--figure", action=argparse.BooleanOptionalAction, default=False,
                   help="also render the mode-surface figure")
    _add_analysis_flags(p)
    p.set_defaults(handler=_cmd_export_modes)

    return parser


def _collect_overrides(args: argparse.Namespace) -> dict:
    """Map explicitly given flags onto configuration keys."""
    overrides = {}
    for flag, key in (
        ("embedding_dim", "embedding_dim"),
        ("rank_state", "rank_state"),
        ("rank_joint", "rank_joint"),
        ("centering", "centering"),
        ("epsilon", "epsilon"),
        ("seed", "seed"),
        ("noise_std", "noise_std"),
        ("output_dir", "output_dir"),
    ):
        value = getattr(args, flag, None)
        if value is not None:
            overrides[key] = value
    rank_mode = getattr(args, "rank_mode", None)
    if rank_mode is not None:
        overrides["energy_mode"] = rank_mode == "energy"
    return overrides


def _stage_config(args: argparse.Namespace, cycle: int) -> pipeline.CampaignConfig:
    overrides = _collect_overrides(args)
    overrides.pop("output_dir", None)
    overrides["stages"] = ({"cycle": cycle},)
    return pipeline.resolve_config(None, overrides)


def _print_metrics(row: dict) -> None:
    for key in io.METRICS_HEADER.split(","):
        value = row[key]
        text = str(int(value)) if key in _INT_KEYS else io.fmt(value)
        print(f"{key}={text}")


def _cmd_simulate(args: argparse.Namespace) -> None:
    config = pipeline.resolve_config(
        None,
        {
            "stages": ({"cycle": args.cycle},),
            "seed": args.seed,
            "noise_std": args.noise_std,
        },
    )
    series = pipeline.simulate_stage(args.cycle, config)
    out = Path(args.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    path = io.write_stage_csv(series, out / io.stage_filename(args.cycle))
    print(f"wrote {path}")


def _load_labeled_stage(args: argparse.Namespace):
    series = io.read_stage_csv(args.stage_csv, cycle=args.cycle)
    return series, _stage_config(args, series.cycle)


def _cmd_analyze(args: argparse.Namespace) -> None:
    series, config = _load_labeled_stage(args)
    result = pipeline.run_stage(series, config)
    _print_metrics(pipeline.report_row(result))
    if args.output_dir is not None:
        out = Path(args.output_dir)
        out.mkdir(parents=True, exist_ok=True)
        phase, mask = dmdc.mode_phase(result.model)
        magnitude = dmdc.mode_magnitude(result.model)
        path = io.write_modes_csv(magnitude, phase, mask, out / io.modes_filename(series.cycle))
        print(f"wrote {path}")
        fig_path = figures.plot_mode_surfaces(
            magnitude, phase, mask, out / f"modes_{series.cycle}.png", cycle=series.cycle
        )
        print(f"wrote {fig_path}")


def _cmd_export_modes(args: argparse.Namespace) -> None:
    series, config = _load_labeled_stage(args)
    result = pipeline.run_stage(series, config)
    out = Path(args.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    phase, mask = dmdc.mode_phase(result.model)
    magnitude = dmdc.mode_magnitude(result.model)
    path = io.write_modes_csv(magnitude, phase, mask, out / io.modes_filename(series.cycle))
    print(f"wrote {path}")
    if args.figure:
        fig_path = figures.plot_mode_surfaces(
            magnitude, phase, mask, out / f"modes_{series.cycle}.png", cycle=series.cycle
        )
        print(f"wrote {fig_path}")


def _cmd_campaign(args: argparse.Namespace) -> None:
    overrides = _collect_overrides(args)
    if args.cycles is not None:
        overrides["stages"] = tuple({"cycle": c} for c in parse_cycles(args.cycles))
    if args.config is not None:
        config = pipeline.load_config(args.config, overrides)
    else:
        config = pipeline.resolve_config(None, overrides)
    report, _ = pipeline.run_campaign(config)
    for row in report.rows:
        print(
            f"cycle {row['cycle']}: connectivity={io.fmt(row['connectivity'])} "
            f"q_proxy={io.fmt(row['q_proxy'])} rmse={io.fmt(row['one_step_rmse'])}"
        )
    out = Path(config.output_dir)
    print(f"wrote {out / 'metrics.csv'}")
    print(f"wrote {out / 'report.json'}")
    if args.figures:
        for path in figures.render_campaign_figures(list(report.rows), out).values():
            print(f"wrote {path}")


def _exit_code(exc: CellgraphError) -> int:
    if isinstance(exc, StageError) and exc.cause is not None:
        inner = exc.cause
        if isinstance(inner, CellgraphError):
            return _exit_code(inner)
        return EXIT_NUMERICAL
    if isinstance(exc, ConfigError):
        return EXIT_CONFIG
    if isinstance(exc, NumericalError):
        return EXIT_NUMERICAL
    if isinstance(exc, DataError):
        return EXIT_DATA
    return EXIT_DATA


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        args.handler(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except CellgraphError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return _exit_code(exc)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except np.linalg.LinAlgError as exc:
        print(f"error: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    return EXIT_OK


def entrypoint() -> None:
    sys.exit(main(sys.argv[1:]))


if __name__ == "__main__":
    entrypoint()
