"""Command line interface for evaluating, verifying and rendering accelerating beams.

Exit codes: 0 success, 1 failed check or evaluation error, 2 usage or configuration error.
"""

import argparse
import os
import sys
from pathlib import Path
from typing import Any, Dict, List, Optional

import yaml

from src.lib.kelvin import KelvinMap
from src.lib.logging_config import get_logger, run_context, setup_logging
from src.lib.verify import (
    FAMILIES,
    cyl_sample_points,
    kelvin_sample_points,
    scaling_study,
    sph_sample_points,
)
from src.models.config import RunConfig
from src.models.error_types import BeamError, ConfigError, ParameterError
from src.models.params import FDScheme
from src.services.figures import FIGURES, figure_checks, run_figures, run_preset
from src.services.render import NORMALIZATIONS, render_pixmap
from src.services.sampling import QUANTITIES, read_csv
from src.services.suites import SUITES, run_suite, within

logger = get_logger(__name__)

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2

BEAM_PRESETS = {"cyl": "cyl_quick", "sph": "fig2", "kelvin": "fig4_outer"}
SLOPE_BRACKETS = {"cyl": (-1.4, -0.6), "kelvin": (-1.5, -0.5), "plane": (-0.2, 0.2)}


class UsageError(Exception):
    """Bad command line input detected after argument parsing."""


def _emit(data: Dict[str, Any]) -> None:
    sys.stdout.write(yaml.safe_dump(data, sort_keys=False, default_flow_style=False, explicit_start=True))
    sys.stdout.flush()


def _component(value: str):
    if value == "norm":
        return value
    if value in ("0", "1", "2"):
        return int(value)
    raise argparse.ArgumentTypeError(f"component must be 0, 1, 2 or 'norm', got '{value}'")


def _taus(value: str) -> List[float]:
    try:
        return [float(t) for t in value.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a comma-separated list of numbers, got '{value}'")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="beams",
        description="Accelerating electromagnetic beams: evaluation, verification and figures",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  # Reproduce the figure presets into ./out
  python run.py figures --which all --out out

  # Run a verification suite
  python run.py verify --suite kelvin

  # Residual scaling study
  python run.py sweep --beam cyl --taus 10,20,40,80

  # Debug logging as JSON
  LOG_LEVEL=DEBUG LOG_JSON=true python run.py verify --suite dirac
        """,
    )
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="Presets YAML file (default: config/presets.yaml)")
    common.add_argument("--preset", help="Preset name from the config file")
    common.add_argument("--seed", type=int, help="Random seed for sample sets")
    common.add_argument("--workers", type=int, help="Worker threads for point evaluation")

    sub = parser.add_subparsers(dest="command", metavar="command")
    sub.required = True

    p_eval = sub.add_parser("eval", parents=[common], help="Sample a beam on a preset grid")
    p_eval.add_argument("--beam", help=f"Beam kind ({', '.join(BEAM_PRESETS)}); picks its default preset")
    p_eval.add_argument("--tau", type=float, help="Override the preset's tau")
    p_eval.add_argument("--out", default="out", help="Output directory (default: out)")

    p_verify = sub.add_parser("verify", parents=[common], help="Run a named check suite")
    p_verify.add_argument("--suite", required=True, help=f"One of: {', '.join(SUITES)}, all")

    p_sweep = sub.add_parser("sweep", parents=[common], help="Residual scaling study over a tau list")
    p_sweep.add_argument("--beam", required=True, help=f"One of: {', '.join(FAMILIES)}")
    p_sweep.add_argument("--taus", type=_taus, default=None, help="Comma-separated tau values")
    p_sweep.add_argument("--samples", type=int, default=40, help="Sample points per tau (>= 30)")
    p_sweep.add_argument(
        "--fd-step", type=float, dest="fd_step", help="Relative finite-difference step of the residual"
    )

    p_render = sub.add_parser("render", parents=[common], help="Render a raster CSV to a P6 pixmap")
    p_render.add_argument("raster", help="CSV written by eval or figures")
    p_render.add_argument("--output", help="Pixmap path (default: raster path with .ppm)")
    p_render.add_argument("--quantity", choices=QUANTITIES, default="abs")
    p_render.add_argument("--component", type=_component, default=0)
    p_render.add_argument("--normalization", choices=NORMALIZATIONS, default="linear")
    p_render.add_argument("--colormap", help="matplotlib colormap name")

    p_fig = sub.add_parser("figures", parents=[common], help="Reproduce figure presets")
    p_fig.add_argument("--which", default="all", help=f"One of: {', '.join(FIGURES)}")
    p_fig.add_argument("--out", default="out", help="Output directory (default: out)")
    return parser


def _load_config(args: argparse.Namespace, preset: Optional[str] = None) -> RunConfig:
    overrides = {
        "config": args.config,
        "preset": preset or args.preset,
        "seed": args.seed,
        "fd_step": getattr(args, "fd_step", None),
        "workers": args.workers,
    }
    config = RunConfig(overrides=overrides)
    _emit({"resolved_config": config.snapshot()})
    return config


def _checks_out(checks) -> int:
    return EXIT_OK if all(c.passed for c in checks) else EXIT_FAILED


def cmd_eval(args: argparse.Namespace) -> int:
    preset = args.preset
    if args.beam is not None:
        if args.beam not in BEAM_PRESETS:
            raise UsageError(f"unknown beam '{args.beam}' (valid: {', '.join(BEAM_PRESETS)})")
        preset = preset or BEAM_PRESETS[args.beam]
    config = _load_config(args, preset)
    if config.preset is None:
        raise ConfigError("no preset selected and the config file has no default_preset")
    profile = config.preset
    if args.beam is not None and profile.beam != args.beam:
        raise UsageError(f"preset '{profile.name}' is a {profile.beam} beam, not {args.beam}")
    if args.tau is not None:
        profile = profile.model_copy(update={"params": {**profile.params, "tau": args.tau}})
    result = run_preset(profile.name, config, args.out, profile=profile)
    _emit(
        {
            "preset": profile.name,
            "csv": str(result.csv_path),
            "pixmap": str(result.pixmap_path),
            "sidecar": str(result.sidecar_path),
            "stats": result.stats,
        }
    )
    return EXIT_OK


def cmd_verify(args: argparse.Namespace) -> int:
    names = list(SUITES) if args.suite == "all" else [args.suite]
    for name in names:
        if name not in SUITES:
            raise UsageError(f"unknown suite '{name}' (valid: {', '.join(SUITES)}, all)")
    config = _load_config(args)
    code = EXIT_OK
    for name in names:
        report = run_suite(name, seed=config.seed, workers=config.workers)
        _emit({"report": report.as_dict()})
        if not report.passed:
            code = EXIT_FAILED
    return code


def _sweep_samples(beam: str, config: RunConfig, n: int, taus: List[float]):
    if beam == "kelvin":
        return kelvin_sample_points(config.seed, n, KelvinMap(R=5.0, annulus_factor=config.annulus_factor))
    if beam == "sph":
        return sph_sample_points(config.seed, n)
    return cyl_sample_points(config.seed, n, tau_max=max(taus))


def cmd_sweep(args: argparse.Namespace) -> int:
    if args.beam not in FAMILIES:
        raise UsageError(f"unknown beam '{args.beam}' (valid: {', '.join(FAMILIES)})")
    config = _load_config(args)
    taus = args.taus or ([4.0, 8.0, 16.0] if args.beam == "kelvin" else [10.0, 20.0, 40.0, 80.0])
    samples = _sweep_samples(args.beam, config, args.samples, taus)
    study = scaling_study(
        FAMILIES[args.beam](),
        taus,
        samples,
        scheme=FDScheme(h=config.fd_step),
        workers=config.workers,
        name=args.beam,
    )
    logger.info(f"{args.beam} scaling\n{study.table()}")
    _emit({"study": study.model_dump(mode="json")})
    if args.beam in SLOPE_BRACKETS:
        lo, hi = SLOPE_BRACKETS[args.beam]
        check = within(f"{args.beam} slope", study.slope, lo, hi)
        _emit({"check": check.model_dump(mode="json")})
        return _checks_out([check])
    return EXIT_OK


def cmd_render(args: argparse.Namespace) -> int:
    _load_config(args)
    raster = read_csv(args.raster)
    output = Path(args.output) if args.output else Path(args.raster).with_suffix(".ppm")
    sidecar = render_pixmap(
        raster,
        output,
        quantity=args.quantity,
        component=args.component,
        normalization=args.normalization,
        colormap=args.colormap,
    )
    _emit({"pixmap": str(output), "bounds": sidecar["bounds"], "colormap": sidecar["colormap"]})
    return EXIT_OK


def cmd_figures(args: argparse.Namespace) -> int:
    if args.which not in FIGURES:
        raise UsageError(f"unknown figure '{args.which}' (valid: {', '.join(FIGURES)})")
    config = _load_config(args)
    results = run_figures(args.which, config, args.out)
    checks = figure_checks(results)
    _emit(
        {
            "artifacts": {
                name: {"csv": str(r.csv_path), "pixmap": str(r.pixmap_path), "sidecar": str(r.sidecar_path)}
                for name, r in results.items()
            },
            "checks": [c.model_dump(mode="json") for c in checks],
        }
    )
    return _checks_out(checks)


COMMANDS = {
    "eval": cmd_eval,
    "verify": cmd_verify,
    "sweep": cmd_sweep,
    "render": cmd_render,
    "figures": cmd_figures,
}


def main(argv: Optional[List[str]] = None) -> int:
    """Parse arguments, run the command and return its exit code."""
    setup_logging(
        level=os.getenv("LOG_LEVEL", "INFO"),
        json_format=os.getenv("LOG_JSON", "false").lower() == "true",
        log_file=os.getenv("LOG_FILE"),
    )
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_USAGE if e.code not in (0, None) else EXIT_OK

    try:
        with run_context(command=args.command, preset=args.preset, seed=args.seed):
            return COMMANDS[args.command](args)
    except (UsageError, ConfigError) as e:
        sys.stderr.write(f"beams {args.command}: error: {e}\n")
        return EXIT_USAGE
    except ParameterError as e:
        sys.stderr.write(f"beams {args.command}: error: {e.message}\n")
        return EXIT_USAGE
    except BeamError as e:
        logger.error(f"{args.command} failed: {e.message}")
        return EXIT_FAILED


if __name__ == "__main__":
    sys.exit(main())
