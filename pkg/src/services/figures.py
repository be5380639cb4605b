"""Figure presets: build the beam field, sample it, export CSV and pixmap, and run structural checks."""

from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Tuple, Union

import numpy as np

from src.lib.beams import cyl_beam, sph_beam
from src.lib.fieldcore import cart_cyl
from src.lib.kelvin import KelvinMap, kelvin_profile, physical_beam
from src.lib.logging_config import get_logger
from src.models.config import PresetProfile, RunConfig
from src.models.error_types import ConfigError
from src.models.medium import constant_medium
from src.models.params import CylBeamParams, SphBeamParams, VirtualBeamParams
from src.models.reports import CheckResult
from src.services.render import render_pixmap
from src.services.sampling import (
    FieldRaster,
    export_csv,
    half_max_area,
    peak_is_interior,
    peak_value,
    row_deviation,
    sample_grid,
    top_decile_ring_fraction,
)
from src.services.suites import below, flag, within

logger = get_logger(__name__)

FIGURES: Dict[str, List[str]] = {
    "fig1": ["fig1"],
    "fig2": ["fig2"],
    "fig4": ["fig4_outer", "fig4_inner"],
}
FIGURES["all"] = [name for group in ("fig1", "fig2", "fig4") for name in FIGURES[group]]

FieldFn = Callable[[np.ndarray], np.ndarray]


@dataclass
class FigureResult:
    """Artifacts and raster statistics of one rendered preset."""

    name: str
    csv_path: Path
    pixmap_path: Path
    sidecar_path: Path
    raster: FieldRaster
    stats: Dict[str, float] = field(default_factory=dict)


def build_field(profile: PresetProfile, config: RunConfig) -> Tuple[FieldFn, Dict[str, Any]]:
    """Field callable and parameter snapshot for a preset.

    Raises:
        ConfigError: If the preset parameters do not validate
    """
    bg = config.background
    params = dict(profile.params)
    if profile.beam == "kelvin" and profile.strip_carrier:
        raise ConfigError(f"Preset '{profile.name}': strip_carrier applies to cyl and sph beams only")
    try:
        if profile.beam == "kelvin":
            return _kelvin_field(profile, params, config)
        medium = constant_medium(bg["mu0"], bg["eps0"], bg.get("sigma0", 0.0), bg["omega"])
        if profile.beam == "cyl":
            beam, model = cyl_beam, CylBeamParams(**{"k": medium.k, **params}, medium=medium)
        else:
            beam, model = sph_beam, SphBeamParams(**{"omega": bg["omega"], **params}, medium=medium)
    except ValueError as e:
        raise ConfigError(f"Invalid parameters for preset '{profile.name}': {e}")

    pick = "H" if profile.field == "H" else "E"
    rho = model.rho if profile.strip_carrier else 0.0

    def fn(x: np.ndarray) -> np.ndarray:
        p = cart_cyl(x, config.r_min)
        value = getattr(beam(model, p, config.r_min), pick)
        return value * np.exp(-1j * rho * p.theta) if rho else value

    return fn, {**model.snapshot(), "strip_carrier": profile.strip_carrier}


def _kelvin_field(profile: PresetProfile, params: Dict[str, Any], config: RunConfig) -> Tuple[FieldFn, Dict[str, Any]]:
    bg = config.background
    km = KelvinMap(R=float(params.pop("R", 5.0)), annulus_factor=config.annulus_factor, r_min=config.r_min)
    medium = {key: bg[key] for key in ("mu0", "eps0", "sigma0", "omega") if key in bg}
    if "transverse" in params:
        vp = VirtualBeamParams.from_transverse(params.pop("tau"), params.pop("transverse"), **medium, **params)
    else:
        vp = VirtualBeamParams(**medium, **params)
    snapshot = {**vp.snapshot(), "R": km.R, "annulus_factor": km.annulus_factor}
    if profile.field == "profile":
        return (lambda x: kelvin_profile(vp, km, x)), snapshot
    pick = "H" if profile.field == "H" else "E"
    return (lambda x: getattr(physical_beam(vp, km, x), pick)), snapshot


def run_preset(
    name: str,
    config: RunConfig,
    out_dir: Union[str, Path],
    profile: Optional[PresetProfile] = None,
) -> FigureResult:
    """Sample a preset on its grid and write ``<name>.csv``, ``<name>.ppm`` and ``<name>.yaml``.

    ``profile`` replaces the stored preset of that name (used for CLI overrides).
    """
    profile = profile or config.get_preset(name)
    fn, params_snapshot = build_field(profile, config)
    grid = profile.grid_spec()
    meta = {
        "preset": name,
        "seed": config.seed,
        "params": params_snapshot,
        "field": profile.field,
        "render": profile.render.model_dump(mode="json"),
        "config": {k: v for k, v in config.snapshot().items() if k != "preset"},
    }
    raster = sample_grid(grid, fn, meta=meta, workers=config.workers)

    out = Path(out_dir)
    csv_path = export_csv(raster, out / f"{name}.csv")
    pixmap_path = out / f"{name}.ppm"
    opts = profile.render
    render_pixmap(
        raster,
        pixmap_path,
        quantity=opts.quantity,
        component=opts.component,
        normalization=opts.normalization,
        colormap=opts.colormap,
        assumed=profile.assumed,
    )
    stats = {
        "peak": peak_value(raster, opts.component, opts.quantity),
        "half_max_area": float(half_max_area(raster, opts.component, opts.quantity)),
        "row_deviation": row_deviation(raster, opts.component, opts.quantity),
        "missing_fraction": raster.missing_fraction,
    }
    if grid.kind in ("annulus", "plane", "circle"):
        stats["ring_fraction"] = top_decile_ring_fraction(raster, opts.component, opts.quantity)
        stats["peak_interior"] = float(peak_is_interior(raster, opts.component, opts.quantity))
    logger.info(f"Preset '{name}': " + ", ".join(f"{k}={v:.6g}" for k, v in stats.items()))
    return FigureResult(name, csv_path, pixmap_path, pixmap_path.with_suffix(".yaml"), raster, stats)


def run_figures(which: str, config: RunConfig, out_dir: Union[str, Path]) -> Dict[str, FigureResult]:
    """Render every preset of a figure group ("fig1", "fig2", "fig4" or "all").

    Raises:
        ConfigError: If the group is unknown
    """
    if which not in FIGURES:
        raise ConfigError(f"Unknown figure '{which}' (expected one of {', '.join(FIGURES)})")
    return {name: run_preset(name, config, out_dir) for name in FIGURES[which]}


def figure_checks(results: Dict[str, FigureResult]) -> List[CheckResult]:
    """Structural checks for whichever figure presets are present."""
    checks: List[CheckResult] = []
    if "fig1" in results:
        fraction = results["fig1"].stats.get("ring_fraction", 0.0)
        checks.append(within("fig1 top decile inside ring", fraction, 0.9, 1.0, "band 0.7-1.3 r_peak"))
        interior = results["fig1"].stats.get("peak_interior", 0.0) == 1.0
        checks.append(flag("fig1 peak off the grid edge", interior, "peak radius strictly inside the sampled span"))
    if "fig2" in results:
        checks.append(below("fig2 intensity constant on circles", results["fig2"].stats["row_deviation"], 1e-12))
    if "fig4_outer" in results and "fig4_inner" in results:
        outer, inner = results["fig4_outer"].stats, results["fig4_inner"].stats
        checks.append(
            flag(
                "fig4 lobe shrinks",
                inner["half_max_area"] < outer["half_max_area"],
                f"inner={inner['half_max_area']:.0f} px, outer={outer['half_max_area']:.0f} px",
            )
        )
        checks.append(
            flag(
                "fig4 peak intensifies",
                inner["peak"] > outer["peak"],
                f"inner={inner['peak']:.6g}, outer={outer['peak']:.6g}",
            )
        )
    return checks


__all__ = ["FIGURES", "FigureResult", "build_field", "run_preset", "run_figures", "figure_checks"]
