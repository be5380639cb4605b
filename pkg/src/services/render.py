"""Binary portable pixmap (P6) rendering of field rasters with YAML sidecars."""

import json
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple, Union

import numpy as np
import yaml
from matplotlib import colormaps

from src.lib.logging_config import get_logger
from src.models.error_types import ExportError, ParameterError, RenderError
from src.services.sampling import Component, FieldRaster

logger = get_logger(__name__)

NORMALIZATIONS = ("linear", "log")
SIGNED = ("re", "im")
DIVERGING_MAP = "RdBu_r"
SEQUENTIAL_MAP = "viridis"
MISSING_RGB = (128, 128, 128)
LOG_FLOOR = 1e-6


def colormap_table(name: str) -> np.ndarray:
    """256 x 3 uint8 lookup table sampled from a matplotlib colormap."""
    try:
        cmap = colormaps[name]
    except KeyError:
        raise ParameterError("colormap", name, "unknown matplotlib colormap")
    rgba = cmap(np.linspace(0.0, 1.0, 256))
    return np.round(rgba[:, :3] * 255.0).astype(np.uint8)


def _normalize(q: np.ndarray, signed: bool, normalization: str, floor: float) -> Tuple[np.ndarray, float, float]:
    finite = q[np.isfinite(q)]
    top = float(np.max(np.abs(finite)))
    if top == 0.0:
        top = 1.0
    if normalization == "linear":
        return (q, -top, top) if signed else (q, 0.0, top)
    if signed:
        t = floor * top
        mapped = np.sign(q) * np.log10(1.0 + np.abs(q) / t)
        bound = float(np.log10(1.0 + top / t))
        return mapped, -bound, bound
    low = floor * top
    mapped = np.log10(np.maximum(q, low))
    return mapped, float(np.log10(low)), float(np.log10(top))


def render_pixmap(
    raster: FieldRaster,
    destination: Union[str, Path],
    quantity: str = "abs",
    component: Component = 0,
    normalization: str = "linear",
    colormap: Optional[str] = None,
    log_floor: float = LOG_FLOOR,
    assumed: Optional[List[str]] = None,
) -> Dict[str, Any]:
    """Write a P6 pixmap (rows = grid u, columns = grid v) and a ``.yaml`` sidecar.

    Signed quantities use a diverging map with symmetric bounds, moduli a
    sequential map on [0, max]. Missing pixels are gray.

    Args:
        raster: Sampled raster
        destination: Pixmap path; the sidecar is written next to it
        quantity: "re", "im", "abs" or "abs2"
        component: 0, 1, 2 or "norm"
        normalization: "linear" or "log"
        colormap: Override of the default matplotlib colormap name
        log_floor: Relative floor of the log scale
        assumed: Values not fixed by the preset, recorded in the sidecar

    Returns:
        The sidecar content

    Raises:
        RenderError: If no pixel is finite
        ExportError: If a file cannot be written
    """
    if normalization not in NORMALIZATIONS:
        raise ParameterError("normalization", normalization, f"expected one of {', '.join(NORMALIZATIONS)}")
    q = raster.quantity(component, quantity)
    valid = np.isfinite(q)
    if not valid.any():
        raise RenderError("raster has no finite pixels")

    signed = quantity in SIGNED
    cmap_name = colormap or (DIVERGING_MAP if signed else SEQUENTIAL_MAP)
    table = colormap_table(cmap_name)
    mapped, lo, hi = _normalize(np.where(valid, q, 0.0), signed, normalization, log_floor)
    index = np.clip(np.round((mapped - lo) / (hi - lo) * 255.0), 0, 255).astype(np.intp)
    rgb = table[index]
    rgb[~valid] = MISSING_RGB

    height, width = q.shape
    path = Path(destination)
    sidecar_path = path.with_suffix(".yaml")
    sidecar = {
        "image": {"path": path.name, "format": "P6", "width": int(width), "height": int(height), "maxval": 255},
        "quantity": quantity,
        "component": component,
        "normalization": normalization,
        "log_floor": float(log_floor) if normalization == "log" else None,
        "colormap": cmap_name,
        "bounds": [float(lo), float(hi)],
        "data_range": [float(np.min(q[valid])), float(np.max(q[valid]))],
        "missing_pixels": int((~valid).sum()),
        "provenance": json.loads(json.dumps(raster.meta, sort_keys=True, default=str)),
        "assumed": list(assumed or []),
    }
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "wb") as fh:
            fh.write(f"P6\n{width} {height}\n255\n".encode("ascii"))
            fh.write(np.ascontiguousarray(rgb, dtype=np.uint8).tobytes())
        with open(sidecar_path, "w", encoding="utf-8") as fh:
            yaml.safe_dump(sidecar, fh, sort_keys=True, default_flow_style=False)
    except OSError as e:
        raise ExportError(str(path), e)
    logger.info(f"Rendered {width}x{height} {quantity}[{component}] pixmap to {path}")
    return sidecar


def read_pixmap(source: Union[str, Path]) -> np.ndarray:
    """Read a P6 file written by render_pixmap into a (height, width, 3) uint8 array."""
    data = Path(source).read_bytes()
    magic, dims, maxval, body = data.split(b"\n", 3)
    if magic != b"P6" or maxval != b"255":
        raise RenderError(f"not an 8-bit P6 pixmap: {source}")
    width, height = (int(t) for t in dims.split())
    return np.frombuffer(body, dtype=np.uint8).reshape(height, width, 3)


__all__ = ["render_pixmap", "read_pixmap", "colormap_table", "NORMALIZATIONS"]
