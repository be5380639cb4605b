"""Grid sampling of complex vector fields, CSV export/import and raster statistics."""

import csv
import json
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable, Dict, Optional, Tuple, Union

import numpy as np

from src.lib.logging_config import carry_context, get_logger, log_duration
from src.models.error_types import DomainError, ExportError, FieldEvaluationError, ParameterError, SamplingError
from src.models.params import AnnulusGrid, CircleGrid, PlaneGrid, SphereGrid, parse_grid

logger = get_logger(__name__)

MISSING_LIMIT = 0.05
CSV_FORMAT = "beams-raster/1"
CSV_HEADER = ["u", "v", "x1", "x2", "x3", "re0", "im0", "re1", "im1", "re2", "im2"]
QUANTITIES = ("re", "im", "abs", "abs2")

Grid = Union[PlaneGrid, SphereGrid, AnnulusGrid, CircleGrid]
Component = Union[int, str]


@dataclass
class FieldRaster:
    """Field values on a grid, indexed [i_u, i_v], with a missing-point mask.

    Attributes:
        grid: Grid the raster was sampled on (None if it could not be recovered)
        u: Row coordinates
        v: Column coordinates
        points: Cartesian sample points, shape (n_u, n_v, 3)
        values: Complex field values, shape (n_u, n_v, 3); NaN where missing
        missing: Boolean mask of points outside the field domain
        meta: Provenance (beam parameters, seed, selectors)
        violations: Count of missing points per violated constraint
    """

    grid: Optional[Grid]
    u: np.ndarray
    v: np.ndarray
    points: np.ndarray
    values: np.ndarray
    missing: np.ndarray
    meta: Dict[str, Any] = field(default_factory=dict)
    violations: Dict[str, int] = field(default_factory=dict)

    @property
    def shape(self) -> Tuple[int, int]:
        return self.missing.shape

    @property
    def missing_fraction(self) -> float:
        return float(self.missing.sum()) / self.missing.size

    def quantity(self, component: Component = 0, quantity: str = "abs") -> np.ndarray:
        """Real 2D array of the selected quantity; NaN at missing points.

        ``component`` is 0, 1, 2 or "norm" (Hermitian norm, only with abs/abs2).
        """
        if quantity not in QUANTITIES:
            raise ParameterError("quantity", quantity, f"expected one of {', '.join(QUANTITIES)}")
        if component == "norm":
            if quantity not in ("abs", "abs2"):
                raise ParameterError("component", component, "the norm has no real or imaginary part")
            norm2 = np.sum(np.abs(self.values) ** 2, axis=-1)
            out = norm2 if quantity == "abs2" else np.sqrt(norm2)
        else:
            if component not in (0, 1, 2):
                raise ParameterError("component", component, "expected 0, 1, 2 or 'norm'")
            c = self.values[..., component]
            out = {"re": c.real, "im": c.imag, "abs": np.abs(c), "abs2": np.abs(c) ** 2}[quantity]
        out = np.array(out, dtype=float)
        out[self.missing] = np.nan
        return out


def _as_complex3(value: Any) -> np.ndarray:
    arr = np.atleast_1d(np.asarray(value, dtype=complex)).ravel()
    if arr.size > 3:
        raise ParameterError("field", arr.size, "fields must return a scalar or at most 3 components")
    out = np.zeros(3, dtype=complex)
    out[: arr.size] = arr
    return out


def sample_grid(
    spec: Grid,
    field_fn: Callable[[np.ndarray], Any],
    meta: Optional[Dict[str, Any]] = None,
    workers: int = 1,
    missing_limit: float = MISSING_LIMIT,
) -> FieldRaster:
    """Evaluate a field at every grid point in row-major order.

    Points raising DomainError or FieldEvaluationError are recorded as missing.
    The output never depends on ``workers``.

    Raises:
        SamplingError: If more than ``missing_limit`` of the points are missing
    """
    u, v, pts = spec.mesh()
    n_u, n_v = pts.shape[:2]
    flat = [pts[i, j] for i in range(n_u) for j in range(n_v)]

    def evaluate(x: np.ndarray):
        try:
            value = _as_complex3(field_fn(x))
        except (DomainError, FieldEvaluationError) as e:
            return None, e.constraint
        if not np.all(np.isfinite(value)):
            return None, "finite field value"
        return value, None

    with log_duration(logger, f"sample {spec.kind} grid {n_u}x{n_v}"):
        with ThreadPoolExecutor(max_workers=max(1, workers)) as pool:
            results = list(pool.map(carry_context(evaluate), flat))

    values = np.full((n_u * n_v, 3), np.nan + 1j * np.nan, dtype=complex)
    missing = np.zeros(n_u * n_v, dtype=bool)
    violations: Counter = Counter()
    for idx, (value, constraint) in enumerate(results):
        if value is None:
            missing[idx] = True
            violations[constraint] += 1
        else:
            values[idx] = value

    fraction = float(missing.mean())
    if fraction > missing_limit:
        worst = violations.most_common(1)[0][0]
        raise SamplingError(fraction, worst, missing_limit)
    if fraction > 0:
        logger.warning(f"{missing.sum()} of {missing.size} grid points missing ({dict(violations)})")

    return FieldRaster(
        grid=spec,
        u=np.asarray(u, dtype=float),
        v=np.asarray(v, dtype=float),
        points=pts,
        values=values.reshape(n_u, n_v, 3),
        missing=missing.reshape(n_u, n_v),
        meta=dict(meta or {}),
        violations=dict(sorted(violations.items())),
    )


# ============================================================================
# CSV export / import
# ============================================================================

def _fmt(x: float) -> str:
    return "%.17g" % x


def _comment(key: str, value: Any) -> str:
    return f"# {key}: {json.dumps(value, sort_keys=True, default=str)}\n"


def export_csv(raster: FieldRaster, destination: Union[str, Path]) -> Path:
    """Write the raster as CSV with ``# key: value`` provenance lines before the header.

    Raises:
        ExportError: If the destination cannot be written
    """
    path = Path(destination)
    n_u, n_v = raster.shape
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w", newline="", encoding="utf-8") as fh:
            fh.write(_comment("format", CSV_FORMAT))
            fh.write(_comment("shape", [n_u, n_v]))
            if raster.grid is not None:
                fh.write(_comment("grid", raster.grid.model_dump(mode="json")))
            fh.write(_comment("meta", raster.meta))
            fh.write(_comment("missing", int(raster.missing.sum())))
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(CSV_HEADER)
            for i in range(n_u):
                for j in range(n_v):
                    row = [raster.u[i], raster.v[j], *raster.points[i, j]]
                    for c in raster.values[i, j]:
                        row.extend([c.real, c.imag])
                    writer.writerow([_fmt(float(x)) for x in row])
    except OSError as e:
        raise ExportError(str(path), e)
    logger.info(f"Wrote {n_u * n_v} rows to {path}")
    return path


def read_csv(source: Union[str, Path]) -> FieldRaster:
    """Parse a CSV written by export_csv back into a FieldRaster.

    Raises:
        ParameterError: If the file is not a raster export
    """
    path = Path(source)
    comments: Dict[str, Any] = {}
    rows = []
    with open(path, newline="", encoding="utf-8") as fh:
        body = []
        for line in fh:
            if line.startswith("#"):
                key, _, value = line[1:].partition(":")
                comments[key.strip()] = json.loads(value)
            else:
                body.append(line)
        reader = csv.reader(body)
        header = next(reader, None)
        if header != CSV_HEADER:
            raise ParameterError("header", header, f"expected {','.join(CSV_HEADER)}")
        rows = [[float(x) for x in row] for row in reader if row]

    if "shape" not in comments:
        raise ParameterError("shape", None, "missing '# shape:' provenance line")
    n_u, n_v = comments["shape"]
    if len(rows) != n_u * n_v:
        raise ParameterError("rows", len(rows), f"expected {n_u * n_v} data rows")
    data = np.array(rows, dtype=float).reshape(n_u, n_v, len(CSV_HEADER))
    values = data[..., 5::2] + 1j * data[..., 6::2]
    missing = ~np.all(np.isfinite(data[..., 5:]), axis=-1)
    grid = parse_grid(comments["grid"]) if "grid" in comments else None
    return FieldRaster(
        grid=grid,
        u=data[:, 0, 0].copy(),
        v=data[0, :, 1].copy(),
        points=data[..., 2:5].copy(),
        values=values,
        missing=missing,
        meta=comments.get("meta", {}),
    )


# ============================================================================
# Raster statistics
# ============================================================================

def peak_value(raster: FieldRaster, component: Component = "norm", quantity: str = "abs") -> float:
    return float(np.nanmax(raster.quantity(component, quantity)))


def half_max_area(raster: FieldRaster, component: Component = "norm", quantity: str = "abs") -> int:
    """Number of pixels at or above half the peak."""
    q = raster.quantity(component, quantity)
    return int(np.sum(q >= 0.5 * np.nanmax(q)))


def top_decile_ring_fraction(
    raster: FieldRaster,
    component: Component = 0,
    quantity: str = "abs",
    band: Tuple[float, float] = (0.7, 1.3),
) -> float:
    """Fraction of top-decile pixels whose distance to the x1 axis is within band * r_peak."""
    q = raster.quantity(component, quantity)
    radius = np.hypot(raster.points[..., 1], raster.points[..., 2])
    peak_idx = np.unravel_index(np.nanargmax(q), q.shape)
    r_peak = radius[peak_idx]
    top = q >= np.nanpercentile(q, 90)
    inside = (radius >= band[0] * r_peak) & (radius <= band[1] * r_peak)
    return float(np.sum(top & inside)) / float(np.sum(top))


def peak_is_interior(raster: FieldRaster, component: Component = 0, quantity: str = "abs", rel: float = 1e-9) -> bool:
    """True when the peak's distance to the x1 axis lies strictly inside the sampled radial span."""
    q = raster.quantity(component, quantity)
    radius = np.hypot(raster.points[..., 1], raster.points[..., 2])
    r_peak = radius[np.unravel_index(np.nanargmax(q), q.shape)]
    lo, hi = float(np.min(radius)), float(np.max(radius))
    tol = rel * max(hi, 1.0)
    return bool(lo + tol < r_peak < hi - tol)


def row_deviation(raster: FieldRaster, component: Component = 0, quantity: str = "abs") -> float:
    """Largest (max - min) / max along a row (rows of annulus and circle grids are circles)."""
    q = raster.quantity(component, quantity)
    worst = 0.0
    for row in q:
        row = row[np.isfinite(row)]
        if row.size == 0:
            continue
        top = float(np.max(np.abs(row)))
        if top > 0:
            worst = max(worst, float(np.max(row) - np.min(row)) / top)
    return worst


def is_close_raster(a: FieldRaster, b: FieldRaster, rel: float = 1e-14) -> bool:
    """Values equal up to ``rel`` and identical masks."""
    if a.shape != b.shape or not np.array_equal(a.missing, b.missing):
        return False
    ok = ~a.missing
    return bool(np.allclose(a.values[ok], b.values[ok], rtol=rel, atol=0.0))


__all__ = [
    "FieldRaster",
    "CSV_HEADER",
    "QUANTITIES",
    "sample_grid",
    "export_csv",
    "read_csv",
    "peak_value",
    "half_max_area",
    "top_decile_ring_fraction",
    "peak_is_interior",
    "row_deviation",
    "is_close_raster",
]
