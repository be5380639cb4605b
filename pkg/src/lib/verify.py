"""Finite-difference Maxwell residuals, tau-scaling studies and intensity profiles."""

import math
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, List, NamedTuple, Optional, Sequence, Union

import numpy as np

from src.lib.beams import cyl_beam_fields, sph_beam_fields
from src.lib.fieldcore import DEFAULT_SCHEME, as_point, jacobian
from src.lib.kelvin import KelvinMap, physical_beam_fields, plane_wave_fields
from src.lib.logging_config import carry_context, get_logger, log_duration
from src.models.error_types import BeamError, ParameterError, VerificationError
from src.models.medium import MediumProfile, constant_medium
from src.models.params import CircleGrid, CylBeamParams, FDScheme, SphBeamParams, VirtualBeamParams
from src.models.reports import IntensityProfile, ResidualReport, ScalingRow, ScalingStudy

logger = get_logger(__name__)

MIN_TAUS = 3
MIN_SAMPLES = 30
MAX_FAILURE_FRACTION = 0.2

Coefficient = Union[complex, float, Callable[[np.ndarray], complex]]


class MaxwellProblem(NamedTuple):
    """Fields and medium of one time-harmonic Maxwell configuration."""

    E: Callable[[np.ndarray], np.ndarray]
    H: Callable[[np.ndarray], np.ndarray]
    mu: Coefficient
    gamma: Coefficient
    omega: float


def _as_function(c: Coefficient) -> Callable[[np.ndarray], complex]:
    if callable(c):
        return c
    value = complex(c)
    return lambda x: value


def _curl(jac: np.ndarray) -> np.ndarray:
    return np.array([jac[2, 1] - jac[1, 2], jac[0, 2] - jac[2, 0], jac[1, 0] - jac[0, 1]])


def maxwell_residual(
    E: Callable[[np.ndarray], np.ndarray],
    H: Callable[[np.ndarray], np.ndarray],
    mu: Coefficient,
    gamma: Coefficient,
    omega: float,
    p: Sequence[float],
    scheme: FDScheme = DEFAULT_SCHEME,
) -> ResidualReport:
    """Pointwise residuals of curl E = i omega mu H, curl H = -i omega gamma E and both divergences.

    Each residual is divided by the largest term in its own equation
    (Jacobian entries or omega |mu| |H|, omega |gamma| |E|). When an equation
    has no scale the overall field_scale is used; when that vanishes too the
    report is flagged degenerate.
    """
    x = as_point(p)
    mu_f, gamma_f = _as_function(mu), _as_function(gamma)
    e_val = np.asarray(E(x), dtype=complex)
    h_val = np.asarray(H(x), dtype=complex)
    mu_v, gamma_v = complex(mu_f(x)), complex(gamma_f(x))

    jac_e = jacobian(E, x, scheme)
    jac_h = jacobian(H, x, scheme)
    jac_de = jacobian(lambda y: gamma_f(y) * np.asarray(E(y)), x, scheme)
    jac_bh = jacobian(lambda y: mu_f(y) * np.asarray(H(y)), x, scheme)

    residuals = [
        float(np.max(np.abs(_curl(jac_e) - 1j * omega * mu_v * h_val))),
        float(np.max(np.abs(_curl(jac_h) + 1j * omega * gamma_v * e_val))),
        float(abs(np.trace(jac_de))),
        float(abs(np.trace(jac_bh))),
    ]
    scales = [
        max(float(np.max(np.abs(jac_e))), omega * abs(mu_v) * float(np.max(np.abs(h_val)))),
        max(float(np.max(np.abs(jac_h))), omega * abs(gamma_v) * float(np.max(np.abs(e_val)))),
        float(np.max(np.abs(jac_de))),
        float(np.max(np.abs(jac_bh))),
    ]
    field_scale = max(scales)
    if field_scale == 0.0:
        relative, degenerate = None, True
    else:
        relative = max(r / (s if s > 0 else field_scale) for r, s in zip(residuals, scales))
        degenerate = False
    return ResidualReport(
        r_faraday=residuals[0],
        r_ampere=residuals[1],
        r_div_e=residuals[2],
        r_div_h=residuals[3],
        field_scale=field_scale,
        relative=relative,
        degenerate=degenerate,
        point=tuple(float(c) for c in x),
    )


def problem_residual(problem: MaxwellProblem, p: Sequence[float], scheme: FDScheme = DEFAULT_SCHEME) -> ResidualReport:
    return maxwell_residual(problem.E, problem.H, problem.mu, problem.gamma, problem.omega, p, scheme)


# ============================================================================
# Beam families (tau -> MaxwellProblem)
# ============================================================================

def cyl_family(lam: float = 0.5, rho: float = 1.0, k: float = 1.0, medium: Optional[MediumProfile] = None):
    """Leading cylindrical beam as a function of tau."""

    def build(tau: float) -> MaxwellProblem:
        params = CylBeamParams(tau=tau, lam=lam, rho=rho, k=k, medium=medium)
        e, h = cyl_beam_fields(params)
        return MaxwellProblem(e, h, params.medium.mu, params.medium.gamma, params.omega)

    return build


def sph_family(lam: float = 0.5, rho: float = 1.0, omega: float = 1.0):
    def build(tau: float) -> MaxwellProblem:
        params = SphBeamParams(tau=tau, lam=lam, rho=rho, omega=omega)
        e, h = sph_beam_fields(params)
        return MaxwellProblem(e, h, params.medium.mu, params.medium.gamma, params.omega)

    return build


def kelvin_family(rho: float = 1.0, R: float = 5.0, **kwargs):
    """Physical-space Kelvin beam at fixed rho."""
    km = KelvinMap(R=R)

    def build(tau: float) -> MaxwellProblem:
        vp = VirtualBeamParams(tau=tau, rho=rho, **kwargs)
        e, h = physical_beam_fields(vp, km)
        return MaxwellProblem(e, h, vp.mu0, vp.gamma0, vp.omega)

    return build


def plane_wave_family(
    direction: Sequence[float] = (0.0, 0.0, 1.0),
    polarization: Sequence[float] = (1.0, 0.0, 0.0),
    mu0: float = 1.0,
    eps0: float = 1.0,
    omega: float = 1.0,
):
    """Exact plane wave that ignores tau (noise-floor control)."""
    e, h = plane_wave_fields(direction, polarization, mu0, eps0, omega)
    medium = constant_medium(mu0=mu0, eps0=eps0, omega=omega)
    return lambda tau: MaxwellProblem(e, h, medium.mu, medium.gamma, omega)


FAMILIES = {
    "cyl": cyl_family,
    "sph": sph_family,
    "kelvin": kelvin_family,
    "plane": plane_wave_family,
}


# ============================================================================
# Seeded sample sets
# ============================================================================

def cyl_sample_points(
    seed: int = 0,
    n: int = 40,
    tau_max: float = 80.0,
    r_range: Sequence[float] = (0.5, 3.0),
) -> List[np.ndarray]:
    """Cartesian points with |x1| < 2/tau_max, r in r_range, theta uniform."""
    rng = np.random.default_rng(seed)
    x1 = rng.uniform(-2.0 / tau_max, 2.0 / tau_max, n)
    r = rng.uniform(*r_range, n)
    theta = rng.uniform(-math.pi, math.pi, n)
    return [np.array([a, b * math.cos(t), b * math.sin(t)]) for a, b, t in zip(x1, r, theta)]


def sph_sample_points(seed: int = 0, n: int = 40, x1: float = 2.0, r_range: Sequence[float] = (0.5, 3.0)) -> List[np.ndarray]:
    rng = np.random.default_rng(seed)
    r = rng.uniform(*r_range, n)
    theta = rng.uniform(0.1, math.pi - 0.1, n)
    return [np.array([x1, b * math.cos(t), b * math.sin(t)]) for b, t in zip(r, theta)]


def kelvin_sample_points(
    seed: int = 0,
    n: int = 40,
    km: Optional[KelvinMap] = None,
    radius_range: Sequence[float] = (3.0, 15.0),
) -> List[np.ndarray]:
    """Points with |x| in radius_range whose Kelvin images fall in the annulus."""
    km = km or KelvinMap(R=5.0)
    rng = np.random.default_rng(seed)
    points: List[np.ndarray] = []
    while len(points) < n:
        direction = rng.standard_normal(3)
        direction /= np.linalg.norm(direction)
        x = rng.uniform(*radius_range) * direction
        x_tilde = km.apply(x)
        if km.inner_radius < np.linalg.norm(x_tilde) < km.outer_radius:
            points.append(x)
    return points


def fit_loglog_slope(xs: Sequence[float], ys: Sequence[float]) -> float:
    """Least-squares slope of log(ys) against log(xs)."""
    xs = np.asarray(xs, dtype=float)
    ys = np.asarray(ys, dtype=float)
    if np.any(xs <= 0) or np.any(ys <= 0):
        raise ParameterError("values", (xs.tolist(), ys.tolist()), "log-log fit needs positive values")
    return float(np.polyfit(np.log(xs), np.log(ys), 1)[0])


def _build_problem(family: Callable[[float], MaxwellProblem], tau: float) -> MaxwellProblem:
    # pydantic's ValidationError is a ValueError
    try:
        return family(tau)
    except ValueError as e:
        raise ParameterError("taus", tau, f"rejected by the beam parameters: {e}") from e


def scaling_study(
    family: Callable[[float], MaxwellProblem],
    taus: Sequence[float],
    samples: Sequence[Sequence[float]],
    scheme: FDScheme = DEFAULT_SCHEME,
    workers: int = 1,
    name: str = "custom",
) -> ScalingStudy:
    """Median and 90th-percentile relative residual per tau, plus the log-log slope.

    Samples that raise a BeamError or give a degenerate report are excluded
    and counted. Results are ordered by sample index for any worker count.

    Raises:
        ParameterError: Fewer than 3 strictly increasing taus, fewer than 30 samples,
            or a tau the family's parameter model rejects
        VerificationError: More than 20% of the samples failed for some tau
    """
    taus = [float(t) for t in taus]
    if len(taus) < MIN_TAUS or any(b <= a for a, b in zip(taus, taus[1:])):
        raise ParameterError("taus", taus, f"need >= {MIN_TAUS} strictly increasing values")
    if len(samples) < MIN_SAMPLES:
        raise ParameterError("samples", len(samples), f"need >= {MIN_SAMPLES} points")

    problems = [_build_problem(family, tau) for tau in taus]

    rows: List[ScalingRow] = []
    with ThreadPoolExecutor(max_workers=max(1, workers)) as pool:
        for tau, problem in zip(taus, problems):

            def evaluate(p, problem=problem) -> Optional[float]:
                try:
                    return problem_residual(problem, p, scheme).relative
                except BeamError as e:
                    logger.debug(f"sample excluded at tau={tau}: {e.message}")
                    return None

            with log_duration(logger, f"{name} tau={tau:g}"):
                results = list(pool.map(carry_context(evaluate), samples))
            values = [r for r in results if r is not None]
            failed = len(results) - len(values)
            if failed > MAX_FAILURE_FRACTION * len(results):
                raise VerificationError(
                    f"{failed}/{len(results)} samples failed at tau={tau:g} (limit {MAX_FAILURE_FRACTION:.0%})"
                )
            rows.append(
                ScalingRow(
                    tau=tau,
                    median_relative=float(np.median(values)),
                    p90_relative=float(np.percentile(values, 90)),
                    n_samples=len(values),
                    n_failed=failed,
                )
            )
            logger.info(f"{name}: tau={tau:g} median relative residual {rows[-1].median_relative:.3e}")

    slope = fit_loglog_slope([r.tau for r in rows], [r.median_relative for r in rows])
    return ScalingStudy(family=name, rows=rows, slope=slope)


# ============================================================================
# Intensity along trajectories
# ============================================================================

def intensity_profile(
    field: Callable[[np.ndarray], np.ndarray],
    trajectory: Union[CircleGrid, Sequence[Sequence[float]]],
) -> IntensityProfile:
    """Hermitian norm of the field along a point list or a circle spec."""
    if isinstance(trajectory, CircleGrid):
        _, arc, pts = trajectory.mesh()
        points = list(pts[0])
        arc = [float(a) for a in arc]
    else:
        points = [as_point(q) for q in trajectory]
        steps = [float(np.linalg.norm(b - a)) for a, b in zip(points, points[1:])]
        arc = [0.0] + list(np.cumsum(steps))
    if len(points) < 2:
        raise ParameterError("trajectory", len(points), "need at least 2 points")
    values = [float(np.linalg.norm(np.asarray(field(q), dtype=complex))) for q in points]
    top = max(values)
    deviation = (top - min(values)) / top if top > 0 else 0.0
    diffs = np.diff(values)
    return IntensityProfile(
        arc=[float(a) for a in arc],
        values=values,
        max_relative_deviation=deviation,
        increasing=bool(np.all(diffs > 0)),
        decreasing=bool(np.all(diffs < 0)),
    )


__all__ = [
    "MaxwellProblem",
    "maxwell_residual",
    "problem_residual",
    "cyl_family",
    "sph_family",
    "kelvin_family",
    "plane_wave_family",
    "FAMILIES",
    "cyl_sample_points",
    "sph_sample_points",
    "kelvin_sample_points",
    "fit_loglog_slope",
    "scaling_study",
    "intensity_profile",
]
