"""Named verification suites run by ``beams verify``.

Each suite draws its points from a seeded generator, runs the positive checks
and the matching negative controls, and returns a SuiteReport.
"""

import math
import time
from typing import Callable, Dict, List, Optional

import numpy as np

from src.lib.beams import cyl_beam, e_component_power, sph_beam
from src.lib.dirac import (
    b_scalars,
    bump_medium,
    choose_g,
    choose_g_derivative,
    constant_medium,
    first_row_check,
    liouville_check,
    locality_check,
    p_symbol,
)
from src.lib.fieldcore import CylPoint, cart_cyl, jacobian, observed_order
from src.lib.kelvin import (
    KelvinMap,
    kelvin_trajectory,
    physical_beam,
    pushed_plane_wave,
    pushforward_params,
    pushforward_tensor,
)
from src.lib.lcw import Phase, amplitude_A, check_eikonal, check_lcw, check_transport
from src.lib.logging_config import get_logger, run_context
from src.lib.verify import (
    cyl_family,
    cyl_sample_points,
    intensity_profile,
    kelvin_family,
    kelvin_sample_points,
    maxwell_residual,
    plane_wave_family,
    problem_residual,
    scaling_study,
)
from src.models.error_types import ParameterError
from src.models.params import (
    CircleGrid,
    CylBeamParams,
    FDScheme,
    SphBeamParams,
    VirtualBeamParams,
    default_chi,
    default_chi_derivative,
)
from src.models.reports import CheckResult, SuiteReport

logger = get_logger(__name__)

EIKONAL_SCHEME = FDScheme(h=1e-5)
LOCALITY_Y = np.array([1.0, 0.5, -0.3, 0.2, 1.0, 0.4, 0.1, -0.6], dtype=complex)
LOCALITY_CENTER = np.array([-0.2, 0.1, 0.3])


# ============================================================================
# Check helpers
# ============================================================================

def below(name: str, value: float, threshold: float, detail: Optional[str] = None) -> CheckResult:
    return CheckResult(name=name, passed=bool(value < threshold), value=float(value), threshold=f"< {threshold:g}", detail=detail)


def above(name: str, value: float, threshold: float, detail: Optional[str] = None) -> CheckResult:
    return CheckResult(name=name, passed=bool(value > threshold), value=float(value), threshold=f"> {threshold:g}", detail=detail)


def within(name: str, value: float, lo: float, hi: float, detail: Optional[str] = None) -> CheckResult:
    return CheckResult(
        name=name, passed=bool(lo <= value <= hi), value=float(value), threshold=f"in [{lo:g}, {hi:g}]", detail=detail
    )


def flag(name: str, ok: bool, detail: Optional[str] = None) -> CheckResult:
    return CheckResult(name=name, passed=bool(ok), detail=detail)


def cyl_points(
    rng: np.random.Generator,
    n: int,
    x1_range=(-2.0, 2.0),
    r_range=(0.6, 3.0),
    theta_range=(0.1, math.pi - 0.1),
) -> List[CylPoint]:
    """Seeded cylindrical points; the default theta range is admissible for every phase."""
    x1 = rng.uniform(*x1_range, n)
    r = rng.uniform(*r_range, n)
    theta = rng.uniform(*theta_range, n)
    return [CylPoint(float(a), float(b), float(c)) for a, b, c in zip(x1, r, theta)]


def ball_points(rng: np.random.Generator, n: int, radius_range) -> List[np.ndarray]:
    out = []
    for _ in range(n):
        d = rng.standard_normal(3)
        out.append(rng.uniform(*radius_range) * d / np.linalg.norm(d))
    return out


# ============================================================================
# Suites
# ============================================================================

def eikonal_suite(seed: int = 0, **_) -> List[CheckResult]:
    rng = np.random.default_rng(seed)
    points = cyl_points(rng, 100)
    checks = []
    for label, ph in (("cyl_linear", Phase.cylindrical()), ("log_bar", Phase.logarithmic())):
        worst = max(check_eikonal(ph, p, EIKONAL_SCHEME).worst for p in points)
        checks.append(below(f"eikonal {label}", worst, 1e-7, "100 seeded points"))
    wrong = lambda c: -c.x1 - 2j * c.r
    control = check_eikonal(wrong, points[0], EIKONAL_SCHEME).res_norm
    checks.append(below("eikonal control psi=-2r", abs(control - 3.0), 1e-6, f"res_norm={control:.9f}, expected 3"))
    return checks


def _transport_profile(theta: float) -> np.ndarray:
    return np.array([np.exp(1j * theta), np.cos(2 * theta), 1.0 + 0.5 * np.sin(theta)])


def transport_suite(seed: int = 0, **_) -> List[CheckResult]:
    rng = np.random.default_rng(seed)
    points = cyl_points(rng, 50)
    checks = []
    for label, ph in (("cyl_linear", Phase.cylindrical(lam=0.5)), ("log_bar", Phase.logarithmic(lam=0.5))):
        amp = lambda c, ph=ph: amplitude_A(ph, _transport_profile, c)
        worst = max(check_transport(ph, amp, p) for p in points)
        checks.append(below(f"transport {label}", worst, 1e-6, "50 seeded points"))

    ph = Phase.cylindrical(lam=0.5)
    amp = lambda c: amplitude_A(ph, _transport_profile, c)
    p = CylPoint(0.2, 1.3, 0.7)
    coarse = check_transport(ph, amp, p, FDScheme(h=1e-2, relative=False))
    fine = check_transport(ph, amp, p, FDScheme(h=5e-3, relative=False))
    order = observed_order(coarse, fine)
    checks.append(within("transport observed order", order, 1.7, 2.3, f"err(h)={coarse:.3e}, err(h/2)={fine:.3e}"))
    return checks


def lcw_suite(seed: int = 0, **_) -> List[CheckResult]:
    rng = np.random.default_rng(seed)
    points = ball_points(rng, 20, (0.6, 3.0))
    weights = {
        "-x1": lambda x: -x[0],
        "-log|x|": lambda x: -np.log(np.linalg.norm(x)),
    }
    checks = []
    for label, phi in weights.items():
        worst = max(check_lcw(phi, x, seed=seed) for x in points)
        checks.append(below(f"lcw {label}", worst, 1e-6))
    control = min(check_lcw(lambda x: float(x @ x), x, seed=seed) for x in points)
    checks.append(above("lcw control |x|^2", control, 1.0, "smallest residual over the sample"))
    return checks


def dirac_suite(seed: int = 0, **_) -> List[CheckResult]:
    rng = np.random.default_rng(seed)
    checks = []

    worst = 0.0
    for _ in range(50):
        xi = rng.standard_normal(3) + 1j * rng.standard_normal(3)
        sym = p_symbol(xi)
        dot = complex(np.sum(xi * xi))
        worst = max(worst, float(np.max(np.abs(sym @ sym - dot * np.eye(8)))) / max(1.0, abs(dot)))
    checks.append(below("P(xi)^2 = (xi.xi) I", worst, 1e-12, "50 seeded complex xi"))

    worst = 0.0
    for _ in range(100):
        r, theta = rng.uniform(0.3, 3.0), rng.uniform(-math.pi, math.pi)
        tau, lam, k = rng.uniform(1.0, 50.0), rng.uniform(0.0, 2.0), rng.uniform(0.0, 3.0)
        rho = rng.uniform(0.0, 3.0)
        chi, dchi = default_chi(rho), default_chi_derivative(rho)
        g = lambda th: choose_g(chi, chi, tau, lam, k, th)
        dg = lambda th: choose_g_derivative(dchi, dchi, tau, lam, k, th)
        p = CylPoint(0.0, r, theta)
        b1, b2 = b_scalars(g, tau, lam, k, p, dg=dg)
        scale = tau * abs(np.exp(1j * lam * p.z)) / math.sqrt(2 * r) * max(1.0, float(np.max(np.abs(g(theta)))))
        worst = max(worst, max(abs(b1), abs(b2)) / scale)
    checks.append(below("b-scalars vanish with choose_g", worst, 1e-10, "100 seeded (r, theta, tau, lambda, k)"))

    medium = bump_medium()
    chi = lambda x: math.exp(-float(np.sum((np.asarray(x) - LOCALITY_CENTER) ** 2)))
    field = lambda x: LOCALITY_Y
    inner = ball_points(rng, 8, (0.1, 0.7))
    worst = max(locality_check(medium, field, chi, x) for x in inner)
    checks.append(below("locality bump medium", worst, 1e-4))
    worst_2w = max(locality_check(medium, field, chi, x, potential_scale=2.0) for x in inner)
    checks.append(below("locality 2W (structural)", worst_2w, 1e-4))
    shell = ball_points(rng, 8, (0.4, 0.6))
    control = max(locality_check(medium, field, chi, x, transpose=False) for x in shell)
    checks.append(above("locality control untransposed", control, 1e-2))

    q = np.array([0.3, -0.2, 0.5])
    wave = lambda x: LOCALITY_Y * np.exp(1j * float(q @ np.asarray(x)))
    worst = max(liouville_check(medium, wave, x) for x in inner)
    checks.append(below("Liouville rescaling identity", worst, 1e-6))
    worst = max(first_row_check(medium, wave, x) for x in ball_points(rng, 6, (0.1, 0.6)))
    checks.append(below("first rows diagonal (q1, q2)", worst, 1e-3))
    flat = max(locality_check(constant_medium(), field, chi, x) for x in inner[:3])
    checks.append(below("locality constant medium", flat, 1e-8))
    return checks


def kelvin_suite(seed: int = 0, **_) -> List[CheckResult]:
    rng = np.random.default_rng(seed)
    km = KelvinMap(R=5.0)
    points = ball_points(rng, 100, (0.5, 40.0))
    checks = []

    worst = max(float(np.linalg.norm(km.apply(km.apply(x)) - x)) / float(np.linalg.norm(x)) for x in points)
    checks.append(below("K o K = id", worst, 1e-12, "100 seeded points"))

    worst = 0.0
    for x in points:
        analytic = km.jacobian(x)
        numeric = np.real(jacobian(km.apply, x))
        worst = max(worst, float(np.max(np.abs(analytic - numeric))) / float(np.max(np.abs(analytic))))
    checks.append(below("DK vs finite differences", worst, 1e-6, "relative to max |DK|"))

    x = np.array([2 * km.R, 0.0, 0.0])
    det = abs(float(np.linalg.det(km.jacobian(x))))
    checks.append(below("|det DK| at |x| = 2R is 1/64", abs(det - 1.0 / 64.0), 1e-15))

    worst = 0.0
    for x in points[:20]:
        tensor = pushforward_tensor(km, x)
        iso = pushforward_params(km, km.apply(x))[0]
        worst = max(worst, float(np.max(np.abs(tensor - iso * np.eye(3)))) / abs(iso))
    checks.append(below("isotropic push-forward of mu", worst, 1e-12))

    e_t, h_t, mu_t, eps_t = pushed_plane_wave(km)
    samples = ball_points(rng, 20, (2.0, 15.0))
    worst = max(maxwell_residual(e_t, h_t, mu_t, eps_t, 1.0, xt).relative for xt in samples)
    checks.append(below("pushed plane wave solves transformed Maxwell", worst, 1e-4, "20 annulus points"))

    vp = VirtualBeamParams(tau=4.0, rho=1.0)
    ts = np.linspace(0.0, 10.0, 21)
    path = kelvin_trajectory(km, (2.0, 2.0, 1.0), np.array([1.0, 1.0, 0.0]) / math.sqrt(2), ts)
    profile = intensity_profile(lambda y: physical_beam(vp, km, y).E, path)
    checks.append(flag("|E| increases toward the origin", profile.increasing, f"{len(path)} trajectory points"))
    return checks


def residual_suite(seed: int = 0, workers: int = 1, samples: int = 40, **_) -> List[CheckResult]:
    checks = []
    cyl_points_ = cyl_sample_points(seed, samples)
    cyl = scaling_study(cyl_family(), [10, 20, 40, 80], cyl_points_, workers=workers, name="cyl")
    logger.info(f"cyl scaling\n{cyl.table()}")
    checks.append(within("cyl slope", cyl.slope, -1.4, -0.6))
    checks.append(within("cyl ratio tau 40/10", cyl.ratio(40.0, 10.0), 0.15, 0.40))

    km = KelvinMap(R=5.0)
    kel = scaling_study(kelvin_family(), [4, 8, 16], kelvin_sample_points(seed, samples, km), workers=workers, name="kelvin")
    logger.info(f"kelvin scaling\n{kel.table()}")
    checks.append(within("kelvin slope", kel.slope, -1.5, -0.5))

    plane = scaling_study(plane_wave_family(), [10, 20, 40], cyl_points_, workers=workers, name="plane")
    checks.append(within("plane-wave control slope", plane.slope, -0.2, 0.2))
    exact = plane_wave_family()(1.0)
    worst = max(problem_residual(exact, p).relative for p in cyl_points_)
    checks.append(below("plane wave at noise floor", worst, 1e-6))
    wrong = exact._replace(omega=1.3 * exact.omega)
    checks.append(above("wrong omega control", problem_residual(wrong, cyl_points_[0]).relative, 0.05))

    params = CylBeamParams(tau=10.0, lam=0.5, rho=1.0)
    circle = CircleGrid(x1=0.0, r=1.5, n_theta=360)
    profile = intensity_profile(lambda y: cyl_beam(params, cart_cyl(y)).E, circle)
    checks.append(below("cyl |E| constant on circles", profile.max_relative_deviation, 1e-12))
    powers = [e_component_power(params, CylPoint(0.0, 1.5, t)) for t in np.linspace(-3.0, 3.0, 61)]
    sums = [p[2] for p in powers]
    checks.append(below("|E2|^2 + |E3|^2 theta-invariant", (max(sums) - min(sums)) / max(sums), 1e-12))
    e2 = [math.sqrt(p[0]) for p in powers]
    checks.append(above("E2 trades power with E3", max(e2) - min(e2), 0.0))

    sph = SphBeamParams(tau=9.0, lam=0.5)
    arc = CircleGrid(x1=2.0, r=1.0, theta_range=(0.1, math.pi - 0.1), n_theta=200)
    profile = intensity_profile(lambda y: sph_beam(sph, cart_cyl(y)).E, arc)
    checks.append(below("sph |E| constant on circles", profile.max_relative_deviation, 1e-12))
    return checks


SUITES: Dict[str, Callable[..., List[CheckResult]]] = {
    "eikonal": eikonal_suite,
    "transport": transport_suite,
    "lcw": lcw_suite,
    "dirac": dirac_suite,
    "kelvin": kelvin_suite,
    "residual": residual_suite,
}


def run_suite(name: str, seed: int = 0, workers: int = 1, **options) -> SuiteReport:
    """Run a named suite and wrap its checks in a SuiteReport.

    Raises:
        ParameterError: If the suite name is unknown
    """
    if name not in SUITES:
        raise ParameterError("suite", name, f"expected one of {', '.join(SUITES)}")
    with run_context(suite=name, seed=seed):
        logger.info(f"Running suite '{name}' (seed={seed})")
        start = time.perf_counter()
        checks = SUITES[name](seed=seed, workers=workers, **options)
        report = SuiteReport(suite=name, seed=seed, checks=checks, elapsed_s=time.perf_counter() - start)
        for check in report.checks:
            if not check.passed:
                logger.warning(f"{name}: check '{check.name}' failed (value={check.value}, {check.threshold})")
        logger.info(f"Suite '{name}' {'passed' if report.passed else 'FAILED'} in {report.elapsed_s:.2f}s")
        return report


__all__ = ["SUITES", "run_suite", "below", "above", "within", "flag", "cyl_points", "ball_points"]
