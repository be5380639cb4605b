"""Maxwell-to-Dirac reduction.

The augmented unknown X = (Phi, H, Psi, E) satisfies (P + V)X = 0 with the
first-order operator P = P(D), D = -i grad. The Liouville rescaling
Y = diag(mu^(1/2) I4, gamma^(1/2) I4) X turns this into (P - k + W)Y = 0.
All derivatives are central differences; nested applications reuse one
absolute step so that P applied twice equals minus the wide-stencil Laplacian
exactly.
"""

from typing import Callable, Optional, Sequence, Tuple

import numpy as np

from src.lib.fieldcore import (
    DEFAULT_SCHEME,
    R_MIN,
    CylPoint,
    as_point,
    assemble8,
    bilinear_dot,
    cart_cyl,
    cross_matrix,
    cyl_cart,
    jacobian,
    laplacian,
)
from src.lib.lcw import Phase, phase_gradient
from src.lib.logging_config import get_logger
from src.models.error_types import DomainError, ParameterError
from src.models.medium import MediumProfile, bump, bump_medium, constant_medium
from src.models.params import FDScheme

logger = get_logger(__name__)

EightField = Callable[[np.ndarray], np.ndarray]


def p_symbol(xi: Sequence[complex]) -> np.ndarray:
    """Symbol P(xi): zero diagonal blocks, [[0, xi.], [xi, xi x]] top right, [[0, xi.], [xi, -xi x]] bottom left."""
    xi = np.asarray(xi, dtype=complex).reshape(3)
    out = np.zeros((8, 8), dtype=complex)
    cx = cross_matrix(xi)
    out[0, 5:8] = xi
    out[1:4, 4] = xi
    out[1:4, 5:8] = cx
    out[4, 1:4] = xi
    out[5:8, 0] = xi
    out[5:8, 1:4] = -cx
    return out


_P_BASIS = [p_symbol(e) for e in np.eye(3)]


def dirac_fd(field: EightField, p: Sequence[float], scheme: FDScheme = DEFAULT_SCHEME) -> np.ndarray:
    """P(D) applied to an eight-vector field: sum_j P(e_j) (-i d_j field)."""
    jac = jacobian(field, p, scheme)
    return -1j * sum(_P_BASIS[j] @ jac[:, j] for j in range(3))


def _log_gradients(m: MediumProfile, x: np.ndarray, scheme: FDScheme) -> Tuple[np.ndarray, np.ndarray]:
    """(D alpha, D beta) with alpha = log gamma, beta = log mu (principal logs)."""
    grad_alpha = jacobian(lambda y: np.log(m.params_at(y)[1]), x, scheme)
    grad_beta = jacobian(lambda y: np.log(m.params_at(y)[0]), x, scheme)
    return -1j * grad_alpha, -1j * grad_beta


def build_W(m: MediumProfile, p: Sequence[float], scheme: FDScheme = DEFAULT_SCHEME) -> np.ndarray:
    """Potential W = -(kappa - k) I8 + M/2 of the rescaled Dirac system.

    Raises:
        MediumError: If Re mu or Re gamma is not positive on the stencil
    """
    x = as_point(p)
    d_alpha, d_beta = _log_gradients(m, x, scheme)
    half = np.zeros((8, 8), dtype=complex)
    half[0, 5:8] = d_alpha
    half[1:4, 4] = d_alpha
    half[1:4, 5:8] = -cross_matrix(d_alpha)
    half[4, 1:4] = d_beta
    half[5:8, 0] = d_beta
    half[5:8, 1:4] = cross_matrix(d_beta)
    return -(m.kappa(x) - m.k) * np.eye(8, dtype=complex) + 0.5 * half


def build_V(m: MediumProfile, p: Sequence[float], scheme: FDScheme = DEFAULT_SCHEME) -> np.ndarray:
    """Potential V of the unrescaled augmented system (P + V)X = 0."""
    x = as_point(p)
    mu, gamma = m.params_at(x)
    d_alpha, d_beta = _log_gradients(m, x, scheme)
    out = np.zeros((8, 8), dtype=complex)
    out[0:4, 0:4] = -m.omega * mu * np.eye(4)
    out[4:8, 4:8] = -m.omega * gamma * np.eye(4)
    out[0, 5:8] = d_alpha
    out[1:4, 4] = d_alpha
    out[4, 1:4] = d_beta
    out[5:8, 0] = d_beta
    return out


def apply_dirac(
    m: MediumProfile,
    field: EightField,
    p: Sequence[float],
    scheme: FDScheme = DEFAULT_SCHEME,
    potential: str = "W",
) -> np.ndarray:
    """(P + V)X or (P - k + W)Y evaluated at p."""
    x = as_point(p)
    value = np.asarray(field(x), dtype=complex)
    if potential == "V":
        return dirac_fd(field, x, scheme) + build_V(m, x, scheme) @ value
    if potential == "W":
        return dirac_fd(field, x, scheme) - m.k * value + build_W(m, x, scheme) @ value
    raise ParameterError("potential", potential, "expected 'V' or 'W'")


def liouville_scalings(m: MediumProfile, p: Sequence[float]) -> Tuple[np.ndarray, np.ndarray]:
    """S = diag(mu^(1/2) I4, gamma^(1/2) I4) and T = diag(gamma^(1/2) I4, mu^(1/2) I4)."""
    mu, gamma = m.params_at(p)
    s = np.diag(np.r_[np.full(4, np.sqrt(mu)), np.full(4, np.sqrt(gamma))])
    t = np.diag(np.r_[np.full(4, np.sqrt(gamma)), np.full(4, np.sqrt(mu))])
    return s, t


def liouville_check(
    m: MediumProfile,
    field: EightField,
    p: Sequence[float],
    scheme: FDScheme = DEFAULT_SCHEME,
) -> float:
    """max |(P - k + W)(S X) - T (P + V) X| at p."""
    x = as_point(p)
    fixed = scheme.fixed(x)
    rescaled = lambda y: liouville_scalings(m, y)[0] @ np.asarray(field(y), dtype=complex)
    lhs = apply_dirac(m, rescaled, x, fixed, potential="W")
    _, t = liouville_scalings(m, x)
    rhs = t @ apply_dirac(m, field, x, fixed, potential="V")
    return float(np.max(np.abs(lhs - rhs)))


def _wide_laplacian(field: EightField, x: np.ndarray, h: float) -> np.ndarray:
    f0 = np.asarray(field(x), dtype=complex)
    acc = np.zeros_like(f0)
    for e in np.eye(3):
        acc = acc + np.asarray(field(x + 2 * h * e)) - 2 * f0 + np.asarray(field(x - 2 * h * e))
    return acc / (4 * h * h)


def apply_factorized(
    m: MediumProfile,
    field: EightField,
    p: Sequence[float],
    scheme: FDScheme = DEFAULT_SCHEME,
    reverse: bool = False,
    potential_scale: float = 1.0,
    transpose: bool = True,
) -> np.ndarray:
    """Zeroth-order remainder of the factorized Dirac product.

    Forward: [(P - k + sW)(P + k - sW^t) + Lap + k^2] Y.
    Reverse: [(P + k - sW^t)(P - k + sW) + Lap + k^2] Y.
    With ``transpose=False`` the inner or outer W^t is replaced by W.
    """
    x = as_point(p)
    fixed = scheme.fixed(x)
    k = m.k

    def w_of(y: np.ndarray, adjoint: bool) -> np.ndarray:
        w = potential_scale * build_W(m, y, fixed)
        return w.T if (adjoint and transpose) else w

    if not reverse:
        inner = lambda y: (
            dirac_fd(field, y, fixed) + k * np.asarray(field(y)) - w_of(y, True) @ np.asarray(field(y))
        )
        value = inner(x)
        outer = dirac_fd(inner, x, fixed) - k * value + w_of(x, False) @ value
    else:
        inner = lambda y: (
            dirac_fd(field, y, fixed) - k * np.asarray(field(y)) + w_of(y, False) @ np.asarray(field(y))
        )
        value = inner(x)
        outer = dirac_fd(inner, x, fixed) + k * value - w_of(x, True) @ value
    return outer + _wide_laplacian(field, x, fixed.h) + k * k * np.asarray(field(x), dtype=complex)


def locality_check(
    m: MediumProfile,
    test_field: EightField,
    cutoff: Callable[[np.ndarray], float],
    p: Sequence[float],
    scheme: FDScheme = FDScheme(h=1e-3, relative=False),
    potential_scale: float = 1.0,
    transpose: bool = True,
) -> float:
    """max |L(chi Y)(p) - chi(p) L(Y)(p)|; zero when L is a multiplication operator.

    L = (P - k + W)(P + k - W^t) + Lap + k^2.
    """
    x = as_point(p)
    product = lambda y: float(cutoff(y)) * np.asarray(test_field(y), dtype=complex)
    opts = dict(potential_scale=potential_scale, transpose=transpose)
    lhs = apply_factorized(m, product, x, scheme, **opts)
    rhs = float(cutoff(x)) * apply_factorized(m, test_field, x, scheme, **opts)
    return float(np.max(np.abs(lhs - rhs)))


def schrodinger_diagonal(
    m: MediumProfile, p: Sequence[float], scheme: FDScheme = DEFAULT_SCHEME
) -> Tuple[complex, complex]:
    """(q1, q2) = -(kappa^2 - k^2) - Lap(beta)/2 - D beta . D beta / 4, and the same with alpha."""
    x = as_point(p)
    d_alpha, d_beta = _log_gradients(m, x, scheme)
    lap_alpha = complex(laplacian(lambda y: np.log(m.params_at(y)[1]), x, scheme))
    lap_beta = complex(laplacian(lambda y: np.log(m.params_at(y)[0]), x, scheme))
    shift = -(m.kappa(x) ** 2 - m.k ** 2)
    q1 = shift - 0.5 * lap_beta - 0.25 * bilinear_dot(d_beta, d_beta)
    q2 = shift - 0.5 * lap_alpha - 0.25 * bilinear_dot(d_alpha, d_alpha)
    return complex(q1), complex(q2)


def first_row_check(
    m: MediumProfile,
    field: EightField,
    p: Sequence[float],
    scheme: FDScheme = FDScheme(h=1e-3, relative=False),
) -> float:
    """Distance of rows 0 and 4 of the reversed factorized remainder from q1 Y0, q2 Y4."""
    x = as_point(p)
    rem = apply_factorized(m, field, x, scheme, reverse=True)
    q1, q2 = schrodinger_diagonal(m, x, scheme.fixed(x))
    y = np.asarray(field(x), dtype=complex)
    return float(max(abs(rem[0] - q1 * y[0]), abs(rem[4] - q2 * y[4])))


# ============================================================================
# Amplitude choice and b-scalars
# ============================================================================

def choose_g(
    chi1: Callable[[float], complex],
    chi2: Callable[[float], complex],
    tau: float,
    lam: float,
    k: float,
    theta: float,
) -> np.ndarray:
    """Angular eight-vector g(theta) that cancels both b-scalars.

    Raises:
        ParameterError: If tau == 0
    """
    if tau == 0:
        raise ParameterError("tau", tau, "must be non-zero")
    c = -(1j * tau + lam) / (1j * tau)
    d = k / (1j * tau)
    s, co = np.sin(theta), np.cos(theta)
    return assemble8(
        c * chi1(theta),
        d * np.array([chi2(theta), s, -co]),
        c * chi2(theta),
        d * np.array([chi1(theta), s, -co]),
    )


def choose_g_derivative(
    dchi1: Callable[[float], complex],
    dchi2: Callable[[float], complex],
    tau: float,
    lam: float,
    k: float,
    theta: float,
) -> np.ndarray:
    """d/dtheta of choose_g given the derivatives of the angular profiles."""
    if tau == 0:
        raise ParameterError("tau", tau, "must be non-zero")
    c = -(1j * tau + lam) / (1j * tau)
    d = k / (1j * tau)
    s, co = np.sin(theta), np.cos(theta)
    return assemble8(
        c * dchi1(theta),
        d * np.array([dchi2(theta), co, s]),
        c * dchi2(theta),
        d * np.array([dchi1(theta), co, s]),
    )


def b_scalars(
    g: Callable[[float], np.ndarray],
    tau: float,
    lam: float,
    k: float,
    p: CylPoint,
    dg: Optional[Callable[[float], np.ndarray]] = None,
    r_min: float = R_MIN,
) -> Tuple[complex, complex]:
    """Closed-form (b1, b2) for the cylindrical phase and amplitude e^(i lam z) g / sqrt(2 i r).

    dg is the theta-derivative of g; a central difference with step 1e-5 is
    used when it is not supplied.
    """
    if p.r <= r_min:
        raise DomainError("r > r_min", cyl_cart(p))
    th, r = p.theta, p.r
    gv = np.asarray(g(th), dtype=complex)
    if dg is None:
        step = 1e-5
        dgv = (np.asarray(g(th + step)) - np.asarray(g(th - step))) / (2 * step)
    else:
        dgv = np.asarray(dg(th), dtype=complex)
    pref = np.exp(1j * lam * p.z) / np.sqrt(2j * r)
    a = -tau + 1j * lam + 1j / (2 * r)
    c, s = np.cos(th), np.sin(th)

    def contract(G: np.ndarray, dG: np.ndarray, scalar: complex) -> complex:
        return pref * (
            (1j * tau + lam) * G[0]
            + a * c * G[1] + (1j / r) * s * dG[1]
            + a * s * G[2] - (1j / r) * c * dG[2]
            + k * scalar
        )

    return contract(gv[5:8], dgv[5:8], gv[0]), contract(gv[1:4], dgv[1:4], gv[4])


def b_scalars_fd(
    amplitude: Callable[[CylPoint], np.ndarray],
    tau: float,
    k: float,
    ph: Phase,
    p: CylPoint,
    scheme: FDScheme = DEFAULT_SCHEME,
) -> Tuple[complex, complex]:
    """b1 = tau D(phi+i psi) . A2 + D . A2 + k a1 and b2 symmetric, by finite differences."""
    x = cyl_cart(p)
    d_phase = -1j * phase_gradient(ph, p)
    amp = np.asarray(amplitude(p), dtype=complex)
    jac = jacobian(lambda y: amplitude(cart_cyl(y)), x, scheme)
    div2 = -1j * np.trace(jac[5:8, :])
    div1 = -1j * np.trace(jac[1:4, :])
    b1 = tau * bilinear_dot(d_phase, amp[5:8]) + div2 + k * amp[0]
    b2 = tau * bilinear_dot(d_phase, amp[1:4]) + div1 + k * amp[4]
    return complex(b1), complex(b2)


__all__ = [
    "MediumProfile",
    "bump",
    "constant_medium",
    "bump_medium",
    "p_symbol",
    "dirac_fd",
    "build_W",
    "build_V",
    "apply_dirac",
    "liouville_scalings",
    "liouville_check",
    "apply_factorized",
    "locality_check",
    "schrodinger_diagonal",
    "first_row_check",
    "choose_g",
    "choose_g_derivative",
    "b_scalars",
    "b_scalars_fd",
]
