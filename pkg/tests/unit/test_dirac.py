"""Unit tests for the Dirac symbol, potentials, factorization checks and b-scalars."""

import math

import numpy as np
import pytest

from src.lib.dirac import (
    apply_dirac,
    apply_factorized,
    b_scalars,
    b_scalars_fd,
    build_V,
    build_W,
    choose_g,
    choose_g_derivative,
    dirac_fd,
    first_row_check,
    liouville_check,
    locality_check,
    p_symbol,
    schrodinger_diagonal,
)
from src.lib.fieldcore import CylPoint, assemble8
from src.lib.lcw import Phase, amplitude_A
from src.models.error_types import MediumError, ParameterError
from src.models.medium import MediumProfile, bump_medium, constant_medium
from src.models.params import default_chi, default_chi_derivative

Y0 = np.array([1.0, 0.5, -0.3, 0.2, 1.0, 0.4, 0.1, -0.6], dtype=complex)
CENTER = np.array([-0.2, 0.1, 0.3])


def _cutoff(x):
    return math.exp(-float(np.sum((np.asarray(x) - CENTER) ** 2)))


def _wave(x):
    return Y0 * np.exp(1j * float(np.array([0.3, -0.2, 0.5]) @ np.asarray(x)))


class TestSymbol:
    """Tests for the symbol P(xi) and its FD operator."""

    def test_zero_symbol(self):
        """Test P(0) = 0."""
        assert np.array_equal(p_symbol([0, 0, 0]), np.zeros((8, 8)))

    def test_square_of_real_unit_symbol(self):
        """Test P(e1)^2 = I8."""
        sym = p_symbol([1.0, 0.0, 0.0])
        assert np.allclose(sym @ sym, np.eye(8), atol=1e-15)

    def test_square_is_bilinear_dot(self):
        """Test P(xi)^2 = (xi . xi) I8 for complex xi."""
        rng = np.random.default_rng(0)
        for _ in range(10):
            xi = rng.standard_normal(3) + 1j * rng.standard_normal(3)
            sym = p_symbol(xi)
            assert np.allclose(sym @ sym, np.sum(xi * xi) * np.eye(8), atol=1e-12)

    def test_block_pattern(self):
        """Test zero diagonal blocks and the +/- cross-product placement."""
        sym = p_symbol([1.0, 2.0, 3.0])
        assert np.all(sym[:4, :4] == 0) and np.all(sym[4:, 4:] == 0)
        assert np.allclose(sym[1:4, 5:8], -sym[5:8, 1:4])

    def test_fd_operator_kills_constants(self):
        """Test that P(D) applied to a constant eight-vector is zero."""
        value = dirac_fd(lambda x: assemble8(0, [1, 2j, 3], 0, [0.5, 0, -1]), [0.2, 0.3, 0.4])
        assert np.allclose(value, 0.0, atol=1e-12)


class TestPotentials:
    """Tests for the potentials W and V."""

    def test_w_vanishes_for_lossless_constant_medium(self):
        """Test W = 0 when kappa = k and all log-gradients vanish."""
        assert np.allclose(build_W(constant_medium(), [0.1, 0.2, 0.3]), 0.0, atol=1e-15)

    def test_w_for_lossy_constant_medium(self):
        """Test W = -(omega sqrt(mu0 gamma0) - k) I8."""
        m = constant_medium(mu0=1.0, eps0=2.0, sigma0=0.5, omega=1.5)
        kappa = 1.5 * np.sqrt(1.0) * np.sqrt(complex(2.0, 0.5 / 1.5))
        expected = -(kappa - m.k) * np.eye(8)
        assert np.allclose(build_W(m, [0.0, 1.0, 0.0]), expected, atol=1e-14)

    def test_w_gradient_blocks_in_bump(self):
        """Test the +/- cross-product pattern of the gradient part inside the bump."""
        m = bump_medium()
        w = build_W(m, [0.3, 0.2, -0.1])
        off = w - np.diag(np.diag(w))
        assert np.max(np.abs(off)) > 1e-3
        # D alpha sits in row 0 and column 4, -D alpha x in the (1:4, 5:8) block
        assert np.allclose(off[0, 5:8], off[1:4, 4])
        assert np.allclose(off[1:4, 5:8], -off[1:4, 5:8].T)
        assert np.allclose(off[5:8, 1:4], -off[5:8, 1:4].T)

    def test_v_diagonal_blocks(self):
        """Test V carries -omega mu and -omega gamma on its diagonal blocks."""
        m = constant_medium(mu0=2.0, eps0=3.0, omega=0.5)
        v = build_V(m, [0.0, 1.0, 1.0])
        assert np.allclose(np.diag(v)[:4], -1.0)
        assert np.allclose(np.diag(v)[4:], -1.5)

    def test_non_physical_medium(self):
        """Test that Re mu <= 0 raises MediumError."""
        m = MediumProfile(mu=lambda x: -1.0, gamma=lambda x: 1.0)
        with pytest.raises(MediumError):
            build_W(m, [0.0, 0.0, 0.0])

    def test_unknown_potential(self):
        """Test apply_dirac only knows V and W."""
        with pytest.raises(ParameterError):
            apply_dirac(constant_medium(), _wave, [0.0, 0.0, 0.0], potential="Q")


class TestFactorization:
    """Tests for the Liouville identity and the factorized Dirac product."""

    def test_liouville_identity(self):
        """Test (P - k + W)(S X) = T (P + V) X in the bump medium."""
        assert liouville_check(bump_medium(), _wave, [0.2, -0.1, 0.3]) < 1e-6

    def test_locality_constant_medium(self):
        """Test the commutator with a cutoff vanishes when W = 0."""
        assert locality_check(constant_medium(), lambda x: Y0, _cutoff, [0.1, 0.2, 0.3]) < 1e-8

    def test_locality_bump_medium(self):
        """Test the factorized product is a multiplication operator in the bump."""
        assert locality_check(bump_medium(), lambda x: Y0, _cutoff, [0.2, -0.1, 0.3]) < 1e-4

    def test_locality_untransposed_control(self):
        """Test that using W instead of W^t leaves first-order terms."""
        m = bump_medium()
        points = [np.array([0.5, 0.0, 0.0]), np.array([0.0, 0.45, 0.2]), np.array([-0.3, -0.3, 0.3])]
        worst = max(locality_check(m, lambda x: Y0, _cutoff, x, transpose=False) for x in points)
        assert worst > 1e-2

    def test_first_rows_are_diagonal(self):
        """Test rows 0 and 4 of the reversed product equal q1 Y0 and q2 Y4."""
        assert first_row_check(bump_medium(), _wave, [0.1, 0.2, -0.2]) < 1e-3

    def test_schrodinger_diagonal_constant_medium(self):
        """Test q1 = q2 = 0 in a lossless constant medium."""
        q1, q2 = schrodinger_diagonal(constant_medium(), [0.3, 0.3, 0.3])
        assert abs(q1) < 1e-12 and abs(q2) < 1e-12

    def test_factorized_remainder_constant_medium(self):
        """Test (P - k)(P + k) + Lap + k^2 annihilates smooth fields in free space."""
        remainder = apply_factorized(constant_medium(), _wave, [0.4, 0.1, -0.2])
        assert np.max(np.abs(remainder)) < 1e-6


class TestBScalars:
    """Tests for the amplitude choice g(theta) and the b-scalars."""

    def test_choose_g_cancels_b_scalars(self):
        """Test b1 = b2 = 0 for chi = -exp(i theta), tau=10, lambda=0.5, k=1."""
        chi, dchi = default_chi(1.0), default_chi_derivative(1.0)
        g = lambda th: choose_g(chi, chi, 10.0, 0.5, 1.0, th)
        dg = lambda th: choose_g_derivative(dchi, dchi, 10.0, 0.5, 1.0, th)
        b1, b2 = b_scalars(g, 10.0, 0.5, 1.0, CylPoint(0.0, 1.2, math.pi / 4), dg=dg)
        assert abs(b1) < 1e-10 * 10 and abs(b2) < 1e-10 * 10

    def test_choose_g_without_wave_number(self):
        """Test k = 0 gives G1 = G2 = 0."""
        g = choose_g(default_chi(1.0), default_chi(1.0), 5.0, 0.5, 0.0, 0.3)
        assert np.all(g[1:4] == 0) and np.all(g[5:8] == 0)

    def test_choose_g_large_tau_limit(self):
        """Test g1 -> -chi1 as tau grows."""
        g = choose_g(lambda t: 1.0, lambda t: 1.0, 1e8, 0.5, 1.0, 0.0)
        assert g[0] == pytest.approx(-1.0, abs=1e-7)

    def test_choose_g_needs_nonzero_tau(self):
        """Test tau = 0 is rejected."""
        with pytest.raises(ParameterError):
            choose_g(lambda t: 1.0, lambda t: 1.0, 0.0, 0.5, 1.0, 0.0)

    def test_only_k_term_survives(self):
        """Test G2 = 0, g1 = 1 gives b1 = k exp(i lambda z) / sqrt(2 i r)."""
        g = lambda th: assemble8(1.0, [0, 0, 0], 0.0, [0, 0, 0])
        p = CylPoint(0.3, 0.8, 1.0)
        b1, _ = b_scalars(g, 7.0, 0.5, 2.0, p)
        assert b1 == pytest.approx(2.0 * np.exp(0.5j * p.z) / np.sqrt(1.6j), rel=1e-14)

    def test_perturbed_g_control(self):
        """Test that scaling G2 by 1.01 leaves b1 = -0.01 k g1 exp(i lambda z) / sqrt(2 i r)."""
        tau, lam, k = 10.0, 0.5, 2.0
        chi = default_chi(1.0)

        def g(th):
            out = choose_g(chi, chi, tau, lam, k, th)
            out[5:8] *= 1.01
            return out

        p = CylPoint(0.0, 1.0, 0.5)
        b1, _ = b_scalars(g, tau, lam, k, p)
        amplitude = abs(np.exp(0.5j * p.z)) / math.sqrt(2.0)
        assert abs(b1) == pytest.approx(0.01 * k * abs(g(p.theta)[0]) * amplitude, rel=1e-6)
        assert abs(b1) > 1e-3 * tau * amplitude

    def test_closed_form_matches_finite_differences(self):
        """Test closed-form b-scalars against the FD divergence form."""
        tau, lam, k = 6.0, 0.5, 1.5

        def g(th):
            return np.array(
                [np.cos(th), 1.0, np.sin(th), 0.5j, np.exp(1j * th), 0.2, np.cos(2 * th), 1j],
                dtype=complex,
            )

        ph = Phase.cylindrical(lam=lam)
        p = CylPoint(0.2, 1.1, 0.8)
        closed = b_scalars(g, tau, lam, k, p)
        numeric = b_scalars_fd(lambda c: amplitude_A(ph, g, c), tau, k, ph, p)
        scale = tau * float(np.max(np.abs(g(p.theta))))
        assert abs(closed[0] - numeric[0]) < 1e-6 * scale
        assert abs(closed[1] - numeric[1]) < 1e-6 * scale
