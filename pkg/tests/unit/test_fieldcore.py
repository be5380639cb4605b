"""Unit tests for vector algebra, coordinates and finite-difference operators."""

import math

import numpy as np
import pytest

from src.lib.fieldcore import (
    CylPoint,
    as_cartesian,
    assemble8,
    cart_cyl,
    cross_matrix,
    cyl_cart,
    cyl_gradient,
    cylindrical_frame,
    differential,
    hessian,
    jacobian,
    laplacian,
    observed_order,
    split8,
)
from src.models.error_types import DomainError, FieldEvaluationError, ParameterError
from src.models.params import FDScheme


class TestCoordinates:
    """Tests for Cartesian/cylindrical conversion."""

    def test_cart_cyl_quarter_turn(self):
        """Test (1, 0, 2) maps to x1=1, r=2, theta=pi/2."""
        c = cart_cyl([1.0, 0.0, 2.0])
        assert c.x1 == 1.0
        assert c.r == pytest.approx(2.0, abs=1e-15)
        assert c.theta == pytest.approx(math.pi / 2, abs=1e-15)

    def test_round_trip(self):
        """Test cyl -> cart -> cyl reproduces the point."""
        original = CylPoint(-3.0, 0.7, 2.5)
        back = cart_cyl(cyl_cart(original))
        assert back.x1 == pytest.approx(-3.0, abs=1e-14)
        assert back.r == pytest.approx(0.7, abs=1e-14)
        assert back.theta == pytest.approx(2.5, abs=1e-14)

    def test_negative_x2_axis_is_pi(self):
        """Test the branch convention theta in (-pi, pi] on the negative x2 axis."""
        assert cart_cyl([0.0, -1.0, 0.0]).theta == pytest.approx(math.pi)
        assert cart_cyl([0.0, -1.0, -0.0]).theta == pytest.approx(math.pi)

    def test_axis_rejected(self):
        """Test that points on the x1 axis raise a DomainError naming the guard."""
        with pytest.raises(DomainError) as exc_info:
            cart_cyl([2.0, 0.0, 1e-9])
        assert exc_info.value.constraint == "r > r_min"
        assert exc_info.value.point == (2.0, 0.0, 1e-9)

    def test_non_finite_point_rejected(self):
        """Test that NaN coordinates are a domain violation."""
        with pytest.raises(DomainError):
            cart_cyl([np.nan, 1.0, 0.0])

    def test_complex_coordinate(self):
        """Test z = x1 + i r."""
        assert CylPoint(1.0, 2.0, 0.3).z == complex(1.0, 2.0)

    def test_cylindrical_frame_orthonormal(self):
        """Test that (r_hat, theta_hat) are orthonormal and orthogonal to x1."""
        r_hat, theta_hat = cylindrical_frame(0.8)
        assert r_hat @ theta_hat == pytest.approx(0.0, abs=1e-15)
        assert np.linalg.norm(r_hat) == pytest.approx(1.0)
        assert np.linalg.norm(theta_hat) == pytest.approx(1.0)
        assert r_hat[0] == 0.0 and theta_hat[0] == 0.0

    def test_as_cartesian_adapter(self):
        """Test that a cylindrical field is evaluated at the converted point."""
        radius = as_cartesian(lambda c: c.r)
        assert radius(np.array([5.0, 3.0, 4.0])) == pytest.approx(5.0)


class TestAlgebra:
    """Tests for the eight-vector and cross-product helpers."""

    def test_cross_matrix_matches_numpy(self):
        """Test cross_matrix(v) @ w == v x w for complex vectors."""
        v = np.array([1 + 2j, -0.5, 3j])
        w = np.array([0.3, 1 - 1j, 2.0])
        assert np.allclose(cross_matrix(v) @ w, np.cross(v, w), atol=1e-15)

    def test_assemble_split_round_trip(self):
        """Test block round trip of the (s1, V1, s2, V2) convention."""
        x = assemble8(1j, [1, 2, 3], -2.0, [4j, 5, 6])
        s1, v1, s2, v2 = split8(x)
        assert s1 == 1j and s2 == -2.0
        assert np.array_equal(v1, [1, 2, 3])
        assert np.array_equal(v2, [4j, 5, 6])

    def test_split8_rejects_wrong_shape(self):
        """Test that split8 needs exactly eight entries."""
        with pytest.raises(ParameterError):
            split8(np.zeros(7))


class TestDifferential:
    """Tests for finite-difference grad, div, curl and Laplacian."""

    def test_curl_of_constant_is_zero(self):
        """Test curl of a constant field vanishes exactly."""
        curl = differential(lambda x: np.array([1.0, 2j, 0.0]), "curl", [0.4, -1.0, 2.0])
        assert np.array_equal(curl, np.zeros(3))

    def test_curl_of_rotation(self):
        """Test curl(-x2, x1, 0) = (0, 0, 2)."""
        curl = differential(lambda x: np.array([-x[1], x[0], 0.0]), "curl", [0.3, 0.7, -1.2])
        assert np.allclose(curl, [0.0, 0.0, 2.0], atol=1e-10)

    def test_div_of_position(self):
        """Test div x = 3."""
        assert differential(lambda x: x.astype(complex), "div", [1.0, 2.0, 3.0]) == pytest.approx(3.0, abs=1e-9)

    def test_grad_of_quadratic(self):
        """Test grad |x|^2 = 2x."""
        p = np.array([0.5, -1.0, 2.0])
        grad = differential(lambda x: complex(x @ x), "grad", p)
        assert np.allclose(grad, 2 * p, atol=1e-8)

    def test_laplacian_of_quadratic(self):
        """Test Laplacian of |x|^2 = 6 and componentwise on vector fields."""
        assert differential(lambda x: complex(x @ x), "laplacian", [0.1, 0.2, 0.3]) == pytest.approx(6.0, abs=1e-5)
        vec = laplacian(lambda x: np.array([x[0] ** 2, x[1] ** 2, 0.0]), [0.1, 0.2, 0.3])
        assert np.allclose(vec, [2.0, 2.0, 0.0], atol=1e-5)

    def test_curl_of_grad_converges_at_second_order(self):
        """Test FD curl of the analytic grad of sin(x1) exp(x2) vanishes like h^2."""
        grad_f = lambda x: np.array([np.cos(x[0]) * np.exp(x[1]), np.sin(x[0]) * np.exp(x[1]), 0.0])
        p = [0.3, -0.2, 1.1]
        errors = [
            float(np.max(np.abs(differential(grad_f, "curl", p, FDScheme(h=h, relative=False)))))
            for h in (1e-2, 5e-3)
        ]
        assert errors[0] < 1e-4
        assert 1.7 <= observed_order(*errors) <= 2.3

    @pytest.mark.parametrize(
        "kind, field, exact",
        [
            (
                "grad",
                lambda x: np.sin(x[0]) * np.exp(x[1]) * np.cos(x[2]),
                lambda x: np.array([
                    np.cos(x[0]) * np.exp(x[1]) * np.cos(x[2]),
                    np.sin(x[0]) * np.exp(x[1]) * np.cos(x[2]),
                    -np.sin(x[0]) * np.exp(x[1]) * np.sin(x[2]),
                ]),
            ),
            (
                "div",
                lambda x: np.array([np.sin(x[0]) * np.exp(x[1]), np.cos(x[1]) * np.exp(x[2]), np.exp(x[0]) * np.sin(x[2])]),
                lambda x: np.cos(x[0]) * np.exp(x[1]) - np.sin(x[1]) * np.exp(x[2]) + np.exp(x[0]) * np.cos(x[2]),
            ),
            (
                "curl",
                lambda x: np.array([np.sin(x[0]) * np.exp(x[1]), np.cos(x[1]) * np.exp(x[2]), np.exp(x[0]) * np.sin(x[2])]),
                lambda x: np.array([
                    -np.cos(x[1]) * np.exp(x[2]),
                    -np.exp(x[0]) * np.sin(x[2]),
                    -np.sin(x[0]) * np.exp(x[1]),
                ]),
            ),
            (
                "laplacian",
                lambda x: np.sin(x[0]) * np.exp(x[1]) * np.cos(x[2]),
                lambda x: -np.sin(x[0]) * np.exp(x[1]) * np.cos(x[2]),
            ),
        ],
    )
    def test_every_kind_converges_at_second_order(self, kind, field, exact):
        """Test halving h cuts the error of each operator by about four."""
        p = np.array([0.3, -0.2, 1.1])
        errors = [
            float(np.max(np.abs(np.asarray(differential(field, kind, p, FDScheme(h=h, relative=False))) - exact(p))))
            for h in (1e-2, 5e-3)
        ]
        assert errors[0] < 1e-3
        assert 1.7 <= observed_order(*errors) <= 2.3

    def test_div_of_curl_vanishes_on_seeded_points(self):
        """Test nested FD div(curl F) is rounding-level on 100 seeded points."""
        field = lambda x: np.array([np.sin(x[0]) * np.exp(x[1]), np.cos(x[1]) * np.exp(x[2]), x[0] * x[1] * np.sin(x[2])])
        scheme = FDScheme(h=1e-3, relative=False)
        inner = lambda x: differential(field, "curl", x, scheme)
        rng = np.random.default_rng(0)

        worst = max(abs(differential(inner, "div", rng.uniform(-1.0, 1.0, 3), scheme)) for _ in range(100))

        assert worst < 1e-7

    def test_nested_curl_of_grad_is_rounding_only(self):
        """Test that nested central differences with one step commute."""
        f = lambda x: np.sin(x[0]) * np.exp(x[1])
        scheme = FDScheme(h=1e-3, relative=False)
        inner = lambda x: differential(f, "grad", x, scheme)
        assert np.max(np.abs(differential(inner, "curl", [0.3, -0.2, 1.1], scheme))) < 1e-8

    def test_unknown_kind(self):
        """Test that an unknown operator name raises ParameterError."""
        with pytest.raises(ParameterError) as exc_info:
            differential(lambda x: x, "rot", [0.0, 1.0, 0.0])
        assert "grad" in str(exc_info.value)

    def test_curl_needs_vector_field(self):
        """Test that curl of a scalar field is rejected."""
        with pytest.raises(ParameterError):
            differential(lambda x: complex(x[0]), "curl", [0.0, 1.0, 0.0])

    def test_non_finite_value_names_point(self):
        """Test that a NaN on the stencil raises FieldEvaluationError."""
        bad = lambda x: np.nan if x[0] > 1.0 else 0.0
        with pytest.raises(FieldEvaluationError) as exc_info:
            jacobian(bad, [1.0, 0.0, 0.0])
        assert exc_info.value.point[0] > 1.0


class TestHessianAndOrder:
    """Tests for the Hessian, cylindrical gradient and observed order."""

    def test_hessian_of_product(self):
        """Test Hessian of x1 x2."""
        hess = hessian(lambda x: x[0] * x[1], [0.4, 0.6, -1.0])
        expected = np.array([[0, 1, 0], [1, 0, 0], [0, 0, 0]])
        assert np.allclose(hess, expected, atol=1e-6)

    def test_hessian_needs_scalar(self):
        """Test that a vector field is rejected by hessian."""
        with pytest.raises(ParameterError):
            hessian(lambda x: x, [1.0, 1.0, 1.0])

    def test_cyl_gradient_of_x1(self):
        """Test grad x1 = (1, 0, 0)."""
        grad = cyl_gradient(lambda c: c.x1, CylPoint(0.5, 1.0, 0.3))
        assert np.allclose(grad, [1.0, 0.0, 0.0], atol=1e-10)

    def test_cyl_gradient_of_r(self):
        """Test grad r = (0, cos theta, sin theta) at theta = pi/3."""
        grad = cyl_gradient(lambda c: c.r, CylPoint(0.0, 2.0, math.pi / 3))
        assert np.allclose(grad, [0.0, 0.5, math.sqrt(3) / 2], atol=1e-10)

    def test_cyl_gradient_of_theta(self):
        """Test grad theta = theta_hat / r = (0, -0.5, 0) at r=2, theta=pi/2."""
        grad = cyl_gradient(lambda c: c.theta, CylPoint(0.0, 2.0, math.pi / 2))
        assert np.allclose(grad, [0.0, -0.5, 0.0], atol=1e-8)

    def test_cyl_gradient_on_axis(self):
        """Test that the cylindrical gradient refuses r <= r_min."""
        with pytest.raises(DomainError):
            cyl_gradient(lambda c: c.r, CylPoint(0.0, 1e-8, 0.0))

    def test_cyl_gradient_keeps_theta_inside_range(self):
        """Test the angular stencil shrinks near the end of theta_range and never leaves it."""
        seen = []

        def f(c):
            seen.append(c.theta)
            return c.theta

        grad = cyl_gradient(f, CylPoint(0.0, 1.0, 1e-8), theta_range=(0.0, math.pi))
        assert min(seen) > 0.0
        assert grad[2] == pytest.approx(1.0, rel=1e-6)
        with pytest.raises(DomainError):
            cyl_gradient(f, CylPoint(0.0, 1.0, -0.1), theta_range=(0.0, math.pi))

    def test_observed_order(self):
        """Test log2 of the error ratio."""
        assert observed_order(4e-4, 1e-4) == pytest.approx(2.0)
        assert observed_order(9e-4, 1e-4, refinement=3.0) == pytest.approx(2.0)

    def test_observed_order_needs_positive_errors(self):
        """Test that a zero error cannot give an order."""
        with pytest.raises(ParameterError):
            observed_order(1e-4, 0.0)
