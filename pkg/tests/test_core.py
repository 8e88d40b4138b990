import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from nilgeom.core import (ORIGIN, compose, heisenberg_matrix, inverse_translation, linear_rotation,
                          metric_at, quadratic_map, quadratic_map_inverse, rotate_about,
                          rotate_about_z, symmetric_height, tangent_norm, translate,
                          translation_jacobian, translation_to_origin)
from nilgeom.errors import InvalidInput
from nilgeom.core import as_point

coord = st.floats(-5, 5, allow_nan=False)
triple = st.tuples(coord, coord, coord)


class TestTranslate:
    def test_origin_maps_to_parameters(self):
        assert translate(ORIGIN, (1.5, -2.0, 0.25)) == (1.5, -2.0, 0.25)

    def test_identity_translation(self):
        assert translate((0.3, -1.0, 2.0), (0, 0, 0)) == (0.3, -1.0, 2.0)

    def test_worked_example(self):
        # z' = z_t + b x_t + c = 6 + 2*4 + 3
        assert translate((1, 2, 3), (4, 5, 6)) == (5, 7, 17)

    def test_matches_matrix_product(self):
        p, t = (1.0, 2.0, 3.0), (4.0, 5.0, 6.0)
        m = heisenberg_matrix(t) @ heisenberg_matrix(p)
        assert np.allclose(heisenberg_matrix(translate(p, t)), m)

    @given(triple, triple, triple)
    def test_group_law(self, p, t1, t2):
        a = translate(translate(p, t1), t2)
        b = translate(p, compose(t1, t2))
        assert np.allclose(a, b, atol=1e-12 * (1 + np.max(np.abs(a))))

    @given(triple, triple)
    def test_inverse_round_trip(self, p, t):
        back = translate(translate(p, t), inverse_translation(t))
        assert np.allclose(back, p, atol=1e-11)


class TestInverse:
    def test_identity(self):
        assert inverse_translation((0, 0, 0)) == (0, 0, 0)

    def test_abelian_direction(self):
        assert inverse_translation((2.5, 0, 0)) == (-2.5, 0, 0)

    def test_round_trip_example(self, rng):
        u = inverse_translation((1, 2, 3))
        for p in rng.uniform(-3, 3, (100, 3)):
            assert np.allclose(translate(translate(p, (1, 2, 3)), u), p, atol=1e-12)


class TestToOrigin:
    def test_origin(self):
        assert translation_to_origin(ORIGIN) == (0, 0, 0)

    def test_unit_x(self):
        assert translation_to_origin((1, 0, 0)) == (-1, 0, 0)

    def test_triangle_vertex(self, ref_triangle):
        A1 = ref_triangle[1]
        assert np.allclose(translate(A1, translation_to_origin(A1)), ORIGIN, atol=1e-15)

    @given(triple)
    def test_property(self, p):
        assert np.allclose(translate(p, translation_to_origin(p)), 0.0, atol=1e-12)


class TestRotation:
    def test_zero_angle(self):
        p = (0.7, -1.3, 2.2)
        assert np.allclose(rotate_about_z(p, 0.0), p, atol=1e-15)

    def test_axis_fixed(self):
        assert np.allclose(rotate_about_z((0, 0, 1.5), 1.1), (0, 0, 1.5))

    def test_quarter_turn(self):
        r = rotate_about_z((1, 1, 0), math.pi / 2)
        via_q = quadratic_map_inverse(linear_rotation(quadratic_map((1, 1, 0)), math.pi / 2))
        assert np.allclose(r[:2], (-1, 1), atol=1e-15)
        assert np.allclose(r, via_q, atol=1e-12)

    @given(triple, st.floats(-10, 10))
    def test_conjugacy(self, p, om):
        a = rotate_about_z(p, om)
        b = quadratic_map_inverse(linear_rotation(quadratic_map(p), om))
        assert np.allclose(a, b, atol=1e-11)

    @given(triple, st.floats(-4, 4))
    def test_symmetric_height_kept(self, p, om):
        assert abs(symmetric_height(rotate_about_z(p, om)) - symmetric_height(p)) < 1e-11

    def test_about_point_fixes_center_fibre(self):
        c = (0.5, -1.0, 1.0)
        r = rotate_about((0.5, -1.0, 3.0), c, 0.8)
        assert np.allclose(r, (0.5, -1.0, 3.0), atol=1e-14)


class TestQuadraticMap:
    def test_fibre(self):
        assert quadratic_map((0, 0, 2.0)) == (0, 0, 2.0)

    def test_half_product(self):
        assert quadratic_map((2, 3, 0)) == (2, 3, -3)

    @given(triple)
    def test_inverse(self, p):
        back = quadratic_map_inverse(quadratic_map(p))
        assert back[:2] == tuple(p[:2])
        # z goes through z - xy/2 and back: a few ulps of the intermediate size
        scale = abs(p[2]) + abs(p[0] * p[1]) + 1.0
        assert abs(back[2] - p[2]) <= 4 * np.finfo(float).eps * scale


class TestMetric:
    def test_origin_identity(self):
        assert np.array_equal(metric_at(ORIGIN), np.eye(3))

    def test_x_one(self):
        assert np.array_equal(metric_at((1, 5, 7)), [[1, 0, 0], [0, 2, -1], [0, -1, 1]])

    @given(triple)
    def test_unit_determinant(self, p):
        assert abs(np.linalg.det(metric_at(p)) - 1.0) < 1e-12 * (1 + p[0] ** 4)

    def test_norm_zero_and_unit(self):
        assert tangent_norm(ORIGIN, (0, 0, 0)) == 0.0
        assert tangent_norm(ORIGIN, (1, 0, 0)) == 1.0

    def test_translation_preserves_norm_fd(self, rng):
        # pushforward through a finite-difference Jacobian of the translation
        h = 1e-6
        for _ in range(50):
            p, t, v = rng.uniform(-2, 2, (3, 3))
            jac = np.column_stack([(np.subtract(translate(p + h * e, t), translate(p - h * e, t))) / (2 * h)
                                   for e in np.eye(3)])
            assert np.allclose(jac, translation_jacobian(t), atol=1e-8)
            w = jac @ v
            assert abs(tangent_norm(translate(p, t), w) - tangent_norm(p, v)) < 1e-8

    def test_rotation_preserves_norm_fd(self, rng):
        h = 1e-6
        for _ in range(50):
            p, v = rng.uniform(-2, 2, (2, 3))
            om = rng.uniform(-3, 3)
            jac = np.column_stack([(np.subtract(rotate_about_z(p + h * e, om), rotate_about_z(p - h * e, om)))
                                   / (2 * h) for e in np.eye(3)])
            assert abs(tangent_norm(rotate_about_z(p, om), jac @ v) - tangent_norm(p, v)) < 1e-8


def test_as_point_rejects_nan():
    with pytest.raises(InvalidInput):
        as_point((0, math.nan, 0))
