import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from nilgeom import kernels
from nilgeom.core import ORIGIN, rotate_about_z, tangent_norm, translate
from nilgeom.errors import InvalidInput, NoConvergence, OutOfModelRange
from nilgeom.geodesic import (GeodesicParams, distance, geodesic_between, geodesic_ode_oracle,
                              geodesic_point, geodesic_point_from, geodesic_velocity,
                              point_at_ratio, sample_geodesic, solve_geodesic)
from nilgeom.triangle import simple_ratio

from conftest import random_params
from oracles import grid_search_distance

FD = 1e-6


def fd_velocity(params, h=FD):
    a, th, t = params
    return (np.subtract(geodesic_point((a, th, t + h)), geodesic_point((a, th, t - h)))) / (2 * h)


class TestClosedForm:
    def test_fibre(self):
        assert np.allclose(geodesic_point((0.7, math.pi / 2, 1.0)), (0, 0, 1), atol=1e-15)

    def test_straight_x(self):
        assert np.allclose(geodesic_point((0.0, 0.0, 1.0)), (1, 0, 0), atol=1e-15)

    def test_straight_diagonal(self):
        s = math.sqrt(2) / 2
        p = geodesic_point((math.pi / 4, 0.0, 1.0))
        assert np.allclose(p, (s, s, 0.25), atol=1e-15)
        assert np.allclose(p, geodesic_ode_oracle((math.pi / 4, 0.0, 1.0)), atol=1e-6)

    def test_from_base(self):
        assert np.allclose(geodesic_point_from(ORIGIN, (0.3, 0.4, 1.2)), geodesic_point((0.3, 0.4, 1.2)))
        assert np.allclose(geodesic_point_from((1, 2, 3), (0.3, 0.4, 0.0)), (1, 2, 3))
        assert np.allclose(geodesic_point_from((1, 2, 3), (0.0, math.pi / 2, 2.0)),
                           translate((0, 0, 2), (1, 2, 3)))

    def test_small_w_continuity(self):
        # across the switch to the series branches the endpoint stays smooth
        for a in (0.0, 0.9, -2.1):
            pts = [geodesic_point((a, th, 2.0)) for th in (-1e-9, 0.0, 1e-9, 1e-6, 1e-4)]
            for p in pts[:3]:
                assert np.allclose(p, pts[1], atol=1e-8)
            assert np.allclose(pts[3], pts[1], atol=1e-5)

    def test_height_formula(self, rng):
        # compact trigonometric form of the height
        for a, th, t in random_params(rng, 300):
            c, w = math.cos(th), math.sin(th)
            u = w * t
            if abs(u) < 1e-2:
                continue
            z = u * (1 + c * c / (2 * w * w) * ((1 - math.sin(u) / u)
                                                + (1 - math.cos(u)) / u * math.sin(u + 2 * a)))
            assert abs(geodesic_point((a, th, t))[2] - z) < 1e-10 * max(1.0, 1 / (w * w))

    def test_cylinder_radius(self, rng):
        for a, th, t in random_params(rng, 300):
            c, w = math.cos(th), math.sin(th)
            x, y, _ = geodesic_point((a, th, t))
            assert abs(x * x + y * y - 4 * c * c / (w * w) * math.sin(w * t / 2) ** 2) < 1e-10

    def test_radius_from_endpoint(self, rng):
        # inverse of the cylinder relation on the branch |w t| < pi
        n = 0
        for a, th, t in random_params(rng, 400):
            c, w = math.cos(th), math.sin(th)
            if not (1e-3 < abs(w) < 0.999 and abs(w * t) < math.pi - 1e-3):
                continue
            x, y, _ = geodesic_point((a, th, t))
            R = 2 * math.asin(math.hypot(x, y) / (2 * c / abs(w))) / abs(w)
            assert abs(R - t) < 1e-6
            n += 1
        assert n > 100


class TestOracle:
    def test_zero_length(self):
        assert geodesic_ode_oracle((0.3, 0.2, 1.0), t=0.0) == ORIGIN

    def test_fibre_stays_on_axis(self):
        p = geodesic_ode_oracle((0.3, math.pi / 2, 2.0))
        assert abs(p[0]) < 1e-10 and abs(p[1]) < 1e-10

    def test_matches_closed_form(self, rng):
        for a, th, _ in random_params(rng, 20):
            for t in (0.5, 1.0, 2.0):
                assert np.allclose(geodesic_ode_oracle((a, th, t)), geodesic_point((a, th, t)), atol=1e-6)

    def test_rejects_bad_step(self):
        with pytest.raises(InvalidInput):
            geodesic_ode_oracle((0, 0, 1), step=0.0)


class TestUnitSpeed:
    def test_fd_velocity(self, rng):
        worst = 0.0
        for a, th, t in random_params(rng, 100):
            for s in np.linspace(FD, t, 7):
                worst = max(worst, abs(tangent_norm(geodesic_point((a, th, s)), fd_velocity((a, th, s))) - 1))
        assert worst < 1e-6

    def test_analytic_velocity_matches_fd(self, rng):
        for a, th, t in random_params(rng, 50):
            assert np.allclose(geodesic_velocity((a, th, t)), fd_velocity((a, th, t)), atol=1e-7)

    @settings(max_examples=60, deadline=None)
    @given(st.floats(-math.pi, math.pi), st.floats(-1.57, 1.57), st.floats(0.01, 3.0))
    def test_property(self, a, th, t):
        assert abs(tangent_norm(geodesic_point((a, th, t)), geodesic_velocity((a, th, t))) - 1) < 1e-9


class TestSolver:
    def test_fibre_target(self):
        sol = solve_geodesic(ORIGIN, (0, 0, 1))
        assert abs(sol.params.theta - math.pi / 2) < 1e-9 and abs(sol.params.t - 1) < 1e-9

    def test_straight_target(self):
        sol = solve_geodesic(ORIGIN, (1, 0, 0))
        assert abs(sol.params.theta) < 1e-9 and abs(sol.params.alpha) < 1e-9
        assert abs(sol.params.t - 1) < 1e-9

    def test_triangle_vertex_target(self, ref_triangle):
        sol = solve_geodesic(ORIGIN, ref_triangle[2])
        assert sol.residual < 1e-9
        assert abs(sol.params.t - grid_search_distance(ORIGIN, ref_triangle[2])) < 1e-5

    def test_grid_oracle_between_vertices(self, ref_triangle):
        assert abs(distance(ref_triangle[1], ref_triangle[2]) - grid_search_distance(ref_triangle[1], ref_triangle[2])) < 1e-5

    def test_grid_oracle_random(self, rng):
        for _ in range(4):
            p, q = rng.uniform(-1.5, 1.5, (2, 3))
            assert abs(distance(p, q) - grid_search_distance(p, q)) < 1e-5

    def test_round_trip(self, rng):
        for a, th, t in random_params(rng, 60, t_max=2.0):
            target = geodesic_point((a, th, t))
            sol = solve_geodesic(ORIGIN, target)
            assert np.linalg.norm(np.subtract(geodesic_point(sol.params), target)) < 1e-9
            assert abs(sol.params.t - t) < 1e-9

    def test_coincident(self):
        with pytest.raises(InvalidInput):
            solve_geodesic((1, 1, 1), (1, 1, 1))

    def test_far_target(self):
        with pytest.raises(OutOfModelRange):
            distance(ORIGIN, (0, 0, 40.0))

    def test_branches_sorted(self):
        # a point reached by several geodesics within 2 pi
        sol = solve_geodesic(ORIGIN, (0.0, 0.0, 5.0))
        assert sol.params.t == min(b.t for b in sol.branches)

    def test_principal_agrees_with_multistart(self, rng):
        for p, q in rng.uniform(-1.0, 1.0, (20, 2, 3)):
            assert abs(solve_geodesic(p, q).params.t - distance(p, q)) < 1e-9


class TestInvariance:
    def test_translation_and_rotation(self, rng):
        for _ in range(100):
            p, q, g = rng.uniform(-1.5, 1.5, (3, 3))
            om = rng.uniform(-math.pi, math.pi)
            d = distance(p, q)
            assert abs(distance(translate(p, g), translate(q, g)) - d) < 1e-7
            assert abs(distance(rotate_about_z(p, om), rotate_about_z(q, om)) - d) < 1e-7

    @settings(max_examples=80, deadline=None)
    @given(st.lists(st.floats(-1.5, 1.5), min_size=9, max_size=9))
    def test_symmetry_property(self, v):
        p, q, g = np.array(v).reshape(3, 3)
        if np.linalg.norm(p - q) < 1e-6:
            return
        d = distance(p, q)
        assert abs(distance(q, p) - d) < 1e-9
        assert abs(distance(translate(p, g), translate(q, g)) - d) < 1e-7


class TestPointAtRatio:
    def test_midpoint(self, ref_triangle):
        A, B = ref_triangle[0], ref_triangle[1]
        P = point_at_ratio(A, B, 1.0)
        assert abs(distance(A, P) - distance(P, B)) < 1e-8

    def test_small_ratio_near_a(self, ref_triangle):
        A, B = ref_triangle[0], ref_triangle[1]
        assert np.allclose(point_at_ratio(A, B, 1e-12), A, atol=1e-10)

    @pytest.mark.parametrize("s", [0.5, 1.0, 3.0, -2.0, -0.25])
    def test_round_trip(self, ref_triangle, s):
        A, B = ref_triangle[0], (1.4, 0.6, 0.3)
        assert abs(simple_ratio(A, point_at_ratio(A, B, s), B).value - s) < 1e-6

    def test_too_long_extension(self, ref_triangle):
        with pytest.raises(OutOfModelRange):
            point_at_ratio(ref_triangle[1], ref_triangle[2], -2.0)

    def test_minus_one_rejected(self, ref_triangle):
        with pytest.raises(InvalidInput):
            point_at_ratio(ref_triangle[0], ref_triangle[1], -1.0)


def test_sample_geodesic_matches_points(rng):
    base = (0.3, -0.2, 0.5)
    par = GeodesicParams(0.4, 0.7, 2.0)
    ts = np.linspace(0, 2, 9)
    pts = sample_geodesic(base, par, ts)
    for t, p in zip(ts, pts):
        assert np.allclose(p, geodesic_point_from(base, par.at(t)), atol=1e-14)


def test_geodesic_between_is_principal(ref_triangle):
    par = geodesic_between(ref_triangle[0], ref_triangle[2])
    assert np.allclose(geodesic_point_from(ref_triangle[0], par), ref_triangle[2], atol=1e-10)
    assert abs(par.t - distance(ref_triangle[0], ref_triangle[2])) < 1e-12
