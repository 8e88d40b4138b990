import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from nilgeom import kernels
from nilgeom.errors import (DuplicatePoints, EmptyIntersection, EmptySurface, InvalidInput, InvalidResolution,
                            OutOfModelRange)
from nilgeom.geodesic import distance, geodesic_point
from nilgeom.surfaces import (apollonius_field, apollonius_sample, ball_hull_depth,
                              ball_is_convex, classify_triangle, constraint_errors,
                              fibre_surface_point, lambda_grid, meridian, meridian_min_x,
                              ratios_infeasible,
                              sphere_mesh, sphere_point, triangle_surface_mesh,
                              triangle_surface_point)

from conftest import REF_TRIANGLE
from oracles import ratio_residual_floor


class TestMeridian:
    def test_equator(self):
        assert np.allclose(meridian(1.3, 0.0), (1.3, 0.0), atol=1e-15)

    def test_pole(self):
        X, Z = meridian(1.3, math.pi / 2)
        assert abs(X) < 1e-15 and abs(Z - 1.3) < 1e-15

    @settings(max_examples=60, deadline=None)
    @given(st.floats(0.05, 6.2), st.floats(-1.55, 1.55))
    def test_matches_geodesic_endpoint(self, R, th):
        X, Z = meridian(R, th)
        x, y, z = geodesic_point((0.0, th, R))
        assert abs(X - math.hypot(x, y)) < 1e-10
        assert abs(Z - (z - x * y / 2)) < 1e-10

    def test_vectorised(self):
        th = np.linspace(-1, 1, 7)
        X, Z = meridian(2.0, th)
        assert np.allclose(X, [meridian(2.0, t)[0] for t in th], atol=1e-15)


class TestSphere:
    def test_points_at_distance(self, rng):
        c = (0.3, -0.2, 0.5)
        for R in (0.4, 1.5, 3.0, 5.5):
            for th, al in rng.uniform([-1.5, -math.pi], [1.5, math.pi], (10, 2)):
                assert abs(distance(c, sphere_point(c, R, th, al)) - R) < 1e-7

    def test_mesh_topology(self):
        m = sphere_mesh((0, 0, 0), math.pi / 2, 64, 64)
        assert m.euler_characteristic == 2
        assert np.max(np.abs(kernels.distances(np.zeros(3), m.vertices) - math.pi / 2)) < 1e-6

    def test_small_radius_is_euclidean(self):
        R = 0.1
        m = sphere_mesh((0, 0, 0), R, 20, 20)
        assert np.max(np.abs(np.linalg.norm(m.vertices, axis=1) - R)) < R ** 2

    def test_large_radius_rejected(self):
        with pytest.raises(OutOfModelRange):
            sphere_mesh((0, 0, 0), 2.5 * math.pi, 8, 8)

    def test_bad_inputs(self):
        with pytest.raises(InvalidInput):
            sphere_point((0, 0, 0), -1.0, 0, 0)
        with pytest.raises(InvalidResolution):
            sphere_mesh((0, 0, 0), 1.0, 2, 8)

    def test_embedding_threshold(self):
        assert meridian_min_x(2 * math.pi - 0.01) > 0
        assert meridian_min_x(2 * math.pi + 0.01) < 0

    def test_convexity(self):
        assert ball_is_convex(math.pi / 2, n_theta=40, n_alpha=40)
        assert ball_is_convex(1.0, n_theta=40, n_alpha=40)
        assert not ball_is_convex(2.0, n_theta=40, n_alpha=40)
        assert ball_hull_depth(3.0, 40, 40) > ball_hull_depth(2.0, 40, 40)


class TestApollonius:
    P1, P2 = (0.0, 0.0, 0.0), (1.0, 0.5, 0.3)

    def test_field_values(self):
        d = distance(self.P1, self.P2)
        assert abs(apollonius_field(self.P1, self.P2, 1.0, self.P2) - d) < 1e-12
        assert abs(apollonius_field(self.P1, self.P2, 2.0, self.P1) + 2 * d) < 1e-12
        assert abs(apollonius_field(self.P1, self.P2, math.inf, self.P2)) < 1e-15

    def test_field_sign_separates(self, rng):
        q = rng.uniform(-2, 2, (500, 3))
        f = apollonius_field(self.P1, self.P2, 1.0, q)
        d1, d2 = kernels.distances(np.array(self.P1), q), kernels.distances(np.array(self.P2), q)
        assert np.all(np.sign(f) == np.sign(d1 - d2))

    @pytest.mark.parametrize("lam", [0.5, 1.0, 2.0])
    def test_mesh_ratio(self, lam):
        m = apollonius_sample(self.P1, self.P2, lam, resolution=40)
        assert len(m.faces) > 100
        err = np.abs(m.tags["ratio"] - lam) / lam
        assert np.max(err) < 0.02

    def test_refine_is_exact(self):
        m = apollonius_sample(self.P1, self.P2, 2.0, resolution=24, refine=True)
        assert np.max(np.abs(m.tags["ratio"] - 2.0)) < 1e-8

    def test_empty(self):
        box = (np.array([5.0, 5, 5]), np.array([6.0, 6, 6]))
        with pytest.raises(EmptySurface):
            apollonius_sample(self.P1, self.P2, 1.0, box=box, resolution=8)

    def test_bad(self):
        with pytest.raises(DuplicatePoints):
            apollonius_sample(self.P1, self.P1, 1.0)
        with pytest.raises(InvalidInput):
            apollonius_sample(self.P1, self.P2, -1.0)


class TestTriangleSurface:
    def test_classify(self, ref_triangle):
        assert classify_triangle(*ref_triangle) == "general-type"
        assert classify_triangle((0, 0, 0), (1, 1, 5), (2, 2, -1)) == "fibre-type"

    def test_corners(self, ref_triangle):
        A0, A1, A2 = ref_triangle
        assert triangle_surface_point(*ref_triangle, 0.0, 1.0).point == A0
        assert triangle_surface_point(*ref_triangle, 1.0, 0.0).point == A2
        assert triangle_surface_point(*ref_triangle, math.inf, 1.0).point == A1
        with pytest.raises(InvalidInput):
            triangle_surface_point(*ref_triangle, 0.0, 0.0)

    def test_unit_ratios(self, ref_triangle):
        sp = triangle_surface_point(*ref_triangle, 1.0, 1.0)
        assert max(constraint_errors(*ref_triangle, sp.point, 1.0, 1.0)) < 1e-8
        assert not sp.ambiguous
        # nearest to A0 among feasible points it found
        assert sp.d0 <= distance(ref_triangle[0], sp.point) + 1e-12

    def test_deterministic(self, ref_triangle):
        a = triangle_surface_point(*ref_triangle, 0.7, 1.6)
        b = triangle_surface_point(*ref_triangle, 0.7, 1.6)
        assert a.point == b.point

    def test_infeasible_certificate(self, ref_triangle):
        assert ratios_infeasible(*ref_triangle, 1.0, 0.1)           # Q near A2 cannot be equidistant from A0, A1
        assert not ratios_infeasible(*ref_triangle, 1.0, 1.0)
        with pytest.raises(EmptyIntersection, match="triangle inequality"):
            triangle_surface_point(*ref_triangle, 1.0, 0.1)

    def test_certificate_never_rejects_real_points(self, ref_triangle, rng):
        for q in rng.uniform(-2, 2, (200, 3)):
            d = [distance(v, q) for v in ref_triangle]
            assert not ratios_infeasible(*ref_triangle, d[0] / d[1], d[2] / d[0])

    def test_lambda_grid(self):
        g = lambda_grid(4)
        assert g[0] == 0 and math.isinf(g[-1]) and len(g) == 5
        assert abs(g[2] - 1.0) < 1e-15

    @pytest.mark.slow
    def test_small_mesh(self, ref_triangle):
        surf, mesh = triangle_surface_mesh(*ref_triangle, n=4, jobs=2)
        assert len(mesh.faces) > 0 and len(surf.holes) < (len(surf.lam) - 2) ** 2
        for (l1, l2), _ in surf.holes:
            # holes only where the constraint set is empty
            assert (l1, l2) == (0, 0) or ratios_infeasible(*ref_triangle, l1, l2) or \
                ratio_residual_floor(ref_triangle, l1, l2, starts=20) > 1e-4
        for i, l1 in enumerate(surf.lam[1:-1], 1):
            for j, l2 in enumerate(surf.lam[1:-1], 1):
                if np.all(np.isfinite(surf.points[i, j])):
                    assert max(constraint_errors(*ref_triangle, surf.points[i, j], l1, l2)) < 1e-6

    def test_fibre_lookup_recovers_point(self, ref_triangle):
        sp = triangle_surface_point(*ref_triangle, 1.0, 1.0)
        hit = fibre_surface_point(*ref_triangle, sp.point[:2], z_hint=sp.point[2])
        assert hit is not None
        assert np.linalg.norm(np.subtract(hit.point, sp.point)) < 1e-5
