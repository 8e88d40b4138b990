import math

import numpy as np
import pytest

from nilgeom.errors import (BothMidpoints, DuplicatePoints, InvalidInput, NotOnLine,
                            NotOnSurface, OutOfModelRange, ThirdCevianMiss)
from nilgeom.geodesic import geodesic_between, point_at_ratio, sample_geodesic
from nilgeom.projection import fibre_project, locate
from nilgeom.surfaces import triangle_surface_point
from nilgeom.triangle import (ceva_config, ceva_ratios, menelaus_point, menelaus_product,
                              simple_ratio, surface_line)

from conftest import REF_TRIANGLE

A0, A1, A2 = REF_TRIANGLE


class TestSimpleRatio:
    def test_midpoint(self):
        m = point_at_ratio(A0, A1, 1.0)
        assert abs(simple_ratio(A0, m, A1).value - 1.0) < 1e-9

    def test_beyond(self):
        p = point_at_ratio(A0, A2, -2.0)
        assert abs(simple_ratio(A0, p, A2).value + 2.0) < 1e-6

    @pytest.mark.parametrize("s", [0.5, 1.0, 3.0, -2.0, -0.25])
    def test_round_trip(self, s):
        assert abs(simple_ratio(A0, point_at_ratio(A0, A2, s), A2).value - s) < 1e-6

    def test_off_line(self):
        with pytest.raises(NotOnLine):
            simple_ratio(A0, (0.0, 0.0, 3.0), A1)

    def test_duplicates(self):
        with pytest.raises(DuplicatePoints):
            simple_ratio(A0, A0, A1)


class TestMenelaus:
    def test_example(self):
        # on the reference triangle this extension would need t > 2 pi
        B0, B1, B2 = (0.0, 0.0, 0.0), (1.0, 0.0, 0.0), (0.0, 1.0, 0.2)
        P1 = point_at_ratio(B1, B0, 1.0)
        P2 = point_at_ratio(B0, B2, 2.0)
        P3 = menelaus_point(B0, B1, B2, P1, P2)
        assert abs(simple_ratio(B1, P3, B2).value + 0.5) < 1e-6

    def test_extension_limit(self):
        with pytest.raises(OutOfModelRange):
            menelaus_point(A0, A1, A2, point_at_ratio(A1, A0, 1.0), point_at_ratio(A0, A2, 2.0))

    @pytest.mark.parametrize("s1,s2", [(0.5, 0.7), (2.0, 1.5), (1.0, 3.0), (0.4, 0.9)])
    def test_product(self, s1, s2):
        P1 = point_at_ratio(A1, A0, s1)
        P2 = point_at_ratio(A0, A2, s2)
        P3 = menelaus_point(A0, A1, A2, P1, P2)
        assert abs(menelaus_product(A0, A1, A2, P1, P2, P3) + 1.0) < 1e-6

    def test_both_midpoints(self):
        with pytest.raises(BothMidpoints):
            menelaus_point(A0, A1, A2, point_at_ratio(A1, A0, 1.0), point_at_ratio(A0, A2, 1.0))

    def test_exterior_rejected(self):
        with pytest.raises(InvalidInput):
            menelaus_point(A0, A1, A2, point_at_ratio(A1, A0, -2.0), point_at_ratio(A0, A2, 1.5))


class TestSurfaceLine:
    def test_fibre_segment(self):
        line = surface_line(REF_TRIANGLE, (0.7, 0.2, 0.1), (0.7, 0.2, 0.9), check=False)
        assert line.case == "fibre-segment"
        assert np.allclose(line.points[:, :2], (0.7, 0.2))

    def test_side_geodesic(self):
        P, Q = point_at_ratio(A0, A1, 0.4), point_at_ratio(A0, A1, 2.5)
        line = surface_line(REF_TRIANGLE, P, Q)
        assert line.case == "side-geodesic"
        par = geodesic_between(A0, A1)
        ts = np.linspace(par.t * 0.4 / 1.4, par.t * 2.5 / 3.5, len(line.points))
        assert np.max(np.linalg.norm(line.points - sample_geodesic(A0, par, ts), axis=1)) < 1e-6

    def test_side_geodesic_through_vertex(self):
        Q = point_at_ratio(A2, A0, 0.8)
        line = surface_line(REF_TRIANGLE, A2, Q)
        assert line.case == "side-geodesic"

    def test_midpoint_case(self):
        M1, M2 = point_at_ratio(A0, A1, 1.0), point_at_ratio(A0, A2, 1.0)
        line = surface_line(REF_TRIANGLE, M1, M2, sample=False)
        assert line.case == "midpoint-case"
        assert abs(line.theta - geodesic_between(A1, A2).theta) < 1e-9

    def test_menelaus_arc(self):
        P1, P2 = point_at_ratio(A1, A0, 0.6), point_at_ratio(A0, A2, 0.5)
        line = surface_line(REF_TRIANGLE, P1, P2, n_samples=7)
        assert line.case == "menelaus-arc"
        P3 = menelaus_point(A0, A1, A2, P1, P2)
        assert np.allclose(line.anchor, P3, atol=1e-12)
        # the three projections are concyclic
        for p in (P1, P2, P3):
            assert locate(line.arc, fibre_project(p))[1] < 1e-9 or p is P3
        arc = line.arc
        r3 = math.hypot(P3[0] - arc.center.x, P3[1] - arc.center.y)
        assert abs(r3 - arc.radius) < 1e-9
        # every lifted sample sits on the surface above the arc
        for q in line.points:
            assert locate(arc, q[:2])[1] < 1e-9

    def test_not_on_surface(self):
        with pytest.raises(NotOnSurface):
            surface_line(REF_TRIANGLE, (0.7, 0.2, 5.0), point_at_ratio(A0, A1, 0.5))

    def test_interior_endpoints(self):
        Q1 = triangle_surface_point(*REF_TRIANGLE, 1.0, 1.0).point
        Q2 = point_at_ratio(A1, A2, 0.7)
        line = surface_line(REF_TRIANGLE, Q1, Q2, sample=False)
        assert line.case in ("interior-arc", "menelaus-arc")
        assert line.roots >= 1 and len(line.alternatives) == line.roots - 1


class TestCeva:
    def test_median(self):
        cfg = ceva_config(*REF_TRIANGLE, 1.0, 1.0, lift=False)
        assert abs(cfg.product - 1.0) < 1e-8
        assert all(abs(r - 1.0) < 1e-8 for r in ceva_ratios(cfg))

    @pytest.mark.parametrize("d1,d2", [(2.0, 0.5), (3.0, 2.0), (0.25, 4.0)])
    def test_products(self, d1, d2):
        cfg = ceva_config(*REF_TRIANGLE, d1, d2, lift=False)
        assert abs(cfg.product - 1.0) < 1e-6
        assert abs(cfg.product_projected - 1.0) < 1e-6

    def test_lifted_point(self):
        cfg = ceva_config(*REF_TRIANGLE, 1.0, 1.0)
        assert cfg.T is not None
        assert np.allclose(cfg.T[:2], cfg.T_star, atol=1e-12)

    def test_strict_miss(self):
        # skewed ratios: the third projected cevian does not pass through T*
        cfg = ceva_config(*REF_TRIANGLE, 4.0, 0.25, lift=False)
        if cfg.third_cevian_miss > 1e-4:
            with pytest.raises(ThirdCevianMiss):
                ceva_config(*REF_TRIANGLE, 4.0, 0.25, lift=False, strict=True)
            assert cfg.warnings

    @pytest.mark.parametrize("d1,d2", [(0.0, 1.0), (-1.0, 2.0), (1.0, math.inf)])
    def test_rejects(self, d1, d2):
        with pytest.raises(InvalidInput):
            ceva_config(*REF_TRIANGLE, d1, d2)
