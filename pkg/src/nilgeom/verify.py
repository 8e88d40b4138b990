"""Deterministic invariant suites behind ``nilgeom verify``.

Each suite draws its samples from ``numpy.random.default_rng(seed)`` and
records one :class:`~nilgeom.io.Check` per invariant: the worst measured
deviation against its tolerance.
"""
from __future__ import annotations

import math

import numpy as np

from . import kernels
from .core import rotate_about, symmetric_height, tangent_norm, translate
from .geodesic import (GeodesicParams, distance, geodesic_ode_oracle, geodesic_point,
                       geodesic_point_from)
from .io import Report
from .projection import locate, projected_arc
from .surfaces import ball_hull_depth, meridian_min_x
from .triangle import ceva_config

REFERENCE_TRIANGLE = ((1.0, 0.0, 0.0), (1.0 / 3.0, 2.0, 1.0), (0.5, -1.0, 1.0))
CEVA_GRID = (0.25, 0.5, 1.0, 2.0, 4.0)
FD_STEP = 1e-6


def _params(rng, n, t_max):
    return np.column_stack([rng.uniform(-math.pi, math.pi, n),
                            rng.uniform(-math.pi / 2 + 1e-3, math.pi / 2 - 1e-3, n),
                            rng.uniform(0.05, t_max, n)])


def fd_speed(params, h: float = FD_STEP) -> float:
    """Metric norm of the central-difference velocity."""
    a, th, s = params
    v = (np.subtract(geodesic_point((a, th, s + h)), geodesic_point((a, th, s - h)))) / (2.0 * h)
    return tangent_norm(geodesic_point((a, th, s)), v)


def suite_geodesic(report: Report, rng, n: int = 40) -> None:
    speed = 0.0
    oracle = 0.0
    for a, th, t in _params(rng, n, 3.0):
        for s in np.linspace(FD_STEP, t, 5):
            speed = max(speed, abs(fd_speed((a, th, s)) - 1.0))
        oracle = max(oracle, float(np.linalg.norm(np.subtract(
            geodesic_point((a, th, t)), geodesic_ode_oracle((a, th, t), step=2e-2)))))
    report.check("unit-speed", "geodesic:unit-speed", speed, 1e-6)
    report.check("closed-form-vs-ode", "geodesic:closed-form", oracle, 1e-6)


def suite_isometry(report: Report, rng, n: int = 40) -> None:
    worst_t = worst_r = worst_h = 0.0
    for _ in range(n):
        p, q, g, c = rng.uniform(-1.0, 1.0, (4, 3))
        d = distance(p, q)
        worst_t = max(worst_t, abs(distance(translate(p, g), translate(q, g)) - d))
        om = rng.uniform(-math.pi, math.pi)
        worst_r = max(worst_r, abs(distance(rotate_about(p, c, om), rotate_about(q, c, om)) - d))
        worst_h = max(worst_h, abs(symmetric_height(rotate_about(p, (0, 0, 0), om)) - symmetric_height(p)))
    report.check("translation-invariance", "distance:translation-invariance", worst_t, 1e-7)
    report.check("rotation-invariance", "distance:rotation-invariance", worst_r, 1e-7)
    report.check("rotation-height", "isometry:rotation-height", worst_h, 1e-12)


def suite_projection(report: Report, rng, n: int = 400) -> None:
    worst = 0.0
    for a, th, t in _params(rng, n, 3.0):
        base = rng.uniform(-2.0, 2.0, 3)
        arc = projected_arc(base, (a, th, t))
        if arc.kind != "circle-arc":
            continue
        p = geodesic_point_from(base, GeodesicParams(a, th, rng.uniform(0.0, t)))
        worst = max(worst, abs(math.hypot(p[0] - arc.center.x, p[1] - arc.center.y) - arc.radius))
    report.check("projected-circle", "projection:circle-law", worst, 1e-10)


def suite_ratios(report: Report, rng, n: int = 100) -> None:
    worst = 0.0
    for a, th, t in _params(rng, n, 3.0):
        base = rng.uniform(-1.0, 1.0, 3)
        arc = projected_arc(base, (a, th, t))
        if arc.kind == "degenerate-point":
            continue
        s = rng.uniform(0.1, 0.9) * t
        A = base
        P = geodesic_point_from(base, GeodesicParams(a, th, s))
        B = geodesic_point_from(base, GeodesicParams(a, th, t))
        f = locate(arc, P[:2])[0]
        arc_ratio = f / (1.0 - f)
        # t <= 3 keeps the generating geodesic minimizing, so these are its pieces
        dist_ratio = kernels.distance(*A, *P) / kernels.distance(*P, *B)
        worst = max(worst, abs(arc_ratio - dist_ratio))
    report.check("arc-ratio", "projection:ratio-preservation", worst, 1e-8)


def suite_ceva(report: Report, rng) -> None:
    worst_n = worst_c = 0.0
    warns = 0
    for d1 in CEVA_GRID:
        for d2 in CEVA_GRID:
            cfg = ceva_config(*REFERENCE_TRIANGLE, d1, d2, lift=False)
            worst_n = max(worst_n, abs(cfg.product - 1.0))
            worst_c = max(worst_c, abs(cfg.product_projected - 1.0))
            warns += bool(cfg.warnings)
    report.check("ceva-product", "ceva:distance-product", worst_n, 1e-6)
    report.check("ceva-projected-product", "ceva:projected-product", worst_c, 1e-6)
    if warns:
        report.warnings.append(f"{warns} of 25 Ceva configurations carry warnings (third cevian miss)")


def suite_sphere(report: Report, rng) -> None:
    inside = min(meridian_min_x(R) for R in (1.0, 3.0, 6.0, 2 * math.pi - 0.01))
    outside = max(meridian_min_x(R) for R in (2 * math.pi + 0.05, 7.0))
    report.check("meridian-positive", "sphere:embedding-threshold", inside, 0.0, passed=inside > 0.0)
    report.check("meridian-sign-change", "sphere:embedding-threshold", outside, 0.0, passed=outside < 0.0)
    convex = ball_hull_depth(math.pi / 2, 40, 40)
    concave = ball_hull_depth(2.0, 40, 40)
    report.check("ball-convex", "sphere:convexity-threshold", convex, 1e-9)
    report.check("ball-nonconvex", "sphere:convexity-threshold", concave, 1e-9, passed=concave > 1e-9)


SUITES = {
    "geodesic": suite_geodesic,
    "isometry": suite_isometry,
    "projection": suite_projection,
    "ratios": suite_ratios,
    "ceva": suite_ceva,
    "sphere": suite_sphere,
}


def run(suite: str = "all", seed: int = 0) -> Report:
    names = list(SUITES) if suite == "all" else [suite]
    report = Report("verify", {"suite": suite, "seed": int(seed)})
    for name in names:
        if name not in SUITES:
            from .errors import InvalidInput
            raise InvalidInput(f"unknown suite {name!r}; choose from all, {', '.join(SUITES)}")
        SUITES[name](report, np.random.default_rng([int(seed), list(SUITES).index(name)]))
    report.results = {"suites": names, "checks": len(report.checks),
                      "failed": [c.name for c in report.checks if not c.passed]}
    return report
