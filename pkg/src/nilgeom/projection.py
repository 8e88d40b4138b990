"""Fibre projection to the base plane and the arcs geodesics project to.

Orientation convention: a geodesic with ``theta > 0`` projects to a
counter-clockwise arc, ``theta < 0`` to a clockwise one.  The arc angle of
the projected point at arc length ``t`` is ``alpha - sign(w) pi/2 + w t``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Optional

import numpy as np

from .core import Point
from .errors import DuplicatePoints, InvalidInput, TargetNotOnArc
from .geodesic import GeodesicParams

TWO_PI = 2.0 * math.pi
COLLINEAR_TOL = 1e-9
ON_ARC_TOL = 1e-9
FIBRE_W = 1.0 - 1e-15


class Point2D(NamedTuple):
    x: float
    y: float


@dataclass(frozen=True)
class ArcDescriptor:
    """A circle arc, line segment or single point in the base plane.

    ``start_angle``/``end_angle`` are unwrapped: ``end_angle - start_angle``
    is the signed sweep, its sign the orientation.
    """
    kind: str
    start: Point2D
    end: Point2D
    center: Optional[Point2D] = None
    radius: Optional[float] = None
    start_angle: float = 0.0
    end_angle: float = 0.0
    orientation: int = 0
    params: Optional[GeodesicParams] = None
    base: Optional[Point] = None

    @property
    def sweep(self) -> float:
        return self.end_angle - self.start_angle


def fibre_project(p) -> Point2D:
    return Point2D(float(p[0]), float(p[1]))


def projected_arc(base, params) -> ArcDescriptor:
    alpha, theta, t = (float(v) for v in params)
    params = GeodesicParams(alpha, theta, t)
    base = Point(*(float(v) for v in base))
    c, w = math.cos(theta), math.sin(theta)
    start = Point2D(base.x, base.y)
    if abs(w) >= FIBRE_W or c <= 0.0:
        return ArcDescriptor("degenerate-point", start, start, params=params, base=base)
    if w == 0.0:
        end = Point2D(base.x + t * math.cos(alpha), base.y + t * math.sin(alpha))
        return ArcDescriptor("line-segment", start, end, params=params, base=base)
    k = c / w
    center = Point2D(base.x - k * math.sin(alpha), base.y + k * math.cos(alpha))
    a0 = alpha - math.copysign(math.pi / 2, w)
    a1 = a0 + w * t
    r = abs(k)
    end = Point2D(center.x + r * math.cos(a1), center.y + r * math.sin(a1))
    return ArcDescriptor("circle-arc", start, end, center, r, a0, a1,
                         1 if w > 0 else -1, params, base)


def arc_point(arc: ArcDescriptor, f: float) -> Point2D:
    """Point at parameter fraction ``f`` (0 at start, 1 at end; may extrapolate)."""
    if arc.kind == "circle-arc":
        a = arc.start_angle + f * arc.sweep
        return Point2D(arc.center.x + arc.radius * math.cos(a), arc.center.y + arc.radius * math.sin(a))
    return Point2D(arc.start.x + f * (arc.end.x - arc.start.x), arc.start.y + f * (arc.end.y - arc.start.y))


def arc_points(arc: ArcDescriptor, fs) -> np.ndarray:
    fs = np.asarray(fs, dtype=float)
    if arc.kind == "circle-arc":
        a = arc.start_angle + fs * arc.sweep
        return np.column_stack([arc.center.x + arc.radius * np.cos(a), arc.center.y + arc.radius * np.sin(a)])
    s, e = np.array(arc.start), np.array(arc.end)
    return s + fs[:, None] * (e - s)


def total_length(arc: ArcDescriptor) -> float:
    if arc.kind == "circle-arc":
        return arc.radius * abs(arc.sweep)
    if arc.kind == "line-segment":
        return math.hypot(arc.end.x - arc.start.x, arc.end.y - arc.start.y)
    return 0.0


def arc_length(arc: ArcDescriptor, f1: float = 0.0, f2: float = 1.0) -> float:
    """Euclidean length of the sub-arc between parameter fractions ``f1 <= f2``.

    For projected geodesics the fraction is ``t_i / t`` of the generating
    arc length, and the result equals ``(t2 - t1) cos(theta)``.
    """
    if f2 < f1:
        raise InvalidInput("need f1 <= f2")
    return (f2 - f1) * total_length(arc)


def locate(arc: ArcDescriptor, p) -> tuple[float, float]:
    """``(fraction, distance)`` of ``p`` relative to the arc.

    The fraction is the parameter of the closest point on the full circle or
    line, unwrapped to lie nearest the arc's span; the distance is to the arc
    itself (endpoints included).
    """
    px, py = float(p[0]), float(p[1])
    if arc.kind == "degenerate-point":
        return 0.0, math.hypot(px - arc.start.x, py - arc.start.y)
    if arc.kind == "line-segment":
        dx, dy = arc.end.x - arc.start.x, arc.end.y - arc.start.y
        ll = dx * dx + dy * dy
        f = ((px - arc.start.x) * dx + (py - arc.start.y) * dy) / ll
    else:
        phi = math.atan2(py - arc.center.y, px - arc.center.x)
        sweep = arc.sweep
        rel = (phi - arc.start_angle) * arc.orientation % TWO_PI
        # rel in [0, 2pi): either ahead of start or, wrapped, behind it
        f_ahead = rel / abs(sweep)
        f_behind = (rel - TWO_PI) / abs(sweep)
        f = f_ahead if f_ahead - 1.0 <= -f_behind else f_behind
    fc = min(max(f, 0.0), 1.0)
    q = arc_point(arc, fc)
    return f, math.hypot(px - q.x, py - q.y)


def circle_through(p1, p2, p3) -> ArcDescriptor:
    """Arc from ``p1`` through ``p2`` to ``p3``, or the segment ``p1 p3`` if collinear."""
    p1, p2, p3 = (Point2D(float(p[0]), float(p[1])) for p in (p1, p2, p3))
    for a, b in ((p1, p2), (p2, p3), (p1, p3)):
        if a == b:
            raise DuplicatePoints(f"repeated point {a}")
    bx, by = p2.x - p1.x, p2.y - p1.y
    cx, cy = p3.x - p1.x, p3.y - p1.y
    cross = bx * cy - by * cx
    if abs(0.5 * cross) <= COLLINEAR_TOL:
        return ArcDescriptor("line-segment", p1, p3)
    b2, c2 = bx * bx + by * by, cx * cx + cy * cy
    ux = (cy * b2 - by * c2) / (2.0 * cross)
    uy = (bx * c2 - cx * b2) / (2.0 * cross)
    center = Point2D(p1.x + ux, p1.y + uy)
    r = math.hypot(ux, uy)
    orient = 1 if cross > 0 else -1
    a1 = math.atan2(p1.y - center.y, p1.x - center.x)
    a3 = math.atan2(p3.y - center.y, p3.x - center.x)
    sweep = orient * ((a3 - a1) * orient % TWO_PI)
    return ArcDescriptor("circle-arc", p1, p3, center, r, a1, a1 + sweep, orient)


def lift_arc_params(arc: ArcDescriptor, target2d) -> GeodesicParams:
    """Geodesic from the arc's start whose projection runs along the arc to ``target2d``."""
    tx, ty = float(target2d[0]), float(target2d[1])
    if arc.kind == "degenerate-point":
        if math.hypot(tx - arc.start.x, ty - arc.start.y) > ON_ARC_TOL:
            raise TargetNotOnArc("a fibre geodesic projects to a single point")
        if arc.params is not None:
            return arc.params
        return GeodesicParams(0.0, math.pi / 2, 0.0)
    if arc.kind == "line-segment":
        f, dist = locate(arc, (tx, ty))
        if dist > ON_ARC_TOL:
            raise TargetNotOnArc(f"target is {dist:.3g} from the segment")
        alpha = math.atan2(arc.end.y - arc.start.y, arc.end.x - arc.start.x)
        return GeodesicParams(alpha, 0.0, math.hypot(tx - arc.start.x, ty - arc.start.y))
    if abs(arc.sweep) >= TWO_PI:
        raise InvalidInput("arc winds a full turn; the lift is not unique")
    f, dist = locate(arc, (tx, ty))
    if dist > ON_ARC_TOL:
        raise TargetNotOnArc(f"target is {dist:.3g} from the arc")
    theta = math.copysign(math.atan(1.0 / arc.radius), arc.orientation)
    alpha = arc.start_angle + arc.orientation * math.pi / 2
    alpha = (alpha + math.pi) % TWO_PI - math.pi
    length = max(f, 0.0) * total_length(arc)
    return GeodesicParams(alpha, theta, length / math.cos(theta))


def _circle_line(center, r, p, d):
    # points p + s d on the circle
    fx, fy = p[0] - center[0], p[1] - center[1]
    a = d[0] * d[0] + d[1] * d[1]
    b = 2.0 * (fx * d[0] + fy * d[1])
    c = fx * fx + fy * fy - r * r
    disc = b * b - 4.0 * a * c
    if disc < -1e-10 * max(1.0, b * b):
        return []
    if abs(disc) <= 1e-10 * max(1.0, b * b):
        return [-b / (2.0 * a)]
    sq = math.sqrt(disc)
    return [(-b - sq) / (2.0 * a), (-b + sq) / (2.0 * a)]


def intersect_arcs(a: ArcDescriptor, b: ArcDescriptor, tol: float = 1e-9) -> list[Point2D]:
    """Intersection points of two arcs/segments, filtered to both spans.

    Near-tangent circle pairs (discriminant below 1e-10) count as one point.
    """
    cands: list[Point2D] = []
    if a.kind == "degenerate-point" or b.kind == "degenerate-point":
        return []
    if a.kind == "circle-arc" and b.kind == "circle-arc":
        dx, dy = b.center.x - a.center.x, b.center.y - a.center.y
        d = math.hypot(dx, dy)
        if d == 0.0:
            return []
        along = (d * d + a.radius ** 2 - b.radius ** 2) / (2.0 * d)
        h2 = a.radius ** 2 - along ** 2
        if h2 < -1e-10 * a.radius ** 2:
            return []
        mx, my = a.center.x + along * dx / d, a.center.y + along * dy / d
        if h2 <= 1e-10 * a.radius ** 2:
            cands = [Point2D(mx, my)]
        else:
            h = math.sqrt(h2)
            cands = [Point2D(mx - h * dy / d, my + h * dx / d), Point2D(mx + h * dy / d, my - h * dx / d)]
    elif a.kind == "line-segment" and b.kind == "line-segment":
        d1 = (a.end.x - a.start.x, a.end.y - a.start.y)
        d2 = (b.end.x - b.start.x, b.end.y - b.start.y)
        den = d1[0] * d2[1] - d1[1] * d2[0]
        if den == 0.0:
            return []
        s = ((b.start.x - a.start.x) * d2[1] - (b.start.y - a.start.y) * d2[0]) / den
        cands = [Point2D(a.start.x + s * d1[0], a.start.y + s * d1[1])]
    else:
        circ, line = (a, b) if a.kind == "circle-arc" else (b, a)
        d = (line.end.x - line.start.x, line.end.y - line.start.y)
        for s in _circle_line(circ.center, circ.radius, line.start, d):
            cands.append(Point2D(line.start.x + s * d[0], line.start.y + s * d[1]))
    return [p for p in cands if locate(a, p)[1] <= tol and locate(b, p)[1] <= tol]
