"""Simple ratios, the Menelaus condition, surface lines and Ceva configurations.

Side ``k`` of a triangle joins vertices ``SIDES[k]`` and is oriented from
the first to the second.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy.optimize import brentq

from . import kernels
from .core import Point, as_point
from .errors import (ArcSurfaceMiss, BothMidpoints, DegenerateProjection,
                     DuplicatePoints, InvalidInput, NoArcIntersection,
                     NotOnLine, NotOnSurface, OutOfModelRange, ThirdCevianMiss)
from .geodesic import (GeodesicParams, geodesic_between, geodesic_point_from,
                       point_at_ratio, sample_geodesic)
from .projection import (ArcDescriptor, Point2D, circle_through, fibre_project,
                         intersect_arcs, lift_arc_params, locate, projected_arc)
from .surfaces import classify_triangle, fibre_surface_point, on_surface

SIDES = ((0, 1), (1, 2), (2, 0))
LINE_TOL = 1e-6
BETWEEN_TOL = 1e-7
ON_SIDE_TOL = 1e-7
MIDPOINT_TOL = 1e-7
FIBRE_TOL = 1e-10
SURFACE_TOL = 1e-5
MENELAUS_CONSTANT = -1.0


# --------------------------------------------------------------------------
# simple ratios
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class SimpleRatio:
    value: float
    residual: float


def _dist(p, q):
    return kernels.distance(*map(float, p), *map(float, q))


def simple_ratio(A, P, B) -> SimpleRatio:
    """Signed ratio ``d(A,P)/d(P,B)``: positive when ``P`` lies between ``A`` and ``B``.

    ``residual`` is the model-coordinate gap between ``P`` and the geodesic
    line ``AB``, measured by walking from whichever endpoint fits better.
    """
    A, P, B = as_point(A), as_point(P), as_point(B)
    if A == P or P == B or A == B:
        raise DuplicatePoints("simple ratio needs three distinct points")
    dap, dpb, dab = _dist(A, P), _dist(P, B), _dist(A, B)
    from_a = geodesic_point_from(A, geodesic_between(A, B).at(dap))
    from_b = geodesic_point_from(B, geodesic_between(B, A).at(dpb))
    residual = min(float(np.linalg.norm(np.subtract(from_a, P))),
                   float(np.linalg.norm(np.subtract(from_b, P))))
    if residual > LINE_TOL:
        raise NotOnLine(f"point is {residual:.3g} off the geodesic line")
    between = abs(dap + dpb - dab) <= BETWEEN_TOL
    value = dap / dpb
    return SimpleRatio(value if between else -value, residual)


def _interior_ratio(A, P, B) -> float:
    r = simple_ratio(A, P, B).value
    if not r > 0:
        raise InvalidInput("point is not strictly inside the segment")
    return r


def menelaus_point(Ai, Aj, Ak, P1, P2, constant: float = MENELAUS_CONSTANT) -> Point:
    """Third Menelaus point on the extension of ``AjAk``.

    ``P1`` is interior to ``AiAj`` and ``P2`` interior to ``AiAk``; the
    result ``P3`` has ``s(Aj,P3,Ak) = constant / (s(Aj,P1,Ai) s(Ai,P2,Ak))``.
    """
    if not constant < 0:
        raise InvalidInput("the Menelaus constant must be negative")
    s1 = _interior_ratio(Aj, P1, Ai)
    s2 = _interior_ratio(Ai, P2, Ak)
    if abs(s1 - 1.0) <= MIDPOINT_TOL and abs(s2 - 1.0) <= MIDPOINT_TOL:
        raise BothMidpoints("both points are midpoints; use the parallel-side rule")
    return point_at_ratio(Aj, Ak, constant / (s1 * s2))


def menelaus_product(Ai, Aj, Ak, P1, P2, P3) -> float:
    """Re-measured ``s(Aj,P1,Ai) s(Ai,P2,Ak) s(Aj,P3,Ak)``."""
    return (simple_ratio(Aj, P1, Ai).value * simple_ratio(Ai, P2, Ak).value
            * simple_ratio(Aj, P3, Ak).value)


# --------------------------------------------------------------------------
# triangle bookkeeping
# --------------------------------------------------------------------------

class _Triangle:
    def __init__(self, verts):
        self.A = tuple(as_point(v) for v in verts)
        if len(set(self.A)) < 3:
            raise DuplicatePoints("triangle vertices must be distinct")
        self.params = [geodesic_between(self.A[a], self.A[b]) for a, b in SIDES]
        self.arcs = [projected_arc(self.A[a], p) for (a, _), p in zip(SIDES, self.params)]
        self.proj = [fibre_project(v) for v in self.A]

    def vertex_index(self, p) -> Optional[int]:
        for k, v in enumerate(self.A):
            if np.linalg.norm(np.subtract(p, v)) <= 1e-12:
                return k
        return None

    def side_of(self, p):
        """``(side, fraction)`` of a point on a side interior, else ``None``."""
        best = None
        for k, (a, b) in enumerate(SIDES):
            da, db = _dist(self.A[a], p), _dist(p, self.A[b])
            total = self.params[k].t
            gap = abs(da + db - total)
            if gap <= ON_SIDE_TOL and 0 < da < total and (best is None or gap < best[2]):
                best = (k, da / total, gap)
        return None if best is None else best[:2]

    def inside(self, q2d, n: int = 256) -> bool:
        """Point-in-region test against the projected triangle's boundary."""
        poly = np.vstack([_arc_samples(arc, n)[:-1] for arc in self.arcs])
        x, y = q2d
        xs, ys = poly[:, 0], poly[:, 1]
        xn, yn = np.roll(xs, -1), np.roll(ys, -1)
        crosses = ((ys > y) != (yn > y)) & (x < (xn - xs) * (y - ys) / np.where(yn == ys, 1e-300, yn - ys) + xs)
        return bool(np.count_nonzero(crosses) % 2)


def _arc_samples(arc: ArcDescriptor, n: int) -> np.ndarray:
    from .projection import arc_points
    return arc_points(arc, np.linspace(0.0, 1.0, n))


def _side_ratio(side, frac, first):
    """``s(first, Q, other)`` for ``Q`` at ``frac`` along ``side`` from its start vertex."""
    a, _ = SIDES[side]
    f = frac if first == a else 1.0 - frac
    return f / (1.0 - f)


# --------------------------------------------------------------------------
# base-plane curves through two points
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class _Curve:
    """Circle (or line when ``radius`` is None) with a traversal direction at ``P1*``."""
    center: Optional[Point2D]
    radius: Optional[float]
    orientation: int
    p1: Point2D
    direction: tuple = (0.0, 0.0)

    def arc_to(self, p2) -> ArcDescriptor:
        if self.radius is None:
            return ArcDescriptor("line-segment", self.p1, Point2D(*p2))
        a1 = math.atan2(self.p1.y - self.center.y, self.p1.x - self.center.x)
        a2 = math.atan2(p2[1] - self.center.y, p2[0] - self.center.x)
        sweep = self.orientation * ((a2 - a1) * self.orientation % (2 * math.pi))
        return ArcDescriptor("circle-arc", self.p1, Point2D(*p2), self.center, self.radius,
                             a1, a1 + sweep, self.orientation)

    def param(self, q) -> float:
        """Position of ``q`` along the traversal: angle in [0, 2pi) or signed length."""
        if self.radius is None:
            return (q[0] - self.p1.x) * self.direction[0] + (q[1] - self.p1.y) * self.direction[1]
        a1 = math.atan2(self.p1.y - self.center.y, self.p1.x - self.center.x)
        a = math.atan2(q[1] - self.center.y, q[0] - self.center.x)
        return (a - a1) * self.orientation % (2 * math.pi)

    def full(self) -> ArcDescriptor:
        if self.radius is None:
            far = 1e3
            s = Point2D(self.p1.x - far * self.direction[0], self.p1.y - far * self.direction[1])
            e = Point2D(self.p1.x + far * self.direction[0], self.p1.y + far * self.direction[1])
            return ArcDescriptor("line-segment", s, e)
        a1 = math.atan2(self.p1.y - self.center.y, self.p1.x - self.center.x)
        return ArcDescriptor("circle-arc", self.p1, self.p1, self.center, self.radius,
                             a1, a1 + self.orientation * (2 * math.pi - 1e-12), self.orientation)


def _curve_from_arc(arc: ArcDescriptor) -> _Curve:
    if arc.kind == "line-segment":
        dx, dy = arc.end.x - arc.start.x, arc.end.y - arc.start.y
        n = math.hypot(dx, dy)
        return _Curve(None, None, 0, arc.start, (dx / n, dy / n))
    return _Curve(arc.center, arc.radius, arc.orientation, arc.start)


def _family_curve(p1, p2, psi) -> _Curve:
    """Member ``psi`` of the pencil of circles through ``p1`` and ``p2``.

    The center sits at ``M + (L/2) tan(psi) n`` with ``n`` the left normal of
    the chord; ``psi = -pi/2`` is the straight line.
    """
    p1, p2 = Point2D(*p1), Point2D(*p2)
    dx, dy = p2.x - p1.x, p2.y - p1.y
    L = math.hypot(dx, dy)
    ux, uy = dx / L, dy / L
    if abs(abs(psi) - math.pi / 2) < 1e-15:
        return _Curve(None, None, 0, p1, (ux, uy))
    off = 0.5 * L * math.tan(psi)
    c = Point2D(0.5 * (p1.x + p2.x) - off * uy, 0.5 * (p1.y + p2.y) + off * ux)
    r = math.hypot(0.5 * L, off)
    return _Curve(c, r, 0, p1)


def _minor(curve: _Curve, p2) -> _Curve:
    """Traverse so that the arc ``P1* -> P2*`` is the shorter one."""
    if curve.radius is None:
        return curve
    ccw = _Curve(curve.center, curve.radius, 1, curve.p1)
    return ccw if ccw.param(p2) <= math.pi else _Curve(curve.center, curve.radius, -1, curve.p1)


def _avoiding(curve: _Curve, p2, p3) -> _Curve:
    """Traverse so that the arc ``P1* -> P2*`` does not pass ``P3*``."""
    if curve.radius is None:
        return curve
    ccw = _Curve(curve.center, curve.radius, 1, curve.p1)
    return ccw if ccw.param(p3) > ccw.param(p2) else _Curve(curve.center, curve.radius, -1, curve.p1)


def _crossings(tri, curve: _Curve, p2, eps=1e-9):
    """Side crossings beyond each endpoint, grouped by side and ranked outward.

    Returns ``(before, after)`` lists of ``(side, rank, frac, point, pos)``;
    ``before`` holds crossings met walking back from ``P1*``, ``after``
    those met walking on from ``P2*``.  Crossings at vertices are dropped.
    """
    full = curve.full()
    t2 = curve.param(p2)
    hits = []
    for k, arc in enumerate(tri.arcs):
        for q in intersect_arcs(full, arc, tol=1e-9):
            frac, _ = locate(arc, q)
            if 1e-9 < frac < 1 - 1e-9:
                hits.append((curve.param(q), k, frac, q))
    if curve.radius is None:
        after = sorted((h for h in hits if h[0] >= t2 - eps), key=lambda h: h[0])
        before = sorted((h for h in hits if h[0] <= eps), key=lambda h: -h[0])
    else:
        period = 2 * math.pi
        wrapped = [(h[0] + period if h[0] <= eps else h[0],) + h[1:] for h in hits]
        after = sorted((h for h in wrapped if t2 - eps <= h[0] < period - eps), key=lambda h: h[0])
        before = sorted((h for h in wrapped if h[0] > t2 + eps), key=lambda h: -h[0])

    def ranked(seq):
        seen = {}
        out = []
        for pos, k, frac, q in seq:
            out.append((k, seen.get(k, 0), frac, q, pos))
            seen[k] = seen.get(k, 0) + 1
        return out
    return ranked(before), ranked(after)


def _anchor(tri, e1, e2, constant):
    """Menelaus point for side crossings ``e1`` and ``e2`` on two different sides."""
    s_a, s_b = set(SIDES[e1[0]]), set(SIDES[e2[0]])
    (i,) = s_a & s_b
    (j,) = s_a - {i}
    (k,) = s_b - {i}
    r1 = _side_ratio(e1[0], e1[2], j)
    r2 = _side_ratio(e2[0], e2[2], i)
    return point_at_ratio(tri.A[j], tri.A[k], constant / (r1 * r2))


def _branch_residuals(tri, p1, p2, psi, constant):
    """Menelaus residual of pencil member ``psi`` for every pairing of crossings.

    Keys are ``(side, rank)`` of the crossing before ``P1*`` and after
    ``P2*``; values ``(residual, curve, e1, e2, P3)``.  The residual is the
    signed base-plane distance of ``P3*`` from the curve.
    """
    curve = _minor(_family_curve(p1, p2, psi), p2)
    before, after = _crossings(tri, curve, p2)
    out = {}
    for e1 in before:
        for e2 in after:
            if e1[0] == e2[0] or (curve.radius is not None and e2[4] >= e1[4]):
                continue
            try:
                p3 = _anchor(tri, e1, e2, constant)
            except (OutOfModelRange, InvalidInput):
                continue
            q = fibre_project(p3)
            if curve.radius is None:
                nx, ny = -curve.direction[1], curve.direction[0]
                res = (q.x - p1[0]) * nx + (q.y - p1[1]) * ny
                pos = curve.param(q)
                if e1[4] - 1e-9 <= pos <= e2[4] + 1e-9:
                    continue
            else:
                # signed so that it matches the line residual as psi -> +-pi/2
                res = math.copysign(1.0, -psi) * (math.hypot(q.x - curve.center.x, q.y - curve.center.y)
                                                  - curve.radius)
                pos = curve.param(q)
                if pos <= e2[4] + 1e-9 or pos >= e1[4] - 1e-9:
                    # the anchor must sit outside the crossing-to-crossing arc
                    continue
            out[(e1[0], e1[1], e2[0], e2[1])] = (res, curve, e1, e2, p3)
    return out


def _bracket_root(f, a, b, fa, fb, depth=0):
    """Root of ``f`` in ``[a, b]`` where ``f`` may be undefined (NaN) in places."""
    try:
        return brentq(f, a, b, xtol=1e-15, rtol=1e-15, maxiter=200)
    except ValueError:
        if depth > 3:
            return None
    xs = np.linspace(a, b, 33)
    vs = [fa] + [f(x) for x in xs[1:-1]] + [fb]
    for x0, x1, v0, v1 in zip(xs[:-1], xs[1:], vs[:-1], vs[1:]):
        if np.isfinite(v0) and np.isfinite(v1) and v0 * v1 <= 0.0:
            return _bracket_root(f, x0, x1, v0, v1, depth + 1)
    return None


def _branch_edge(f, lo, hi, inside_lo: bool, iters: int = 50):
    """Shrink ``[lo, hi]`` to the part where ``f`` is defined, up to its edge."""
    inside, outside = (lo, hi) if inside_lo else (hi, lo)
    for _ in range(iters):
        mid = 0.5 * (inside + outside)
        if np.isfinite(f(mid)):
            inside = mid
        else:
            outside = mid
    if inside == (lo if inside_lo else hi):
        return None, None
    return (lo, inside) if inside_lo else (inside, hi)


def _solve_pencil(tri, p1, p2, constant, n_scan: int = 721):
    """All pencil members meeting the Menelaus condition, best first.

    Preference: crossing sides agreeing with the extended straight chord,
    then crossings nearest the two points, then the flattest circle.
    """
    chord = _Curve(None, None, 0, Point2D(*p1), _unit(p1, p2))
    before, after = _crossings(tri, chord, p2)
    want = (before[0][0] if before else None, after[0][0] if after else None)
    # the pencil is periodic: the last interval closes back onto the line
    psis = np.linspace(-math.pi / 2, math.pi / 2, n_scan)
    table = [_branch_residuals(tri, p1, p2, s, constant) for s in psis[:-1]]
    table.append(table[0])
    roots = []
    for m in range(len(psis) - 1):
        lo, hi = psis[m], psis[m + 1]
        for key in set(table[m]) | set(table[m + 1]):
            f = lambda s, key=key: _branch_residuals(tri, p1, p2, s, constant).get(key, (math.nan,))[0]
            val, nxt = table[m].get(key), table[m + 1].get(key)
            a, b = lo, hi
            if val is None or nxt is None:
                # branch ends inside the interval: test up to its edge
                a, b = _branch_edge(f, lo, hi, inside_lo=val is not None)
                if a is None:
                    continue
                fa, fb = f(a), f(b)
            else:
                fa, fb = val[0], nxt[0]
            if not (np.isfinite(fa) and np.isfinite(fb)) or fa * fb > 0.0:
                continue
            r = a if fa == 0.0 else _bracket_root(f, a, b, fa, fb)
            if r is None:
                continue
            hit = _branch_residuals(tri, p1, p2, r, constant).get(key)
            if hit is not None and abs(hit[0]) < 1e-9 and not any(
                    t[4][2][:2] + t[4][3][:2] == key and abs(t[3] - r) < 1e-9 for t in roots):
                miss = (want[0] not in (None, key[0])) + (want[1] not in (None, key[2]))
                roots.append((miss, key[1] + key[3], math.cos(r), r, hit))
    if not roots:
        raise NoArcIntersection("no circle through the two points satisfies the Menelaus condition")
    roots.sort(key=lambda t: t[:3])
    return [t[4] for t in roots]


# --------------------------------------------------------------------------
# surface lines
# --------------------------------------------------------------------------

@dataclass
class SurfaceLine:
    """Connecting curve between two surface points.

    ``case`` is one of ``fibre-segment``, ``side-geodesic``, ``menelaus-arc``,
    ``midpoint-case``, ``interior-arc`` and ``cevian``.  For interior
    endpoints several circles can satisfy the Menelaus condition; ``arc`` is
    the preferred one and ``alternatives`` holds the rest.
    """
    p1: Point
    p2: Point
    case: str
    arc: Optional[ArcDescriptor]
    points: np.ndarray
    anchor: Optional[Point] = None
    theta: Optional[float] = None
    roots: int = 1
    warnings: list = field(default_factory=list)
    alternatives: list = field(default_factory=list)


def _vertices(surface):
    return surface.vertices if hasattr(surface, "vertices") else surface


def _lift_arc(tri, arc: ArcDescriptor, p1, p2, n: int) -> np.ndarray:
    from .projection import arc_points
    fr = np.linspace(0.0, 1.0, n)
    xy = arc_points(arc, fr)
    pts = np.empty((n, 3))
    pts[0], pts[-1] = p1, p2
    z_prev = p1[2]
    for m in range(1, n - 1):
        sp = fibre_surface_point(*tri.A, xy[m], z_hint=z_prev)
        if sp is None:
            raise ArcSurfaceMiss(f"no surface point above arc fraction {fr[m]:.4g}",
                                 gap=(float(fr[m - 1]), float(fr[m + 1])))
        pts[m] = sp.point
        z_prev = sp.point.z
    return pts


def _midpoint_arc(tri, p1, p2, j, k):
    """Arc from ``P1*`` to ``P2*`` of the geodesic parallel to side ``AjAk``."""
    theta = geodesic_between(tri.A[j], tri.A[k]).theta
    a, b = fibre_project(p1), fibre_project(p2)
    w = math.sin(theta)
    if abs(w) < 1e-12:
        return ArcDescriptor("line-segment", a, b), theta
    r = abs(math.cos(theta) / w)
    orient = 1 if w > 0 else -1
    dx, dy = b.x - a.x, b.y - a.y
    L = math.hypot(dx, dy)
    if L > 2 * r:
        raise InvalidInput("midpoints too far apart for the parallel circle")
    h = math.sqrt(r * r - 0.25 * L * L)
    # the minor arc turns toward the center: left of the chord when counter-clockwise
    c = Point2D(0.5 * (a.x + b.x) - orient * h * dy / L, 0.5 * (a.y + b.y) + orient * h * dx / L)
    return _Curve(c, r, orient, a).arc_to(b), theta


def surface_line(surface, P1, P2, n_samples: int = 17, sample: bool = True,
                 constant: float = MENELAUS_CONSTANT, check: bool = True) -> SurfaceLine:
    """Connecting curve on the triangle surface between ``P1`` and ``P2``.

    ``surface`` is a :class:`~nilgeom.surfaces.TriangleSurface` or the three
    vertices.  With ``sample`` the base-plane arc is lifted to the surface
    at ``n_samples`` points by fibre lookup; ``check`` verifies that both
    inputs lie on the surface first.
    """
    tri = _Triangle(_vertices(surface))
    P1, P2 = as_point(P1), as_point(P2)
    if P1 == P2:
        raise DuplicatePoints("surface line endpoints coincide")
    if check:
        for p in (P1, P2):
            if tri.vertex_index(p) is None and on_surface(*tri.A, p, tol=SURFACE_TOL) is None:
                raise NotOnSurface(f"{tuple(p)} is not on the triangle surface")
    a, b = fibre_project(P1), fibre_project(P2)
    if math.hypot(a.x - b.x, a.y - b.y) <= FIBRE_TOL:
        pts = np.column_stack([np.full(n_samples, P1.x), np.full(n_samples, P1.y),
                               np.linspace(P1.z, P2.z, n_samples)])
        return SurfaceLine(P1, P2, "fibre-segment", ArcDescriptor("degenerate-point", a, a), pts)

    v1, v2 = tri.vertex_index(P1), tri.vertex_index(P2)
    s1 = None if v1 is not None else tri.side_of(P1)
    s2 = None if v2 is not None else tri.side_of(P2)
    sides1 = {s1[0]} if s1 else ({k for k, e in enumerate(SIDES) if v1 in e} if v1 is not None else set())
    sides2 = {s2[0]} if s2 else ({k for k, e in enumerate(SIDES) if v2 in e} if v2 is not None else set())
    common = sides1 & sides2
    if common:
        k = min(common)
        start = tri.A[SIDES[k][0]]
        par = tri.params[k]
        t1, t2 = _dist(start, P1), _dist(start, P2)
        ts = np.linspace(t1, t2, n_samples)
        pts = sample_geodesic(start, par, ts)
        pts[0], pts[-1] = P1, P2
        lo, hi = min(t1, t2), max(t1, t2)
        arc = projected_arc(geodesic_point_from(start, par.at(lo)), par.at(hi - lo))
        return SurfaceLine(P1, P2, "side-geodesic", arc, pts, theta=par.theta)

    if v1 is not None or v2 is not None:
        # a vertex endpoint: the cevian follows the geodesic through the vertex
        par = geodesic_between(P1, P2)
        arc = projected_arc(P1, par)
        pts = _lift_arc(tri, arc, P1, P2, n_samples) if sample else np.array([P1, P2], float)
        return SurfaceLine(P1, P2, "cevian", arc, pts, theta=par.theta)

    if s1 and s2:
        i = (set(SIDES[s1[0]]) & set(SIDES[s2[0]])).pop()
        j = (set(SIDES[s1[0]]) - {i}).pop()
        k = (set(SIDES[s2[0]]) - {i}).pop()
        r1 = _side_ratio(s1[0], s1[1], j)
        r2 = _side_ratio(s2[0], s2[1], i)
        if abs(r1 - 1.0) <= MIDPOINT_TOL and abs(r2 - 1.0) <= MIDPOINT_TOL:
            arc, theta = _midpoint_arc(tri, P1, P2, j, k)
            pts = _lift_arc(tri, arc, P1, P2, n_samples) if sample else np.array([P1, P2], float)
            return SurfaceLine(P1, P2, "midpoint-case", arc, pts, theta=theta)
        p3 = point_at_ratio(tri.A[j], tri.A[k], constant / (r1 * r2))
        c = circle_through(a, fibre_project(p3), b)
        curve = (_avoiding(_curve_from_arc(c), b, fibre_project(p3)) if c.kind == "circle-arc"
                 else _Curve(None, None, 0, a, _unit(a, b)))
        arc = curve.arc_to(b)
        pts = _lift_arc(tri, arc, P1, P2, n_samples) if sample else np.array([P1, P2], float)
        return SurfaceLine(P1, P2, "menelaus-arc", arc, pts, anchor=p3, theta=_arc_theta(arc, b))

    found = _solve_pencil(tri, a, b, constant)
    (_, curve, _, _, p3), nroots = found[0], len(found)
    arc = curve.arc_to(b)
    pts = _lift_arc(tri, arc, P1, P2, n_samples) if sample else np.array([P1, P2], float)
    warnings = [f"{nroots} circles satisfy the Menelaus condition; kept the nearest crossings"] if nroots > 1 else []
    return SurfaceLine(P1, P2, "interior-arc", arc, pts, anchor=p3, theta=_arc_theta(arc, b),
                       roots=nroots, warnings=warnings,
                       alternatives=[h[1].arc_to(b) for h in found[1:]])


def _unit(a, b):
    dx, dy = b[0] - a[0], b[1] - a[1]
    n = math.hypot(dx, dy)
    return dx / n, dy / n


def _arc_theta(arc, b):
    return lift_arc_params(arc, b).theta if arc.kind != "degenerate-point" else math.pi / 2


# --------------------------------------------------------------------------
# Ceva configurations
# --------------------------------------------------------------------------

@dataclass
class CevaConfig:
    vertices: tuple
    delta1: float
    delta2: float
    P12: Point
    P02: Point
    P01: Point
    T_star: Point2D
    T: Optional[Point]
    cevians: tuple
    third_cevian_miss: float
    intersections: int
    product: float
    product_projected: Optional[float]
    kind: str
    warnings: list = field(default_factory=list)

    @property
    def concurrent(self) -> bool:
        return self.third_cevian_miss <= 1e-6


CONCURRENCY_TOL = 1e-4


def ceva_config(A0, A1, A2, delta1: float, delta2: float, lift: bool = True,
                strict: bool = False) -> CevaConfig:
    """Feet from the two ratios, cevian arcs, their crossing ``T*`` and both products.

    The third foot ``P01`` takes the ratio ``1/(delta1 delta2)``.  Each
    cevian's base-plane image is the projected geodesic from its vertex to
    its foot.  The distance of ``T*`` from the third cevian is stored as
    ``third_cevian_miss``; above 1e-4 it is reported in ``warnings``, or
    raised as :class:`ThirdCevianMiss` when ``strict``.
    """
    delta1, delta2 = float(delta1), float(delta2)
    if not (delta1 > 0 and delta2 > 0 and math.isfinite(delta1) and math.isfinite(delta2)):
        raise InvalidInput("delta1 and delta2 must be positive and finite")
    tri = _Triangle((A0, A1, A2))
    A = tri.A
    P12 = point_at_ratio(A[1], A[2], delta1)
    P02 = point_at_ratio(A[2], A[0], delta2)
    P01 = point_at_ratio(A[0], A[1], 1.0 / (delta1 * delta2))
    feet = (P12, P02, P01)
    cevians = tuple(projected_arc(A[k], geodesic_between(A[k], feet[k])) for k in range(3))
    hits = intersect_arcs(cevians[0], cevians[1])
    if not hits:
        raise NoArcIntersection("the projected cevians from A0 and A1 do not meet")
    cx = sum(p.x for p in tri.proj) / 3
    cy = sum(p.y for p in tri.proj) / 3
    hits.sort(key=lambda p: math.hypot(p.x - cx, p.y - cy))
    t_star = hits[0]
    warnings = []
    if len(hits) > 1:
        warnings.append(f"projected cevians meet {len(hits)} times; kept the one nearest the centroid")
    miss = locate(cevians[2], t_star)[1]
    if miss > CONCURRENCY_TOL:
        msg = f"third projected cevian misses T* by {miss:.3g}"
        if strict:
            raise ThirdCevianMiss(msg)
        warnings.append(msg)
    T = None
    if lift:
        sp = fibre_surface_point(*A, t_star)
        if sp is None:
            warnings.append("no surface point found above T*")
        else:
            T = sp.point
    kind = classify_triangle(*A)
    cfg = CevaConfig(A, delta1, delta2, P12, P02, P01, t_star, T, cevians, miss, len(hits),
                     math.nan, None, kind, warnings)
    cfg.product = ceva_product(cfg)
    if kind == "general-type":
        cfg.product_projected = ceva_product_projected(cfg)
    return cfg


def ceva_ratios(config: CevaConfig):
    A = config.vertices
    return (simple_ratio(A[0], config.P01, A[1]).value,
            simple_ratio(A[1], config.P12, A[2]).value,
            simple_ratio(A[2], config.P02, A[0]).value)


def ceva_product(config: CevaConfig) -> float:
    """Re-measured ``s(A0,P01,A1) s(A1,P12,A2) s(A2,P02,A0)``."""
    r = ceva_ratios(config)
    return r[0] * r[1] * r[2]


def projected_ratio(arc: ArcDescriptor, p) -> float:
    """Arc-length ratio ``C(A*,P*) / C(P*,B*)`` along a projected side."""
    frac, gap = locate(arc, fibre_project(p))
    if gap > 1e-8:
        raise NotOnLine(f"projection is {gap:.3g} off the arc")
    return frac / (1.0 - frac)


def ceva_ratios_projected(config: CevaConfig):
    A = config.vertices
    if classify_triangle(*A) != "general-type":
        raise DegenerateProjection("fibre-type triangle: the projected triangle collapses")
    arcs = [projected_arc(A[a], geodesic_between(A[a], A[b])) for a, b in SIDES]
    return (projected_ratio(arcs[0], config.P01),
            projected_ratio(arcs[1], config.P12),
            projected_ratio(arcs[2], config.P02))


def ceva_product_projected(config: CevaConfig) -> float:
    r = ceva_ratios_projected(config)
    return r[0] * r[1] * r[2]
