"""Geodesic spheres, Apollonius surfaces and geodesic-triangle surfaces."""
from __future__ import annotations

import math
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy.optimize import brentq, minimize
from scipy.spatial import ConvexHull

from . import kernels
from .core import Point, as_point, rotate_about_z, translate
from .errors import (EmptyIntersection, EmptySurface, InvalidInput,
                     InvalidResolution, OutOfModelRange)

TWO_PI = 2.0 * math.pi


@dataclass
class Mesh:
    """Triangle mesh; ``tags`` holds optional per-vertex arrays."""
    vertices: np.ndarray
    faces: np.ndarray
    tags: dict = field(default_factory=dict)

    @property
    def euler_characteristic(self) -> int:
        edges = set()
        for f in self.faces:
            for a, b in ((f[0], f[1]), (f[1], f[2]), (f[2], f[0])):
                edges.add((min(a, b), max(a, b)))
        return len(self.vertices) - len(edges) + len(self.faces)


def _face_areas(v, f):
    if len(f) == 0:
        return np.zeros(0)
    a, b, c = v[f[:, 0]], v[f[:, 1]], v[f[:, 2]]
    return 0.5 * np.linalg.norm(np.cross(b - a, c - a), axis=1)


def _drop_degenerate(v, f, min_area=1e-14):
    f = np.asarray(f, dtype=np.int64).reshape(-1, 3)
    keep = (f[:, 0] != f[:, 1]) & (f[:, 1] != f[:, 2]) & (f[:, 0] != f[:, 2])
    f = f[keep]
    return f[_face_areas(v, f) > min_area]


# --------------------------------------------------------------------------
# spheres
# --------------------------------------------------------------------------

def _check_radius(R):
    R = float(R)
    if not R > 0.0 or not math.isfinite(R):
        raise InvalidInput(f"radius must be positive, got {R}")
    if R > TWO_PI:
        raise OutOfModelRange(f"sphere radius {R:.6g} exceeds 2*pi; larger spheres are not embedded")
    return R


def meridian(R, theta):
    """Meridian ``(X, Z)`` of the sphere of radius ``R`` at elevation ``theta``.

    ``X`` is the distance of the endpoint from the fibre axis (signed: it
    turns negative once the projected circle closes) and ``Z`` its
    rotation-invariant height ``z - xy/2``.  No radius bound is enforced.
    """
    theta = np.asarray(theta, dtype=float)
    c, w = np.cos(theta), np.sin(theta)
    u = w * R
    X = c * R * kernels._np_sinc(0.5 * u)
    # w R + c^2 (u - sin u) / (2 w^2), with u = w R, written via (u - sin u)/u^3
    Z = w * R + 0.5 * c * c * w * R ** 3 * kernels._np_s1(u)
    if X.ndim == 0:
        return float(X), float(Z)
    return X, Z


def sphere_cross_section(R, theta):
    R = _check_radius(R)
    return meridian(R, float(theta))


def sphere_point(center, R, theta, alpha) -> Point:
    R = _check_radius(R)
    X, Z = meridian(R, float(theta))
    return translate(rotate_about_z((X, 0.0, Z), float(alpha)), as_point(center))


def sphere_points(center, R, theta, alpha) -> np.ndarray:
    """Vectorised :func:`sphere_point` over broadcast ``theta``/``alpha`` arrays."""
    R = _check_radius(R)
    theta, alpha = np.broadcast_arrays(np.asarray(theta, float), np.asarray(alpha, float))
    X, Z = meridian(R, theta.ravel())
    x, y = X * np.cos(alpha.ravel()), X * np.sin(alpha.ravel())
    z = Z + 0.5 * x * y
    cx, cy, cz = as_point(center)
    return np.column_stack([x + cx, y + cy, z + cz + y * cx])


def sphere_mesh(center, R, n_theta: int, n_alpha: int, check: bool = True) -> Mesh:
    """Latitude-longitude mesh with the poles collapsed to single vertices.

    With ``check`` every vertex is re-measured by the distance solver and a
    deviation above 1e-6 raises :class:`~nilgeom.errors.NoConvergence`.
    """
    R = _check_radius(R)
    if n_theta < 3 or n_alpha < 3:
        raise InvalidResolution("sphere mesh needs n_theta >= 3 and n_alpha >= 3")
    center = as_point(center)
    thetas = np.linspace(-math.pi / 2, math.pi / 2, n_theta)[1:-1]
    alphas = -math.pi + TWO_PI * np.arange(n_alpha) / n_alpha
    th, al = np.meshgrid(thetas, alphas, indexing="ij")
    ring = sphere_points(center, R, th, al)
    south = np.array(translate((0.0, 0.0, -R), center))
    north = np.array(translate((0.0, 0.0, R), center))
    verts = np.vstack([south, ring, north])
    nr = len(thetas)
    idx = lambda i, j: 1 + i * n_alpha + (j % n_alpha)
    faces = []
    for j in range(n_alpha):
        faces.append((0, idx(0, j + 1), idx(0, j)))
        faces.append((len(verts) - 1, idx(nr - 1, j), idx(nr - 1, j + 1)))
    for i in range(nr - 1):
        for j in range(n_alpha):
            a, b, c, d = idx(i, j), idx(i, j + 1), idx(i + 1, j + 1), idx(i + 1, j)
            faces.extend([(a, b, c), (a, c, d)])
    faces = np.array(faces, dtype=np.int64)
    if check:
        err = np.abs(kernels.distances(np.array(center), verts) - R)
        if err.max() > 1e-6:
            from .errors import NoConvergence
            raise NoConvergence(f"sphere vertex off by {err.max():.3g} in distance")
    tags = {"theta": np.r_[-math.pi / 2, th.ravel(), math.pi / 2],
            "alpha": np.r_[0.0, al.ravel(), 0.0]}
    return Mesh(verts, faces, tags)


def meridian_min_x(R, n: int = 10_000) -> float:
    """Smallest ``X(R, theta)`` over ``n`` samples of the open interval (0, pi/2)."""
    thetas = np.linspace(0.0, math.pi / 2, n + 2)[1:-1]
    X, _ = meridian(float(R), thetas)
    return float(X.min())


def meridian_positive(R, n: int = 10_000) -> bool:
    return meridian_min_x(R, n) > 0.0


def ball_hull_depth(R, n_theta: int = 80, n_alpha: int = 80) -> float:
    """How far the deepest sphere sample sits inside the Euclidean convex hull.

    Zero (to rounding) exactly when the sampled ball is convex in the affine
    sense of the model coordinates.
    """
    R = float(R)
    thetas = np.linspace(-math.pi / 2, math.pi / 2, n_theta)[1:-1]
    alphas = -math.pi + TWO_PI * np.arange(n_alpha) / n_alpha
    th, al = np.meshgrid(thetas, alphas, indexing="ij")
    X, Z = meridian(R, th.ravel())
    x, y = X * np.cos(al.ravel()), X * np.sin(al.ravel())
    pts = np.vstack([np.column_stack([x, y, Z + 0.5 * x * y]), [[0, 0, R], [0, 0, -R]]])
    hull = ConvexHull(pts)
    depth = -(pts @ hull.equations[:, :3].T + hull.equations[:, 3])
    return float(depth.min(axis=1).max())


def ball_is_convex(R, tol: float = 1e-9, **kw) -> bool:
    return ball_hull_depth(R, **kw) <= tol


# --------------------------------------------------------------------------
# Apollonius surfaces
# --------------------------------------------------------------------------

def apollonius_field(p1, p2, lam, q):
    """``d(P1, Q) - lam d(Q, P2)``; ``lam = inf`` gives ``d(Q, P2)``.

    ``q`` may be a single point (returns a float) or an ``(n, 3)`` array.
    """
    q_arr = np.asarray(q, dtype=float)
    single = q_arr.ndim == 1
    if math.isinf(lam):
        out = kernels.distances(np.asarray(p2, float), np.atleast_2d(q_arr))
    else:
        out = kernels.apollonius_field(p1, p2, lam, q_arr)
    return float(out[0]) if single else out


def _refine_on_field(p1, p2, lam, v, iters=8):
    # Newton steps along the field gradient; distances are exact so this converges fast
    v = v.copy()
    for _ in range(iters):
        g1 = kernels.distance_grads(np.asarray(p1, float), v)
        g2 = kernels.distance_grads(np.asarray(p2, float), v)
        f = g1[:, 0] - lam * g2[:, 0]
        grad = g1[:, 1:] - lam * g2[:, 1:]
        gg = np.einsum("ij,ij->i", grad, grad)
        ok = gg > 1e-20
        v[ok] -= (f[ok] / gg[ok])[:, None] * grad[ok]
    return v


def apollonius_sample(p1, p2, lam, box=None, resolution: int = 64, refine: bool = False) -> Mesh:
    """Zero set of :func:`apollonius_field` on a regular lattice.

    ``box`` is ``(lo, hi)`` corner triples; by default the foci's bounding box
    padded by their Euclidean separation.  Vertices come from linear
    interpolation along lattice edges; ``refine`` additionally projects each
    onto the exact zero set.  Tags: ``field`` (residual) and ``ratio``.
    """
    p1, p2 = np.array(as_point(p1)), np.array(as_point(p2))
    if np.array_equal(p1, p2):
        from .errors import DuplicatePoints
        raise DuplicatePoints("Apollonius foci coincide")
    lam = float(lam)
    if lam < 0 or math.isnan(lam):
        raise InvalidInput("lambda must be >= 0")
    if resolution < 2:
        raise InvalidResolution("resolution must be at least 2")
    from skimage.measure import marching_cubes
    if box is None:
        pad = max(float(np.linalg.norm(p1 - p2)), 1e-3)
        lo, hi = np.minimum(p1, p2) - pad, np.maximum(p1, p2) + pad
    else:
        lo, hi = (np.asarray(b, dtype=float) for b in box)
        if np.any(hi <= lo):
            raise InvalidInput("box corners out of order")
    axes = [np.linspace(lo[k], hi[k], resolution) for k in range(3)]
    grid = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, 3)
    vals = apollonius_field(p1, p2, lam, grid).reshape((resolution,) * 3)
    if not (vals.min() < 0.0 < vals.max()):
        raise EmptySurface(f"no sign change of the field in the box at lambda={lam}")
    spacing = tuple((hi - lo) / (resolution - 1))
    try:
        verts, faces, _, _ = marching_cubes(vals, level=0.0, spacing=spacing)
    except (ValueError, RuntimeError) as exc:
        raise EmptySurface(str(exc)) from exc
    verts = verts + lo
    if refine and not math.isinf(lam):
        verts = _refine_on_field(p1, p2, lam, verts)
    faces = _drop_degenerate(verts, faces)
    if len(faces) == 0:
        raise EmptySurface("surface collapsed to degenerate faces")
    used = np.unique(faces)
    remap = -np.ones(len(verts), dtype=np.int64)
    remap[used] = np.arange(len(used))
    verts, faces = verts[used], remap[faces]
    d1 = kernels.distances(p1, verts)
    d2 = kernels.distances(p2, verts)
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = d1 / d2
    return Mesh(verts, faces, {"field": d1 - lam * d2 if not math.isinf(lam) else d2, "ratio": ratio})


# --------------------------------------------------------------------------
# triangle surfaces
# --------------------------------------------------------------------------

N_RESTARTS = 24
PENALTY_STEPS = (1.0, 1e2, 1e4, 1e6)
CONSTRAINT_TOL = 1e-6
AGREE_TOL = 1e-4
AMBIGUOUS_POS = 1e-3
AMBIGUOUS_OBJ = 1e-6


@dataclass(frozen=True)
class SurfacePoint:
    point: Point
    lam1: float
    lam2: float
    d0: float
    residuals: tuple
    ambiguous: bool = False
    agreeing: int = 0
    candidates: int = 0


def classify_triangle(A0, A1, A2, tol: float = 1e-12) -> str:
    """``fibre-type`` when the base projections are collinear, else ``general-type``."""
    a0, a1, a2 = (as_point(p) for p in (A0, A1, A2))
    cross = (a1.x - a0.x) * (a2.y - a0.y) - (a1.y - a0.y) * (a2.x - a0.x)
    return "fibre-type" if abs(cross) <= tol else "general-type"


class _Constraints:
    """Normalised ratio constraints and their gradients at a point."""

    def __init__(self, verts, lam1, lam2):
        self.v = [np.array(v, dtype=float) for v in verts]
        self.lam1, self.lam2 = lam1, lam2
        self.k1, self.k2 = 1.0 / (1.0 + lam1), 1.0 / (1.0 + lam2)

    def eval(self, q):
        qx, qy, qz = q
        g = [kernels.distance_grad(v[0], v[1], v[2], qx, qy, qz) for v in self.v]
        d = np.array([gi[0] for gi in g])
        grads = np.array([gi[1:] for gi in g])
        r1 = self.k1 * (d[0] - self.lam1 * d[1])
        r2 = self.k2 * (d[2] - self.lam2 * d[0])
        gr1 = self.k1 * (grads[0] - self.lam1 * grads[1])
        gr2 = self.k2 * (grads[2] - self.lam2 * grads[0])
        return d, grads, np.array([r1, r2]), np.vstack([gr1, gr2])

    def det(self, q):
        a = self.v
        return kernels.surface_det(q[0], q[1], q[2], *a[0], *a[1], *a[2])


def ratios_infeasible(A0, A1, A2, lam1, lam2) -> bool:
    """True when no point can have these ratios by the triangle inequality alone.

    Writing ``d(Q,A1) = s`` forces ``d(Q,A0) = lam1 s`` and
    ``d(Q,A2) = lam1 lam2 s``; each vertex pair then bounds ``s`` from both
    sides, and an empty range certifies ``C(lam1, lam2)`` empty.
    """
    a = [as_point(p) for p in (A0, A1, A2)]
    w = (lam1, 1.0, lam1 * lam2)          # d(Q, A_k) / s
    lo, hi = 0.0, math.inf
    for i, j in ((0, 1), (0, 2), (1, 2)):
        D = kernels.distance(*a[i], *a[j])
        lo = max(lo, D / (w[i] + w[j]))
        if w[i] != w[j]:
            hi = min(hi, D / abs(w[i] - w[j]))
    return lo > hi * (1.0 + 1e-12)


def _penalty_descent(con, q0):
    q = np.array(q0, dtype=float)
    for mu in PENALTY_STEPS:
        def fun(x, mu=mu):
            d, grads, r, gr = con.eval(x)
            f = d[0] ** 2 + mu * (r @ r)
            g = 2.0 * d[0] * grads[0] + 2.0 * mu * (gr.T @ r)
            return f, g
        with warnings.catch_warnings():
            # stiff penalty stages routinely end on a failed line search; projection follows
            warnings.filterwarnings("ignore", message="(The line search algorithm|Rounding errors prevent the line search)")
            res = minimize(fun, q, jac=True, method="BFGS", options={"gtol": 1e-10, "maxiter": 200})
        q = res.x
    return q


def _project(con, q, iters=20):
    # minimum-norm Gauss-Newton onto r1 = r2 = 0
    for _ in range(iters):
        _, _, r, gr = con.eval(q)
        if np.max(np.abs(r)) < 1e-14:
            break
        q = q - np.linalg.lstsq(gr, r, rcond=None)[0]
    return q


def _kkt_polish(con, q, iters=30, h=1e-7):
    """Newton on ``[r1, r2, det]``: feasibility plus stationarity of ``d0``."""
    scale = None
    for _ in range(iters):
        _, _, r, gr = con.eval(q)
        dt = con.det(q)
        gd = np.array([(con.det(q + h * e) - con.det(q - h * e)) / (2 * h) for e in np.eye(3)])
        if scale is None:
            scale = max(float(np.linalg.norm(gd)), 1e-12)
        F = np.r_[r, dt / scale]
        J = np.vstack([gr, gd / scale])
        try:
            step = np.linalg.solve(J, F)
        except np.linalg.LinAlgError:
            step = np.linalg.lstsq(J, F, rcond=None)[0]
        q = q - step
        if np.linalg.norm(step) < 1e-13:
            break
    return q


def _seeds(verts, n, rng):
    v = np.array(verts, dtype=float)
    lo, hi = v.min(axis=0), v.max(axis=0)
    span = np.maximum(hi - lo, 0.5)
    centroid = v.mean(axis=0)
    out = [centroid]
    for _ in range(n - 1):
        out.append(lo - 0.25 * span + rng.random(3) * 1.5 * span)
    return out


def triangle_surface_point(A0, A1, A2, lam1, lam2, restarts: int = N_RESTARTS,
                           seed: int = 0, start=None) -> SurfacePoint:
    """Surface point ``P(lam1, lam2)``: the point of ``C(lam1, lam2)`` nearest ``A0``.

    ``C`` is the set where ``d(A0,Q) = lam1 d(Q,A1)`` and
    ``d(A2,Q) = lam2 d(Q,A0)``.  Each restart runs a penalty continuation
    (``mu`` from 1 to 1e6), projects onto the constraints and polishes the
    stationarity system; the feasible result with least ``d(A0, .)`` wins.
    ``start`` adds a warm-start point ahead of the seeds.
    """
    verts = [as_point(p) for p in (A0, A1, A2)]
    lam1, lam2 = float(lam1), float(lam2)
    if lam1 < 0 or lam2 < 0 or not (lam1 > 0 or lam2 > 0):
        raise InvalidInput("need lam1, lam2 >= 0, not both zero")
    if lam2 == 0.0:
        return SurfacePoint(verts[2], lam1, lam2, kernels.distance(*verts[0], *verts[2]), (0.0, 0.0))
    if lam1 == 0.0:
        return SurfacePoint(verts[0], lam1, lam2, 0.0, (0.0, 0.0))
    if math.isinf(lam1):
        return SurfacePoint(verts[1], lam1, lam2, kernels.distance(*verts[0], *verts[1]), (0.0, 0.0))
    if math.isinf(lam2):
        return SurfacePoint(verts[0], lam1, lam2, 0.0, (0.0, 0.0))
    if ratios_infeasible(*verts, lam1, lam2):
        raise EmptyIntersection(f"C({lam1:g}, {lam2:g}) is empty: the ratios violate the triangle inequality")
    con = _Constraints(verts, lam1, lam2)
    rng = np.random.default_rng(seed)
    seeds = _seeds(verts, restarts, rng)
    if start is not None:
        seeds = [np.asarray(start, float)] + seeds[:-1]
    found = []
    for s in seeds:
        q = _penalty_descent(con, s)
        q = _project(con, q)
        q = _kkt_polish(con, q)
        d, _, r, _ = con.eval(q)
        if np.all(np.isfinite(q)) and np.max(np.abs(r)) <= CONSTRAINT_TOL and d[0] <= math.pi + 1e-9:
            found.append((float(d[0]), q, r))
    if not found:
        raise EmptyIntersection(f"no feasible point for lambda=({lam1:g}, {lam2:g})")
    best_d = min(f[0] for f in found)
    near = [f for f in found if f[0] - best_d <= AMBIGUOUS_OBJ]
    near.sort(key=lambda f: tuple(f[1]))
    d0, q, r = near[0]
    spread = max(float(np.linalg.norm(f[1] - q)) for f in near)
    agreeing = sum(1 for f in found if np.linalg.norm(f[1] - q) <= AGREE_TOL)
    return SurfacePoint(Point(*map(float, q)), lam1, lam2, d0, tuple(map(float, r)),
                        ambiguous=spread > AMBIGUOUS_POS, agreeing=agreeing, candidates=len(found))


def constraint_errors(A0, A1, A2, q, lam1, lam2):
    """Re-measured ratio errors ``|d0/d1 - lam1|`` and ``|d2/d0 - lam2|``, relative to ``max(1, lam)``."""
    d0 = kernels.distance(*as_point(A0), *q)
    d1 = kernels.distance(*as_point(A1), *q)
    d2 = kernels.distance(*as_point(A2), *q)
    e1 = abs(d0 / d1 - lam1) / max(1.0, lam1) if d1 > 0 else math.inf
    e2 = abs(d2 / d0 - lam2) / max(1.0, lam2) if d0 > 0 else math.inf
    return e1, e2


@dataclass
class TriangleSurface:
    """Sampled triangle surface.

    ``points[i, j]`` is ``P(lam[i], lam[j])`` (row index for ``lam1``); NaN
    rows mark holes.  ``lam`` ends with ``inf`` for the limit row/column.
    """
    vertices: tuple
    lam: np.ndarray
    points: np.ndarray
    kind: str
    ambiguous: np.ndarray
    holes: list

    def mesh(self) -> Mesh:
        n = len(self.lam)
        flat = self.points.reshape(-1, 3)
        ok = np.all(np.isfinite(flat), axis=1)
        index = -np.ones(len(flat), dtype=np.int64)
        index[ok] = np.arange(ok.sum())
        faces = []
        for i in range(n - 1):
            for j in range(n - 1):
                a, b, c, d = i * n + j, i * n + j + 1, (i + 1) * n + j + 1, (i + 1) * n + j
                for tri in ((a, b, c), (a, c, d)):
                    if all(ok[k] for k in tri):
                        faces.append([index[k] for k in tri])
        verts = flat[ok]
        faces = _drop_degenerate(verts, np.array(faces, dtype=np.int64))
        l1, l2 = np.meshgrid(self.lam, self.lam, indexing="ij")
        return Mesh(verts, faces, {"lam1": l1.ravel()[ok], "lam2": l2.ravel()[ok]})


def lambda_grid(n: int) -> np.ndarray:
    """``tan(u pi/2)`` for ``u = k/n``, ``k < n``, followed by ``inf``."""
    u = np.arange(n) / n
    return np.r_[np.tan(u * math.pi / 2), math.inf]


def triangle_surface_mesh(A0, A1, A2, n: int = 16, jobs: int = 1, restarts: int = N_RESTARTS):
    """Sample ``P(lam1, lam2)`` over the compactified grid; returns ``(TriangleSurface, Mesh)``.

    Failed samples become holes (NaN rows) listed with their error.
    """
    if n < 4:
        raise InvalidResolution("triangle surface grid needs n >= 4")
    verts = tuple(as_point(p) for p in (A0, A1, A2))
    lam = lambda_grid(n)
    m = len(lam)
    pts = np.full((m, m, 3), np.nan)
    amb = np.zeros((m, m), dtype=bool)
    holes = []

    def work(ij):
        i, j = ij
        if lam[i] == 0.0 and lam[j] == 0.0:
            return ij, None, "lam1 = lam2 = 0 is excluded"
        try:
            return ij, triangle_surface_point(*verts, lam[i], lam[j], restarts=restarts), None
        except (EmptyIntersection, InvalidInput) as exc:
            return ij, None, str(exc)

    cells = [(i, j) for i in range(m) for j in range(m)]
    if jobs > 1:
        with ThreadPoolExecutor(jobs) as ex:
            results = list(ex.map(work, cells))
    else:
        results = [work(c) for c in cells]
    for (i, j), sp, err in results:
        if sp is None:
            holes.append(((float(lam[i]), float(lam[j])), err))
            continue
        pts[i, j] = sp.point
        amb[i, j] = sp.ambiguous
    surf = TriangleSurface(verts, lam, pts, classify_triangle(*verts), amb, holes)
    return surf, surf.mesh()


# --------------------------------------------------------------------------
# fibre lookup
# --------------------------------------------------------------------------

def on_surface(A0, A1, A2, q, tol: float = 1e-5, restarts: int = 8) -> Optional[SurfacePoint]:
    """The surface point through ``q``'s ratios if it coincides with ``q`` within ``tol``."""
    q = np.asarray(q, dtype=float)
    d0 = kernels.distance(*as_point(A0), *q)
    d1 = kernels.distance(*as_point(A1), *q)
    d2 = kernels.distance(*as_point(A2), *q)
    if d0 == 0.0:
        return SurfacePoint(as_point(A0), 0.0, 1.0, 0.0, (0.0, 0.0), candidates=1)
    if d2 == 0.0:
        return SurfacePoint(as_point(A2), 1.0, 0.0, d0, (0.0, 0.0), candidates=1)
    if d1 == 0.0:
        return SurfacePoint(as_point(A1), math.inf, 1.0, d0, (0.0, 0.0), candidates=1)
    try:
        sp = triangle_surface_point(A0, A1, A2, d0 / d1, d2 / d0, restarts=restarts, start=q)
    except EmptyIntersection:
        return None
    return sp if np.linalg.norm(np.subtract(sp.point, q)) <= tol else None


def fibre_surface_point(A0, A1, A2, xy, z_range=None, n_scan: int = 400,
                        z_hint: Optional[float] = None, restarts: int = 8) -> Optional[SurfacePoint]:
    """Surface point on the fibre over ``xy``, or ``None`` if there is none.

    Candidates are roots in ``z`` of the gradient determinant (a necessary
    condition); each is then checked for minimality on its constraint
    curve, nearest ``z_hint`` first.
    """
    verts = np.array([as_point(p) for p in (A0, A1, A2)])
    if z_range is None:
        lo, hi = verts[:, 2].min(), verts[:, 2].max()
        pad = 1.0 + 0.5 * (hi - lo)
        z_range = (lo - pad, hi + pad)
    x, y = float(xy[0]), float(xy[1])
    zs = np.linspace(z_range[0], z_range[1], n_scan)
    q = np.column_stack([np.full(n_scan, x), np.full(n_scan, y), zs])
    dets = kernels.surface_dets(q, verts)
    flat = verts.ravel()
    f = lambda z: kernels.surface_det(x, y, z, *flat)
    roots = []
    for k in range(n_scan - 1):
        if dets[k] == 0.0:
            roots.append(zs[k])
        elif dets[k] * dets[k + 1] < 0.0:
            roots.append(brentq(f, zs[k], zs[k + 1], xtol=1e-14, rtol=1e-15, maxiter=200))
    if z_hint is not None:
        roots.sort(key=lambda z: abs(z - z_hint))
    for z in roots:
        sp = on_surface(*verts, (x, y, z), restarts=restarts)
        if sp is not None:
            return sp
    return None
