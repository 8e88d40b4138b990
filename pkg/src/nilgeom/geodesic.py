"""Geodesics: closed-form evaluation, an ODE oracle, two-point solves, distance."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from . import kernels
from .core import (ORIGIN, Point, as_point, inverse_metric_at, translate,
                   translation_to_origin)
from .errors import InvalidInput, NoConvergence, OutOfModelRange

TWO_PI = 2.0 * math.pi
MAX_DISTANCE = TWO_PI

# seed grid of the multistart solver
N_ALPHA_SEEDS = 16
N_THETA_SEEDS = 17
DEDUP_TOL = 1e-6
RESIDUAL_TOL = 1e-9


class GeodesicParams(NamedTuple):
    """Unit-speed geodesic leaving a base point.

    ``alpha`` is the heading of the projected initial velocity, ``theta`` its
    elevation above the base plane and ``t`` the arc length.
    """
    alpha: float
    theta: float
    t: float

    @property
    def c(self) -> float:
        return math.cos(self.theta)

    @property
    def w(self) -> float:
        return math.sin(self.theta)

    def at(self, t: float) -> "GeodesicParams":
        return GeodesicParams(self.alpha, self.theta, t)


@dataclass(frozen=True)
class GeodesicSolution:
    params: GeodesicParams
    base: Point
    residual: float
    branch_count: int = 1
    ambiguous: bool = False
    branches: tuple = field(default=(), repr=False)


def geodesic_point(params) -> Point:
    """Endpoint of the geodesic from the origin."""
    return Point(*kernels.geodesic_endpoint(float(params[0]), float(params[1]), float(params[2])))


def geodesic_point_from(base, params) -> Point:
    return translate(geodesic_point(params), base)


def geodesic_velocity(params) -> np.ndarray:
    """Velocity in model coordinates at the end of the origin geodesic."""
    return np.array(kernels.geodesic_velocity(float(params[0]), float(params[1]), float(params[2])))


def sample_geodesic(base, params, ts) -> np.ndarray:
    """Points ``(n, 3)`` of the geodesic from ``base`` at arc lengths ``ts``."""
    ts = np.asarray(ts, dtype=float)
    pts = kernels.geodesic_points(np.full_like(ts, params[0]), np.full_like(ts, params[1]), ts)
    bx, by, bz = base
    out = pts.copy()
    out[:, 0] += bx
    out[:, 1] += by
    out[:, 2] += bz + pts[:, 1] * bx
    return out


# --------------------------------------------------------------------------
# ODE oracle
# --------------------------------------------------------------------------

def metric_derivative(p) -> np.ndarray:
    """``dg[l, i, j] = d g_ij / d x^l``; only the x-derivative is non-zero."""
    x = float(p[0])
    dg = np.zeros((3, 3, 3))
    dg[0] = [[0.0, 0.0, 0.0], [0.0, 2.0 * x, -1.0], [0.0, -1.0, 0.0]]
    return dg


def christoffel(p) -> np.ndarray:
    """``gamma[k, i, j]`` of the Levi-Civita connection at ``p``."""
    ginv = inverse_metric_at(p)
    dg = metric_derivative(p)
    # lower-index symbols: 1/2 (d_i g_lj + d_j g_li - d_l g_ij)
    low = 0.5 * (np.einsum("ilj->lij", dg) + np.einsum("jli->lij", dg) - dg)
    return np.einsum("kl,lij->kij", ginv, low)


def _geodesic_rhs(state):
    pos, vel = state[:3], state[3:]
    acc = -np.einsum("kij,i,j->k", christoffel(pos), vel, vel)
    return np.concatenate([vel, acc])


def _rk4(params, t, n):
    c, w = math.cos(params[1]), math.sin(params[1])
    state = np.array([0.0, 0.0, 0.0, c * math.cos(params[0]), c * math.sin(params[0]), w])
    h = t / n
    for _ in range(n):
        k1 = _geodesic_rhs(state)
        k2 = _geodesic_rhs(state + 0.5 * h * k1)
        k3 = _geodesic_rhs(state + 0.5 * h * k2)
        k4 = _geodesic_rhs(state + h * k3)
        state = state + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
    return state[:3]


def geodesic_ode_oracle(params, t: float | None = None, step: float = 1e-2) -> Point:
    """Integrate the geodesic equations with classical RK4 from the origin.

    Independent of the closed form; meant as a test oracle.  Raises
    :class:`NoConvergence` when halving the step moves the endpoint by more
    than 1e-6.
    """
    if step <= 0:
        raise InvalidInput("step must be positive")
    t = float(params[2] if t is None else t)
    if t == 0.0:
        return ORIGIN
    n = max(1, int(math.ceil(abs(t) / step)))
    coarse = _rk4(params, t, n)
    fine = _rk4(params, t, 2 * n)
    if np.linalg.norm(fine - coarse) > 1e-6:
        raise NoConvergence(f"RK4 endpoint moved by {np.linalg.norm(fine - coarse):.3g} on step halving")
    return Point(*fine)


# --------------------------------------------------------------------------
# two-point problem
# --------------------------------------------------------------------------

def _seed_grid(target) -> np.ndarray:
    alphas = -math.pi + TWO_PI * np.arange(N_ALPHA_SEEDS) / N_ALPHA_SEEDS
    thetas = np.linspace(-math.pi / 2, math.pi / 2, N_THETA_SEEDS)
    thetas[0] += 1e-3
    thetas[-1] -= 1e-3
    t0 = min(max(float(np.linalg.norm(target)), 1e-3), TWO_PI)
    a, th = np.meshgrid(alphas, thetas, indexing="ij")
    return np.column_stack([a.ravel(), th.ravel(), np.full(a.size, t0)])


def _canonical(row):
    a, th, t = row
    if math.cos(th) < 1e-6:
        # fibre geodesic: heading is meaningless
        a = 0.0
    return a, th, t


def _same(p, q) -> bool:
    da = abs(kernels.wrap_angle(p[0] - q[0]))
    return da < DEDUP_TOL and abs(p[1] - q[1]) < DEDUP_TOL and abs(p[2] - q[2]) < DEDUP_TOL


def _order_key(row):
    return (round(row[2], 9), abs(row[1]), row[0])


def solve_geodesic(base, target, multistart: bool = True) -> GeodesicSolution:
    """Geodesic from ``base`` to ``target`` with minimal arc length.

    The principal branch comes from the rotation-reduced scalar equation and
    is polished by damped Newton on the endpoint residual.  With
    ``multistart`` the 16 x 17 seed grid is refined as well, every converged
    branch with ``t <= 2 pi`` is collected, and ``branch_count``/``ambiguous``
    report what was found.
    """
    base = as_point(base)
    target = as_point(target)
    rel = translate(target, translation_to_origin(base))
    if rel == ORIGIN:
        raise InvalidInput("target coincides with base")
    a, th, t = kernels.principal_params(*rel)
    a, th, t, res = kernels.newton_refine(rel[0], rel[1], rel[2], a, th, t, 1e-7, 60)
    rows = [(a, th, t, res)]
    if multistart:
        for row in kernels.multistart(np.array(rel), _seed_grid(rel)):
            rows.append(tuple(float(v) for v in row))
    found = []
    for a, th, t, _ in rows:
        res = float(np.linalg.norm(np.subtract(geodesic_point((a, th, t)), rel)))
        if res > RESIDUAL_TOL or not (0.0 < t <= MAX_DISTANCE + 1e-9):
            continue
        cand = _canonical((a, th, t))
        if not any(_same(cand, f) for f in found):
            found.append(cand)
    if not found:
        best = min(rows, key=lambda r: r[2])
        if best[3] <= RESIDUAL_TOL:
            raise OutOfModelRange(f"shortest geodesic has length {best[2]:.6g} > 2*pi")
        raise NoConvergence("no seed refined below the residual tolerance")
    found.sort(key=_order_key)
    best = GeodesicParams(*found[0])
    residual = float(np.linalg.norm(np.subtract(geodesic_point(best), rel)))
    return GeodesicSolution(best, base, residual, len(found), len(found) > 1,
                            tuple(GeodesicParams(*f) for f in found))


def distance(p, q) -> float:
    """Geodesic distance; raises :class:`OutOfModelRange` beyond ``2 pi``."""
    d = kernels.distance(*(float(v) for v in p), *(float(v) for v in q))
    if d > MAX_DISTANCE + 1e-12:
        raise OutOfModelRange(f"distance {d:.6g} exceeds 2*pi")
    return d


def geodesic_between(a, b) -> GeodesicParams:
    """Principal geodesic parameters from ``a`` to ``b`` (no multistart)."""
    rel = translate(b, translation_to_origin(a))
    return GeodesicParams(*kernels.principal_params(*(float(v) for v in rel)))


def point_at_ratio(A, B, s: float) -> Point:
    """Point ``P`` on the geodesic line ``AB`` with simple ratio ``s``.

    ``s > 0`` lies between the points at ``d(A,P) = s/(1+s) d(A,B)``; for
    ``s < 0`` the line is extended beyond ``B`` (``s < -1``) or beyond ``A``
    (``-1 < s < 0``), always walking forward from the nearer endpoint's far
    side so that arc lengths stay positive.
    """
    A, B = as_point(A), as_point(B)
    if A == B:
        raise InvalidInput("A and B coincide")
    s = float(s)
    if s == -1.0 or not math.isfinite(s):
        raise InvalidInput("simple ratio -1 has no point")
    if s == 0.0:
        return A
    par = geodesic_between(A, B)
    dab = par.t
    if dab > MAX_DISTANCE:
        raise OutOfModelRange("endpoints farther apart than 2*pi")
    if s > 0.0:
        return geodesic_point_from(A, par.at(s / (1.0 + s) * dab))
    m = -s
    if m > 1.0:
        t, start, p = dab * m / (m - 1.0), A, par
    else:
        t, start, p = dab / (1.0 - m), B, geodesic_between(B, A)
    if t > MAX_DISTANCE:
        raise OutOfModelRange(f"ratio {s} needs arc length {t:.6g} > 2*pi")
    return geodesic_point_from(start, p.at(t))
