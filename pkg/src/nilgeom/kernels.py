"""Hot numeric kernels.

Every kernel exists twice: a scalar version written against ``math`` (jitted
by numba when available, plain python otherwise) with a jitted array loop,
and a vectorised numpy version.  :data:`USE_NUMBA` picks the array path the
public wrappers dispatch to; both stay importable so they can be compared.

Conventions shared by all kernels
---------------------------------
* Geodesic parameters ``(alpha, theta, t)``: initial heading, elevation and
  arc length of a unit-speed geodesic leaving the origin.  ``c = cos(theta)``,
  ``w = sin(theta)`` and ``u = w * t`` is the total turning of the projected
  velocity.
* Points are affine ``(x, y, z)`` triples of the Heisenberg model.
"""
import math

import numpy as np

from ._accel import USE_NUMBA, njit, prange

TWO_PI = 2.0 * math.pi
HALF_PI = 0.5 * math.pi

# |u| below which the cancelling quotients switch to their Taylor series
_SINC_SERIES = 1e-4
_S1_SERIES = 0.1
_DMU_SERIES = 1e-2


# --------------------------------------------------------------------------
# scalar kernels
# --------------------------------------------------------------------------

@njit
def sinc(v):
    """sin(v)/v, exact at 0."""
    if abs(v) < _SINC_SERIES:
        v2 = v * v
        return 1.0 - v2 / 6.0 + v2 * v2 / 120.0
    return math.sin(v) / v


@njit
def s1(u):
    """(u - sin u) / u**3."""
    if abs(u) < _S1_SERIES:
        u2 = u * u
        return (1.0 / 6.0 - u2 / 120.0 + u2 * u2 / 5040.0
                - u2 * u2 * u2 / 362880.0 + u2 * u2 * u2 * u2 / 39916800.0)
    return (u - math.sin(u)) / (u * u * u)


@njit
def geodesic_endpoint(alpha, theta, t):
    c = math.cos(theta)
    w = math.sin(theta)
    if w == 0.0:
        ct = c * t
        return ct * math.cos(alpha), ct * math.sin(alpha), 0.5 * ct * ct * math.cos(alpha) * math.sin(alpha)
    u = w * t
    rad = c * t * sinc(0.5 * u)
    x = rad * math.cos(0.5 * u + alpha)
    y = rad * math.sin(0.5 * u + alpha)
    # (1 - cos u)/u**2 == sinc(u/2)**2 / 2
    c2 = 0.5 * sinc(0.5 * u) ** 2
    z = u + 0.5 * c * c * w * t * t * t * s1(u) + 0.5 * c * c * t * t * c2 * math.sin(u + 2.0 * alpha)
    return x, y, z


@njit
def geodesic_velocity(alpha, theta, t):
    """Model-coordinate velocity of the origin geodesic at arc length ``t``."""
    c = math.cos(theta)
    w = math.sin(theta)
    x, y, z = geodesic_endpoint(alpha, theta, t)
    psi = alpha + w * t
    vx = c * math.cos(psi)
    vy = c * math.sin(psi)
    return vx, vy, w + x * vy


@njit
def _mu(u):
    # (u - sin u) / (8 sin^2(u/2)), written without cancellation
    s = sinc(0.5 * u)
    return u * s1(u) / (2.0 * s * s)


@njit
def _dmu(u):
    if abs(u) < _DMU_SERIES:
        return 1.0 / 12.0 + u * u / 120.0
    sh = math.sin(0.5 * u)
    return 0.25 - (u - math.sin(u)) * math.cos(0.5 * u) / (8.0 * sh * sh * sh)


@njit
def wrap_angle(a):
    """Map to [-pi, pi)."""
    return (a + math.pi) % TWO_PI - math.pi


@njit
def principal_params(X, Y, Z):
    """Minimal geodesic from the origin to ``(X, Y, Z)``.

    Rotations about the fibre axis act linearly on ``(x, y, z - xy/2)``, so the
    problem collapses to the radius ``r`` and the rotation-invariant height
    ``h``.  Along the meridian, ``h = u + r**2 * mu(u)`` with ``mu`` odd and
    increasing on ``(-2pi, 2pi)``; the root in ``u`` is unique there and gives
    the minimising geodesic.
    """
    r = math.hypot(X, Y)
    h = Z - 0.5 * X * Y
    if r == 0.0:
        if h == 0.0:
            return 0.0, 0.0, 0.0
        return 0.0, math.copysign(HALF_PI, h), abs(h)
    r2 = r * r
    lo = -TWO_PI
    hi = TWO_PI
    u = h / (1.0 + r2 / 12.0)
    if u <= lo or u >= hi:
        u = 0.5 * (lo + hi) if h == 0.0 else math.copysign(TWO_PI * 0.999, h)
    for _ in range(300):
        g = u + r2 * _mu(u) - h
        if g == 0.0:
            break
        if g > 0.0:
            hi = u
        else:
            lo = u
        un = u - g / (1.0 + r2 * _dmu(u))
        if not (lo < un < hi):
            un = 0.5 * (lo + hi)
        if abs(un - u) <= 2e-16 * max(1.0, abs(u)):
            u = un
            break
        u = un
    s = sinc(0.5 * u)
    t = math.sqrt(u * u + (r / s) ** 2)
    theta = math.atan2(u * s, r)
    alpha = wrap_angle(math.atan2(Y, X) - 0.5 * u)
    return alpha, theta, t


@njit
def relative(px, py, pz, qx, qy, qz):
    """Coordinates of ``q`` after the translation carrying ``p`` to the origin."""
    dx = qx - px
    dy = qy - py
    return dx, dy, qz - pz - px * dy


@njit
def distance(px, py, pz, qx, qy, qz):
    x, y, z = relative(px, py, pz, qx, qy, qz)
    return principal_params(x, y, z)[2]


@njit
def distance_grad(px, py, pz, qx, qy, qz):
    """Distance from ``p`` to ``q`` and its gradient with respect to ``q``.

    The gradient is the metric dual of the arriving unit tangent; in the
    left-invariant coframe (dx, dy, dz - x dy) it has components
    (vx, vy, w), giving model components (vx, vy - q_x w, w).
    """
    x, y, z = relative(px, py, pz, qx, qy, qz)
    alpha, theta, t = principal_params(x, y, z)
    if t == 0.0:
        return 0.0, 0.0, 0.0, 0.0
    c = math.cos(theta)
    w = math.sin(theta)
    psi = alpha + w * t
    vx = c * math.cos(psi)
    vy = c * math.sin(psi)
    return t, vx, vy - qx * w, w


@njit
def surface_det(qx, qy, qz, a0x, a0y, a0z, a1x, a1y, a1z, a2x, a2y, a2z):
    """det of the three distance gradients at ``q``.

    Zero exactly where ``d(A0, .)`` is critical on the curve of constant
    distance ratios through ``q``; the triangle surface lies in this set.
    """
    _, g0x, g0y, g0z = distance_grad(a0x, a0y, a0z, qx, qy, qz)
    _, g1x, g1y, g1z = distance_grad(a1x, a1y, a1z, qx, qy, qz)
    _, g2x, g2y, g2z = distance_grad(a2x, a2y, a2z, qx, qy, qz)
    return (g0x * (g1y * g2z - g1z * g2y)
            - g0y * (g1x * g2z - g1z * g2x)
            + g0z * (g1x * g2y - g1y * g2x))


@njit
def _solve3(a, b):
    # Gaussian elimination with partial pivoting on a copy; a is 3x3, b length 3
    m = a.copy()
    v = b.copy()
    for k in range(3):
        p = k
        for i in range(k + 1, 3):
            if abs(m[i, k]) > abs(m[p, k]):
                p = i
        if p != k:
            for j in range(3):
                tmp = m[k, j]
                m[k, j] = m[p, j]
                m[p, j] = tmp
            tmp = v[k]
            v[k] = v[p]
            v[p] = tmp
        piv = m[k, k]
        if piv == 0.0:
            piv = 1e-300
        for i in range(k + 1, 3):
            f = m[i, k] / piv
            for j in range(k, 3):
                m[i, j] -= f * m[k, j]
            v[i] -= f * v[k]
    out = np.zeros(3)
    for k in range(2, -1, -1):
        s = v[k]
        for j in range(k + 1, 3):
            s -= m[k, j] * out[j]
        piv = m[k, k]
        if piv == 0.0:
            piv = 1e-300
        out[k] = s / piv
    return out


@njit
def _normalise(alpha, theta, t):
    theta = wrap_angle(theta)
    if t < 0.0:
        t = -t
        alpha = alpha + math.pi
        theta = -theta
    if theta > HALF_PI:
        theta = math.pi - theta
        alpha = alpha + math.pi
    elif theta < -HALF_PI:
        theta = -math.pi - theta
        alpha = alpha + math.pi
    return wrap_angle(alpha), theta, t


@njit
def _residual(alpha, theta, t, X, Y, Z):
    x, y, z = geodesic_endpoint(alpha, theta, t)
    return np.array([x - X, y - Y, z - Z])


@njit
def newton_refine(X, Y, Z, alpha, theta, t, fd_step, max_iter):
    """Damped Newton on the endpoint residual with a central-difference Jacobian.

    Returns ``(alpha, theta, t, residual_norm)``.
    """
    p = np.array([alpha, theta, t])
    f = _residual(p[0], p[1], p[2], X, Y, Z)
    fn = math.sqrt(f[0] * f[0] + f[1] * f[1] + f[2] * f[2])
    jac = np.zeros((3, 3))
    for _ in range(max_iter):
        if fn < 1e-14:
            break
        for k in range(3):
            e = p.copy()
            e[k] += fd_step
            fp = _residual(e[0], e[1], e[2], X, Y, Z)
            e[k] -= 2.0 * fd_step
            fm = _residual(e[0], e[1], e[2], X, Y, Z)
            for i in range(3):
                jac[i, k] = (fp[i] - fm[i]) / (2.0 * fd_step)
        ata = np.zeros((3, 3))
        rhs = np.zeros(3)
        for i in range(3):
            for j in range(3):
                acc = 0.0
                for k in range(3):
                    acc += jac[k, i] * jac[k, j]
                ata[i, j] = acc
            rhs[i] = -(jac[0, i] * f[0] + jac[1, i] * f[1] + jac[2, i] * f[2])
        reg = 1e-13 * (ata[0, 0] + ata[1, 1] + ata[2, 2] + 1e-300)
        for k in range(3):
            ata[k, k] += reg
        step = _solve3(ata, rhs)
        lam = 1.0
        accepted = False
        for _ in range(40):
            q = p + lam * step
            a2, th2, t2 = _normalise(q[0], q[1], q[2])
            f2 = _residual(a2, th2, t2, X, Y, Z)
            fn2 = math.sqrt(f2[0] * f2[0] + f2[1] * f2[1] + f2[2] * f2[2])
            if fn2 < fn:
                p[0] = a2
                p[1] = th2
                p[2] = t2
                f = f2
                fn = fn2
                accepted = True
                break
            lam *= 0.5
        if not accepted:
            break
    return p[0], p[1], p[2], fn


# --------------------------------------------------------------------------
# jitted array loops
# --------------------------------------------------------------------------

@njit(parallel=True)
def _nb_geodesic_points(alpha, theta, t):
    n = alpha.shape[0]
    out = np.empty((n, 3))
    for i in prange(n):
        x, y, z = geodesic_endpoint(alpha[i], theta[i], t[i])
        out[i, 0] = x
        out[i, 1] = y
        out[i, 2] = z
    return out


@njit(parallel=True)
def _nb_principal(rel):
    n = rel.shape[0]
    out = np.empty((n, 3))
    for i in prange(n):
        a, th, t = principal_params(rel[i, 0], rel[i, 1], rel[i, 2])
        out[i, 0] = a
        out[i, 1] = th
        out[i, 2] = t
    return out


@njit(parallel=True)
def _nb_distances(p, q):
    n = q.shape[0]
    out = np.empty(n)
    for i in prange(n):
        out[i] = distance(p[0], p[1], p[2], q[i, 0], q[i, 1], q[i, 2])
    return out


@njit(parallel=True)
def _nb_distance_grads(p, q):
    n = q.shape[0]
    out = np.empty((n, 4))
    for i in prange(n):
        d, gx, gy, gz = distance_grad(p[0], p[1], p[2], q[i, 0], q[i, 1], q[i, 2])
        out[i, 0] = d
        out[i, 1] = gx
        out[i, 2] = gy
        out[i, 3] = gz
    return out


@njit(parallel=True)
def _nb_surface_dets(q, a):
    n = q.shape[0]
    out = np.empty(n)
    for i in prange(n):
        out[i] = surface_det(q[i, 0], q[i, 1], q[i, 2],
                             a[0, 0], a[0, 1], a[0, 2],
                             a[1, 0], a[1, 1], a[1, 2],
                             a[2, 0], a[2, 1], a[2, 2])
    return out


@njit(parallel=True)
def _nb_multistart(target, seeds, fd_step, max_iter):
    m = seeds.shape[0]
    out = np.empty((m, 4))
    for i in prange(m):
        a, th, t, res = newton_refine(target[0], target[1], target[2],
                                      seeds[i, 0], seeds[i, 1], seeds[i, 2], fd_step, max_iter)
        out[i, 0] = a
        out[i, 1] = th
        out[i, 2] = t
        out[i, 3] = res
    return out


@njit(parallel=True)
def _nb_apollonius_field(p1, p2, lam, pts):
    n = pts.shape[0]
    out = np.empty(n)
    for i in prange(n):
        d1 = distance(p1[0], p1[1], p1[2], pts[i, 0], pts[i, 1], pts[i, 2])
        d2 = distance(p2[0], p2[1], p2[2], pts[i, 0], pts[i, 1], pts[i, 2])
        out[i] = d1 - lam * d2
    return out


# --------------------------------------------------------------------------
# numpy paths
# --------------------------------------------------------------------------

def _np_sinc(v):
    v = np.asarray(v, dtype=float)
    small = np.abs(v) < _SINC_SERIES
    safe = np.where(small, 1.0, v)
    v2 = v * v
    return np.where(small, 1.0 - v2 / 6.0 + v2 * v2 / 120.0, np.sin(safe) / safe)


def _np_s1(u):
    u = np.asarray(u, dtype=float)
    small = np.abs(u) < _S1_SERIES
    safe = np.where(small, 1.0, u)
    u2 = u * u
    series = (1.0 / 6.0 - u2 / 120.0 + u2 ** 2 / 5040.0 - u2 ** 3 / 362880.0 + u2 ** 4 / 39916800.0)
    return np.where(small, series, (safe - np.sin(safe)) / safe ** 3)


def _np_geodesic_points(alpha, theta, t):
    alpha, theta, t = np.broadcast_arrays(*(np.asarray(v, dtype=float) for v in (alpha, theta, t)))
    c = np.cos(theta)
    w = np.sin(theta)
    u = w * t
    sh = _np_sinc(0.5 * u)
    rad = c * t * sh
    x = rad * np.cos(0.5 * u + alpha)
    y = rad * np.sin(0.5 * u + alpha)
    z = u + 0.5 * c * c * w * t ** 3 * _np_s1(u) + 0.5 * c * c * t * t * (0.5 * sh * sh) * np.sin(u + 2.0 * alpha)
    return np.stack([x, y, z], axis=-1)


def _np_mu(u):
    s = _np_sinc(0.5 * u)
    return u * _np_s1(u) / (2.0 * s * s)


def _np_dmu(u):
    small = np.abs(u) < _DMU_SERIES
    safe = np.where(small, 1.0, u)
    sh = np.sin(0.5 * safe)
    full = 0.25 - (safe - np.sin(safe)) * np.cos(0.5 * safe) / (8.0 * sh ** 3)
    return np.where(small, 1.0 / 12.0 + u * u / 120.0, full)


def _np_principal(rel):
    rel = np.atleast_2d(np.asarray(rel, dtype=float))
    X, Y, Z = rel[:, 0], rel[:, 1], rel[:, 2]
    r = np.hypot(X, Y)
    h = Z - 0.5 * X * Y
    r2 = r * r
    lo = np.full(r.shape, -TWO_PI)
    hi = np.full(r.shape, TWO_PI)
    u = h / (1.0 + r2 / 12.0)
    out_of = (u <= lo) | (u >= hi)
    u = np.where(out_of, np.copysign(TWO_PI * 0.999, h), u)
    active = r > 0.0
    for _ in range(300):
        if not active.any():
            break
        g = u + r2 * _np_mu(u) - h
        done = g == 0.0
        hi = np.where(active & (g > 0.0), u, hi)
        lo = np.where(active & (g < 0.0), u, lo)
        un = u - g / (1.0 + r2 * _np_dmu(u))
        bad = ~((lo < un) & (un < hi))
        un = np.where(bad, 0.5 * (lo + hi), un)
        conv = np.abs(un - u) <= 2e-16 * np.maximum(1.0, np.abs(u))
        u = np.where(active & ~done, un, u)
        active = active & ~done & ~conv
    s = _np_sinc(0.5 * u)
    fibre = r == 0.0
    safe_s = np.where(fibre, 1.0, s)
    t = np.where(fibre, np.abs(h), np.sqrt(u * u + (r / safe_s) ** 2))
    theta = np.where(fibre, np.where(h == 0.0, 0.0, np.copysign(HALF_PI, h)), np.arctan2(u * s, r))
    alpha = np.where(fibre, 0.0, (np.arctan2(Y, X) - 0.5 * u + np.pi) % TWO_PI - np.pi)
    return np.stack([alpha, theta, t], axis=-1)


def _np_relative(p, q):
    q = np.atleast_2d(np.asarray(q, dtype=float))
    dx = q[:, 0] - p[0]
    dy = q[:, 1] - p[1]
    return np.stack([dx, dy, q[:, 2] - p[2] - p[0] * dy], axis=-1)


def _np_distances(p, q):
    return _np_principal(_np_relative(p, q))[:, 2]


def _np_distance_grads(p, q):
    q = np.atleast_2d(np.asarray(q, dtype=float))
    par = _np_principal(_np_relative(p, q))
    alpha, theta, t = par[:, 0], par[:, 1], par[:, 2]
    c = np.cos(theta)
    w = np.sin(theta)
    psi = alpha + w * t
    vx = c * np.cos(psi)
    vy = c * np.sin(psi)
    zero = t == 0.0
    grads = np.stack([t, vx, vy - q[:, 0] * w, w], axis=-1)
    grads[zero] = 0.0
    return grads


def _np_surface_dets(q, a):
    g = [_np_distance_grads(a[k], q)[:, 1:] for k in range(3)]
    return np.einsum("ij,ij->i", g[0], np.cross(g[1], g[2]))


def _np_multistart(target, seeds, fd_step, max_iter):
    X = np.asarray(target, dtype=float)
    p = np.array(seeds, dtype=float)
    m = p.shape[0]

    def resid(q):
        return _np_geodesic_points(q[:, 0], q[:, 1], q[:, 2]) - X

    def normalise(q):
        a, th, t = q[:, 0].copy(), (q[:, 1] + np.pi) % TWO_PI - np.pi, q[:, 2].copy()
        neg = t < 0.0
        t[neg] = -t[neg]
        a[neg] += np.pi
        th[neg] = -th[neg]
        up = th > HALF_PI
        th[up] = np.pi - th[up]
        a[up] += np.pi
        dn = th < -HALF_PI
        th[dn] = -np.pi - th[dn]
        a[dn] += np.pi
        return np.stack([(a + np.pi) % TWO_PI - np.pi, th, t], axis=-1)

    f = resid(p)
    fn = np.linalg.norm(f, axis=1)
    live = np.ones(m, dtype=bool)
    for _ in range(max_iter):
        live &= fn >= 1e-14
        if not live.any():
            break
        jac = np.empty((m, 3, 3))
        for k in range(3):
            e = p.copy()
            e[:, k] += fd_step
            fp = resid(e)
            e[:, k] -= 2.0 * fd_step
            fm = resid(e)
            jac[:, :, k] = (fp - fm) / (2.0 * fd_step)
        jt = np.transpose(jac, (0, 2, 1))
        ata = jt @ jac
        reg = 1e-13 * (np.trace(ata, axis1=1, axis2=2) + 1e-300)
        ata += reg[:, None, None] * np.eye(3)
        step = np.linalg.solve(ata, -(jt @ f[:, :, None]))[:, :, 0]
        lam = np.ones(m)
        pending = live.copy()
        for _ in range(40):
            if not pending.any():
                break
            q = normalise(p + lam[:, None] * step)
            f2 = resid(q)
            fn2 = np.linalg.norm(f2, axis=1)
            ok = pending & (fn2 < fn)
            p[ok] = q[ok]
            f[ok] = f2[ok]
            fn[ok] = fn2[ok]
            pending &= ~ok
            lam = np.where(pending, 0.5 * lam, lam)
        live &= ~pending
    return np.column_stack([p, fn])


def _np_apollonius_field(p1, p2, lam, pts):
    return _np_distances(p1, pts) - lam * _np_distances(p2, pts)


# --------------------------------------------------------------------------
# dispatch
# --------------------------------------------------------------------------

def _as_points(q):
    return np.ascontiguousarray(np.atleast_2d(np.asarray(q, dtype=float)))


def _as_point(p):
    return np.ascontiguousarray(np.asarray(p, dtype=float).reshape(3))


def geodesic_points(alpha, theta, t):
    """Endpoints for arrays of ``(alpha, theta, t)``; returns shape (n, 3)."""
    if USE_NUMBA:
        a, th, tt = (np.ascontiguousarray(v, dtype=float).ravel()
                     for v in np.broadcast_arrays(alpha, theta, t))
        return _nb_geodesic_points(a, th, tt)
    return _np_geodesic_points(alpha, theta, t).reshape(-1, 3)


def principal_many(rel):
    """Principal geodesic parameters for an (n, 3) array of relative targets."""
    if USE_NUMBA:
        return _nb_principal(_as_points(rel))
    return _np_principal(rel)


def distances(p, q):
    """Distances from the point ``p`` to each row of ``q``."""
    if USE_NUMBA:
        return _nb_distances(_as_point(p), _as_points(q))
    return _np_distances(_as_point(p), q)


def distance_grads(p, q):
    """Rows ``(d, dd/dqx, dd/dqy, dd/dqz)`` for each row of ``q``."""
    if USE_NUMBA:
        return _nb_distance_grads(_as_point(p), _as_points(q))
    return _np_distance_grads(_as_point(p), q)


def surface_dets(q, vertices):
    if USE_NUMBA:
        return _nb_surface_dets(_as_points(q), np.ascontiguousarray(vertices, dtype=float))
    return _np_surface_dets(_as_points(q), np.asarray(vertices, dtype=float))


def multistart(target, seeds, fd_step=1e-7, max_iter=60):
    """Refine every seed row ``(alpha, theta, t)``; rows ``(alpha, theta, t, residual)``."""
    if USE_NUMBA:
        return _nb_multistart(_as_point(target), _as_points(seeds), fd_step, max_iter)
    return _np_multistart(target, seeds, fd_step, max_iter)


def apollonius_field(p1, p2, lam, pts):
    if USE_NUMBA:
        return _nb_apollonius_field(_as_point(p1), _as_point(p2), float(lam), _as_points(pts))
    return _np_apollonius_field(_as_point(p1), _as_point(p2), float(lam), _as_points(pts))
