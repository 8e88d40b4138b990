"""Points, isometries and the metric of the Heisenberg model.

Points are affine triples ``(x, y, z)``; the homogeneous form ``(1; x, y, z)``
is only a convention.  Translations act on the right:

    (1; a, b, c) -> (1; x + a, y + b, z + b*x + c)

for the translating element ``(x, y, z)``.
"""
from __future__ import annotations

import math
from typing import NamedTuple

import numpy as np


class Point(NamedTuple):
    x: float
    y: float
    z: float


class TranslationParams(NamedTuple):
    x: float
    y: float
    z: float


ORIGIN = Point(0.0, 0.0, 0.0)


def as_point(p) -> Point:
    x, y, z = (float(v) for v in p)
    if not all(math.isfinite(v) for v in (x, y, z)):
        from .errors import InvalidInput
        raise InvalidInput(f"non-finite point {p!r}")
    return Point(x, y, z)


def translate(p, t) -> Point:
    """Right translation of ``p`` by the group element ``t``."""
    a, b, c = p
    x, y, z = t
    return Point(x + a, y + b, z + b * x + c)


def compose(t1, t2) -> TranslationParams:
    """Element equal to translating by ``t1`` then by ``t2``.

    Matches the Heisenberg matrix product ``M(t2) @ M(t1)``; in this layout
    ``translate(p, t)`` is ``M(t) @ M(p)``.
    """
    x1, y1, z1 = t1
    x2, y2, z2 = t2
    return TranslationParams(x1 + x2, y1 + y2, z1 + z2 + y1 * x2)


def inverse_translation(t) -> TranslationParams:
    x, y, z = t
    return TranslationParams(-x, -y, x * y - z)


def translation_to_origin(p) -> TranslationParams:
    """The translation carrying ``p`` to the origin."""
    a, b, c = p
    return TranslationParams(-a, -b, a * b - c)


def heisenberg_matrix(t) -> np.ndarray:
    x, y, z = t
    return np.array([[1.0, x, z], [0.0, 1.0, y], [0.0, 0.0, 1.0]])


def translation_jacobian(t) -> np.ndarray:
    """Differential of ``p -> translate(p, t)`` (constant in ``p``)."""
    return np.array([[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, float(t[0]), 1.0]])


def quadratic_map(p) -> Point:
    x, y, z = p
    return Point(x, y, z - 0.5 * x * y)


def quadratic_map_inverse(p) -> Point:
    x, y, z = p
    return Point(x, y, z + 0.5 * x * y)


def linear_rotation(p, omega: float) -> Point:
    """Plain Euclidean rotation about the z-axis."""
    x, y, z = p
    co, so = math.cos(omega), math.sin(omega)
    return Point(x * co - y * so, x * so + y * co, z)


def rotate_about_z(p, omega: float) -> Point:
    """Nil rotation through ``omega`` about the fibre through the origin."""
    x, y, z = p
    co, so = math.cos(omega), math.sin(omega)
    zb = (z - 0.5 * x * y + 0.25 * (x * x - y * y) * math.sin(2.0 * omega)
          + 0.5 * x * y * math.cos(2.0 * omega))
    return Point(x * co - y * so, x * so + y * co, zb)


def rotate_about(p, center, omega: float) -> Point:
    """Rotation about the fibre through ``center``."""
    moved = translate(p, translation_to_origin(center))
    return translate(rotate_about_z(moved, omega), center)


def metric_at(p) -> np.ndarray:
    x = float(p[0])
    return np.array([[1.0, 0.0, 0.0],
                     [0.0, 1.0 + x * x, -x],
                     [0.0, -x, 1.0]])


def inverse_metric_at(p) -> np.ndarray:
    x = float(p[0])
    return np.array([[1.0, 0.0, 0.0],
                     [0.0, 1.0, x],
                     [0.0, x, 1.0 + x * x]])


def tangent_norm(p, v) -> float:
    v = np.asarray(v, dtype=float)
    return math.sqrt(max(float(v @ metric_at(p) @ v), 0.0))


def symmetric_height(p) -> float:
    """``z - xy/2``: invariant under rotations about the fibre axis."""
    return p[2] - 0.5 * p[0] * p[1]
