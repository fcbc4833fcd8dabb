"""The Gans model of the hyperbolic plane.

The model lives on the full plane z = 1 (the constant third coordinate is
dropped) and is diffeomorphic to the Poincare disk through

    F(x, y) = (2x, 2y) / (1 - x^2 - y^2),

with inverse (u, v) -> (u, v) / (1 + sqrt(1 + u^2 + v^2)).  The induced metric

    h(u, v) = [(1 + v^2) du^2 - 2uv du dv + (1 + u^2) dv^2] / (1 + u^2 + v^2)

has constant curvature -1.  Rotations about the origin and reflections across
lines through the origin are isometries of h.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import DomainError


@dataclass(frozen=True)
class DiskPoint:
    """A point of the open unit disk."""

    x: float
    y: float

    def __post_init__(self):
        if not (math.isfinite(self.x) and math.isfinite(self.y)):
            raise DomainError("disk point must be finite")
        if self.x * self.x + self.y * self.y >= 1.0:
            raise DomainError("disk point must satisfy x^2 + y^2 < 1")


@dataclass(frozen=True)
class GansPoint:
    """A point of the plane model (third coordinate 1 implicit)."""

    u: float
    v: float

    def __post_init__(self):
        if not (math.isfinite(self.u) and math.isfinite(self.v)):
            raise DomainError("point must be finite")

    def as_array(self) -> np.ndarray:
        return np.array([self.u, self.v], dtype=float)


def psi(p: Sequence[float]) -> GansPoint:
    """Central projection of an upper-hemisphere point onto the plane z = 1."""
    x, y, z = p
    if z <= 0.0:
        raise DomainError("psi requires z > 0")
    return GansPoint(x / z, y / z)


def disk_to_gans(p: DiskPoint) -> GansPoint:
    d = 1.0 - p.x * p.x - p.y * p.y
    return GansPoint(2.0 * p.x / d, 2.0 * p.y / d)


def gans_to_disk(q: GansPoint) -> DiskPoint:
    d = 1.0 + math.sqrt(1.0 + q.u * q.u + q.v * q.v)
    return DiskPoint(q.u / d, q.v / d)


def gans_metric(q: GansPoint) -> np.ndarray:
    """Coefficient matrix of the model metric at q."""
    d = 1.0 + q.u * q.u + q.v * q.v
    return np.array(
        [
            [(1.0 + q.v * q.v) / d, -q.u * q.v / d],
            [-q.u * q.v / d, (1.0 + q.u * q.u) / d],
        ]
    )


def disk_metric(p: DiskPoint) -> np.ndarray:
    """Poincare disk metric 4 (dx^2 + dy^2) / (1 - x^2 - y^2)^2."""
    d = 1.0 - p.x * p.x - p.y * p.y
    return (4.0 / (d * d)) * np.eye(2)


def rotate(q: GansPoint, theta: float) -> GansPoint:
    c, s = math.cos(theta), math.sin(theta)
    return GansPoint(c * q.u - s * q.v, s * q.u + c * q.v)


def reflection_matrix(a: float, b: float) -> np.ndarray:
    """Euclidean reflection across the line a u + b v = 0."""
    if a == 0.0 and b == 0.0:
        raise DomainError("reflection line direction must be nonzero")
    # unit direction of the line itself
    e = np.array([b, -a], dtype=float)
    e /= math.hypot(a, b)
    return 2.0 * np.outer(e, e) - np.eye(2)


def reflect(q: GansPoint, a: float, b: float) -> GansPoint:
    image = reflection_matrix(a, b) @ q.as_array()
    return GansPoint(image[0], image[1])
