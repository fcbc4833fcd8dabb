"""Exponential-coordinate model of the 3-dimensional Heisenberg group.

Points are (x, y, z) in the exponential chart with group product

    (a, b, c) * (x, y, z) = (a + x, b + y, c + z + (a y - b x) / 2).

The metric ds^2 = dx^2 + dy^2 + (y/2 dx - x/2 dy + dz)^2 is left invariant;
the frame

    E1 = d/dx - (y/2) d/dz,   E2 = d/dy + (x/2) d/dz,   E3 = d/dz

is orthonormal for it, and the Levi-Civita connection on the frame is constant:
nabla_{E1}E2 = E3/2 = -nabla_{E2}E1, nabla_{E1}E3 = -E2/2 = nabla_{E3}E1,
nabla_{E2}E3 = E1/2 = nabla_{E3}E2, nabla_{Ei}Ei = 0.

Every isometry is a left translation composed with either a rotation about
the z-axis or a flip (a planar reflection combined with z -> -z).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Union

import numpy as np


def _check_finite(*values: float) -> None:
    for v in values:
        if not math.isfinite(v):
            raise ValueError(f"coordinates must be finite, got {v!r}")


@dataclass(frozen=True)
class GroupPoint:
    """A point of the group in exponential coordinates."""

    x: float
    y: float
    z: float

    def __post_init__(self):
        _check_finite(self.x, self.y, self.z)

    @staticmethod
    def identity() -> "GroupPoint":
        return GroupPoint(0.0, 0.0, 0.0)

    def as_array(self) -> np.ndarray:
        return np.array([self.x, self.y, self.z], dtype=float)


@dataclass(frozen=True)
class AlgebraVector:
    """A tangent vector written in the orthonormal frame {E1, E2, E3}.

    The frame is orthonormal, so the metric pairing of two AlgebraVectors is
    the Euclidean dot product of their coefficients.
    """

    a1: float
    a2: float
    a3: float

    def as_array(self) -> np.ndarray:
        return np.array([self.a1, self.a2, self.a3], dtype=float)

    def dot(self, other: "AlgebraVector") -> float:
        return self.a1 * other.a1 + self.a2 * other.a2 + self.a3 * other.a3

    def norm(self) -> float:
        return math.sqrt(self.dot(self))


def product(g: GroupPoint, h: GroupPoint) -> GroupPoint:
    return GroupPoint(
        g.x + h.x,
        g.y + h.y,
        g.z + h.z + 0.5 * (g.x * h.y - g.y * h.x),
    )


def inverse(g: GroupPoint) -> GroupPoint:
    return GroupPoint(-g.x, -g.y, -g.z)


def frame_at(p: GroupPoint) -> np.ndarray:
    """Coordinate components of E1, E2, E3 at p, one frame vector per row."""
    return np.array(
        [
            [1.0, 0.0, -0.5 * p.y],
            [0.0, 1.0, 0.5 * p.x],
            [0.0, 0.0, 1.0],
        ]
    )


def metric_at(p: GroupPoint) -> np.ndarray:
    """Coefficient matrix of ds^2 in the coordinate basis at p."""
    # ds^2 = dx^2 + dy^2 + omega^2 with omega = (y/2) dx - (x/2) dy + dz
    omega = np.array([0.5 * p.y, -0.5 * p.x, 1.0])
    g = np.diag([1.0, 1.0, 0.0]) + np.outer(omega, omega)
    return g


_CONNECTION = {
    (1, 1): (0.0, 0.0, 0.0),
    (1, 2): (0.0, 0.0, 0.5),
    (1, 3): (0.0, -0.5, 0.0),
    (2, 1): (0.0, 0.0, -0.5),
    (2, 2): (0.0, 0.0, 0.0),
    (2, 3): (0.5, 0.0, 0.0),
    (3, 1): (0.0, -0.5, 0.0),
    (3, 2): (0.5, 0.0, 0.0),
    (3, 3): (0.0, 0.0, 0.0),
}

# GAMMA[i, k, :] = frame coefficients of nabla_{E_{i+1}} E_{k+1}
_GAMMA = np.array([[_CONNECTION[(i, k)] for k in (1, 2, 3)] for i in (1, 2, 3)])


def connection(i: int, j: int) -> AlgebraVector:
    """nabla_{E_i} E_j as constant frame coefficients (indices in {1, 2, 3})."""
    if i not in (1, 2, 3) or j not in (1, 2, 3):
        raise IndexError(f"frame indices must be in 1..3, got ({i}, {j})")
    return AlgebraVector(*_CONNECTION[(i, j)])


def connection_in_direction(v, w) -> np.ndarray:
    """nabla_v W for the frame field W with constant coefficients w.

    ``v`` and ``w`` are length-3 frame-coefficient arrays; only the connection
    term survives because W has constant coefficients.
    """
    v = np.asarray(v, dtype=float)
    w = np.asarray(w, dtype=float)
    return np.einsum("i,k,ikm->m", v, w, _GAMMA)


def left_translation_differential(g: GroupPoint) -> np.ndarray:
    """Jacobian of p -> product(g, p) in coordinates (constant in p)."""
    return np.array(
        [
            [1.0, 0.0, 0.0],
            [0.0, 1.0, 0.0],
            [-0.5 * g.y, 0.5 * g.x, 1.0],
        ]
    )


@dataclass(frozen=True)
class RotationZ:
    """Rotation about the z-axis by ``theta``."""

    theta: float

    def matrix(self) -> np.ndarray:
        c, s = math.cos(self.theta), math.sin(self.theta)
        return np.array([[c, -s, 0.0], [s, c, 0.0], [0.0, 0.0, 1.0]])

    def inverse(self) -> "RotationZ":
        return RotationZ(-self.theta)


@dataclass(frozen=True)
class ReflectionFlip:
    """Planar reflection across the line at angle theta/2 combined with z -> -z."""

    theta: float

    def matrix(self) -> np.ndarray:
        c, s = math.cos(self.theta), math.sin(self.theta)
        return np.array([[c, s, 0.0], [s, -c, 0.0], [0.0, 0.0, -1.0]])

    def inverse(self) -> "ReflectionFlip":
        # involutive
        return self


OrthogonalPart = Union[RotationZ, ReflectionFlip]


@dataclass(frozen=True)
class IsometryElement:
    """An isometry p -> translation * (orthogonal_part . p)."""

    translation: GroupPoint = field(default_factory=GroupPoint.identity)
    orthogonal_part: OrthogonalPart = RotationZ(0.0)


def apply_isometry(iso: IsometryElement, p: GroupPoint) -> GroupPoint:
    rotated = iso.orthogonal_part.matrix() @ p.as_array()
    return product(iso.translation, GroupPoint(*rotated))


def isometry_inverse(iso: IsometryElement) -> IsometryElement:
    """Closed-form inverse: both orthogonal parts are group automorphisms."""
    a_inv = iso.orthogonal_part.inverse()
    t = a_inv.matrix() @ inverse(iso.translation).as_array()
    return IsometryElement(GroupPoint(*t), a_inv)
