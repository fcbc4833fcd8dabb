"""The Gauss map of a graph, valued in the Gans plane.

Left-translating the unit normal to the identity lands in the unit sphere of
the Lie algebra; because the normal has positive E3 component the central
projection to the plane z = 1 applies, giving the chart expression

    phi(x, y) = (-p, -q),      p = f_x + y/2,  q = f_y - x/2,

with Jacobian [[-f_xx, -f_xy - 1/2], [-f_xy + 1/2, -f_yy]] and determinant
f_xx f_yy - f_xy^2 + 1/4.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import gans
from .errors import DomainError, NotAGraphError
from .gans import GansPoint
from .heisenberg import IsometryElement, ReflectionFlip, RotationZ, connection_in_direction
from .jets import Jet2
from .surfaces import (
    CurvatureSample,
    Grid,
    SurfacePatch,
    area_factor,
    first_form,
    flat_residual,
    gauss_curvature,
    isometry_image_graph,
    mean_curvature,
    minimal_residual,
    planar_action,
    second_form,
    slopes,
)


def gauss_map(jet: Jet2, x: float, y: float) -> GansPoint:
    p, q = slopes(jet, x, y)
    return GansPoint(float(-p), float(-q))


def gauss_jacobian(jet: Jet2) -> tuple[np.ndarray, float]:
    """Chart Jacobian of phi and its determinant."""
    matrix = np.array(
        [
            [-jet.fxx, -jet.fxy - 0.5],
            [-jet.fxy + 0.5, -jet.fyy],
        ]
    )
    det = jet.fxx * jet.fyy - jet.fxy * jet.fxy + 0.25
    return matrix, float(det)


@dataclass(frozen=True)
class GaussMapSample:
    x: float
    y: float
    phi: GansPoint
    jacobian: np.ndarray
    det: float


def gauss_map_sample(jet: Jet2, x: float, y: float) -> GaussMapSample:
    matrix, det = gauss_jacobian(jet)
    return GaussMapSample(x=x, y=y, phi=gauss_map(jet, x, y), jacobian=matrix, det=det)


def curvature_sample(jet: Jet2, x: float, y: float) -> CurvatureSample:
    _, det = gauss_jacobian(jet)
    return CurvatureSample(
        x=x,
        y=y,
        K=float(gauss_curvature(jet, x, y)),
        H=float(mean_curvature(jet, x, y)),
        det_gauss=det,
        minimal_residual=float(minimal_residual(jet, x, y)),
        flat_residual=float(flat_residual(jet, x, y)),
    )


# --- the differential identity ------------------------------------------------

def _normal_coefficients(jet: Jet2, x, y) -> np.ndarray:
    p, q = slopes(jet, x, y)
    w = area_factor(p, q)
    return np.array([-p / w, -q / w, 1.0 / w])


def verify_gauss_differential(
    patch: SurfacePatch,
    x: float,
    y: float,
    v: tuple[float, float] = (1.0, 0.0),
    step: float = 1e-3,
) -> float:
    """Residual of dL_p . d(gauss map)(v) = -(shape operator(v) + nabla_v of the
    left-invariant extension of the normal), both sides in frame coefficients.

    The left side differentiates the frame coefficients of the normal along the
    chart direction v by central differences; the right side combines the shape
    operator (from the fundamental forms) with the constant connection table.
    """
    a, b = v
    reach = step * max(abs(a), abs(b), 1e-30)
    rect = patch.domain
    if not (
        rect.contains(x + step * a, y + step * b)
        and rect.contains(x - step * a, y - step * b)
    ):
        raise DomainError(
            f"finite-difference stencil of half-width {reach:g} leaves the domain at ({x}, {y})"
        )

    def normal_at(t: float) -> np.ndarray:
        xt, yt = x + t * a, y + t * b
        return _normal_coefficients(patch.field(xt, yt), xt, yt)

    lhs = (normal_at(step) - normal_at(-step)) / (2.0 * step)

    jet = patch.field(x, y)
    p, q = slopes(jet, x, y)
    E, F, G = first_form(jet, x, y)
    L, M, N = second_form(jet, x, y)
    shape = np.linalg.solve(np.array([[E, F], [F, G]]), np.array([[L, M], [M, N]]))
    a2, b2 = shape @ np.array([a, b])
    shape_vec = np.array([a2, b2, a2 * p + b2 * q])

    v_frame = np.array([a, b, a * p + b * q])
    n0 = _normal_coefficients(jet, x, y)
    invariant_term = connection_in_direction(v_frame, n0)

    rhs = -(shape_vec + invariant_term)
    return float(np.linalg.norm(lhs - rhs))


# --- equivariance under ambient isometries -------------------------------------

def expected_normal_map_transform(iso: IsometryElement) -> Callable[[GansPoint], GansPoint]:
    """The plane-model isometry matching an ambient isometry of the group.

    Left translations leave the Gauss map unchanged; a rotation about the
    z-axis by theta acts as the rotation by theta; a flip across the planar
    line at angle theta/2 acts as the reflection across the perpendicular
    line through the origin.
    """
    part = iso.orthogonal_part
    if isinstance(part, RotationZ):
        theta = part.theta
        return lambda point: gans.rotate(point, theta)
    if isinstance(part, ReflectionFlip):
        half = 0.5 * part.theta
        # surface line a x + b y = 0 has (a, b) = (-sin, cos)(theta/2); the
        # plane-model line is -b u + a v = 0
        a_plane = -np.cos(half)
        b_plane = -np.sin(half)
        return lambda point: gans.reflect(point, a_plane, b_plane)
    raise TypeError(f"unsupported orthogonal part {part!r}")


def equivariance_check(patch: SurfacePatch, iso: IsometryElement, grid: Grid) -> float:
    """Max deviation over the grid between the Gauss map of the image surface
    (evaluated at image points) and the expected plane-model motion of the
    original Gauss map."""
    planar = iso.orthogonal_part.matrix()[:2, :2]
    if abs(float(np.linalg.det(planar))) < 1e-12:
        raise NotAGraphError("image surface fails the vertical-line test over the grid")

    image_field = isometry_image_graph(patch.field, iso)
    act = planar_action(iso)
    expected = expected_normal_map_transform(iso)

    worst = 0.0
    for x, y in grid.points():
        sx, sy = act(x, y)
        image_phi = gauss_map(image_field(sx, sy), sx, sy)
        target = expected(gauss_map(patch.field(x, y), x, y))
        deviation = float(np.hypot(image_phi.u - target.u, image_phi.v - target.v))
        worst = max(worst, deviation)
    return worst
