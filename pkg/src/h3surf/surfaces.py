"""Geometry of graphs z = f(x, y) in the Heisenberg group.

With p = f_x + y/2 and q = f_y - x/2, the tangent basis is
X_x = E1 + p E3, X_y = E2 + q E3, the upward unit normal is
eta = (-p, -q, 1)/w with w = sqrt(1 + p^2 + q^2), and

    first form:   E = 1 + p^2,  F = p q,  G = 1 + q^2          (EG - F^2 = w^2)
    second form:  L = (f_xx + q p)/w
                  M = (f_xy + q^2/2 - p^2/2)/w
                  N = (f_yy - q p)/w

Mean curvature: 2 H w^3 = (1 + q^2) f_xx - 2 p q f_xy + (1 + p^2) f_yy.
Gauss curvature comes from the closed form for w^4 K below; the minimal and
flat residuals are the left sides of the corresponding graph equations.

All point evaluators accept floats or broadcastable numpy arrays.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .expressions import Expr, jet2_at, parse_surface
from .heisenberg import AlgebraVector, IsometryElement
from .jets import Jet2

JetProvider = Callable[[float, float], Jet2]


@dataclass(frozen=True)
class Rect:
    """Closed axis-aligned rectangle [x0, x1] x [y0, y1]."""

    x0: float
    x1: float
    y0: float
    y1: float

    def __post_init__(self):
        if not (self.x0 < self.x1 and self.y0 < self.y1):
            raise ValueError("rectangle must be non-degenerate")

    def contains(self, x: float, y: float) -> bool:
        return self.x0 <= x <= self.x1 and self.y0 <= y <= self.y1


@dataclass(frozen=True)
class Grid:
    """Inclusive-endpoint grid; iteration is row major (y outer, x inner)."""

    rect: Rect
    nx: int
    ny: int

    def __post_init__(self):
        if self.nx < 2 or self.ny < 2:
            raise ValueError("grid resolution must be at least 2 per axis")

    def xs(self) -> np.ndarray:
        return np.linspace(self.rect.x0, self.rect.x1, self.nx)

    def ys(self) -> np.ndarray:
        return np.linspace(self.rect.y0, self.rect.y1, self.ny)

    def points(self):
        xs, ys = self.xs(), self.ys()
        for yv in ys:
            for xv in xs:
                yield float(xv), float(yv)


@dataclass(frozen=True)
class SurfacePatch:
    """Jet provider plus the rectangle it is sampled over."""

    field: JetProvider
    domain: Rect


def expression_patch(source: str | Expr, domain: Rect) -> SurfacePatch:
    expr = parse_surface(source) if isinstance(source, str) else source
    return SurfacePatch(field=lambda x, y: jet2_at(expr, x, y), domain=domain)


# --- pointwise quantities ----------------------------------------------------

def slopes(jet: Jet2, x, y):
    """The frame-adapted slopes p = f_x + y/2, q = f_y - x/2."""
    return jet.fx + 0.5 * y, jet.fy - 0.5 * x


def area_factor(p, q):
    return np.sqrt(1.0 + p * p + q * q)


def tangent_frame(jet: Jet2, x: float, y: float) -> tuple[AlgebraVector, AlgebraVector]:
    """X_x and X_y in frame coefficients: (1, 0, p) and (0, 1, q)."""
    p, q = slopes(jet, x, y)
    return AlgebraVector(1.0, 0.0, float(p)), AlgebraVector(0.0, 1.0, float(q))


def unit_normal(jet: Jet2, x: float, y: float, orientation: int = 1) -> AlgebraVector:
    """Unit normal (-p, -q, 1)/w in frame coefficients; orientation flips it."""
    p, q = slopes(jet, x, y)
    w = area_factor(p, q)
    s = float(orientation)
    return AlgebraVector(float(-s * p / w), float(-s * q / w), float(s / w))


def first_form(jet: Jet2, x, y):
    p, q = slopes(jet, x, y)
    return 1.0 + p * p, p * q, 1.0 + q * q


def second_form(jet: Jet2, x, y, orientation: int = 1):
    p, q = slopes(jet, x, y)
    w = area_factor(p, q)
    s = float(orientation)
    L = s * (jet.fxx + q * p) / w
    M = s * (jet.fxy + 0.5 * q * q - 0.5 * p * p) / w
    N = s * (jet.fyy - q * p) / w
    return L, M, N


@dataclass(frozen=True)
class FundamentalForms:
    p: float
    q: float
    w: float
    E: float
    F: float
    G: float
    L: float
    M: float
    N: float


def fundamental_forms(jet: Jet2, x: float, y: float, orientation: int = 1) -> FundamentalForms:
    p, q = slopes(jet, x, y)
    w = area_factor(p, q)
    E, F, G = first_form(jet, x, y)
    L, M, N = second_form(jet, x, y, orientation)
    return FundamentalForms(float(p), float(q), float(w), float(E), float(F),
                            float(G), float(L), float(M), float(N))


def mean_curvature(jet: Jet2, x, y, orientation: int = 1):
    p, q = slopes(jet, x, y)
    w = area_factor(p, q)
    numerator = (1.0 + q * q) * jet.fxx - 2.0 * p * q * jet.fxy + (1.0 + p * p) * jet.fyy
    return float(orientation) * numerator / (2.0 * w**3)


def _w4_times_K(jet: Jet2, x, y):
    p, q = slopes(jet, x, y)
    w2 = 1.0 + p * p + q * q
    fxx, fxy, fyy = jet.fxx, jet.fxy, jet.fyy
    return (
        w2 * (fxy * fxy - fxx * fyy - 0.25)
        - (1.0 + q * q) * ((fxy + 0.5) ** 2 - fxx * fyy)
        - (1.0 + p * p) * ((fxy - 0.5) ** 2 - fxx * fyy)
        + p * q * (fyy - fxx)
    )


def gauss_curvature(jet: Jet2, x, y):
    """Intrinsic curvature of the graph; orientation independent."""
    p, q = slopes(jet, x, y)
    w2 = 1.0 + p * p + q * q
    return _w4_times_K(jet, x, y) / (w2 * w2)


def minimal_residual(jet: Jet2, x, y):
    """Left side of the minimal-graph equation; zero iff H = 0 at the point."""
    p, q = slopes(jet, x, y)
    return (1.0 + q * q) * jet.fxx - 2.0 * p * q * jet.fxy + (1.0 + p * p) * jet.fyy


def flat_residual(jet: Jet2, x, y):
    """w^4 K; zero iff the graph is intrinsically flat at the point."""
    return _w4_times_K(jet, x, y)


@dataclass(frozen=True)
class CurvatureSample:
    x: float
    y: float
    K: float
    H: float
    det_gauss: float
    minimal_residual: float
    flat_residual: float


# --- isometry images of graphs ------------------------------------------------

def isometry_image_graph(provider: JetProvider, iso: IsometryElement) -> JetProvider:
    """Jet provider of the image surface of a graph under an ambient isometry.

    Every isometry here maps vertical lines to vertical lines, so the image of
    a graph is again a graph: with planar block Mat, z-sign eps and translation
    g, the image is f~(s) = g_z + eps f(Mat^-1 (s - g_xy)) + (g_x s_2 - g_y s_1)/2.
    """
    full = iso.orthogonal_part.matrix()
    planar = full[:2, :2]
    eps = full[2, 2]
    g = iso.translation
    planar_inv = planar.T  # orthogonal block

    def image_field(x, y):
        shifted = np.array([x - g.x, y - g.y])
        u = planar_inv @ shifted
        jet = provider(float(u[0]), float(u[1]))
        grad = eps * (planar @ np.array([jet.fx, jet.fy]))
        hess = eps * (planar @ np.array([[jet.fxx, jet.fxy], [jet.fxy, jet.fyy]]) @ planar.T)
        value = g.z + eps * jet.f + 0.5 * (g.x * y - g.y * x)
        return Jet2(
            f=value,
            fx=grad[0] - 0.5 * g.y,
            fy=grad[1] + 0.5 * g.x,
            fxx=hess[0, 0],
            fxy=hess[0, 1],
            fyy=hess[1, 1],
        )

    return image_field


def planar_action(iso: IsometryElement) -> Callable[[float, float], tuple[float, float]]:
    """The induced affine map of the (x, y) plane."""
    planar = iso.orthogonal_part.matrix()[:2, :2]
    g = iso.translation

    def act(x: float, y: float) -> tuple[float, float]:
        s = planar @ np.array([x, y])
        return float(s[0] + g.x), float(s[1] + g.y)

    return act
