"""Numerical cross-checks of every closed-form formula in the package.

Each suite pits an analytic path against an independent oracle: the intrinsic
Brioschi formula against the Gauss-curvature theorem, covariant finite
differences against the second fundamental form, finite-difference Jacobians
against the normal-map differential, closed-form ODE solutions against the
integrator, and exact identities against their specializations.  Residual
reports for the power-law and general flat candidates are informational:
they document whatever the numbers say.

Everything is deterministic (fixed seeds), so repeated runs give identical
summaries.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import gans, gaussmap, heisenberg, surfaces
from .expressions import evaluate, jet2_at, jet3_curve_at, parse_curve, parse_surface, to_string
from .families import (
    CurvePair,
    FlatGeneral,
    FlatPower,
    FlatPowerNormalization,
    FlatZeroDet,
    MinimalFamily,
    ResidualReport,
    build_graph,
    constant_curve,
    curve_from_expression,
    family_curves,
    flat_necessary_residuals,
    flat_translation_residual,
    gauss_det,
    minimal_translation_residual,
    ode_solve_v,
    residual_report,
)
from .gans import DiskPoint, GansPoint
from .heisenberg import (
    GroupPoint,
    IsometryElement,
    ReflectionFlip,
    RotationZ,
    apply_isometry,
    connection,
    connection_in_direction,
    frame_at,
    inverse,
    isometry_inverse,
    left_translation_differential,
    metric_at,
    product,
)
from .numerics import OdeProblem, convergence_order, fd_derivative, ode_integrate, rk4_fixed
from .surfaces import Grid, Rect, expression_patch


@dataclass
class CheckResult:
    """One verification outcome; informational checks never fail."""

    name: str
    passed: bool
    max_error: float
    mandatory: bool = True
    detail: str = ""

    @property
    def status(self) -> str:
        if not self.mandatory:
            return "INFO"
        return "PASS" if self.passed else "FAIL"


# --- oracles -------------------------------------------------------------------

def brioschi_curvature(efg, X, Y, step: float = 1e-4):
    """Intrinsic curvature from first-form coefficients only.

    ``efg(X, Y)`` returns the arrays (E, F, G); their derivatives are taken by
    central differences, which keeps this path independent of the curvature
    theorem it is used to check.
    """
    h = step
    E0, F0, G0 = efg(X, Y)
    Exp, Fxp, Gxp = efg(X + h, Y)
    Exm, Fxm, Gxm = efg(X - h, Y)
    Eyp, Fyp, Gyp = efg(X, Y + h)
    Eym, Fym, Gym = efg(X, Y - h)
    _, Fpp, _ = efg(X + h, Y + h)
    _, Fpm, _ = efg(X + h, Y - h)
    _, Fmp, _ = efg(X - h, Y + h)
    _, Fmm, _ = efg(X - h, Y - h)

    E_x = (Exp - Exm) / (2 * h)
    E_y = (Eyp - Eym) / (2 * h)
    F_x = (Fxp - Fxm) / (2 * h)
    F_y = (Fyp - Fym) / (2 * h)
    G_x = (Gxp - Gxm) / (2 * h)
    G_y = (Gyp - Gym) / (2 * h)
    E_yy = (Eyp - 2 * E0 + Eym) / (h * h)
    G_xx = (Gxp - 2 * G0 + Gxm) / (h * h)
    F_xy = (Fpp - Fpm - Fmp + Fmm) / (4 * h * h)

    n = np.broadcast(E0, F0, G0).shape or (1,)
    z = np.zeros(np.broadcast(np.asarray(X), np.asarray(Y)).shape)

    def mat(rows):
        out = np.empty(z.shape + (3, 3))
        for i, row in enumerate(rows):
            for j, entry in enumerate(row):
                out[..., i, j] = entry
        return out

    m1 = mat([
        [-0.5 * E_yy + F_xy - 0.5 * G_xx, 0.5 * E_x, F_x - 0.5 * E_y],
        [F_y - 0.5 * G_x, E0 + z, F0 + z],
        [0.5 * G_y, F0 + z, G0 + z],
    ])
    m2 = mat([
        [z, 0.5 * E_y + z, 0.5 * G_x + z],
        [0.5 * E_y + z, E0 + z, F0 + z],
        [0.5 * G_x + z, F0 + z, G0 + z],
    ])
    denom = (E0 * G0 - F0 * F0) ** 2
    return (np.linalg.det(m1) - np.linalg.det(m2)) / denom


def first_form_function(provider):
    def efg(X, Y):
        jet = provider(X, Y)
        return surfaces.first_form(jet, X, Y)

    return efg


def weingarten_forms_fd(provider, x: float, y: float, step: float = 1e-5,
                        orientation: int = 1):
    """Second-form coefficients from covariant finite differences of the normal."""

    def normal(xx, yy):
        jet = provider(xx, yy)
        p, q = surfaces.slopes(jet, xx, yy)
        w = surfaces.area_factor(p, q)
        return orientation * np.array([-p / w, -q / w, 1.0 / w])

    dn_dx = (normal(x + step, y) - normal(x - step, y)) / (2 * step)
    dn_dy = (normal(x, y + step) - normal(x, y - step)) / (2 * step)

    jet0 = provider(x, y)
    p, q = surfaces.slopes(jet0, x, y)
    xx_vec = np.array([1.0, 0.0, p])
    xy_vec = np.array([0.0, 1.0, q])
    n0 = normal(x, y)
    cov_x = dn_dx + connection_in_direction(xx_vec, n0)
    cov_y = dn_dy + connection_in_direction(xy_vec, n0)
    return -cov_x @ xx_vec, -cov_x @ xy_vec, -cov_y @ xy_vec


def gauss_jacobian_fd(provider, x: float, y: float, step: float = 1e-5) -> np.ndarray:
    def phi(xx, yy):
        jet = provider(xx, yy)
        point = gaussmap.gauss_map(jet, xx, yy)
        return np.array([point.u, point.v])

    col_x = (phi(x + step, y) - phi(x - step, y)) / (2 * step)
    col_y = (phi(x, y + step) - phi(x, y - step)) / (2 * step)
    return np.column_stack([col_x, col_y])


def random_polynomial_field(rng, degree: int = 4):
    """Random polynomial in x, y with coefficients uniform in [-1, 1]."""
    from .expressions import Add, Const, Mul, Pow, Var

    tree = None
    for i in range(degree + 1):
        for j in range(degree + 1 - i):
            coefficient = float(rng.uniform(-1.0, 1.0))
            term = Mul(Const(coefficient),
                       Mul(Pow(Var("x"), Const(float(i))), Pow(Var("y"), Const(float(j)))))
            tree = term if tree is None else Add(tree, term)
    return tree


# --- shared corpora --------------------------------------------------------------

SMOOTH_FIELDS = (
    "sin(x)*cos(y)",
    "x^3/6+y^3/6",
    "exp(x/3)*sin(y/2)",
    "x^2*y-y^2/2",
    "ln(3+x)+x*y^2/4",
)

EXPRESSION_CORPUS = (
    ("x", 0.7, 0.4),
    ("y", 0.7, 0.4),
    ("3.5", 0.7, 0.4),
    ("x+y", 0.7, 0.4),
    ("x-2*y", 0.7, 0.4),
    ("x*y/2", 0.7, 0.4),
    ("x^2+sin(y)", 0.7, 0.4),
    ("sin(x)*cos(y)", 0.7, 0.4),
    ("exp(x/4)", 0.7, 0.4),
    ("ln(2+x)", 0.7, 0.4),
    ("sqrt(1+x^2+y^2)", 0.7, 0.4),
    ("asinh(x*y)", 0.7, 0.4),
    ("1/(1+x^2)", 0.7, 0.4),
    ("x^3-2*x*y+y^3", 0.7, 0.4),
    ("(x+y)^4", 0.7, 0.4),
    ("exp(-x^2-y^2)", 0.7, 0.4),
    ("ln(x+sqrt(1+x^2))", 0.7, 0.4),
    ("cos(x^2)-sin(y^2)", 0.7, 0.4),
    ("x/(2+cos(y))", 0.7, 0.4),
    ("(1+x^2)^(-1)", 0.7, 0.4),
    ("2^x", 0.7, 0.4),
    ("x^y", 0.7, 0.4),
    ("-x^2+y", 0.7, 0.4),
    ("x^2.5", 0.7, 0.4),
)

CURVE_PAIR_CORPUS = (
    ("x^2+sin(x)", "exp(y/2)"),
    ("x^3/3", "y^2-cos(y)"),
    ("exp(x/4)", "y^4/12"),
    ("asinh(x)", "sqrt(4+y^2)"),
    ("cos(2*x)/4", "ln(3+y)"),
)


def _pair_from_sources(u_src: str, v_src: str) -> CurvePair:
    return CurvePair(
        u=curve_from_expression(parse_curve(u_src, var="x")),
        v=curve_from_expression(parse_curve(v_src, var="y")),
    )


# --- suite: heisenberg ------------------------------------------------------------

def suite_heisenberg() -> list[CheckResult]:
    rng = np.random.default_rng(1001)
    results = []

    worst = 0.0
    for _ in range(50):
        g, h, k = (GroupPoint(*rng.uniform(-2, 2, size=3)) for _ in range(3))
        lhs = product(product(g, h), k).as_array()
        rhs = product(g, product(h, k)).as_array()
        worst = max(worst, float(np.max(np.abs(lhs - rhs))))
    results.append(CheckResult("heisenberg/associativity", worst <= 1e-14, worst))

    worst = 0.0
    for _ in range(20):
        g = GroupPoint(*rng.uniform(-2, 2, size=3))
        worst = max(worst, float(np.max(np.abs(product(g, inverse(g)).as_array()))))
    results.append(CheckResult("heisenberg/inverse", worst <= 1e-14, worst))

    worst = 0.0
    for _ in range(20):
        p = GroupPoint(*rng.uniform(-3, 3, size=3))
        frame = frame_at(p)
        gram = frame @ metric_at(p) @ frame.T
        worst = max(worst, float(np.max(np.abs(gram - np.eye(3)))))
    results.append(CheckResult("heisenberg/frame-orthonormality", worst <= 1e-12, worst))

    worst = 0.0
    for _ in range(30):
        g = GroupPoint(*rng.uniform(-2, 2, size=3))
        p = GroupPoint(*rng.uniform(-2, 2, size=3))
        v, w = rng.uniform(-1, 1, size=3), rng.uniform(-1, 1, size=3)
        dl = left_translation_differential(g)
        moved = product(g, p)
        lhs = (dl @ v) @ metric_at(moved) @ (dl @ w)
        rhs = v @ metric_at(p) @ w
        worst = max(worst, abs(float(lhs - rhs)))
    results.append(CheckResult("heisenberg/left-invariant-metric", worst <= 1e-12, worst))

    worst = 0.0
    for i in (1, 2, 3):
        for j in (1, 2, 3):
            for k in (1, 2, 3):
                lhs = connection(i, j).as_array()[k - 1] + connection(i, k).as_array()[j - 1]
                worst = max(worst, abs(lhs))
    results.append(CheckResult("heisenberg/metric-compatibility", worst <= 1e-15, worst))

    # torsion-free structure relation: nabla_{E1}E2 - nabla_{E2}E1 = [E1, E2] = E3
    bracket = connection(1, 2).as_array() - connection(2, 1).as_array()
    err = float(np.max(np.abs(bracket - np.array([0.0, 0.0, 1.0]))))
    sym_err = max(
        float(np.max(np.abs(connection(1, 3).as_array() - connection(3, 1).as_array()))),
        float(np.max(np.abs(connection(2, 3).as_array() - connection(3, 2).as_array()))),
    )
    worst = max(err, sym_err)
    results.append(CheckResult("heisenberg/torsion-and-structure", worst <= 1e-15, worst))

    worst = 0.0
    for _ in range(10):
        iso = IsometryElement(
            GroupPoint(*rng.uniform(-2, 2, size=3)),
            RotationZ(float(rng.uniform(-3, 3))) if rng.uniform() < 0.5
            else ReflectionFlip(float(rng.uniform(-3, 3))),
        )
        p = GroupPoint(*rng.uniform(-2, 2, size=3))
        round_trip = apply_isometry(isometry_inverse(iso), apply_isometry(iso, p))
        worst = max(worst, float(np.max(np.abs(round_trip.as_array() - p.as_array()))))
    results.append(CheckResult("heisenberg/isometry-inverse", worst <= 1e-12, worst))

    # isometries preserve lengths of short segments (5-node Simpson quadrature)
    def segment_length(a: np.ndarray, b: np.ndarray) -> float:
        nodes = np.linspace(0.0, 1.0, 5)
        weights = np.array([1.0, 4.0, 2.0, 4.0, 1.0]) / 12.0
        velocity = b - a
        total = 0.0
        for node, weight in zip(nodes, weights):
            point = GroupPoint(*(a + node * velocity))
            total += weight * math.sqrt(velocity @ metric_at(point) @ velocity)
        return total

    worst = 0.0
    for _ in range(10):
        iso = IsometryElement(
            GroupPoint(*rng.uniform(-1, 1, size=3)),
            RotationZ(float(rng.uniform(-3, 3))),
        )
        a = rng.uniform(-1, 1, size=3)
        b = a + 1e-3 * rng.uniform(-1, 1, size=3)
        la = segment_length(a, b)
        ia = apply_isometry(iso, GroupPoint(*a)).as_array()
        ib = apply_isometry(iso, GroupPoint(*b)).as_array()
        worst = max(worst, abs(segment_length(ia, ib) - la))
    results.append(CheckResult("heisenberg/isometry-segment-length", worst <= 1e-10, worst))

    return results


# --- suite: gans -------------------------------------------------------------------

def suite_gans() -> list[CheckResult]:
    rng = np.random.default_rng(1002)
    results = []

    worst = 0.0
    for _ in range(100):
        radius = math.sqrt(rng.uniform(0.0, 0.96))
        angle = rng.uniform(0.0, 2 * math.pi)
        p = DiskPoint(radius * math.cos(angle), radius * math.sin(angle))
        back = gans.gans_to_disk(gans.disk_to_gans(p))
        worst = max(worst, abs(back.x - p.x), abs(back.y - p.y))
    results.append(CheckResult("gans/disk-round-trip", worst <= 1e-12, worst))

    # rotations act linearly, so the pushforward is the rotation itself
    worst = 0.0
    for _ in range(30):
        q = GansPoint(*rng.uniform(-3, 3, size=2))
        theta = float(rng.uniform(0.0, 2 * math.pi))
        c, s = math.cos(theta), math.sin(theta)
        rot = np.array([[c, -s], [s, c]])
        t1, t2 = rng.uniform(-1, 1, size=2), rng.uniform(-1, 1, size=2)
        before = t1 @ gans.gans_metric(q) @ t2
        after = (rot @ t1) @ gans.gans_metric(gans.rotate(q, theta)) @ (rot @ t2)
        worst = max(worst, abs(float(after - before)))
    results.append(CheckResult("gans/rotation-pairing", worst <= 1e-12, worst))

    # the same for reflections, with the differential by finite differences
    worst = 0.0
    h = 1e-5
    for _ in range(20):
        q = GansPoint(*rng.uniform(-2, 2, size=2))
        a, b = rng.uniform(-1, 1, size=2)
        if abs(a) + abs(b) < 1e-3:
            a = 1.0

        def mapped(uu, vv):
            image = gans.reflect(GansPoint(uu, vv), a, b)
            return np.array([image.u, image.v])

        col_u = (mapped(q.u + h, q.v) - mapped(q.u - h, q.v)) / (2 * h)
        col_v = (mapped(q.u, q.v + h) - mapped(q.u, q.v - h)) / (2 * h)
        push = np.column_stack([col_u, col_v])
        t1, t2 = rng.uniform(-1, 1, size=2), rng.uniform(-1, 1, size=2)
        before = t1 @ gans.gans_metric(q) @ t2
        after = (push @ t1) @ gans.gans_metric(gans.reflect(q, a, b)) @ (push @ t2)
        worst = max(worst, abs(float(after - before)))
    results.append(CheckResult("gans/reflection-pairing-fd", worst <= 1e-8, worst))

    # model metric = pullback of the Poincare disk metric under gans_to_disk
    worst = 0.0
    for _ in range(50):
        q = GansPoint(*rng.uniform(-3, 3, size=2))

        def to_disk(uu, vv):
            p = gans.gans_to_disk(GansPoint(uu, vv))
            return np.array([p.x, p.y])

        col_u = (to_disk(q.u + h, q.v) - to_disk(q.u - h, q.v)) / (2 * h)
        col_v = (to_disk(q.u, q.v + h) - to_disk(q.u, q.v - h)) / (2 * h)
        jac = np.column_stack([col_u, col_v])
        pulled = jac.T @ gans.disk_metric(gans.gans_to_disk(q)) @ jac
        worst = max(worst, float(np.max(np.abs(pulled - gans.gans_metric(q)))))
    results.append(CheckResult("gans/poincare-pullback", worst <= 1e-8, worst))

    # the model has constant curvature -1 (Brioschi applied to its metric)
    def efg(U, V):
        d = 1.0 + U * U + V * V
        return (1.0 + V * V) / d, -U * V / d, (1.0 + U * U) / d

    U = np.array([0.0, 0.5, -1.2, 2.0, 0.3])
    V = np.array([0.0, -0.4, 0.8, 1.5, -2.2])
    curv = brioschi_curvature(efg, U, V)
    worst = float(np.max(np.abs(curv + 1.0)))
    results.append(CheckResult("gans/constant-curvature", worst <= 1e-6, worst))

    return results


# --- suite: expression ---------------------------------------------------------------

def _fd_partials(expr, x: float, y: float):
    fx = fd_derivative(lambda t: evaluate(expr, {"x": t, "y": y}), x, 1)
    fy = fd_derivative(lambda t: evaluate(expr, {"x": x, "y": t}), y, 1)
    fxx = fd_derivative(lambda t: evaluate(expr, {"x": t, "y": y}), x, 2)
    fyy = fd_derivative(lambda t: evaluate(expr, {"x": x, "y": t}), y, 2)
    fxy = fd_derivative(
        lambda t: fd_derivative(lambda s: evaluate(expr, {"x": t, "y": s}), y, 1), x, 1
    )
    return fx, fy, fxx, fxy, fyy


def suite_expression() -> list[CheckResult]:
    results = []

    worst = 0.0
    for source, x0, y0 in EXPRESSION_CORPUS:
        expr = parse_surface(source)
        jet = jet2_at(expr, x0, y0)
        fx, fy, fxx, fxy, fyy = _fd_partials(expr, x0, y0)
        for got, want in ((jet.fx, fx), (jet.fy, fy), (jet.fxx, fxx),
                          (jet.fxy, fxy), (jet.fyy, fyy)):
            rel = abs(float(got) - want) / max(1.0, abs(want))
            worst = max(worst, rel)
    results.append(CheckResult("expression/fd-oracle", worst <= 1e-6, worst,
                               detail=f"{len(EXPRESSION_CORPUS)} expressions"))

    all_match = True
    for source, _, _ in EXPRESSION_CORPUS:
        tree = parse_surface(source)
        if parse_surface(to_string(tree)) != tree:
            all_match = False
    results.append(CheckResult("expression/print-round-trip", all_match,
                               0.0 if all_match else 1.0))

    worst = 0.0
    for source in ("t^3", "exp(t)", "t*sqrt(1+t^2)", "asinh(t)", "sin(2*t)"):
        expr = parse_curve(source)
        jet = jet3_curve_at(expr, 0.8)
        d3 = fd_derivative(lambda s: evaluate(expr, {"t": s}), 0.8, 3)
        worst = max(worst, abs(jet.d3 - d3) / max(1.0, abs(d3)))
    results.append(CheckResult("expression/curve-third-derivative", worst <= 1e-6, worst))

    return results


# --- suite: surface identities --------------------------------------------------------

def suite_surface_identities() -> list[CheckResult]:
    rng = np.random.default_rng(1003)
    results = []
    providers = [expression_patch(src, Rect(-2, 2, -2, 2)).field for src in SMOOTH_FIELDS]

    worst_area = worst_two = worst_min = worst_flat = 0.0
    for provider in providers:
        for _ in range(20):
            x, y = rng.uniform(-0.9, 0.9, size=2)
            jet = provider(x, y)
            p, q = surfaces.slopes(jet, x, y)
            w = surfaces.area_factor(p, q)
            E, F, G = surfaces.first_form(jet, x, y)
            L, M, N = surfaces.second_form(jet, x, y)
            worst_area = max(worst_area, abs(float(E * G - F * F - w * w)) / max(1.0, w * w))
            h_direct = surfaces.mean_curvature(jet, x, y)
            h_forms = 0.5 * (E * N + G * L - 2 * F * M) / (E * G - F * F)
            worst_two = max(worst_two, abs(float(h_direct - h_forms)))
            worst_min = max(
                worst_min,
                abs(float(surfaces.minimal_residual(jet, x, y) - 2.0 * h_direct * w**3)),
            )
            worst_flat = max(
                worst_flat,
                abs(float(surfaces.flat_residual(jet, x, y)
                          - w**4 * surfaces.gauss_curvature(jet, x, y))),
            )
    results.append(CheckResult("surface/area-identity", worst_area <= 1e-12, worst_area))
    results.append(CheckResult("surface/mean-curvature-two-forms", worst_two <= 1e-10, worst_two))
    results.append(CheckResult("surface/minimal-residual-identity", worst_min <= 1e-10, worst_min))
    results.append(CheckResult("surface/flat-residual-identity", worst_flat <= 1e-10, worst_flat))

    worst_flip = worst_invariant = worst_orth = 0.0
    for provider in providers[:3]:
        for _ in range(10):
            x, y = rng.uniform(-0.9, 0.9, size=2)
            jet = provider(x, y)
            h_up = surfaces.mean_curvature(jet, x, y, orientation=1)
            h_down = surfaces.mean_curvature(jet, x, y, orientation=-1)
            worst_flip = max(worst_flip, abs(h_up + h_down))
            lu, mu, nu = surfaces.second_form(jet, x, y, orientation=1)
            ld, md, nd = surfaces.second_form(jet, x, y, orientation=-1)
            worst_invariant = max(
                worst_invariant,
                abs(float((lu * nu - mu * mu) - (ld * nd - md * md))),
            )
            normal = surfaces.unit_normal(jet, x, y)
            xx, xy = surfaces.tangent_frame(jet, x, y)
            worst_orth = max(worst_orth, abs(normal.dot(xx)), abs(normal.dot(xy)),
                             abs(normal.norm() - 1.0))
    results.append(CheckResult("surface/orientation-flip", worst_flip <= 1e-12, worst_flip))
    results.append(CheckResult("surface/orientation-invariant-det",
                               worst_invariant <= 1e-12, worst_invariant))
    results.append(CheckResult("surface/normal-orthonormality", worst_orth <= 1e-12, worst_orth))

    return results


# --- suite: brioschi --------------------------------------------------------------------

BRIOSCHI_SEED = 77


def suite_brioschi(n_fields: int = 20, n_points: int = 100) -> list[CheckResult]:
    rng = np.random.default_rng(BRIOSCHI_SEED)
    worst = 0.0
    min_scale = math.inf
    for _ in range(n_fields):
        tree = random_polynomial_field(rng)
        provider = expression_patch(tree, Rect(-2, 2, -2, 2)).field
        X = rng.uniform(-1.0, 1.0, size=n_points)
        Y = rng.uniform(-1.0, 1.0, size=n_points)
        k_fd = brioschi_curvature(first_form_function(provider), X, Y)
        jet = provider(X, Y)
        k_formula = surfaces.gauss_curvature(jet, X, Y)
        # relative tolerance with an absolute floor for near-flat samples
        delta = np.abs(k_formula - k_fd)
        scale = 1e-6 * np.abs(k_fd) + 1e-8
        worst = max(worst, float(np.max(delta / scale)))
        min_scale = min(min_scale, float(np.min(np.abs(k_fd))))
    passed = worst <= 1.0
    return [CheckResult(
        "brioschi/random-polynomial-fields", passed, worst,
        detail=f"{n_fields} fields x {n_points} points; tolerance 1e-6 relative "
               f"(+1e-8 floor); min |K| seen {min_scale:.3g}",
    )]


# --- suite: weingarten ---------------------------------------------------------------

def suite_weingarten() -> list[CheckResult]:
    rng = np.random.default_rng(1004)
    worst = 0.0
    for source in SMOOTH_FIELDS:
        provider = expression_patch(source, Rect(-2, 2, -2, 2)).field
        for _ in range(50):
            x, y = rng.uniform(-0.9, 0.9, size=2)
            jet = provider(x, y)
            analytic = surfaces.second_form(jet, x, y)
            oracle = weingarten_forms_fd(provider, x, y)
            worst = max(worst, float(np.max(np.abs(np.array(analytic) - np.array(oracle)))))
    return [CheckResult("weingarten/covariant-fd", worst <= 1e-6, worst,
                        detail=f"{len(SMOOTH_FIELDS)} fields x 50 points")]


# --- suite: plane checks ----------------------------------------------------------------

def suite_plane() -> list[CheckResult]:
    results = []
    flat0 = expression_patch("0", Rect(-2, 2, -2, 2))
    grid = Grid(Rect(-1, 1, -1, 1), 7, 7)

    worst_h = max(abs(surfaces.mean_curvature(flat0.field(x, y), x, y))
                  for x, y in grid.points())
    k_origin = surfaces.gauss_curvature(flat0.field(0.0, 0.0), 0.0, 0.0)
    results.append(CheckResult("plane/zero-field-minimal", worst_h == 0.0, worst_h))
    err_k = abs(k_origin + 0.75)
    results.append(CheckResult("plane/zero-field-curvature", err_k <= 1e-12, err_k,
                               detail="K(0,0) = -3/4"))

    saddle = expression_patch("x*y/2", Rect(-2, 2, -2, 2))
    worst_h = worst_det = 0.0
    for x, y in grid.points():
        jet = saddle.field(x, y)
        worst_h = max(worst_h, abs(surfaces.mean_curvature(jet, x, y)))
        worst_det = max(worst_det, abs(gaussmap.gauss_jacobian(jet)[1]))
    results.append(CheckResult("plane/product-plane-minimal", worst_h <= 1e-12, worst_h))
    results.append(CheckResult("plane/product-plane-degenerate-map",
                               worst_det <= 1e-12, worst_det))
    return results


# --- suite: gauss map jacobian -----------------------------------------------------------

def suite_gauss_jacobian() -> list[CheckResult]:
    rng = np.random.default_rng(1005)
    results = []

    worst = 0.0
    for source in SMOOTH_FIELDS:
        provider = expression_patch(source, Rect(-2, 2, -2, 2)).field
        for _ in range(10):
            x, y = rng.uniform(-0.9, 0.9, size=2)
            analytic, det_formula = gaussmap.gauss_jacobian(provider(x, y))
            fd = gauss_jacobian_fd(provider, x, y)
            worst = max(worst, float(np.max(np.abs(analytic - fd))))
            worst = max(worst, abs(det_formula - float(np.linalg.det(analytic))))
    results.append(CheckResult("gauss-jacobian/fd-agreement", worst <= 1e-6, worst))

    worst = 0.0
    for u_src, v_src in CURVE_PAIR_CORPUS:
        pair = _pair_from_sources(u_src, v_src)
        patch = build_graph(pair)
        for _ in range(10):
            x, y = rng.uniform(-0.9, 0.9, size=2)
            _, det = gaussmap.gauss_jacobian(patch.field(x, y))
            worst = max(worst, abs(det - gauss_det(pair, x, y)))
    results.append(CheckResult("gauss-jacobian/translation-determinant",
                               worst <= 1e-12, worst,
                               detail="det dphi = u'' v'' on translation graphs"))
    return results


# --- suite: the differential identity ------------------------------------------------------

GAUSS_DIFFERENTIAL_FIELDS = ("x^2+y^2", "sin(x)*cos(y)", "exp(x/3)*y^2/4")


def suite_gauss_differential() -> list[CheckResult]:
    rng = np.random.default_rng(1006)
    results = []

    worst = 0.0
    count = 0
    directions = [(1.0, 0.0), (0.0, 1.0), (0.6, -0.8)]
    for source in GAUSS_DIFFERENTIAL_FIELDS:
        patch = expression_patch(source, Rect(-1.5, 1.5, -1.5, 1.5))
        for _ in range(7):
            if count >= 20:
                break
            x, y = rng.uniform(-1.0, 1.0, size=2)
            v = directions[count % len(directions)]
            worst = max(worst, gaussmap.verify_gauss_differential(patch, x, y, v=v))
            count += 1
    results.append(CheckResult("gauss-differential/identity", worst <= 1e-6, worst,
                               detail=f"{count} points across {len(GAUSS_DIFFERENTIAL_FIELDS)} fields"))

    patch = expression_patch("sin(x)*cos(y)", Rect(-1.5, 1.5, -1.5, 1.5))
    steps = [1e-3, 5e-4, 2.5e-4]
    errors = [gaussmap.verify_gauss_differential(patch, 0.4, -0.3, v=(1.0, 0.0), step=s)
              for s in steps]
    estimate = convergence_order(steps, errors)
    ok = estimate.exact or (estimate.order is not None and 1.5 <= estimate.order <= 2.7)
    results.append(CheckResult("gauss-differential/order-h2", ok,
                               0.0 if estimate.exact else abs((estimate.order or 0.0) - 2.0),
                               detail=f"{estimate}"))
    return results


# --- suite: equivariance ----------------------------------------------------------------------

def suite_equivariance() -> list[CheckResult]:
    grid = Grid(Rect(-1, 1, -1, 1), 11, 11)
    results = []

    patch = expression_patch("x^2*y", Rect(-4, 4, -4, 4))
    translation = IsometryElement(GroupPoint(1.0, -2.0, 0.5))
    dev = gaussmap.equivariance_check(patch, translation, grid)
    results.append(CheckResult("equivariance/left-translation", dev <= 1e-10, dev))

    bowl = expression_patch("(x^2+y^2)/2", Rect(-4, 4, -4, 4))
    rotation = IsometryElement(orthogonal_part=RotationZ(math.pi / 3))
    dev = gaussmap.equivariance_check(bowl, rotation, grid)
    results.append(CheckResult("equivariance/rotation", dev <= 1e-10, dev))

    generic = expression_patch("x^2*y/3+sin(x)", Rect(-4, 4, -4, 4))
    flip = IsometryElement(orthogonal_part=ReflectionFlip(0.7))
    dev = gaussmap.equivariance_check(generic, flip, grid)
    results.append(CheckResult("equivariance/reflection-flip", dev <= 1e-10, dev))

    identity = IsometryElement()
    dev = gaussmap.equivariance_check(patch, identity, grid)
    results.append(CheckResult("equivariance/identity", dev == 0.0, dev))
    return results


# --- suites: families -------------------------------------------------------------------------

def suite_minimal_family() -> list[CheckResult]:
    results = []
    worst = 0.0
    spread = 0.0
    for c in (0.5, 1.0, 2.0):
        fam = MinimalFamily(C=c)
        grid = Grid(Rect(-1, 1, -2, 2), 41, 41)
        report = residual_report(fam, grid)
        worst = max(worst, report.max_minimal_residual)
        pair = family_curves(fam)
        for yv in np.linspace(-2, 2, 9):
            values = [minimal_translation_residual(pair, xv, float(yv))
                      for xv in (-1.0, 0.0, 1.0)]
            spread = max(spread, max(values) - min(values))
    results.append(CheckResult("minimal-family/residual", worst <= 1e-9, worst,
                               detail="C in {0.5, 1, 2} on [-1,1]x[-2,2], 41x41"))
    results.append(CheckResult("minimal-family/x-independence", spread <= 1e-12, spread))
    return results


def _flat_zero_det_grids(a: float, c: float) -> list[Grid]:
    # valid region: C (A+y)^2 >= 1.1, both signs of s = A + y
    s_min = math.sqrt(1.1 / c)
    pos = Rect(-1.0, 1.0, -a + s_min, -a + s_min + 2.0)
    neg = Rect(-1.0, 1.0, -a - s_min - 2.0, -a - s_min)
    return [Grid(pos, 21, 41), Grid(neg, 21, 41)]


def suite_flat_family() -> list[CheckResult]:
    results = []
    worst = 0.0
    worst_slope = 0.0
    for a, c in ((0.0, 1.0), (1.0, 2.0), (-1.0, 4.0)):
        fam = FlatZeroDet(A=a, C=c)
        pair = family_curves(fam)
        for grid in _flat_zero_det_grids(a, c):
            report = residual_report(fam, grid)
            worst = max(worst, report.max_flat_residual)
            for yv in grid.ys():
                jet = pair.v(float(yv))
                target = math.sqrt(c * (a + yv) ** 2 - 1.0)
                worst_slope = max(worst_slope, abs(jet.d1 - target))
    results.append(CheckResult("flat-family/residual", worst <= 1e-8, worst,
                               detail="(A, C) in {(0,1), (1,2), (-1,4)} on C(A+y)^2 >= 1.1"))
    results.append(CheckResult("flat-family/slope-autodiff", worst_slope <= 1e-10, worst_slope,
                               detail="v' equals sqrt(C (A+y)^2 - 1) on both branches"))
    return results


def suite_translation_identities() -> list[CheckResult]:
    rng = np.random.default_rng(1007)
    results = []

    worst_det = worst_min = worst_flat = worst_z = 0.0
    for u_src, v_src in CURVE_PAIR_CORPUS:
        pair = _pair_from_sources(u_src, v_src)
        patch = build_graph(pair)
        u_expr = parse_curve(u_src, var="x")
        v_expr = parse_curve(v_src, var="y")
        for _ in range(20):
            x, y = rng.uniform(-0.9, 0.9, size=2)
            jet = patch.field(x, y)
            worst_det = max(worst_det, abs(gauss_det(pair, x, y)
                                           - gaussmap.gauss_jacobian(jet)[1]))
            worst_min = max(worst_min, abs(minimal_translation_residual(pair, x, y)
                                           - float(surfaces.minimal_residual(jet, x, y))))
            worst_flat = max(worst_flat, abs(flat_translation_residual(pair, x, y)
                                             - float(surfaces.flat_residual(jet, x, y))))
            alpha = GroupPoint(x, 0.0, evaluate(u_expr, {"x": x}))
            beta = GroupPoint(0.0, y, evaluate(v_expr, {"y": y}))
            worst_z = max(worst_z, abs(product(alpha, beta).z - float(jet.f)))
    results.append(CheckResult("translation/determinant-identity", worst_det <= 1e-12, worst_det))
    results.append(CheckResult("translation/minimal-residual-match", worst_min <= 1e-12, worst_min))
    results.append(CheckResult("translation/flat-residual-is-w4K", worst_flat <= 1e-9, worst_flat,
                               detail="same sign, enforced equality"))
    results.append(CheckResult("translation/group-product-height", worst_z <= 1e-12, worst_z))
    return results


def suite_necessary_condition() -> list[CheckResult]:
    results = []
    probes = ((0.3, 0.7), (-0.5, 1.2), (1.0, 2.0))

    pair = CurvePair(u=constant_curve(0.0), v=curve_from_expression("exp(y)", var="y"))
    worst = 0.0
    for x, y in probes:
        res = flat_necessary_residuals(pair, x, y)
        worst = max(worst, abs(res.with_y_term), abs(res.with_slope_term))
    results.append(CheckResult("necessary-condition/vanishing-u", worst <= 1e-12, worst))

    fam = FlatPower(A=1.0, A1=0.0, B=1.0,
                    normalization=FlatPowerNormalization.SECOND_DERIVATIVE)
    pair = family_curves(fam)
    worst = 0.0
    for x, y in probes:
        worst = max(worst, abs(flat_necessary_residuals(pair, x, y).with_y_term))
    results.append(CheckResult("necessary-condition/power-family-second-derivative",
                               worst <= 1e-12, worst,
                               detail="u'' = A normalization satisfies the condition"))

    fam = FlatPower(A=1.0, A1=0.0, B=1.0,
                    normalization=FlatPowerNormalization.QUADRATIC_COEFF)
    pair = family_curves(fam)
    worst = 0.0
    for x, y in probes:
        res = flat_necessary_residuals(pair, x, y).with_y_term
        worst = max(worst, abs(res - (-2.0 * fam.A * y)))
    results.append(CheckResult("necessary-condition/power-family-quadratic-coeff",
                               worst <= 1e-12, worst,
                               detail="residual is -2Ay under the u = Ax^2 + A1 x reading"))

    pair = _pair_from_sources("x^3", "exp(y)")
    worst = 0.0
    for x, y in probes:
        res = flat_necessary_residuals(pair, x, y)
        uj, vj = pair.u(x), pair.v(y)
        expected_gap = uj.d2 * (y - vj.d1)
        worst = max(worst, abs((res.with_y_term - res.with_slope_term) - expected_gap))
    results.append(CheckResult("necessary-condition/forms-differ-by-u2-gap",
                               worst <= 1e-12, worst,
                               detail="with_y - with_slope = u''(y - v')"))
    return results


def suite_nonexistence() -> list[CheckResult]:
    results = []

    # v'' = 0 branch: with v' = A != 0 the flat residual must vary in y
    pair = CurvePair(u=curve_from_expression("x^2", var="x"),
                     v=curve_from_expression("y", var="y"))
    smallest = math.inf
    for xv in (-1.0, -0.5, 0.0, 0.5, 1.0):
        variation = abs(flat_translation_residual(pair, xv, 2.0)
                        - flat_translation_residual(pair, xv, 0.0))
        smallest = min(smallest, variation)
    results.append(CheckResult("nonexistence/v-linear-branch", smallest > 1e-6, smallest,
                               detail="flat residual varies in y for u = x^2, v = y"))

    # constant-ratio branch: u = e^x solves the first coefficient equation but
    # must violate the second, (u' u'')' C - u''' != 0 (C = 1)
    smallest = math.inf
    first_eq = 0.0
    for xv in (-1.0, -0.5, 0.0, 0.5, 1.0):
        first_eq = max(first_eq, abs(math.exp(xv) - math.exp(xv)))  # C u''' - u'' = 0
        second = 2.0 * math.exp(2.0 * xv) - math.exp(xv)
        smallest = min(smallest, abs(second))
    results.append(CheckResult("nonexistence/constant-ratio-branch", smallest > 1e-6, smallest,
                               detail=f"second coefficient stays nonzero; first holds to {first_eq:g}"))

    # reciprocal-ratio branch: r = C1 - C2/y with u = e^x (first coefficient
    # equation) leaves the condition residual 2 e^x - 2 e^{2x} (1 - 1/y) nonzero
    smallest = math.inf
    for xv, yv in ((0.0, 2.0), (0.5, 1.5), (1.0, 3.0), (-0.5, 2.5), (0.25, 0.5)):
        u3 = math.exp(xv)
        duu = 2.0 * math.exp(2.0 * xv)
        r = 1.0 - 1.0 / yv
        residual = u3 - (u3 * yv * r + duu * r - u3 * yv)
        smallest = min(smallest, abs(residual))
    results.append(CheckResult("nonexistence/reciprocal-ratio-branch", smallest > 1e-6, smallest))
    return results


# --- suite: ode and fd ---------------------------------------------------------------------

def suite_ode() -> list[CheckResult]:
    results = []

    cases = [
        ("exponential", lambda t, y: y, 0.0, 1.0, np.array([1.0]),
         lambda: math.e, lambda sol: float(sol(1.0)[0])),
        ("gaussian", lambda t, y: -2.0 * t * y, 0.0, 2.0, np.array([1.0]),
         lambda: math.exp(-4.0), lambda sol: float(sol(2.0)[0])),
        ("separable", lambda t, y: np.array([y[1], y[1] * (5.0 - t)]), 0.0, 1.0,
         np.array([0.0, 1.0]),
         lambda: math.exp(4.5), lambda sol: float(sol(1.0)[1])),
    ]
    worst_loose = worst_tight = 0.0
    for _, rhs, t0, t1, y0, exact, extract in cases:
        for rtol, bucket in ((1e-6, "loose"), (1e-9, "tight")):
            solution = ode_integrate(OdeProblem(rhs, t0, t1, y0, rtol=rtol, atol=1e-14))
            err = abs(extract(solution) - exact())
            if bucket == "loose":
                worst_loose = max(worst_loose, err / (10 * 1e-6 * max(1.0, exact())))
            else:
                worst_tight = max(worst_tight, err)
    results.append(CheckResult("ode/closed-forms-rtol-1e-6", worst_loose <= 1.0, worst_loose,
                               detail="errors below 10 x rtol (scaled)"))
    results.append(CheckResult("ode/closed-forms-rtol-1e-9", worst_tight <= 1e-8, worst_tight))

    # dense output reproduces mesh states exactly
    solution = ode_integrate(OdeProblem(lambda t, y: y, 0.0, 1.0, np.array([1.0])))
    worst = max(float(np.max(np.abs(solution(t) - y)))
                for t, y in zip(solution.ts, solution.ys))
    results.append(CheckResult("ode/dense-mesh-exact", worst == 0.0, worst))

    steps = [0.1, 0.05, 0.025, 0.0125]
    errors = [abs(float(rk4_fixed(lambda t, y: y, 0.0, 1.0, 1.0, round(1.0 / h))[0]) - math.e)
              for h in steps]
    estimate = convergence_order(steps, errors)
    ok = estimate.order is not None and abs(estimate.order - 4.0) <= 0.2
    results.append(CheckResult("ode/rk4-order", ok,
                               abs((estimate.order or 0.0) - 4.0), detail=f"{estimate}"))

    # dense-output accuracy scales like h^4 between mesh points
    fam = FlatGeneral(C1=0.0, C2=1.0, C3=1.0, K1=0.0, K2=2.0, v0=0.0, v0prime=1.0)
    hs, errs = [], []
    for rtol in (1e-5, 1e-7, 1e-9):
        problem = OdeProblem(lambda t, y: np.array([y[1], y[1] / 2.0]), 0.0, 2.0,
                             np.array([0.0, 1.0]), rtol=rtol, atol=1e-14)
        solution = ode_integrate(problem)
        mids = 0.5 * (solution.ts[:-1] + solution.ts[1:])
        err = max(abs(float(solution(t)[1]) - math.exp(t / 2.0)) for t in mids)
        hs.append(float(np.mean(np.diff(solution.ts))))
        errs.append(err)
    estimate = convergence_order(hs, errs)
    ok = estimate.exact or (estimate.order is not None and 3.2 <= estimate.order <= 5.2)
    results.append(CheckResult("ode/dense-order-h4", ok,
                               0.0 if estimate.exact else abs((estimate.order or 0.0) - 4.0),
                               detail=f"{estimate}; midpoint errors vs mean step"))

    provider = ode_solve_v(fam, (0.0, 1.0), rtol=1e-10)
    err = abs(provider(1.0).d1 - math.exp(0.5))
    results.append(CheckResult("ode/flat-general-slope", err <= 1e-8, err,
                               detail="v'(1) = e^(1/2) for K1=0, K2=2"))
    return results


def suite_fd() -> list[CheckResult]:
    results = []

    err = abs(fd_derivative(math.sin, 0.0, 1) - 1.0)
    results.append(CheckResult("fd/sin-first", err <= 1e-10, err))
    err = abs(fd_derivative(math.exp, 0.0, 3) - 1.0)
    results.append(CheckResult("fd/exp-third", err <= 1e-6, err))
    err = abs(fd_derivative(lambda t: t * t, 0.0, 2) - 2.0)
    results.append(CheckResult("fd/quadratic-second", err <= 1e-9, err,
                               detail="stencil exact for quadratics at t = 0"))

    from .numerics import central_difference

    steps = [0.1, 0.05, 0.025]
    plain = [abs(central_difference(math.sin, 0.3, 1, h) - math.cos(0.3)) for h in steps]
    rich = [abs(fd_derivative(math.sin, 0.3, 1, step=h) - math.cos(0.3)) for h in steps]
    plain_order = convergence_order(steps, plain)
    rich_order = convergence_order(steps, rich)
    ok = (plain_order.order is not None and abs(plain_order.order - 2.0) <= 0.2
          and rich_order.order is not None and abs(rich_order.order - 4.0) <= 0.2)
    results.append(CheckResult("fd/advertised-orders", ok,
                               max(abs((plain_order.order or 0) - 2.0),
                                   abs((rich_order.order or 0) - 4.0)),
                               detail=f"plain {plain_order}, Richardson {rich_order}"))
    return results


# --- suite: residual reports and the vertical check -------------------------------------------

def standard_reports() -> list[ResidualReport]:
    """The report set the verification command prints."""
    reports = [
        residual_report(MinimalFamily(C=2.0), Grid(Rect(-1, 1, -2, 2), 41, 41)),
        residual_report(FlatZeroDet(A=1.0, C=2.0), _flat_zero_det_grids(1.0, 2.0)[0]),
    ]
    for normalization in FlatPowerNormalization:
        fam = FlatPower(A=1.0, A1=0.0, B=1.0, normalization=normalization)
        reports.append(residual_report(fam, Grid(Rect(-1, 1, 0.5, 2.0), 21, 21)))
    fam = FlatGeneral(C1=5.0, C2=1.0, C3=0.0, K1=1.0, K2=0.0)
    reports.append(residual_report(fam, Grid(Rect(-1, 1, 0.0, 1.0), 21, 21)))
    return reports


def describe_report(report: ResidualReport) -> str:
    parts = [f"{report.family}{report.parameters}"]
    if report.max_minimal_residual is not None:
        parts.append(f"max |minimal residual| = {report.max_minimal_residual:.3e}")
    if report.max_flat_residual is not None:
        parts.append(f"max |flat residual| = {report.max_flat_residual:.3e}")
    parts.append(f"|det| in [{report.min_abs_det:.3e}, {report.max_abs_det:.3e}]")
    parts.append(f"worst at {report.worst_point}")
    parts.append("PASS" if report.passed else "residual profile recorded")
    return "; ".join(parts)


def suite_residual_reports() -> list[CheckResult]:
    results = []
    for report in standard_reports():
        mandatory = report.family in ("minimal-eqm", "flat-zero-det")
        relevant = (report.max_minimal_residual if report.max_minimal_residual is not None
                    else report.max_flat_residual)
        results.append(CheckResult(
            f"residual-report/{report.family}"
            + (f"-{report.parameters.get('normalization', '')}" if report.family == "flat-power" else ""),
            report.passed if mandatory else True,
            relevant,
            mandatory=mandatory,
            detail=describe_report(report),
        ))
    return results


def suite_vertical() -> list[CheckResult]:
    # weaker, checkable fact: the normal map is never constant on any shipped
    # family grid
    cases = [
        (MinimalFamily(C=1.0), Grid(Rect(-1, 1, -2, 2), 11, 11), None),
        (FlatZeroDet(A=0.0, C=1.0), Grid(Rect(-1, 1, 1.05, 2.0), 11, 11), None),
        (FlatPower(A=1.0, A1=0.0, B=1.0,
                   normalization=FlatPowerNormalization.SECOND_DERIVATIVE),
         Grid(Rect(-1, 1, 0.5, 2.0), 11, 11), None),
        (FlatGeneral(C1=5.0, C2=1.0, C3=0.0, K1=1.0, K2=0.0),
         Grid(Rect(-1, 1, 0.0, 1.0), 11, 11), (0.0, 1.0)),
    ]
    smallest = math.inf
    for fam, grid, y_span in cases:
        pair = family_curves(fam, y_span=y_span)
        patch = build_graph(pair)
        us, vs = [], []
        for x, y in grid.points():
            point = gaussmap.gauss_map(patch.field(x, y), x, y)
            us.append(point.u)
            vs.append(point.v)
        spread = max(max(us) - min(us), max(vs) - min(vs))
        smallest = min(smallest, spread)
    return [CheckResult("vertical/normal-map-non-constant", smallest > 1e-9, smallest,
                        detail="max - min of the normal map over each family grid")]


SUITES = {
    "heisenberg": suite_heisenberg,
    "gans": suite_gans,
    "expression": suite_expression,
    "surface-identities": suite_surface_identities,
    "brioschi": suite_brioschi,
    "weingarten": suite_weingarten,
    "plane": suite_plane,
    "gauss-jacobian": suite_gauss_jacobian,
    "gauss-differential": suite_gauss_differential,
    "equivariance": suite_equivariance,
    "minimal-family": suite_minimal_family,
    "flat-family": suite_flat_family,
    "translation-identities": suite_translation_identities,
    "necessary-condition": suite_necessary_condition,
    "nonexistence": suite_nonexistence,
    "ode": suite_ode,
    "fd": suite_fd,
    "residual-reports": suite_residual_reports,
    "vertical": suite_vertical,
}


def run_suites(names) -> list[CheckResult]:
    results = []
    for name in names:
        results.extend(SUITES[name]())
    return results
