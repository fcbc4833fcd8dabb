"""Translation graphs f = u(x) + v(y) + xy/2 and the classified families.

The product of the planar curves (x, 0, u(x)) and (0, y, v(y)) is the graph of
u + v + xy/2, whose normal-map determinant is u''(x) v''(y).  The shipped
families:

* ``MinimalFamily{C}``: the minimal graph with vanishing determinant,
  u = 0, v = (C/2) [y sqrt(1+y^2) + asinh(y)].
* ``FlatZeroDet{A, C>0}``: flat with vanishing determinant, u = A x and
  v' = sqrt(C (A+y)^2 - 1) on C (A+y)^2 > 1.
* ``FlatPower{A, A1, B}``: the power-law candidate v = B y^(1+A) / (1+A) with
  a quadratic u.  The derivation pins u'' = A while the stated solution reads
  u = A x^2 + A1 x (so u'' = 2A); both normalizations are carried and reports
  evaluate each without preferring either.
* ``FlatGeneral{C1, C2, C3, K1, K2, v0, v0prime}``: u = -C1 x +
  (C1^2 + 2 C2 x + C3)^(3/2) / (3 C2), with v integrated numerically from
  (K1/(C1 - y) + K2) v'' = v'.

``residual_report`` tabulates the relevant residuals over a grid and flags
PASS only when the numbers are below tolerance; nothing is assumed.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Callable, Union

import numpy as np

from .errors import DomainError
from .expressions import (
    Add,
    Call,
    Const,
    Div,
    Expr,
    Mul,
    Pow,
    Sub,
    Var,
    jet3_curve_at,
    parse_curve,
)
from .jets import CurveJet3, Jet2
from .numerics import DenseSolution, OdeProblem, ode_integrate
from .surfaces import Grid, Rect, SurfacePatch

CurveProvider = Callable[[float], CurveJet3]

PASS_TOLERANCE = 1e-8


@dataclass(frozen=True)
class CurvePair:
    """Order-3 jet providers for the two generating curves."""

    u: CurveProvider
    v: CurveProvider


def curve_from_expression(source: str | Expr, var: str = "t") -> CurveProvider:
    expr = parse_curve(source, var=var) if isinstance(source, str) else source
    return lambda t: jet3_curve_at(expr, t)


def constant_curve(value: float = 0.0) -> CurveProvider:
    return lambda t: CurveJet3(value, 0.0, 0.0, 0.0)


# --- the translation graph and its residuals -----------------------------------

def build_graph(pair: CurvePair, domain: Rect | None = None) -> SurfacePatch:
    """Graph of f = u(x) + v(y) + xy/2 as a jet provider (f_xy = 1/2 exactly)."""

    def field(x, y):
        uj = pair.u(x)
        vj = pair.v(y)
        return Jet2(
            f=uj.f + vj.f + 0.5 * x * y,
            fx=uj.d1 + 0.5 * y,
            fy=vj.d1 + 0.5 * x,
            fxx=uj.d2,
            fxy=0.5,
            fyy=vj.d2,
        )

    if domain is None:
        domain = Rect(-1.0, 1.0, -1.0, 1.0)
    return SurfacePatch(field=field, domain=domain)


def gauss_det(pair: CurvePair, x: float, y: float) -> float:
    """Normal-map determinant u''(x) v''(y) of the translation graph."""
    return float(pair.u(x).d2 * pair.v(y).d2)


def minimal_translation_residual(pair: CurvePair, x: float, y: float) -> float:
    """(1 + v'^2) u'' - v'(u' + y) + (1 + (u' + y)^2) v''; zero iff minimal."""
    uj, vj = pair.u(x), pair.v(y)
    p = uj.d1 + y
    return float((1.0 + vj.d1**2) * uj.d2 - vj.d1 * p + (1.0 + p * p) * vj.d2)


def flat_translation_residual(pair: CurvePair, x: float, y: float) -> float:
    """u'' v'' + (y + u') v'(v'' - u'') - (1 + v'^2).

    Equals w^4 K of the built graph identically (same sign); the equality is
    enforced as a cross-check test.
    """
    uj, vj = pair.u(x), pair.v(y)
    return float(
        uj.d2 * vj.d2
        + (y + uj.d1) * vj.d1 * (vj.d2 - uj.d2)
        - (1.0 + vj.d1**2)
    )


@dataclass(frozen=True)
class NecessaryConditionResiduals:
    """Two circulated forms of the x-differentiated flat-graph condition.

    With r = v'/v'' they differ by u''(y - v'): ``with_y_term`` is
    u''' - (u''' y r + (u'' u')' r - u'' y), ``with_slope_term`` is
    u''' + u'' v' - (y u''' + (u' u'')') r.  Both are reported side by side;
    neither is preferred.
    """

    with_y_term: float
    with_slope_term: float


def flat_necessary_residuals(pair: CurvePair, x: float, y: float) -> NecessaryConditionResiduals:
    uj, vj = pair.u(x), pair.v(y)
    if vj.d2 == 0.0:
        raise DomainError("necessary-condition residuals need v''(y) != 0")
    r = vj.d1 / vj.d2
    d_uu = uj.d3 * uj.d1 + uj.d2 * uj.d2  # (u'' u')'
    with_y = uj.d3 - (uj.d3 * y * r + d_uu * r - uj.d2 * y)
    with_slope = (uj.d3 + uj.d2 * vj.d1) - (y * uj.d3 + d_uu) * r
    return NecessaryConditionResiduals(float(with_y), float(with_slope))


# --- family definitions ---------------------------------------------------------

class FlatPowerNormalization(enum.Enum):
    """How the parameter A enters the quadratic curve u.

    QUADRATIC_COEFF: u = A x^2 + A1 x (A multiplies x^2, so u'' = 2A).
    SECOND_DERIVATIVE: u = A x^2 / 2 + A1 x (A equals u'').
    """

    QUADRATIC_COEFF = "quadratic-coefficient"
    SECOND_DERIVATIVE = "second-derivative"


@dataclass(frozen=True)
class MinimalFamily:
    """Minimal translation graph with vanishing normal-map determinant."""

    C: float


@dataclass(frozen=True)
class FlatZeroDet:
    """Flat translation graph with vanishing determinant; valid on C(A+y)^2 > 1."""

    A: float
    C: float

    def __post_init__(self):
        if not self.C > 0.0:
            raise ValueError("FlatZeroDet requires C > 0")


@dataclass(frozen=True)
class FlatPower:
    """Power-law candidate; nonzero determinant A B y^(A-1) away from y = 0."""

    A: float
    A1: float
    B: float
    normalization: FlatPowerNormalization

    def __post_init__(self):
        if self.A == 0.0:
            raise ValueError("FlatPower requires A != 0")
        if self.A == -1.0:
            raise ValueError("FlatPower exponent 1 + A must not vanish")
        if self.B == 0.0:
            raise ValueError("FlatPower requires B != 0")


@dataclass(frozen=True)
class FlatGeneral:
    """General nonzero-determinant candidate; v solves an explicit linear ODE."""

    C1: float
    C2: float
    C3: float
    K1: float
    K2: float
    v0: float = 0.0
    v0prime: float = 1.0

    def __post_init__(self):
        if self.C2 == 0.0:
            raise ValueError("FlatGeneral requires C2 != 0")


TranslationFamily = Union[MinimalFamily, FlatZeroDet, FlatPower, FlatGeneral]


def _minimal_v_tree(C: float) -> Expr:
    y = Var("y")
    inner = Mul(y, Call("sqrt", Add(Const(1.0), Pow(y, Const(2.0)))))
    return Mul(Const(0.5 * C), Add(inner, Call("asinh", y)))


def _flat_zero_det_v(A: float, C: float) -> CurveProvider:
    """Antiderivative of sqrt(C (A+y)^2 - 1), branch-selected by the sign of A+y.

    For s = A + y > 0 the antiderivative is s R/2 - ln(sqrt(C) s + R)/(2 sqrt(C))
    with R = sqrt(C s^2 - 1); for s < 0 the log argument flips to R - sqrt(C) s.
    The two branches form one odd antiderivative; differentiation is left to the
    jet evaluator so v' is an autodiff output, not a hand-coded formula.
    """
    y = Var("y")
    s = Add(Const(A), y)
    radicand = Sub(Mul(Const(C), Pow(s, Const(2.0))), Const(1.0))
    root = Call("sqrt", radicand)
    sqrt_c = math.sqrt(C)
    lead = Div(Mul(s, root), Const(2.0))
    pos_tree = Sub(lead, Div(Call("ln", Add(Mul(Const(sqrt_c), s), root)), Const(2.0 * sqrt_c)))
    neg_tree = Add(lead, Div(Call("ln", Sub(root, Mul(Const(sqrt_c), s))), Const(2.0 * sqrt_c)))

    def provider(t: float) -> CurveJet3:
        tree = pos_tree if A + t > 0 else neg_tree
        return jet3_curve_at(tree, t)

    return provider


def _flat_general_u_tree(fam: FlatGeneral) -> Expr:
    x = Var("x")
    radicand = Add(Const(fam.C1**2 + fam.C3), Mul(Const(2.0 * fam.C2), x))
    return Add(
        Mul(Const(-fam.C1), x),
        Div(Pow(radicand, Const(1.5)), Const(3.0 * fam.C2)),
    )


def family_curves(
    fam: TranslationFamily,
    y_span: tuple[float, float] | None = None,
    y0: float | None = None,
) -> CurvePair:
    """Closed-form curve pair of a family; FlatGeneral integrates v numerically
    over ``y_span`` with its initial data imposed at ``y0`` (default: span start)."""
    if isinstance(fam, MinimalFamily):
        return CurvePair(u=constant_curve(0.0), v=curve_from_expression(_minimal_v_tree(fam.C)))
    if isinstance(fam, FlatZeroDet):
        u_tree = Mul(Const(fam.A), Var("x"))
        return CurvePair(u=curve_from_expression(u_tree), v=_flat_zero_det_v(fam.A, fam.C))
    if isinstance(fam, FlatPower):
        x, y = Var("x"), Var("y")
        lead = fam.A if fam.normalization is FlatPowerNormalization.QUADRATIC_COEFF else 0.5 * fam.A
        u_tree = Add(Mul(Const(lead), Pow(x, Const(2.0))), Mul(Const(fam.A1), x))
        v_tree = Mul(Const(fam.B / (1.0 + fam.A)), Pow(y, Const(1.0 + fam.A)))
        return CurvePair(u=curve_from_expression(u_tree), v=curve_from_expression(v_tree))
    if isinstance(fam, FlatGeneral):
        if y_span is None:
            raise ValueError("FlatGeneral needs a y_span to integrate v over")
        return CurvePair(
            u=curve_from_expression(_flat_general_u_tree(fam)),
            v=ode_solve_v(fam, y_span, y0),
        )
    raise TypeError(f"not a translation family: {fam!r}")


# --- numerical v for FlatGeneral -------------------------------------------------

def _ode_coefficient(fam: FlatGeneral):
    if fam.K1 == 0.0:
        return (lambda y: fam.K2), (lambda y: 0.0)

    def coeff(y: float) -> float:
        return fam.K1 / (fam.C1 - y) + fam.K2

    def coeff_derivative(y: float) -> float:
        return fam.K1 / (fam.C1 - y) ** 2

    return coeff, coeff_derivative


def _check_coefficient_on_span(fam: FlatGeneral, lo: float, hi: float) -> None:
    if fam.K1 != 0.0 and lo <= fam.C1 <= hi:
        raise DomainError(f"coefficient pole y = C1 = {fam.C1} inside the span")
    if fam.K1 == 0.0 and fam.K2 == 0.0:
        raise DomainError("coefficient K1/(C1-y) + K2 vanishes identically")
    if fam.K1 != 0.0 and fam.K2 != 0.0:
        zero = fam.C1 + fam.K1 / fam.K2
        if lo <= zero <= hi:
            raise DomainError(f"coefficient zero-crossing at y = {zero} inside the span")


def ode_solve_v(
    fam: FlatGeneral,
    y_span: tuple[float, float],
    y0: float | None = None,
    rtol: float = 1e-10,
    atol: float = 1e-13,
) -> CurveProvider:
    """Dense jet provider for v with (K1/(C1 - y) + K2) v'' = v'.

    Integrates the first-order system (v, v'); v'' is reconstructed from the
    equation and v''' from its y-derivative, never by numerical differentiation.
    """
    lo, hi = float(min(y_span)), float(max(y_span))
    if lo == hi:
        raise ValueError("y_span must be non-degenerate")
    if y0 is None:
        y0 = lo
    if not lo <= y0 <= hi:
        raise ValueError(f"y0 = {y0} must lie inside the span [{lo}, {hi}]")
    _check_coefficient_on_span(fam, lo, hi)

    coeff, coeff_derivative = _ode_coefficient(fam)

    def rhs(t: float, state: np.ndarray) -> np.ndarray:
        return np.array([state[1], state[1] / coeff(t)])

    initial = np.array([fam.v0, fam.v0prime])
    pieces: list[DenseSolution] = []
    if y0 < hi:
        pieces.append(ode_integrate(OdeProblem(rhs, y0, hi, initial, rtol=rtol, atol=atol)))
    if y0 > lo:
        pieces.append(ode_integrate(OdeProblem(rhs, y0, lo, initial, rtol=rtol, atol=atol)))

    def provider(t: float) -> CurveJet3:
        for piece in pieces:
            t_lo, t_hi = min(piece.ts[0], piece.ts[-1]), max(piece.ts[0], piece.ts[-1])
            if t_lo - 1e-12 <= t <= t_hi + 1e-12:
                value, slope = piece(t)
                c = coeff(t)
                vpp = slope / c
                vppp = slope * (1.0 - coeff_derivative(t)) / (c * c)
                return CurveJet3(float(value), float(slope), float(vpp), float(vppp))
        raise ValueError(f"query y = {t} outside the solved span [{lo}, {hi}]")

    return provider


# --- residual reports ------------------------------------------------------------

FAMILY_TAGS = {
    "minimal-eqm": MinimalFamily,
    "flat-zero-det": FlatZeroDet,
    "flat-power": FlatPower,
    "flat-general": FlatGeneral,
}


def family_tag(fam: TranslationFamily) -> str:
    for tag, cls in FAMILY_TAGS.items():
        if isinstance(fam, cls):
            return tag
    raise TypeError(f"not a translation family: {fam!r}")


@dataclass(frozen=True)
class ResidualReport:
    """Grid tabulation of the family residuals; PASS is decided by the numbers."""

    family: str
    parameters: dict
    grid: Grid
    max_minimal_residual: float | None
    max_flat_residual: float | None
    max_abs_det: float
    min_abs_det: float
    worst_point: tuple[float, float]
    residuals: np.ndarray
    passed: bool


def _family_parameters(fam: TranslationFamily) -> dict:
    out = {}
    for name, value in vars(fam).items():
        out[name] = value.value if isinstance(value, enum.Enum) else value
    return out


def residual_report(
    fam: TranslationFamily,
    grid: Grid,
    y_span: tuple[float, float] | None = None,
    y0: float | None = None,
) -> ResidualReport:
    if y_span is None and isinstance(fam, FlatGeneral):
        y_span = (grid.rect.y0, grid.rect.y1)
    pair = family_curves(fam, y_span=y_span, y0=y0)

    xs, ys = grid.xs(), grid.ys()
    u_jets = [pair.u(float(xv)) for xv in xs]
    v_jets = [pair.v(float(yv)) for yv in ys]

    minimal = isinstance(fam, MinimalFamily)
    residuals = np.empty((grid.ny, grid.nx))
    dets = np.empty_like(residuals)
    for iy, (yv, vj) in enumerate(zip(ys, v_jets)):
        for ix, (xv, uj) in enumerate(zip(xs, u_jets)):
            p = uj.d1 + yv
            dets[iy, ix] = uj.d2 * vj.d2
            if minimal:
                residuals[iy, ix] = (1.0 + vj.d1**2) * uj.d2 - vj.d1 * p + (1.0 + p * p) * vj.d2
            else:
                residuals[iy, ix] = (
                    uj.d2 * vj.d2 + (yv + uj.d1) * vj.d1 * (vj.d2 - uj.d2) - (1.0 + vj.d1**2)
                )

    abs_res = np.abs(residuals)
    worst_flat_index = np.unravel_index(int(np.argmax(abs_res)), abs_res.shape)
    worst = (float(xs[worst_flat_index[1]]), float(ys[worst_flat_index[0]]))
    max_res = float(abs_res.max())

    return ResidualReport(
        family=family_tag(fam),
        parameters=_family_parameters(fam),
        grid=grid,
        max_minimal_residual=max_res if minimal else None,
        max_flat_residual=None if minimal else max_res,
        max_abs_det=float(np.abs(dets).max()),
        min_abs_det=float(np.abs(dets).min()),
        worst_point=worst,
        residuals=residuals,
        passed=bool(max_res <= PASS_TOLERANCE),
    )
