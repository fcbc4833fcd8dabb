"""Truncated Taylor arithmetic (forward-mode jets).

Two carriers: :class:`Jet2` holds a value and all partial derivatives through
second order in the two surface variables; :class:`CurveJet3` holds a value
and derivatives through third order in a single curve variable.  Components
may be floats or equally shaped numpy arrays, so one evaluation can sweep a
whole grid of points.

Mixed partials are stored once (``fxy``), so their symmetry holds by
construction.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

import numpy as np

from .errors import DomainError

Scalar = Union[float, np.ndarray]


def _require(cond, message: str) -> None:
    if not np.all(cond):
        raise DomainError(message)


# --- derivative tables for the supported smooth functions ------------------
# Each table maps the argument value u to (g, g', g'', g''') at u; Jet2
# composition consumes the first three entries, CurveJet3 all four.

def _table_sin(u):
    s, c = np.sin(u), np.cos(u)
    return s, c, -s, -c


def _table_cos(u):
    s, c = np.sin(u), np.cos(u)
    return c, -s, -c, s


def _table_exp(u):
    e = np.exp(u)
    return e, e, e, e


def _table_ln(u):
    _require(u > 0, "ln requires a positive argument")
    return np.log(u), 1.0 / u, -1.0 / u**2, 2.0 / u**3


def _table_sqrt(u):
    # strictly positive: the derivatives blow up at zero
    _require(u > 0, "sqrt requires a positive argument for differentiation")
    r = np.sqrt(u)
    return r, 0.5 / r, -0.25 / (r * u), 0.375 / (r * u * u)


def _table_asinh(u):
    s = 1.0 / np.sqrt(1.0 + u * u)
    return np.arcsinh(u), s, -u * s**3, (2.0 * u * u - 1.0) * s**5


def _table_recip(u):
    _require(u != 0, "division by zero")
    iu = 1.0 / u
    return iu, -(iu * iu), 2.0 * iu**3, -6.0 * iu**4


def _table_pow(u, r: float):
    _require(u > 0, f"x^{r} requires a positive base")
    return (
        u**r,
        r * u ** (r - 1.0),
        r * (r - 1.0) * u ** (r - 2.0),
        r * (r - 1.0) * (r - 2.0) * u ** (r - 3.0),
    )


FUNCTION_TABLES = {
    "sin": _table_sin,
    "cos": _table_cos,
    "exp": _table_exp,
    "ln": _table_ln,
    "sqrt": _table_sqrt,
    "asinh": _table_asinh,
}


@dataclass(slots=True)
class Jet2:
    """Value and partial derivatives through second order at a point (x, y)."""

    f: Scalar
    fx: Scalar = 0.0
    fy: Scalar = 0.0
    fxx: Scalar = 0.0
    fxy: Scalar = 0.0
    fyy: Scalar = 0.0

    @staticmethod
    def constant(c: Scalar) -> "Jet2":
        return Jet2(c)

    @staticmethod
    def var_x(x: Scalar) -> "Jet2":
        return Jet2(x, fx=1.0)

    @staticmethod
    def var_y(y: Scalar) -> "Jet2":
        return Jet2(y, fy=1.0)

    def __neg__(self) -> "Jet2":
        return Jet2(-self.f, -self.fx, -self.fy, -self.fxx, -self.fxy, -self.fyy)

    def __add__(self, o) -> "Jet2":
        o = _as_jet2(o)
        return Jet2(self.f + o.f, self.fx + o.fx, self.fy + o.fy,
                    self.fxx + o.fxx, self.fxy + o.fxy, self.fyy + o.fyy)

    __radd__ = __add__

    def __sub__(self, o) -> "Jet2":
        return self + (-_as_jet2(o))

    def __rsub__(self, o) -> "Jet2":
        return _as_jet2(o) - self

    def __mul__(self, o) -> "Jet2":
        o = _as_jet2(o)
        a, b = self, o
        return Jet2(
            a.f * b.f,
            a.fx * b.f + a.f * b.fx,
            a.fy * b.f + a.f * b.fy,
            a.fxx * b.f + 2.0 * a.fx * b.fx + a.f * b.fxx,
            a.fxy * b.f + a.fx * b.fy + a.fy * b.fx + a.f * b.fxy,
            a.fyy * b.f + 2.0 * a.fy * b.fy + a.f * b.fyy,
        )

    __rmul__ = __mul__

    def __truediv__(self, o) -> "Jet2":
        return self * _as_jet2(o).reciprocal()

    def __rtruediv__(self, o) -> "Jet2":
        return _as_jet2(o) * self.reciprocal()

    def __pow__(self, r: float) -> "Jet2":
        return jet_pow_const(self, r)

    def reciprocal(self) -> "Jet2":
        return self.compose(_table_recip(self.f))

    def compose(self, table) -> "Jet2":
        """Chain rule for g(self) given (g, g', g'', ...) at self.f."""
        g0, g1, g2 = table[0], table[1], table[2]
        u = self
        return Jet2(
            g0,
            g1 * u.fx,
            g1 * u.fy,
            g2 * u.fx * u.fx + g1 * u.fxx,
            g2 * u.fx * u.fy + g1 * u.fxy,
            g2 * u.fy * u.fy + g1 * u.fyy,
        )

    def apply(self, fn_name: str) -> "Jet2":
        return self.compose(FUNCTION_TABLES[fn_name](self.f))


@dataclass(slots=True)
class CurveJet3:
    """Value and derivatives through third order of a single-variable function."""

    f: Scalar
    d1: Scalar = 0.0
    d2: Scalar = 0.0
    d3: Scalar = 0.0

    @staticmethod
    def constant(c: Scalar) -> "CurveJet3":
        return CurveJet3(c)

    @staticmethod
    def var(t: Scalar) -> "CurveJet3":
        return CurveJet3(t, d1=1.0)

    def __neg__(self) -> "CurveJet3":
        return CurveJet3(-self.f, -self.d1, -self.d2, -self.d3)

    def __add__(self, o) -> "CurveJet3":
        o = _as_jet3(o)
        return CurveJet3(self.f + o.f, self.d1 + o.d1, self.d2 + o.d2, self.d3 + o.d3)

    __radd__ = __add__

    def __sub__(self, o) -> "CurveJet3":
        return self + (-_as_jet3(o))

    def __rsub__(self, o) -> "CurveJet3":
        return _as_jet3(o) - self

    def __mul__(self, o) -> "CurveJet3":
        o = _as_jet3(o)
        a, b = self, o
        return CurveJet3(
            a.f * b.f,
            a.d1 * b.f + a.f * b.d1,
            a.d2 * b.f + 2.0 * a.d1 * b.d1 + a.f * b.d2,
            a.d3 * b.f + 3.0 * a.d2 * b.d1 + 3.0 * a.d1 * b.d2 + a.f * b.d3,
        )

    __rmul__ = __mul__

    def __truediv__(self, o) -> "CurveJet3":
        return self * _as_jet3(o).reciprocal()

    def __rtruediv__(self, o) -> "CurveJet3":
        return _as_jet3(o) * self.reciprocal()

    def __pow__(self, r: float) -> "CurveJet3":
        return jet_pow_const(self, r)

    def reciprocal(self) -> "CurveJet3":
        return self.compose(_table_recip(self.f))

    def compose(self, table) -> "CurveJet3":
        """Faa di Bruno through third order for g(self)."""
        g0, g1, g2, g3 = table
        u = self
        return CurveJet3(
            g0,
            g1 * u.d1,
            g2 * u.d1 * u.d1 + g1 * u.d2,
            g3 * u.d1**3 + 3.0 * g2 * u.d1 * u.d2 + g1 * u.d3,
        )

    def apply(self, fn_name: str) -> "CurveJet3":
        return self.compose(FUNCTION_TABLES[fn_name](self.f))


def _as_jet2(v) -> Jet2:
    if isinstance(v, Jet2):
        return v
    return Jet2.constant(v)


def _as_jet3(v) -> CurveJet3:
    if isinstance(v, CurveJet3):
        return v
    return CurveJet3.constant(v)


def _int_pow(a, n: int):
    """a**n by repeated multiplication; exact product rule, any sign of base."""
    if n == 0:
        return type(a).constant(np.ones_like(a.f) if isinstance(a.f, np.ndarray) else 1.0)
    if n < 0:
        return _int_pow(a, -n).reciprocal()
    result = a
    for _ in range(n - 1):
        result = result * a
    return result


def jet_pow_const(a, r: float):
    """a**r for a constant real exponent.

    Integer exponents go through repeated multiplication so negative bases
    work; anything else requires a strictly positive base.
    """
    if float(r) == int(r) and abs(r) <= 1_000_000:
        return _int_pow(a, int(r))
    return a.compose(_table_pow(a.f, float(r)))


def jet_pow(a, b):
    """General a**b for jets: the exponent must be constant or the base positive."""
    deriv_zero = (
        np.all(b.fx == 0) and np.all(b.fy == 0) and np.all(b.fxx == 0)
        and np.all(b.fxy == 0) and np.all(b.fyy == 0)
    ) if isinstance(b, Jet2) else (
        np.all(b.d1 == 0) and np.all(b.d2 == 0) and np.all(b.d3 == 0)
    )
    if deriv_zero and not isinstance(b.f, np.ndarray):
        return jet_pow_const(a, float(b.f))
    _require(a.f > 0, "a^b with a varying exponent requires a positive base")
    return (b * a.apply("ln")).apply("exp")
