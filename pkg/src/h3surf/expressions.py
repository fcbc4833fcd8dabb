"""A small arithmetic expression language with exact differentiation.

Grammar (precedence low to high; ``^`` binds tighter than unary minus, so
``-x^2`` is ``-(x^2)``)::

    sum    := term (('+' | '-') term)*
    term   := factor (('*' | '/') factor)*
    factor := '-' factor | power
    power  := atom ('^' factor)?          # right associative
    atom   := NUMBER | VARIABLE | FUNC '(' sum ')' | '(' sum ')'

Functions: sin, cos, exp, ln, sqrt, asinh.  Surface expressions use the
variables x and y; curve expressions use a single variable.  Unknown
identifiers are rejected at parse time.

Evaluation comes in two independent flavours: a plain float evaluator
(:func:`evaluate`, used as the finite-difference oracle's target) and
jet evaluators (:func:`jet2_at`, :func:`jet3_curve_at`) that propagate
derivatives through the tree exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Mapping, Union

from .errors import DomainError
from .jets import FUNCTION_TABLES, CurveJet3, Jet2, jet_pow

_FUNCTIONS = tuple(sorted(FUNCTION_TABLES))
SURFACE_VARIABLES = ("x", "y")


class ParseError(ValueError):
    """Syntax or identifier error; ``position`` is the 0-based source offset."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


# --- abstract syntax ---------------------------------------------------------

@dataclass(frozen=True)
class Const:
    value: float


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Neg:
    a: "Expr"


@dataclass(frozen=True)
class Add:
    a: "Expr"
    b: "Expr"


@dataclass(frozen=True)
class Sub:
    a: "Expr"
    b: "Expr"


@dataclass(frozen=True)
class Mul:
    a: "Expr"
    b: "Expr"


@dataclass(frozen=True)
class Div:
    a: "Expr"
    b: "Expr"


@dataclass(frozen=True)
class Pow:
    a: "Expr"
    b: "Expr"


@dataclass(frozen=True)
class Call:
    fn: str
    arg: "Expr"


Expr = Union[Const, Var, Neg, Add, Sub, Mul, Div, Pow, Call]


# --- tokenizer ---------------------------------------------------------------

_OPERATORS = set("+-*/^(),")


def _tokenize(src: str) -> list[tuple[str, str, int]]:
    tokens = []
    i, n = 0, len(src)
    while i < n:
        ch = src[i]
        if ch in " \t\r\n":
            i += 1
            continue
        if ch in _OPERATORS:
            tokens.append(("op", ch, i))
            i += 1
            continue
        if ch.isdigit() or (ch == "." and i + 1 < n and src[i + 1].isdigit()):
            j = i
            while j < n and (src[j].isdigit() or src[j] == "."):
                j += 1
            if j < n and src[j] in "eE":
                k = j + 1
                if k < n and src[k] in "+-":
                    k += 1
                if k < n and src[k].isdigit():
                    j = k
                    while j < n and src[j].isdigit():
                        j += 1
            text = src[i:j]
            try:
                float(text)
            except ValueError:
                raise ParseError(f"malformed number {text!r}", i) from None
            tokens.append(("num", text, i))
            i = j
            continue
        if ch.isalpha() or ch == "_":
            j = i
            while j < n and (src[j].isalnum() or src[j] == "_"):
                j += 1
            tokens.append(("ident", src[i:j], i))
            i = j
            continue
        raise ParseError(f"unexpected character {ch!r}", i)
    tokens.append(("end", "", n))
    return tokens


# --- recursive-descent parser ------------------------------------------------

class _Parser:
    def __init__(self, src: str, variables: Iterable[str]):
        self.tokens = _tokenize(src)
        self.pos = 0
        self.variables = frozenset(variables)

    def peek(self):
        return self.tokens[self.pos]

    def advance(self):
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect(self, text: str):
        kind, value, at = self.peek()
        if kind != "op" or value != text:
            raise ParseError(f"expected {text!r}", at)
        return self.advance()

    def parse(self) -> Expr:
        expr = self.sum()
        kind, value, at = self.peek()
        if kind != "end":
            raise ParseError(f"unexpected {value!r}", at)
        return expr

    def sum(self) -> Expr:
        node = self.term()
        while True:
            kind, value, _ = self.peek()
            if kind == "op" and value in "+-":
                self.advance()
                rhs = self.term()
                node = Add(node, rhs) if value == "+" else Sub(node, rhs)
            else:
                return node

    def term(self) -> Expr:
        node = self.factor()
        while True:
            kind, value, _ = self.peek()
            if kind == "op" and value in "*/":
                self.advance()
                rhs = self.factor()
                node = Mul(node, rhs) if value == "*" else Div(node, rhs)
            else:
                return node

    def factor(self) -> Expr:
        kind, value, _ = self.peek()
        if kind == "op" and value == "-":
            self.advance()
            return Neg(self.factor())
        return self.power()

    def power(self) -> Expr:
        base = self.atom()
        kind, value, _ = self.peek()
        if kind == "op" and value == "^":
            self.advance()
            return Pow(base, self.factor())
        return base

    def atom(self) -> Expr:
        kind, value, at = self.advance()
        if kind == "num":
            return Const(float(value))
        if kind == "ident":
            nxt_kind, nxt_value, _ = self.peek()
            if nxt_kind == "op" and nxt_value == "(":
                if value not in FUNCTION_TABLES:
                    raise ParseError(f"unknown function {value!r}", at)
                self.advance()
                arg = self.sum()
                k, v, comma_at = self.peek()
                if k == "op" and v == ",":
                    raise ParseError(f"{value} takes a single argument", comma_at)
                self.expect(")")
                return Call(value, arg)
            if value in FUNCTION_TABLES:
                raise ParseError(f"{value} must be called with parentheses", at)
            if value not in self.variables:
                raise ParseError(f"unknown identifier {value!r}", at)
            return Var(value)
        if kind == "op" and value == "(":
            inner = self.sum()
            self.expect(")")
            return inner
        raise ParseError(f"unexpected {value!r}" if value else "unexpected end of input", at)


def parse_surface(src: str) -> Expr:
    """Parse an expression in the surface variables x, y."""
    return _Parser(src, SURFACE_VARIABLES).parse()


def parse_curve(src: str, var: str = "t") -> Expr:
    """Parse a single-variable expression; ``var`` names the allowed variable."""
    return _Parser(src, (var,)).parse()


# --- pretty printer ----------------------------------------------------------

_PREC = {Add: 1, Sub: 1, Mul: 2, Div: 2, Neg: 3, Pow: 4, Const: 5, Var: 5, Call: 5}


def _prec(e: Expr) -> int:
    return _PREC[type(e)]


def _wrap(e: Expr, minimum: int) -> str:
    text = to_string(e)
    return f"({text})" if _prec(e) < minimum else text


def to_string(e: Expr) -> str:
    """Render so that parse(to_string(parse(s))) reproduces the tree."""
    if isinstance(e, Const):
        return repr(e.value)
    if isinstance(e, Var):
        return e.name
    if isinstance(e, Neg):
        return "-" + _wrap(e.a, 3)
    if isinstance(e, Add):
        return f"{_wrap(e.a, 1)}+{_wrap(e.b, 2)}"
    if isinstance(e, Sub):
        return f"{_wrap(e.a, 1)}-{_wrap(e.b, 2)}"
    if isinstance(e, Mul):
        return f"{_wrap(e.a, 2)}*{_wrap(e.b, 3)}"
    if isinstance(e, Div):
        return f"{_wrap(e.a, 2)}/{_wrap(e.b, 3)}"
    if isinstance(e, Pow):
        return f"{_wrap(e.a, 5)}^{_wrap(e.b, 3)}"
    if isinstance(e, Call):
        return f"{e.fn}({to_string(e.arg)})"
    raise TypeError(f"not an expression node: {e!r}")


# --- plain float evaluation (independent of the jet path) --------------------

_MATH_FUNCTIONS = {
    "sin": math.sin,
    "cos": math.cos,
    "exp": math.exp,
    "ln": None,
    "sqrt": None,
    "asinh": math.asinh,
}


def is_constant(e: Expr) -> bool:
    """True when the tree contains no variables."""
    if isinstance(e, (Const,)):
        return True
    if isinstance(e, Var):
        return False
    if isinstance(e, Neg):
        return is_constant(e.a)
    if isinstance(e, Call):
        return is_constant(e.arg)
    return is_constant(e.a) and is_constant(e.b)


def evaluate(e: Expr, env: Mapping[str, float]) -> float:
    if isinstance(e, Const):
        return e.value
    if isinstance(e, Var):
        return float(env[e.name])
    if isinstance(e, Neg):
        return -evaluate(e.a, env)
    if isinstance(e, Add):
        return evaluate(e.a, env) + evaluate(e.b, env)
    if isinstance(e, Sub):
        return evaluate(e.a, env) - evaluate(e.b, env)
    if isinstance(e, Mul):
        return evaluate(e.a, env) * evaluate(e.b, env)
    if isinstance(e, Div):
        den = evaluate(e.b, env)
        if den == 0.0:
            raise DomainError("division by zero")
        return evaluate(e.a, env) / den
    if isinstance(e, Pow):
        base = evaluate(e.a, env)
        exponent = evaluate(e.b, env)
        if exponent == int(exponent):
            n = int(exponent)
            if base == 0.0 and n < 0:
                raise DomainError("division by zero")
            return base**n
        if base <= 0.0:
            raise DomainError(f"x^{exponent} requires a positive base")
        return base**exponent
    if isinstance(e, Call):
        arg = evaluate(e.arg, env)
        if e.fn == "ln":
            if arg <= 0.0:
                raise DomainError("ln requires a positive argument")
            return math.log(arg)
        if e.fn == "sqrt":
            if arg < 0.0:
                raise DomainError("sqrt requires a non-negative argument")
            return math.sqrt(arg)
        return _MATH_FUNCTIONS[e.fn](arg)
    raise TypeError(f"not an expression node: {e!r}")


# --- jet evaluation ----------------------------------------------------------

def _eval_jet(e: Expr, seeds: Mapping[str, object], constant):
    if isinstance(e, Const):
        return constant(e.value)
    if isinstance(e, Var):
        return seeds[e.name]
    if isinstance(e, Neg):
        return -_eval_jet(e.a, seeds, constant)
    if isinstance(e, Add):
        return _eval_jet(e.a, seeds, constant) + _eval_jet(e.b, seeds, constant)
    if isinstance(e, Sub):
        return _eval_jet(e.a, seeds, constant) - _eval_jet(e.b, seeds, constant)
    if isinstance(e, Mul):
        return _eval_jet(e.a, seeds, constant) * _eval_jet(e.b, seeds, constant)
    if isinstance(e, Div):
        return _eval_jet(e.a, seeds, constant) / _eval_jet(e.b, seeds, constant)
    if isinstance(e, Pow):
        base = _eval_jet(e.a, seeds, constant)
        if is_constant(e.b):
            return base ** evaluate(e.b, {})
        return jet_pow(base, _eval_jet(e.b, seeds, constant))
    if isinstance(e, Call):
        return _eval_jet(e.arg, seeds, constant).apply(e.fn)
    raise TypeError(f"not an expression node: {e!r}")


def jet2_at(e: Expr, x, y) -> Jet2:
    """Value and partials of the surface expression through second order."""
    seeds = {"x": Jet2.var_x(x), "y": Jet2.var_y(y)}
    return _eval_jet(e, seeds, Jet2.constant)


def jet3_curve_at(e: Expr, t) -> CurveJet3:
    """Value and derivatives of a single-variable expression through third order."""
    seed = CurveJet3.var(t)
    seeds = {name: seed for name in ("x", "y", "t")}
    return _eval_jet(e, seeds, CurveJet3.constant)
