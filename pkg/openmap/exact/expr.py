"""Expression systems over exact rationals with symbolic differentiation.

Nodes are immutable; the smart constructors (``add``, ``sub``, ``mul``, ``div``, ``power``)
fold constants and drop neutral elements so that derivatives stay small.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import TYPE_CHECKING

import sympy

from openmap.errors import ArityMismatch, DimensionMismatch, DivisionByZero
from openmap.exact.interval import Interval, IntervalBox
from openmap.exact.linalg import IntervalMatrix

if TYPE_CHECKING:
    from collections.abc import Sequence

    from openmap.exact.rational import QVec

_LOGGER = logging.getLogger(__name__)

_ZERO = Fraction(0)
_ONE = Fraction(1)


@dataclass(frozen=True, slots=True)
class Var:
    index: int

    def __str__(self) -> str:
        return f"x{self.index + 1}"


@dataclass(frozen=True, slots=True)
class Const:
    value: Fraction

    def __str__(self) -> str:
        if self.value.denominator == 1:
            return str(self.value.numerator)
        return f"{self.value.numerator}/{self.value.denominator}"


@dataclass(frozen=True, slots=True)
class Add:
    left: Expr
    right: Expr

    def __str__(self) -> str:
        return f"({self.left} + {self.right})"


@dataclass(frozen=True, slots=True)
class Sub:
    left: Expr
    right: Expr

    def __str__(self) -> str:
        if self.left == Const(_ZERO):
            return f"(-{self.right})"
        return f"({self.left} - {self.right})"


@dataclass(frozen=True, slots=True)
class Mul:
    left: Expr
    right: Expr

    def __str__(self) -> str:
        return f"{self.left}*{self.right}"


@dataclass(frozen=True, slots=True)
class Div:
    left: Expr
    right: Expr

    def __str__(self) -> str:
        return f"{self.left}/({self.right})"


@dataclass(frozen=True, slots=True)
class Pow:
    base: Expr
    exponent: int

    def __post_init__(self) -> None:
        if self.exponent < 0:
            raise ValueError(f"Invalid exponent: {self.exponent!r}")

    def __str__(self) -> str:
        return f"{self.base}^{self.exponent}"


Expr = Var | Const | Add | Sub | Mul | Div | Pow

ZERO = Const(_ZERO)
ONE = Const(_ONE)


def const(value: Fraction | int) -> Const:
    return Const(Fraction(value))


# --------------------------------------------------------------------------- #
#  Smart constructors                                                          #
# --------------------------------------------------------------------------- #


def add(a: Expr, b: Expr) -> Expr:
    if isinstance(a, Const) and isinstance(b, Const):
        return Const(a.value + b.value)
    if a == ZERO:
        return b
    if b == ZERO:
        return a
    return Add(a, b)


def sub(a: Expr, b: Expr) -> Expr:
    if isinstance(a, Const) and isinstance(b, Const):
        return Const(a.value - b.value)
    if b == ZERO:
        return a
    if a == b:
        return ZERO
    return Sub(a, b)


def neg(a: Expr) -> Expr:
    return sub(ZERO, a)


def mul(a: Expr, b: Expr) -> Expr:
    if isinstance(a, Const) and isinstance(b, Const):
        return Const(a.value * b.value)
    if ZERO in (a, b):
        return ZERO
    if a == ONE:
        return b
    if b == ONE:
        return a
    return Mul(a, b)


def div(a: Expr, b: Expr) -> Expr:
    if b == ZERO:
        raise DivisionByZero("division by the constant 0")
    if isinstance(a, Const) and isinstance(b, Const):
        return Const(a.value / b.value)
    if a == ZERO:
        return ZERO
    if b == ONE:
        return a
    return Div(a, b)


def power(a: Expr, exponent: int) -> Expr:
    if exponent < 0:
        return div(ONE, power(a, -exponent))
    if exponent == 0:
        return ONE
    if exponent == 1:
        return a
    if isinstance(a, Const):
        return Const(a.value**exponent)
    return Pow(a, exponent)


# --------------------------------------------------------------------------- #
#  Evaluation                                                                  #
# --------------------------------------------------------------------------- #


def eval_expr(e: Expr, x: Sequence[Fraction]) -> Fraction:
    match e:
        case Const(value):
            return value
        case Var(index):
            return x[index]
        case Add(left, right):
            return eval_expr(left, x) + eval_expr(right, x)
        case Sub(left, right):
            return eval_expr(left, x) - eval_expr(right, x)
        case Mul(left, right):
            return eval_expr(left, x) * eval_expr(right, x)
        case Div(left, right):
            denominator = eval_expr(right, x)
            if denominator == 0:
                raise DivisionByZero(f"denominator {right} vanishes")
            return eval_expr(left, x) / denominator
        case Pow(base, exponent):
            return eval_expr(base, x) ** exponent
    raise TypeError(f"Invalid expression node: {e!r}")


def eval_expr_interval(e: Expr, box: Sequence[Interval], bits: int | None) -> Interval:
    match e:
        case Const(value):
            return Interval(value, value)
        case Var(index):
            return box[index]
        case Add(left, right):
            result = eval_expr_interval(left, box, bits) + eval_expr_interval(right, box, bits)
        case Sub(left, right):
            result = eval_expr_interval(left, box, bits) - eval_expr_interval(right, box, bits)
        case Mul(left, right):
            result = eval_expr_interval(left, box, bits) * eval_expr_interval(right, box, bits)
        case Div(left, right):
            result = eval_expr_interval(left, box, bits) / eval_expr_interval(right, box, bits)
        case Pow(base, exponent):
            result = eval_expr_interval(base, box, bits) ** exponent
        case _:
            raise TypeError(f"Invalid expression node: {e!r}")
    return result.rounded(bits)


def derive(e: Expr, index: int) -> Expr:
    """Symbolic partial derivative with respect to variable ``index``."""
    match e:
        case Const():
            return ZERO
        case Var(i):
            return ONE if i == index else ZERO
        case Add(left, right):
            return add(derive(left, index), derive(right, index))
        case Sub(left, right):
            return sub(derive(left, index), derive(right, index))
        case Mul(left, right):
            return add(mul(derive(left, index), right), mul(left, derive(right, index)))
        case Div(left, right):
            numerator = sub(mul(derive(left, index), right), mul(left, derive(right, index)))
            return div(numerator, power(right, 2))
        case Pow(base, exponent):
            return mul(mul(const(exponent), power(base, exponent - 1)), derive(base, index))
    raise TypeError(f"Invalid expression node: {e!r}")


def substitute(e: Expr, mapping: dict[int, Expr]) -> Expr:
    """Replace variables by expressions, re-simplifying on the way up."""
    match e:
        case Const():
            return e
        case Var(i):
            return mapping.get(i, e)
        case Add(left, right):
            return add(substitute(left, mapping), substitute(right, mapping))
        case Sub(left, right):
            return sub(substitute(left, mapping), substitute(right, mapping))
        case Mul(left, right):
            return mul(substitute(left, mapping), substitute(right, mapping))
        case Div(left, right):
            return div(substitute(left, mapping), substitute(right, mapping))
        case Pow(base, exponent):
            return power(substitute(base, mapping), exponent)
    raise TypeError(f"Invalid expression node: {e!r}")


def max_var(e: Expr) -> int:
    """Largest variable index used, -1 for constants."""
    match e:
        case Const():
            return -1
        case Var(i):
            return i
        case Add(left, right) | Sub(left, right) | Mul(left, right) | Div(left, right):
            return max(max_var(left), max_var(right))
        case Pow(base, _):
            return max_var(base)
    raise TypeError(f"Invalid expression node: {e!r}")


def to_sympy(e: Expr, symbols: Sequence[sympy.Symbol]) -> sympy.Expr:
    match e:
        case Const(value):
            return sympy.Rational(value.numerator, value.denominator)
        case Var(i):
            return symbols[i]
        case Add(left, right):
            return to_sympy(left, symbols) + to_sympy(right, symbols)
        case Sub(left, right):
            return to_sympy(left, symbols) - to_sympy(right, symbols)
        case Mul(left, right):
            return to_sympy(left, symbols) * to_sympy(right, symbols)
        case Div(left, right):
            return to_sympy(left, symbols) / to_sympy(right, symbols)
        case Pow(base, exponent):
            return to_sympy(base, symbols) ** exponent
    raise TypeError(f"Invalid expression node: {e!r}")


# --------------------------------------------------------------------------- #
#  Function systems                                                            #
# --------------------------------------------------------------------------- #


@dataclass(frozen=True)
class FuncSystem:
    """F : R^n -> R^m given by m expressions in the variables x1..xn."""

    n: int
    components: tuple[Expr, ...]
    label: str = field(default="", compare=False)

    def __post_init__(self) -> None:
        if self.n < 1 or not self.components:
            raise ArityMismatch(f"function system needs n >= 1 and m >= 1, got n={self.n}, m={len(self.components)}")
        for component in self.components:
            if max_var(component) >= self.n:
                raise ArityMismatch(f"component {component} uses a variable beyond x{self.n}")

    @classmethod
    def of(cls, n: int, *components: Expr, label: str = "") -> FuncSystem:
        return cls(n, tuple(components), label)

    @property
    def m(self) -> int:
        return len(self.components)

    def __str__(self) -> str:
        return self.label or "; ".join(str(c) for c in self.components)

    @cached_property
    def jacobian(self) -> FuncSystem:
        """Row-major m x n Jacobian as an (m*n)-component system."""
        return differentiate(self)

    @cached_property
    def is_affine(self) -> bool:
        return all(isinstance(entry, Const) for entry in self.jacobian.components)

    def restrict(self, columns: Sequence[int], anchor: Sequence[Fraction]) -> FuncSystem:
        """Keep the selected variables free (renumbered in order) and fix the others at ``anchor``."""
        mapping: dict[int, Expr] = {}
        for i in range(self.n):
            mapping[i] = Var(columns.index(i)) if i in columns else Const(anchor[i])
        return FuncSystem(len(columns), tuple(substitute(c, mapping) for c in self.components))

    def embed(self, columns: Sequence[int], anchor: Sequence[Fraction], u: Sequence[Fraction]) -> QVec:
        """Point of R^n with the selected coordinates from ``u`` and the rest from ``anchor``."""
        point = list(anchor)
        for position, column in enumerate(columns):
            point[column] = u[position]
        return tuple(point)

    def minus(self, y: Sequence[Fraction]) -> FuncSystem:
        if len(y) != self.m:
            raise DimensionMismatch(f"target of dimension {len(y)} for a system with m={self.m}")
        return FuncSystem(self.n, tuple(sub(c, Const(v)) for c, v in zip(self.components, y, strict=True)))

    def to_sympy(self) -> tuple[list[sympy.Symbol], list[sympy.Expr]]:
        symbols = list(sympy.symbols(f"x1:{self.n + 1}"))
        return symbols, [to_sympy(c, symbols) for c in self.components]


def eval_point(f: FuncSystem, x: Sequence[Fraction]) -> QVec:
    if len(x) != f.n:
        raise DimensionMismatch(f"point of dimension {len(x)} for a system with n={f.n}")
    return tuple(eval_expr(c, x) for c in f.components)


def eval_interval(f: FuncSystem, box: IntervalBox, precision: int | None = None) -> IntervalBox:
    """Enclosure of F over ``box``, endpoints outward-rounded to ``precision`` bits when given."""
    if box.dim != f.n:
        raise DimensionMismatch(f"box of dimension {box.dim} for a system with n={f.n}")
    return IntervalBox(tuple(eval_expr_interval(c, box.intervals, precision) for c in f.components))


def differentiate(f: FuncSystem) -> FuncSystem:
    return FuncSystem(f.n, tuple(derive(c, i) for c in f.components for i in range(f.n)))


def jacobian_enclosure(f: FuncSystem, box: IntervalBox, precision: int | None = None) -> IntervalMatrix:
    values = eval_interval(f.jacobian, box, precision)
    return IntervalMatrix.from_flat(f.m, f.n, values.intervals)


def jacobian_at(f: FuncSystem, x: Sequence[Fraction]) -> list[list[Fraction]]:
    values = eval_point(f.jacobian, x)
    return [list(values[r * f.n : (r + 1) * f.n]) for r in range(f.m)]
