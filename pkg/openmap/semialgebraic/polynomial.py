"""Sparse multivariate polynomials with rational coefficients."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import TYPE_CHECKING, Literal

import sympy

from openmap.errors import ArityMismatch, DivisionByZero
from openmap.exact.interval import Interval

if TYPE_CHECKING:
    from collections.abc import Mapping, Sequence

    from openmap.exact.expr import FuncSystem
    from openmap.exact.interval import IntervalBox

Sign = Literal[-1, 0, 1]
Monomial = tuple[int, ...]


def default_symbols(n: int) -> list[sympy.Symbol]:
    return list(sympy.symbols(f"x1:{n + 1}")) if n else []


def to_fraction(value: sympy.Rational) -> Fraction:
    return Fraction(int(value.p), int(value.q))


def sign_of(value: Fraction) -> Sign:
    return 1 if value > 0 else -1 if value < 0 else 0


@dataclass(frozen=True, slots=True)
class Polynomial:
    """p in Q[x1..xn] as (exponent vector, coefficient) pairs, sorted, without zero coefficients."""

    n: int
    terms: tuple[tuple[Monomial, Fraction], ...]

    def __post_init__(self) -> None:
        for exponents, coefficient in self.terms:
            if len(exponents) != self.n or coefficient == 0:
                raise ValueError(f"Invalid term for arity {self.n}: {exponents!r} -> {coefficient!r}")

    @classmethod
    def from_dict(cls, n: int, mapping: Mapping[Monomial, Fraction | int]) -> Polynomial:
        terms = tuple(sorted((tuple(e), Fraction(c)) for e, c in mapping.items() if c != 0))
        return cls(n, terms)

    @classmethod
    def constant(cls, n: int, value: Fraction | int) -> Polynomial:
        return cls.from_dict(n, {(0,) * n: value})

    @classmethod
    def variable(cls, n: int, index: int) -> Polynomial:
        if not 0 <= index < n:
            raise ArityMismatch(f"variable {index + 1} beyond arity {n}")
        return cls.from_dict(n, {tuple(1 if i == index else 0 for i in range(n)): 1})

    @classmethod
    def from_expr(cls, expr: sympy.Expr, symbols: Sequence[sympy.Symbol]) -> Polynomial:
        n = len(symbols)
        if not symbols:
            return cls.constant(0, to_fraction(sympy.Rational(expr)))
        poly = sympy.Poly(expr, *symbols, domain=sympy.QQ)
        return cls.from_dict(n, {tuple(e): to_fraction(c) for e, c in poly.terms()})

    def to_expr(self, symbols: Sequence[sympy.Symbol] | None = None) -> sympy.Expr:
        symbols = list(symbols) if symbols is not None else default_symbols(self.n)
        if len(symbols) != self.n:
            raise ArityMismatch(f"{len(symbols)} symbols for a polynomial of arity {self.n}")
        return sympy.Add(*(
            sympy.Rational(c.numerator, c.denominator) * sympy.Mul(*(s**e for s, e in zip(symbols, exponents, strict=True)))
            for exponents, c in self.terms
        ))

    def __str__(self) -> str:
        return sympy.sstr(self.to_expr()).replace("**", "^")

    @property
    def is_zero(self) -> bool:
        return not self.terms

    @property
    def is_constant(self) -> bool:
        return all(not any(e) for e, _ in self.terms)

    @property
    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        return max((sum(e) for e, _ in self.terms), default=-1)

    def degree_in(self, index: int) -> int:
        return max((e[index] for e, _ in self.terms), default=-1)

    def variables(self) -> set[int]:
        return {i for e, _ in self.terms for i, power in enumerate(e) if power}

    def _lift(self, other: Polynomial | Fraction | int) -> Polynomial:
        if isinstance(other, Polynomial):
            if other.n != self.n:
                raise ArityMismatch(f"polynomials of arity {self.n} and {other.n}")
            return other
        return Polynomial.constant(self.n, other)

    def __add__(self, other: Polynomial | Fraction | int) -> Polynomial:
        result = dict(self.terms)
        for exponents, c in self._lift(other).terms:
            result[exponents] = result.get(exponents, Fraction(0)) + c
        return Polynomial.from_dict(self.n, result)

    def __neg__(self) -> Polynomial:
        return Polynomial(self.n, tuple((e, -c) for e, c in self.terms))

    def __sub__(self, other: Polynomial | Fraction | int) -> Polynomial:
        return self + (-self._lift(other))

    def __mul__(self, other: Polynomial | Fraction | int) -> Polynomial:
        result: dict[Monomial, Fraction] = {}
        for e1, c1 in self.terms:
            for e2, c2 in self._lift(other).terms:
                exponents = tuple(a + b for a, b in zip(e1, e2, strict=True))
                result[exponents] = result.get(exponents, Fraction(0)) + c1 * c2
        return Polynomial.from_dict(self.n, result)

    def __pow__(self, exponent: int) -> Polynomial:
        result = Polynomial.constant(self.n, 1)
        for _ in range(exponent):
            result = result * self
        return result

    def evaluate(self, x: Sequence[Fraction]) -> Fraction:
        if len(x) != self.n:
            raise ArityMismatch(f"point of dimension {len(x)} for a polynomial of arity {self.n}")
        total = Fraction(0)
        for exponents, c in self.terms:
            term = c
            for value, power in zip(x, exponents, strict=True):
                if power:
                    term *= value**power
            total += term
        return total

    def evaluate_interval(self, box: IntervalBox | Sequence[Interval]) -> Interval:
        intervals = list(box)
        if len(intervals) != self.n:
            raise ArityMismatch(f"box of dimension {len(intervals)} for a polynomial of arity {self.n}")
        total = Interval.point(0)
        for exponents, c in self.terms:
            term = Interval.point(c)
            for iv, power in zip(intervals, exponents, strict=True):
                if power:
                    term = term * iv**power
            total = total + term
        return total

    def remap(self, n: int, mapping: Sequence[int]) -> Polynomial:
        """Same polynomial in ``n`` variables, variable i renamed to ``mapping[i]``."""
        if len(mapping) != self.n:
            raise ArityMismatch(f"mapping of length {len(mapping)} for a polynomial of arity {self.n}")
        result: dict[Monomial, Fraction] = {}
        for exponents, c in self.terms:
            target = [0] * n
            for i, power in enumerate(exponents):
                target[mapping[i]] += power
            result[tuple(target)] = result.get(tuple(target), Fraction(0)) + c
        return Polynomial.from_dict(n, result)


def sign_at(p: Polynomial, x: Sequence[Fraction]) -> Sign:
    return sign_of(p.evaluate(x))


def rational_components(f: FuncSystem) -> list[tuple[Polynomial, Polynomial]]:
    """Each component of F as a reduced fraction p/q, q with leading coefficient 1.

    The gcd of numerator and denominator is cancelled exactly, so the pair is coprime over Q.
    """
    symbols, components = f.to_sympy()
    pairs = []
    for component in components:
        numerator, denominator = sympy.fraction(sympy.cancel(sympy.together(component)))
        if denominator == 0:
            raise DivisionByZero(f"component {component} has a zero denominator")
        q = sympy.Poly(denominator, *symbols, domain=sympy.QQ)
        p = sympy.Poly(numerator, *symbols, domain=sympy.QQ)
        common = sympy.gcd(p, q)
        p, q = p.exquo(common), q.exquo(common)
        lead = q.LC()
        p, q = p.quo_ground(lead), q.monic()
        pairs.append((Polynomial.from_expr(p.as_expr(), symbols), Polynomial.from_expr(q.as_expr(), symbols)))
    return pairs
