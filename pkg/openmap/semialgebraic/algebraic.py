"""Real algebraic numbers as isolating intervals of irreducible polynomials, and exact signs at
points whose coordinates are rational or real algebraic.
"""

from __future__ import annotations

import logging
from fractions import Fraction
from functools import cmp_to_key
from math import ceil, floor
from typing import TYPE_CHECKING

import sympy

from openmap.errors import NotCertified
from openmap.exact.interval import Interval
from openmap.semialgebraic.polynomial import Polynomial, Sign, sign_of, to_fraction

if TYPE_CHECKING:
    from collections.abc import Sequence

_LOGGER = logging.getLogger(__name__)

# interval halvings allowed before a sign decision gives up
MAX_REFINEMENTS = 400

_Z = sympy.Symbol("_z")


class RealAlgebraic:
    """The only root of an irreducible ``poly`` (degree >= 2) in the open interval (lo, hi).

    ``refine`` narrows the interval in place; the represented number never changes.
    """

    __slots__ = ("_coeffs", "hi", "lo", "poly")

    def __init__(self, poly: sympy.Poly, lo: Fraction, hi: Fraction) -> None:
        if poly.degree() < 2 or not lo < hi:
            raise ValueError(f"Invalid algebraic number: root of {poly.as_expr()} in ({lo}, {hi})")
        self.poly = poly.to_field().monic()
        self._coeffs = [to_fraction(c) for c in self.poly.all_coeffs()]
        self.lo = lo
        self.hi = hi
        if self._sign(lo) * self._sign(hi) >= 0:
            raise ValueError(f"Invalid isolating interval ({lo}, {hi}) for {poly.as_expr()}")

    def __repr__(self) -> str:
        return f"RealAlgebraic({self.poly.as_expr()}, {self.lo}, {self.hi})"

    def _sign(self, q: Fraction) -> int:
        value = Fraction(0)
        for c in self._coeffs:
            value = value * q + c
        return sign_of(value)

    def interval(self) -> Interval:
        return Interval(self.lo, self.hi)

    def refine(self) -> None:
        mid = (self.lo + self.hi) / 2
        if self._sign(mid) == self._sign(self.lo):
            self.lo = mid
        else:
            self.hi = mid

    def approx(self, bits: int) -> Fraction:
        """A rational within 2^-bits."""
        while self.hi - self.lo >= Fraction(1, 1 << bits):
            self.refine()
        return (self.lo + self.hi) / 2


Coordinate = Fraction | RealAlgebraic


def minimal_expr(number: RealAlgebraic, symbol: sympy.Symbol) -> sympy.Expr:
    """The defining polynomial of ``number`` written in ``symbol``."""
    return number.poly.as_expr().xreplace({number.poly.gen: symbol})


def coordinate_interval(c: Coordinate) -> Interval:
    return c.interval() if isinstance(c, RealAlgebraic) else Interval.point(c)


def same_number(a: Coordinate, b: Coordinate) -> bool:
    if isinstance(a, Fraction) or isinstance(b, Fraction):
        return isinstance(a, Fraction) and isinstance(b, Fraction) and a == b
    if a is b:
        return True
    if a._coeffs != b._coeffs:  # noqa: SLF001
        return False
    lo, hi = max(a.lo, b.lo), min(a.hi, b.hi)
    # both isolate a root of the same squarefree polynomial: equal iff that root is shared
    if not lo < hi:
        return False
    return a.poly.count_roots(sympy.Rational(lo.numerator, lo.denominator), sympy.Rational(hi.numerator, hi.denominator)) > 0


def compare(a: Coordinate, b: Coordinate) -> Sign:
    if isinstance(a, Fraction) and isinstance(b, Fraction):
        return sign_of(a - b)
    if same_number(a, b):
        return 0
    for _ in range(MAX_REFINEMENTS):
        ia, ib = coordinate_interval(a), coordinate_interval(b)
        if ia.hi < ib.lo:
            return -1
        if ib.hi < ia.lo:
            return 1
        for c in (a, b):
            if isinstance(c, RealAlgebraic):
                c.refine()
    raise NotCertified(f"could not separate {a!r} and {b!r}")


def real_roots(poly: sympy.Poly) -> list[Coordinate]:
    """Distinct real roots of a nonzero univariate polynomial over Q, in increasing order."""
    roots: list[Coordinate] = []
    if poly.degree() < 1:
        return roots
    _, factors = poly.factor_list()
    for factor, _ in factors:
        if factor.degree() == 1:
            a, b = factor.all_coeffs()
            roots.append(-to_fraction(b) / to_fraction(a))
            continue
        for (lo, hi), _ in factor.intervals():
            roots.append(RealAlgebraic(factor, to_fraction(lo), to_fraction(hi)))
    return sorted(roots, key=cmp_to_key(compare))


def _integer_between(lo: Fraction, hi: Fraction) -> int | None:
    """The integer closest to 0 in the open interval (lo, hi)."""
    if lo < 0 < hi:
        return 0
    candidate = floor(lo) + 1 if lo >= 0 else ceil(hi) - 1
    return candidate if lo < candidate < hi else None


def sample_between(a: Coordinate, b: Coordinate) -> Fraction:
    """A simple rational strictly between a < b."""
    while coordinate_interval(a).hi >= coordinate_interval(b).lo:
        for c in (a, b):
            if isinstance(c, RealAlgebraic):
                c.refine()
    lo, hi = coordinate_interval(a).hi, coordinate_interval(b).lo
    integer = _integer_between(lo, hi)
    return Fraction(integer) if integer is not None else (lo + hi) / 2


def sector_samples(roots: Sequence[Coordinate]) -> list[Coordinate]:
    """Sample coordinates of the sectors and sections cut out by sorted distinct roots."""
    if not roots:
        return [Fraction(0)]
    samples: list[Coordinate] = [Fraction(floor(coordinate_interval(roots[0]).lo) - 1)]
    for left, right in zip(roots, roots[1:], strict=False):
        samples.extend((left, sample_between(left, right)))
    samples.extend((roots[-1], Fraction(ceil(coordinate_interval(roots[-1]).hi) + 1)))
    return samples


# --------------------------------------------------------------------------- #
#  Signs at algebraic points                                                   #
# --------------------------------------------------------------------------- #


def substitute_rationals(expr: sympy.Expr, symbols: Sequence[sympy.Symbol], point: Sequence[Coordinate]) -> sympy.Expr:
    mapping = {
        s: sympy.Rational(c.numerator, c.denominator) for s, c in zip(symbols, point, strict=True) if isinstance(c, Fraction)
    }
    return sympy.expand(expr.xreplace(mapping))


def _enclosure(poly: Polynomial, numbers: Sequence[RealAlgebraic]) -> Interval:
    return poly.evaluate_interval([c.interval() for c in numbers])


def _annihilator_gap(expr: sympy.Expr, unknowns: Sequence[tuple[sympy.Symbol, RealAlgebraic]]) -> Fraction | None:
    """``None`` if the value of ``expr`` is certainly nonzero, else a radius below which it must be 0."""
    resultant = _Z - expr
    for symbol, number in unknowns:
        resultant = sympy.resultant(resultant, minimal_expr(number, symbol), symbol)
    annihilator = sympy.Poly(resultant, _Z, domain=sympy.QQ)
    if annihilator.is_zero:
        raise NotCertified(f"degenerate annihilator for {expr}")
    coeffs = [to_fraction(c) for c in reversed(annihilator.all_coeffs())]
    if coeffs[0] != 0:
        return None
    while coeffs and coeffs[0] == 0:
        coeffs.pop(0)
    if len(coeffs) <= 1:
        return Fraction(0)
    # nonzero roots of the annihilator are at least this far from 0
    return abs(coeffs[0]) / (abs(coeffs[0]) + max(abs(c) for c in coeffs[1:]))


def sign_at_point(expr: sympy.Expr, symbols: Sequence[sympy.Symbol], point: Sequence[Coordinate]) -> Sign:
    """Exact sign of a polynomial expression at a point with rational or real algebraic coordinates."""
    reduced = substitute_rationals(expr, symbols, point)
    unknowns = [
        (s, c) for s, c in zip(symbols, point, strict=True) if isinstance(c, RealAlgebraic) and s in reduced.free_symbols
    ]
    if not unknowns:
        return sign_of(to_fraction(sympy.Rational(reduced)))
    poly = Polynomial.from_expr(reduced, [s for s, _ in unknowns])
    numbers = [c for _, c in unknowns]
    enclosure = _enclosure(poly, numbers)
    if enclosure.excludes_zero:
        return 1 if enclosure.lo > 0 else -1
    if len(unknowns) == 1:
        symbol, number = unknowns[0]
        minimal = sympy.Poly(minimal_expr(number, symbol), symbol, domain=sympy.QQ)
        remainder = sympy.Poly(reduced, symbol, domain=sympy.QQ).rem(minimal)
        gap = Fraction(0) if remainder.is_zero else None
    else:
        _LOGGER.debug("openmap: annihilator needed for the sign of %s", reduced)
        gap = _annihilator_gap(reduced, unknowns)
    if gap == 0:
        return 0
    for _ in range(MAX_REFINEMENTS):
        for number in numbers:
            number.refine()
        enclosure = _enclosure(poly, numbers)
        if enclosure.excludes_zero:
            return 1 if enclosure.lo > 0 else -1
        if gap is not None and -gap < enclosure.lo and enclosure.hi < gap:
            return 0
    raise NotCertified(f"sign of {expr} not decided at {point!r}")
