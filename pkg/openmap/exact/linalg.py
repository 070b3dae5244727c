"""Interval matrices and certified bounds on determinants, norms and singular values."""

from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import TYPE_CHECKING

import sympy

from openmap.errors import DimensionMismatch, NotCertified
from openmap.exact.interval import Interval
from openmap.exact.rational import sqrt_lower, sqrt_upper

if TYPE_CHECKING:
    from collections.abc import Sequence

_LOGGER = logging.getLogger(__name__)

_ZERO = Fraction(0)
_LAMBDA = sympy.Symbol("lam")


@dataclass(frozen=True, slots=True)
class IntervalMatrix:
    entries: tuple[tuple[Interval, ...], ...]

    def __post_init__(self) -> None:
        widths = {len(row) for row in self.entries}
        if len(widths) > 1:
            raise DimensionMismatch(f"ragged matrix rows: {sorted(widths)}")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[Fraction | int | Interval]]) -> IntervalMatrix:
        return cls(tuple(tuple(v if isinstance(v, Interval) else Interval.point(v) for v in row) for row in rows))

    @classmethod
    def from_flat(cls, rows: int, cols: int, values: Sequence[Interval]) -> IntervalMatrix:
        if len(values) != rows * cols:
            raise DimensionMismatch(f"{len(values)} entries for a {rows}x{cols} matrix")
        return cls(tuple(tuple(values[r * cols : (r + 1) * cols]) for r in range(rows)))

    @property
    def rows(self) -> int:
        return len(self.entries)

    @property
    def cols(self) -> int:
        return len(self.entries[0]) if self.entries else 0

    def __getitem__(self, index: tuple[int, int]) -> Interval:
        return self.entries[index[0]][index[1]]

    @property
    def is_point(self) -> bool:
        return all(iv.lo == iv.hi for row in self.entries for iv in row)

    def mid(self) -> list[list[Fraction]]:
        return [[iv.mid for iv in row] for row in self.entries]

    def radius(self) -> IntervalMatrix:
        return IntervalMatrix(tuple(tuple(Interval.point(iv.rad) for iv in row) for row in self.entries))

    def transpose(self) -> IntervalMatrix:
        return IntervalMatrix(tuple(zip(*self.entries, strict=True)))

    def select(self, rows: Sequence[int], cols: Sequence[int]) -> IntervalMatrix:
        return IntervalMatrix(tuple(tuple(self.entries[r][c] for c in cols) for r in rows))

    def select_columns(self, cols: Sequence[int]) -> IntervalMatrix:
        return self.select(range(self.rows), cols)

    def __sub__(self, other: IntervalMatrix) -> IntervalMatrix:
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise DimensionMismatch(f"shapes {self.rows}x{self.cols} and {other.rows}x{other.cols} differ")
        return IntervalMatrix(
            tuple(tuple(a - b for a, b in zip(ra, rb, strict=True)) for ra, rb in zip(self.entries, other.entries, strict=True))
        )

    def matvec(self, v: Sequence[Interval]) -> tuple[Interval, ...]:
        result = []
        for row in self.entries:
            acc = Interval.point(0)
            for a, x in zip(row, v, strict=True):
                acc = acc + a * x
            result.append(acc)
        return tuple(result)


def det(a: IntervalMatrix) -> Interval:
    """Interval determinant by cofactor expansion along the first row."""
    if a.rows != a.cols:
        raise DimensionMismatch(f"determinant of a {a.rows}x{a.cols} matrix")
    return _det(a.entries)


def _det(rows: tuple[tuple[Interval, ...], ...]) -> Interval:
    size = len(rows)
    if size == 0:
        return Interval.point(1)
    if size == 1:
        return rows[0][0]
    if size == 2:
        return rows[0][0] * rows[1][1] - rows[0][1] * rows[1][0]
    total = Interval.point(0)
    for col, entry in enumerate(rows[0]):
        if entry.lo == entry.hi == 0:
            continue
        minor = tuple(row[:col] + row[col + 1 :] for row in rows[1:])
        term = entry * _det(minor)
        total = total - term if col % 2 else total + term
    return total


def inverse(a: IntervalMatrix) -> IntervalMatrix:
    """Enclosure of the inverses of all point matrices in ``a`` by Cramer's rule."""
    size = a.rows
    d = det(a)
    if not d.excludes_zero:
        raise NotCertified("determinant interval contains 0")
    entries = []
    for i in range(size):
        row = []
        for j in range(size):
            minor = tuple(r[:i] + r[i + 1 :] for k, r in enumerate(a.entries) if k != j)
            cofactor = _det(minor)
            if (i + j) % 2:
                cofactor = -cofactor
            row.append(cofactor / d)
        entries.append(tuple(row))
    return IntervalMatrix(tuple(entries))


def matrix_norm_sq_sum(a: IntervalMatrix) -> Fraction:
    """Upper bound on the square-sum (Frobenius) norm over all point matrices in ``a``."""
    total = sum((iv.mag**2 for row in a.entries for iv in row), _ZERO)
    return sqrt_upper(total)


# --------------------------------------------------------------------------- #
#  Smallest singular value                                                     #
# --------------------------------------------------------------------------- #


def _to_fraction(value: sympy.Rational) -> Fraction:
    return Fraction(int(value.p), int(value.q))


def _sign_changes(values: Sequence[Fraction]) -> int:
    signs = [v > 0 for v in values if v != 0]
    return sum(1 for a, b in zip(signs, signs[1:], strict=False) if a != b)


def _horner(coeffs: Sequence[Fraction], x: Fraction) -> Fraction:
    acc = _ZERO
    for c in coeffs:
        acc = acc * x + c
    return acc


def _gram(rows: list[list[Fraction]]) -> list[list[Fraction]]:
    """A^T A, or A A^T when A has fewer rows than columns."""
    if len(rows) < len(rows[0]):
        cols = rows
    else:
        cols = [list(col) for col in zip(*rows, strict=True)]
    return [[sum((x * y for x, y in zip(u, v, strict=True)), _ZERO) for v in cols] for u in cols]


def smallest_eigenvalue_bracket(gram: list[list[Fraction]], width: Fraction) -> tuple[Fraction, Fraction]:
    """Bracket (lo, hi] of the smallest eigenvalue of a positive definite rational symmetric matrix.

    Bisection on exact Sturm counts of the characteristic polynomial.
    """
    matrix = sympy.Matrix([[sympy.Rational(v.numerator, v.denominator) for v in row] for row in gram])
    charpoly = matrix.charpoly(_LAMBDA)
    if charpoly.eval(0) == 0:
        raise NotCertified("matrix is singular")
    chain = [[_to_fraction(c) for c in p.all_coeffs()] for p in sympy.sturm(charpoly.as_expr(), _LAMBDA, polys=True)]

    def count_up_to(x: Fraction) -> int:
        # roots in (0, x]; every eigenvalue is positive
        return _sign_changes([_horner(c, _ZERO) for c in chain]) - _sign_changes([_horner(c, x) for c in chain])

    lo = _ZERO
    hi = max(sum(abs(v) for v in row) for row in gram)
    while hi - lo > width or lo == 0:
        mid = (lo + hi) / 2
        if count_up_to(mid) > 0:
            hi = mid
        else:
            lo = mid
    return lo, hi


@lru_cache(maxsize=1024)
def _sigma_min_point(rows: tuple[tuple[Fraction, ...], ...], tol: Fraction) -> Fraction:
    gram = _gram([list(row) for row in rows])
    if len(gram) == 1:
        lo = gram[0][0]
        if lo == 0:
            raise NotCertified("matrix is singular")
    else:
        lo, _ = smallest_eigenvalue_bracket(gram, (tol / 2) ** 2)
    bits = max(8, (2 * tol.denominator // max(tol.numerator, 1)).bit_length() + 2)
    while (result := sqrt_lower(lo, bits)) <= 0:
        bits *= 2
    return result


def sigma_min_lower(a: IntervalMatrix, tol: Fraction = Fraction(1, 1 << 20)) -> Fraction:
    """Positive rational lower bound on the smallest singular value of every point matrix in ``a``.

    Interval matrices use Weyl's perturbation bound: the smallest singular value of the midpoint
    matrix minus the Frobenius norm of the radius matrix.
    """
    if a.rows == 0 or a.cols == 0:
        raise DimensionMismatch("empty matrix")
    point = _sigma_min_point(tuple(tuple(row) for row in a.mid()), tol)
    if a.is_point:
        return point
    result = point - matrix_norm_sq_sum(a.radius())
    if result <= 0:
        _LOGGER.debug("openmap: singular value bound %s swallowed by interval radius", point)
        raise NotCertified("interval matrix too wide to bound its smallest singular value")
    return result
