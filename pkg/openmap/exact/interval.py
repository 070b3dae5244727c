"""Closed intervals and boxes with exact rational endpoints."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import TYPE_CHECKING

from openmap.errors import DimensionMismatch, DomainBreach
from openmap.exact.rational import round_down, round_up

if TYPE_CHECKING:
    from collections.abc import Iterator, Sequence

    from openmap.exact.rational import QVec

_ZERO = Fraction(0)


@dataclass(frozen=True, slots=True)
class Interval:
    lo: Fraction
    hi: Fraction

    def __post_init__(self) -> None:
        if self.lo > self.hi:
            raise ValueError(f"Invalid interval: [{self.lo}, {self.hi}]")

    @classmethod
    def point(cls, value: Fraction | int) -> Interval:
        value = Fraction(value)
        return cls(value, value)

    @classmethod
    def around(cls, center: Fraction, radius: Fraction) -> Interval:
        return cls(center - radius, center + radius)

    def __add__(self, other: Interval) -> Interval:
        return Interval(self.lo + other.lo, self.hi + other.hi)

    def __sub__(self, other: Interval) -> Interval:
        return Interval(self.lo - other.hi, self.hi - other.lo)

    def __neg__(self) -> Interval:
        return Interval(-self.hi, -self.lo)

    def __mul__(self, other: Interval) -> Interval:
        if self.lo == self.hi and other.lo == other.hi:
            value = self.lo * other.lo
            return Interval(value, value)
        ends = (self.lo * other.lo, self.lo * other.hi, self.hi * other.lo, self.hi * other.hi)
        return Interval(min(ends), max(ends))

    def __truediv__(self, other: Interval) -> Interval:
        if other.contains(_ZERO):
            raise DomainBreach(f"divisor interval [{other.lo}, {other.hi}] contains 0")
        return self * Interval(1 / other.hi, 1 / other.lo)

    def __pow__(self, exponent: int) -> Interval:
        if exponent < 0:
            raise ValueError(f"Invalid exponent: {exponent!r}")
        if exponent == 0:
            return Interval.point(1)
        lo_p, hi_p = self.lo**exponent, self.hi**exponent
        if exponent % 2 == 1 or self.lo >= 0:
            return Interval(lo_p, hi_p)
        if self.hi <= 0:
            return Interval(hi_p, lo_p)
        return Interval(_ZERO, max(lo_p, hi_p))

    def contains(self, value: Fraction) -> bool:
        return self.lo <= value <= self.hi

    def contains_interval(self, other: Interval) -> bool:
        return self.lo <= other.lo and other.hi <= self.hi

    @property
    def excludes_zero(self) -> bool:
        return self.lo > 0 or self.hi < 0

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    @property
    def mid(self) -> Fraction:
        return (self.lo + self.hi) / 2

    @property
    def rad(self) -> Fraction:
        return (self.hi - self.lo) / 2

    @property
    def mag(self) -> Fraction:
        """Largest absolute value."""
        return max(-self.lo, self.hi)

    @property
    def mig(self) -> Fraction:
        """Smallest absolute value."""
        if self.lo > 0:
            return self.lo
        if self.hi < 0:
            return -self.hi
        return _ZERO

    def hull(self, other: Interval) -> Interval:
        return Interval(min(self.lo, other.lo), max(self.hi, other.hi))

    def rounded(self, bits: int | None) -> Interval:
        """Outward rounding of both endpoints to dyadics with ``bits`` fractional bits."""
        if bits is None:
            return self
        lo, hi = round_down(self.lo, bits), round_up(self.hi, bits)
        if lo == self.lo and hi == self.hi:
            return self
        return Interval(lo, hi)

    def bisect(self) -> tuple[Interval, Interval]:
        mid = self.mid
        return Interval(self.lo, mid), Interval(mid, self.hi)


@dataclass(frozen=True, slots=True)
class IntervalBox:
    intervals: tuple[Interval, ...]

    @classmethod
    def of(cls, *bounds: tuple[Fraction | int, Fraction | int]) -> IntervalBox:
        return cls(tuple(Interval(Fraction(lo), Fraction(hi)) for lo, hi in bounds))

    @classmethod
    def point(cls, x: Sequence[Fraction]) -> IntervalBox:
        return cls(tuple(Interval.point(c) for c in x))

    @classmethod
    def around(cls, center: Sequence[Fraction], radius: Fraction) -> IntervalBox:
        return cls(tuple(Interval.around(c, radius) for c in center))

    @property
    def dim(self) -> int:
        return len(self.intervals)

    def __iter__(self) -> Iterator[Interval]:
        return iter(self.intervals)

    def __getitem__(self, index: int) -> Interval:
        return self.intervals[index]

    def _check(self, other: IntervalBox) -> None:
        if other.dim != self.dim:
            raise DimensionMismatch(f"box dimensions {self.dim} and {other.dim} differ")

    @property
    def lower(self) -> QVec:
        return tuple(iv.lo for iv in self.intervals)

    @property
    def upper(self) -> QVec:
        return tuple(iv.hi for iv in self.intervals)

    @property
    def mid(self) -> QVec:
        return tuple(iv.mid for iv in self.intervals)

    @property
    def widths(self) -> QVec:
        return tuple(iv.width for iv in self.intervals)

    @property
    def volume(self) -> Fraction:
        result = Fraction(1)
        for iv in self.intervals:
            result *= iv.width
        return result

    def contains_point(self, x: Sequence[Fraction]) -> bool:
        return len(x) == self.dim and all(iv.contains(c) for iv, c in zip(self.intervals, x, strict=True))

    def contains_box(self, other: IntervalBox) -> bool:
        self._check(other)
        return all(a.contains_interval(b) for a, b in zip(self.intervals, other.intervals, strict=True))

    def intersection(self, other: IntervalBox) -> IntervalBox | None:
        self._check(other)
        parts = []
        for a, b in zip(self.intervals, other.intervals, strict=True):
            lo, hi = max(a.lo, b.lo), min(a.hi, b.hi)
            if lo > hi:
                return None
            parts.append(Interval(lo, hi))
        return IntervalBox(tuple(parts))

    def hull(self, other: IntervalBox) -> IntervalBox:
        self._check(other)
        return IntervalBox(tuple(a.hull(b) for a, b in zip(self.intervals, other.intervals, strict=True)))

    def replace(self, index: int, interval: Interval) -> IntervalBox:
        parts = list(self.intervals)
        parts[index] = interval
        return IntervalBox(tuple(parts))

    def corners(self) -> Iterator[QVec]:
        return product(*((iv.lo, iv.hi) for iv in self.intervals))

    def split(self) -> list[IntervalBox]:
        """All 2^dim children obtained by halving every side."""
        return [IntervalBox(halves) for halves in product(*(iv.bisect() for iv in self.intervals))]

    def grid_cell(self, depth: int, offsets: Sequence[int]) -> IntervalBox:
        """Cell ``offsets`` of the uniform 2^depth-per-axis grid of this box."""
        count = 1 << depth
        parts = []
        for iv, offset in zip(self.intervals, offsets, strict=True):
            step = iv.width / count
            parts.append(Interval(iv.lo + offset * step, iv.lo + (offset + 1) * step))
        return IntervalBox(tuple(parts))

    def grid_cells(self, depth: int) -> Iterator[IntervalBox]:
        count = 1 << depth
        for offsets in product(range(count), repeat=self.dim):
            yield self.grid_cell(depth, offsets)

    def rounded(self, bits: int | None) -> IntervalBox:
        if bits is None:
            return self
        return IntervalBox(tuple(iv.rounded(bits) for iv in self.intervals))
