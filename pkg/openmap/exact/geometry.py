"""Rational Euclidean balls and exact ball/box relations.

Every relation compares squared distances, so no square root is ever taken.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import TYPE_CHECKING

from openmap.exact.interval import Interval, IntervalBox
from openmap.exact.rational import dist_sq, sqrt_upper
from openmap.helpers import pow2

if TYPE_CHECKING:
    from collections.abc import Sequence

    from openmap.exact.rational import QVec

_ZERO = Fraction(0)
# Covering radii are inflated by this factor so they strictly exceed the half-diagonal
_INFLATE = Fraction(17, 16)


@dataclass(frozen=True, slots=True)
class OpenBall:
    center: QVec
    radius: Fraction

    def __post_init__(self) -> None:
        if self.radius <= 0:
            raise ValueError(f"Invalid open ball radius: {self.radius!r}")

    @property
    def dim(self) -> int:
        return len(self.center)

    def contains(self, x: Sequence[Fraction]) -> bool:
        return dist_sq(self.center, x) < self.radius * self.radius

    def box(self) -> IntervalBox:
        return IntervalBox.around(self.center, self.radius)


@dataclass(frozen=True, slots=True)
class ClosedBall:
    center: QVec
    radius: Fraction

    def __post_init__(self) -> None:
        if self.radius < 0:
            raise ValueError(f"Invalid closed ball radius: {self.radius!r}")

    @property
    def dim(self) -> int:
        return len(self.center)

    def contains(self, x: Sequence[Fraction]) -> bool:
        return dist_sq(self.center, x) <= self.radius * self.radius

    def box(self) -> IntervalBox:
        return IntervalBox.around(self.center, self.radius)

    @classmethod
    def from_interval(cls, lo: Fraction, hi: Fraction) -> ClosedBall:
        return cls(((lo + hi) / 2,), (hi - lo) / 2)


# --------------------------------------------------------------------------- #
#  Squared distances between points and boxes                                  #
# --------------------------------------------------------------------------- #


def _gap(c: Fraction, iv: Interval) -> Fraction:
    if c < iv.lo:
        return iv.lo - c
    if c > iv.hi:
        return c - iv.hi
    return _ZERO


def min_dist_sq(center: Sequence[Fraction], box: IntervalBox) -> Fraction:
    """Squared distance from a point to the nearest point of a box."""
    return sum((_gap(c, iv) ** 2 for c, iv in zip(center, box, strict=True)), _ZERO)


def max_dist_sq(center: Sequence[Fraction], box: IntervalBox) -> Fraction:
    """Squared distance from a point to the farthest corner of a box."""
    return sum((max((iv.lo - c) ** 2, (iv.hi - c) ** 2) for c, iv in zip(center, box, strict=True)), _ZERO)


def box_inside_open_ball(box: IntervalBox, ball: OpenBall) -> bool:
    """Closed box strictly inside the open ball (all corners strictly inside, by convexity)."""
    return max_dist_sq(ball.center, box) < ball.radius * ball.radius


def box_meets_open_ball(box: IntervalBox, ball: OpenBall) -> bool:
    return min_dist_sq(ball.center, box) < ball.radius * ball.radius


def box_disjoint_closed_ball(box: IntervalBox, ball: ClosedBall) -> bool:
    return min_dist_sq(ball.center, box) > ball.radius * ball.radius


def box_meets_sphere(box: IntervalBox, center: Sequence[Fraction], radius: Fraction) -> bool:
    r2 = radius * radius
    return min_dist_sq(center, box) <= r2 <= max_dist_sq(center, box)


def ball_inside_ball(inner: OpenBall | ClosedBall, outer: OpenBall) -> bool:
    """``inner`` contained in the open ball ``outer``: |c1 - c2| + r1 <= r2 (strict for closed inner)."""
    slack = outer.radius - inner.radius
    if isinstance(inner, ClosedBall):
        return slack > 0 and dist_sq(inner.center, outer.center) < slack * slack
    return slack >= 0 and dist_sq(inner.center, outer.center) <= slack * slack


def cell_ball(box: IntervalBox) -> OpenBall:
    """Open ball centered at the box midpoint whose radius strictly exceeds the half-diagonal."""
    half_diag_sq = sum((iv.rad**2 for iv in box), _ZERO)
    return OpenBall(box.mid, sqrt_upper(half_diag_sq * _INFLATE, 16))


def inscribed_ball(box: IntervalBox) -> OpenBall:
    """Largest open ball centred at the box midpoint inside the box."""
    return OpenBall(box.mid, min(iv.rad for iv in box))


def inner_exponent(region: OpenBall, point: Sequence[Fraction]) -> int:
    """Smallest k >= 0 with B̄(point, 2^-k) inside ``region``; ``point`` must lie in the region."""
    d_sq = dist_sq(point, region.center)
    if d_sq >= region.radius * region.radius:
        raise ValueError(f"Invalid point {point} outside {region}")
    k = 0
    while True:
        slack = region.radius - pow2(k)
        if slack > 0 and slack * slack > d_sq:
            return k
        k += 1


def sample_points(ball: ClosedBall, level: int) -> list[QVec]:
    """The centre and the 2^level-per-axis grid cell centres of the bounding box that lie in ``ball``."""
    points = [ball.center]
    for cell in ball.box().grid_cells(level):
        if cell.mid != ball.center and ball.contains(cell.mid):
            points.append(cell.mid)
    return points
