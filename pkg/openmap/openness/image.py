"""Image operators U ↦ f[U] for open maps, and evaluation of f from its image operator.

Every operator emits only balls certified to lie in f[U]; under the operator's preconditions the
emitted balls exhaust f[U] as the stage grows.
"""

from __future__ import annotations

import logging
from abc import abstractmethod
from fractions import Fraction
from typing import TYPE_CHECKING, Literal

from openmap.errors import DivisionByZero, NotCertified, UnsupportedMethod
from openmap.exact.expr import eval_point
from openmap.exact.geometry import ClosedBall, OpenBall, inner_exponent, sample_points
from openmap.exact.rational import sqrt_upper
from openmap.helpers import pow2
from openmap.names.budget import Budget, NotYet
from openmap.names.coverage import InnerRadius, find_inner_radius, member
from openmap.names.enumeration import OpenSetEnum, schedule
from openmap.names.stream import RealStream
from openmap.openness.inverse import InverseCertificate, certify_inverse

if TYPE_CHECKING:
    from collections.abc import Callable, Iterator, Sequence

    from openmap.continuity import DenseSeq, ModulusOracle
    from openmap.exact.expr import FuncSystem
    from openmap.exact.rational import QVec

_LOGGER = logging.getLogger(__name__)

Point2 = tuple[Fraction, Fraction]


class ImageOperator:
    """Base class for image operators: block t of f[U] refines the regions of U scheduled at stage t."""

    method: str

    def __init__(self, f: FuncSystem, budget: Budget) -> None:
        self.f: FuncSystem = f
        self.budget: Budget = budget
        self.name: str = self.method

    def __call__(self, u: OpenSetEnum) -> OpenSetEnum:
        return self.image(u)

    def image(self, u: OpenSetEnum) -> OpenSetEnum:
        if u.dim != self.f.n:
            raise ValueError(f"Invalid domain of dimension {u.dim} for {self.name} image of F: R^{self.f.n} -> R^{self.f.m}")

        def block(stage: int) -> Iterator[OpenBall | None]:
            return self._entries(u, stage)

        return OpenSetEnum.from_blocks(self.f.m, block)

    def _points(self, u: OpenSetEnum, stage: int) -> Iterator[tuple[OpenBall, QVec, int]]:
        """Grid sample points of the scheduled regions of U, kept off their boundaries."""
        for region, level in schedule(u, stage):
            for point in sample_points(ClosedBall(region.center, region.radius * (1 - pow2(level + 1))), level):
                yield region, point, level

    @abstractmethod
    def _entries(self, u: OpenSetEnum, stage: int) -> Iterator[OpenBall | None]:
        pass


# --------------------------------------------------------------------------- #
#  Convex images                                                               #
# --------------------------------------------------------------------------- #


def _cross(o: Point2, a: Point2, b: Point2) -> Fraction:
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def convex_hull(points: Sequence[Point2]) -> list[Point2]:
    """Vertices of the convex hull in counter-clockwise order (monotone chain, exact)."""
    ordered = sorted(set(points))
    if len(ordered) < 3:
        return ordered
    lower: list[Point2] = []
    for p in ordered:
        while len(lower) >= 2 and _cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    upper: list[Point2] = []
    for p in reversed(ordered):
        while len(upper) >= 2 and _cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    return lower[:-1] + upper[:-1]


def triangle_disk(a: Point2, b: Point2, c: Point2) -> OpenBall | None:
    """Open disk at the centroid whose radius is a lower bound on the distance to every side."""
    area2 = abs(_cross(a, b, c))
    if area2 == 0:
        return None
    center = ((a[0] + b[0] + c[0]) / 3, (a[1] + b[1] + c[1]) / 3)
    radius = None
    for p, q in ((a, b), (b, c), (c, a)):
        side_sq = (q[0] - p[0]) ** 2 + (q[1] - p[1]) ** 2
        # the centroid is at height area2 / (3 |pq|) above side pq
        bound = area2 / (3 * sqrt_upper(side_sq))
        radius = bound if radius is None else min(radius, bound)
    return OpenBall(center, radius) if radius else None


class ConvexImage(ImageOperator):
    """Images of balls under maps sending balls to convex sets: hulls of attained values.

    Supports m = 1 (intervals) and m = 2 (planar hulls split into triangles). Regions are sampled
    down to ``budget.max_depth`` levels.
    """

    method = "convex"

    def __init__(self, f: FuncSystem, budget: Budget) -> None:
        if f.m > 2:
            raise UnsupportedMethod(f"convex image needs m <= 2, got m={f.m}")
        super().__init__(f, budget)

    def _values(self, region: OpenBall, level: int) -> list[QVec]:
        inner = ClosedBall(region.center, region.radius * (1 - pow2(level + 1)))
        values = []
        for point in sample_points(inner, level):
            try:
                values.append(eval_point(self.f, point))
            except DivisionByZero:
                continue
        return values

    def _entries(self, u: OpenSetEnum, stage: int) -> Iterator[OpenBall | None]:
        for region, level in schedule(u, stage, self.budget.max_depth):
            values = self._values(region, level)
            if self.f.m == 1:
                lo = min((v[0] for v in values), default=None)
                hi = max((v[0] for v in values), default=None)
                yield OpenBall(((lo + hi) / 2,), (hi - lo) / 2) if lo is not None and hi is not None and lo < hi else None
                continue
            hull = convex_hull([(v[0], v[1]) for v in values])
            if len(hull) < 3:
                yield None
                continue
            for i in range(1, len(hull) - 1):
                yield triangle_disk(hull[0], hull[i], hull[i + 1])


def image_convex(f: FuncSystem, u: OpenSetEnum, budget: Budget) -> OpenSetEnum:
    return ConvexImage(f, budget)(u)


# --------------------------------------------------------------------------- #
#  Images from moduli of openness                                              #
# --------------------------------------------------------------------------- #


class MooImage(ImageOperator):
    """B(f(x_j), 2^-l_j) for dense x_j in U, l_j from an openness modulus at the inner radius of U."""

    method = "moo"

    def __init__(self, f: FuncSystem, oracle: ModulusOracle, dense: DenseSeq, budget: Budget) -> None:
        if oracle.kind != "openness":
            raise ValueError(f"Invalid modulus oracle kind for an image operator: {oracle.kind!r}")
        super().__init__(f, budget)
        self._oracle = oracle
        self._dense = dense

    def _entry(self, u: OpenSetEnum, index: int, budget: Budget) -> OpenBall | None:
        point = self._dense.points(index)
        if point is None or member(u, point, budget) is not True:
            return None
        stream = RealStream.exact(point)
        inner = find_inner_radius(u, stream, budget)
        if not isinstance(inner, InnerRadius):
            return None
        ell = self._oracle(stream, inner.k, budget)
        value = self._dense.values(index)
        if isinstance(ell, NotYet) or value is None:
            _LOGGER.debug("openmap: no image ball at dense point %s: %s", index, ell)
            return None
        # the centre is within 2^-l-1 of f(x_j)
        return OpenBall(value.approx(ell + 1), pow2(ell + 1))

    def _entries(self, u: OpenSetEnum, stage: int) -> Iterator[OpenBall | None]:
        """Dense points 2^t - 1 .. 2^(t+1) - 2 at stage t, each visited once."""
        budget = self.budget.at_level(stage)
        for index in range((1 << stage) - 1, (1 << (stage + 1)) - 1):
            yield self._entry(u, index, budget)


def image_from_moo(f: FuncSystem, oracle: ModulusOracle, dense: DenseSeq, u: OpenSetEnum, budget: Budget) -> OpenSetEnum:
    return MooImage(f, oracle, dense, budget)(u)


class RationalMooImage(ImageOperator):
    """B(F(x'), s/2) for rational x' in U, s a certified lower bound of the modulus of openness."""

    method = "moo_rational"

    def __init__(self, f: FuncSystem, lower: Callable[[QVec, int], Sequence[Fraction]], budget: Budget) -> None:
        super().__init__(f, budget)
        self._lower = lower

    def _entries(self, u: OpenSetEnum, stage: int) -> Iterator[OpenBall | None]:
        for region, point, _level in self._points(u, stage):
            radii = self._lower(point, inner_exponent(region, point))
            try:
                value = eval_point(self.f, point)
            except DivisionByZero:
                yield None
                continue
            yield OpenBall(value, radii[-1] / 2) if radii and radii[-1] > 0 else None


def image_from_moo_rational(
    f: FuncSystem, lower: Callable[[QVec, int], Sequence[Fraction]], u: OpenSetEnum, budget: Budget
) -> OpenSetEnum:
    return RationalMooImage(f, lower, budget)(u)


class InverseImage(ImageOperator):
    """B(F(c), 2^-ell) from inverse function certificates at rational points c of U."""

    method = "inverse"

    def _entries(self, u: OpenSetEnum, stage: int) -> Iterator[OpenBall | None]:
        for region, point, level in self._points(u, stage):
            k0 = inner_exponent(region, point)
            try:
                cert = certify_inverse(self.f, RealStream.exact(point), k0, self.budget.at_level(level))
            except NotCertified as e:
                _LOGGER.debug("openmap: no inverse certificate at %s: %s", point, e)
                yield None
                continue
            if not isinstance(cert, InverseCertificate):
                yield None
                continue
            yield OpenBall(eval_point(self.f, point), pow2(cert.ell))


def image_inverse(f: FuncSystem, u: OpenSetEnum, budget: Budget) -> OpenSetEnum:
    return InverseImage(f, budget)(u)


# --------------------------------------------------------------------------- #
#  Evaluation from the image operator                                          #
# --------------------------------------------------------------------------- #


Direction = Literal["increasing", "decreasing"]


def monotone_direction(samples: Sequence[Fraction]) -> Direction | None:
    """Strict monotonicity of a sampled sequence, or ``None``."""
    pairs = list(zip(samples, samples[1:], strict=False))
    if pairs and all(a < b for a, b in pairs):
        return "increasing"
    if pairs and all(a > b for a, b in pairs):
        return "decreasing"
    return None


def _attained(
    image_oracle: Callable[[OpenSetEnum], OpenSetEnum], lo: Fraction, hi: Fraction, budget: Budget
) -> Fraction | None:
    if not lo < hi:
        return None
    piece = OpenSetEnum.from_balls(1, [OpenBall(((lo + hi) / 2,), (hi - lo) / 2)])
    for ball in image_oracle(piece).iter_balls(budget.max_prefix):
        return ball.center[0]
    return None


def evaluate_from_image(
    image_oracle: Callable[[OpenSetEnum], OpenSetEnum],
    u: Callable[[int], Fraction],
    v: Callable[[int], Fraction],
    k: int,
    budget: Budget,
) -> Fraction | NotYet:
    """f(x) within 2^-k for x = lim u_j = lim v_j, u increasing and v decreasing.

    Values attained left of x and right of x bracket f(x), f being strictly monotone.
    """
    for j in range(budget.max_prefix):
        left = _attained(image_oracle, u(j), u(j + 1), budget)
        right = _attained(image_oracle, v(j + 1), v(j), budget)
        if left is None or right is None:
            continue
        direction = monotone_direction((left, right))
        if direction is None:
            continue
        low, high = (left, right) if direction == "increasing" else (right, left)
        if high - low < pow2(k - 1):
            _LOGGER.debug("openmap: %s bracket closed at step %s", direction, j)
            return (low + high) / 2
    return NotYet(f"bracket wider than 2^-{k - 1} after {budget.max_prefix} steps")
