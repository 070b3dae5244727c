"""Regular sets (closures of their interiors) and their images under open C¹ maps.

A bounded regular set is named by a ball list whose union is dense in it. Its image is named by
the inverse-function image of its regular points: critical values form a null set, so the
images of the regular points stay dense in the image.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from itertools import combinations
from typing import TYPE_CHECKING

from openmap.errors import DimensionMismatch, DomainBreach, NotCertified
from openmap.exact.expr import eval_interval, jacobian_enclosure
from openmap.exact.geometry import inscribed_ball
from openmap.exact.linalg import det
from openmap.names.enumeration import Block, OpenSetEnum, box_cells, pave
from openmap.openness.image import image_inverse

if TYPE_CHECKING:
    from collections.abc import Callable, Iterator, Sequence
    from fractions import Fraction

    from openmap.exact.expr import FuncSystem
    from openmap.exact.geometry import OpenBall
    from openmap.exact.interval import IntervalBox
    from openmap.exact.linalg import IntervalMatrix
    from openmap.names.budget import Budget

_LOGGER = logging.getLogger(__name__)


@dataclass(frozen=True)
class RegularSetName:
    """A bounded regular set R ⊆ R^dim: the balls lie in ``bound`` and their union is dense in R."""

    dim: int
    bound: IntervalBox
    balls: OpenSetEnum

    def __post_init__(self) -> None:
        if self.bound.dim != self.dim or self.balls.dim != self.dim:
            raise DimensionMismatch(f"bound in R^{self.bound.dim} and balls in R^{self.balls.dim} for a set in R^{self.dim}")

    @classmethod
    def from_balls(cls, bound: IntervalBox, balls: Sequence[OpenBall]) -> RegularSetName:
        for ball in balls:
            if not bound.contains_box(ball.box()):
                raise ValueError(f"Invalid ball {ball} outside the bound {bound}")
        return cls(bound.dim, bound, OpenSetEnum.from_balls(bound.dim, balls, bound))

    @classmethod
    def of_box(cls, box: IntervalBox, max_level: int | None = None) -> RegularSetName:
        """The closed box, named by the inscribed balls of its dyadic cells at every level."""
        if any(iv.width <= 0 for iv in box):
            raise ValueError(f"Invalid box {box}: a regular box needs positive widths")

        def block(level: int) -> Iterator[OpenBall]:
            for cell in box.grid_cells(level):
                yield inscribed_ball(cell)

        return cls(box.dim, box, OpenSetEnum.from_blocks(box.dim, block, max_level, box))


def semipreimage(
    h: Callable[[OpenBall], Fraction], alpha: Callable[[int], Fraction], bound: IntervalBox, budget: Budget
) -> OpenSetEnum:
    """h^-1[(α, ∞)] inside ``bound`` for a lower semicomputable h.

    ``h(B)`` is a lower bound of h over B and ``alpha(t)`` decreases to α from above. Block t emits
    the level-t cell balls inside ``bound`` whose lower bound exceeds ``alpha(t)``.
    """

    def block(level: int) -> Block:
        threshold = alpha(level)
        return [
            ball if bound.contains_box(ball.box()) and h(ball) > threshold else None for ball in box_cells(bound, level)
        ]

    return OpenSetEnum.from_blocks(bound.dim, block, budget.max_depth, bound)


def rank_certified_lower(a: IntervalMatrix) -> int:
    """Largest k with a k x k minor whose interval determinant excludes 0.

    Every point matrix in ``a`` has at least this rank.
    """
    for size in range(min(a.rows, a.cols), 0, -1):
        for rows in combinations(range(a.rows), size):
            for cols in combinations(range(a.cols), size):
                if det(a.select(rows, cols)).excludes_zero:
                    return size
    return 0


def regular_points_enum(f: FuncSystem, x: OpenSetEnum, budget: Budget) -> OpenSetEnum:
    """Balls of X on which F' has rank m everywhere, certified over each ball's box."""
    if x.dim != f.n:
        raise DimensionMismatch(f"set of dimension {x.dim} for F: R^{f.n} -> R^{f.m}")

    def full_rank(ball: OpenBall) -> bool:
        try:
            jacobian = jacobian_enclosure(f, ball.box(), budget.max_precision)
        except DomainBreach:
            return False
        return rank_certified_lower(jacobian) == f.m

    def block(stage: int) -> Iterator[OpenBall | None]:
        return pave(x, stage, full_rank)

    return OpenSetEnum.from_blocks(f.n, block, bound=x.bound)


def regular_image(f: FuncSystem, r: RegularSetName, budget: Budget) -> RegularSetName:
    """Name of F[R]: inverse-function images of the regular points of the interior of R."""
    if r.dim != f.n:
        raise DimensionMismatch(f"regular set in R^{r.dim} for F: R^{f.n} -> R^{f.m}")
    try:
        bound = eval_interval(f, r.bound, budget.max_precision)
    except DomainBreach as e:
        raise NotCertified(f"{f} not bounded on {r.bound}") from e
    regular = regular_points_enum(f, r.balls, budget)
    _LOGGER.debug("openmap: regular image of %s bounded by %s", f, bound)
    return RegularSetName(f.m, bound, image_inverse(f, regular, budget))
