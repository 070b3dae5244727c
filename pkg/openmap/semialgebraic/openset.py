"""Open semi-algebraic sets as ball enumerations, and openness moduli of semi-algebraic maps.

A ball B(c, r) lies in X exactly when the sentence ``forall y. |y - c|^2 >= r^2 or X(y)`` holds.
For a map F with rational components, the closed ball of radius s around F(x) lies in
F[B(x, 2^-k)] exactly when ``forall y. exists u. |y - F(x)|^2 > s^2 or (|u - x|^2 < 4^-k and
y = F(u))`` holds; eliminating the quantifiers leaves a condition on s alone.
"""

from __future__ import annotations

import logging
from fractions import Fraction
from typing import TYPE_CHECKING

from openmap.errors import DivisionByZero, LimitsExceeded
from openmap.exact.expr import eval_point
from openmap.exact.geometry import ClosedBall, box_disjoint_closed_ball, box_inside_open_ball
from openmap.exact.interval import Interval, IntervalBox
from openmap.helpers import colex_subsets, pow2
from openmap.names.enumeration import Block, OpenSetEnum, box_cells
from openmap.openness.const import LOWER_SEARCH_START
from openmap.openness.image import image_from_moo_rational
from openmap.openness.miranda import certify_ball_in_image
from openmap.semialgebraic.cad import Limits, qe_eliminate
from openmap.semialgebraic.const import (
    IMAGE_PREFIX,
    PREIMAGE_PREFIX,
    RADIUS_NAME,
    SA_QE_MAX_LEVEL,
    SA_SUBDIVISION_DEPTH,
)
from openmap.semialgebraic.formula import And, Atom, Or, SAFormula, SASet, Truth, graph_formula, holds_at, holds_on_box, remap
from openmap.semialgebraic.polynomial import Polynomial, rational_components

if TYPE_CHECKING:
    from collections.abc import Callable, Sequence

    from openmap.exact.expr import FuncSystem
    from openmap.exact.geometry import OpenBall
    from openmap.exact.rational import QVec
    from openmap.names.budget import Budget

_LOGGER = logging.getLogger(__name__)


def _dist_sq(n: int, variables: Sequence[int], center: Sequence[Fraction]) -> Polynomial:
    total = Polynomial.constant(n, 0)
    for index, c in zip(variables, center, strict=True):
        total = total + (Polynomial.variable(n, index) - c) ** 2
    return total


def ball_sentence(x: SASet, ball: OpenBall) -> SAFormula:
    """The sentence stating B(c, r) ⊆ X."""
    d = x.dim
    outside = Atom(_dist_sq(d, range(d), ball.center) - ball.radius**2, ">=")
    return SAFormula(x.formula.names, tuple(("forall", i) for i in range(d)), Or((outside, x.formula.matrix)))


def certify_ball_by_subdivision(x: SASet, ball: OpenBall, depth: int) -> bool:
    """B(c, r) ⊆ X when every sub-box meeting the closed ball satisfies X by interval evaluation."""
    closed = ClosedBall(ball.center, ball.radius)
    boxes = [ball.box()]
    for _ in range(depth + 1):
        pending: list[IntervalBox] = []
        for box in boxes:
            if box_disjoint_closed_ball(box, closed):
                continue
            value = holds_on_box(x.formula, box)
            if value is True:
                continue
            if value is False and box_inside_open_ball(box, ball):
                return False
            pending.extend(box.split())
        if not pending:
            return True
        boxes = pending
    return False


def sa_open_enum(x: SASet, bound: IntervalBox, budget: Budget, limits: Limits | None = None) -> OpenSetEnum:
    """Cell balls of dyadic grids of ``bound`` certified to lie in the open set X and in ``bound``.

    Balls are certified by interval evaluation, then by quantifier elimination for the shallow
    blocks, then by subdivision.
    """
    if bound.dim != x.dim:
        raise ValueError(f"Invalid bound of dimension {bound.dim} for a set in R^{x.dim}")
    limits = limits or Limits()

    def certify(ball: OpenBall, level: int) -> bool:
        if not bound.contains_box(ball.box()):
            return False
        if holds_on_box(x.formula, ball.box()) is True:
            return True
        if level <= SA_QE_MAX_LEVEL:
            try:
                return qe_eliminate(ball_sentence(x, ball), limits).matrix == Truth(True)
            except LimitsExceeded as e:
                _LOGGER.warning("openmap: %s; certifying %s by subdivision", e, ball)
        return certify_ball_by_subdivision(x, ball, SA_SUBDIVISION_DEPTH)

    def block(level: int) -> Block:
        return [ball if certify(ball, level) else None for ball in box_cells(bound, level)]

    return OpenSetEnum.from_blocks(x.dim, block, budget.max_depth, bound)


# --------------------------------------------------------------------------- #
#  Moduli of openness                                                          #
# --------------------------------------------------------------------------- #


def openness_formula(f: FuncSystem, x: QVec, k: int) -> SAFormula:
    """Formula in the radius s stating B̄(F(x), s) ⊆ F[B(x, 2^-k)]."""
    n, m = f.n, f.m
    value = eval_point(f, x)
    pairs = rational_components(f)
    graph = graph_formula([p for p, _ in pairs], [q for _, q in pairs])
    total = 1 + m + n
    radius = 0
    images = list(range(1, 1 + m))
    preimages = list(range(1 + m, total))
    # graph variables are x1..xn then y1..ym
    lifted = remap(graph.matrix, total, preimages + images)
    s = Polynomial.variable(total, radius)
    outside = Atom(_dist_sq(total, images, value) - s**2, ">")
    inside = Atom(Polynomial.constant(total, pow2(2 * k)) - _dist_sq(total, preimages, x), ">")
    names = (RADIUS_NAME, *(f"{IMAGE_PREFIX}{i + 1}" for i in range(m)), *(f"{PREIMAGE_PREFIX}{j + 1}" for j in range(n)))
    prefix = (*(("forall", i) for i in images), *(("exists", j) for j in preimages))
    return SAFormula(names, prefix, Or((outside, And((inside, lifted)))))


def _bisect(certified: Callable[[Fraction], bool], steps: int) -> list[Fraction]:
    """Increasing certified radii converging to the supremum of the certified ones."""
    values: list[Fraction] = []
    lo, hi = Fraction(0), Fraction(1)
    while certified(hi) and hi < pow2(-LOWER_SEARCH_START):
        lo = hi
        values.append(hi)
        hi *= 2
    for _ in range(steps):
        mid = (lo + hi) / 2
        if certified(mid):
            lo = mid
            values.append(mid)
        else:
            hi = mid
    return values


def _miranda_certified(f: FuncSystem, x: QVec, k: int, budget: Budget) -> Callable[[Fraction], bool]:
    """Certification of B̄(F(x), s) ⊆ F[B(x, 2^-k)] by existence boxes over coordinate subsystems."""
    value = eval_point(f, x)
    half = pow2(k + 1) / f.n
    domains = []
    for columns in colex_subsets(f.n, f.m):
        box = IntervalBox(
            tuple(Interval.around(c, half) if i in columns else Interval.point(c) for i, c in enumerate(x))
        )
        domains.append((columns, box))

    def certified(s: Fraction) -> bool:
        ball = ClosedBall(value, s)
        return any(certify_ball_in_image(f, ball, box, budget.max_depth, columns) for columns, box in domains)

    return certified


def sa_moo_lower(
    f: FuncSystem, x: QVec, k: int, budget: Budget, limits: Limits | None = None, *, fallback: bool = True
) -> list[Fraction]:
    """Nondecreasing radii s with B̄(F(x), s) ⊆ F[B(x, 2^-k)] for F with rational components.

    The radii converge to the largest such s. When the openness formula exceeds the elimination
    limits, existence boxes certify the radii instead (``fallback``), or ``LimitsExceeded`` is raised.
    """
    if len(x) != f.n:
        raise ValueError(f"Invalid point of dimension {len(x)} for F: R^{f.n} -> R^{f.m}")
    try:
        eval_point(f, x)
    except DivisionByZero:
        _LOGGER.debug("openmap: %s undefined at %s", f, x)
        return []
    try:
        condition = qe_eliminate(openness_formula(f, x, k), limits)
    except LimitsExceeded as e:
        if not fallback or f.m > f.n:
            raise
        _LOGGER.warning("openmap: %s; certifying openness radii at %s by existence boxes", e, x)
        return _bisect(_miranda_certified(f, x, k, budget), budget.max_precision)
    _LOGGER.debug("openmap: openness condition at %s, k=%s: %s", x, k, condition)
    return _bisect(lambda s: holds_at(condition, (s,)), budget.max_precision)


def sa_image(f: FuncSystem, u: OpenSetEnum, budget: Budget, limits: Limits | None = None) -> OpenSetEnum:
    """F[U] for an open F with rational components, from certified openness radii at rational points."""
    return image_from_moo_rational(f, lambda point, k: sa_moo_lower(f, point, k, budget, limits), u, budget)
