"""Certified containment of closed balls in enumerated open sets."""

from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import TYPE_CHECKING, Literal

from openmap.errors import DimensionMismatch
from openmap.exact.geometry import ClosedBall, OpenBall, box_disjoint_closed_ball, box_inside_open_ball, box_meets_open_ball
from openmap.helpers import pow2
from openmap.names.budget import Budget, NotYet

if TYPE_CHECKING:
    from openmap.exact.interval import IntervalBox
    from openmap.exact.rational import QVec
    from openmap.names.enumeration import OpenSetEnum
    from openmap.names.stream import RealStream

_LOGGER = logging.getLogger(__name__)

CoverEntry = tuple["IntervalBox", int | None]


@dataclass(frozen=True, slots=True)
class Yes:
    """Coverage certificate: dyadic boxes tiling the bounding box of the queried ball, each either
    disjoint from the ball (index ``None``) or strictly inside the prefix ball with that index.
    """

    certificate: tuple[CoverEntry, ...]


CoverageVerdict = Yes | NotYet


@dataclass(frozen=True, slots=True)
class InnerRadius:
    """Result of ``find_inner_radius``: B̄(x, 2^-k) ⊆ U, witnessed for B̄(center, 2^-k + 2^-k-2)."""

    k: int
    center: QVec
    certificate: Yes


def covers_closed_ball(u: OpenSetEnum, ball: ClosedBall, budget: Budget) -> CoverageVerdict:
    if u.dim != ball.dim:
        raise DimensionMismatch(f"ball of dimension {ball.dim} against a {u.dim}-dimensional set")
    prefix = u.prefix(budget.max_prefix)
    root = ball.box()
    if ball.radius == 0:
        for index, candidate in prefix:
            if candidate.contains(ball.center):
                return Yes(((root, index),))
        return NotYet("center not strictly inside any prefix ball")

    entries: list[CoverEntry] = []
    stack: list[tuple[IntervalBox, int, list[tuple[int, OpenBall]]]] = [
        (root, 0, [(i, b) for i, b in prefix if box_meets_open_ball(root, b)])
    ]
    while stack:
        box, depth, candidates = stack.pop()
        if box_disjoint_closed_ball(box, ball):
            entries.append((box, None))
            continue
        covering = next((i for i, b in candidates if box_inside_open_ball(box, b)), None)
        if covering is not None:
            entries.append((box, covering))
            continue
        if depth >= budget.max_depth or not candidates:
            _LOGGER.debug("openmap: coverage of %s stopped at depth %s", ball, depth)
            return NotYet(f"uncovered box at depth {depth}")
        for child in reversed(box.split()):
            stack.append((child, depth + 1, [(i, b) for i, b in candidates if box_meets_open_ball(child, b)]))
    return Yes(tuple(entries))


def _cell_address(root: IntervalBox, box: IntervalBox) -> tuple[int, tuple[int, ...]] | None:
    ratio = root.widths[0] / box.widths[0] if box.widths[0] else Fraction(0)
    if ratio.denominator != 1 or ratio.numerator & (ratio.numerator - 1):
        return None
    depth = ratio.numerator.bit_length() - 1
    offsets = []
    for outer, inner in zip(root, box, strict=True):
        if outer.width * pow2(depth) != inner.width:
            return None
        offset = (inner.lo - outer.lo) / inner.width
        if offset.denominator != 1 or not 0 <= offset.numerator < (1 << depth):
            return None
        offsets.append(offset.numerator)
    return depth, tuple(offsets)


def verify_certificate(u: OpenSetEnum, ball: ClosedBall, verdict: CoverageVerdict) -> bool:
    """Independent exact check of a coverage certificate."""
    if not isinstance(verdict, Yes) or not verdict.certificate:
        return False
    root = ball.box()
    if ball.radius == 0:
        (_, index), *rest = verdict.certificate
        candidate = u.ball(index) if index is not None else None
        return not rest and candidate is not None and candidate.contains(ball.center)

    addresses: set[tuple[int, tuple[int, ...]]] = set()
    volume = Fraction(0)
    for box, index in verdict.certificate:
        address = _cell_address(root, box)
        if address is None or address in addresses:
            return False
        if index is None:
            if not box_disjoint_closed_ball(box, ball):
                return False
        else:
            candidate = u.ball(index)
            if candidate is None or not box_inside_open_ball(box, candidate):
                return False
        addresses.add(address)
        volume += pow2(address[0] * ball.dim)
    if volume != 1:
        return False
    # Kraft equality plus prefix-freeness means the cells tile the root
    for depth, offsets in addresses:
        for up in range(1, depth + 1):
            if (depth - up, tuple(o >> up for o in offsets)) in addresses:
                return False
    return True


def find_inner_radius(u: OpenSetEnum, x: RealStream, budget: Budget) -> InnerRadius | NotYet:
    """Search k = 0, 1, ... for a certified B̄(x, 2^-k) ⊆ U."""
    if u.dim != x.dim:
        raise DimensionMismatch(f"point of dimension {x.dim} against a {u.dim}-dimensional set")
    for k in range(budget.max_precision + 1):
        center = x.approx(k + 2)
        query = ClosedBall(center, pow2(k) + pow2(k + 2))
        verdict = covers_closed_ball(u, query, budget)
        if isinstance(verdict, Yes):
            _LOGGER.debug("openmap: inner radius 2^-%s found around %s", k, center)
            return InnerRadius(k, center, verdict)
    return NotYet("no inner radius within precision budget")


def member(u: OpenSetEnum, x: QVec, budget: Budget) -> Literal[True] | NotYet:
    if u.dim != len(x):
        raise DimensionMismatch(f"point of dimension {len(x)} against a {u.dim}-dimensional set")
    for ball in u.iter_balls(budget.max_prefix):
        if ball.contains(x):
            return True
    return NotYet("no prefix ball contains the point")
