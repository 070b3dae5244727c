"""Box existence certificates: sign conditions on opposite faces guarantee solutions inside a box."""

from __future__ import annotations

import logging
from typing import TYPE_CHECKING

from openmap.errors import DimensionMismatch, DomainBreach
from openmap.exact.expr import eval_interval
from openmap.exact.interval import Interval, IntervalBox
from openmap.openness.const import DEFAULT_ZERO_MAX_BOXES, MIRANDA_PRECISION

if TYPE_CHECKING:
    from collections.abc import Sequence

    from openmap.exact.expr import FuncSystem
    from openmap.exact.geometry import ClosedBall

_LOGGER = logging.getLogger(__name__)


def _separated(low_face: Interval, high_face: Interval, target: Interval) -> bool:
    return (low_face.hi < target.lo and high_face.lo > target.hi) or (low_face.lo > target.hi and high_face.hi < target.lo)


def miranda_certifies(
    f: FuncSystem,
    box: IntervalBox,
    target: IntervalBox,
    columns: Sequence[int] | None = None,
    precision: int | None = MIRANDA_PRECISION,
) -> bool:
    """Every y in ``target`` is F(z) for some z in ``box``.

    Component i of F - y must keep one sign on the face where coordinate ``columns[i]`` is at
    its lower end and the opposite sign where it is at its upper end, for every y in the target.
    """
    selected = tuple(columns) if columns is not None else tuple(range(f.n))
    if len(selected) != f.m or target.dim != f.m or box.dim != f.n:
        raise DimensionMismatch(f"box in R^{box.dim}, target in R^{target.dim}, columns {selected} for F: R^{f.n} -> R^{f.m}")
    try:
        eval_interval(f, box, precision)
        for component, column in enumerate(selected):
            side = box[column]
            low = eval_interval(f, box.replace(column, Interval.point(side.lo)), precision)[component]
            high = eval_interval(f, box.replace(column, Interval.point(side.hi)), precision)[component]
            if not _separated(low, high, target[component]):
                return False
    except DomainBreach:
        return False
    return True


def preimage_witness(
    f: FuncSystem,
    target: IntervalBox,
    domain: IntervalBox,
    depth: int,
    columns: Sequence[int] | None = None,
    max_boxes: int = DEFAULT_ZERO_MAX_BOXES,
) -> IntervalBox | None:
    """A sub-box of ``domain`` certified by ``miranda_certifies`` for ``target``, searched level by level."""
    boxes = [domain]
    for level in range(depth + 1):
        refined: list[IntervalBox] = []
        for box in boxes:
            try:
                if eval_interval(f, box, MIRANDA_PRECISION).intersection(target) is None:
                    continue
            except DomainBreach:
                refined.extend(box.split())
                continue
            if miranda_certifies(f, box, target, columns):
                _LOGGER.debug("openmap: existence box found at level %s", level)
                return box
            refined.extend(box.split())
        if not refined or len(refined) > max_boxes:
            break
        boxes = refined
    return None


def certify_ball_in_image(
    f: FuncSystem, ball: ClosedBall, domain: IntervalBox, depth: int, columns: Sequence[int] | None = None
) -> bool:
    """B̄ ⊆ F[domain], through an existence box for the bounding box of the ball."""
    return preimage_witness(f, ball.box(), domain, depth, columns) is not None
