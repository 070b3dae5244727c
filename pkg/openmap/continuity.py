"""Effective continuity: preimages of open sets, moduli of continuity, evaluation from dense data.

A modulus of continuity at ``x`` for precision ``k`` is an ``l`` with
``f[B(x, 2^-l) ∩ X] ⊆ B(f(x), 2^-k)``. Realizers here read the input stream at one declared
precision only (their *lookahead*), which makes their values over a compact box boundable by a
finite grid replay.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from math import ceil, floor
from typing import TYPE_CHECKING, Literal

from openmap.const import DEFAULT_LOOKAHEAD
from openmap.errors import BudgetExceeded, DimensionMismatch, DivisionByZero, DomainBreach
from openmap.exact.expr import eval_interval, eval_point, jacobian_enclosure
from openmap.exact.geometry import OpenBall, box_inside_open_ball, max_dist_sq
from openmap.exact.interval import IntervalBox
from openmap.exact.linalg import matrix_norm_sq_sum
from openmap.exact.rational import dist_sq
from openmap.helpers import pow2
from openmap.names.budget import Budget, NotYet
from openmap.names.coverage import InnerRadius, find_inner_radius, member
from openmap.names.enumeration import OpenSetEnum, pave
from openmap.names.stream import RealStream

if TYPE_CHECKING:
    from collections.abc import Callable, Iterator

    from openmap.exact.expr import FuncSystem
    from openmap.exact.rational import QVec

_LOGGER = logging.getLogger(__name__)

ModulusKind = Literal["continuity", "openness"]


@dataclass(frozen=True)
class ModulusOracle:
    """A deterministic modulus realizer together with the input precision it reads for each k."""

    realizer: Callable[[RealStream, int, Budget], int | NotYet]
    kind: ModulusKind
    lookahead: Callable[[int], int]

    def __call__(self, x: RealStream, k: int, budget: Budget | None = None) -> int | NotYet:
        return self.realizer(x, k, budget or Budget())


@dataclass(frozen=True)
class DenseSeq:
    """Points dense in X (``None`` for skipped indices) and names of f at those points."""

    points: Callable[[int], QVec | None]
    values: Callable[[int], RealStream | None]


# --------------------------------------------------------------------------- #
#  Preimage enumeration                                                        #
# --------------------------------------------------------------------------- #


def _image_inside(f: FuncSystem, ball: OpenBall, targets: list[OpenBall], precision: int) -> bool:
    try:
        image = eval_interval(f, ball.box(), precision)
    except DomainBreach:
        return False
    return any(box_inside_open_ball(image, target) for target in targets)


def preimage(f: FuncSystem, v: OpenSetEnum, x: OpenSetEnum, budget: Budget) -> OpenSetEnum:
    """f^-1[V] ∩ X: block t paves the regions of X scheduled at stage t and keeps the cells whose
    image enclosure lies in one of V's first ``at_level(t).max_prefix`` balls.
    """
    if v.dim != f.m:
        raise DimensionMismatch(f"target set of dimension {v.dim} for a system with m={f.m}")
    if x.dim != f.n:
        raise DimensionMismatch(f"domain set of dimension {x.dim} for a system with n={f.n}")

    def block(stage: int) -> Iterator[OpenBall | None]:
        targets = v.balls(budget.at_level(stage).max_prefix)
        if not targets:
            return iter(())
        return pave(x, stage, lambda ball: _image_inside(f, ball, targets, budget.max_precision))

    return OpenSetEnum.from_blocks(f.n, block)


# --------------------------------------------------------------------------- #
#  Modulus of continuity                                                       #
# --------------------------------------------------------------------------- #


def _continuity_certified(f: FuncSystem, center: QVec, radius: Fraction, ell: int, k: int, precision: int) -> bool:
    """Image of B̄(center, radius) within 2^-k of F(center), and Lipschitz bound times 2^-ell <= 2^-k."""
    box = IntervalBox.around(center, radius)
    try:
        value = eval_point(f, center)
        image = eval_interval(f, box, precision)
        lipschitz = matrix_norm_sq_sum(jacobian_enclosure(f, box, precision))
    except (DomainBreach, DivisionByZero):
        return False
    target = pow2(k)
    return max_dist_sq(value, image) < target * target and lipschitz * pow2(ell) <= target


def _moc_direct(f: FuncSystem, x: RealStream, k: int, margin: int, budget: Budget) -> int | NotYet:
    lookahead = k + margin
    center = x.approx(lookahead)
    precision = max(budget.max_precision, lookahead + 8)
    for ell in range(lookahead + 3):
        if _continuity_certified(f, center, pow2(ell) + pow2(lookahead), ell, k, precision):
            return ell
    return NotYet(f"no modulus up to 2^-{lookahead + 2} at lookahead {lookahead}")


def _moc_via_preimage(f: FuncSystem, x: RealStream, k: int, margin: int, budget: Budget) -> int | NotYet:
    lookahead = k + margin
    center = x.approx(lookahead)
    precision = max(budget.max_precision, lookahead + 8)
    try:
        value = eval_point(f, center)
        spread = eval_interval(f, IntervalBox.around(center, pow2(lookahead)), precision)
    except (DomainBreach, DivisionByZero):
        return NotYet("function not certified around the approximant")
    if max_dist_sq(value, spread) >= pow2(2 * k + 2):
        return NotYet("approximant too coarse for the target ball")
    # F(center) is within 2^-k-1 of f(x), so f^-1[B(F(center), 2^-k-1)] ⊆ f^-1[B(f(x), 2^-k)]
    target = OpenSetEnum.from_balls(f.m, [OpenBall(value, pow2(k + 1))])
    local = OpenSetEnum.from_balls(f.n, [OpenBall(center, Fraction(1))])
    inner = find_inner_radius(preimage(f, target, local, budget), x, budget)
    return inner.k if isinstance(inner, InnerRadius) else inner


def _margins(budget: Budget) -> range:
    return range(DEFAULT_LOOKAHEAD, DEFAULT_LOOKAHEAD + 4 * budget.max_depth + 1, 4)


def moc(f: FuncSystem, x: RealStream, k: int, budget: Budget, *, via_preimage: bool = False) -> int | NotYet:
    """An l with f[B(x, 2^-l)] ⊆ B(f(x), 2^-k), escalating the lookahead margin until certified."""
    if x.dim != f.n:
        raise DimensionMismatch(f"point of dimension {x.dim} for a system with n={f.n}")
    search = _moc_via_preimage if via_preimage else _moc_direct
    result: int | NotYet = NotYet("no lookahead tried")
    for margin in _margins(budget):
        result = search(f, x, k, margin, budget)
        if isinstance(result, int):
            _LOGGER.debug("openmap: modulus of continuity %s for k=%s at margin %s", result, k, margin)
            return result
    return result


def moc_oracle(f: FuncSystem, margin: int = DEFAULT_LOOKAHEAD) -> ModulusOracle:
    """Fixed-lookahead continuity modulus realizer for F, reading only ``x.approx(k + margin)``."""

    def realizer(x: RealStream, k: int, budget: Budget) -> int | NotYet:
        return _moc_direct(f, x, k, margin, budget)

    return ModulusOracle(realizer, "continuity", lambda k: k + margin)


# --------------------------------------------------------------------------- #
#  Dense data                                                                  #
# --------------------------------------------------------------------------- #


def _level_of(index: int, dim: int) -> tuple[int, int]:
    level = 0
    while index >= (size := 1 << (level * dim)):
        index -= size
        level += 1
    return level, index


def dyadic_dense(f: FuncSystem, x: OpenSetEnum, budget: Budget, bound: IntervalBox | None = None) -> DenseSeq:
    """Cell centres of the 2^t-per-axis grids of ``bound``, level by level, kept when in X."""
    region = bound or x.bound
    if region is None:
        balls = x.balls(budget.max_prefix)
        if not balls:
            raise ValueError(f"Invalid dense sequence request: no bound and no balls in {x!r}")
        region = balls[0].box()
        for ball in balls[1:]:
            region = region.hull(ball.box())
    box = region

    def points(index: int) -> QVec | None:
        level, offset = _level_of(index, f.n)
        count = 1 << level
        offsets = []
        for _ in range(f.n):
            offset, position = divmod(offset, count)
            offsets.append(position)
        point = box.grid_cell(level, offsets).mid
        return point if member(x, point, budget) is True else None

    def values(index: int) -> RealStream | None:
        point = points(index)
        if point is None:
            return None
        try:
            return RealStream.exact(eval_point(f, point))
        except DivisionByZero:
            return None

    return DenseSeq(points, values)


def eval_from_dense(dense: DenseSeq, oracle: ModulusOracle, x: RealStream, k: int, budget: Budget) -> QVec | NotYet:
    """f(x) to 2^-k from f at a dense point within the modulus radius of x."""
    ell = oracle(x, k + 1, budget)
    if isinstance(ell, NotYet):
        return ell
    center = x.approx(ell + 1)
    radius = pow2(ell + 1)
    for index in range(budget.max_prefix):
        point = dense.points(index)
        if point is None or dist_sq(point, center) >= radius * radius:
            continue
        value = dense.values(index)
        if value is not None:
            return value.approx(k + 1)
    return NotYet(f"no dense point within 2^-{ell + 1} among {budget.max_prefix}")


# --------------------------------------------------------------------------- #
#  Grid replay                                                                 #
# --------------------------------------------------------------------------- #


def _grid_axis(lo: Fraction, hi: Fraction, bits: int) -> list[Fraction]:
    scale = 1 << bits
    slack = pow2(bits + 1)
    return [Fraction(i, scale) for i in range(ceil((lo - slack) * scale), floor((hi + slack) * scale) + 1)]


def bound_modulus_over_box(oracle: ModulusOracle, box: IntervalBox, k: int, budget: Budget | None = None) -> int:
    """Upper bound on the realizer's values at canonical names of the points of ``box``.

    A canonical name reads x to the nearest multiple of 2^-(P+1) at precision P = lookahead(k),
    so replaying the realizer on that grid covers every such name.
    """
    bits = oracle.lookahead(k) + 1
    axes = [_grid_axis(iv.lo, iv.hi, bits) for iv in box]
    best = 0
    for point in product(*axes):
        result = oracle(RealStream.exact(point), k, budget)
        if isinstance(result, NotYet):
            raise BudgetExceeded(f"modulus realizer did not conclude at {point}: {result.reason}")
        best = max(best, result)
    _LOGGER.debug("openmap: modulus bound %s over %s grid points", best, len(axes[0]) ** len(axes) if axes else 0)
    return best
