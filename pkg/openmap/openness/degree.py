"""Modulus of openness for injective square systems from a lower bound on the image of a sphere.

If F is injective on the closure of a ball Ω, F[Ω] contains every point closer to F(centre) than
the distance from F(centre) to F[∂Ω]. That distance is bounded below by covering ∂Ω with boxes
and enclosing F on each.
"""

from __future__ import annotations

import heapq
import logging
from fractions import Fraction
from itertools import count
from typing import TYPE_CHECKING

from openmap.const import DEFAULT_LOOKAHEAD
from openmap.errors import DimensionMismatch, DivisionByZero, DomainBreach, UnsupportedMethod
from openmap.exact.expr import eval_interval, eval_point, jacobian_enclosure
from openmap.exact.geometry import box_meets_sphere
from openmap.exact.interval import Interval, IntervalBox
from openmap.exact.linalg import matrix_norm_sq_sum
from openmap.exact.rational import sqrt_lower
from openmap.helpers import exponent_below, pow2
from openmap.names.budget import Budget, NotYet

if TYPE_CHECKING:
    from collections.abc import Callable

    from openmap.exact.expr import FuncSystem
    from openmap.exact.rational import QVec
    from openmap.names.stream import RealStream

_LOGGER = logging.getLogger(__name__)


def approximation_error(f: FuncSystem, center: QVec, lookahead: int, precision: int | None = None) -> Fraction:
    """Bound on |F(x) - F(center)| for every x within 2^-lookahead of ``center``."""
    box = IntervalBox.around(center, pow2(lookahead))
    return matrix_norm_sq_sum(jacobian_enclosure(f, box, precision)) * pow2(lookahead)


def constant_injectivity(k0: int) -> Callable[[RealStream], int]:
    """Injectivity oracle for maps injective on every ball of radius 2^-k0."""
    return lambda _x: k0


def _gap_sq(image: IntervalBox, value: QVec) -> Fraction:
    return sum(((iv - Interval.point(v)).mig ** 2 for iv, v in zip(image, value, strict=True)), Fraction(0))


def sphere_gap_sq(f: FuncSystem, center: QVec, radius: Fraction, budget: Budget, precision: int | None) -> Fraction:
    """Lower bound on min |F(z) - F(center)|^2 over the sphere |z - center| = radius.

    Best-first subdivision: the box with the smallest bound is split until it reaches
    ``budget.max_depth`` or the number of live boxes exceeds ``max_prefix * 2^n``.
    """
    value = eval_point(f, center)
    heap: list[tuple[Fraction, int, int, IntervalBox]] = []
    tiebreak = count()

    def push(box: IntervalBox, depth: int) -> None:
        if not box_meets_sphere(box, center, radius):
            return
        try:
            bound = _gap_sq(eval_interval(f, box, precision), value)
        except DomainBreach:
            bound = Fraction(0)
        heapq.heappush(heap, (bound, next(tiebreak), depth, box))

    push(IntervalBox.around(center, radius), 0)
    limit = budget.max_prefix << f.n
    while heap:
        bound, _, depth, box = heap[0]
        if depth >= budget.max_depth or len(heap) >= limit:
            _LOGGER.debug("openmap: sphere cover stopped with %s boxes at depth %s", len(heap), depth)
            return bound
        heapq.heappop(heap)
        for child in box.split():
            push(child, depth + 1)
    return Fraction(0)


def moo_degree(
    f: FuncSystem,
    x: RealStream,
    k: int,
    budget: Budget,
    injectivity: Callable[[RealStream], int] | None = None,
) -> int | NotYet:
    """An l with B(f(x), 2^-l) ⊆ f[B(x, 2^-k)] for F injective near x.

    F must be injective on B(x, 2^-k), or on B(x, 2^-h(x)) when an injectivity oracle h is given.
    """
    if f.n != f.m:
        raise UnsupportedMethod(f"degree method needs a square system, got n={f.n}, m={f.m}")
    if x.dim != f.n:
        raise DimensionMismatch(f"point of dimension {x.dim} for a system with n={f.n}")
    radius_exp = max(k, injectivity(x)) if injectivity is not None else k
    lookahead = radius_exp + DEFAULT_LOOKAHEAD
    center = x.approx(lookahead)
    precision = max(budget.max_precision, lookahead + 8)
    try:
        error = approximation_error(f, center, lookahead, precision)
        gap_sq = sphere_gap_sq(f, center, pow2(radius_exp + 1), budget, precision)
    except (DomainBreach, DivisionByZero) as e:
        return NotYet(f"function not certified around the approximant: {e}")
    lower = sqrt_lower(gap_sq, lookahead + 8) - error
    if lower <= 0:
        return NotYet("sphere image not separated from the centre value")
    return exponent_below(lower)
