"""Effective inverse function theorem: certified inverse radii, unique zeros, local inverses."""

from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import TYPE_CHECKING

from openmap.const import DEFAULT_LOOKAHEAD
from openmap.errors import DimensionMismatch, DivisionByZero, DomainBreach, NotCertified
from openmap.exact.expr import eval_interval, jacobian_at, jacobian_enclosure
from openmap.exact.geometry import ClosedBall, box_disjoint_closed_ball
from openmap.exact.interval import Interval, IntervalBox
from openmap.exact.linalg import IntervalMatrix, det, inverse, matrix_norm_sq_sum, sigma_min_lower
from openmap.exact.rational import norm_sq
from openmap.helpers import colex_subsets, pow2
from openmap.names.budget import Budget, NotYet
from openmap.names.coverage import InnerRadius, find_inner_radius
from openmap.names.stream import RealStream
from openmap.openness.const import DEFAULT_ZERO_EXTRA_LEVELS, DEFAULT_ZERO_MAX_BOXES
from openmap.openness.degree import approximation_error, moo_degree

if TYPE_CHECKING:
    from openmap.exact.expr import FuncSystem
    from openmap.exact.rational import QVec
    from openmap.names.enumeration import OpenSetEnum

_LOGGER = logging.getLogger(__name__)


@dataclass(frozen=True, slots=True)
class InverseCertificate:
    """Witness that B(F(x0), 2^-ell) ⊆ F[B(x0, 2^-k0) ∩ U].

    ``anchor`` is the rational approximation of x0 (read at ``precision``) that the restricted
    square system is built around; the non-selected coordinates stay fixed at it.
    """

    columns: tuple[int, ...]
    c_lo: Fraction
    k0: int
    k1: int
    k2: int
    remainder_bound: Fraction
    ell: int
    anchor: QVec
    precision: int

    def __post_init__(self) -> None:
        if self.c_lo <= 0 or not self.k0 <= self.k1 <= self.k2 or self.remainder_bound > self.c_lo / 2:
            raise ValueError(f"Invalid inverse certificate: {self!r}")


def _regular_columns(jacobian: IntervalMatrix) -> tuple[int, ...] | None:
    for columns in colex_subsets(jacobian.cols, jacobian.rows):
        if det(jacobian.select_columns(columns)).excludes_zero:
            return columns
    return None


def _det_radius(f: FuncSystem, center: QVec, columns: tuple[int, ...], k0: int, lookahead: int, precision: int) -> int | None:
    """Smallest k1 >= k0 with the selected minor nonsingular on B̄(center, 2^-k1 + 2^-lookahead)."""
    for k1 in range(k0, lookahead):
        box = IntervalBox.around(center, pow2(k1) + pow2(lookahead))
        try:
            if det(jacobian_enclosure(f, box, precision).select_columns(columns)).excludes_zero:
                return k1
        except DomainBreach:
            continue
    return None


def _remainder_radius(
    g: FuncSystem, center: QVec, floor: int, limit: int, c_lo: Fraction, precision: int
) -> tuple[int, Fraction] | None:
    """Smallest k2 >= floor with |G'(z) - G'(center)| <= c_lo/2 on B̄(center, 2^-k2)."""
    linear = IntervalMatrix.from_rows(jacobian_at(g, center))
    for k2 in range(floor, limit):
        try:
            spread = jacobian_enclosure(g, IntervalBox.around(center, pow2(k2)), precision) - linear
        except DomainBreach:
            continue
        bound = matrix_norm_sq_sum(spread)
        if bound <= c_lo / 2:
            return k2, bound
    return None


def _certify_at(
    f: FuncSystem, x0: RealStream, k0: int, lookahead: int, budget: Budget
) -> InverseCertificate | NotYet | None:
    """One attempt at a fixed input precision; ``None`` when no regular minor is visible."""
    anchor = x0.approx(lookahead)
    precision = max(budget.max_precision, lookahead + 8)
    try:
        local = jacobian_enclosure(f, IntervalBox.around(anchor, pow2(lookahead)), precision)
        error = approximation_error(f, anchor, lookahead, precision)
    except DomainBreach:
        return NotYet("Jacobian not certified around the approximant")
    columns = _regular_columns(local)
    if columns is None:
        return None
    k1 = _det_radius(f, anchor, columns, k0, lookahead, precision)
    if k1 is None:
        return NotYet("minor not certified nonsingular on any ball")
    g = f.restrict(columns, anchor)
    center = tuple(anchor[c] for c in columns)
    try:
        c_lo = sigma_min_lower(IntervalMatrix.from_rows(jacobian_at(g, center)))
    except (NotCertified, DivisionByZero):
        return None
    found = _remainder_radius(g, center, max(k1, k0 + 1), lookahead - 1, c_lo, precision)
    if found is None:
        return NotYet("remainder not controlled below the lookahead")
    k2, remainder = found
    ell = moo_degree(g, RealStream.exact(center), k2, budget)
    if isinstance(ell, NotYet):
        return ell
    # F(x0) is within ``error`` of G(center) = F(anchor); halve the radius to absorb it
    if error > pow2(ell + 1):
        return NotYet("approximant too coarse for the certified radius")
    return InverseCertificate(columns, c_lo, k0, k1, k2, remainder, ell + 1, anchor, lookahead)


def inverse_radius(f: FuncSystem, u: OpenSetEnum, x0: RealStream, budget: Budget) -> InverseCertificate | NotYet:
    """Certificate that F maps B(x0, 2^-k0) ∩ U onto a neighbourhood of F(x0).

    Raises ``NotCertified`` when no m x m minor of F'(x0) can be certified nonsingular at any
    precision the budget allows.
    """
    if f.m > f.n:
        raise NotCertified(f"rank {f.m} impossible with n={f.n}")
    if x0.dim != f.n or u.dim != f.n:
        raise DimensionMismatch(f"point of dimension {x0.dim} and set of dimension {u.dim} for n={f.n}")
    inner = find_inner_radius(u, x0, budget)
    if not isinstance(inner, InnerRadius):
        return inner
    return certify_inverse(f, x0, inner.k, budget)


def certify_inverse(f: FuncSystem, x0: RealStream, k0: int, budget: Budget) -> InverseCertificate | NotYet:
    """Inverse certificate for a known inner radius: B̄(x0, 2^-k0) must lie in the domain set."""
    if f.m > f.n:
        raise NotCertified(f"rank {f.m} impossible with n={f.n}")
    if x0.dim != f.n:
        raise DimensionMismatch(f"point of dimension {x0.dim} for n={f.n}")
    result: InverseCertificate | NotYet | None = None
    for lookahead in range(k0 + DEFAULT_LOOKAHEAD, k0 + DEFAULT_LOOKAHEAD + 4 * budget.max_depth + 1, 4):
        result = _certify_at(f, x0, k0, lookahead, budget)
        if isinstance(result, InverseCertificate):
            _LOGGER.debug("openmap: inverse certificate %s", result)
            return result
        _LOGGER.debug("openmap: inverse radius attempt at precision %s: %s", lookahead, result)
    if result is None:
        raise NotCertified("no nonsingular minor certified within the precision budget")
    return result


# --------------------------------------------------------------------------- #
#  Zeros and local inverses                                                    #
# --------------------------------------------------------------------------- #


def _may_vanish(f: FuncSystem, box: IntervalBox, precision: int) -> bool:
    try:
        image = eval_interval(f, box, precision)
    except DomainBreach:
        return True
    return all(iv.contains(Fraction(0)) for iv in image)


def _hull(boxes: list[IntervalBox]) -> IntervalBox:
    result = boxes[0]
    for box in boxes[1:]:
        result = result.hull(box)
    return result


def unique_zero(
    f: FuncSystem,
    ball: ClosedBall,
    p: int,
    max_boxes: int = DEFAULT_ZERO_MAX_BOXES,
    max_levels: int | None = None,
) -> QVec:
    """Approximation within 2^-p of the only zero of F in ``ball``, by exclusion subdivision."""
    if not f.n == f.m == ball.dim:
        raise DimensionMismatch(f"unique_zero needs n = m = {ball.dim}, got n={f.n}, m={f.m}")
    precision = p + 16
    target = pow2(2 * p)
    boxes = [ball.box()]
    for level in range((max_levels if max_levels is not None else p + DEFAULT_ZERO_EXTRA_LEVELS) + 1):
        boxes = [b for b in boxes if not box_disjoint_closed_ball(b, ball) and _may_vanish(f, b, precision)]
        if not boxes:
            raise NotCertified("no zero in the ball")
        hull = _hull(boxes)
        if norm_sq(tuple(w / 2 for w in hull.widths)) < target:
            _LOGGER.debug("openmap: zero isolated at level %s with %s boxes", level, len(boxes))
            return hull.mid
        if len(boxes) << f.n > max_boxes:
            break
        boxes = [child for b in boxes for child in b.split()]
    raise NotCertified(f"surviving region did not shrink below 2^-{p} ({len(boxes)} boxes)")


def _bits(q: Fraction) -> int:
    return (q.denominator // q.numerator + 1).bit_length()


def local_inverse(f: FuncSystem, cert: InverseCertificate, x0: QVec, y: RealStream, p: int) -> QVec | NotYet:
    """g(y) within 2^-p for the local right inverse g with g(F(x0)) = x0 and F(g(y)) = y.

    ``x0`` is normally ``cert.anchor``; the unselected coordinates of the result equal its own.
    """
    if len(x0) != f.n or y.dim != f.m:
        raise DimensionMismatch(f"point of dimension {len(x0)} and target of dimension {y.dim} for F: R^{f.n} -> R^{f.m}")
    g = f.restrict(cert.columns, x0)
    center = tuple(x0[c] for c in cert.columns)
    # |g(y) - g(y')| <= 2|y - y'|/c_lo on the certified ball
    target = y.approx(p + 2 + _bits(cert.c_lo))
    try:
        u = unique_zero(g.minus(target), ClosedBall(center, pow2(cert.k2)), p + 1)
    except NotCertified as e:
        return NotYet(f"local inverse not isolated: {e}")
    return f.embed(cert.columns, x0, u)


def local_inverse_derivative(
    f: FuncSystem, cert: InverseCertificate, x0: QVec, y: RealStream, p: int
) -> IntervalMatrix | NotYet:
    """Enclosure of g'(y) = F'(g(y))^-1 as an n x m matrix; unselected coordinates have zero rows."""
    point = local_inverse(f, cert, x0, y, p)
    if isinstance(point, NotYet):
        return point
    try:
        jacobian = jacobian_enclosure(f, IntervalBox.around(point, pow2(p)), p + 16)
        square_inverse = inverse(jacobian.select_columns(cert.columns))
    except (DomainBreach, NotCertified) as e:
        return NotYet(f"derivative not certified: {e}")
    zero = Interval.point(0)
    rows = []
    for i in range(f.n):
        if i in cert.columns:
            position = cert.columns.index(i)
            rows.append(tuple(square_inverse[position, j] for j in range(f.m)))
        else:
            rows.append(tuple(zero for _ in range(f.m)))
    return IntervalMatrix(tuple(rows))
