"""Moduli of openness and certified lower bounds on the largest ball around f(x) inside f[B(x, 2^-k)]."""

from __future__ import annotations

import logging
from fractions import Fraction
from typing import TYPE_CHECKING

import voluptuous as vol

from openmap.const import DEFAULT_LOOKAHEAD
from openmap.continuity import ModulusOracle
from openmap.errors import DimensionMismatch, DivisionByZero, DomainBreach, NotCertified, UnsupportedMethod
from openmap.exact.expr import eval_point, jacobian_at
from openmap.exact.geometry import ClosedBall, OpenBall, sample_points
from openmap.exact.linalg import IntervalMatrix, sigma_min_lower
from openmap.helpers import exponent_below, pow2
from openmap.names.budget import Budget, NotYet
from openmap.names.coverage import Yes, covers_closed_ball
from openmap.names.enumeration import OpenSetEnum
from openmap.names.stream import RealStream
from openmap.openness.const import (
    LOWER_SEARCH_START,
    METHOD_AFFINE,
    METHOD_CONVEX,
    METHOD_DEGREE,
    METHOD_INVERSE,
    MOO_METHOD_SCHEMA,
)
from openmap.openness.degree import approximation_error, moo_degree
from openmap.openness.inverse import InverseCertificate, inverse_radius

if TYPE_CHECKING:
    from collections.abc import Callable, Iterable

    from openmap.exact.expr import FuncSystem

_LOGGER = logging.getLogger(__name__)


def moo_affine(f: FuncSystem, x: RealStream, k: int, budget: Budget) -> int | NotYet:  # noqa: ARG001
    """Affine F with surjective linear part maps B(x, r) onto a superset of B(f(x), sigma_min * r)."""
    if not f.is_affine:
        raise UnsupportedMethod(f"{f} is not affine")
    if f.m > f.n:
        raise UnsupportedMethod(f"affine map R^{f.n} -> R^{f.m} is not open")
    linear = IntervalMatrix.from_rows(jacobian_at(f, tuple(Fraction(0) for _ in range(f.n))))
    try:
        c_lo = sigma_min_lower(linear)
    except NotCertified as e:
        raise UnsupportedMethod(f"linear part of {f} is rank deficient") from e
    return exponent_below(c_lo * pow2(k))


def moo_convex(f: FuncSystem, x: RealStream, k: int, budget: Budget) -> int | NotYet:
    """Real-valued F: the image of a ball is an interval containing every sampled value."""
    if f.m != 1:
        raise UnsupportedMethod(f"convex method needs m = 1, got m={f.m}")
    lookahead = k + DEFAULT_LOOKAHEAD
    center = x.approx(lookahead)
    try:
        value = eval_point(f, center)[0]
        error = approximation_error(f, center, lookahead, max(budget.max_precision, lookahead + 8))
    except (DomainBreach, DivisionByZero) as e:
        return NotYet(f"function not certified around the approximant: {e}")
    inner = ClosedBall(center, pow2(k) - pow2(lookahead) - pow2(lookahead + 1))
    lo = hi = value
    for level in range(budget.max_depth + 1):
        for point in sample_points(inner, level):
            try:
                sample = eval_point(f, point)[0]
            except DivisionByZero:
                continue
            lo, hi = min(lo, sample), max(hi, sample)
        gap = min(value - error - lo, hi - value - error)
        if gap > 0:
            return exponent_below(gap)
    return NotYet("sampled values do not surround the centre value")


def moo(
    f: FuncSystem,
    x: RealStream,
    k: int,
    method: str,
    budget: Budget,
    injectivity: Callable[[RealStream], int] | None = None,
) -> int | NotYet:
    """An l with B(f(x), 2^-l) ⊆ f[B(x, 2^-k)], computed by the named method."""
    try:
        method = MOO_METHOD_SCHEMA(method)
    except vol.Invalid as e:
        raise UnsupportedMethod(f"Invalid modulus of openness method: {method!r}") from e
    if x.dim != f.n:
        raise DimensionMismatch(f"point of dimension {x.dim} for a system with n={f.n}")
    if method == METHOD_DEGREE:
        return moo_degree(f, x, k, budget, injectivity)
    return _METHODS[method](f, x, k, budget)


def _moo_inverse(f: FuncSystem, x: RealStream, k: int, budget: Budget) -> int | NotYet:
    if f.m > f.n:
        raise UnsupportedMethod(f"inverse method needs m <= n, got n={f.n}, m={f.m}")
    center = x.approx(k + 2)
    # |x - center| < 2^-k-2, so this ball lies in B(x, 2^-k)
    neighbourhood = OpenSetEnum.from_balls(f.n, [OpenBall(center, pow2(k) - pow2(k + 2))])
    try:
        cert = inverse_radius(f, neighbourhood, x, budget)
    except NotCertified as e:
        raise UnsupportedMethod(f"rank condition not certified at {center}: {e}") from e
    return cert.ell if isinstance(cert, InverseCertificate) else cert


_METHODS: dict[str, Callable[[FuncSystem, RealStream, int, Budget], int | NotYet]] = {
    METHOD_AFFINE: moo_affine,
    METHOD_CONVEX: moo_convex,
    METHOD_INVERSE: _moo_inverse,
}


def moo_oracle(
    f: FuncSystem, method: str = METHOD_DEGREE, injectivity: Callable[[RealStream], int] | None = None
) -> ModulusOracle:
    """Openness modulus realizer for F; the convex and degree methods read only x.approx(k + 6)."""

    def realizer(x: RealStream, k: int, budget: Budget) -> int | NotYet:
        return moo(f, x, k, method, budget, injectivity)

    return ModulusOracle(realizer, "openness", lambda k: k + DEFAULT_LOOKAHEAD)


# --------------------------------------------------------------------------- #
#  Lower approximations from an image oracle                                   #
# --------------------------------------------------------------------------- #


def moo_lower(
    image_oracle: Callable[[OpenSetEnum], OpenSetEnum], f: FuncSystem, x: RealStream, k: int, budget: Budget
) -> list[Fraction]:
    """Increasing radii s with B̄(f(x), s) ⊆ f[B(x, 2^-k)], each certified by coverage.

    Radii are built digit by digit in binary, so the sequence increases towards the largest
    certifiable radius.
    """
    if x.dim != f.n:
        raise DimensionMismatch(f"point of dimension {x.dim} for a system with n={f.n}")
    lookahead = k + DEFAULT_LOOKAHEAD
    center = x.approx(lookahead)
    try:
        value = eval_point(f, center)
        error = approximation_error(f, center, lookahead, max(budget.max_precision, lookahead + 8))
    except (DomainBreach, DivisionByZero):
        _LOGGER.debug("openmap: no lower modulus bound, function not certified at %s", center)
        return []
    image = image_oracle(OpenSetEnum.from_balls(f.n, [OpenBall(center, pow2(k) - pow2(lookahead))]))
    values: list[Fraction] = []
    radius = Fraction(0)
    for digit in range(-LOWER_SEARCH_START, budget.max_precision + 1):
        trial = radius + pow2(digit)
        if isinstance(covers_closed_ball(image, ClosedBall(value, trial + error), budget), Yes):
            radius = trial
            values.append(radius)
    return values


def moo_lower_profile(
    image_oracle: Callable[[OpenSetEnum], OpenSetEnum], f: FuncSystem, x: RealStream, ks: Iterable[int], budget: Budget
) -> dict[int, Fraction | None]:
    """Best lower bound for each k, made nonincreasing in k: a ball certified for B(x, 2^-k') also
    lies in the image of every larger B(x, 2^-k).
    """
    best: dict[int, Fraction | None] = {}
    for k in sorted(set(ks)):
        values = moo_lower(image_oracle, f, x, k, budget)
        best[k] = values[-1] if values else None
    profile: dict[int, Fraction | None] = {}
    running: Fraction | None = None
    for k in sorted(best, reverse=True):
        current = best[k]
        if current is not None and (running is None or current > running):
            running = current
        profile[k] = running
    return dict(sorted(profile.items()))
