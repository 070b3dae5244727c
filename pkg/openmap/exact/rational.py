"""Exact rational scalars and vectors.

``Rat`` is :class:`fractions.Fraction` (always reduced, positive denominator); ``QVec`` is an
immutable tuple of them.
"""

from __future__ import annotations

import re
from fractions import Fraction
from math import isqrt
from typing import TYPE_CHECKING

if TYPE_CHECKING:
    from collections.abc import Iterable, Sequence

Rat = Fraction
QVec = tuple[Fraction, ...]

_RAT_PATTERN = re.compile(r"^\s*([+-]?\d+)\s*(?:/\s*(\d+))?\s*$")

SQRT_BITS = 32


def parse_rat(text: str | int | Fraction) -> Fraction:
    """Parse ``"p/q"`` or an integer literal."""
    if isinstance(text, Fraction):
        return text
    if isinstance(text, int) and not isinstance(text, bool):
        return Fraction(text)
    if not isinstance(text, str):
        raise ValueError(f"Invalid rational: {text!r}")
    match = _RAT_PATTERN.match(text)
    if match is None:
        raise ValueError(f"Invalid rational: {text!r}")
    num, den = match.group(1), match.group(2)
    if den is not None and int(den) == 0:
        raise ValueError(f"Invalid rational, zero denominator: {text!r}")
    return Fraction(int(num), int(den) if den is not None else 1)


def format_rat(q: Fraction) -> str:
    return f"{q.numerator}/{q.denominator}"


def qvec(values: Iterable[Fraction | int | str]) -> QVec:
    return tuple(parse_rat(v) for v in values)


def parse_qvec(text: str) -> QVec:
    """Comma separated rationals, optionally in parentheses: ``"(1/2, -3)"``."""
    body = text.strip().removeprefix("(").removesuffix(")")
    if not body.strip():
        raise ValueError(f"Invalid point: {text!r}")
    return tuple(parse_rat(part) for part in body.split(","))


def dist_sq(a: Sequence[Fraction], b: Sequence[Fraction]) -> Fraction:
    return sum(((x - y) ** 2 for x, y in zip(a, b, strict=True)), Fraction(0))


def norm_sq(a: Sequence[Fraction]) -> Fraction:
    return sum((x * x for x in a), Fraction(0))


# --------------------------------------------------------------------------- #
#  Dyadic rounding and square roots                                            #
# --------------------------------------------------------------------------- #


def round_down(q: Fraction, bits: int) -> Fraction:
    """Largest multiple of 2^-bits not above q."""
    return Fraction((q.numerator << bits) // q.denominator, 1 << bits)


def round_up(q: Fraction, bits: int) -> Fraction:
    return -round_down(-q, bits)


def round_nearest(q: Fraction, bits: int) -> Fraction:
    return round_down(q + Fraction(1, 1 << (bits + 1)), bits)


def sqrt_lower(q: Fraction, bits: int = SQRT_BITS) -> Fraction:
    """Rational lower bound for sqrt(q), within 2^-bits."""
    if q < 0:
        raise ValueError(f"Invalid radicand: {q!r}")
    return Fraction(isqrt((q.numerator << (2 * bits)) // q.denominator), 1 << bits)


def sqrt_upper(q: Fraction, bits: int = SQRT_BITS) -> Fraction:
    """Rational upper bound for sqrt(q), exact when q is a square of a rational with small denominator."""
    if q < 0:
        raise ValueError(f"Invalid radicand: {q!r}")
    product = (q.numerator * q.denominator) << (2 * bits)
    root = isqrt(product)
    if root * root != product:
        root += 1
    return Fraction(root, q.denominator << bits)
