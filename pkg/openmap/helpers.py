from fractions import Fraction
from itertools import combinations
from math import isqrt


def cantor_pair(x: int, y: int) -> int:
    """Diagonal pairing of two naturals, the dovetailing order used by every enumeration."""
    return (x + y) * (x + y + 1) // 2 + y


def cantor_unpair(n: int) -> tuple[int, int]:
    if n < 0:
        raise ValueError(f"Invalid index: {n!r}")
    w = (isqrt(8 * n + 1) - 1) // 2
    y = n - w * (w + 1) // 2
    return w - y, y


def unpair_many(n: int, count: int) -> tuple[int, ...]:
    if count <= 1:
        return (n,)
    head, rest = cantor_unpair(n)
    return (head, *unpair_many(rest, count - 1))


def colex_subsets(n: int, size: int) -> list[tuple[int, ...]]:
    return sorted(combinations(range(n), size), key=lambda c: c[::-1])


def exponent_below(r: Fraction) -> int:
    """Smallest l >= 0 with 2^-l < r."""
    if r <= 0:
        raise ValueError(f"Invalid radius: {r!r}")
    return (r.denominator // r.numerator).bit_length()


def pow2(k: int) -> Fraction:
    """2^-k as an exact rational (k may be negative)."""
    return Fraction(1, 1 << k) if k >= 0 else Fraction(1 << -k)
