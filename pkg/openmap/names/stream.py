"""Names of real points: rational approximations q_k with |q_k - x| < 2^-k."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import TYPE_CHECKING

from openmap.exact.rational import round_nearest, sqrt_lower

if TYPE_CHECKING:
    from collections.abc import Callable, Sequence

    from openmap.exact.rational import QVec


@dataclass(frozen=True)
class RealStream:
    dim: int
    approximant: Callable[[int], QVec]
    _cached: Callable[[int], QVec] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "_cached", lru_cache(maxsize=256)(self.approximant))

    def approx(self, k: int) -> QVec:
        value = self._cached(max(k, 0))
        if len(value) != self.dim:
            raise ValueError(f"Invalid approximant of dimension {len(value)} for a stream of dimension {self.dim}")
        return value

    @classmethod
    def exact(cls, x: Sequence[Fraction]) -> RealStream:
        point = tuple(Fraction(c) for c in x)
        return cls(len(point), lambda _k: point)

    @classmethod
    def dyadic(cls, x: Sequence[Fraction]) -> RealStream:
        """Canonical stream: round to the nearest multiple of 2^-(k+1)."""
        point = tuple(Fraction(c) for c in x)
        return cls(len(point), lambda k: tuple(round_nearest(c, k + 1) for c in point))

    @classmethod
    def sqrt(cls, q: Fraction) -> RealStream:
        """Stream for sqrt(q) in dimension 1."""
        return cls(1, lambda k: (sqrt_lower(q, k + 1),))

    def restrict(self, columns: Sequence[int]) -> RealStream:
        return RealStream(len(columns), lambda k: tuple(self.approx(k)[c] for c in columns))


def scalar(x: Fraction | int) -> RealStream:
    return RealStream.exact((Fraction(x),))
