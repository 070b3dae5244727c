"""Names of open sets: deterministic lazy enumerations of open rational balls.

An index maps to an ``OpenBall`` or to ``None`` (a skip). Derived enumerations are assembled from
*blocks*: block ``t`` is a finite run of entries computed at stage ``t``; index ``i`` lands in the
first block whose cumulative length exceeds ``i``. Blocks are consumed lazily and an empty block
counts as one skip, so the first N indices never look past block N.

Derived sets visit their source regions on a staged schedule: the region at index ``i`` is refined
at subdivision level ``l`` in stage ``⌊log2(i+1)⌋ + (dim+1)·l``. Every (region, level) pair is
reached at some stage and stage ``t`` costs about ``2^(t+1)`` cells.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import TYPE_CHECKING

from openmap.errors import DimensionMismatch
from openmap.exact.geometry import OpenBall, ball_inside_ball, box_inside_open_ball, box_meets_open_ball, cell_ball
from openmap.helpers import cantor_pair, cantor_unpair

if TYPE_CHECKING:
    from collections.abc import Callable, Iterable, Iterator, Sequence

    from openmap.exact.interval import IntervalBox
    from openmap.exact.rational import QVec

_LOGGER = logging.getLogger(__name__)

Block = list[OpenBall | None]


@dataclass(frozen=True)
class OpenSetEnum:
    """``size``, when known, bounds the indices that can hold a ball."""

    dim: int
    generator: Callable[[int], OpenBall | None]
    bound: IntervalBox | None = None
    size: int | None = None
    _cached: Callable[[int], OpenBall | None] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "_cached", lru_cache(maxsize=4096)(self.generator))

    def ball(self, index: int) -> OpenBall | None:
        if self.size is not None and index >= self.size:
            return None
        result = self._cached(index)
        if result is not None and result.dim != self.dim:
            raise DimensionMismatch(f"generated ball of dimension {result.dim} in a {self.dim}-dimensional enumeration")
        return result

    def prefix(self, count: int) -> list[tuple[int, OpenBall]]:
        """The non-skip entries among the first ``count`` indices, with their indices."""
        result = []
        for index in range(count):
            ball = self.ball(index)
            if ball is not None:
                result.append((index, ball))
        return result

    def balls(self, count: int) -> list[OpenBall]:
        return [ball for _, ball in self.prefix(count)]

    def iter_balls(self, count: int) -> Iterator[OpenBall]:
        for index in range(count):
            ball = self.ball(index)
            if ball is not None:
                yield ball

    @classmethod
    def from_balls(cls, dim: int, balls: Sequence[OpenBall], bound: IntervalBox | None = None) -> OpenSetEnum:
        items = tuple(balls)
        for ball in items:
            if ball.dim != dim:
                raise DimensionMismatch(f"ball of dimension {ball.dim} in a {dim}-dimensional list")
        return cls(dim, lambda i: items[i] if i < len(items) else None, bound, len(items))

    @classmethod
    def empty(cls, dim: int) -> OpenSetEnum:
        return cls(dim, lambda _i: None, size=0)

    @classmethod
    def whole(cls, dim: int) -> OpenSetEnum:
        """R^dim as the balls B(0, 2^i)."""
        origin = tuple(Fraction(0) for _ in range(dim))
        return cls(dim, lambda i: OpenBall(origin, Fraction(1 << i)))

    @classmethod
    def from_blocks(
        cls,
        dim: int,
        block: Callable[[int], Iterable[OpenBall | None]],
        max_level: int | None = None,
        bound: IntervalBox | None = None,
    ) -> OpenSetEnum:
        """Concatenate blocks 0, 1, ... (up to ``max_level`` when given; later indices are skips)."""
        blocks = _Blocks(block, max_level)
        return cls(dim, blocks.entry, bound)


class _Blocks:
    """Entries of consecutive blocks, pulled from the block iterators only as far as requested."""

    def __init__(self, block: Callable[[int], Iterable[OpenBall | None]], max_level: int | None) -> None:
        self.block = block
        self.max_level = max_level
        self.entries: Block = []
        self.level = -1
        self.pending: Iterator[OpenBall | None] | None = None
        self.fresh = False

    def entry(self, index: int) -> OpenBall | None:
        while len(self.entries) <= index:
            if self.pending is None:
                if self.max_level is not None and self.level >= self.max_level:
                    return None
                self.level += 1
                self.pending = iter(self.block(self.level))
                self.fresh = True
            try:
                self.entries.append(next(self.pending))
                self.fresh = False
            except StopIteration:
                if self.fresh:
                    self.entries.append(None)
                self.pending = None
        return self.entries[index]


def _check_dims(sets: Sequence[OpenSetEnum], dim: int | None) -> int:
    dims = {s.dim for s in sets}
    if dim is not None:
        dims.add(dim)
    if len(dims) > 1:
        raise DimensionMismatch(f"enumerations of dimensions {sorted(dims)}")
    if not dims:
        raise DimensionMismatch("dimension of an empty union must be given")
    return dims.pop()


def union_countable(sets: Sequence[OpenSetEnum], dim: int | None = None) -> OpenSetEnum:
    """Union of finitely many enumerations, interleaved by Cantor pairing (set index, ball index)."""
    members = tuple(sets)
    result_dim = _check_dims(members, dim)

    def generator(index: int) -> OpenBall | None:
        which, inner = cantor_unpair(index)
        if which >= len(members):
            return None
        return members[which].ball(inner)

    return OpenSetEnum(result_dim, generator, size=_union_size(members))


def _union_size(members: Sequence[OpenSetEnum]) -> int | None:
    sizes = [member.size for member in members]
    if None in sizes:
        return None
    return max((cantor_pair(which, size - 1) + 1 for which, size in enumerate(sizes) if size), default=0)


def union_family(family: Callable[[int], OpenSetEnum | None], dim: int) -> OpenSetEnum:
    """Union of a countable family of enumerations, dovetailed by Cantor pairing."""

    @lru_cache(maxsize=256)
    def member(which: int) -> OpenSetEnum | None:
        result = family(which)
        if result is not None and result.dim != dim:
            raise DimensionMismatch(f"family member of dimension {result.dim} in a {dim}-dimensional union")
        return result

    def generator(index: int) -> OpenBall | None:
        which, inner = cantor_unpair(index)
        enum = member(which)
        return None if enum is None else enum.ball(inner)

    return OpenSetEnum(dim, generator)


# --------------------------------------------------------------------------- #
#  Staged schedule                                                             #
# --------------------------------------------------------------------------- #


def staged_indices(
    dim: int, stage: int, size: int | None = None, max_level: int | None = None
) -> Iterator[tuple[int, int]]:
    """(index, level) pairs of one stage: index i is refined at level l in stage ⌊log2(i+1)⌋ + (dim+1)·l."""
    weight = dim + 1
    top = stage // weight if max_level is None else min(stage // weight, max_level)
    for level in range(top + 1):
        band = stage - weight * level
        start, stop = (1 << band) - 1, (1 << (band + 1)) - 1
        if size is not None:
            stop = min(stop, size)
        for index in range(start, stop):
            yield index, level


def schedule(u: OpenSetEnum, stage: int, max_level: int | None = None) -> Iterator[tuple[OpenBall, int]]:
    """The regions of ``u`` refined in one stage, with their subdivision level."""
    for index, level in staged_indices(u.dim, stage, u.size, max_level):
        region = u.ball(index)
        if region is not None:
            yield region, level


# --------------------------------------------------------------------------- #
#  Intersection by dyadic subdivision                                          #
# --------------------------------------------------------------------------- #


def _pair_cells(a: OpenBall, b: OpenBall, level: int) -> Iterator[OpenBall]:
    region = a.box().intersection(b.box())
    if region is None:
        return
    for cell in region.grid_cells(level):
        if box_meets_open_ball(cell, a) and box_meets_open_ball(cell, b):
            yield cell_ball(cell)


def _inside_both(ball: OpenBall, a: OpenBall, b: OpenBall) -> bool:
    box = ball.box()
    return box_inside_open_ball(box, a) and box_inside_open_ball(box, b)


def _pair_entries(a: OpenBall, b: OpenBall, level: int) -> Iterator[OpenBall | None]:
    if level == 0:
        if ball_inside_ball(a, b):
            yield a
        elif ball_inside_ball(b, a):
            yield b
        return
    for ball in _pair_cells(a, b, level):
        yield ball if _inside_both(ball, a, b) else None


def intersect(u: OpenSetEnum, v: OpenSetEnum) -> OpenSetEnum:
    """U ∩ V: the ball pairs (u_i, v_j), dovetailed as pair index cantor_pair(i, j), follow the
    staged schedule; at level 0 a pair emits whichever ball lies inside the other, at level l the
    covering balls of the 2^l-per-axis grid cells of the common bounding box that lie in both.
    """
    dim = _check_dims((u, v), None)
    size = None
    if u.size is not None and v.size is not None:
        size = cantor_pair(u.size - 1, v.size - 1) + 1 if u.size and v.size else 0

    def block(stage: int) -> Iterator[OpenBall | None]:
        for index, level in staged_indices(dim, stage, size):
            i, j = cantor_unpair(index)
            a, b = u.ball(i), v.ball(j)
            if a is not None and b is not None:
                yield from _pair_entries(a, b, level)

    return OpenSetEnum.from_blocks(dim, block)


def contains_point(balls: Sequence[OpenBall], x: QVec) -> bool:
    return any(ball.contains(x) for ball in balls)


# --------------------------------------------------------------------------- #
#  Cells and pavings                                                           #
# --------------------------------------------------------------------------- #


def ball_cells(region: OpenBall, level: int) -> Iterator[OpenBall | None]:
    """Covering balls of the 2^level-per-axis grid cells of a ball's bounding box.

    Cells missing the ball are dropped; cells whose covering ball leaves the ball give ``None``.
    """
    for cell in region.box().grid_cells(level):
        if not box_meets_open_ball(cell, region):
            continue
        ball = cell_ball(cell)
        yield ball if ball_inside_ball(ball, region) else None


def box_cells(region: IntervalBox, level: int) -> Iterator[OpenBall]:
    """Covering balls of the 2^level-per-axis grid cells of a box."""
    for cell in region.grid_cells(level):
        yield cell_ball(cell)


def region_cells(region: OpenBall, level: int) -> Iterator[OpenBall | None]:
    """The region itself at level 0, its inner cell balls above."""
    if level == 0:
        yield region
    else:
        yield from ball_cells(region, level)


def pave(u: OpenSetEnum, stage: int, certify: Callable[[OpenBall], bool]) -> Iterator[OpenBall | None]:
    """One block of a paving of ``u``: the certified cells of every region the stage refines."""
    for region, level in schedule(u, stage):
        for ball in region_cells(region, level):
            yield ball if ball is not None and certify(ball) else None
