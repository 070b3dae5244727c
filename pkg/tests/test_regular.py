from fractions import Fraction

import pytest

from openmap.errors import DimensionMismatch, NotCertified
from openmap.exact.expr import FuncSystem
from openmap.exact.geometry import OpenBall
from openmap.exact.interval import Interval, IntervalBox
from openmap.exact.linalg import IntervalMatrix
from openmap.exact.parser import parse_function_system
from openmap.helpers import pow2
from openmap.names.budget import Budget
from openmap.names.enumeration import OpenSetEnum
from openmap.regular import (
    RegularSetName,
    rank_certified_lower,
    regular_image,
    regular_points_enum,
    semipreimage,
)

F = Fraction


@pytest.fixture
def unit_segment() -> RegularSetName:
    """[0, 1] named by the single ball B(1/2, 1/2)."""
    return RegularSetName.from_balls(IntervalBox.of((0, 1)), [OpenBall((F(1, 2),), F(1, 2))])


class TestRegularSetName:
    def test_ball_outside_bound(self) -> None:
        with pytest.raises(ValueError, match="Invalid ball"):
            RegularSetName.from_balls(IntervalBox.of((0, 1)), [OpenBall((F(1, 2),), F(3, 4))])

    def test_dimensions_agree(self, unit_interval: OpenSetEnum) -> None:
        with pytest.raises(DimensionMismatch):
            RegularSetName(2, IntervalBox.of((0, 1), (0, 1)), unit_interval)

    def test_box_cells(self) -> None:
        box = IntervalBox.of((0, 1))
        balls = RegularSetName.of_box(box, 3).balls.balls(15)
        assert balls
        assert all(box.contains_box(ball.box()) for ball in balls)

    def test_box_cells_every_level(self) -> None:
        balls = RegularSetName.of_box(IntervalBox.of((0, 1), (0, 2))).balls
        assert balls.ball(0) == OpenBall((F(1, 2), F(1)), F(1, 2))
        # level 5 starts after 1 + 4 + 16 + 64 + 256 cells
        assert balls.ball(341) == OpenBall((F(1, 64), F(1, 32)), F(1, 64))

    def test_degenerate_box(self) -> None:
        with pytest.raises(ValueError, match="positive widths"):
            RegularSetName.of_box(IntervalBox.of((0, 1), (1, 1)))


class TestSemipreimage:
    def test_lower_bound_above_threshold(self, budget: Budget) -> None:
        def lower_end(ball: OpenBall) -> Fraction:
            return ball.center[0] - ball.radius

        enum = semipreimage(lower_end, lambda t: F(1, 2) + pow2(t), IntervalBox.of((0, 1)), budget)
        balls = enum.balls(31)
        assert balls
        assert all(ball.center[0] - ball.radius > F(1, 2) for ball in balls)


class TestRank:
    def test_identity(self) -> None:
        assert rank_certified_lower(IntervalMatrix.from_rows([[1, 0], [0, 1]])) == 2

    def test_zero(self) -> None:
        assert rank_certified_lower(IntervalMatrix.from_rows([[0, 0], [0, 0]])) == 0

    def test_uncertain_entry(self) -> None:
        tiny = Interval(-pow2(10), pow2(10))
        assert rank_certified_lower(IntervalMatrix.from_rows([[1, 0], [0, tiny]])) == 1

    def test_wide_matrix(self) -> None:
        assert rank_certified_lower(IntervalMatrix.from_rows([[0, 0, 3], [0, 0, 1]])) == 1


class TestRegularPoints:
    def test_critical_point_avoided(self, cube: FuncSystem, budget: Budget) -> None:
        ball = OpenSetEnum.from_balls(1, [OpenBall((F(0),), F(1))])
        balls = regular_points_enum(cube, ball, budget).balls(31)
        assert balls
        assert all(not ball.box().contains_point((F(0),)) for ball in balls)

    def test_dimension(self, diag: FuncSystem, unit_interval: OpenSetEnum, budget: Budget) -> None:
        with pytest.raises(DimensionMismatch):
            regular_points_enum(diag, unit_interval, budget)


class TestRegularImage:
    def test_doubled_segment(self, double: FuncSystem, unit_segment: RegularSetName, budget: Budget) -> None:
        image = regular_image(double, unit_segment, budget)
        assert image.dim == 1
        assert image.bound == IntervalBox.of((0, 2))
        balls = image.balls.balls(64)
        assert balls[0].center == (F(1),)
        assert all(0 < ball.center[0] - ball.radius and ball.center[0] + ball.radius < 2 for ball in balls)

    def test_unbounded_map(self, budget: Budget) -> None:
        r = RegularSetName.from_balls(IntervalBox.of((-1, 1)), [OpenBall((F(0),), F(1))])
        with pytest.raises(NotCertified, match="not bounded"):
            regular_image(parse_function_system("1/x1"), r, budget)

    def test_dimension(self, diag: FuncSystem, unit_segment: RegularSetName, budget: Budget) -> None:
        with pytest.raises(DimensionMismatch):
            regular_image(diag, unit_segment, budget)
