from fractions import Fraction

import pytest

from openmap.exact.geometry import (
    ClosedBall,
    OpenBall,
    ball_inside_ball,
    box_disjoint_closed_ball,
    box_inside_open_ball,
    box_meets_open_ball,
    box_meets_sphere,
    cell_ball,
    inner_exponent,
    inscribed_ball,
    max_dist_sq,
    min_dist_sq,
    sample_points,
)
from openmap.exact.interval import IntervalBox

ORIGIN = (Fraction(0), Fraction(0))
UNIT = OpenBall(ORIGIN, Fraction(1))


class TestBalls:
    def test_open_ball_needs_positive_radius(self) -> None:
        with pytest.raises(ValueError, match="Invalid open ball radius"):
            OpenBall(ORIGIN, Fraction(0))

    def test_closed_ball_may_be_a_point(self) -> None:
        assert ClosedBall(ORIGIN, Fraction(0)).contains(ORIGIN)

    def test_boundary(self) -> None:
        edge = (Fraction(1), Fraction(0))
        assert not UNIT.contains(edge)
        assert ClosedBall(ORIGIN, Fraction(1)).contains(edge)

    def test_from_interval(self) -> None:
        assert ClosedBall.from_interval(Fraction(1), Fraction(2)) == ClosedBall((Fraction(3, 2),), Fraction(1, 2))

    def test_closed_inside_open(self) -> None:
        assert ball_inside_ball(ClosedBall(ORIGIN, Fraction(1, 2)), UNIT)
        assert not ball_inside_ball(ClosedBall(ORIGIN, Fraction(1)), UNIT)

    def test_open_inside_open(self) -> None:
        assert ball_inside_ball(UNIT, UNIT)
        assert ball_inside_ball(OpenBall((Fraction(1, 2), Fraction(0)), Fraction(1, 2)), UNIT)
        assert not ball_inside_ball(OpenBall((Fraction(1, 2), Fraction(0)), Fraction(3, 4)), UNIT)


class TestBoxRelations:
    def test_distances(self) -> None:
        box = IntervalBox.of((1, 2), (1, 2))
        assert min_dist_sq(ORIGIN, box) == 2
        assert max_dist_sq(ORIGIN, box) == 8

    def test_distance_from_inside(self) -> None:
        assert min_dist_sq(ORIGIN, IntervalBox.of((-1, 1), (-1, 1))) == 0

    def test_box_inside(self) -> None:
        half = Fraction(1, 2)
        assert box_inside_open_ball(IntervalBox.of((-half, half), (-half, half)), UNIT)
        assert not box_inside_open_ball(IntervalBox.of((0, 1), (0, 1)), UNIT)

    def test_box_meets(self) -> None:
        assert box_meets_open_ball(IntervalBox.of((0, 1), (0, 1)), UNIT)
        assert not box_meets_open_ball(IntervalBox.of((1, 2), (0, 1)), UNIT)

    def test_box_disjoint(self) -> None:
        closed = ClosedBall(ORIGIN, Fraction(1))
        assert not box_disjoint_closed_ball(IntervalBox.of((1, 2), (0, 1)), closed)
        assert box_disjoint_closed_ball(IntervalBox.of((2, 3), (0, 1)), closed)

    def test_sphere(self) -> None:
        assert box_meets_sphere(IntervalBox.of((0, 1), (0, 1)), ORIGIN, Fraction(1))
        assert not box_meets_sphere(IntervalBox.of((2, 3), (2, 3)), ORIGIN, Fraction(1))
        assert not box_meets_sphere(IntervalBox.of((0, Fraction(1, 4)), (0, Fraction(1, 4))), ORIGIN, Fraction(1))


class TestCellBall:
    def test_covers_cell(self) -> None:
        cell = IntervalBox.of((0, 1), (0, 1))
        ball = cell_ball(cell)
        assert ball.center == (Fraction(1, 2), Fraction(1, 2))
        assert box_inside_open_ball(cell, ball)

    def test_radius_close_to_half_diagonal(self) -> None:
        ball = cell_ball(IntervalBox.of((0, 1)))
        assert Fraction(1, 2) < ball.radius < Fraction(11, 20)


class TestSamplePoints:
    def test_interval(self) -> None:
        points = sample_points(ClosedBall((Fraction(0),), Fraction(1)), 1)
        assert points == [(Fraction(0),), (Fraction(-1, 2),), (Fraction(1, 2),)]

    def test_disk_points_inside(self) -> None:
        ball = ClosedBall(ORIGIN, Fraction(1))
        points = sample_points(ball, 2)
        assert all(ball.contains(p) for p in points)
        assert len(points) == 1 + 12

    def test_centre_only_once(self) -> None:
        assert sample_points(ClosedBall(ORIGIN, Fraction(1)), 0) == [ORIGIN]


class TestInscribedBalls:
    def test_inscribed_ball_of_rectangle(self) -> None:
        ball = inscribed_ball(IntervalBox.of((0, 2), (0, 1)))
        assert ball == OpenBall((Fraction(1), Fraction(1, 2)), Fraction(1, 2))

    def test_inner_exponent_at_centre(self) -> None:
        assert inner_exponent(UNIT, ORIGIN) == 1

    def test_inner_exponent_off_centre(self) -> None:
        point = (Fraction(3, 4), Fraction(0))
        k = inner_exponent(UNIT, point)
        assert k == 3
        assert ball_inside_ball(ClosedBall(point, Fraction(1, 1 << k)), UNIT)
        assert not ball_inside_ball(ClosedBall(point, Fraction(1, 1 << (k - 1))), UNIT)

    def test_inner_exponent_needs_inside_point(self) -> None:
        with pytest.raises(ValueError, match="Invalid point"):
            inner_exponent(UNIT, (Fraction(1), Fraction(0)))
