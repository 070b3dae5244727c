from fractions import Fraction

import pytest

from openmap.errors import DimensionMismatch
from openmap.exact.expr import FuncSystem
from openmap.exact.geometry import ClosedBall
from openmap.exact.interval import IntervalBox
from openmap.exact.parser import parse_function_system
from openmap.openness.miranda import certify_ball_in_image, miranda_certifies, preimage_witness

F = Fraction
HALF_SQUARE = IntervalBox.of((F(-1, 2), F(1, 2)), (F(-1, 2), F(1, 2)))


class TestMiranda:
    def test_identity(self) -> None:
        f = parse_function_system("x1; x2")
        assert miranda_certifies(f, IntervalBox.of((-1, 1), (-1, 1)), HALF_SQUARE)

    def test_target_too_large(self) -> None:
        f = parse_function_system("x1; x2")
        assert not miranda_certifies(f, IntervalBox.of((-1, 1), (-1, 1)), IntervalBox.of((-2, 2), (-2, 2)))

    def test_shear(self, shear: FuncSystem) -> None:
        target = IntervalBox.of((F(-1, 8), F(1, 8)), (F(-1, 8), F(1, 8)))
        assert miranda_certifies(shear, HALF_SQUARE, target)

    def test_decreasing_component(self) -> None:
        f = parse_function_system("0 - x1")
        assert miranda_certifies(f, IntervalBox.of((-1, 1)), IntervalBox.of((F(-1, 2), F(1, 2))))

    def test_pole_in_box(self) -> None:
        f = parse_function_system("1/x1")
        assert not miranda_certifies(f, IntervalBox.of((-1, 1)), IntervalBox.of((0, 1)))

    def test_selected_columns(self, plane_sum: FuncSystem) -> None:
        box = IntervalBox.of((-1, 1), (0, 0))
        assert miranda_certifies(plane_sum, box, IntervalBox.of((F(-1, 2), F(1, 2))), columns=[0])

    def test_dimensions(self, shear: FuncSystem) -> None:
        with pytest.raises(DimensionMismatch):
            miranda_certifies(shear, HALF_SQUARE, IntervalBox.of((0, 1)))


class TestWitness:
    def test_refines_until_certified(self) -> None:
        f = parse_function_system("x1^2")
        target = IntervalBox.of((F(24, 100), F(26, 100)))
        assert preimage_witness(f, target, IntervalBox.of((-1, 1)), 4) == IntervalBox.of((-1, 0))

    def test_unreachable_target(self, cube: FuncSystem) -> None:
        assert preimage_witness(cube, IntervalBox.of((2, 3)), IntervalBox.of((-1, 1)), 4) is None

    def test_ball_in_image(self, shear: FuncSystem) -> None:
        assert certify_ball_in_image(shear, ClosedBall((F(0), F(0)), F(1, 8)), HALF_SQUARE, 2)
        assert not certify_ball_in_image(shear, ClosedBall((F(10), F(10)), F(1, 8)), HALF_SQUARE, 2)
