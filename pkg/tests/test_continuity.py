from fractions import Fraction

import pytest

from openmap.continuity import (
    ModulusOracle,
    bound_modulus_over_box,
    dyadic_dense,
    eval_from_dense,
    moc,
    moc_oracle,
    preimage,
)
from openmap.errors import BudgetExceeded, DimensionMismatch
from openmap.exact.expr import FuncSystem, eval_point
from openmap.exact.geometry import OpenBall
from openmap.exact.interval import IntervalBox
from openmap.exact.parser import parse_function_system
from openmap.names.budget import Budget, NotYet
from openmap.names.enumeration import OpenSetEnum
from openmap.names.stream import RealStream, scalar

ZERO1 = (Fraction(0),)


@pytest.fixture
def unit_ball() -> OpenSetEnum:
    return OpenSetEnum.from_balls(1, [OpenBall(ZERO1, Fraction(1))])


# --------------------------------------------------------------------------- #
#  Preimages                                                                   #
# --------------------------------------------------------------------------- #


class TestPreimage:
    def test_balls_map_inside_target(self, double: FuncSystem, unit_ball: OpenSetEnum, budget: Budget) -> None:
        balls = preimage(double, unit_ball, unit_ball, budget).balls(64)
        assert balls
        for ball in balls:
            assert abs(ball.center[0]) + ball.radius < Fraction(1, 2)

    def test_every_point_of_emitted_balls_maps_inside(self, cube: FuncSystem, budget: Budget) -> None:
        target = OpenSetEnum.from_balls(1, [OpenBall((Fraction(1, 2),), Fraction(1, 2))])
        domain = OpenSetEnum.from_balls(1, [OpenBall(ZERO1, Fraction(2))])
        balls = preimage(cube, target, domain, budget).balls(64)
        assert balls
        for ball in balls:
            points = [ball.center[0] + ball.radius * Fraction(2 * j + 1 - 1000, 1000) for j in range(1000)]
            assert [p for p in points if not 0 < eval_point(cube, (p,))[0] < 1] == []

    def test_empty_target(self, double: FuncSystem, unit_ball: OpenSetEnum, budget: Budget) -> None:
        assert preimage(double, OpenSetEnum.empty(1), unit_ball, budget).balls(64) == []

    def test_pole_cells_skipped(self, unit_ball: OpenSetEnum, budget: Budget) -> None:
        f = parse_function_system("1/x1")
        target = OpenSetEnum.from_balls(1, [OpenBall((Fraction(4),), Fraction(3))])
        for ball in preimage(f, target, unit_ball, budget).balls(64):
            assert ball.center[0] - ball.radius > 0

    def test_dimensions(self, shear: FuncSystem, unit_ball: OpenSetEnum, unit_disk: OpenSetEnum, budget: Budget) -> None:
        with pytest.raises(DimensionMismatch):
            preimage(shear, unit_ball, unit_disk, budget)
        with pytest.raises(DimensionMismatch):
            preimage(shear, unit_disk, unit_ball, budget)


# --------------------------------------------------------------------------- #
#  Moduli of continuity                                                        #
# --------------------------------------------------------------------------- #


class TestModulusOfContinuity:
    @pytest.mark.parametrize("k", [0, 2, 5])
    def test_linear_map(self, double: FuncSystem, budget: Budget, k: int) -> None:
        assert moc(double, scalar(0), k, budget) == k + 2

    @pytest.mark.parametrize("k", range(21))
    def test_linear_map_within_two_bits(self, double: FuncSystem, budget: Budget, k: int) -> None:
        ell = moc(double, scalar(0), k, budget)
        assert isinstance(ell, int)
        # f[B(0, 2^-l)] = B(0, 2^(1-l)) lies in B(0, 2^-k) exactly when l >= k + 1
        assert k + 1 <= ell <= k + 2

    def test_cube_modulus_is_valid(self, cube: FuncSystem, budget: Budget) -> None:
        ell = moc(cube, RealStream.exact((Fraction(1, 2),)), 3, budget)
        assert isinstance(ell, int)
        assert (Fraction(1, 2) + Fraction(1, 1 << ell)) ** 3 - Fraction(1, 8) < Fraction(1, 8)

    def test_via_preimage(self, double: FuncSystem) -> None:
        assert moc(double, scalar(0), 2, Budget(512, 8, 20), via_preimage=True) == 5

    def test_pole(self, small_budget: Budget) -> None:
        assert isinstance(moc(parse_function_system("1/x1"), scalar(0), 0, small_budget), NotYet)

    def test_dimension(self, shear: FuncSystem, budget: Budget) -> None:
        with pytest.raises(DimensionMismatch):
            moc(shear, scalar(0), 1, budget)

    def test_oracle_reads_declared_lookahead(self, double: FuncSystem) -> None:
        oracle = moc_oracle(double, margin=3)
        assert isinstance(oracle, ModulusOracle)
        assert oracle.kind == "continuity"
        assert oracle.lookahead(4) == 7
        assert oracle(scalar(0), 1) == 3


class TestGridReplay:
    def test_bound_over_box(self, double: FuncSystem) -> None:
        assert bound_modulus_over_box(moc_oracle(double), IntervalBox.of((0, 1)), 2) == 4

    def test_bound_over_pole(self) -> None:
        oracle = moc_oracle(parse_function_system("1/x1"))
        with pytest.raises(BudgetExceeded):
            bound_modulus_over_box(oracle, IntervalBox.of((-1, 1)), 0)


# --------------------------------------------------------------------------- #
#  Dense data                                                                  #
# --------------------------------------------------------------------------- #


class TestDense:
    def test_points_level_by_level(self, double: FuncSystem, unit_interval: OpenSetEnum, budget: Budget) -> None:
        dense = dyadic_dense(double, unit_interval, budget)
        assert [dense.points(i) for i in range(3)] == [(Fraction(1, 2),), (Fraction(1, 4),), (Fraction(3, 4),)]
        value = dense.values(1)
        assert value is not None
        assert value.approx(0) == (Fraction(1, 2),)

    def test_points_outside_set_skipped(self, double: FuncSystem, budget: Budget) -> None:
        x = OpenSetEnum.from_balls(1, [OpenBall((Fraction(1, 4),), Fraction(1, 8))])
        dense = dyadic_dense(double, x, budget, bound=IntervalBox.of((0, 1)))
        assert dense.points(0) is None
        assert dense.points(1) == (Fraction(1, 4),)

    def test_no_bound_no_balls(self, double: FuncSystem, budget: Budget) -> None:
        with pytest.raises(ValueError, match="Invalid dense sequence request"):
            dyadic_dense(double, OpenSetEnum.empty(1), budget)

    def test_eval_from_dense(self, double: FuncSystem, unit_interval: OpenSetEnum, budget: Budget) -> None:
        dense = dyadic_dense(double, unit_interval, budget)
        result = eval_from_dense(dense, moc_oracle(double), RealStream.exact((Fraction(1, 4),)), 3, budget)
        assert result == (Fraction(1, 2),)

    def test_eval_from_dense_runs_out(self, double: FuncSystem, unit_interval: OpenSetEnum) -> None:
        tiny = Budget(max_prefix=2, max_depth=2, max_precision=10)
        dense = dyadic_dense(double, unit_interval, tiny)
        result = eval_from_dense(dense, moc_oracle(double), RealStream.exact((Fraction(1, 3),)), 3, tiny)
        assert isinstance(result, NotYet)
