from fractions import Fraction

import pytest
import voluptuous as vol

from openmap.names.budget import Budget, NotYet
from openmap.names.stream import RealStream, scalar


class TestBudget:
    def test_defaults(self) -> None:
        assert Budget() == Budget(512, 8, 30)

    def test_from_config_fills_defaults(self) -> None:
        assert Budget.from_config({"max_depth": 3}) == Budget(512, 3, 30)

    def test_from_config_rejects_negative(self) -> None:
        with pytest.raises(vol.Invalid):
            Budget.from_config({"max_prefix": -1})

    def test_negative_rejected(self) -> None:
        with pytest.raises(ValueError, match="Invalid budget"):
            Budget(max_depth=-1)

    def test_config_round_trip(self) -> None:
        budget = Budget(10, 2, 5)
        assert Budget.from_config(budget.as_config()) == budget

    def test_levels_are_capped(self) -> None:
        assert Budget().at_level(0) == Budget(16, 2, 30)
        assert Budget().at_level(10) == Budget(512, 8, 30)

    def test_deeper(self) -> None:
        assert Budget(4, 2, 3).deeper(3).max_depth == 5

    def test_not_yet_is_a_value(self) -> None:
        assert NotYet() == NotYet("budget exhausted")
        assert NotYet("x").reason == "x"


class TestRealStream:
    def test_exact(self) -> None:
        assert RealStream.exact((Fraction(1, 3),)).approx(50) == (Fraction(1, 3),)

    @pytest.mark.parametrize("k", [0, 3, 10])
    def test_dyadic_accuracy(self, k: int) -> None:
        (q,) = RealStream.dyadic((Fraction(1, 3),)).approx(k)
        assert abs(q - Fraction(1, 3)) < Fraction(1, 1 << k)
        assert (q * (1 << (k + 1))).denominator == 1

    @pytest.mark.parametrize("k", [0, 5, 20])
    def test_sqrt_accuracy(self, k: int) -> None:
        (q,) = RealStream.sqrt(Fraction(2)).approx(k)
        assert q * q <= 2
        assert 2 - q * q < 3 * Fraction(1, 1 << k)

    def test_negative_index_clamped(self) -> None:
        stream = RealStream.dyadic((Fraction(1, 3),))
        assert stream.approx(-4) == stream.approx(0)

    def test_restrict(self) -> None:
        stream = RealStream.exact((Fraction(1), Fraction(2), Fraction(3)))
        assert stream.restrict([2, 0]).approx(0) == (Fraction(3), Fraction(1))

    def test_wrong_dimension(self) -> None:
        with pytest.raises(ValueError, match="Invalid approximant"):
            RealStream(2, lambda _k: (Fraction(0),)).approx(0)

    def test_scalar(self) -> None:
        assert scalar(3).approx(0) == (Fraction(3),)
