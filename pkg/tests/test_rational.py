from fractions import Fraction

import pytest

from openmap.exact.rational import (
    dist_sq,
    format_rat,
    norm_sq,
    parse_qvec,
    parse_rat,
    qvec,
    round_down,
    round_nearest,
    round_up,
    sqrt_lower,
    sqrt_upper,
)


class TestParsing:
    def test_fraction_text(self) -> None:
        assert parse_rat("3/4") == Fraction(3, 4)

    def test_spaces_and_sign(self) -> None:
        assert parse_rat(" -3 / 6 ") == Fraction(-1, 2)

    def test_integer(self) -> None:
        assert parse_rat(7) == 7
        assert parse_rat("-12") == -12

    @pytest.mark.parametrize("text", ["1/0", "abc", "1.5", "", "1/2/3"])
    def test_invalid_text(self, text: str) -> None:
        with pytest.raises(ValueError, match="Invalid rational"):
            parse_rat(text)

    def test_bool_rejected(self) -> None:
        with pytest.raises(ValueError, match="Invalid rational"):
            parse_rat(True)

    def test_format_is_always_a_ratio(self) -> None:
        assert format_rat(Fraction(3)) == "3/1"
        assert format_rat(Fraction(-2, 4)) == "-1/2"

    def test_parse_format_agree(self) -> None:
        assert parse_rat(format_rat(Fraction(-22, 7))) == Fraction(-22, 7)

    def test_qvec(self) -> None:
        assert qvec(["1/2", 3, Fraction(1, 3)]) == (Fraction(1, 2), Fraction(3), Fraction(1, 3))

    def test_point_in_parentheses(self) -> None:
        assert parse_qvec("(1/2, -3)") == (Fraction(1, 2), Fraction(-3))

    def test_point_without_parentheses(self) -> None:
        assert parse_qvec("0,1") == (Fraction(0), Fraction(1))

    def test_empty_point(self) -> None:
        with pytest.raises(ValueError, match="Invalid point"):
            parse_qvec("()")


class TestVectors:
    def test_dist_sq(self) -> None:
        assert dist_sq((Fraction(0), Fraction(0)), (Fraction(3), Fraction(4))) == 25

    def test_norm_sq(self) -> None:
        assert norm_sq((Fraction(1, 2), Fraction(1, 2))) == Fraction(1, 2)


class TestRounding:
    def test_round_down(self) -> None:
        assert round_down(Fraction(5, 8), 2) == Fraction(1, 2)
        assert round_down(Fraction(-5, 8), 2) == Fraction(-3, 4)

    def test_round_up(self) -> None:
        assert round_up(Fraction(5, 8), 2) == Fraction(3, 4)

    def test_round_nearest(self) -> None:
        assert round_nearest(Fraction(5, 8), 2) == Fraction(3, 4)
        assert round_nearest(Fraction(1, 3), 4) == Fraction(5, 16)

    def test_dyadic_values_unchanged(self) -> None:
        assert round_down(Fraction(3, 8), 3) == round_up(Fraction(3, 8), 3) == Fraction(3, 8)

    def test_sqrt_bounds(self) -> None:
        lo = sqrt_lower(Fraction(2), 10)
        hi = sqrt_upper(Fraction(2), 10)
        assert lo * lo <= 2 <= hi * hi
        assert (lo + Fraction(1, 1024)) ** 2 > 2

    def test_sqrt_upper_exact_square(self) -> None:
        assert sqrt_upper(Fraction(9, 4)) == Fraction(3, 2)

    def test_negative_radicand(self) -> None:
        with pytest.raises(ValueError, match="Invalid radicand"):
            sqrt_lower(Fraction(-1))
