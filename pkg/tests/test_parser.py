from fractions import Fraction

import pytest

from openmap.errors import ParseError
from openmap.exact.expr import eval_point
from openmap.exact.parser import parse_expression, parse_function_system


class TestParseExpression:
    def test_rational_coefficients(self) -> None:
        f = parse_function_system("3/5*x1 - 4/5*x2")
        assert eval_point(f, (Fraction(5), Fraction(5))) == (Fraction(-1),)

    def test_caret_is_power(self) -> None:
        assert eval_point(parse_function_system("x1^3"), (Fraction(2),)) == (Fraction(8),)

    def test_parentheses(self) -> None:
        assert eval_point(parse_function_system("(x1 + 1)*(x1 - 1)"), (Fraction(3),)) == (Fraction(8),)

    @pytest.mark.parametrize("text", ["", "   ", "x1 + y", "sin(x1)", "x1^(1/2)", "x0 + 1", "x1 +* 2"])
    def test_rejected(self, text: str) -> None:
        with pytest.raises(ParseError):
            parse_expression(text)

    def test_parse_error_is_value_error(self) -> None:
        with pytest.raises(ValueError, match="Unknown symbol"):
            parse_expression("x0")

    @pytest.mark.parametrize("text", ["1/0", "x1/(2 - 2)", "x1 + 0^-1"])
    def test_constant_division_by_zero(self, text: str) -> None:
        with pytest.raises(ParseError, match="division by zero"):
            parse_expression(text)


class TestParseSystem:
    def test_components_split_on_semicolon(self) -> None:
        f = parse_function_system("x1 + x2^3; x2 - x1^3")
        assert (f.n, f.m) == (2, 2)

    def test_arity_inferred_from_variables(self) -> None:
        assert parse_function_system("x1^3 + x3^2; x2^3 + x3^2").n == 3

    def test_explicit_arity(self) -> None:
        f = parse_function_system("x1", n=3)
        assert f.n == 3
        assert eval_point(f, (Fraction(1), Fraction(2), Fraction(3))) == (Fraction(1),)

    def test_explicit_arity_too_small(self) -> None:
        with pytest.raises(ParseError):
            parse_function_system("x2", n=1)

    def test_constant_system_has_arity_one(self) -> None:
        assert parse_function_system("7").n == 1

    def test_label_kept(self) -> None:
        assert str(parse_function_system(" 2*x1 ")) == "2*x1"
