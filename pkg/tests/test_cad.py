import random
from fractions import Fraction

import pytest
import sympy
import voluptuous as vol

from openmap.errors import LimitsExceeded
from openmap.semialgebraic.cad import Limits, factors, psc, qe_eliminate, reducta
from openmap.semialgebraic.formula import SAFormula, Truth, holds_at, parse_formula

x, y = sympy.symbols("x y")


def truth_table(formula: SAFormula, points: list[Fraction]) -> list[bool]:
    assert formula.is_quantifier_free
    return [holds_at(formula, (p,)) for p in points]


class TestLimits:
    def test_defaults(self) -> None:
        assert Limits.from_config({}) == Limits(4, 4, 64)
        assert Limits(2, 3, 10).as_config() == {"max_vars": 2, "max_degree": 3, "max_projection": 10}

    def test_config_validated(self) -> None:
        with pytest.raises(vol.Invalid):
            Limits.from_config({"max_vars": 20})

    def test_nonpositive_rejected(self) -> None:
        with pytest.raises(ValueError, match="Invalid limits"):
            Limits(max_vars=0)

    def test_too_many_variables(self) -> None:
        with pytest.raises(LimitsExceeded, match="variables"):
            qe_eliminate(parse_formula("exists y. x = y*y"), Limits(max_vars=1))

    def test_degree_too_high(self) -> None:
        with pytest.raises(LimitsExceeded, match="degree"):
            qe_eliminate(parse_formula("exists y. x = y^5"))

    def test_projection_too_large(self) -> None:
        with pytest.raises(LimitsExceeded, match="projection factors"):
            qe_eliminate(parse_formula("exists y. y > 1 and y^2 < x"), Limits(max_projection=1))


class TestProjection:
    def test_resultant(self) -> None:
        assert psc(x**2 - 2, x - 1, x, 0) == -1

    def test_reducta_stop_at_constant_lead(self) -> None:
        assert reducta(x * y**2 + y + 1, y) == [x * y**2 + y + 1, y + 1]

    def test_reducta_of_zero(self) -> None:
        assert reducta(sympy.Integer(0), y) == []

    def test_factors_are_monic(self) -> None:
        assert set(factors(2 * x**2 - 2, [x])) == {x - 1, x + 1}
        assert factors(sympy.Integer(5), [x]) == []


class TestElimination:
    def test_quantifier_free_unchanged(self) -> None:
        formula = parse_formula("x > 0")
        assert qe_eliminate(formula) is formula

    def test_square_roots_exist_for_nonnegatives(self) -> None:
        result = qe_eliminate(parse_formula("exists y. x = y*y"))
        assert result.names == ("x",)
        points = [Fraction(-1), Fraction(0), Fraction(1), Fraction(4), Fraction(-1, 3)]
        assert truth_table(result, points) == [False, True, True, True, False]

    def test_positive_definite_quadratic(self) -> None:
        result = qe_eliminate(parse_formula("forall y. y^2 + x*y + 1 > 0"))
        points = [Fraction(0), Fraction(2), Fraction(19, 10), Fraction(-3), Fraction(-2)]
        assert truth_table(result, points) == [True, False, True, False, False]

    def test_conjunction_under_exists(self) -> None:
        result = qe_eliminate(parse_formula("exists y. y > 1 and y^2 < x"))
        points = [Fraction(2), Fraction(1), Fraction(1, 2), Fraction(5, 4)]
        assert truth_table(result, points) == [True, False, False, True]

    def test_closed_true_sentence(self) -> None:
        result = qe_eliminate(parse_formula("exists x. x^2 = 2"))
        assert result.names == ()
        assert result.matrix == Truth(True)

    def test_closed_false_sentence(self) -> None:
        assert qe_eliminate(parse_formula("exists x. x^2 + 1 = 0")).matrix == Truth(False)

    def test_alternating_sentence(self) -> None:
        assert qe_eliminate(parse_formula("forall x. exists y. y^3 = x")).matrix == Truth(True)
        assert qe_eliminate(parse_formula("forall x. exists y. y^2 = x")).matrix == Truth(False)

    def test_always_true_result(self) -> None:
        assert qe_eliminate(parse_formula("exists y. y > x")).matrix == Truth(True)


# --------------------------------------------------------------------------- #
#  Pointwise equivalence with hand-derived eliminations                        #
# --------------------------------------------------------------------------- #


ELIMINATIONS = [
    ("exists y. x = y*y", "x >= 0"),
    ("forall y. y^2 + x*y + 1 > 0", "x^2 < 4"),
    ("exists y. y > 1 and y^2 < x", "x > 1"),
    ("exists y. x*y = 1", "x != 0"),
    ("exists y. y^2 + x < 0", "x < 0"),
    ("exists y. y^2 = x and y < 0", "x > 0"),
    ("exists y. y^3 = x and y > 1", "x > 1"),
    ("forall y. y^2 >= x", "x <= 0"),
    ("exists y. y^2 + x^2 < 1", "x^2 < 1"),
    ("exists z. x = z^2 + y", "x >= y"),
]

# values on and around the sections of the eliminations above
SPECIAL = [Fraction(v) for v in (-2, -1, 0, 1, 2)] + [Fraction(1, 2), Fraction(-1, 2), Fraction(3, 2)]


def random_points(rng: random.Random, dim: int, count: int) -> list[tuple[Fraction, ...]]:
    points = [tuple(rng.choice(SPECIAL) for _ in range(dim)) for _ in range(count // 10)]
    while len(points) < count:
        points.append(tuple(Fraction(rng.randint(-300, 300), rng.randint(1, 64)) for _ in range(dim)))
    return points


class TestCorpusEquivalence:
    @pytest.mark.parametrize(("text", "expected_text"), ELIMINATIONS)
    def test_agrees_pointwise(self, text: str, expected_text: str) -> None:
        formula = parse_formula(text)
        result = qe_eliminate(formula)
        expected = parse_formula(expected_text, formula.names[: formula.free_count])
        assert result.names == expected.names
        rng = random.Random(text)
        disagreements = [
            point
            for point in random_points(rng, expected.n, 1000)
            if holds_at(result, point) != holds_at(expected, point)
        ]
        assert disagreements == []
