from fractions import Fraction

import pytest
import sympy

from openmap.semialgebraic.algebraic import (
    RealAlgebraic,
    compare,
    real_roots,
    same_number,
    sample_between,
    sector_samples,
    sign_at_point,
)

x, y = sympy.symbols("x y")


def sqrt2() -> RealAlgebraic:
    _, root = real_roots(sympy.Poly(x**2 - 2, x))
    assert isinstance(root, RealAlgebraic)
    return root


class TestRealAlgebraic:
    def test_roots_sorted_and_distinct(self) -> None:
        roots = real_roots(sympy.Poly((x - 1) * (x**2 - 2) * (x - 1), x))
        assert len(roots) == 3
        assert roots[1] == Fraction(1)
        assert compare(roots[0], roots[2]) == -1

    def test_constant_has_no_roots(self) -> None:
        assert real_roots(sympy.Poly(3, x)) == []

    def test_linear_factor_gives_fraction(self) -> None:
        assert real_roots(sympy.Poly(2 * x - 1, x)) == [Fraction(1, 2)]

    def test_approximation(self) -> None:
        value = sqrt2().approx(20)
        assert abs(value * value - 2) < Fraction(1, 1 << 17)

    def test_linear_rejected(self) -> None:
        with pytest.raises(ValueError, match="Invalid algebraic number"):
            RealAlgebraic(sympy.Poly(x - 1, x), Fraction(0), Fraction(2))

    def test_interval_must_isolate(self) -> None:
        with pytest.raises(ValueError, match="Invalid isolating interval"):
            RealAlgebraic(sympy.Poly(x**2 - 2, x), Fraction(2), Fraction(3))

    def test_same_number(self) -> None:
        assert same_number(sqrt2(), sqrt2())
        negative, positive = real_roots(sympy.Poly(x**2 - 2, x))
        assert not same_number(negative, positive)
        assert not same_number(positive, Fraction(3, 2))

    def test_compare_with_rational(self) -> None:
        assert compare(sqrt2(), Fraction(3, 2)) == -1
        assert compare(Fraction(7, 5), sqrt2()) == -1
        assert compare(sqrt2(), sqrt2()) == 0


class TestSamples:
    def test_integer_preferred(self) -> None:
        negative, positive = real_roots(sympy.Poly(x**2 - 2, x))
        assert sample_between(negative, positive) == 0

    def test_sample_between_close_roots(self) -> None:
        sample = sample_between(sqrt2(), Fraction(3, 2))
        assert Fraction(7, 5) < sample < Fraction(3, 2)
        assert sample * sample > 2

    def test_no_roots(self) -> None:
        assert sector_samples([]) == [Fraction(0)]

    def test_single_root(self) -> None:
        assert sector_samples([Fraction(1)]) == [Fraction(0), Fraction(1), Fraction(2)]

    def test_sectors_and_sections_alternate(self) -> None:
        roots = real_roots(sympy.Poly(x**2 - 2, x))
        samples = sector_samples(roots)
        assert len(samples) == 5
        assert samples[1] is roots[0]
        assert samples[2] == 0
        assert samples[3] is roots[1]


class TestSigns:
    def test_rational_point(self) -> None:
        assert sign_at_point(x * y - 1, [x, y], [Fraction(2), Fraction(1, 3)]) == -1

    def test_root_of_its_own_polynomial(self) -> None:
        assert sign_at_point(x**2 - 2, [x], [sqrt2()]) == 0

    def test_nonzero_value(self) -> None:
        assert sign_at_point(x - 1, [x], [sqrt2()]) == 1
        assert sign_at_point(x**2 - 3, [x], [sqrt2()]) == -1

    def test_mixed_coordinates(self) -> None:
        assert sign_at_point(x + y, [x, y], [Fraction(-3, 2), sqrt2()]) == -1

    def test_two_algebraic_coordinates(self) -> None:
        assert sign_at_point(x * y - 2, [x, y], [sqrt2(), sqrt2()]) == 0
        assert sign_at_point(x * y - 1, [x, y], [sqrt2(), sqrt2()]) == 1
