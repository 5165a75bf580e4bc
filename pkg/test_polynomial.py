from fractions import Fraction

import pytest

from algebra.polynomial import (
    DimensionMismatch, Polynomial, as_rational, monomials_up_to, parse_point, parse_polynomial,
)
from algebra.taylor import binomial_half, defect_coefficients, is_dyadic, sqrt_defect, taylor_sqrt

XY = ['x', 'y']


def poly(text, variables=XY):
    return parse_polynomial(text, variables)


class TestPolynomialArithmetic:
    def test_parse_expands_products(self):
        f = poly('x1*(1 + x2)', ['x1', 'x2'])
        assert dict(f.terms) == {(1, 0): 1, (1, 1): 1}
        assert f.degree == 2

    def test_binomial_square(self):
        x, y = Polynomial.variable(0, 2), Polynomial.variable(1, 2)
        assert (x + y) ** 2 == x * x + 2 * x * y + y * y

    def test_zero_coefficients_are_dropped(self):
        x = Polynomial.variable(0, 2)
        assert (x - x).is_zero
        assert Polynomial({(1, 0): 0, (0, 0): 3}, 2) == 3

    def test_mixed_dimensions_are_rejected(self):
        with pytest.raises(DimensionMismatch):
            Polynomial.variable(0, 2) + Polynomial.variable(0, 3)

    def test_floats_are_rejected(self):
        with pytest.raises(TypeError):
            as_rational(0.5)

    def test_undeclared_variable(self):
        with pytest.raises(ValueError, match='undeclared'):
            poly('x + z')

    def test_rational_coefficients_parse_exactly(self):
        f = poly('3/2 x^2 y - 1/3 y')
        assert f.coefficient((2, 1)) == Fraction(3, 2)
        assert f.coefficient((0, 1)) == Fraction(-1, 3)

    def test_to_text_is_canonical(self):
        f = poly('x^2*y - 3/2*y')
        assert f.to_text(XY) == 'x^2 y - 3/2 y'
        assert poly(f.to_text(XY)) == f
        assert poly('x1*(1 + x2)', ['x1', 'x2']).to_text(['x1', 'x2']) == 'x1 x2 + x1'
        assert Polynomial.zero(2).to_text(XY) == '0'


class TestCalculus:
    def test_evaluate_is_exact(self):
        f = poly('x^2*y - 3/2*y')
        assert f.evaluate((2, Fraction(1, 3))) == Fraction(5, 6)
        assert f(('2', '1/3')) == Fraction(5, 6)

    def test_gradient_and_hessian(self):
        f = poly('x^2*y')
        assert f.gradient((1, 2)) == [4, 1]
        assert f.hessian((1, 2)) == [[4, 2], [2, 0]]

    def test_axis_hessian(self):
        f = parse_polynomial('x^2 + y^2', ['x', 'y', 'z'])
        assert f.hessian((0, 0, 5)) == [[2, 0, 0], [0, 2, 0], [0, 0, 0]]

    def test_restrict_to_line(self):
        f = poly('x^2 + y')
        assert f.restrict_to_line((1, 0), (1, 2)) == [1, 4, 1]
        assert f.directional_derivative((1, 0), (1, 2)) == 4
        assert f.hessian_form((1, 0), (1, 2)) == 2

    def test_restriction_matches_evaluation(self):
        f = poly('x^3 - 2*x*y + 5')
        z, v = (Fraction(1, 2), Fraction(-1)), (Fraction(2), Fraction(3, 4))
        coeffs = f.restrict_to_line(z, v)
        for t in (Fraction(0), Fraction(1), Fraction(-2, 3)):
            point = tuple(a + t * b for a, b in zip(z, v))
            assert sum(c * t ** k for k, c in enumerate(coeffs)) == f.evaluate(point)

    def test_compose(self):
        f = poly('x*y')
        t = Polynomial.variable(0, 1)
        assert f.compose([t, 1 - t]) == t - t * t

    def test_affine_constructor(self):
        g = Polynomial.affine(1, [-1, -1])
        assert g == poly('1 - x - y')
        assert g.linear_coefficients() == [-1, -1]
        assert g.constant_term == 1

    def test_parse_point(self):
        assert parse_point('(0, 3/4)') == (Fraction(0), Fraction(3, 4))
        with pytest.raises(ValueError):
            parse_point('()')

    def test_monomials_up_to(self):
        assert monomials_up_to(2, 1) == [(0, 0), (1, 0), (0, 1)]
        assert len(monomials_up_to(3, 2)) == 10


class TestTaylorDefect:
    def test_taylor_coefficients(self):
        t = taylor_sqrt(3)
        assert [t.coefficient((k,)) for k in range(4)] == [1, Fraction(-1, 2), Fraction(-1, 8), Fraction(-1, 16)]
        assert binomial_half(0) == 1

    def test_second_defect(self):
        p = sqrt_defect(2)
        assert p == Polynomial({(3,): Fraction(1, 8), (4,): Fraction(1, 64)}, 1)
        assert p.evaluate([Fraction(1, 2)]) == Fraction(17, 1024)

    @pytest.mark.parametrize('n', range(1, 17))
    def test_coefficients_nonnegative_dyadic(self, n):
        coeffs = defect_coefficients(n)
        assert all(c >= 0 for c in coeffs)
        assert all(is_dyadic(c) for c in coeffs)
        assert all(c == 0 for c in coeffs[:n + 1])
        assert coeffs[2 * n] > 0

    def test_values_at_half_decrease(self):
        values = [sqrt_defect(n).evaluate([Fraction(1, 2)]) for n in range(1, 17)]
        assert all(a > b for a, b in zip(values, values[1:]))

    def test_invalid_order(self):
        with pytest.raises(ValueError):
            sqrt_defect(0)
