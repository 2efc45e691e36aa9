import pytest

from inertia.exceptions import ExpressionError
from inertia.expressions import curve_coefficients, element, generator_from_poly, polynomial
from inertia.localfield import make_base_field
from inertia.polynomials import roots_in_field

Q9 = make_base_field(3, 2)
Q4 = make_base_field(2, 2)

WILD_Q9 = "0;3^3*a;0;3^3*a;2*3^3"


def test_element_arithmetic():
    a = Q9.gen
    assert element("3^3*a", Q9) == 27 * a
    assert element("(1+a)^2", Q9) == 3 + 2 * a
    assert element("1/3", Q9) * 3 == 1


def test_q4_symbols():
    b, phi = Q4.gen, Q4.step_gen
    assert element("(3b+11)/2", Q4) == (3 * b + 11) / 2
    assert element("phi", Q4) == phi
    assert element("φ^2 - φ", Q4) == 1
    assert element("√5", Q4) == b


def test_curve_coefficients():
    a1, a2, a3, a4, a6 = curve_coefficients(WILD_Q9, Q9)
    assert a1 == 0 and a3 == 0
    assert a2 == 27 * Q9.gen
    assert a6 == 54


def test_gen_poly_rebinds_a():
    coeffs = curve_coefficients("0;a;0;0;0", Q4, gen_poly="x^2-x-1")
    assert coeffs[1] == Q4.step_gen
    assert generator_from_poly(Q4, "x^2-x-1") == Q4.step_gen


def test_polynomial_in_a_variable():
    g = polynomial("x^2-x-1", Q4)
    assert g.degree == 2
    assert len(roots_in_field(Q4, g)) == 2
    h = polynomial("beta^2 + a*beta + 1", Q9, "beta")
    assert h.degree == 2
    assert h.coeffs[1] == Q9.gen


@pytest.mark.parametrize("text", ["3^^a", "q+1", "a^(1/2)", ""])
def test_bad_elements(text):
    with pytest.raises(ExpressionError):
        element(text, Q9)


def test_curve_needs_five_coefficients():
    with pytest.raises(ExpressionError):
        curve_coefficients("0;1;0;1", Q9)


def test_gen_poly_without_root():
    with pytest.raises(ExpressionError):
        generator_from_poly(Q9, "x^2-3")
