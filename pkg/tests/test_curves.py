import pytest

from inertia.curves import WeierstrassCurve, good_reduction_over, tame_defect, tate
from inertia.exceptions import ClassificationError, PrecisionError
from inertia.expressions import curve_coefficients
from inertia.extensions import adjoin_sqrt
from inertia.localfield import make_base_field

Q9 = make_base_field(3, 2)
Q4 = make_base_field(2, 2)
Q25 = make_base_field(5, 2)

TATE = "1;0;0;0;36"       # v(Delta) = 2 at 2 and at 3
GOOD = "0;0;1;-1;0"       # Delta = 37
WILD_Q9 = "0;3^3*a;0;3^3*a;2*3^3"


def curve(text, F):
    return WeierstrassCurve(F, curve_coefficients(text, F))


@pytest.mark.parametrize("F", [Q9, Q4], ids=["Q9", "Q4"])
def test_multiplicative_reduction(F):
    data = tate(curve(TATE, F))
    assert data.kodaira == "I2"
    assert data.conductor == 1
    assert data.multiplicative
    assert data.j_valuation == -2


@pytest.mark.parametrize("F", [Q9, Q4], ids=["Q9", "Q4"])
def test_good_reduction(F):
    data = tate(curve(GOOD, F))
    assert data.good
    assert data.kodaira == "I0"
    assert data.discriminant_valuation == 0


def test_twist_by_a_square_keeps_the_reduction():
    E = curve(GOOD, Q9)
    assert tate(E.quadratic_twist(4)).good
    assert tate(E.quadratic_twist(Q9(-1))).good


def test_ramified_twist_is_additive():
    E = curve(GOOD, Q9)
    data = tate(E.quadratic_twist(3))
    assert data.conductor == 2
    assert data.kodaira == "I0*"


def test_non_minimal_model_is_scaled_down():
    pi = Q25.uniformizer
    E = WeierstrassCurve(Q25, [0, 0, 0, pi ** 4, pi ** 6])
    assert tate(E).discriminant_valuation == tate(WeierstrassCurve(Q25, [0, 0, 0, 1, 1])).discriminant_valuation


def test_wild_curve_conductor():
    data = tate(curve(WILD_Q9, Q9))
    assert data.conductor == 3
    assert data.j_valuation >= 0
    assert not data.good


def test_twisted_curve_is_good_over_the_twisting_field():
    E = curve(GOOD, Q9).quadratic_twist(3)
    L, _ = adjoin_sqrt(Q9, 3)
    assert good_reduction_over(E, L)


@pytest.mark.parametrize("k, e", [(1, 4), (2, 2), (3, 4), (4, 1)])
def test_tame_defect_of_x3_plus_pik_x(k, e):
    pi = Q25.uniformizer
    assert tame_defect(WeierstrassCurve(Q25, [0, 0, 0, pi ** k, 0])) == e


@pytest.mark.parametrize("k, e", [(1, 6), (2, 3), (3, 2), (4, 3), (5, 6)])
def test_tame_defect_of_x3_plus_pik(k, e):
    pi = Q25.uniformizer
    assert tame_defect(WeierstrassCurve(Q25, [0, 0, 0, 0, pi ** k])) == e


def test_tame_defect_needs_p_at_least_5():
    with pytest.raises(ClassificationError):
        tame_defect(curve(GOOD, Q9))


def test_singular_curve():
    with pytest.raises(PrecisionError):
        WeierstrassCurve(Q9, [0, 0, 0, 0, 0])
