import pytest

from inertia.localfield import make_base_field
from inertia.quadratics import inertia_classes, inertia_signature, quadratic_inventory
from inertia.steps import error_count
from inertia.tables import Q4_EPSILON_SIGNS, epsilon_signs
from inertia.verify import check_quadratics

Q9 = make_base_field(3, 2)
Q4 = make_base_field(2, 2)


def test_q9_has_three_quadratics():
    inv = quadratic_inventory(Q9)
    assert [Q.name for Q in inv] == ["3", "3+3√2", "1+√2"]
    assert [Q.conductor for Q in inv] == [1, 1, 0]
    assert [Q.ramified for Q in inv] == [True, True, False]


def test_q9_ramified_pair_agrees_on_inertia():
    K1, K2, _ = quadratic_inventory(Q9)
    assert inertia_signature(K1) == inertia_signature(K2)
    assert [Q.index for Q in inertia_classes(quadratic_inventory(Q9))] == [1]


def test_q4_conductor_pattern():
    inv = quadratic_inventory(Q4)
    assert len(inv) == 15
    assert [Q.conductor for Q in inv] == [2] * 6 + [3] * 8 + [0]
    assert [Q.index for Q in inertia_classes(inv)] == [1, 3, 5, 7, 9, 11, 13]


def test_inventory_is_cached_on_the_field():
    assert quadratic_inventory(Q9) is quadratic_inventory(Q9)


def test_generic_field_has_three_quadratics():
    F = make_base_field(5, 2)
    inv = quadratic_inventory(F)
    assert len(inv) == 3
    assert sum(Q.ramified for Q in inv) == 2
    assert all(Q.conductor == (1 if Q.ramified else 0) for Q in inv)


@pytest.mark.parametrize("F", [Q9, Q4], ids=["Q9", "Q4"])
def test_check_quadratics_passes(F):
    assert error_count(check_quadratics(F)) == 0


@pytest.mark.slow
def test_q4_epsilon_table():
    assert epsilon_signs(Q4) == Q4_EPSILON_SIGNS
