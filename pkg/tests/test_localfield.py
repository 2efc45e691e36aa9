import random
from fractions import Fraction

import pytest

from inertia.exceptions import PrecisionError, PresentationError
from inertia.extensions import (
    MASS_REACHED,
    SAMPLES_SPENT,
    adjoin_root,
    adjoin_sqrt,
    enumerate_classes,
    mass,
    unramified_extension,
)
from inertia.localfield import LocalField, field_from_tag, make_base_field
from inertia.polynomials import Polynomial, hensel_root
from inertia.steps import OK
from inertia.verify import check_mass

Q9 = make_base_field(3, 2)
Q4 = make_base_field(2, 2)


def test_base_fields_are_unramified_quadratics():
    assert (Q9.name, Q9.e, Q9.f, Q9.q) == ("Q9", 1, 2, 9)
    assert (Q4.name, Q4.e, Q4.f, Q4.q) == ("Q4", 1, 2, 4)
    assert Q9.label == "x^2-2"
    assert Q4.label == "x^2-5"


def test_named_generators():
    a = Q9.gen
    assert a * a == 2
    b, phi = Q4.gen, Q4.step_gen
    assert b * b == 5
    assert phi * phi - phi - 1 == 0
    assert 2 * phi - 1 == b


def test_valuations_and_units():
    assert Q9(27).valuation() == 3
    assert Q9(18).valuation() == 2
    assert Q4(12).valuation() == 2
    assert (1 + Q9.gen).is_unit()
    assert Q9(Fraction(1, 9)).valuation() == -2


def test_inverse_and_division():
    u = 1 + Q9.gen
    assert u * u.inverse() == 1
    assert (Q4.gen + 3) / (Q4.gen + 3) == 1


def test_field_from_tag():
    assert field_from_tag("Q9").name == "Q9"
    assert field_from_tag("q4").name == "Q4"
    F = field_from_tag("Q25")
    assert (F.p, F.f) == (5, 2)
    assert field_from_tag("Q7").degree == 1


@pytest.mark.parametrize("tag", ["Q6", "Qx", "Q1"])
def test_field_from_tag_rejects(tag):
    with pytest.raises(PresentationError):
        field_from_tag(tag)


def test_precision_floor():
    with pytest.raises(PrecisionError):
        make_base_field(3, 2, 4)


def test_ramified_and_unramified_steps():
    L, s = adjoin_sqrt(Q9, 3, name="K1")
    assert (L.e, L.f, L.degree) == (2, 2, 4)
    assert s * s == 3
    assert L.uniformizer.valuation() == 1
    assert L(3).valuation() == 2
    U = unramified_extension(Q9, 2)
    assert (U.e, U.f) == (1, 4)


def test_norm_down_the_tower():
    L, s = adjoin_sqrt(Q9, 3)
    assert s.norm(Q9) == -3
    assert (1 + s).norm(Q9) == -2
    assert L.ground is Q9
    assert L.base.name == "Q3"


def test_descriptor_rebuilds_over_the_same_base():
    L, _ = adjoin_sqrt(Q4, -1, name="K3")
    again = LocalField.from_descriptor(L.descriptor(), base=Q4)
    assert again.parent is Q4
    assert (again.e, again.f) == (L.e, L.f)
    assert again.descriptor() == L.descriptor()


def test_descriptor_rebuilds_from_scratch():
    L, _ = adjoin_sqrt(Q9, 3)
    again = LocalField.from_descriptor(L.descriptor())
    assert again.parent is not Q9
    assert again.ground.name == "Q9"
    assert again.e == 2


def test_hensel_root():
    Q3 = make_base_field(3, 1)
    g = Polynomial.from_ints(Q3, [-7, 0, 1])
    r = hensel_root(Q3, g, 1)
    assert r * r == 7
    assert (r - 1).valuation() >= 1


def test_adjoin_eisenstein_root():
    g = Polynomial.from_ints(Q9, [-3, 0, 0, 1])
    assert g.newton_polygon() == [(0, 1), (3, 0)]
    L = adjoin_root(Q9, g, name="C")
    assert (L.e, L.f) == (3, 2)
    assert L.root ** 3 == 3


def test_norm_is_transitive_through_a_tower():
    rng = random.Random(5)
    L1, _ = adjoin_sqrt(Q9, 3)
    L2 = unramified_extension(L1, 2)
    assert (L2.e, L2.f) == (2, 4)
    for _ in range(10):
        x = L2.random_element(rng, digits=20)
        if x.is_zero():
            continue
        assert x.norm(Q9) == x.norm(L1).norm(Q9)
    x, y = L2.random_element(rng, digits=20), L2.random_element(rng, digits=20)
    assert (x * y).norm(Q9) == x.norm(Q9) * y.norm(Q9)


def test_enumeration_records_why_each_class_stopped():
    run = enumerate_classes(Q9, 2)
    assert {cls.stopped for cls in run.classes} == {MASS_REACHED}
    assert mass(run.fields, 2) == 2
    assert run.counts() == {1: 2}

    blind = enumerate_classes(Q9, 2, seed=5, samples_per_class=150)
    assert {cls.stopped for cls in blind.classes} == {SAMPLES_SPENT}
    assert all(cls.sampled == 150 for cls in blind.classes)
    assert blind.counts() == run.counts()


def test_mass_check_recounts_without_the_target():
    steps = check_mass([("Q9", 2, 0)], samples_per_class=150)
    assert [s.step_name for s in steps] == ["mass:Q9:2", "mass:Q9:2:recount"]
    assert all(s.status == OK for s in steps)
