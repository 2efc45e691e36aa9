import random

import pytest

from inertia.chartype import (
    PRINCIPAL_SERIES,
    SC_UNRAMIFIED,
    STEINBERG,
    STEINBERG_TWIST,
    TRIVIAL,
    InertialType,
    enumerate_types,
    tame_type,
)
from inertia.classify import Classifier, candidate_models, classify, realize, tame_family
from inertia.curves import WeierstrassCurve
from inertia.exceptions import CatalogError, ClassificationError
from inertia.localfield import make_base_field
from inertia.steps import error_count
from inertia.verify import check_steinberg_family, check_tame, check_tame_family, check_type_counts

Q9 = make_base_field(3, 2)
Q5 = make_base_field(5, 1)
Q25 = make_base_field(5, 2)

TATE = "1;0;0;0;36"
GOOD = "0;0;1;-1;0"
WILD_Q9 = "0;3^3*a;0;3^3*a;2*3^3"


@pytest.fixture(scope="module")
def q9():
    return Classifier(Q9)


def test_tame_types():
    assert tame_type(25, 4) == (PRINCIPAL_SERIES, "τ_ps(1,1,4)")
    assert tame_type(5, 6) == (SC_UNRAMIFIED, "τ_sc(u,1,6)")
    assert tame_type(7, 4)[0] == SC_UNRAMIFIED
    with pytest.raises(ClassificationError):
        tame_type(25, 5)


def test_tame_classification_over_q5():
    pi = Q5.uniformizer
    quartic = classify(WeierstrassCurve(Q5, [0, 0, 0, pi, 0]))
    sextic = classify(WeierstrassCurve(Q5, [0, 0, 0, 0, pi]))
    assert (quartic.label, quartic.e, quartic.conductor) == ("τ_ps(1,1,4)", 4, 2)
    assert (sextic.label, sextic.e, sextic.conductor) == ("τ_sc(u,1,6)", 6, 2)
    assert quartic.consistent and sextic.consistent


def test_tame_classification_over_q25_is_principal_series():
    classifier = Classifier(Q25)
    for name, E in tame_family(Q25, ks=(1, 2, 5)):
        result = classifier.classify(E)
        assert result.consistent, name
        if result.e > 2:
            assert result.kind == PRINCIPAL_SERIES, name


def test_tame_family_conductors():
    assert error_count(check_tame_family(Q25)) == 0


def test_tame_pattern_small_primes():
    assert error_count(check_tame(primes=(5, 7), degrees=(1, 2))) == 0


@pytest.mark.slow
def test_tame_pattern_all_cells():
    assert error_count(check_tame()) == 0


def test_steinberg(q9):
    result = q9.classify(q9.curve(TATE))
    assert (result.label, result.kind, result.conductor, result.e) == ("τ_St", STEINBERG, 1, 1)


def test_good_curve(q9):
    result = q9.classify(q9.curve(GOOD))
    assert (result.label, result.kind, result.conductor) == ("trivial", TRIVIAL, 0)


def test_twisted_steinberg(q9):
    result = q9.classify(q9.curve(TATE).quadratic_twist(3))
    assert result.kind == STEINBERG_TWIST
    assert result.label == "ε_1 ⊗ τ_St"
    assert result.conductor == 2
    assert result.twist in (1, 2)


def test_twisted_good_curve(q9):
    result = q9.classify(q9.curve(GOOD).quadratic_twist(3 * (1 + Q9.gen)))
    assert result.label == "ε_1 ⊕ ε_1"
    assert (result.e, result.conductor) == (2, 2)


def test_family_check_over_q9(q9):
    assert error_count(check_steinberg_family(q9)) == 0


def test_twist_checks_for_a_good_curve(q9):
    E = q9.curve(GOOD)
    steps = q9.twist_checks(E)
    assert steps
    assert error_count(steps) == 0


def test_wild_curve_without_catalog(q9):
    with pytest.raises(CatalogError):
        q9.classify(q9.curve(WILD_Q9))


def test_record_is_json_ready(q9):
    result = q9.classify(q9.curve(GOOD).quadratic_twist(3))
    record = result.record(q9.inventory)
    assert record["label"] == "ε_1 ⊕ ε_1"
    assert record["v_N"] == 2
    assert record["reduction"]["kodaira"] == "I0*"
    assert record["witness"] is None


def test_candidate_models_are_deterministic():
    first = list(candidate_models(Q9, 50, seed=7))
    assert first == list(candidate_models(Q9, 50, seed=7))
    assert len(first) == 50
    assert all(len(text.split(";")) == 5 for text in first)


def test_realize_finds_the_families():
    found = realize(Classifier(Q25), budget=400, seed=1, targets=["trivial", "τ_St", "τ_ps(1,1,4)"])
    assert set(found.witnesses) == {"trivial", "τ_St", "τ_ps(1,1,4)"}
    assert not found.uncovered
    classifier = Classifier(Q25)
    for label, text in found.rows():
        assert classifier.classify(classifier.curve(text)).label == label


def test_tame_twists_swap_three_and_six():
    classifier = Classifier(Q25)
    inventory = classifier.inventory
    ramified = [Q.index for Q in inventory.quadratics if Q.ramified]
    assert inventory.twist("τ_ps(1,1,6)", ramified[0]) == "τ_ps(1,1,3)"
    assert inventory.twist("τ_ps(1,1,4)", ramified[0]) == "τ_ps(1,1,4)"
    sextic = classifier.curve("0;0;0;0;5")
    assert error_count(classifier.twist_checks(sextic)) == 0


def test_inventory_and_classification_import_cleanly():
    inventory = enumerate_types(Q25)
    assert all(tau.characters == [] for tau in inventory)
    first = InertialType("τ_ps(1,1,4)", PRINCIPAL_SERIES, 2, 4)
    second = InertialType("τ_ps(1,1,4)", PRINCIPAL_SERIES, 2, 4)
    first.characters.append(None)
    assert second.characters == []
    assert classify(WeierstrassCurve(Q25, [0, 0, 0, 5, 0])).label == "τ_ps(1,1,4)"


def test_q9_type_counts(q9):
    assert error_count(check_type_counts(q9.inventory)) == 0


def _unit(F, rng):
    while True:
        x = F.random_element(rng)
        if x.is_unit():
            return x


def test_twists_follow_the_inventory_on_random_curves():
    rng = random.Random(1729)
    classifier = Classifier(Q25)
    inventory = classifier.inventory
    ramified = [Q for Q in inventory.quadratics if Q.ramified]
    pi = Q25.uniformizer
    checked = 0
    for _ in range(16):
        a4 = pi ** rng.randrange(0, 5) * _unit(Q25, rng)
        a6 = pi ** rng.randrange(0, 7) * _unit(Q25, rng)
        E = WeierstrassCurve(Q25, [0, 0, 0, a4, a6])
        result = classifier.classify(E)
        if result.kind == STEINBERG or result.reduction.j_valuation < 0:
            continue
        Q = rng.choice(ramified)
        # any representative of the square class of y
        d = Q.y * _unit(Q25, rng) ** 2 * pi ** (2 * rng.randrange(0, 2))
        assert classifier.classify(E.quadratic_twist(d)).label == inventory.twist(result.label, Q.index)
        checked += 1
    assert checked >= 8
