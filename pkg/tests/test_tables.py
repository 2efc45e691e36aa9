import pytest

from inertia.catalog import build_catalog, verify_catalog
from inertia.chartype import enumerate_types
from inertia.localfield import make_base_field
from inertia.steps import error_count
from inertia.verify import (
    MASS_CASES,
    check_anchored,
    check_exceptional_anchor,
    check_exceptional_catalog,
    check_mass,
    check_triply_imprimitive,
    check_type_counts,
    verify_tables,
)

Q9 = make_base_field(3, 2)
Q4 = make_base_field(2, 2)

pytestmark = pytest.mark.slow


@pytest.fixture(scope="module")
def q9_catalog():
    return build_catalog(Q9)


@pytest.fixture(scope="module")
def q4_catalog():
    return build_catalog(Q4)


def test_q4_type_counts():
    inventory = enumerate_types(Q4)
    assert error_count(check_type_counts(inventory)) == 0
    assert error_count(check_triply_imprimitive(inventory)) == 0


@pytest.mark.parametrize("case", MASS_CASES, ids=lambda c: f"{c[0]}-{c[1]}-{c[2]}")
def test_mass_formula(case):
    assert error_count(check_mass([case])) == 0


def test_q9_catalog(q9_catalog):
    assert error_count(verify_catalog(q9_catalog, deep=True)) == 0
    assert error_count(check_anchored(q9_catalog)) == 0


def test_q4_catalog(q4_catalog):
    assert error_count(verify_catalog(q4_catalog)) == 0
    assert error_count(check_exceptional_catalog(q4_catalog)) == 0
    assert error_count(check_anchored(q4_catalog)) == 0


def test_exceptional_anchor_field():
    assert error_count(check_exceptional_anchor(Q4)) == 0


@pytest.mark.parametrize("tag", ["Q9", "Q4", "Q25"])
def test_verify_tables(tag):
    assert error_count(verify_tables(tag)) == 0
