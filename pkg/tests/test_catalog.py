import json

import pytest
from django.test import override_settings

from inertia.catalog import (
    CATALOG_HEADER,
    INVENTORY_HEADER,
    Catalog,
    CatalogEntry,
    build_catalog,
    default_path,
    inventory_lines,
    verify_catalog,
)
from inertia.chartype import enumerate_types
from inertia.exceptions import CatalogError
from inertia.extensions import adjoin_sqrt
from inertia.galois import automorphisms, identify, order_census, permutation_group
from inertia.localfield import make_base_field
from inertia.steps import error_count

Q9 = make_base_field(3, 2)
Q25 = make_base_field(5, 2)


@pytest.fixture(scope="module")
def handmade():
    K1, _ = adjoin_sqrt(Q9, 3, name="K1")
    catalog = Catalog(Q9)
    catalog.add(CatalogEntry("quadratics", "ε_1 ⊕ ε_1", 2, 2, K1.descriptor(), galois="C2"))
    return catalog


def test_dumps_and_loads(handmade):
    text = handmade.dumps()
    assert text.startswith(f"{CATALOG_HEADER} v1 field=Q9 sha256={handmade.sha256}")
    loaded = Catalog.loads(text, Q9)
    assert loaded.sha256 == handmade.sha256
    assert loaded.counts() == {"quadratics": 1, "abelian": 0, "q8": 0, "exceptional": 0}
    entry, = loaded
    assert (entry.label, entry.e, entry.conductor, entry.galois) == ("ε_1 ⊕ ε_1", 2, 2, "C2")
    assert entry.local_field().e == 2


def test_tampered_catalog_fails_the_checksum(handmade):
    text = handmade.dumps().replace('"e":2', '"e":3')
    with pytest.raises(CatalogError, match="checksum"):
        Catalog.loads(text, Q9)


def test_version_mismatch(handmade):
    text = handmade.dumps().replace(" v1 ", " v0 ", 1)
    with pytest.raises(CatalogError, match="version"):
        Catalog.loads(text, Q9)


def test_missing_header():
    with pytest.raises(CatalogError):
        Catalog.loads("[quadratics]\n", Q9)


def test_unknown_section():
    with pytest.raises(CatalogError):
        Catalog(Q9).add(CatalogEntry("cubics", "x", 3, 1, {}))


def test_save_and_load_from_the_catalog_dir(handmade, tmp_path):
    with override_settings(INERTIA_CATALOG_DIR=str(tmp_path)):
        assert default_path("Q9") == tmp_path / "Q9.catalog"
        path = handmade.save()
        assert path.exists()
        assert len(Catalog.load(tag="Q9", F=Q9)) == 1
        with pytest.raises(CatalogError, match="no catalog"):
            Catalog.load(tag="Q4")


def test_tame_fields_have_no_catalog():
    with pytest.raises(CatalogError):
        build_catalog(Q25)


def test_quadratic_section_over_q9():
    catalog = build_catalog(Q9, sections=("quadratics",))
    assert catalog.counts()["quadratics"] == 1
    entry, = catalog.section("quadratics")
    assert entry.label == "ε_1 ⊕ ε_1"
    assert (entry.e, entry.conductor) == (2, 2)
    assert error_count(verify_catalog(catalog)) == 0


def test_inventory_lines():
    lines = inventory_lines(enumerate_types(Q25))
    assert lines[0] == f"{INVENTORY_HEADER} v1 field=Q25"
    labels = [json.loads(line)["label"] for line in lines[1:]]
    assert "τ_ps(1,1,4)" in labels
    assert "τ_St" in labels


def test_automorphism_census_of_a_biquadratic_field():
    L1, _ = adjoin_sqrt(Q9, 3)
    L2, _ = adjoin_sqrt(L1, 1 + L1(Q9.gen))
    group = automorphisms(L2, Q9)
    assert len(group) == 4
    assert permutation_group(group).order() == 4
    assert order_census(group) == {1: 1, 2: 3}
    assert identify(order_census(group)) == "C2xC2"
    assert identify(order_census(automorphisms(L1, Q9))) == "C2"
