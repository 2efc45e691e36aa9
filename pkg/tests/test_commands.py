import json
from io import StringIO

import pytest
from django.core.management import call_command
from django.core.management.base import CommandError

from inertia.models import ClassificationRun

QUARTIC_Q25 = "0;0;0;5;0"


@pytest.mark.django_db
def test_classify_prints_the_label():
    out = StringIO()
    call_command("classify", "Q25", curve=QUARTIC_Q25, stdout=out)
    text = out.getvalue()
    assert "parse" in text
    assert "τ_ps(1,1,4)  v(N)=2  e=4" in text
    assert ClassificationRun.objects.count() == 1


@pytest.mark.django_db
def test_classify_json():
    out = StringIO()
    call_command("classify", "Q25", curve=QUARTIC_Q25, json=True, stdout=out)
    record = json.loads(out.getvalue())
    assert record["status"] == "CLASSIFIED"
    assert record["label"] == "τ_ps(1,1,4)"
    assert record["v_N"] == 2
    assert [s["step_name"] for s in record["steps"]] == ["parse", "classify"]


@pytest.mark.django_db
def test_classify_rejects_a_short_curve():
    with pytest.raises(CommandError, match="five coefficients"):
        call_command("classify", "Q25", curve="0;0;5", stdout=StringIO())
    assert ClassificationRun.objects.count() == 0


@pytest.mark.django_db
def test_classify_reports_a_failed_run():
    with pytest.raises(CommandError, match="FAILED"):
        call_command("classify", "Q25", curve="0;0;0;0;0", stdout=StringIO())
    assert ClassificationRun.objects.get().status == ClassificationRun.Status.FAILED


def test_inventory_of_a_tame_field(tmp_path):
    out = StringIO()
    export = tmp_path / "Q25.inventory"
    call_command("inventory", "Q25", export=str(export), stdout=out)
    text = out.getvalue()
    assert "τ_ps(1,1,4)" in text
    assert "types over Q25" in text
    assert export.read_text(encoding="utf-8").startswith("# inertia-inventory v1 field=Q25")


def test_inventory_rejects_a_bad_tag():
    with pytest.raises(CommandError):
        call_command("inventory", "Q6", stdout=StringIO())


def test_verify_tables_for_a_tame_field():
    out = StringIO()
    call_command("verify_tables", "Q25", stdout=out)
    assert "all checks passed" in out.getvalue()


@pytest.mark.django_db
def test_catalog_build_and_verify(tmp_path):
    path = str(tmp_path / "Q9.catalog")
    out = StringIO()
    call_command("catalog", "build", "--field", "Q9", "--out", path, "--sections", "quadratics", stdout=out)
    assert "VERIFIED 1 entries" in out.getvalue()
    out = StringIO()
    call_command("catalog", "verify", path, stdout=out)
    assert "Q9: catalog verified" in out.getvalue()


@pytest.mark.django_db
def test_catalog_verify_missing_file(tmp_path):
    with pytest.raises(CommandError):
        call_command("catalog", "verify", str(tmp_path / "nothing.catalog"), stdout=StringIO())


def test_realize_json():
    out = StringIO()
    call_command("realize", "Q25", "--label", "trivial", "--label", "τ_ps(1,1,4)",
                 "--budget", "200", "--seed", "1", "--json", stdout=out)
    found = json.loads(out.getvalue())
    assert set(found["witnesses"]) == {"trivial", "τ_ps(1,1,4)"}
    assert found["uncovered"] == []
