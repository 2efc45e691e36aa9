import pytest

from inertia.models import CatalogBuild, ClassificationRun
from inertia.serializers import RunStepSerializer
from inertia.services import clear_catalog_cache, run_catalog_build, run_catalog_verify, run_classification
from inertia.steps import ERROR

QUARTIC_Q25 = "0;0;0;5;0"
WILD_Q9 = "0;3^3*a;0;3^3*a;2*3^3"


@pytest.fixture(autouse=True)
def fresh_cache():
    clear_catalog_cache()
    yield
    clear_catalog_cache()


@pytest.mark.django_db
def test_tame_curve_is_classified():
    run = run_classification(field_tag="Q25", curve=QUARTIC_Q25)
    run.refresh_from_db()
    assert run.status == ClassificationRun.Status.CLASSIFIED
    assert (run.label, run.conductor, run.e) == ("τ_ps(1,1,4)", 2, 4)
    assert run.error_count == 0
    assert [s.step_name for s in run.steps.all()] == ["parse", "classify"]
    assert run.record["label"] == "τ_ps(1,1,4)"
    assert run.summary.startswith("CLASSIFIED τ_ps(1,1,4)")
    assert run.duration_ms is not None
    assert not run.review_required


@pytest.mark.django_db
def test_malformed_curve_fails_without_raising():
    run = run_classification(field_tag="Q25", curve="0;0;0;5")
    assert run.status == ClassificationRun.Status.FAILED
    assert run.error_count == 1
    step, = run.steps.all()
    assert (step.step_name, step.status) == ("parse", ERROR)
    assert run.review_required


@pytest.mark.django_db
def test_wild_curve_without_a_catalog(tmp_path):
    run = run_classification(field_tag="Q9", curve=WILD_Q9, catalog_path=str(tmp_path / "missing.catalog"))
    assert run.status == ClassificationRun.Status.FAILED
    assert [(s.step_name, s.status) for s in run.steps.all()] == [
        ("parse", "OK"),
        ("catalog", "WARN"),
        ("classify", "ERROR"),
    ]
    assert run.catalog is None
    assert run.label == ""


@pytest.mark.django_db
def test_twist_checks_are_recorded():
    run = run_classification(field_tag="Q25", curve=QUARTIC_Q25, twists=True, meta={"source": "test"})
    assert run.status == ClassificationRun.Status.CLASSIFIED
    names = [s.step_name for s in run.steps.all()]
    assert names[:2] == ["parse", "classify"]
    assert len(names) > 2
    assert list(run.steps.values_list("sequence", flat=True)) == list(range(1, len(names) + 1))


@pytest.mark.django_db
def test_step_serializer():
    run = run_classification(field_tag="Q25", curve=QUARTIC_Q25)
    data = RunStepSerializer(run.steps.all(), many=True).data
    assert [(s["sequence"], s["step_name"], s["status"]) for s in data] == [(1, "parse", "OK"), (2, "classify", "OK")]
    assert data[1]["details"]["e"] == 4


@pytest.mark.django_db
def test_verify_a_missing_catalog(tmp_path):
    catalog, steps = run_catalog_verify(path=str(tmp_path / "Q9.catalog"))
    assert catalog is None
    assert [(s.step_name, s.status) for s in steps] == [("load", ERROR)]


@pytest.mark.django_db
def test_tame_catalog_build_is_recorded_as_failed(tmp_path):
    build = run_catalog_build(field_tag="Q25", out=str(tmp_path / "Q25.catalog"))
    assert build.status == CatalogBuild.Status.FAILED
    assert build.error_count == 1
    assert build.meta["format"] == "v1"


@pytest.mark.django_db
def test_quadratic_catalog_build_and_verify(tmp_path):
    out = tmp_path / "Q9.catalog"
    build = run_catalog_build(field_tag="Q9", out=str(out), sections=("quadratics",))
    assert build.status == CatalogBuild.Status.VERIFIED
    assert build.sections["quadratics"] == 1
    assert out.exists()

    catalog, steps = run_catalog_verify(path=str(out))
    assert catalog.sha256 == build.sha256
    assert all(s.status != ERROR for s in steps)
