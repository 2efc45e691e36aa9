import logging
import time
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Tuple

from . import conf
from .catalog import FORMAT_VERSION, SECTIONS, Catalog, build_catalog, default_path, verify_catalog
from .classify import Classification, Classifier
from .exceptions import InertiaError
from .localfield import LocalField, field_from_tag
from .models import CatalogBuild, ClassificationRun, RunStep
from .steps import ERROR, OK, WARN, StepResult, error_count

logger = logging.getLogger(__name__)

"""
Database-backed entry points used by the management commands and the admin.

- one classification = one ClassificationRun with an ordered RunStep timeline
- summary + error_count derived from the steps actually recorded
- catalogs are loaded once per path and reused across runs
"""

_CATALOGS: Dict[Tuple[str, str], Catalog] = {}


def load_catalog(F: LocalField, path: Optional[str] = None) -> Catalog:
    """Catalog of F from ``path`` (or the default catalog directory), cached per path."""
    resolved = str(Path(path) if path else default_path(F.name))
    key = (F.name, resolved)
    if key not in _CATALOGS:
        _CATALOGS[key] = Catalog.load(resolved, F)
    return _CATALOGS[key]


def clear_catalog_cache() -> None:
    _CATALOGS.clear()


def _catalog_build(catalog: Optional[Catalog]) -> Optional[CatalogBuild]:
    if catalog is None or not catalog.sha256:
        return None
    return CatalogBuild.objects.filter(sha256=catalog.sha256).order_by("-created_at").first()


def _build_summary(result: Optional[Classification], status: str, errors: int) -> str:
    base = f"{status}"
    if result is not None:
        base += f" {result.label} (v(N)={result.conductor}, e={result.e})"
    if errors:
        base += f" - {errors} error(s)"
    return base[:255]


def _persist_steps(run: ClassificationRun, steps: Sequence[StepResult]) -> int:
    errors = 0
    sequence = 1
    for s in steps:
        if s.status == RunStep.StepStatus.ERROR:
            errors += 1
        RunStep.objects.create(
            run=run,
            sequence=sequence,
            step_name=s.step_name,
            status=s.status,
            message=(s.message or "")[:255],
            details=s.details or {},
        )
        sequence += 1
    return errors


def run_classification(
    *,
    field_tag: str,
    curve: str,
    gen_poly: str = "",
    catalog_path: Optional[str] = None,
    strict: bool = False,
    twists: bool = False,
    meta: Optional[Dict[str, Any]] = None,
) -> ClassificationRun:
    start = time.time()

    run = ClassificationRun.objects.create(
        field_tag=field_tag,
        curve=curve,
        gen_poly=gen_poly or "",
        meta=meta or {},
        status=ClassificationRun.Status.RECEIVED,
        summary="Received curve",
    )

    all_steps: List[StepResult] = []
    result: Optional[Classification] = None
    catalog: Optional[Catalog] = None

    # 1) Parse field and coefficients
    try:
        F = field_from_tag(field_tag)
        E = Classifier.curve_over(F, curve, gen_poly or None)
        all_steps.append(StepResult("parse", OK, f"curve over {F.name}", {"ainvs": [str(a) for a in E.ainvs]}))
    except InertiaError as exc:
        F = E = None
        all_steps.append(StepResult("parse", ERROR, "could not read the curve", {"error": str(exc)}))

    # 2) Catalog, wild fields only
    if F is not None and F.p < 5:
        try:
            catalog = load_catalog(F, catalog_path)
            if catalog.F is not F:
                # cached catalog: reread the curve over the field its towers live on
                F = catalog.F
                E = Classifier.curve_over(F, curve, gen_poly or None)
            all_steps.append(StepResult("catalog", OK, f"{len(catalog)} catalog entries", {"sha256": catalog.sha256}))
        except InertiaError as exc:
            all_steps.append(StepResult("catalog", WARN, "no catalog; only families without one can be classified",
                                        {"error": str(exc)}))

    # 3) Classify
    classifier = None
    if E is not None:
        try:
            classifier = Classifier(F, catalog, strict=strict)
            result = classifier.classify(E)
            status = OK if result.consistent else WARN
            all_steps.append(StepResult(
                "classify", status, f"{result.label} ({result.kind})",
                {"v_N": result.conductor, "type_conductor": result.type_conductor, "e": result.e},
            ))
            if result.witness is not None:
                all_steps.append(StepResult("defect", OK, f"good reduction over {result.witness.name}",
                                            {"probed": result.probed}))
        except InertiaError as exc:
            all_steps.append(StepResult("classify", ERROR, "classification failed", {"error": str(exc)}))

    # 4) Optional twist consistency
    if twists and result is not None:
        try:
            all_steps.extend(classifier.twist_checks(E, result))
        except InertiaError as exc:
            all_steps.append(StepResult("twist", WARN, "twist checks stopped", {"error": str(exc)}))

    # 5) Persist steps (single pass, correct sequencing)
    errors = _persist_steps(run, all_steps)

    # 6) Final run fields
    if result is not None and not errors:
        run.status = ClassificationRun.Status.CLASSIFIED
        run.label = result.label
        run.kind = result.kind
        run.conductor = result.conductor
        run.e = result.e
        run.record = result.record(classifier.inventory)
    else:
        run.status = ClassificationRun.Status.FAILED
    run.catalog = _catalog_build(catalog)
    run.error_count = errors
    run.summary = _build_summary(result if not errors else None, run.status, errors)
    run.duration_ms = int((time.time() - start) * 1000)
    run.save(update_fields=[
        "status", "label", "kind", "conductor", "e", "record", "catalog", "error_count", "summary", "duration_ms",
    ])
    logger.info("run %s: %s", run.pk, run.summary)
    return run


def run_catalog_build(
    *,
    field_tag: str,
    out: Optional[str] = None,
    check: bool = True,
    sections: Sequence[str] = SECTIONS,
) -> CatalogBuild:
    """Build, verify and save the catalog of one field, recording the build."""
    start = time.time()
    build = CatalogBuild.objects.create(
        field_tag=field_tag,
        status=CatalogBuild.Status.RUNNING,
        meta={
            "precision": conf.get("INERTIA_PRECISION"),
            "seed": conf.get("INERTIA_SEED"),
            "budget": conf.get("INERTIA_ENUMERATION_BUDGET"),
            "sections": list(sections),
            "format": FORMAT_VERSION,
        },
    )
    try:
        F = field_from_tag(field_tag)
        catalog = build_catalog(F, sections=sections, check=check)
        path = catalog.save(out)
        steps = verify_catalog(catalog) if check else []
    except InertiaError as exc:
        logger.exception("catalog build for %s failed", field_tag)
        build.status = CatalogBuild.Status.FAILED
        build.summary = f"FAILED - {exc}"[:255]
        build.error_count = 1
        build.duration_ms = int((time.time() - start) * 1000)
        build.save(update_fields=["status", "summary", "error_count", "duration_ms"])
        return build

    errors = error_count(steps)
    if errors:
        build.status = CatalogBuild.Status.FAILED
    elif check:
        build.status = CatalogBuild.Status.VERIFIED
    else:
        build.status = CatalogBuild.Status.BUILT
    build.path = str(path)
    build.sha256 = catalog.sha256
    build.entry_count = len(catalog)
    build.sections = catalog.counts()
    build.meta["failed_steps"] = [f"{s.step_name}: {s.message}" for s in steps if s.failed]
    build.error_count = errors
    build.summary = f"{build.status} {len(catalog)} entries" + (f" - {errors} error(s)" if errors else "")
    build.duration_ms = int((time.time() - start) * 1000)
    build.save(update_fields=[
        "status", "path", "sha256", "entry_count", "sections", "error_count", "summary", "duration_ms", "meta",
    ])
    clear_catalog_cache()
    return build


def run_catalog_verify(*, path: str, deep: bool = False) -> Tuple[Optional[Catalog], List[StepResult]]:
    """Load and check a catalog file; load failures come back as an ERROR step."""
    try:
        catalog = Catalog.load(path)
    except InertiaError as exc:
        return None, [StepResult("load", ERROR, f"cannot load {path}", {"error": str(exc)})]
    steps = [StepResult("load", OK, f"{catalog.tag}: {len(catalog)} entries", {"sha256": catalog.sha256})]
    steps.extend(verify_catalog(catalog, deep=deep))
    build = _catalog_build(catalog)
    if build is not None and not error_count(steps):
        build.status = CatalogBuild.Status.VERIFIED
        build.save(update_fields=["status"])
    return catalog, steps
