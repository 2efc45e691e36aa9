from django.core.management.base import BaseCommand, CommandError
from rest_framework.exceptions import ValidationError

from inertia.models import ClassificationRun
from inertia.serializers import CurveInputSerializer, RunStepSerializer
from inertia.services import run_classification

from ._output import dump


class Command(BaseCommand):
    help = "Classify the inertial type of an elliptic curve a1;a2;a3;a4;a6 over a base field."

    def add_arguments(self, parser):
        parser.add_argument("field", help="field tag, e.g. Q9, Q4, Q25")
        parser.add_argument("--curve", required=True, help='coefficients, e.g. "0;3^3*a;0;3^3*a;2*3^3"')
        parser.add_argument("--gen-poly", default="", help="minimal polynomial of a, e.g. x^2-x-1")
        parser.add_argument("--catalog", default="", help="catalog file (default: INERTIA_CATALOG_DIR/<field>.catalog)")
        parser.add_argument("--strict", action="store_true", help="fail when two catalog fields both work")
        parser.add_argument("--twists", action="store_true", help="also check every ramified quadratic twist")
        parser.add_argument("--json", action="store_true", help="print one JSON record instead of text")

    def handle(self, *args, **options):
        ser = CurveInputSerializer(data={
            "field_tag": options["field"],
            "curve": options["curve"],
            "gen_poly": options["gen_poly"],
            "catalog": options["catalog"],
            "strict": options["strict"],
        })
        try:
            ser.is_valid(raise_exception=True)
        except ValidationError as exc:
            raise CommandError(str(exc.detail)) from exc
        data = ser.validated_data

        run = run_classification(
            field_tag=data["field_tag"],
            curve=data["curve"],
            gen_poly=data["gen_poly"],
            catalog_path=data["catalog"] or None,
            strict=data["strict"],
            twists=options["twists"],
            meta={"source": "manage.py classify"},
        )

        if options["json"]:
            steps = RunStepSerializer(run.steps.all(), many=True).data
            self.stdout.write(dump({"status": run.status, **(run.record or {}), "steps": steps}))
        else:
            for step in run.steps.all():
                self.stdout.write(f"  {step.sequence:>2} {step.step_name:<10} {step.status:<5} {step.message}")
            if run.status == ClassificationRun.Status.CLASSIFIED:
                self.stdout.write(self.style.SUCCESS(f"{run.label}  v(N)={run.conductor}  e={run.e}"))

        if run.status != ClassificationRun.Status.CLASSIFIED:
            raise CommandError(run.summary)
