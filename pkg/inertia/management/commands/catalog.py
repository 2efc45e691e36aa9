from django.core.management.base import BaseCommand, CommandError

from inertia.catalog import SECTIONS
from inertia.models import CatalogBuild
from inertia.services import run_catalog_build, run_catalog_verify

from ._output import fail_on_errors, write_steps


class Command(BaseCommand):
    help = "Build or verify the catalog of inertial fields of Q9 or Q4."

    def add_arguments(self, parser):
        sub = parser.add_subparsers(dest="action", required=True)

        build = sub.add_parser("build", help="build, verify and save a catalog")
        build.add_argument("--field", required=True, help="field tag (Q9 or Q4)")
        build.add_argument("--out", help="output path (default: INERTIA_CATALOG_DIR/<field>.catalog)")
        build.add_argument("--sections", nargs="+", choices=SECTIONS, default=list(SECTIONS))
        build.add_argument("--no-check", action="store_true", help="skip census and coverage checks")

        verify = sub.add_parser("verify", help="check a saved catalog")
        verify.add_argument("path")
        verify.add_argument("--deep", action="store_true", help="rebuild every field and compare fingerprints")

    def handle(self, *args, **options):
        if options["action"] == "build":
            self._build(options)
        else:
            self._verify(options)

    def _build(self, options):
        build = run_catalog_build(
            field_tag=options["field"],
            out=options["out"],
            check=not options["no_check"],
            sections=options["sections"],
        )
        for line in build.meta.get("failed_steps", []):
            self.stdout.write(self.style.ERROR(line))
        if build.status == CatalogBuild.Status.FAILED:
            raise CommandError(build.summary)
        self.stdout.write(self.style.SUCCESS(f"{build.summary} -> {build.path} ({build.duration_ms} ms)"))
        for name, n in build.sections.items():
            self.stdout.write(f"  {name}: {n}")

    def _verify(self, options):
        catalog, steps = run_catalog_verify(path=options["path"], deep=options["deep"])
        write_steps(self, steps)
        fail_on_errors(steps, options["path"])
        self.stdout.write(self.style.SUCCESS(f"{catalog.tag}: catalog verified"))
