from django.core.management.base import BaseCommand, CommandError

from inertia.exceptions import InertiaError
from inertia.localfield import field_from_tag
from inertia.services import load_catalog
from inertia.steps import error_count
from inertia.verify import verify_tables

from ._output import write_steps


class Command(BaseCommand):
    help = "Run the acceptance checks against the published tables and print pass/fail per table."

    def add_arguments(self, parser):
        parser.add_argument("fields", nargs="+", help="field tags, e.g. Q9 Q4 Q25")
        parser.add_argument("--catalog", action="store_true", help="also run the checks that need a saved catalog")
        parser.add_argument("--slow", action="store_true", help="include enumeration and mass checks")

    def handle(self, *args, **options):
        failed = 0
        for tag in options["fields"]:
            self.stdout.write(self.style.MIGRATE_HEADING(tag))
            try:
                F = field_from_tag(tag)
                catalog = load_catalog(F) if options["catalog"] and F.p < 5 else None
            except InertiaError as exc:
                raise CommandError(str(exc)) from exc
            steps = verify_tables(tag, catalog=catalog, slow=options["slow"])
            write_steps(self, steps)
            failed += error_count(steps)
        if failed:
            raise CommandError(f"{failed} check(s) failed")
        self.stdout.write(self.style.SUCCESS("all checks passed"))
