from django.core.management.base import BaseCommand, CommandError

from inertia.classify import Classifier, realize
from inertia.exceptions import InertiaError
from inertia.localfield import field_from_tag
from inertia.services import load_catalog

from ._output import dump


class Command(BaseCommand):
    help = "Search small Weierstrass models for a witness curve of every inertial type."

    def add_arguments(self, parser):
        parser.add_argument("field", help="field tag, e.g. Q9 or Q4")
        parser.add_argument("--catalog", help="catalog file (default: INERTIA_CATALOG_DIR/<field>.catalog)")
        parser.add_argument("--budget", type=int, help="number of models to scan (default INERTIA_REALIZE_BUDGET)")
        parser.add_argument("--seed", type=int, help="seed of the random part of the scan (default INERTIA_SEED)")
        parser.add_argument("--include-exceptional", action="store_true")
        parser.add_argument("--label", action="append", dest="labels", help="only look for these labels")
        parser.add_argument("--json", action="store_true")
        parser.add_argument("--allow-uncovered", action="store_true", help="exit 0 even if some labels have no witness")

    def handle(self, *args, **options):
        try:
            F = field_from_tag(options["field"])
            catalog = load_catalog(F, options["catalog"]) if F.p < 5 else None
            found = realize(
                Classifier.for_catalog(catalog) if catalog is not None else Classifier(F),
                budget=options["budget"],
                seed=options["seed"],
                include_exceptional=options["include_exceptional"],
                targets=options["labels"],
            )
        except InertiaError as exc:
            raise CommandError(str(exc)) from exc

        if options["json"]:
            self.stdout.write(dump({
                "field": F.name,
                "witnesses": found.witnesses,
                "uncovered": found.uncovered,
                "scanned": found.scanned,
            }))
        else:
            width = max((len(label) for label, _ in found.rows()), default=5)
            for label, curve in found.rows():
                self.stdout.write(f"{label:<{width}}  {curve}")
            self.stdout.write(f"{len(found.witnesses)} witnesses from {found.scanned} models ({found.failures} failures)")
            for label in found.uncovered:
                self.stdout.write(self.style.WARNING(f"no witness: {label}"))

        if found.uncovered and not options["allow_uncovered"]:
            raise CommandError(f"{len(found.uncovered)} labels without a witness")
