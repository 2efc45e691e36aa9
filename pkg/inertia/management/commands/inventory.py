from collections import Counter
from pathlib import Path

from django.core.management.base import BaseCommand, CommandError

from inertia.catalog import Catalog, inventory_lines, inventory_table
from inertia.chartype import enumerate_types
from inertia.exceptions import InertiaError
from inertia.localfield import field_from_tag


class Command(BaseCommand):
    help = "Print the inertial types of a base field (label, kind, m, e) with counts."

    def add_arguments(self, parser):
        parser.add_argument("field", help="field tag, e.g. Q9 or Q4")
        parser.add_argument("--catalog", help="catalog file whose exceptional labels are added")
        parser.add_argument("--export", help="write the inventory records to this file")

    def handle(self, *args, **options):
        try:
            F = field_from_tag(options["field"])
            if options["catalog"]:
                inventory = Catalog.load(options["catalog"], F).inventory
            else:
                inventory = enumerate_types(F)
        except InertiaError as exc:
            raise CommandError(str(exc)) from exc

        rows = inventory_table(inventory)
        width = max((len(label) for label, *_ in rows), default=5)
        self.stdout.write(f"{'label':<{width}}  {'kind':<22} {'m':>3} {'e':>3}")
        for label, kind, m, e in rows:
            self.stdout.write(f"{label:<{width}}  {kind:<22} {m:>3} {e:>3}")

        by_kind = Counter(kind for _, kind, _, _ in rows)
        self.stdout.write("")
        for kind, n in sorted(by_kind.items()):
            self.stdout.write(f"{kind}: {n}")
        self.stdout.write(self.style.SUCCESS(f"{len(rows)} types over {F.name}"))

        if options["export"]:
            path = Path(options["export"])
            path.parent.mkdir(parents=True, exist_ok=True)
            path.write_text("\n".join(inventory_lines(inventory)) + "\n", encoding="utf-8")
            self.stdout.write(f"inventory written to {path}")
