"""
Inertia-field catalog of a base field F: for every potentially good inertial type
with e > 1, a field L with L^un = ker(tau|I_F), tagged with the type label.

Sections:
- quadratics: ramified quadratic extensions, one per restriction to inertia (e = 2)
- abelian: kernel fields of the characters inducing principal series and supercuspidal types
- q8: quaternion fields of triply imprimitive types (Q_4)
- exceptional: SL(2,3) fields of exceptional types (Q_4), one per unramified twin pair

On disk: one header line ``# inertia-catalog v1 field=<tag> sha256=<hex>``, then per
section a ``[name]`` line followed by one JSON object per entry.  The checksum covers
every line after the header.
"""
import hashlib
import json
import logging
from dataclasses import dataclass, field
from itertools import product
from pathlib import Path
from typing import Any, Dict, Iterator, List, Optional, Sequence, Tuple, Union

from . import conf
from .chartype import (
    EXCEPTIONAL,
    PRINCIPAL_SERIES,
    SC_RAMIFIED,
    SC_TRIPLY,
    SC_UNRAMIFIED,
    STEINBERG,
    STEINBERG_TWIST,
    TRIVIAL,
    InertialType,
    TypeInventory,
    enumerate_types,
)
from .classfield import kernel_field, link, norm_image
from .exceptional import assign_labels, conductor_census, exceptional_towers, representatives
from .exceptions import CatalogError, ReducibleError
from .extensions import adjoin_sqrt
from .galois import automorphisms, fixed_square_classes, is_quaternion_lift
from .localfield import LocalField, field_from_tag
from .powerclasses import power_classes
from .quadratics import inertia_signature
from .steps import StepResult, check
from .tables import EXCEPTIONAL_CENSUS

logger = logging.getLogger(__name__)

FORMAT_VERSION = "v1"
CATALOG_HEADER = "# inertia-catalog"
INVENTORY_HEADER = "# inertia-inventory"
SECTIONS = ("quadratics", "abelian", "q8", "exceptional")
ABELIAN_KINDS = (PRINCIPAL_SERIES, SC_UNRAMIFIED, SC_RAMIFIED)
UNCATALOGUED_KINDS = (TRIVIAL, STEINBERG, STEINBERG_TWIST)


@dataclass
class CatalogEntry:
    section: str
    label: str
    e: int
    conductor: int
    descriptor: Dict[str, Any]
    base: int = 0  # index of the quadratic field the character lives on, 0 for F
    fingerprint: List[List[Any]] = field(default_factory=list)
    galois: Optional[str] = None
    extra: Dict[str, Any] = field(default_factory=dict)
    _built: Optional[LocalField] = field(default=None, init=False, repr=False, compare=False)
    _ground: Optional[LocalField] = field(default=None, init=False, repr=False, compare=False)

    @property
    def name(self) -> str:
        steps = self.descriptor.get("steps") or []
        return steps[-1].get("name") or self.label if steps else self.label

    def local_field(self) -> LocalField:
        """The tower of the entry, rebuilt over the catalog's base field on first use."""
        if self._built is None:
            self._built = LocalField.from_descriptor(self.descriptor, base=self._ground)
        return self._built

    def record(self) -> Dict[str, Any]:
        return {
            "label": self.label,
            "e": self.e,
            "m": self.conductor,
            "base": self.base,
            "field": self.descriptor,
            "fingerprint": self.fingerprint,
            "galois": self.galois,
            "extra": self.extra,
        }

    @classmethod
    def from_record(cls, section: str, data: Dict[str, Any]) -> "CatalogEntry":
        try:
            return cls(
                section=section,
                label=data["label"],
                e=int(data["e"]),
                conductor=int(data["m"]),
                descriptor=data["field"],
                base=int(data.get("base") or 0),
                fingerprint=data.get("fingerprint") or [],
                galois=data.get("galois"),
                extra=data.get("extra") or {},
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise CatalogError(f"malformed {section} entry: {exc}") from exc


def _dump(obj: Any) -> str:
    return json.dumps(obj, sort_keys=True, ensure_ascii=False, separators=(",", ":"))


def _sha256(lines: Sequence[str]) -> str:
    return hashlib.sha256(("\n".join(lines) + "\n").encode("utf-8")).hexdigest()


class Catalog:
    """Entries of one base field, in section order."""

    def __init__(self, F: LocalField, inventory: Optional[TypeInventory] = None):
        self.F = F
        self.tag = F.name
        self._inventory = inventory
        self.entries: List[CatalogEntry] = []
        self.sha256 = ""

    def __repr__(self):
        return f"<Catalog {self.tag} {len(self.entries)} entries>"

    def __len__(self):
        return len(self.entries)

    def __iter__(self) -> Iterator[CatalogEntry]:
        return iter(self.entries)

    def add(self, entry: CatalogEntry) -> CatalogEntry:
        if entry.section not in SECTIONS:
            raise CatalogError(f"unknown section {entry.section!r}")
        entry._ground = self.F
        self.entries.append(entry)
        return entry

    def section(self, name: str) -> List[CatalogEntry]:
        return [x for x in self.entries if x.section == name]

    def counts(self) -> Dict[str, int]:
        return {name: len(self.section(name)) for name in SECTIONS}

    def labels(self) -> List[str]:
        return sorted({x.label for x in self.entries})

    def by_label(self, label: str) -> List[CatalogEntry]:
        return [x for x in self.entries if x.label == label]

    def candidates(self) -> List[CatalogEntry]:
        """Entries with e > 1 in probing order: ramification degree, then section, then position."""
        order = {name: i for i, name in enumerate(SECTIONS)}
        indexed = [(x.e, order[x.section], i, x) for i, x in enumerate(self.entries) if x.e > 1]
        return [x for *_, x in sorted(indexed, key=lambda t: t[:3])]

    @property
    def inventory(self) -> TypeInventory:
        """Type inventory of F with the exceptional labels of this catalog registered."""
        if self._inventory is None:
            self._inventory = enumerate_types(self.F)
        register_exceptional(self._inventory, self.section("exceptional"))
        return self._inventory

    # persistence

    def body(self) -> List[str]:
        lines: List[str] = []
        for name in SECTIONS:
            lines.append(f"[{name}]")
            lines.extend(_dump(x.record()) for x in self.section(name))
        return lines

    def dumps(self) -> str:
        body = self.body()
        self.sha256 = _sha256(body)
        header = f"{CATALOG_HEADER} {FORMAT_VERSION} field={self.tag} sha256={self.sha256}"
        return "\n".join([header] + body) + "\n"

    def save(self, path: Union[str, Path, None] = None) -> Path:
        path = Path(path) if path else default_path(self.tag)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(self.dumps(), encoding="utf-8")
        logger.info("catalog %s saved to %s (%d entries)", self.tag, path, len(self.entries))
        return path

    @classmethod
    def loads(cls, text: str, F: Optional[LocalField] = None) -> "Catalog":
        lines = text.splitlines()
        if not lines or not lines[0].startswith(CATALOG_HEADER):
            raise CatalogError("missing catalog header")
        header = _parse_header(lines[0], CATALOG_HEADER)
        if header.get("version") != FORMAT_VERSION:
            raise CatalogError(f"catalog version {header.get('version')!r}, expected {FORMAT_VERSION}")
        body = lines[1:]
        if header.get("sha256") != _sha256(body):
            raise CatalogError("catalog checksum failure")
        tag = header.get("field", "")
        F = F or field_from_tag(tag)
        if F.name != tag:
            raise CatalogError(f"catalog of {tag} loaded over {F.name}")
        catalog = cls(F)
        catalog.sha256 = header["sha256"]
        section = None
        for lineno, line in enumerate(body, start=2):
            if line.startswith("[") and line.endswith("]"):
                section = line[1:-1]
                if section not in SECTIONS:
                    raise CatalogError(f"line {lineno}: unknown section {section!r}")
                continue
            if section is None:
                raise CatalogError(f"line {lineno}: entry outside a section")
            try:
                data = json.loads(line)
            except json.JSONDecodeError as exc:
                raise CatalogError(f"line {lineno}: {exc}") from exc
            catalog.add(CatalogEntry.from_record(section, data))
        logger.info("catalog %s loaded: %s", tag, catalog.counts())
        return catalog

    @classmethod
    def load(cls, path: Union[str, Path, None] = None, F: Optional[LocalField] = None, tag: str = "") -> "Catalog":
        path = Path(path) if path else default_path(tag or (F.name if F else ""))
        if not path.exists():
            raise CatalogError(f"no catalog at {path}")
        return cls.loads(path.read_text(encoding="utf-8"), F)


def _parse_header(line: str, prefix: str) -> Dict[str, str]:
    tokens = line[len(prefix):].split()
    out = {"version": tokens[0] if tokens else ""}
    for token in tokens[1:]:
        key, _, value = token.partition("=")
        out[key] = value
    return out


def default_path(tag: str) -> Path:
    return Path(conf.get("INERTIA_CATALOG_DIR")) / f"{tag}.catalog"


# sections


def build_quadratic_section(inventory: TypeInventory) -> List[CatalogEntry]:
    """One ramified quadratic field per label eps_i (+) eps_i; unramified twins are skipped."""
    out: List[CatalogEntry] = []
    seen = set()
    for Q in inventory.quadratics:
        if not Q.ramified:
            continue
        label = inventory.twist(TRIVIAL, Q.index)
        if label in seen:
            continue
        seen.add(label)
        tau = inventory.get(label)
        entry = CatalogEntry(
            "quadratics", label, 2, tau.conductor, Q.field.descriptor(),
            fingerprint=[[str(v) for v in inertia_signature(Q)]],
            galois="C2", extra={"quadratic": Q.index, "y": Q.name},
        )
        entry._built = Q.field
        out.append(entry)
    logger.info("%s: %d quadratic entries", inventory.tag, len(out))
    return out


def _peers(inventory: TypeInventory, tau: InertialType) -> List[InertialType]:
    ctx = tau.characters[0].ctx
    return [t for t in inventory if t.characters and t.characters[0].ctx is ctx and t.kind != SC_TRIPLY]


def build_abelian_fields(inventory: TypeInventory, e: Optional[int] = None) -> List[CatalogEntry]:
    """Kernel fields of the characters inducing PS and SC types (restricted to defect e when given)."""
    F = inventory.F
    out: List[CatalogEntry] = []
    for tau in inventory:
        if tau.kind not in ABELIAN_KINDS or not tau.characters:
            continue
        if e is not None and tau.e != e:
            continue
        chi = tau.characters[0]
        B = chi.ctx.K
        L = kernel_field(chi, B)
        hits = [t.label for t in link(L, B, chi.ctx, _peers(inventory, tau))]
        if hits != [tau.label]:
            raise CatalogError(f"{tau.label}: kernel field links to {hits}")
        if L.e // F.e != tau.e:
            raise CatalogError(f"{tau.label}: kernel field has e={L.e // F.e}, expected {tau.e}")
        entry = CatalogEntry(
            "abelian", tau.label, tau.e, tau.conductor, L.descriptor(), base=tau.field or 0,
            fingerprint=[list(v) for v in norm_image(L, B, chi.ctx)],
            galois=f"C{chi.order}", extra={"kind": tau.kind, "order": chi.order},
        )
        entry._built = L
        out.append(entry)
        logger.debug("%s -> %s (e=%d)", tau.label, L.name, tau.e)
    logger.info("%s: %d abelian entries", inventory.tag, len(out))
    return out


def build_q8_fields(inventory: TypeInventory) -> List[CatalogEntry]:
    """Quaternion fields L = K_a K_b (sqrt x) hosting the triply imprimitive types, one per label."""
    F = inventory.F
    by_partners: Dict[Tuple[int, ...], List[InertialType]] = {}
    for tau in inventory.select(kind=SC_TRIPLY):
        by_partners.setdefault(tau.partners, []).append(tau)
    out: List[CatalogEntry] = []
    for partners, types in by_partners.items():
        a, b = partners[0], partners[1]
        Ka = inventory.quadratic(a).field
        M, _ = adjoin_sqrt(Ka, Ka(inventory.quadratic(b).y), name=f"M{a}.{b}", gen_name="t")
        group = automorphisms(M, F)
        if len(group) != 4:
            raise CatalogError(f"{M.name}: {len(group)} automorphisms over {F.name}, expected 4")
        ctx = inventory.sc_contexts[a]
        space = power_classes(M, 2)
        fixed = fixed_square_classes(M, group)
        wanted = {t.label for t in types}
        found: Dict[str, CatalogEntry] = {}
        for coeffs in product((0, 1), repeat=len(fixed)):
            if wanted <= set(found):
                break
            if not any(coeffs):
                continue
            x_vec = tuple(sum(c * v[i] for c, v in zip(coeffs, fixed)) % 2 for i in range(space.dim))
            x = space.element(x_vec)
            if not is_quaternion_lift(group, x):
                continue
            try:
                L, _ = adjoin_sqrt(M, x, name=f"L{a}.{b}.{len(found) + 1}", gen_name="r")
            except ReducibleError:
                continue
            hits = link(L, Ka, ctx, types)
            if len(hits) != 1 or hits[0].label in found or L.e // F.e != hits[0].e:
                continue
            tau = hits[0]
            entry = CatalogEntry(
                "q8", tau.label, tau.e, tau.conductor, L.descriptor(), base=a,
                fingerprint=[list(v) for v in norm_image(L, Ka, ctx)],
                galois="Q8", extra={"partners": list(partners), "x": list(x_vec), "compositum": M.name},
            )
            entry._built = L
            found[tau.label] = entry
        missing = sorted(wanted - set(found))
        if missing:
            raise CatalogError(f"partner set {partners}: no quaternion field for {missing}")
        out.extend(found[t.label] for t in types)
    logger.info("%s: %d quaternion entries", inventory.tag, len(out))
    return out


def build_exceptional_section(inventory: TypeInventory, *, check: bool = True) -> List[CatalogEntry]:
    """One SL(2,3) field per unramified twin pair, labelled tau_ex(m,e)_j."""
    records = exceptional_towers(inventory.F, check=check)
    assign_labels(records)
    reps = representatives(records)
    if check:
        census = conductor_census(records)
        if len(reps) != EXCEPTIONAL_CENSUS["fields_unramified_closure"]:
            raise CatalogError(f"{len(reps)} exceptional fields up to twins, expected 96")
        if census != EXCEPTIONAL_CENSUS["conductors"]:
            raise CatalogError(f"exceptional conductor census {census}")
    out: List[CatalogEntry] = []
    for r in sorted(reps, key=lambda r: r.label):
        twin = records[r.twin] if r.twin is not None else None
        entry = CatalogEntry(
            "exceptional", r.label, r.e, r.conductor, r.field.descriptor(),
            fingerprint=[list(r.m), list(r.x)], galois=r.galois,
            extra={
                "cubic": r.cubic,
                "orbit": r.orbit,
                "m_cubic": r.cubic_conductor,
                "subfields": list(r.subfields),
                "twin_x": list(twin.x) if twin else None,
            },
        )
        entry._built = r.field
        out.append(entry)
    register_exceptional(inventory, out)
    return out


def register_exceptional(inventory: TypeInventory, entries: Sequence[CatalogEntry]) -> None:
    for entry in entries:
        if entry.label not in inventory:
            inventory.add(InertialType(entry.label, EXCEPTIONAL, entry.conductor, entry.e))


def build_catalog(
    F: LocalField,
    *,
    inventory: Optional[TypeInventory] = None,
    sections: Sequence[str] = SECTIONS,
    check: bool = True,
) -> Catalog:
    if F.p >= 5:
        raise CatalogError(f"{F.name}: tame fields are classified without a catalog")
    inventory = inventory or enumerate_types(F)
    catalog = Catalog(F, inventory)
    builders = [
        ("quadratics", lambda: build_quadratic_section(inventory)),
        ("abelian", lambda: build_abelian_fields(inventory)),
    ]
    if F.p == 2:
        builders.append(("q8", lambda: build_q8_fields(inventory)))
        builders.append(("exceptional", lambda: build_exceptional_section(inventory, check=check)))
    for name, build in builders:
        if name not in sections:
            continue
        for entry in build():
            catalog.add(entry)
    logger.info("catalog %s built: %s", F.name, catalog.counts())
    return catalog


# verification


def verify_catalog(catalog: Catalog, *, deep: bool = False) -> List[StepResult]:
    """Structural checks; ``deep`` rebuilds every field and recomputes its fingerprint."""
    steps: List[StepResult] = []
    inventory = catalog.inventory
    counts = catalog.counts()

    # 1) Section sizes
    steps.append(check("sections", bool(counts["quadratics"]), f"sections {counts}", counts=counts))
    if catalog.F.p == 2 and counts["exceptional"]:
        n = counts["exceptional"]
        steps.append(check("exceptional", n == EXCEPTIONAL_CENSUS["fields_unramified_closure"],
                           f"{n} exceptional entries", entries=n))

    # 2) Labels agree with the inventory
    bad = []
    for entry in catalog:
        if entry.label not in inventory:
            bad.append(entry.label)
            continue
        tau = inventory.get(entry.label)
        if (tau.e, tau.conductor) != (entry.e, entry.conductor):
            bad.append(entry.label)
    steps.append(check("labels", not bad, f"{len(bad)} entries disagree with the inventory", labels=bad))

    # 3) Coverage: one field per potentially good type with e > 1
    present = set(catalog.labels())
    sections_built = {x.section for x in catalog}
    missing = [
        t.label for t in inventory
        if t.kind not in UNCATALOGUED_KINDS and _section_of(t) in sections_built and t.label not in present
    ]
    steps.append(check("coverage", not missing, f"{len(missing)} types without a field", missing=missing))

    # 4) Fields
    if deep:
        steps.extend(_verify_fields(catalog, inventory))
    return steps


def _section_of(tau: InertialType) -> str:
    if tau.kind == EXCEPTIONAL:
        return "exceptional"
    if tau.kind == SC_TRIPLY:
        return "q8"
    if not tau.characters:
        return "quadratics"
    return "abelian"


def _verify_fields(catalog: Catalog, inventory: TypeInventory) -> List[StepResult]:
    F = catalog.F
    wrong_e, wrong_print = [], []
    for entry in catalog:
        L = entry.local_field()
        if L.e // F.e != entry.e:
            wrong_e.append(entry.label)
        if entry.section not in ("abelian", "q8"):
            continue
        tau = inventory.get(entry.label)
        ctx = tau.characters[0].ctx
        # rebuild over the inventory copy of the inducing field so norms land in ctx
        L = LocalField.from_descriptor(entry.descriptor, base=ctx.K)
        image = [list(v) for v in norm_image(L, ctx.K, ctx)]
        if image != entry.fingerprint:
            wrong_print.append(entry.label)
    return [
        check("ramification", not wrong_e, f"{len(wrong_e)} fields with the wrong e", labels=wrong_e),
        check("fingerprints", not wrong_print, f"{len(wrong_print)} norm images differ", labels=wrong_print),
    ]


# inventory export


def inventory_lines(inventory: TypeInventory) -> List[str]:
    header = f"{INVENTORY_HEADER} {FORMAT_VERSION} field={inventory.tag}"
    return [header] + [_dump(record) for record in inventory.records()]


def inventory_table(inventory: TypeInventory) -> List[Tuple[str, str, int, int]]:
    """(label, kind, m, e) rows in inventory order."""
    return [(t.label, t.kind, t.conductor, t.e) for t in inventory]
