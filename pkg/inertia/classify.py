"""
Inertial type of an elliptic curve over a base field F.

1. Tate's algorithm on E
2. potentially multiplicative: tau_St or its twist by the quadratic character
   that makes the reduction multiplicative
3. good reduction, or a quadratic twist with good reduction: trivial or eps_i (+) eps_i
4. p >= 5: the tame type read off v(Delta_min)
5. otherwise the first catalog field (by ramification degree) over which E acquires
   good reduction names the type
"""
import logging
import random
from dataclasses import dataclass, field
from typing import Any, Dict, Iterator, List, Optional, Sequence, Tuple

from . import conf
from .catalog import Catalog, CatalogEntry
from .chartype import EXCEPTIONAL, STEINBERG, TRIVIAL, TypeInventory, enumerate_types, tame_type
from .curves import ReductionData, WeierstrassCurve, good_reduction_over, semistability_defect, tame_defect, tate
from .exceptions import CatalogError, ClassificationError, InertiaError
from .expressions import curve_coefficients
from .localfield import LocalField
from .steps import StepResult, check

logger = logging.getLogger(__name__)


@dataclass
class Classification:
    label: str
    kind: str
    conductor: int  # v(N_E) from Tate's algorithm
    e: int
    reduction: ReductionData
    twist: Optional[int] = None
    witness: Optional[CatalogEntry] = None
    probed: List[str] = field(default_factory=list)
    type_conductor: Optional[int] = None

    @property
    def consistent(self) -> bool:
        return self.type_conductor is None or self.type_conductor == self.conductor

    def record(self, inventory: Optional[TypeInventory] = None) -> Dict[str, Any]:
        out: Dict[str, Any] = {
            "label": self.label,
            "kind": self.kind,
            "v_N": self.conductor,
            "e": self.e,
            "reduction": self.reduction.record(),
            "twist": self.twist,
            "witness": self.witness.descriptor if self.witness else None,
            "probed": list(self.probed),
        }
        if inventory is not None and self.label in inventory and self.kind != EXCEPTIONAL:
            out["characters"] = inventory.get(self.label).record()["characters"]
        return out


class Classifier:
    """Classifies curves over one base field against its type inventory and catalog."""

    def __init__(self, F: LocalField, catalog: Optional[Catalog] = None, *, strict: bool = False):
        if catalog is not None and catalog.F is not F:
            raise CatalogError(f"catalog of {catalog.tag} does not live over {F.name}")
        self.F = F
        self.catalog = catalog
        self.strict = strict
        self.inventory = catalog.inventory if catalog is not None else enumerate_types(F)

    @classmethod
    def for_catalog(cls, catalog: Catalog, **kwargs) -> "Classifier":
        return cls(catalog.F, catalog, **kwargs)

    @staticmethod
    def curve_over(F: LocalField, text: str, gen_poly: Optional[str] = None) -> WeierstrassCurve:
        return WeierstrassCurve(F, curve_coefficients(text, F, gen_poly))

    def curve(self, text: str, gen_poly: Optional[str] = None) -> WeierstrassCurve:
        return self.curve_over(self.F, text, gen_poly)

    def _ramified(self):
        return [Q for Q in self.inventory.quadratics if Q.ramified]

    def classify(self, E: WeierstrassCurve) -> Classification:
        E = E.moved_to(self.F)
        inventory = self.inventory

        # 1) Tate's algorithm
        data = tate(E)

        # 2) Potentially multiplicative reduction
        if data.j_valuation < 0:
            if data.conductor <= 1:
                return self._result("τ_St", data)
            for Q in self._ramified():
                if tate(E.quadratic_twist(Q.y)).multiplicative:
                    return self._result(inventory.twist("τ_St", Q.index), data, twist=Q.index)
            raise ClassificationError("no quadratic twist has multiplicative reduction")

        # 3) Good reduction up to a quadratic twist
        if data.good:
            return self._result(TRIVIAL, data)
        for Q in self._ramified():
            if tate(E.quadratic_twist(Q.y)).good:
                return self._result(inventory.twist(TRIVIAL, Q.index), data, twist=Q.index)

        # 4) Tame
        if self.F.p >= 5:
            _, label = tame_type(self.F.q, tame_defect(E))
            return self._result(label, data)

        # 5) Catalog probe
        if self.catalog is None:
            raise CatalogError(f"classifying over {self.F.name} needs a catalog")
        report = semistability_defect(E, self.catalog.candidates())
        entry = report.witness
        if self.strict:
            self._check_unique(E, entry)
        return self._result(entry.label, data, witness=entry, probed=report.probed)

    def _check_unique(self, E: WeierstrassCurve, entry: CatalogEntry):
        others = {
            x.label for x in self.catalog.candidates()
            if x.e == entry.e and x.label != entry.label and good_reduction_over(E, x.local_field())
        }
        if others:
            raise ClassificationError(f"fields of {entry.label} and {sorted(others)} all give good reduction")

    def _result(self, label: str, data: ReductionData, **kwargs) -> Classification:
        tau = self.inventory.get(label)
        result = Classification(label, tau.kind, data.conductor, tau.e, data, type_conductor=tau.conductor, **kwargs)
        if not result.consistent:
            logger.warning("%s: type conductor %d but v(N)=%d", label, tau.conductor, data.conductor)
        logger.info("classified as %s (v(N)=%d, e=%d)", label, data.conductor, tau.e)
        return result

    # twisting

    def twist_checks(self, E: WeierstrassCurve, result: Optional[Classification] = None) -> List[StepResult]:
        """classify(E_y) against twist(classify(E), eps_y) for every ramified quadratic y."""
        result = result or self.classify(E)
        steps: List[StepResult] = []
        if result.kind in (EXCEPTIONAL, STEINBERG) or result.reduction.j_valuation < 0:
            return steps
        for Q in self._ramified():
            expected = self.inventory.twist(result.label, Q.index)
            got = self.classify(E.quadratic_twist(Q.y)).label
            steps.append(check(f"twist:{Q.index}", got == expected, f"{result.label} twisted by y{Q.index}: {got}",
                               expected=expected, got=got))
        return steps


def classify(E: WeierstrassCurve, catalog: Optional[Catalog] = None, *, strict: bool = False) -> Classification:
    F = catalog.F if catalog is not None else E.K.ground
    return Classifier(F, catalog, strict=strict).classify(E)


# realization


def _pool(F: LocalField) -> List[str]:
    p = F.p
    units = ["1", "-1", "a", "-a", "(1+a)", "-(1+a)"]
    out = ["0"] + units
    for k in range(1, 9):
        out.extend(f"{p}^{k}*{u}" for u in units)
    return out


def candidate_models(F: LocalField, budget: int, seed: Optional[int] = None) -> Iterator[str]:
    """Curve texts a1;a2;a3;a4;a6: short models y^2 = x^3 + a4 x + a6 first, then seeded random models."""
    pool = _pool(F)
    emitted = 0
    for a6 in pool:
        for a4 in pool:
            if emitted >= budget:
                return
            emitted += 1
            yield f"0;0;0;{a4};{a6}"
    rng = random.Random(conf.get("INERTIA_SEED") if seed is None else seed)
    small = pool[:7]
    while emitted < budget:
        emitted += 1
        a1, a3 = rng.choice(small), rng.choice(small)
        yield ";".join([a1, rng.choice(pool), a3, rng.choice(pool), rng.choice(pool)])


@dataclass
class Realization:
    witnesses: Dict[str, str]
    uncovered: List[str]
    scanned: int
    failures: int

    def rows(self) -> List[Tuple[str, str]]:
        return sorted(self.witnesses.items())


def realize(
    classifier: Classifier,
    *,
    budget: Optional[int] = None,
    seed: Optional[int] = None,
    include_exceptional: bool = False,
    targets: Optional[Sequence[str]] = None,
) -> Realization:
    """Scan small models until every target label has a witness curve (first witness wins)."""
    budget = conf.get("INERTIA_REALIZE_BUDGET") if budget is None else budget
    if targets is None:
        targets = [t.label for t in classifier.inventory if include_exceptional or t.kind != EXCEPTIONAL]
    wanted = set(targets)
    witnesses: Dict[str, str] = {}
    scanned = failures = 0
    for text in candidate_models(classifier.F, budget, seed):
        if wanted <= set(witnesses):
            break
        scanned += 1
        try:
            label = classifier.classify(classifier.curve(text)).label
        except InertiaError as exc:
            failures += 1
            logger.debug("%s: %s", text, exc)
            continue
        if label in wanted and label not in witnesses:
            witnesses[label] = text
            logger.info("%s realized by %s", label, text)
    uncovered = [label for label in targets if label not in witnesses]
    if uncovered:
        logger.warning("%d labels without a witness after %d models", len(uncovered), scanned)
    return Realization(witnesses, uncovered, scanned, failures)


def tame_family(F: LocalField, ks: Sequence[int] = range(1, 12)) -> Iterator[Tuple[str, WeierstrassCurve]]:
    """y^2 = x^3 + pi^k x and y^2 = x^3 + pi^k."""
    pi = F.uniformizer
    for k in ks:
        yield f"x^3+π^{k}x", WeierstrassCurve(F, [0, 0, 0, pi ** k, 0])
        yield f"x^3+π^{k}", WeierstrassCurve(F, [0, 0, 0, 0, pi ** k])
