"""
Acceptance checks against the published tables.

Each check returns StepResults; ``verify_tables`` runs the ones that apply to a
field tag.  Checks marked slow enumerate extensions or need a built catalog.
"""
import logging
from collections import Counter
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from sympy import factorint

from . import conf
from .catalog import Catalog
from .chartype import PRINCIPAL_SERIES, SC_RAMIFIED, SC_TRIPLY, SC_UNRAMIFIED, TypeInventory, enumerate_types
from .classify import Classifier, tame_family
from .curves import WeierstrassCurve
from .exceptions import InertiaError
from .expressions import element, polynomial
from .extensions import adjoin_root, enumerate_classes, mass, unramified_extension
from .localfield import LocalField, field_from_tag, make_base_field
from .polynomials import Polynomial, roots_in_field
from .quadratics import inertia_classes, quadratic_inventory
from .steps import ERROR, OK, WARN, StepResult, check
from .tables import (
    ANCHORED_CURVES,
    EXCEPTIONAL_ANCHOR,
    EXCEPTIONAL_CENSUS,
    Q4_EPSILON_SIGNS,
    Q4_QUADRATIC_TABLES,
    Q4_TRIPLY_IMPRIMITIVE,
    Q4_TWIST_CHARACTERS,
    Q4_UNITS,
    Q9_QUADRATIC_TABLES,
    Q9_UNITS,
    TAME_PATTERN,
    epsilon_signs,
    published_coordinates,
)
from .unitgrp import con_group, unit_quotient

logger = logging.getLogger(__name__)

# (kind, field index, conductor exponent, e) -> number of types, twists excluded
Q9_TYPE_COUNTS = {
    (PRINCIPAL_SERIES, 0, 2, 4): 1,
    (PRINCIPAL_SERIES, 0, 4, 3): 4,
    (SC_RAMIFIED, 1, 3, 12): 4,
    (SC_RAMIFIED, 1, 5, 12): 9,
    (SC_RAMIFIED, 2, 3, 12): 4,
    (SC_UNRAMIFIED, 3, 4, 3): 4,
}
Q9_TWISTS = 8

Q4_TYPE_COUNTS = {
    (PRINCIPAL_SERIES, 0, 2, 3): 1,
    (PRINCIPAL_SERIES, 0, 6, 4): 4,
    (PRINCIPAL_SERIES, 0, 8, 4): 8,
    (SC_UNRAMIFIED, 15, 6, 4): 4,
    (SC_UNRAMIFIED, 15, 8, 4): 8,
}
Q4_TRIPLY_COUNTS = {5: 4, 6: 4, 8: 24}

# (field tag, degree over the base, over the i-th quadratic or 0)
MASS_CASES = (("Q9", 2, 0), ("Q9", 3, 0), ("Q4", 2, 0), ("Q4", 3, 0), ("Q4", 4, 0), ("Q9", 2, 1))

# multiplicative at 2 and 3 with v(Delta) = 2; the second curve is good at both
TATE_CURVE = "1;0;0;0;36"
GOOD_CURVE = "0;0;1;-1;0"


def primary_parts(invariants: Sequence[int]) -> List[int]:
    """Elementary divisors of the abelian group with the given cyclic factors."""
    out = []
    for d in invariants:
        out.extend(p ** k for p, k in factorint(int(d)).items())
    return sorted(out)


def _same_group(got: Sequence[int], want: Sequence[int]) -> bool:
    return primary_parts(got) == primary_parts(want)


# quadratic inventories


def check_quadratics(F: LocalField) -> List[StepResult]:
    inventory = quadratic_inventory(F)
    conductors = [Q.conductor for Q in inventory]
    if F.p == 3:
        want = [1, 1, 0]
    else:
        want = [2] * 6 + [3] * 8 + [0]
    return [
        check("quadratics", len(inventory) == len(want), f"{len(inventory)} quadratic extensions of {F.name}"),
        check("quadratics:conductors", conductors == want, f"m(psi_i) = {conductors}", got=conductors, expected=want),
    ]


def check_epsilon_table(F: LocalField) -> List[StepResult]:
    got = epsilon_signs(F)
    bad = sorted(i for i, signs in Q4_EPSILON_SIGNS.items() if got.get(i) != signs)
    return [check("epsilon", not bad, f"{len(bad)} rows of the eps table differ", rows=bad)]


# unit groups


def _level_rows(F: LocalField) -> List[Tuple[str, Callable[[int], List[int]], Dict[int, Tuple[int, ...]]]]:
    if F.p == 3:
        base, tables = Q9_UNITS, Q9_QUADRATIC_TABLES
    else:
        base, tables = Q4_UNITS, Q4_QUADRATIC_TABLES
    rows = [("units", lambda f: unit_quotient(F, f)[1].invariants, base.levels)]
    quadratics = quadratic_inventory(F)
    for index, table in tables.items():
        K = quadratics[index - 1].field
        rows.append((f"ConG(K{index})", lambda f, K=K: con_group(K, f, F).invariants, table.levels))
    return rows


def check_unit_groups(F: LocalField) -> List[StepResult]:
    steps = []
    for name, groups, levels in _level_rows(F):
        bad = {}
        for f, want in sorted(levels.items()):
            got = groups(f)
            if not _same_group(got, want):
                bad[f] = {"got": list(got), "expected": list(want)}
        steps.append(check(f"groups:{name}", not bad, f"{name}: {len(levels) - len(bad)}/{len(levels)} levels agree", levels=bad))
    return steps


def check_published_bases(F: LocalField) -> List[StepResult]:
    rows = published_coordinates(F)
    bad = {name: {"got": list(got), "expected": list(want)} for name, got, want in rows if tuple(got) != tuple(want)}
    return [check("groups:bases", not bad, f"{len(rows) - len(bad)}/{len(rows)} published coordinates agree", rows=bad)]


# type counts


def _counts(inventory: TypeInventory) -> Counter:
    return Counter(
        (t.kind, t.field or 0, t.conductor, t.e)
        for t in inventory if t.characters and t.base is None and t.kind != SC_TRIPLY
    )


def check_type_counts(inventory: TypeInventory) -> List[StepResult]:
    F = inventory.F
    counts = _counts(inventory)
    twists = sum(1 for t in inventory if t.base is not None)
    steps = []
    if F.p == 3:
        table, n_twists = Q9_TYPE_COUNTS, Q9_TWISTS
    else:
        table, n_twists = Q4_TYPE_COUNTS, len(Q4_TWIST_CHARACTERS)
    for key, want in table.items():
        got = counts.get(key, 0)
        kind, index, m, e = key
        steps.append(check(f"types:{kind}", got == want, f"{kind} K{index} m={m} e={e}: {got} (expected {want})"))
    steps.append(check("types:twists", twists == n_twists, f"{twists} twisted types (expected {n_twists})"))
    if F.p == 2:
        steps.extend(check_triply_imprimitive(inventory))
    return steps


def check_triply_imprimitive(inventory: TypeInventory) -> List[StepResult]:
    tri = inventory.select(kind=SC_TRIPLY)
    by_m = Counter(t.conductor for t in tri)
    got_sets = Counter((t.partners, t.conductor) for t in tri)
    want_sets = Counter((partners, m) for partners, _, m, _ in Q4_TRIPLY_IMPRIMITIVE)
    return [
        check("triply:counts", dict(by_m) == Q4_TRIPLY_COUNTS, f"triply imprimitive by conductor {dict(sorted(by_m.items()))}"),
        check("triply:partners", got_sets == want_sets, "partner sets agree with the published table",
              missing=[list(k) for k in (want_sets - got_sets)], extra=[list(k) for k in (got_sets - want_sets)]),
    ]


# families


def check_steinberg_family(classifier: Classifier) -> List[StepResult]:
    """Twists of a Tate curve and of a good curve by every ramified quadratic class."""
    steps = []
    inventory = classifier.inventory
    tate_curve = classifier.curve(TATE_CURVE)
    good_curve = classifier.curve(GOOD_CURVE)
    for Q in inertia_classes(inventory.quadratics):
        want_m = 2 * Q.conductor
        for base, label in ((tate_curve, "τ_St"), (good_curve, "trivial")):
            expected = inventory.twist(label, Q.index)
            got = classifier.classify(base.quadratic_twist(Q.y))
            ok = got.label == expected and got.conductor == want_m
            steps.append(check(f"family:{label}:{Q.index}", ok, f"y{Q.index}: {got.label} v(N)={got.conductor}",
                               expected=expected, conductor=want_m))
    return steps


def check_tame(primes: Sequence[int] = (5, 7, 11, 13), degrees: Sequence[int] = (1, 2)) -> List[StepResult]:
    steps = []
    for p in primes:
        for n in degrees:
            F = make_base_field(p, n)
            classifier = Classifier(F)
            pi = F.uniformizer
            cases = (
                (4, WeierstrassCurve(F, [0, 0, 0, pi, 0])),
                (6, WeierstrassCurve(F, [0, 0, 0, 0, pi])),
                (3, WeierstrassCurve(F, [0, 0, 0, 0, pi * pi])),
            )
            pattern = TAME_PATTERN[p % 12] if n % 2 else TAME_PATTERN[1]
            for e, E in cases:
                got = classifier.classify(E)
                want = "τ_" + pattern[e]
                ok = got.e == e and got.label.startswith(want)
                steps.append(check(f"tame:{p}^{n}:e{e}", ok, f"{F.name} e={e}: {got.label}", expected_kind=want))
    return steps


def check_tame_family(F: LocalField) -> List[StepResult]:
    """Every curve of the pi^k family classifies with its type conductor equal to v(N)."""
    classifier = Classifier(F)
    bad = []
    for name, E in tame_family(F):
        result = classifier.classify(E)
        if not result.consistent:
            bad.append(name)
    return [check(f"tame:{F.name}:conductors", not bad, f"{len(bad)} conductor mismatches", curves=bad)]


# enumeration


def check_mass(cases: Sequence[Tuple[str, int, int]] = MASS_CASES, *,
               samples_per_class: Optional[int] = None) -> List[StepResult]:
    """Mass formula per case, then a recount that samples every class blindly.

    The recount never looks at the mass target: it draws a fixed number of
    candidates per discriminant class and counts the distinct fields. More
    fields than the mass-stopped run means the run missed some (ERROR); fewer
    means the sample was too small to see them all (WARN).
    """
    seed = conf.get("INERTIA_SEED") + 1
    steps = []
    for tag, n, index in cases:
        F = field_from_tag(tag)
        K = quadratic_inventory(F)[index - 1].field if index else F
        run = enumerate_classes(K, n)
        total = mass(run.fields, n)
        stopped = sorted({cls.stopped for cls in run.classes})
        steps.append(check(f"mass:{K.name}:{n}", total == n,
                           f"{len(run.fields)} fields of degree {n} over {K.name}, mass {total}", stopped=stopped))
        per_class = samples_per_class or conf.get("INERTIA_ENUMERATION_BUDGET") // max(len(run.classes), 1)
        blind = enumerate_classes(K, n, seed=seed, samples_per_class=per_class)
        want, got = run.counts(), blind.counts()
        extra = {str(d): got[d] - want[d] for d in want if got[d] > want[d]}
        short = {str(d): want[d] - got[d] for d in want if got[d] < want[d]}
        name = f"mass:{K.name}:{n}:recount"
        message = f"{sum(got.values())}/{sum(want.values())} fields seen in {per_class} samples per class"
        if extra:
            steps.append(StepResult(name, ERROR, message, {"extra": extra, "short": short}))
        elif short:
            steps.append(StepResult(name, WARN, message, {"short": short}))
        else:
            steps.append(StepResult(name, OK, message, {}))
    return steps


# anchored rows


def _contains_root(L: LocalField, g: Polynomial) -> bool:
    if roots_in_field(L, g.map(L)):
        return True
    U = unramified_extension(L, 2, name=f"{L.name}·u")
    return bool(roots_in_field(U, g.map(U)))


def check_anchored(catalog: Catalog) -> List[StepResult]:
    classifier = Classifier.for_catalog(catalog)
    F = catalog.F
    steps = []
    for name, row in ANCHORED_CURVES.items():
        if row["field"] != catalog.tag:
            continue
        E = classifier.curve(row["curve"], row["gen_poly"])
        result = classifier.classify(E)
        ok = (result.label, result.conductor, result.e) == (row["label"], row["conductor"], row["e"])
        steps.append(check(f"anchor:{name}", ok, f"{name}: {result.label} v(N)={result.conductor} e={result.e}"))
        if result.witness is None:
            continue
        L = result.witness.local_field()
        g = polynomial(row["inertia_field"], F)
        steps.append(check(f"anchor:{name}:field", _contains_root(L, g), f"{name}: witness {L.name} against the published inertia field"))
        if "cubic" in row:
            cubic = polynomial(row["cubic"], F)
            m_cubic = result.witness.extra.get("m_cubic")
            ok = bool(roots_in_field(L, cubic.map(L))) and m_cubic == row["cubic_conductor"]
            steps.append(check(f"anchor:{name}:cubic", ok, f"{name}: cubic subfield, m over the cubic = {m_cubic}"))
    return steps


def check_exceptional_anchor(F: LocalField) -> List[StepResult]:
    """Unit quotient of the published compositum over the cubic field of the exceptional anchor."""
    anchor = EXCEPTIONAL_ANCHOR
    K = adjoin_root(F, Polynomial.from_ints(F, list(anchor["cubic"])), name="C", gen_name="alpha")
    symbols = {"alpha": K.root}
    M = adjoin_root(K, polynomial(anchor["quadratic"], K, "beta", symbols), name="M", gen_name="beta")
    symbols = {"alpha": M(K.root), "beta": M.root}
    _, ctx = unit_quotient(M, anchor["level"])
    g = element(anchor["generator"], M, symbols)
    order = ctx.order_of(ctx.dlog(g))
    return [
        check("exceptional:anchor-group", _same_group(ctx.invariants, anchor["invariants"]),
              f"compositum units at level {anchor['level']}: {ctx.invariants}"),
        check("exceptional:anchor-generator", order % anchor["value"].denominator == 0,
              f"published generator has order {order}"),
    ]


def check_exceptional_catalog(catalog: Catalog) -> List[StepResult]:
    entries = catalog.section("exceptional")
    census = dict(sorted(Counter(x.conductor for x in entries).items()))
    return [
        check("exceptional:fields", len(entries) == EXCEPTIONAL_CENSUS["fields_unramified_closure"],
              f"{len(entries)} exceptional fields up to unramified twins"),
        check("exceptional:conductors", census == EXCEPTIONAL_CENSUS["conductors"], f"conductor census {census}"),
    ]


def verify_tables(tag: str, *, catalog: Optional[Catalog] = None, slow: bool = False) -> List[StepResult]:
    """Every check that applies to the field tag; failures are reported, never raised."""
    F = catalog.F if catalog is not None else field_from_tag(tag)
    runs: List[Tuple[str, Callable[[], List[StepResult]]]] = []
    if F.p >= 5:
        runs.append(("tame", lambda: check_tame_family(F)))
    else:
        inventory = catalog.inventory if catalog is not None else None
        runs.append(("quadratics", lambda: check_quadratics(F)))
        if F.p == 2:
            runs.append(("epsilon", lambda: check_epsilon_table(F)))
        runs.append(("groups", lambda: check_unit_groups(F)))
        runs.append(("bases", lambda: check_published_bases(F)))
        runs.append(("types", lambda: check_type_counts(inventory or enumerate_types(F))))
        runs.append(("families", lambda: check_steinberg_family(Classifier(F, catalog))))
        if catalog is not None:
            runs.append(("anchors", lambda: check_anchored(catalog)))
            if F.p == 2:
                runs.append(("exceptional", lambda: check_exceptional_catalog(catalog)))
        if slow and F.p == 2:
            runs.append(("exceptional-anchor", lambda: check_exceptional_anchor(F)))
    if slow:
        runs.append(("mass", lambda: check_mass([c for c in MASS_CASES if c[0] == tag])))
        runs.append(("tame-cells", check_tame))
    steps: List[StepResult] = []
    for name, run in runs:
        try:
            steps.extend(run())
        except InertiaError as exc:
            logger.exception("check %s failed", name)
            steps.append(StepResult(name, ERROR, f"{name} raised {type(exc).__name__}", {"error": str(exc)}))
    return steps
