"""
Published reference data: generators of the unit quotients, group structures per
level, characters by exponent triples, the eps table, the triply imprimitive
partner table and the anchored curves.

Everything here is data plus the translation into canonical coordinates; the
acceptance checks that compare it with computed values live in ``verify``.
"""
import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .exceptions import CharacterError, InertiaError
from .expressions import element
from .localfield import FieldElement, LocalField
from .quadratics import QuadraticExtension, quadratic_inventory
from .unitgrp import DlogContext, con_group, dlog_in_basis, unit_quotient

logger = logging.getLogger(__name__)

Vector = Tuple[int, ...]


@dataclass(frozen=True)
class GeneratorTable:
    """Published generators of one unit quotient and the roots of unity characters use on them.

    ``levels`` maps f to the published invariant factors of the quotient at level f;
    ``roots`` gives, per generator, the n with chi(g) = zeta_n^r.
    """

    field: int
    level: int
    generators: Tuple[str, ...]
    roots: Tuple[int, ...]
    levels: Dict[int, Tuple[int, ...]]


# Q_9, u = 1 + a, a = sqrt(2)

Q9_UNITS = GeneratorTable(0, 2, ("1+a", "4"), (6, 3), {2: (24, 3), 1: (8,)})
Q9_UNITS_ORDER4 = GeneratorTable(0, 2, ("1+a", "4"), (4, 3), {2: (24, 3), 1: (8,)})

Q9_QUADRATIC_TABLES: Dict[int, GeneratorTable] = {
    1: GeneratorTable(1, 4, ("a*z-8*z+5*a+2", "-a*z+3*a+1", "3*a*z-6*z-5*a-6"), (6, 3, 3),
                      {4: (18, 3, 3), 3: (6, 3), 2: (6, 3), 1: (2,)}),
    2: GeneratorTable(2, 4, ("-a*z+z-2*a+1", "-4*z-3*a-2"), (6, 3),
                      {4: (18, 9), 3: (6, 3), 2: (6, 3), 1: (2,)}),
    3: GeneratorTable(3, 2, ("28*a*z-21*z+8", "3*a*z+6*z+1"), (6, 3),
                      {2: (30, 3), 1: (10,)}),
}

# published j order: key (kind, field, m(chi), order) -> exponent tuples on the table generators
Q9_PUBLISHED: Dict[Tuple, Tuple[GeneratorTable, List[Vector]]] = {
    ("ps", 0, 2, 3): (Q9_UNITS, [(0, 1), (2, 0), (2, 1), (2, 2)]),
    ("ps", 0, 1, 4): (Q9_UNITS_ORDER4, [(1, 0)]),
    ("sc", 1, 2, 6): (Q9_QUADRATIC_TABLES[1], [(1, 0, 0), (1, 1, 0), (1, 2, 0), (3, 1, 0)]),
    ("sc", 1, 4, 6): (Q9_QUADRATIC_TABLES[1], [(3, 0, 1), (1, 0, 1), (1, 0, 2), (1, 1, 1), (1, 1, 2),
                                                (1, 2, 1), (1, 2, 2), (3, 1, 1), (3, 1, 2)]),
    ("sc", 2, 2, 6): (Q9_QUADRATIC_TABLES[2], [(1, 0), (1, 2), (1, 1), (3, 1)]),
    ("sc", 3, 2, 3): (Q9_QUADRATIC_TABLES[3], [(2, 1), (2, 2), (0, 1), (2, 0)]),
}

# Q_4, b = sqrt(5), phi = (1 + b)/2

Q4_UNITS = GeneratorTable(0, 4, ("(3*b+11)/2", "2+b", "-1"), (4, 4, 2),
                          {4: (24, 4, 2), 3: (12, 2, 2), 2: (6, 2), 1: (3,)})
Q4_UNITS_ORDER3 = GeneratorTable(0, 4, ("(3*b+11)/2", "2+b", "-1"), (3, 1, 1),
                                 {4: (24, 4, 2), 3: (12, 2, 2), 2: (6, 2), 1: (3,)})
Q4_UNITS_ORDER6 = GeneratorTable(0, 4, ("(3*b+11)/2", "2+b", "-1"), (6, 2, 2),
                                 {4: (24, 4, 2), 3: (12, 2, 2), 2: (6, 2), 1: (3,)})

_LEVELS_M2 = {6: (8, 4, 4), 5: (4, 4, 2), 4: (4, 4, 2), 3: (4, 2), 2: (2, 2), 1: ()}
_LEVELS_M2_RANK4 = {6: (8, 4, 2, 2), 5: (4, 2, 2, 2), 4: (4, 2, 2, 2), 3: (4, 2), 2: (2, 2), 1: ()}
_LEVELS_M3 = {5: (4, 4, 2), 4: (4, 4), 3: (2, 2), 2: (2, 2), 1: ()}

Q4_QUADRATIC_TABLES: Dict[int, GeneratorTable] = {
    1: GeneratorTable(1, 6, ("z+(b+3)/2", "z+2", "(1-b)*z+1"), (4, 4, 4), _LEVELS_M2),
    2: GeneratorTable(2, 6, ("b*z+(b+3)/2", "z+2", "(b+3)*z+1"), (4, 4, 4), _LEVELS_M2),
    3: GeneratorTable(3, 6, ("(-3*b+1)/2*z-1", "(b-3)*z+b-2", "-4*z-(3*b+3)/2", "2-2*b-(b+1)/2*z"),
                      (4, 4, 2, 2), _LEVELS_M2_RANK4),
    4: GeneratorTable(4, 6, ("(2*b-5)*z-(b+3)/2", "(b-1)*z-b+2", "(-3*b+3)/2", "(-3*b+3)/2*z+4"),
                      (4, 4, 2, 2), _LEVELS_M2_RANK4),
    5: GeneratorTable(5, 6, ("(-b-3)/2*z+b-2", "(b+1)/2*z-b+3", "(b+3)*z-b-2"), (4, 4, 4), _LEVELS_M2),
    6: GeneratorTable(6, 6, ("(-3*b-1)/2*z-1", "(b+1)/2*z+b-3", "(b+3)*z-b-2"), (4, 4, 4), _LEVELS_M2),
    7: GeneratorTable(7, 5, ("(3*b+3)/2", "(b+2)*z-(3*b+1)/2", "-z+1"), (4, 4, 2), _LEVELS_M3),
    8: GeneratorTable(8, 5, ("(b-1)/2", "z+(b+5)/2", "-b*z+b+2"), (4, 4, 2), _LEVELS_M3),
    9: GeneratorTable(9, 5, ("(b-1)/2", "z+(3*b-1)/2", "z+1"), (4, 4, 2), _LEVELS_M3),
    10: GeneratorTable(10, 5, ("(-b+7)/2", "(b+2)*z-(3*b+1)/2", "z+1"), (4, 4, 2), _LEVELS_M3),
    11: GeneratorTable(11, 5, ("2*b+1", "z+(3*b+5)/2", "(b+2)*z+b-2"), (4, 4, 2), _LEVELS_M3),
    12: GeneratorTable(12, 5, ("(-3*b-5)/2", "z+(3*b-1)/2", "z+1"), (4, 4, 2), _LEVELS_M3),
    13: GeneratorTable(13, 5, ("(-b-1)/2", "b*z-(3*b+1)/2", "z+1"), (4, 4, 2), _LEVELS_M3),
    14: GeneratorTable(14, 5, ("(-b-1)/2", "-b*z-(3*b+1)/2", "-z+1"), (4, 4, 2), _LEVELS_M3),
    15: GeneratorTable(15, 4, ("(3*b+4)/2*z-(5*b+6)/2", "(3*b-1)/2*z+2*b+8", "(-3*b+5)/2*z-2*b-10"),
                       (4, 4, 2), {4: (40, 4, 2), 3: (20, 2, 2), 2: (10, 2), 1: (5,)}),
}

Q4_PUBLISHED: Dict[Tuple, Tuple[GeneratorTable, List[Vector]]] = {
    ("ps", 0, 1, 3): (Q4_UNITS_ORDER3, [(1, 0, 0)]),
    ("ps", 0, 3, 4): (Q4_UNITS, [(1, 3, 1), (1, 3, 0), (1, 1, 1), (1, 1, 0)]),
    ("ps", 0, 4, 4): (Q4_UNITS, [(2, 1, 0), (1, 2, 0), (1, 0, 1), (2, 1, 1), (0, 1, 1), (1, 2, 1),
                                 (0, 1, 0), (1, 0, 0)]),
    ("sc", 15, 3, 4): (Q4_QUADRATIC_TABLES[15], [(1, 0, 0), (1, 2, 1), (1, 2, 0), (1, 0, 1)]),
    ("sc", 15, 4, 4): (Q4_QUADRATIC_TABLES[15], [(1, 3, 1), (0, 1, 0), (1, 1, 1), (2, 1, 0), (1, 1, 0),
                                                 (2, 1, 1), (1, 3, 0), (0, 1, 1)]),
}

# exponents of base units on the published generators g_1, g_2, ... of ConG(K_i, f): (p, i, f) -> rows
PUBLISHED_COORDINATES: Dict[Tuple[int, int, int], List[Tuple[str, Vector]]] = {
    (3, 1, 4): [("1+a", (9, 0, 0))],
    (2, 1, 6): [("(3*b+11)/2", (4, 2, 0))],
}

# eps_i(u_1), eps_i(u_2), eps_i(u_3) as signs
Q4_EPSILON_SIGNS: Dict[int, Tuple[int, int, int]] = {}
for _pair, _signs in (((1, 2), (-1, 1, -1)), ((3, 4), (-1, -1, 1)), ((5, 6), (1, -1, -1)),
                      ((7, 8), (1, -1, 1)), ((9, 10), (-1, -1, -1)), ((11, 12), (-1, 1, 1)),
                      ((13, 14), (1, 1, -1)), ((15,), (1, 1, 1))):
    for _i in _pair:
        Q4_EPSILON_SIGNS[_i] = _signs

# order-6 characters eta(r,s,t) = (zeta_6^r, (-1)^s, (-1)^t) on u_1, u_2, u_3 for eps_i (x) tau_ps,4(1,1,3)
Q4_TWIST_CHARACTERS: Dict[int, Vector] = {
    1: (2, 1, 1), 3: (5, 1, 0), 5: (5, 0, 1), 7: (2, 1, 0), 9: (5, 1, 1), 11: (5, 0, 0), 13: (2, 0, 1),
}

# triply imprimitive types: (partners, j, conductor exponent, characters on each partner)
Q4_TRIPLY_IMPRIMITIVE: List[Tuple[Tuple[int, int, int], int, int, Tuple[Vector, Vector, Vector]]] = [
    ((1, 3, 5), 1, 5, ((1, 1, 2), (1, 0, 1, 1), (1, 1, 0))),
    ((1, 4, 6), 1, 5, ((1, 3, 2), (1, 0, 1, 1), (1, 3, 0))),
    ((2, 3, 6), 1, 5, ((1, 3, 2), (1, 0, 1, 0), (1, 1, 0))),
    ((2, 4, 5), 1, 5, ((1, 1, 2), (1, 0, 1, 0), (1, 3, 0))),
    ((1, 3, 5), 2, 6, ((1, 1, 0), (1, 2, 1, 1), (1, 1, 2))),
    ((1, 4, 6), 2, 6, ((1, 3, 0), (1, 2, 1, 0), (1, 3, 2))),
    ((2, 3, 6), 2, 6, ((1, 1, 0), (1, 2, 1, 0), (1, 1, 2))),
    ((2, 4, 5), 2, 6, ((1, 3, 0), (1, 2, 1, 1), (1, 3, 2))),
    ((5, 8, 13), 1, 8, ((1, 1, 1), (1, 1, 1), (1, 2, 1))),
    ((1, 8, 10), 1, 8, ((1, 1, 3), (1, 2, 1), (1, 3, 1))),
    ((2, 12, 14), 1, 8, ((0, 1, 1), (1, 2, 1), (1, 1, 1))),
    ((3, 8, 12), 1, 8, ((0, 1, 0, 1), (0, 1, 1), (0, 1, 1))),
    ((1, 7, 9), 1, 8, ((1, 3, 3), (1, 3, 1), (1, 0, 1))),
    ((2, 12, 14), 2, 8, ((2, 1, 3), (1, 0, 1), (1, 3, 1))),
    ((3, 7, 11), 1, 8, ((0, 1, 0, 0), (0, 1, 1), (2, 1, 1))),
    ((5, 7, 14), 1, 8, ((1, 3, 3), (1, 2, 1), (1, 0, 1))),
    ((2, 11, 13), 1, 8, ((2, 1, 1), (1, 1, 1), (1, 1, 1))),
    ((6, 10, 11), 1, 8, ((1, 3, 3), (1, 2, 1), (1, 2, 1))),
    ((3, 9, 14), 1, 8, ((1, 1, 0, 0), (2, 1, 1), (2, 1, 1))),
    ((1, 8, 10), 2, 8, ((1, 1, 1), (1, 0, 1), (1, 1, 1))),
    ((2, 11, 13), 2, 8, ((0, 1, 3), (1, 3, 1), (1, 3, 1))),
    ((5, 8, 13), 2, 8, ((1, 1, 3), (1, 3, 1), (1, 0, 1))),
    ((3, 8, 12), 2, 8, ((2, 1, 0, 1), (2, 1, 1), (2, 1, 1))),
    ((3, 9, 14), 2, 8, ((1, 3, 0, 0), (0, 1, 1), (0, 1, 1))),
    ((5, 7, 14), 2, 8, ((1, 3, 1), (1, 0, 1), (1, 2, 1))),
    ((6, 10, 11), 2, 8, ((1, 3, 1), (1, 0, 1), (1, 0, 1))),
    ((3, 10, 13), 1, 8, ((1, 3, 0, 1), (2, 1, 1), (2, 1, 1))),
    ((1, 7, 9), 2, 8, ((1, 3, 1), (1, 1, 1), (1, 2, 1))),
    ((3, 7, 11), 2, 8, ((2, 1, 0, 0), (2, 1, 1), (0, 1, 1))),
    ((3, 10, 13), 2, 8, ((1, 1, 0, 1), (0, 1, 1), (0, 1, 1))),
    ((6, 9, 12), 1, 8, ((1, 1, 1), (1, 1, 1), (1, 1, 1))),
    ((6, 9, 12), 2, 8, ((1, 1, 3), (1, 3, 1), (1, 3, 1))),
]

# anchored curves: a1;a2;a3;a4;a6 over the named base, expected data and the inertia field
ANCHORED_CURVES = {
    "wild_q9": {
        "field": "Q9",
        "curve": "0;3^3*a;0;3^3*a;2*3^3",
        "gen_poly": None,
        "conductor": 3,
        "e": 12,
        "label": "τ_sc(3+3√2,2,6)_1",
        "inertia_field": "x^12+(6*a+6)*x^4+6*a+3",
    },
    "exceptional_q4": {
        "field": "Q4",
        "curve": "0;2^2*(a+1);0;2*a;2^2",
        "gen_poly": "x^2-x-1",
        "conductor": 7,
        "e": 24,
        "label": "τ_ex(7,24)_1",
        "inertia_field": "x^24+4*x^21+4*x^12+8*phi*x^9+4*x^6+(8*phi+8)*x^3+2",
        "cubic": "x^3+x^2+x+2",
        "cubic_conductor": 17,
    },
}

# the quadratic step of the anchor tower over Q_4(alpha), alpha^3 + alpha^2 + alpha + 2 = 0, and one of its character values
EXCEPTIONAL_ANCHOR = {
    "cubic": (2, 1, 1, 1),
    "quadratic": "beta^2+alpha^3*phi*beta+((phi+1)*alpha^2-2*phi*alpha+1)*alpha",
    "level": 11,
    "invariants": (16, 16, 4, 4, 4, 4, 3, 2, 2, 2, 2),
    "generator": "((phi+1)*alpha^2+(-phi-1)*alpha-1)*beta-phi*alpha^2+(-phi+2)*alpha-1",
    "value": Fraction(1, 4),
}

EXCEPTIONAL_CENSUS = {
    "cubics": 4,
    "orbits_per_cubic": 5,
    "square_class_dimension": 26,
    "fixed_dimensions": (4, 5),
    "fields": 192,
    "fields_unramified_closure": 96,
    "conductors": {3: 3, 4: 9, 5: 8, 6: 28, 7: 48},
}

# tame types by p mod 12 for odd residue degree: e -> kind initial
TAME_PATTERN = {
    1: {3: "ps", 4: "ps", 6: "ps"},
    5: {3: "sc", 4: "ps", 6: "sc"},
    7: {3: "ps", 4: "sc", 6: "ps"},
    11: {3: "sc", 4: "sc", 6: "sc"},
}


# translation into canonical coordinates


def table_elements(table: GeneratorTable, K: LocalField, z: Optional[FieldElement] = None) -> List[FieldElement]:
    symbols = {"z": z} if z is not None else {}
    return [element(text, K, symbols) for text in table.generators]


def character_from_values(ctx: DlogContext, elements: Sequence[FieldElement], values: Sequence[Fraction]):
    """The character of ctx taking ``values`` (in Q/Z) on ``elements``.

    The elements need only generate the quotient; a CharacterError is raised when
    they do not, or when the values are inconsistent with their relations.
    """
    from .chartype import Character

    images = [ctx.dlog(x) for x in elements]
    zero = tuple(0 for _ in ctx.invariants)
    reached: Dict[Vector, Fraction] = {zero: Fraction(0)}
    frontier = [zero]
    while frontier:
        nxt = []
        for vec in frontier:
            for img, val in zip(images, values):
                w = ctx.add(vec, img)
                v = (reached[vec] + val) % 1
                if w not in reached:
                    reached[w] = v
                    nxt.append(w)
                elif reached[w] != v:
                    raise CharacterError("published values are inconsistent with the relations")
        frontier = nxt
    if len(reached) != ctx.group.order:
        raise CharacterError("published elements do not generate the quotient")
    unit = [tuple(int(i == j) for j in range(len(ctx.invariants))) for i in range(len(ctx.invariants))]
    return Character(ctx, [reached[ctx.reduce(u)] for u in unit])


def published_character(ctx: DlogContext, table: GeneratorTable, exponents: Sequence[int],
                        K: LocalField, z: Optional[FieldElement] = None):
    values = [Fraction(r, n) for r, n in zip(exponents, table.roots)]
    return character_from_values(ctx, table_elements(table, K, z), values)


def _context(F: LocalField, index: int) -> Tuple[DlogContext, LocalField, Optional[QuadraticExtension]]:
    from .chartype import conductor_bound

    bound = conductor_bound(F)
    if index == 0:
        return unit_quotient(F, bound // 2)[1], F, None
    Q = quadratic_inventory(F)[index - 1]
    f = bound - Q.conductor if Q.ramified else bound // 2
    return con_group(Q.field, f, F), Q.field, Q


def published_tables(F: LocalField) -> Dict[Tuple, Tuple[GeneratorTable, List[Vector]]]:
    if F.p == 3 and F.degree == 2:
        return Q9_PUBLISHED
    if F.p == 2 and F.degree == 2:
        return Q4_PUBLISHED
    return {}


def published_orders(F: LocalField) -> Dict[Tuple, List[Vector]]:
    """Class keys in published j order, keyed ("ps", m, order) or ("sc", index, m, order)."""
    out: Dict[Tuple, List[Vector]] = {}
    for (kind, index, m, order), (table, vectors) in published_tables(F).items():
        try:
            ctx, K, Q = _context(F, index)
            keys = [published_character(ctx, table, vec, K, Q.z if Q else None).class_key() for vec in vectors]
        except InertiaError as exc:
            logger.warning("%s: published table %s unusable, falling back to sorted order: %s",
                           F.name, (kind, index, m, order), exc)
            continue
        key = ("ps", m, order) if kind == "ps" else ("sc", index, m, order)
        out[key] = keys
    return out


def published_coordinates(F: LocalField) -> List[Tuple[str, Vector, Vector]]:
    """(label, computed, published) exponents on the published generators of each listed ConG.

    Every generator is listed against its unit vector ahead of the published rows.
    """
    if F.degree != 2 or F.p not in (2, 3):
        return []
    tables = Q9_QUADRATIC_TABLES if F.p == 3 else Q4_QUADRATIC_TABLES
    quadratics = quadratic_inventory(F)
    out: List[Tuple[str, Vector, Vector]] = []
    for (p, index, f), rows in PUBLISHED_COORDINATES.items():
        if p != F.p:
            continue
        Q, table = quadratics[index - 1], tables[index]
        ctx = con_group(Q.field, f, F)
        generators = table_elements(table, Q.field, Q.z)
        orders = table.levels[f]
        named = [(f"g{k}", x, tuple(int(j == k - 1) for j in range(len(orders))))
                 for k, x in enumerate(generators, start=1)]
        named += [(text, element(text, Q.field, {"z": Q.z}), want) for text, want in rows]
        for text, x, want in named:
            got = dlog_in_basis(ctx, x, generators, orders)
            out.append((f"K{index},f={f}:{text}", got, want))
    return out


def epsilon_signs(F: LocalField) -> Dict[int, Tuple[int, ...]]:
    """Computed eps_i signs on the published units u_1, u_2, u_3 of Q_4."""
    units = table_elements(Q4_UNITS, F)
    return {Q.index: tuple(Q.epsilon.sign(u) for u in units) for Q in quadratic_inventory(F)}
