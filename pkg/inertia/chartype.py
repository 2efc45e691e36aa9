"""
Finite-order characters of unit quotients and the inertial types they induce.

A Character lives on a DlogContext and stores its values on the canonical
generators as exact elements of Q/Z.  enumerate_types builds the complete
inventory of non-exceptional types over Q_9 and Q_4 (and the tame inventory
for p >= 5): principal series from characters of (O_F/p^f)^x, supercuspidal
types from characters of the norm quotients ConG(K_i, f), the Steinberg and
eps (+) eps families, and the e = 6 twists.
"""
import logging
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from functools import cached_property, reduce
from itertools import product
from math import ceil, gcd
from typing import Callable, Dict, Iterable, Iterator, List, Optional, Sequence, Tuple

from .exceptions import CharacterError, ClassificationError, FilterError
from .localfield import FieldElement, LocalField
from .quadratics import QuadraticExtension, inertia_classes, inertia_signature, quadratic_inventory, unit_generators
from .unitgrp import DlogContext, con_group, unit_quotient

logger = logging.getLogger(__name__)

TRIVIAL = "trivial"
PRINCIPAL_SERIES = "principal-series"
STEINBERG = "steinberg"
STEINBERG_TWIST = "steinberg-twist"
SC_UNRAMIFIED = "sc-unramified"
SC_RAMIFIED = "sc-ramified-simple"
SC_TRIPLY = "sc-triply-imprimitive"
EXCEPTIONAL = "exceptional"

KINDS = (TRIVIAL, PRINCIPAL_SERIES, STEINBERG, STEINBERG_TWIST, SC_UNRAMIFIED, SC_RAMIFIED, SC_TRIPLY, EXCEPTIONAL)

TYPE_ORDERS = (3, 4, 6)


def _lcm(a: int, b: int) -> int:
    return a * b // gcd(a, b)


class Character:
    """chi on the canonical generators of a unit quotient, values in Q/Z."""

    def __init__(self, ctx: DlogContext, values: Sequence[Fraction]):
        if len(values) != len(ctx.invariants):
            raise CharacterError("one value per canonical generator expected")
        values = tuple(Fraction(v) % 1 for v in values)
        for v, d in zip(values, ctx.invariants):
            if (v * d).denominator != 1:
                raise CharacterError(f"value {v} is not a {d}-th root of unity")
        self.ctx = ctx
        self.values = values

    @classmethod
    def from_exponents(cls, ctx: DlogContext, exponents: Sequence[int]) -> "Character":
        return cls(ctx, [Fraction(a, d) for a, d in zip(exponents, ctx.invariants)])

    @classmethod
    def trivial(cls, ctx: DlogContext) -> "Character":
        return cls(ctx, [Fraction(0)] * len(ctx.invariants))

    def __repr__(self):
        body = ",".join(str(a) for a in self.exponents())
        return f"<Character ({body}) on {self.ctx.label} order {self.order}>"

    def __eq__(self, other):
        return isinstance(other, Character) and other.ctx is self.ctx and other.values == self.values

    def __hash__(self):
        return hash((id(self.ctx), self.values))

    def exponents(self) -> Tuple[int, ...]:
        return tuple(int(v * d) for v, d in zip(self.values, self.ctx.invariants))

    def key(self) -> Tuple[int, ...]:
        return self.exponents()

    def class_key(self) -> Tuple[int, ...]:
        """Key shared by chi and chi^-1."""
        return min(self.key(), self.inverse().key())

    def at_vector(self, vec: Sequence[int]) -> Fraction:
        return sum((a * v for a, v in zip(vec, self.values)), Fraction(0)) % 1

    def __call__(self, x: FieldElement) -> Fraction:
        return self.at_vector(self.ctx.dlog(x))

    def __mul__(self, other: "Character") -> "Character":
        if other.ctx is not self.ctx:
            raise CharacterError("characters on different groups")
        return Character(self.ctx, [a + b for a, b in zip(self.values, other.values)])

    def __pow__(self, k: int) -> "Character":
        return Character(self.ctx, [k * a for a in self.values])

    def inverse(self) -> "Character":
        return self ** -1

    def is_trivial(self) -> bool:
        return not any(self.values)

    @property
    def order(self) -> int:
        return reduce(_lcm, (v.denominator for v in self.values), 1)

    @cached_property
    def conductor(self) -> int:
        return conductor_exponent(self)


def _level_images(ctx: DlogContext) -> List[Tuple[int, Tuple[int, ...]]]:
    """(level, canonical image) of every filtration generator, cached on the context."""
    if ctx.level_images is None:
        filt = ctx.filtration
        ctx.level_images = [(n, ctx.dlog(g)) for g, n in zip(filt.generators, filt.gen_levels)]
    return ctx.level_images


def conductor_exponent(chi: Character) -> int:
    """Least f with chi trivial on the image of 1 + pi^f (f = 0: on all units)."""
    m = 0
    for n, vec in _level_images(chi.ctx):
        if chi.at_vector(vec):
            m = max(m, n + 1)
    if m > chi.ctx.level:
        raise CharacterError("conductor exceeds the level of the context")  # pragma: no cover
    return m


def characters(ctx: DlogContext, orders: Iterable[int] = TYPE_ORDERS) -> Iterator[Character]:
    """Characters of the given orders, in exponent order."""
    orders = set(orders)
    bound = reduce(_lcm, orders, 1)
    ranges = []
    for d in ctx.invariants:
        step = d // gcd(d, bound)
        ranges.append(range(0, d, step))
    for exps in product(*ranges):
        chi = Character.from_exponents(ctx, exps)
        if chi.order in orders:
            yield chi


def unique_up_to_inverse(chars: Iterable[Character]) -> List[Character]:
    seen = set()
    out = []
    for chi in chars:
        key = chi.class_key()
        if key not in seen:
            seen.add(key)
            out.append(chi)
    return out


# filters


def restriction_level(Q: QuadraticExtension, f_max: int) -> int:
    F = Q.field.parent
    return max(ceil(f_max / (Q.field.e // F.e)), Q.conductor, 1)


def det_unramified_filter(chi: Character, Q: QuadraticExtension) -> bool:
    """chi agrees with eps_K on O_F^x, i.e. the induced determinant is unramified on inertia."""
    K = Q.field
    for u in unit_generators(K.parent, restriction_level(Q, chi.ctx.level)):
        if chi(K(u)) != Q.eps(u):
            return False
    return True


def triply_imprimitive_filter(chi: Character, Q: QuadraticExtension) -> bool:
    """chi((1 + z)/(1 - z)) = +-1."""
    if not Q.ramified:
        raise FilterError("the uniformizer condition applies to ramified extensions")
    return 2 * chi(Q.twist_ratio()) % 1 == 0


def partner_extensions(chi: Character, a: QuadraticExtension, inventory: Sequence[QuadraticExtension]) -> Tuple[int, ...]:
    """Indices j with rho (x) eps_j = rho for rho induced from chi on K_a."""
    K = a.field
    F = K.parent
    units = list(chi.ctx.filtration.generators)
    norms = [u.norm(F) for u in units]
    targets = [(-2 * chi(u)) % 1 for u in units]
    pi_norm = K.uniformizer.norm(F)
    ratio_value = chi(a.uniformizer_ratio())
    out = []
    for Q in inventory:
        if Q.index == a.index:
            out.append(Q.index)
            continue
        if any(Q.eps(n) != t for n, t in zip(norms, targets)):
            continue
        if Q.eps(pi_norm) == ratio_value:
            out.append(Q.index)
    return tuple(out)


# inertial types


@dataclass
class InertialType:
    label: str
    kind: str
    conductor: int
    e: int
    field: Optional[int] = None
    characters: List[Character] = dc_field(default_factory=list)
    partners: Tuple[int, ...] = ()
    base: Optional[str] = None
    twist_index: Optional[int] = None
    char_conductor: Optional[int] = None

    @property
    def order(self) -> Optional[int]:
        return self.characters[0].order if self.characters else None

    def record(self) -> Dict:
        """JSON-ready description: label, kind, m, e, inducing data."""
        return {
            "label": self.label,
            "kind": self.kind,
            "m": self.conductor,
            "e": self.e,
            "field": self.field,
            "partners": list(self.partners),
            "base": self.base,
            "twist": self.twist_index,
            "characters": [
                {"group": list(chi.ctx.invariants), "exponents": list(chi.exponents())}
                for chi in self.characters
            ],
        }


def tame_type(q: int, e: int) -> Tuple[str, str]:
    """(kind, label) of the tame type with defect e over a field with q residues."""
    if e not in (3, 4, 6):
        raise ClassificationError(f"tame defect {e} outside {{3, 4, 6}}")
    if (q - 1) % e == 0:
        return PRINCIPAL_SERIES, f"τ_ps(1,1,{e})"
    if (q + 1) % e == 0:
        return SC_UNRAMIFIED, f"τ_sc(u,1,{e})"
    raise ClassificationError(f"neither q-1 nor q+1 divisible by {e}")  # pragma: no cover


def conductor_bound(F: LocalField) -> int:
    """2 + 3 v(3) + 6 v(2) in the normalisation of F."""
    v3 = F(3).valuation()
    v2 = F(2).valuation()
    return 2 + 3 * v3 + 6 * v2


class TypeInventory:
    """Ordered, labelled inertial types over one base field with lookup by character."""

    def __init__(self, F: LocalField, quadratics: Sequence[QuadraticExtension]):
        self.F = F
        self.tag = F.name
        self.quadratics = list(quadratics)
        self.types: List[InertialType] = []
        self._by_label: Dict[str, InertialType] = {}
        self._by_character: Dict[Tuple, str] = {}
        self.ps_context: Optional[DlogContext] = None
        self.sc_contexts: Dict[int, DlogContext] = {}

    def __iter__(self):
        return iter(self.types)

    def __len__(self):
        return len(self.types)

    def __contains__(self, label: str) -> bool:
        return label in self._by_label

    def get(self, label: str) -> InertialType:
        try:
            return self._by_label[label]
        except KeyError:
            raise ClassificationError(f"unknown type label {label!r} over {self.tag}") from None

    def add(self, tau: InertialType):
        if tau.label in self._by_label:
            raise ClassificationError(f"duplicate label {tau.label}")
        self.types.append(tau)
        self._by_label[tau.label] = tau
        if tau.characters:
            self._by_character[(tau.field or 0, tau.characters[0].class_key())] = tau.label

    def select(self, kind: Optional[str] = None, conductor: Optional[int] = None, e: Optional[int] = None) -> List[InertialType]:
        return [
            t for t in self.types
            if (kind is None or t.kind == kind)
            and (conductor is None or t.conductor == conductor)
            and (e is None or t.e == e)
        ]

    def count(self, **kwargs) -> int:
        return len(self.select(**kwargs))

    def label_of(self, chi: Character, field_index: int = 0) -> str:
        """Label of the type induced from chi (PS when field_index is 0)."""
        try:
            return self._by_character[(field_index, chi.class_key())]
        except KeyError:
            raise ClassificationError(f"no type of {self.tag} induced by {chi!r} from K{field_index}") from None

    def quadratic(self, index: int) -> QuadraticExtension:
        return self.quadratics[index - 1]

    # twisting

    def _eps_label(self, Q: QuadraticExtension) -> int:
        sig = inertia_signature(Q)
        for R in inertia_classes(self.quadratics):
            if inertia_signature(R) == sig:
                return R.index
        raise ClassificationError("unramified character has no ramified class")  # pragma: no cover

    def twist(self, label: str, index: int) -> str:
        """Label of eps_index (x) tau."""
        tau = self.get(label)
        Q = self.quadratic(index)
        if not Q.ramified:
            return label
        if tau.kind == TRIVIAL:
            return f"ε_{self._eps_label(Q)} ⊕ ε_{self._eps_label(Q)}"
        if tau.kind in (STEINBERG, STEINBERG_TWIST) or (tau.kind == PRINCIPAL_SERIES and tau.e == 2):
            current = tau.twist_index
            if current is None:
                i = self._eps_label(Q)
                return f"ε_{i} ⊗ τ_St" if tau.kind == STEINBERG else f"ε_{i} ⊕ ε_{i}"
            sig = tuple((a + b) % 1 for a, b in zip(inertia_signature(self.quadratic(current)), inertia_signature(Q)))
            if not any(sig):
                return "τ_St" if tau.kind == STEINBERG_TWIST else "trivial"
            for R in inertia_classes(self.quadratics):
                if inertia_signature(R) == sig:
                    return f"ε_{R.index} ⊗ τ_St" if tau.kind == STEINBERG_TWIST else f"ε_{R.index} ⊕ ε_{R.index}"
            raise ClassificationError("product of quadratic characters not found")  # pragma: no cover
        if tau.kind == EXCEPTIONAL:
            raise ClassificationError("exceptional types are twisted through the catalog")
        if not tau.characters:
            # tame: a quadratic twist swaps e = 3 and e = 6 and fixes e = 4
            return tame_type(self.F.q, {3: 6, 6: 3}.get(tau.e, tau.e))[1]
        chi = tau.characters[0]
        j = tau.partners[0] if tau.kind == SC_TRIPLY else tau.field
        if j:
            twist = Character(chi.ctx, [Q.eps(g.norm(self.F)) for g in chi.ctx.group.generators])
        else:
            twist = Character(chi.ctx, [Q.eps(g) for g in chi.ctx.group.generators])
        return self.label_of(chi * twist, j or 0)

    def records(self) -> List[Dict]:
        return [t.record() for t in self.types]


# enumeration


def _number(labels: List[Tuple[str, InertialType]]) -> None:
    """Append _j to labels shared by several types, in list order."""
    counts: Dict[str, int] = {}
    for stem, _ in labels:
        counts[stem] = counts.get(stem, 0) + 1
    seen: Dict[str, int] = {}
    for stem, tau in labels:
        if counts[stem] == 1:
            tau.label = stem
        else:
            seen[stem] = seen.get(stem, 0) + 1
            tau.label = f"{stem}_{seen[stem]}"


def _sort_key(chi: Character) -> Tuple:
    return (chi.conductor, chi.class_key())


def _order_by(chars: List[Character], published: Optional[List[Tuple[int, ...]]]) -> List[Character]:
    """Deterministic order; published class keys first, in published order."""
    chars = sorted(chars, key=_sort_key)
    if not published:
        return chars
    position = {key: i for i, key in enumerate(published)}
    return sorted(chars, key=lambda chi: (position.get(chi.class_key(), len(position)), _sort_key(chi)))


def _find_eps(inventory: TypeInventory, values_on: Callable[[QuadraticExtension], Sequence[Fraction]], target: Sequence[Fraction]) -> int:
    for Q in inertia_classes(inventory.quadratics):
        if tuple(values_on(Q)) == tuple(target):
            return Q.index
    raise FilterError("no quadratic character matches the order-2 part")


def _add_families(inventory: TypeInventory):
    """Trivial type, Steinberg and its twists, eps (+) eps."""
    inventory.add(InertialType("trivial", TRIVIAL, 0, 1))
    inventory.add(InertialType("τ_St", STEINBERG, 1, 1))
    for Q in inertia_classes(inventory.quadratics):
        inventory.add(InertialType(f"ε_{Q.index} ⊗ τ_St", STEINBERG_TWIST, 2 * Q.conductor, 2, twist_index=Q.index))
    for Q in inertia_classes(inventory.quadratics):
        inventory.add(InertialType(f"ε_{Q.index} ⊕ ε_{Q.index}", PRINCIPAL_SERIES, 2 * Q.conductor, 2, twist_index=Q.index))


def _principal_series(inventory: TypeInventory, published: Dict):
    F = inventory.F
    f_max = conductor_bound(F) // 2
    _, ctx = unit_quotient(F, f_max)
    inventory.ps_context = ctx
    stem = "τ_ps,4" if F.p == 2 else "τ_ps"
    chars = unique_up_to_inverse(characters(ctx, (3, 4)))
    labelled: List[Tuple[str, InertialType]] = []
    groups: Dict[Tuple[int, int], List[Character]] = {}
    for chi in chars:
        groups.setdefault((chi.conductor, chi.order), []).append(chi)
    for (m, order), group in sorted(groups.items(), key=lambda kv: (kv[0][1], kv[0][0])):
        for chi in _order_by(group, published.get(("ps", m, order))):
            tau = InertialType("", PRINCIPAL_SERIES, 2 * m, order, characters=[chi], char_conductor=m)
            labelled.append((f"{stem}(1,{m},{order})", tau))
    _number(labelled)
    for _, tau in labelled:
        inventory.add(tau)
    for chi in _order_by(unique_up_to_inverse(characters(ctx, (6,))), None):
        base = inventory.label_of(chi ** 4)
        i = _find_eps(inventory, lambda Q: [Q.eps(g) for g in ctx.group.generators], (chi ** 3).values)
        tau = InertialType(f"ε_{i} ⊗ {base}", PRINCIPAL_SERIES, 2 * chi.conductor, 6,
                           characters=[chi], base=base, twist_index=i, char_conductor=chi.conductor)
        inventory.add(tau)


def _supercuspidal_unramified(inventory: TypeInventory, Q: QuadraticExtension, published: Dict):
    F = inventory.F
    f_max = conductor_bound(F) // 2
    ctx = con_group(Q.field, f_max, F)
    inventory.sc_contexts[Q.index] = ctx
    chars = unique_up_to_inverse(characters(ctx, (3, 4)))
    labelled: List[Tuple[str, InertialType]] = []
    groups: Dict[Tuple[int, int], List[Character]] = {}
    for chi in chars:
        groups.setdefault((chi.conductor, chi.order), []).append(chi)
    for (m, order), group in sorted(groups.items(), key=lambda kv: (kv[0][1], kv[0][0])):
        for chi in _order_by(group, published.get(("sc", Q.index, m, order))):
            tau = InertialType("", SC_UNRAMIFIED, 2 * m, order, field=Q.index, characters=[chi], char_conductor=m)
            labelled.append((f"τ_sc({Q.name},{m},{order})", tau))
    _number(labelled)
    for _, tau in labelled:
        inventory.add(tau)
    for chi in _order_by(unique_up_to_inverse(characters(ctx, (6,))), None):
        base = inventory.label_of(chi ** 4, Q.index)
        i = _find_eps(inventory, lambda R: [R.eps(g.norm(F)) for g in ctx.group.generators], (chi ** 3).values)
        tau = InertialType(f"ε_{i} ⊗ {base}", SC_UNRAMIFIED, 2 * chi.conductor, 6, field=Q.index,
                           characters=[chi], base=base, twist_index=i, char_conductor=chi.conductor)
        inventory.add(tau)


def ramified_characters(inventory: TypeInventory, Q: QuadraticExtension) -> List[Character]:
    """Characters of ConG(K, f_max) passing the determinant and uniformizer filters, up to inverse."""
    F = inventory.F
    f_max = conductor_bound(F) - Q.conductor
    ctx = con_group(Q.field, f_max, F)
    inventory.sc_contexts[Q.index] = ctx
    out = []
    for chi in unique_up_to_inverse(characters(ctx, TYPE_ORDERS)):
        if not det_unramified_filter(chi, Q):
            continue
        if F.p == 2 and Q.conductor == 2 and not triply_imprimitive_filter(chi, Q):
            continue
        out.append(chi)
    logger.debug("K%d: %d admissible characters", Q.index, len(out))
    return out


def _supercuspidal_ramified(inventory: TypeInventory, Q: QuadraticExtension, published: Dict):
    labelled: List[Tuple[str, InertialType]] = []
    groups: Dict[Tuple[int, int], List[Character]] = {}
    for chi in ramified_characters(inventory, Q):
        groups.setdefault((chi.conductor, chi.order), []).append(chi)
    for (m, order), group in sorted(groups.items()):
        for chi in _order_by(group, published.get(("sc", Q.index, m, order))):
            tau = InertialType("", SC_RAMIFIED, m + Q.conductor, 2 * order, field=Q.index,
                               characters=[chi], char_conductor=m)
            labelled.append((f"τ_sc({Q.name},{m},{order})", tau))
    _number(labelled)
    for _, tau in labelled:
        inventory.add(tau)


def _triply_imprimitive(inventory: TypeInventory):
    """Group admissible characters of K_1..K_14 by partner set; each set keeps its smallest member's characters."""
    ramified = [Q for Q in inventory.quadratics if Q.ramified]
    found: Dict[Tuple[int, ...], Dict[int, List[Character]]] = {}
    for Q in ramified:
        for chi in ramified_characters(inventory, Q):
            partners = partner_extensions(chi, Q, inventory.quadratics)
            if len(partners) != 3:
                raise FilterError(f"K{Q.index}: partner set {partners} of {chi!r} is not of size 3")
            found.setdefault(partners, {}).setdefault(Q.index, []).append(chi)
    types: List[Tuple[Tuple, InertialType]] = []
    for partners, by_field in found.items():
        sizes = {len(by_field.get(j, [])) for j in partners}
        if len(sizes) != 1:
            raise FilterError(f"partner set {partners}: unequal character counts {sorted(sizes)}")
        a = partners[0]
        for chi in sorted(by_field[a], key=_sort_key):
            m = chi.conductor + inventory.quadratic(a).conductor
            tau = InertialType("", SC_TRIPLY, m, 2 * chi.order, field=a, characters=[chi],
                               partners=partners, char_conductor=chi.conductor)
            types.append(((m, partners, chi.class_key()), tau))
    types.sort(key=lambda kv: kv[0])
    labelled = [(f"τ_tri({','.join(str(j) for j in tau.partners)})", tau) for _, tau in types]
    _number(labelled)
    for _, tau in labelled:
        inventory.add(tau)


def enumerate_types(F: LocalField, published: Optional[Dict] = None) -> TypeInventory:
    """The non-exceptional inertial types over F with potentially good reduction, plus the
    Steinberg and quadratic families."""
    quadratics = quadratic_inventory(F)
    inventory = TypeInventory(F, quadratics)
    _add_families(inventory)
    if F.p >= 5:
        for e in (3, 4, 6):
            kind, label = tame_type(F.q, e)
            inventory.add(InertialType(label, kind, 2, e))
        return inventory
    if published is None:
        from .tables import published_orders

        published = published_orders(F)
    _principal_series(inventory, published)
    for Q in quadratics:
        if not Q.ramified:
            _supercuspidal_unramified(inventory, Q, published)
    if F.p == 2:
        _triply_imprimitive(inventory)
    else:
        for Q in quadratics:
            if Q.ramified:
                _supercuspidal_ramified(inventory, Q, published)
    logger.info("%s: %d inertial types", F.name, len(inventory))
    return inventory
