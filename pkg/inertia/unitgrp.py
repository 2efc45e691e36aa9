"""
Unit groups (O_K / pi^f)^x, norm subgroups and their quotients.

A group is presented by free generators (a lift g0 of a primitive residue and
the filtration units 1 + beta_j * pi^n) modulo relations; the Smith form of
the relation matrix gives the invariant factors and the canonical generators.
Discrete logs go through the filtration digits of a unit, never through search.
"""
import logging
from functools import reduce
from itertools import product
from math import gcd
from typing import Dict, List, Optional, Sequence, Tuple

from .exceptions import CharacterError, LevelError, NotAUnitError
from .localfield import FieldElement, LocalField
from .smith import smith_normal_form

logger = logging.getLogger(__name__)

Vector = Tuple[int, ...]


def _lcm(a: int, b: int) -> int:
    return a * b // gcd(a, b)


class Filtration:
    """Free generators of (O_K/pi^f)^x and the digit expansion of units."""

    def __init__(self, K: LocalField, level: int):
        if level < 0:
            raise LevelError("negative filtration level")
        self.K = K
        self.level = level
        F = K.residue
        self.f = F.degree
        self.g0 = K.lift(F.primitive)
        self.basis = [K.lift(F.p ** j) for j in range(self.f)]
        self.generators: List[FieldElement] = []
        self.gen_levels: List[int] = []
        if level >= 1:
            self.generators.append(self.g0)
            self.gen_levels.append(0)
        self._inverse_powers: Dict[Tuple[int, int], List[FieldElement]] = {}
        for n in range(1, level):
            pin = K.pi_power(n)
            for j, beta in enumerate(self.basis):
                h = 1 + beta * pin
                self.generators.append(h)
                self.gen_levels.append(n)
                inv = h.inverse()
                powers = [K.one()]
                for _ in range(F.p - 1):
                    powers.append(powers[-1] * inv)
                self._inverse_powers[(n, j)] = powers
        self._g0_inverse = self.g0.inverse() if level >= 1 else None
        self._g0_cache: Dict[int, FieldElement] = {}

    @property
    def rank(self) -> int:
        return len(self.generators)

    def _g0_inverse_power(self, k: int) -> FieldElement:
        if k not in self._g0_cache:
            self._g0_cache[k] = self._g0_inverse ** k
        return self._g0_cache[k]

    def free_dlog(self, x: FieldElement) -> List[int]:
        """Exponents on the free generators of a unit x modulo pi^level."""
        K = self.K
        x = K(x)
        if x.is_zero() or x.valuation() != 0:
            raise NotAUnitError("discrete log of a non-unit")
        if self.level == 0:
            return []
        F = K.residue
        k = F.log(x.residue())
        y = x * self._g0_inverse_power(k) if k else x
        out = [k]
        for n in range(1, self.level):
            w = (y - 1) * K.pi_power(-n)
            digits = F.digits(w.residue()) if w.is_integral() else None
            if digits is None:
                raise NotAUnitError("unit left the filtration")  # pragma: no cover
            out.extend(digits)
            for j, d in enumerate(digits):
                if d:
                    y = y * self._inverse_powers[(n, j)][d]
        return out

    def relations(self) -> List[List[int]]:
        rows = []
        if self.level == 0:
            return rows
        q, p = self.K.q, self.K.p
        rank = self.rank
        rel = [0] * rank
        rel[0] = q - 1
        rows.append([a - b for a, b in zip(rel, self.free_dlog(self.g0 ** (q - 1)))])
        for idx in range(1, rank):
            rel = [0] * rank
            rel[idx] = p
            rows.append([a - b for a, b in zip(rel, self.free_dlog(self.generators[idx] ** p))])
        return rows


class FinAbGroup:
    """Finite abelian group with invariant factors and unit representatives."""

    def __init__(self, invariants: Sequence[int], generators: Sequence[FieldElement], K: LocalField, level: int):
        self.invariants = list(invariants)
        self.generators = list(generators)
        self.K = K
        self.level = level

    @property
    def order(self) -> int:
        return reduce(lambda a, b: a * b, self.invariants, 1)

    @property
    def exponent(self) -> int:
        return reduce(_lcm, self.invariants, 1)

    def elements(self):
        return product(*(range(d) for d in self.invariants))

    def __repr__(self):
        body = " x ".join(f"Z/{d}" for d in self.invariants) or "1"
        return f"<FinAbGroup {body} over {self.K.name} level {self.level}>"


class DlogContext:
    """Presentation of a unit quotient with discrete logs on canonical generators."""

    def __init__(self, filtration: Filtration, extra: Sequence[Sequence[int]] = (), label: str = ""):
        self.filtration = filtration
        self.K = filtration.K
        self.level = filtration.level
        self.label = label
        self.extra = [list(v) for v in extra]
        self.level_images: Optional[List[Tuple[int, Vector]]] = None
        rank = filtration.rank
        rows = filtration.relations() + self.extra
        snf = smith_normal_form(rows, rank) if rank else None
        self._kept: List[int] = []
        invariants: List[int] = []
        if snf is not None:
            for i, d in enumerate(snf.diagonal):
                if d == 0:
                    raise LevelError("relation matrix is not of full rank")
                if d != 1:
                    self._kept.append(i)
                    invariants.append(d)
            self._V = snf.V
            self._V_inv = snf.V_inv
        exponent = reduce(_lcm, invariants, 1)
        generators = [self._free_to_element(self._V_inv[i], exponent) for i in self._kept]
        self.group = FinAbGroup(invariants, generators, self.K, self.level)

    def __repr__(self):
        return f"<DlogContext {self.label or self.K.name} f={self.level} {self.group.invariants}>"

    @property
    def invariants(self) -> List[int]:
        return self.group.invariants

    def _free_to_element(self, vec: Sequence[int], exponent: int) -> FieldElement:
        x = self.K.one()
        for g, a in zip(self.filtration.generators, vec):
            a %= exponent if exponent > 1 else 1
            if a:
                x = x * g ** a
        return x

    def free_to_canonical(self, vec: Sequence[int]) -> Vector:
        out = []
        for i, d in zip(self._kept, self.group.invariants):
            s = sum(v * self._V[j][i] for j, v in enumerate(vec))
            out.append(s % d)
        return tuple(out)

    def canonical_to_free(self, vec: Sequence[int]) -> List[int]:
        rank = self.filtration.rank
        out = [0] * rank
        for i, a in zip(self._kept, vec):
            for j in range(rank):
                out[j] += a * self._V_inv[i][j]
        return out

    def dlog(self, x: FieldElement) -> Vector:
        """Exponent vector of the unit x on the canonical generators."""
        if not self.filtration.rank:
            return ()
        return self.free_to_canonical(self.filtration.free_dlog(x))

    def element(self, vec: Sequence[int]) -> FieldElement:
        return self._free_to_element(self.canonical_to_free(vec), self.group.exponent)

    def reduce(self, vec: Sequence[int]) -> Vector:
        return tuple(a % d for a, d in zip(vec, self.group.invariants))

    def add(self, u: Sequence[int], v: Sequence[int]) -> Vector:
        return self.reduce([a + b for a, b in zip(u, v)])

    def scale(self, k: int, v: Sequence[int]) -> Vector:
        return self.reduce([k * a for a in v])

    def order_of(self, v: Sequence[int]) -> int:
        return reduce(_lcm, (d // gcd(a, d) for a, d in zip(v, self.group.invariants)), 1)

    def quotient(self, vectors: Sequence[Sequence[int]], label: str = "") -> "DlogContext":
        """Quotient by the subgroup generated by canonical exponent vectors."""
        for v in vectors:
            if len(v) != len(self.group.invariants):
                raise LevelError("vector does not live in this group")
        extra = self.extra + [self.canonical_to_free(v) for v in vectors]
        return DlogContext(self.filtration, extra, label or self.label)

    def quotient_by_elements(self, elements: Sequence[FieldElement], label: str = "") -> "DlogContext":
        extra = self.extra + [self.filtration.free_dlog(x) for x in elements]
        return DlogContext(self.filtration, extra, label or self.label)

    def kernel_generators(self, f_lo: int) -> List[Vector]:
        """Canonical vectors generating the image of 1 + pi^f_lo (all units when f_lo = 0)."""
        if f_lo > self.level:
            raise LevelError(f"level {f_lo} above the context level {self.level}")
        out = []
        for g, n in zip(self.filtration.generators, self.filtration.gen_levels):
            if n >= f_lo:
                v = self.dlog(g)
                if any(v):
                    out.append(v)
        return out


def _cache(K: LocalField) -> Dict:
    return K.cache.setdefault("units", {})


def filtration(K: LocalField, f: int) -> Filtration:
    cache = _cache(K)
    key = ("filtration", f)
    if key not in cache:
        cache[key] = Filtration(K, f)
    return cache[key]


def unit_quotient(K: LocalField, f: int) -> Tuple[FinAbGroup, DlogContext]:
    """(O_K/pi^f)^x with its discrete-log context."""
    limit = 2 * K.e + 8
    if f > limit or f > K.e * K.precision // 2:
        raise LevelError(f"level {f} exceeds the precision budget")
    cache = _cache(K)
    key = ("units", f)
    if key not in cache:
        ctx = DlogContext(filtration(K, f), label=f"(O_{K.name}/p^{f})^x")
        cache[key] = ctx
        logger.debug("unit group %s: %s", ctx.label, ctx.invariants)
    ctx = cache[key]
    return ctx.group, ctx


def norm_subgroup(L: LocalField, f: int, K: Optional[LocalField] = None) -> List[Vector]:
    """Canonical vectors of j(Nm_{L/K}(O_L^x)) inside (O_L/pi_L^f)^x."""
    K = K or L.parent
    if K is None:
        raise LevelError("norm subgroup needs a proper extension")
    if f < 0:
        raise LevelError("negative level")
    _, ctx = unit_quotient(L, f)
    if f == 0:
        return []
    out = []
    for g in filtration(L, f).generators:
        v = ctx.dlog(L(g.norm(K)))
        if any(v):
            out.append(v)
    return out


def con_group(L: LocalField, f: int, K: Optional[LocalField] = None) -> DlogContext:
    """(O_L/pi_L^f)^x / U_f with U_f the re-embedded norm image from L down to K."""
    K = K or L.parent
    cache = _cache(L)
    key = ("con", f, id(K))
    if key not in cache:
        _, ctx = unit_quotient(L, f)
        _, cache[key] = quotient_with_dlog(ctx, norm_subgroup(L, f, K), label=f"ConG({L.name},{f})")
        logger.debug("%s: %s", cache[key].label, cache[key].invariants)
    return cache[key]


def quotient_with_dlog(ctx: DlogContext, vectors: Sequence[Sequence[int]],
                       label: str = "") -> Tuple[FinAbGroup, DlogContext]:
    """ctx modulo the subgroup spanned by canonical vectors, with its own dlog."""
    q = ctx.quotient(vectors, label)
    return q.group, q


def dlog(ctx: DlogContext, x: FieldElement) -> Vector:
    return ctx.dlog(x)


def projection_kernel(ctx: DlogContext, f_lo: int) -> List[Vector]:
    """Kernel of the map from the context's level down to level f_lo."""
    if f_lo > ctx.level:
        raise LevelError(f"f_lo={f_lo} exceeds f_hi={ctx.level}")
    return ctx.kernel_generators(f_lo)


class PublishedBasis:
    """Change of basis between canonical generators and a published generator list.

    ``orders`` is the published structure: the group must be the internal direct
    sum of the cyclic subgroups the elements generate, with these orders.
    """

    def __init__(self, ctx: DlogContext, elements: Sequence[FieldElement], orders: Sequence[int]):
        self.ctx = ctx
        self.orders = list(orders)
        images = [ctx.dlog(x) for x in elements]
        table: Dict[Vector, Vector] = {}
        for exps in product(*(range(o) for o in self.orders)):
            acc = tuple(0 for _ in ctx.invariants)
            for a, img in zip(exps, images):
                if a:
                    acc = ctx.add(acc, ctx.scale(a, img))
            if acc in table:
                raise CharacterError("published elements are dependent or have the wrong orders")
            table[acc] = exps
        if len(table) != ctx.group.order:
            raise CharacterError("published elements do not generate the quotient")
        self.images = images
        self._table = table

    def coordinates(self, x: FieldElement) -> Vector:
        return self._table[self.ctx.dlog(x)]

    def from_canonical(self, vec: Sequence[int]) -> Vector:
        return self._table[self.ctx.reduce(vec)]

    def to_canonical(self, exps: Sequence[int]) -> Vector:
        acc = tuple(0 for _ in self.ctx.invariants)
        for a, img in zip(exps, self.images):
            acc = self.ctx.add(acc, self.ctx.scale(a, img))
        return acc


def dlog_in_basis(ctx: DlogContext, x: FieldElement, elements: Sequence[FieldElement], orders: Sequence[int]) -> Vector:
    return PublishedBasis(ctx, elements, orders).coordinates(x)
