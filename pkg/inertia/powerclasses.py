"""
Power classes K^x / (K^x)^l as vector spaces over F_l.

Coordinates are (v(x) mod l, unit part).  For l = p = 2 the unit part is read
off the 1-unit filtration directly: odd levels below 2e carry free digits, even
levels are squared away and level 2e contributes one trace bit.  Every other
case goes through the unit group (O_K / pi^f0)^x, f0 = floor(e*l/(l-1)) + 1,
above which all units are l-th powers.
"""
import logging
from fractions import Fraction
from itertools import product
from typing import Dict, List, Optional, Sequence, Tuple

from sympy.polys.domains import GF
from sympy.polys.matrices import DomainMatrix

from .exceptions import FilterError, PrecisionError
from .localfield import FieldElement, LocalField
from .unitgrp import unit_quotient

logger = logging.getLogger(__name__)

Vector = Tuple[int, ...]


# linear algebra over F_l


def _domain_matrix(rows: Sequence[Sequence[int]], ncols: int, ell: int) -> DomainMatrix:
    dom = GF(ell)
    return DomainMatrix([[dom(int(a) % ell) for a in row] for row in rows], (len(rows), ncols), dom)


def rank_mod(rows: Sequence[Sequence[int]], ncols: int, ell: int) -> int:
    if not rows or not ncols:
        return 0
    return _domain_matrix(rows, ncols, ell).rank()


def nullspace_mod(rows: Sequence[Sequence[int]], ncols: int, ell: int) -> List[Vector]:
    """Basis of {v : row . v = 0 for every row} over F_l."""
    if not rows:
        return [tuple(int(i == j) for j in range(ncols)) for i in range(ncols)]
    null = _domain_matrix(rows, ncols, ell).nullspace()
    return [tuple(int(a) % ell for a in row) for row in null.to_list()]


def row_basis_mod(rows: Sequence[Sequence[int]], ncols: int, ell: int) -> List[Vector]:
    """Reduced row echelon basis of the span of ``rows``."""
    if not rows:
        return []
    reduced, pivots = _domain_matrix(rows, ncols, ell).rref()
    return [tuple(int(a) % ell for a in row) for row in reduced.to_list()[:len(pivots)]]


class PowerClassSpace:
    """K^x / (K^x)^l with coordinates, a basis of representatives and the pairing helpers."""

    def __init__(self, K: LocalField, ell: int):
        self.K = K
        self.ell = ell
        if ell == 2 and K.p == 2:
            self._setup_dyadic()
        else:
            self._setup_units()
        logger.debug("power classes of %s mod %d-th powers: dimension %d", K.name, ell, self.dim)

    def __repr__(self):
        return f"<PowerClassSpace {self.K.name} l={self.ell} dim={self.dim}>"

    # setup

    def _setup_units(self):
        K, ell = self.K, self.ell
        self.level = K.e * ell // (ell - 1) + 1 if ell == K.p else 1
        _, self._ctx = unit_quotient(K, self.level)
        self._slots = [i for i, d in enumerate(self._ctx.invariants) if d % ell == 0]
        self.basis: List[FieldElement] = [K.uniformizer] + [self._ctx.group.generators[i] for i in self._slots]

    def _setup_dyadic(self):
        K = self.K
        F = K.residue
        self.level = 2 * K.e + 1
        betas = [K.lift(F.p ** j) for j in range(F.degree)]
        self._odd: Dict[int, List[Tuple[FieldElement, FieldElement]]] = {}
        self.basis = [K.uniformizer]
        for k in range(1, 2 * K.e, 2):
            pik = K.pi_power(k)
            pairs = []
            for beta in betas:
                h = 1 + beta * pik
                pairs.append((h, h.inverse()))
                self.basis.append(h)
            self._odd[k] = pairs
        c0 = next(c for c in F.elements() if F.trace(c) == 1)
        self.delta = 1 + 4 * K.lift(c0)
        self.basis.append(self.delta)

    @property
    def dim(self) -> int:
        return len(self.basis)

    # coordinates

    def coords(self, x: FieldElement) -> Vector:
        K = self.K
        x = K(x)
        if x.is_zero():
            raise PrecisionError("power class of an element indistinguishable from 0")
        v = x.valuation()
        u = x * K.pi_power(-v) if v else x
        if self.ell == 2 and K.p == 2:
            return (v % 2,) + self._dyadic_unit_coords(u)
        dl = self._ctx.dlog(u)
        return (v % self.ell,) + tuple(dl[i] % self.ell for i in self._slots)

    def _dyadic_unit_coords(self, u: FieldElement) -> Vector:
        K = self.K
        F = K.residue
        e = K.e
        r = F.sqrt(u.residue())
        if r != 1:
            u = u / K.lift(r) ** 2
        out: List[int] = []
        for k in range(1, 2 * e):
            w = (u - 1) * K.pi_power(-k)
            c = w.residue()
            if k % 2:
                digits = F.digits(c)
                out.extend(digits)
                for (_, h_inv), d in zip(self._odd[k], digits):
                    if d:
                        u = u * h_inv
            elif c:
                t = 1 + K.lift(F.sqrt(c)) * K.pi_power(k // 2)
                u = u / (t * t)
        w = (u - 1) / 4
        if not w.is_integral():
            raise PrecisionError("unit left the 1-unit filtration")  # pragma: no cover
        out.append(F.trace(w.residue()))
        return tuple(out)

    def is_power(self, x: FieldElement) -> bool:
        return not any(self.coords(x))

    def element(self, vec: Sequence[int]) -> FieldElement:
        x = self.K.one()
        for b, a in zip(self.basis, vec):
            a %= self.ell
            if a:
                x = x * b ** a
        return x

    def reps(self) -> List[FieldElement]:
        """One representative per class, in lexicographic coordinate order."""
        return [self.element(vec) for vec in product(range(self.ell), repeat=self.dim)]

    def span_rank(self, elements: Sequence[FieldElement]) -> int:
        return rank_mod([self.coords(x) for x in elements], self.dim, self.ell)

    def independent(self, elements: Sequence[FieldElement]) -> bool:
        return self.span_rank(elements) == len(elements)

    def annihilator(self, elements: Sequence[FieldElement]) -> List[Vector]:
        """Functionals vanishing on the span of ``elements``."""
        return nullspace_mod([self.coords(x) for x in elements], self.dim, self.ell)

    def pair(self, functional: Sequence[int], x: FieldElement) -> int:
        return sum(a * b for a, b in zip(functional, self.coords(x))) % self.ell


def power_classes(K: LocalField, ell: int) -> PowerClassSpace:
    cache = K.cache.setdefault("power_classes", {})
    if ell not in cache:
        cache[ell] = PowerClassSpace(K, ell)
    return cache[ell]


def square_class_group(K: LocalField) -> List[FieldElement]:
    """Representatives of K^x/(K^x)^2, one per class."""
    return power_classes(K, 2).reps()


class NormCharacter:
    """The quadratic character of F^x with kernel Nm(K^x), K/F quadratic.

    Values are in Q/Z: 0 on norms, 1/2 otherwise.
    """

    def __init__(self, K: LocalField, F: Optional[LocalField] = None):
        F = F or K.parent
        self.K = K
        self.F = F
        self.space = power_classes(F, 2)
        images = [b.norm(F) for b in power_classes(K, 2).basis]
        functionals = self.space.annihilator(images)
        if len(functionals) != 1:
            raise FilterError(f"norm classes of {K.name} do not span a hyperplane ({len(functionals)})")
        self.functional = functionals[0]

    def __call__(self, x: FieldElement) -> Fraction:
        return Fraction(self.space.pair(self.functional, self.F(x)), 2)

    def sign(self, x: FieldElement) -> int:
        return -1 if self(x) else 1

    def is_norm(self, x: FieldElement) -> bool:
        return self(x) == 0

    def conductor(self) -> int:
        """Least f with the character trivial on 1 + pi^f (0 when unramified)."""
        F = self.F
        for f in range(0, 2 * F.e + 2):
            if f == 0:
                gens = [F.lift(F.residue.primitive)] if F.q > 2 else []
                gens += [1 + F.lift(F.residue.p ** j) * F.pi_power(n)
                         for n in range(1, 2 * F.e + 2) for j in range(F.residue.degree)]
            else:
                gens = [1 + F.lift(F.residue.p ** j) * F.pi_power(n)
                        for n in range(f, 2 * F.e + 2) for j in range(F.residue.degree)]
            if all(self(g) == 0 for g in gens):
                return f
        raise FilterError("quadratic character with conductor above 2e + 1")  # pragma: no cover


def norm_character(K: LocalField, F: Optional[LocalField] = None) -> NormCharacter:
    cache = K.cache.setdefault("norm_characters", {})
    F = F or K.parent
    if id(F) not in cache:
        cache[id(F)] = NormCharacter(K, F)
    return cache[id(F)]
