"""
Quadratic extensions K_i = F(sqrt(y_i)) of the base field, in published order,
with their quadratic characters eps_i and conductor exponents m(psi_i).
"""
import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from .exceptions import ClassificationError
from .extensions import adjoin_sqrt
from .localfield import FieldElement, LocalField
from .powerclasses import NormCharacter, norm_character, power_classes
from .unitgrp import filtration

logger = logging.getLogger(__name__)


@dataclass
class QuadraticExtension:
    index: int
    y: FieldElement
    name: str
    field: LocalField
    z: FieldElement
    epsilon: NormCharacter
    conductor: int

    @property
    def ramified(self) -> bool:
        return self.field.e > self.field.parent.e

    def __repr__(self):
        return f"<K{self.index} = F(sqrt({self.name})) m={self.conductor}>"

    def eps(self, x: FieldElement) -> Fraction:
        return self.epsilon(x)

    def conjugate(self, x: FieldElement) -> FieldElement:
        return conjugate(self.field, x)

    def uniformizer_ratio(self) -> FieldElement:
        """s(pi)/pi for the uniformizer of K; a unit, -1 when pi = z."""
        K = self.field
        pi = K.uniformizer
        return conjugate(K, pi) / pi

    def twist_ratio(self) -> FieldElement:
        """(1 + z)/(1 - z) when 1 - z is a uniformizer, s(pi)/pi otherwise."""
        d = 1 - self.z
        if not d.is_zero() and d.valuation() == 1:
            return (1 + self.z) / d
        return self.uniformizer_ratio()


def conjugate(K: LocalField, x: FieldElement) -> FieldElement:
    """Image of x under the non-trivial automorphism of the quadratic step K/K.parent."""
    if K.n != 2:
        raise ClassificationError("conjugation needs a quadratic step")
    b0, b1 = K.split_blocks(K(x))
    a1 = K.poly[1]
    return K.join_blocks([b0 - a1 * b1, -b1])


def _q9_values(F: LocalField) -> List[Tuple[FieldElement, str]]:
    u = 1 + F.gen
    return [(F(3), "3"), (3 * u, "3+3√2"), (u, "1+√2")]


def _q4_values(F: LocalField) -> List[Tuple[FieldElement, str]]:
    b = F.gen
    c = 1 + 2 * b
    ys = [-b * c, b, F(-1), c, b * c, -b, F(-2), 2 * c, 2 * b * c, -2 * b, F(2), -2 * c, 2 * b, -2 * b * c, -c]
    return [(y, f"y{i}") for i, y in enumerate(ys, start=1)]


def _generic_values(F: LocalField) -> List[Tuple[FieldElement, str]]:
    space = power_classes(F, 2)
    out = []
    for x in space.reps()[1:]:
        out.append((x, _class_name(space.coords(x))))
    return out


def _class_name(vec: Sequence[int]) -> str:
    parts = []
    if vec[0]:
        parts.append("π")
    if len(vec) > 1 and any(vec[1:]):
        parts.append("u")
    return "".join(parts) or "1"


def field_tag(F: LocalField) -> str:
    return F.name


def quadratic_values(F: LocalField) -> List[Tuple[FieldElement, str]]:
    if F.p == 3 and F.degree == 2:
        return _q9_values(F)
    if F.p == 2 and F.degree == 2:
        return _q4_values(F)
    return _generic_values(F)


def quadratic_inventory(F: LocalField) -> List[QuadraticExtension]:
    """The quadratic extensions of F with eps_i and m(psi_i), cached on F."""
    cached = F.cache.get("quadratics")
    if cached is not None:
        return cached
    out: List[QuadraticExtension] = []
    for index, (y, name) in enumerate(quadratic_values(F), start=1):
        K, z = adjoin_sqrt(F, y, name=f"K{index}", gen_name="z")
        eps = norm_character(K, F)
        out.append(QuadraticExtension(index, y, name, K, z, eps, eps.conductor()))
        logger.debug("K%d = %s(sqrt(%s)): e=%d m=%d", index, F.name, name, K.e, out[-1].conductor)
    logger.info("%d quadratic extensions of %s", len(out), F.name)
    F.cache["quadratics"] = out
    return out


def unit_generators(F: LocalField, level: int) -> List[FieldElement]:
    """Free generators of O_F^x modulo 1 + pi^level."""
    return list(filtration(F, max(level, 1)).generators)


def inertia_signature(Q: QuadraticExtension, level: Optional[int] = None) -> Tuple[Fraction, ...]:
    """Values of eps on unit generators: equal signatures mean equal restriction to inertia."""
    F = Q.field.parent
    return tuple(Q.eps(u) for u in unit_generators(F, level or 2 * F.e + 1))


def inertia_classes(inventory: Sequence[QuadraticExtension]) -> List[QuadraticExtension]:
    """The first extension of each distinct ramified restriction to inertia."""
    seen = set()
    out = []
    for Q in inventory:
        if not Q.ramified:
            continue
        sig = inertia_signature(Q)
        if sig not in seen:
            seen.add(sig)
            out.append(Q)
    return out
