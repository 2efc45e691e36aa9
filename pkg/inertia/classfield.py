"""
Abelian extensions cut out by finite-order characters of unit quotients.

A character chi of a DlogContext over B is realised by a field L/B whose norm image
Nm(O_L^x) in the context is exactly ker(chi).  The 2- and 3-primary parts are found
separately by probing candidates (power classes for Kummer steps, Shanks cubics
otherwise) and checking norm images; the field of chi is their compositum.
"""
import logging
import random
from typing import List, Optional, Sequence, Tuple

from . import conf
from .exceptions import (
    BudgetError,
    ClassificationError,
    LevelError,
    PrecisionError,
    PresentationError,
    ReducibleError,
)
from .extensions import adjoin_radical, adjoin_root, adjoin_sqrt, different_exponent
from .localfield import EISENSTEIN, FieldElement, LocalField
from .polynomials import Polynomial, roots_in_field
from .powerclasses import power_classes
from .unitgrp import DlogContext, filtration, quotient_with_dlog

logger = logging.getLogger(__name__)

Vector = Tuple[int, ...]

_BUILD_ERRORS = (ReducibleError, PresentationError, PrecisionError, LevelError)


def _mu3(B: LocalField) -> bool:
    return bool(roots_in_field(B, Polynomial.from_ints(B, [1, 1, 1])))


def relative_different(L: LocalField, B: LocalField) -> int:
    """v_L of the different of L/B, summed over the tower steps."""
    total = 0
    for level in L.tower():
        if level.depth <= B.depth:
            continue
        if level.kind == EISENSTEIN:
            g = Polynomial(level.parent, list(level.poly) + [level.parent.one()])
            # v_level of the step different, scaled to L
            total += different_exponent(g) * (L.e // level.e)
    return total


def norm_level(L: LocalField, B: LocalField, f: int) -> int:
    """A level k with Nm_{L/B}(1 + pi_L^k) inside 1 + pi_B^f."""
    n = L.e // B.e
    return max(1, n * f - relative_different(L, B))


def norm_image(L: LocalField, B: LocalField, ctx: DlogContext) -> List[Vector]:
    """Canonical vectors of Nm_{L/B}(O_L^x) inside the context."""
    if ctx.K is not B:
        raise LevelError("context does not live on the norm target")
    if L is B:
        return []
    k = norm_level(L, B, ctx.level)
    out = []
    for g in filtration(L, k).generators:
        v = ctx.dlog(B(g.norm(B)))
        if any(v):
            out.append(v)
    return out


def quotient_order(ctx: DlogContext, vectors: Sequence[Sequence[int]]) -> int:
    group, _ = quotient_with_dlog(ctx, vectors)
    return group.order


def cuts_out(chi, L: LocalField, B: LocalField) -> bool:
    """Whether the norm image of L in chi's context is exactly ker(chi)."""
    image = norm_image(L, B, chi.ctx)
    if any(chi.at_vector(v) for v in image):
        return False
    return quotient_order(chi.ctx, image) == chi.order


# quadratic and quartic parts


def _quadratic_part(chi, B: LocalField) -> Tuple[LocalField, FieldElement]:
    space = power_classes(B, 2)
    for y in space.reps()[1:]:
        try:
            L, _ = adjoin_sqrt(B, y, name=f"{B.name}(√)")
        except _BUILD_ERRORS:
            continue
        if cuts_out(chi, L, B):
            logger.debug("quadratic part of %r: y with classes %s", chi, space.coords(y))
            return L, y
    raise ClassificationError(f"no quadratic extension of {B.name} cuts out {chi!r}")


def _quartic_part(chi, B: LocalField) -> LocalField:
    """Cyclic quartic L = B(sqrt y)(sqrt w) with Nm(w) = y modulo squares."""
    L2, y = _quadratic_part(chi ** 2, B)
    base_space = power_classes(B, 2)
    target = base_space.coords(y)
    space = power_classes(L2, 2)
    for w in space.reps()[1:]:
        if base_space.coords(w.norm(B)) != target:
            continue
        try:
            L, _ = adjoin_sqrt(L2, w, name=f"{B.name}(√,√)")
        except _BUILD_ERRORS:
            continue
        if cuts_out(chi, L, B):
            return L
    raise ClassificationError(f"no cyclic quartic extension of {B.name} cuts out {chi!r}")


# cubic parts


def kummer_cubics(B: LocalField) -> List[FieldElement]:
    """One radicand per cyclic cubic Kummer extension of B."""
    space = power_classes(B, 3)
    seen = set()
    out = []
    for x in space.reps()[1:]:
        c = space.coords(x)
        key = min(c, tuple((2 * a) % 3 for a in c))
        if key in seen:
            continue
        seen.add(key)
        out.append(x)
    return out


def shanks_cubic(B: LocalField, t: FieldElement) -> Polynomial:
    """x^3 - t x^2 - (t + 3) x - 1, cyclic over B whenever irreducible."""
    return Polynomial(B, [-1, -(t + 3), -t, 1])


def _shanks_parameters(B: LocalField, budget: int):
    rng = random.Random(conf.get("INERTIA_SEED"))
    for k in range(0, 2 * B.e * 3 + 2):
        for code in range(B.q):
            yield B.lift(code) * B.pi_power(-k)
    for _ in range(budget):
        k = rng.randrange(0, 2 * B.e * 3 + 2)
        yield B.random_element(rng, digits=k + 4) * B.pi_power(-k)


def _cubic_part(chi, B: LocalField) -> Tuple[LocalField, Polynomial]:
    if _mu3(B):
        for x in kummer_cubics(B):
            try:
                L = adjoin_radical(B, x, 3, name=f"{B.name}(∛)")
            except _BUILD_ERRORS:
                continue
            if cuts_out(chi, L, B):
                return L, Polynomial(B, [-x, 0, 0, 1])
        raise ClassificationError(f"no Kummer cubic of {B.name} cuts out {chi!r}")
    budget = conf.get("INERTIA_ENUMERATION_BUDGET")
    for t in _shanks_parameters(B, budget):
        g = shanks_cubic(B, t)
        try:
            L = adjoin_root(B, g, name=f"{B.name}(θ)")
        except _BUILD_ERRORS:
            continue
        if L.e == B.e:
            continue
        if cuts_out(chi, L, B):
            return L, g
    raise BudgetError(f"no cyclic cubic of {B.name} cuts out {chi!r} within {budget} candidates")


def kernel_field(chi, B: Optional[LocalField] = None) -> LocalField:
    """A field L/B with norm image ker(chi) in chi's context.

    Determined up to unramified twist; orders 2, 3, 4 and 6 are supported.
    """
    B = B or chi.ctx.K
    n = chi.order
    if n == 1:
        return B
    if n not in (2, 3, 4, 6):
        raise ClassificationError(f"characters of order {n} are not realised")
    two = n & -n
    three = n // two
    L = B
    if two == 2:
        L, _ = _quadratic_part(chi ** three, B)
    elif two == 4:
        L = _quartic_part(chi ** three, B)
    if three == 3:
        C, g = _cubic_part(chi ** two, B)
        if L is B:
            L = C
        else:
            L = adjoin_root(L, g.map(L), name=f"{L.name}·∛")
    logger.info("kernel field of %r: degree %d over %s, e=%d", chi, L.degree // B.degree, B.name, L.e // B.e)
    return L


def link(L: LocalField, B: LocalField, ctx: DlogContext, candidates) -> List:
    """The candidates (InertialTypes with characters on ctx) whose character cuts out L."""
    image = norm_image(L, B, ctx)
    size = quotient_order(ctx, image)
    out = []
    for tau in candidates:
        chi = tau.characters[0]
        if chi.order != size:
            continue
        if any(chi.at_vector(v) for v in image):
            continue
        out.append(tau)
    return out


def conductor_from_differents(L: LocalField, M1: LocalField, K: LocalField) -> int:
    """m(Ind_{M1}^{K} chi) for the character chi of M1 cut out by the cyclic quartic L/M1.

    By conductor-discriminant over the tower K < M1 < M < L with quadratic steps:
    m(chi) = (f(M/M1) d(L/M) + d(M/M1)) / 2 and m(psi_{M1/K}) = d(M1/K).
    """
    M = L.parent
    if M.parent is not M1 or M1.parent is not K:
        raise LevelError("expected the tower K < M1 < M < L of quadratic steps")
    d_LM = relative_different(L, M)
    d_MM1 = relative_different(M, M1)
    m_chi, rem = divmod((M.f // M1.f) * d_LM + d_MM1, 2)
    if rem:
        raise PrecisionError("odd discriminant exponent for a cyclic quartic")
    return m_chi + relative_different(M1, K)
