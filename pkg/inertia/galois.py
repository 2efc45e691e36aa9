"""
Embeddings and automorphisms of tower fields, and identification of small Galois groups.

An embedding is stored as the images of the step generators of every level above a
fixed lower level; applying it evaluates the tower coordinates of an element at
those images, one level at a time.
"""
import logging
from collections import Counter
from typing import Dict, List, Optional, Sequence, Tuple

from sympy.combinatorics import Permutation, PermutationGroup

from .exceptions import LevelError, PrecisionError
from .localfield import FieldElement, LocalField
from .polynomials import Polynomial, roots_in_field
from .powerclasses import nullspace_mod, power_classes

logger = logging.getLogger(__name__)

Vector = Tuple[int, ...]

# element-order census of the groups the catalog meets
CENSUS = {
    "C2": {1: 1, 2: 1},
    "C3": {1: 1, 3: 2},
    "C4": {1: 1, 2: 1, 4: 2},
    "C2xC2": {1: 1, 2: 3},
    "C6": {1: 1, 2: 1, 3: 2, 6: 2},
    "S3": {1: 1, 2: 3, 3: 2},
    "C8": {1: 1, 2: 1, 4: 2, 8: 4},
    "C4xC2": {1: 1, 2: 3, 4: 4},
    "C2^3": {1: 1, 2: 7},
    "D4": {1: 1, 2: 5, 4: 2},
    "Q8": {1: 1, 2: 1, 4: 6},
    "A4": {1: 1, 2: 3, 3: 8},
    "C12": {1: 1, 2: 1, 3: 2, 4: 2, 6: 2, 12: 4},
    "D6": {1: 1, 2: 7, 3: 2, 6: 2},
    "Dic3": {1: 1, 2: 1, 3: 2, 4: 6, 6: 2},
    "SL(2,3)": {1: 1, 2: 1, 3: 8, 4: 6, 6: 8},
}


def close(x: FieldElement, y: FieldElement) -> bool:
    """x and y agree to half the working precision."""
    K = x.field
    d = x - y
    return d.valuation_or(10 ** 9) >= K.e * (K.precision // 2)


class Embedding:
    """Field map from ``source`` into ``target`` fixing the level ``over``."""

    def __init__(self, source: LocalField, target: LocalField, over: LocalField, images: Sequence[FieldElement]):
        levels = [lv for lv in source.tower() if lv.depth > over.depth]
        if len(images) != len(levels):
            raise LevelError("one image per tower level above the fixed field expected")
        if not target.has_level(over):
            raise LevelError(f"{over!r} is not a level of {target!r}")
        self.source = source
        self.target = target
        self.over = over
        self.images = tuple(target(x) for x in images)
        self._by_depth = {lv.depth: img for lv, img in zip(levels, self.images)}

    def __repr__(self):
        return f"<Embedding {self.source.name} -> {self.target.name} over {self.over.name}>"

    def __call__(self, x: FieldElement) -> FieldElement:
        return self._apply(self.source(x))

    def _apply(self, x: FieldElement) -> FieldElement:
        L = x.field
        if L.depth <= self.over.depth:
            return self.target(x)
        blocks = L.split_blocks(x)
        g = self._by_depth[L.depth]
        acc = self.target.zero()
        for b in reversed(blocks):
            acc = acc * g + self._apply(b)
        return acc

    def then(self, other: "Embedding") -> "Embedding":
        """other o self."""
        levels = [lv for lv in self.source.tower() if lv.depth > self.over.depth]
        return Embedding(self.source, other.target, self.over, [other(self._by_depth[lv.depth]) for lv in levels])

    def same_as(self, other: "Embedding") -> bool:
        return all(close(a, b) for a, b in zip(self.images, other.images))

    def is_identity(self) -> bool:
        levels = [lv for lv in self.source.tower() if lv.depth > self.over.depth]
        return all(close(img, self.target(lv.step_gen)) for lv, img in zip(levels, self.images))


def embeddings(L: LocalField, T: LocalField, over: Optional[LocalField] = None) -> List[Embedding]:
    """All embeddings of L into T that fix ``over`` (default: the base field of L)."""
    over = over or L.ground
    if not L.has_level(over):
        raise LevelError(f"{over!r} is not a level of {L!r}")
    levels = [lv for lv in L.tower() if lv.depth > over.depth]
    partial: List[List[FieldElement]] = [[]]
    for level in levels:
        extended = []
        for images in partial:
            emb = Embedding(level.parent, T, over, images)
            g = Polynomial(T, [emb(c) for c in level.poly] + [T.one()])
            for r in roots_in_field(T, g):
                extended.append(images + [r])
        partial = extended
        if not partial:
            break
    return [Embedding(L, T, over, images) for images in partial]


def automorphisms(L: LocalField, over: Optional[LocalField] = None) -> List[Embedding]:
    """Aut(L/over), identity first."""
    auts = embeddings(L, L, over)
    auts.sort(key=lambda s: not s.is_identity())
    logger.debug("%s: %d automorphisms", L.name, len(auts))
    return auts


def index_of(sigma: Embedding, group: Sequence[Embedding]) -> int:
    for i, tau in enumerate(group):
        if sigma.same_as(tau):
            return i
    raise PrecisionError("composition left the automorphism list")


def multiplication_table(group: Sequence[Embedding]) -> List[List[int]]:
    """table[i][j] = index of group[i] o group[j]."""
    return [[index_of(b.then(a), group) for b in group] for a in group]


def permutation_group(group: Sequence[Embedding]) -> PermutationGroup:
    """Left regular representation as a sympy permutation group."""
    table = multiplication_table(group)
    return PermutationGroup([Permutation(row) for row in table])


def order_census(group: Sequence[Embedding]) -> Dict[int, int]:
    """Number of elements of each order."""
    G = permutation_group(group)
    if G.order() != len(group):
        raise PrecisionError("automorphisms do not close under composition")
    return dict(sorted(Counter(g.order() for g in G.elements).items()))


def identify(census: Dict[int, int]) -> str:
    for name, pattern in CENSUS.items():
        if pattern == census:
            return name
    n = sum(census.values())
    if census.get(n) and n > 1:
        return f"C{n}"
    return "order %d %s" % (n, dict(census))


# square classes under automorphisms


def action_matrix(sigma: Embedding) -> List[Vector]:
    """Rows: square-class coordinates of sigma(b) for the basis b of L^x/(L^x)^2."""
    space = power_classes(sigma.source, 2)
    return [space.coords(sigma(b)) for b in space.basis]


def fixed_square_classes(L: LocalField, group: Sequence[Embedding]) -> List[Vector]:
    """Basis of the classes x in L^x/(L^x)^2 with sigma(x) = x for every sigma."""
    space = power_classes(L, 2)
    n = space.dim
    rows: List[List[int]] = []
    for sigma in group:
        if sigma.is_identity():
            continue
        A = action_matrix(sigma)
        # x A = x  <=>  (A - I)^T x^T = 0
        for j in range(n):
            rows.append([(A[i][j] - (1 if i == j else 0)) % 2 for i in range(n)])
    basis = nullspace_mod(rows, n, 2)
    logger.debug("%s: fixed square classes of dimension %d", L.name, len(basis))
    return basis


def lift_order_is_four(sigma: Embedding, x: FieldElement) -> bool:
    """For an involution sigma with sigma(x) = r^2 x, whether its lifts to L(sqrt x) have order 4.

    The lift sends sqrt(x) to r sqrt(x); its square sends sqrt(x) to sigma(r) r sqrt(x)
    and sigma(r) r = -1 exactly when the lift has order 4.
    """
    L = sigma.source
    ratio = sigma(x) / x
    roots = roots_in_field(L, Polynomial(L, [-ratio, 0, L.one()]))
    if not roots:
        raise PrecisionError("class is not fixed by the automorphism")
    r = roots[0]
    return close(sigma(r) * r, L(-1))


def involutions(group: Sequence[Embedding]) -> List[Embedding]:
    out = []
    for s in group:
        if s.is_identity():
            continue
        if s.then(s).is_identity():
            out.append(s)
    return out


def is_quaternion_lift(group: Sequence[Embedding], x: FieldElement) -> bool:
    """Gal(M(sqrt x)/F) has a quaternion 2-part: every involution of Gal(M/F) lifts to order 4."""
    invs = involutions(group)
    return bool(invs) and all(lift_order_is_four(s, x) for s in invs)
