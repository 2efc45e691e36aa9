"""
Fields cut out by exceptional types over Q_4.

Every such field L is a quadratic extension of an A_4-extension M of Q_4 built on a
cyclic cubic Kummer field K:

1. K = Q_4(cuberoot(beta)) for the four cube classes beta of Q_4 up to inverse
2. M = K(sqrt m, sqrt sigma(m)) for the Gal(K/Q_4)-orbits of square classes with
   m * sigma(m) * sigma^2(m) a square and m != sigma(m)
3. L = M(sqrt x) for the square classes x of M fixed by Gal(M/Q_4) whose quadratic
   extension has Gal(L/K) = Q_8, i.e. Gal(L/Q_4) = SL(2, F_3)

Fields differing by the unramified quadratic class are twins with the same L^un.
"""
import logging
from dataclasses import dataclass, field
from itertools import product
from typing import Dict, List, Optional, Sequence, Tuple

from .classfield import conductor_from_differents
from .exceptions import CatalogError, ClassificationError
from .extensions import adjoin_radical, adjoin_sqrt
from .galois import (
    Embedding,
    automorphisms,
    close,
    fixed_square_classes,
    identify,
    is_quaternion_lift,
    order_census,
)
from .localfield import FieldElement, LocalField
from .polynomials import Polynomial, roots_in_field
from .powerclasses import power_classes
from .tables import EXCEPTIONAL_CENSUS

logger = logging.getLogger(__name__)

Vector = Tuple[int, ...]


@dataclass
class CubicKummer:
    index: int
    radicand: str
    field: LocalField
    sigma: Embedding

    @property
    def ramified(self) -> bool:
        return self.field.e > self.field.parent.e


@dataclass
class TowerRecord:
    cubic: int
    orbit: int
    m: Vector
    x: Vector
    field: LocalField
    e: int
    conductor: int
    cubic_conductor: int
    twin: Optional[int] = None
    label: str = ""
    galois: str = "SL(2,3)"
    subfields: List[str] = field(default_factory=list)

    @property
    def signature(self) -> Tuple:
        return (self.cubic, self.orbit, self.x)

    def record(self) -> Dict:
        return {
            "label": self.label,
            "cubic": self.cubic,
            "orbit": self.orbit,
            "m": list(self.m),
            "x": list(self.x),
            "e": self.e,
            "m_tau": self.conductor,
            "m_cubic": self.cubic_conductor,
            "twin": self.twin,
            "galois": self.galois,
        }


def cube_root_of_unity(F: LocalField) -> FieldElement:
    roots = roots_in_field(F, Polynomial.from_ints(F, [1, 1, 1]))
    if not roots:
        raise ClassificationError(f"{F.name} has no primitive cube root of unity")
    return min(roots, key=lambda r: r.int_coords())


def cubic_kummer_fields(F: LocalField) -> List[CubicKummer]:
    """The four cyclic cubic extensions of F: cube roots of 2, 2w, 2w^2 and w."""
    w = cube_root_of_unity(F)
    radicands = [(F(2), "2"), (2 * w, "2ω"), (2 * w * w, "2ω²"), (w, "ω")]
    out = []
    for index, (beta, name) in enumerate(radicands, start=1):
        K = adjoin_radical(F, beta, 3, name=f"C{index}", gen_name="k")
        kappa = K.root
        target = K(w) * kappa
        sigma = next((s for s in automorphisms(K, F) if close(s(kappa), target)), None)
        if sigma is None:
            raise CatalogError(f"cube root of {name}: no automorphism k -> ωk")
        out.append(CubicKummer(index, name, K, sigma))
    return out


def _times(vec: Sequence[int], A: Sequence[Sequence[int]]) -> Vector:
    n = len(A[0])
    return tuple(sum(vec[i] * A[i][j] for i in range(len(vec))) % 2 for j in range(n))


def valid_orbits(C: CubicKummer) -> List[Tuple[Vector, Vector]]:
    """(m, sigma(m)) per orbit with m + sigma m + sigma^2 m = 0 and m != sigma m, in class order."""
    space = power_classes(C.field, 2)
    A = [space.coords(C.sigma(b)) for b in space.basis]
    seen = set()
    out = []
    for vec in product((0, 1), repeat=space.dim):
        if not any(vec) or vec in seen:
            continue
        v1 = _times(vec, A)
        v2 = _times(v1, A)
        if v1 == vec:
            continue
        if any((a + b + c) % 2 for a, b, c in zip(vec, v1, v2)):
            continue
        seen.update({vec, v1, v2})
        out.append((vec, v1))
    return out


def compositum(C: CubicKummer, m_vec: Vector, orbit: int) -> Tuple[LocalField, LocalField]:
    """(K(sqrt m), M) for one orbit."""
    K = C.field
    space = power_classes(K, 2)
    m = space.element(m_vec)
    K1, _ = adjoin_sqrt(K, m, name=f"C{C.index}.{orbit}a", gen_name="s")
    M, _ = adjoin_sqrt(K1, K1(C.sigma(m)), name=f"M{C.index}.{orbit}", gen_name="t")
    return K1, M


def _restricts_to(s: Embedding, K: LocalField, sigma: Optional[Embedding]) -> bool:
    kappa = K.step_gen
    image = s(kappa)
    if sigma is None:
        return close(image, s.target(kappa))
    return close(image, s.target(sigma(kappa)))


def exceptional_towers(F: LocalField, *, check: bool = True) -> List[TowerRecord]:
    """Every field L with Gal(L/F) = SL(2, F_3) cut out by an exceptional type, with twins paired."""
    census = EXCEPTIONAL_CENSUS
    cubics = cubic_kummer_fields(F)
    if check and len(cubics) != census["cubics"]:
        raise CatalogError(f"{len(cubics)} cubic Kummer fields, expected {census['cubics']}")
    delta = power_classes(F, 2).delta
    records: List[TowerRecord] = []
    for C in cubics:
        K = C.field
        orbits = valid_orbits(C)
        logger.info("cubic %s: %d admissible orbits", C.radicand, len(orbits))
        if check and len(orbits) != census["orbits_per_cubic"]:
            raise CatalogError(f"cubic {C.radicand}: {len(orbits)} orbits, expected {census['orbits_per_cubic']}")
        for orbit, (m_vec, _) in enumerate(orbits, start=1):
            K1, M = compositum(C, m_vec, orbit)
            group = automorphisms(M, F)
            if len(group) != 12:
                raise CatalogError(f"{M.name}: {len(group)} automorphisms over {F.name}, expected 12")
            name = identify(order_census(group))
            if name != "A4":
                raise CatalogError(f"{M.name}: Galois group {name}, expected A4")
            space = power_classes(M, 2)
            if check and space.dim != census["square_class_dimension"]:
                raise CatalogError(f"{M.name}: square classes of dimension {space.dim}")
            over_k = [s for s in group if _restricts_to(s, K, None)]
            rotation = next(s for s in group if _restricts_to(s, K, C.sigma))
            fixed = fixed_square_classes(M, [rotation] + over_k)
            if check and len(fixed) not in census["fixed_dimensions"]:
                raise CatalogError(f"{M.name}: fixed space of dimension {len(fixed)}")
            for coeffs in product((0, 1), repeat=len(fixed)):
                if not any(coeffs):
                    continue
                x_vec = tuple(sum(c * b[i] for c, b in zip(coeffs, fixed)) % 2 for i in range(space.dim))
                x = space.element(x_vec)
                if not is_quaternion_lift(over_k, x):
                    continue
                L, _ = adjoin_sqrt(M, x, name=f"L{C.index}.{orbit}.{len(records) + 1}", gen_name="r")
                m_K = conductor_from_differents(L, K1, K)
                e_K = K.e // F.e
                m_tau, rem = divmod(m_K + 2 * (e_K - 1), e_K)
                if rem:
                    raise CatalogError(f"{L.name}: cubic conductor {m_K} does not descend")
                records.append(TowerRecord(
                    cubic=C.index, orbit=orbit, m=m_vec, x=x_vec, field=L,
                    e=L.e // F.e, conductor=m_tau, cubic_conductor=m_K,
                    subfields=[K1.name, M.name],
                ))
            logger.info("%s: %d fields so far", M.name, len(records))
            _pair_twins(records, space, M(delta))
    if check and len(records) != census["fields"]:
        raise CatalogError(f"{len(records)} exceptional fields, expected {census['fields']}")
    unpaired = [r for r in records if r.twin is None]
    if unpaired:
        raise CatalogError(f"{len(unpaired)} exceptional fields without an unramified twin")
    return records


def _pair_twins(records: List[TowerRecord], space, delta: FieldElement):
    d = space.coords(delta)
    if not any(d):
        raise CatalogError("unramified class is a square")
    by_key = {(r.cubic, r.orbit, r.x): i for i, r in enumerate(records)}
    for i, r in enumerate(records):
        if r.twin is not None:
            continue
        twin = tuple((a + b) % 2 for a, b in zip(r.x, d))
        j = by_key.get((r.cubic, r.orbit, twin))
        if j is not None:
            r.twin = j
            records[j].twin = i


def representatives(records: Sequence[TowerRecord]) -> List[TowerRecord]:
    """One record per twin pair: the one with the smaller class vector."""
    return [r for i, r in enumerate(records) if r.twin is None or (r.x, i) < (records[r.twin].x, r.twin)]


def assign_labels(records: Sequence[TowerRecord]) -> None:
    """tau_ex(m,e)_j numbered by (m, e, cubic, orbit, class); twins share the label."""
    reps = sorted(representatives(records), key=lambda r: (r.conductor, r.e, r.signature))
    counts: Dict[Tuple[int, int], int] = {}
    for r in reps:
        key = (r.conductor, r.e)
        counts[key] = counts.get(key, 0) + 1
        r.label = f"τ_ex({r.conductor},{r.e})_{counts[key]}"
        if r.twin is not None:
            records[r.twin].label = r.label


def conductor_census(records: Sequence[TowerRecord]) -> Dict[int, int]:
    out: Dict[int, int] = {}
    for r in representatives(records):
        out[r.conductor] = out.get(r.conductor, 0) + 1
    return dict(sorted(out.items()))
