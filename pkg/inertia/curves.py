"""
Elliptic curves over LocalFields: Tate's algorithm, quadratic twists and
reduction probing over base change.
"""
import logging
from dataclasses import dataclass, field
from typing import Iterable, List, Optional, Sequence, Tuple

from .exceptions import ClassificationError, PrecisionError
from .localfield import FieldElement, LocalField, Scalar

logger = logging.getLogger(__name__)

INFINITY = 10 ** 9

# Kodaira symbols
I0 = "I0"
II = "II"
III = "III"
IV = "IV"
I0_STAR = "I0*"
IV_STAR = "IV*"
III_STAR = "III*"
II_STAR = "II*"

SEMISTABILITY_DEFECTS = {2: (1, 2, 3, 4, 6, 8, 24), 3: (1, 2, 3, 4, 6, 12)}


def _v(x: FieldElement) -> int:
    return x.valuation_or(INFINITY)


def _pdiv(x: FieldElement) -> bool:
    return x.is_zero() or x.valuation() > 0


class WeierstrassCurve:
    """y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6 over a LocalField."""

    def __init__(self, K: LocalField, coefficients: Sequence[Scalar]):
        if len(coefficients) != 5:
            raise ValueError("a Weierstrass model has five coefficients a1, a2, a3, a4, a6")
        self.K = K
        self.a1, self.a2, self.a3, self.a4, self.a6 = (K(c) for c in coefficients)
        if self.discriminant.is_zero():
            raise PrecisionError("singular model or discriminant lost at working precision")

    def __repr__(self):
        return f"<WeierstrassCurve over {self.K.name}>"

    @property
    def ainvs(self) -> Tuple[FieldElement, ...]:
        return (self.a1, self.a2, self.a3, self.a4, self.a6)

    @property
    def b2(self) -> FieldElement:
        return self.a1 * self.a1 + 4 * self.a2

    @property
    def b4(self) -> FieldElement:
        return 2 * self.a4 + self.a1 * self.a3

    @property
    def b6(self) -> FieldElement:
        return self.a3 * self.a3 + 4 * self.a6

    @property
    def b8(self) -> FieldElement:
        a1, a2, a3, a4, a6 = self.ainvs
        return a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4

    @property
    def c4(self) -> FieldElement:
        return self.b2 * self.b2 - 24 * self.b4

    @property
    def c6(self) -> FieldElement:
        return -(self.b2 ** 3) + 36 * self.b2 * self.b4 - 216 * self.b6

    @property
    def discriminant(self) -> FieldElement:
        b2, b4, b6, b8 = self.b2, self.b4, self.b6, self.b8
        return -b2 * b2 * b8 - 8 * b4 ** 3 - 27 * b6 * b6 + 9 * b2 * b4 * b6

    def j_valuation(self) -> int:
        """v(j) = 3 v(c4) - v(Delta); INFINITY-like when c4 vanishes."""
        return 3 * _v(self.c4) - self.discriminant.valuation()

    def potentially_good(self) -> bool:
        return self.j_valuation() >= 0

    def rst(self, r: Scalar = 0, s: Scalar = 0, t: Scalar = 0) -> "WeierstrassCurve":
        """Substitute x = x' + r, y = y' + s x' + t."""
        K = self.K
        r, s, t = K(r), K(s), K(t)
        a1, a2, a3, a4, a6 = self.ainvs
        return WeierstrassCurve(K, [
            a1 + 2 * s,
            a2 - s * a1 + 3 * r - s * s,
            a3 + r * a1 + 2 * t,
            a4 - s * a3 + 2 * r * a2 - (t + r * s) * a1 + 3 * r * r - 2 * s * t,
            a6 + r * a4 + r * r * a2 + r ** 3 - t * a3 - t * t - r * t * a1,
        ])

    def scale(self, u: Scalar) -> "WeierstrassCurve":
        """Model with a_i / u^i."""
        K = self.K
        u = K(u)
        inv = u.inverse()
        return WeierstrassCurve(K, [a * inv ** i for a, i in zip(self.ainvs, (1, 2, 3, 4, 6))])

    def integral_model(self) -> "WeierstrassCurve":
        k = 0
        for a, i in zip(self.ainvs, (1, 2, 3, 4, 6)):
            if not a.is_zero():
                k = max(k, -(a.valuation() // i))
        return self.scale(self.K.pi_power(-k)) if k > 0 else self

    def base_change(self, L: LocalField) -> "WeierstrassCurve":
        return WeierstrassCurve(L, [L(a) for a in self.ainvs])

    def moved_to(self, F: LocalField) -> "WeierstrassCurve":
        """The same curve over another copy of its field (same tower descriptor)."""
        if F is self.K:
            return self
        if F.descriptor() != self.K.descriptor():
            raise ClassificationError(f"{F!r} is not a copy of {self.K!r}")
        return WeierstrassCurve(F, [F.element(list(a.coords), shift=a.shift, prec=a.prec) for a in self.ainvs])

    def quadratic_twist(self, d: Scalar) -> "WeierstrassCurve":
        """E_d : y^2 = x^3 + d b2 x^2 + 8 d^2 b4 x + 16 d^3 b6."""
        d = self.K(d)
        if d.is_zero():
            raise ClassificationError("twist by zero")
        return WeierstrassCurve(self.K, [0, d * self.b2, 0, 8 * d * d * self.b4, 16 * d ** 3 * self.b6])


@dataclass
class ReductionData:
    model: WeierstrassCurve
    kodaira: str
    conductor: int
    discriminant_valuation: int
    tamagawa: int
    c4_valuation: int
    c6_valuation: int
    j_valuation: int

    @property
    def good(self) -> bool:
        return self.conductor == 0

    @property
    def multiplicative(self) -> bool:
        return self.conductor == 1

    def record(self):
        return {
            "kodaira": self.kodaira,
            "conductor": self.conductor,
            "v_disc": self.discriminant_valuation,
            "tamagawa": self.tamagawa,
            "v_c4": self.c4_valuation,
            "v_c6": self.c6_valuation,
            "v_j": self.j_valuation,
        }


def _root_count(F, coeffs: Sequence[int]) -> int:
    return len(F.roots(list(coeffs)))


def tate(E: WeierstrassCurve) -> ReductionData:
    """Tate's algorithm over E's field: minimal model, Kodaira symbol, conductor exponent."""
    K = E.K
    F = K.residue
    p = K.p
    pi = K.uniformizer
    C = E.integral_model()

    def preduce(x: FieldElement) -> FieldElement:
        return K.lift(x.residue())

    def root2(x: FieldElement) -> FieldElement:
        return K.lift(F.sqrt(x.residue()))

    def root3(x: FieldElement) -> FieldElement:
        return K.lift(F.cube_root(x.residue()))

    def residues(*xs: FieldElement) -> List[int]:
        return [x.residue() for x in xs]

    for _ in range(K.precision):
        disc = C.discriminant
        vD = disc.valuation()
        if vD == 0:
            return _result(C, I0, 0, vD, 1)

        # 1) move the singular point to (0, 0)
        a1, a2, a3, a4, a6 = C.ainvs
        b2, b4, b6 = C.b2, C.b4, C.b6
        if p == 2:
            if _pdiv(b2):
                r = root2(a4)
                t = root2(((r + a2) * r + a4) * r + a6)
            else:
                inv = a1.inverse()
                r = preduce(a3 * inv)
                t = preduce((r * r + a4) * inv)
        elif p == 3:
            r = root3(-b6) if _pdiv(b2) else preduce(-b4 * b2.inverse())
            t = preduce(a1 * r + a3)
        else:
            c4, c6 = C.c4, C.c6
            if _pdiv(c4):
                r = preduce(-b2 / 12)
            else:
                r = preduce(-(c6 + b2 * c4) / (12 * c4))
            t = preduce(-(a1 * r + a3) / 2)
        C = C.rst(r, 0, t)
        a1, a2, a3, a4, a6 = C.ainvs

        # 2) multiplicative reduction
        if not _pdiv(C.b2):
            disc_split = _root_count(F, residues(-a2, a1, K.one())) > 0
            cp = vD if disc_split else (2 if vD % 2 == 0 else 1)
            return _result(C, f"I{vD}", 1, vD, cp)

        # 3) II, III, IV
        if _v(a6) < 2:
            return _result(C, II, vD, vD, 1)
        if _v(C.b8) < 3:
            return _result(C, III, vD - 1, vD, 2)
        if _v(C.b6) < 3:
            split = _root_count(F, residues(-a6 / pi ** 2, a3 / pi, K.one())) > 0
            return _result(C, IV, vD - 2, vD, 3 if split else 1)

        # 4) pi | a1, a2; pi^2 | a3, a4; pi^3 | a6
        if p == 2:
            s = root2(a2)
            t = pi * root2(a6 / pi ** 2)
        elif p == 3:
            s = a1
            t = a3
        else:
            s = -a1 / 2
            t = -a3 / 2
        C = C.rst(0, s, t)
        a1, a2, a3, a4, a6 = C.ainvs

        b = a2 / pi
        c = a4 / pi ** 2
        d = a6 / pi ** 3
        w = 27 * d * d - b * b * c * c + 4 * b ** 3 * d - 18 * b * c * d + 4 * c ** 3
        x = 3 * c - b * b

        # 5) I0*: distinct roots of T^3 + bT^2 + cT + d
        if not _pdiv(w):
            roots = _root_count(F, residues(d, c, b, K.one()))
            return _result(C, I0_STAR, vD - 4, vD, 1 + roots)

        # 6) In*: one double root
        if not _pdiv(x):
            if p == 2:
                r = root2(c)
            elif p == 3:
                r = preduce(c * b.inverse())
            else:
                r = preduce((b * c - 9 * d) / (2 * x))
            C = C.rst(pi * r, 0, 0)
            ix, iy = 3, 3
            mx, my = pi ** 2, pi ** 2
            while True:
                a1, a2, a3, a4, a6 = C.ainvs
                a2t = a2 / pi
                a3t = a3 / my
                a4t = a4 / (pi * mx)
                a6t = a6 / (mx * my)
                if not _pdiv(a3t * a3t + 4 * a6t):
                    split = _root_count(F, residues(-a6t, a3t, K.one())) > 0
                    cp = 4 if split else 2
                    break
                t = my * (root2(a6t) if p == 2 else preduce(-a3t / 2))
                C = C.rst(0, 0, t)
                my = my * pi
                iy += 1
                a1, a2, a3, a4, a6 = C.ainvs
                a2t = a2 / pi
                a3t = a3 / my
                a4t = a4 / (pi * mx)
                a6t = a6 / (mx * my)
                if not _pdiv(a4t * a4t - 4 * a6t * a2t):
                    split = _root_count(F, residues(a6t, a4t, a2t)) > 0
                    cp = 4 if split else 2
                    break
                r = mx * (root2(a6t * a2t.inverse()) if p == 2 else preduce(-a4t / (2 * a2t)))
                C = C.rst(r, 0, 0)
                mx = mx * pi
                ix += 1
                if ix + iy > 4 * K.precision * K.e:
                    raise PrecisionError("In* ladder did not terminate at working precision")
            n = ix + iy - 5
            return _result(C, f"I{n}*", vD + 1 - ix - iy, vD, cp)

        # 7) triple root: IV*, III*, II* or non-minimal
        if p == 2:
            r = preduce(b)
        elif p == 3:
            r = root3(-d)
        else:
            r = preduce(-b / 3)
        C = C.rst(pi * r, 0, 0)
        a1, a2, a3, a4, a6 = C.ainvs
        x3 = a3 / pi ** 2
        x6 = a6 / pi ** 4
        if not _pdiv(x3 * x3 + 4 * x6):
            split = _root_count(F, residues(-x6, x3, K.one())) > 0
            return _result(C, IV_STAR, vD - 6, vD, 3 if split else 1)
        t = pi ** 2 * (root2(x6) if p == 2 else preduce(-x3 / 2))
        C = C.rst(0, 0, t)
        a1, a2, a3, a4, a6 = C.ainvs
        if _v(a4) < 4:
            return _result(C, III_STAR, vD - 7, vD, 2)
        if _v(a6) < 6:
            return _result(C, II_STAR, vD - 8, vD, 1)

        # 8) non-minimal: scale by pi and start again
        logger.debug("non-minimal model at v(Delta)=%d, rescaling", vD)
        C = C.scale(pi)
    raise PrecisionError("Tate's algorithm did not terminate at working precision")


def _result(C: WeierstrassCurve, kodaira: str, conductor: int, vD: int, cp: int) -> ReductionData:
    return ReductionData(
        model=C,
        kodaira=kodaira,
        conductor=conductor,
        discriminant_valuation=vD,
        tamagawa=cp,
        c4_valuation=_v(C.c4),
        c6_valuation=_v(C.c6),
        j_valuation=3 * _v(C.c4) - vD,
    )


def quadratic_twist(E: WeierstrassCurve, d: Scalar) -> WeierstrassCurve:
    return E.quadratic_twist(d)


def good_reduction_over(E: WeierstrassCurve, L: LocalField) -> bool:
    """Whether the base change of E to L has good reduction."""
    return tate(E.base_change(L)).good


def tame_defect(E: WeierstrassCurve) -> int:
    """e = 12 / gcd(12, v(Delta_min)) for p >= 5 and potentially good reduction."""
    if E.K.p < 5:
        raise ClassificationError("the tame defect formula needs p >= 5")
    data = tate(E)
    vD = data.discriminant_valuation
    for e in (1, 2, 3, 4, 6, 12):
        if (e * vD) % 12 == 0:
            return e
    return 12  # pragma: no cover


@dataclass
class DefectReport:
    e: int
    witness: Optional[object] = None
    probed: List[str] = field(default_factory=list)

    def record(self):
        return {"e": self.e, "witness": getattr(self.witness, "name", None), "probed": list(self.probed)}


def semistability_defect(E: WeierstrassCurve, candidates: Iterable) -> DefectReport:
    """Smallest e with good reduction over a candidate field of ramification degree e.

    ``candidates`` yields objects with ``e``, ``name`` and ``local_field()``; they are probed in
    increasing e, in the given order within one degree.
    """
    data = tate(E)
    if data.good:
        return DefectReport(1)
    if data.j_valuation < 0:
        raise ClassificationError("potentially multiplicative curves have no finite defect")
    probed: List[str] = []
    for entry in sorted(candidates, key=lambda c: c.e):
        if entry.e == 1:
            continue
        if good_reduction_over(E, entry.local_field()):
            logger.info("good reduction over %s (e=%d)", entry.name, entry.e)
            return DefectReport(entry.e, entry, probed)
        probed.append(entry.name)
    raise ClassificationError("catalog incomplete: no candidate field gives good reduction")
