"""Polynomials over tower fields: Newton polygons, Hensel lifting and root finding."""
import logging
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from .exceptions import HenselError, PrecisionError
from .localfield import FieldElement, LocalField, Scalar

logger = logging.getLogger(__name__)


class Polynomial:
    """Polynomial with FieldElement coefficients, stored low degree first."""

    def __init__(self, field: LocalField, coeffs: Sequence[Scalar]):
        self.field = field
        cs = [field(c) for c in coeffs]
        while len(cs) > 1 and cs[-1].is_zero():
            cs.pop()
        self.coeffs: List[FieldElement] = cs or [field.zero()]

    @classmethod
    def from_ints(cls, field: LocalField, coeffs: Sequence[int]) -> "Polynomial":
        return cls(field, [field(c) for c in coeffs])

    @classmethod
    def monomial(cls, field: LocalField, degree: int, c: Scalar = 1) -> "Polynomial":
        return cls(field, [0] * degree + [c])

    @property
    def degree(self) -> int:
        if len(self.coeffs) == 1 and self.coeffs[0].is_zero():
            return -1
        return len(self.coeffs) - 1

    @property
    def leading(self) -> FieldElement:
        return self.coeffs[-1]

    def __repr__(self):
        return f"Polynomial(deg={self.degree}, field={self.field.name})"

    def map(self, L: LocalField) -> "Polynomial":
        return Polynomial(L, [L(c) for c in self.coeffs])

    def monic(self) -> "Polynomial":
        inv = self.leading.inverse()
        return Polynomial(self.field, [c * inv for c in self.coeffs[:-1]] + [self.field.one()])

    def __call__(self, x: Scalar) -> FieldElement:
        if isinstance(x, FieldElement) and x.field is not self.field:
            x, coeffs = x, [x.field(c) for c in self.coeffs]
        else:
            x = self.field(x)
            coeffs = self.coeffs
        acc = x.field.zero()
        for c in reversed(coeffs):
            acc = acc * x + c
        return acc

    def derivative(self) -> "Polynomial":
        if len(self.coeffs) == 1:
            return Polynomial(self.field, [0])
        return Polynomial(self.field, [c * i for i, c in enumerate(self.coeffs)][1:])

    def __add__(self, other: "Polynomial") -> "Polynomial":
        n = max(len(self.coeffs), len(other.coeffs))
        zero = self.field.zero()
        a = self.coeffs + [zero] * (n - len(self.coeffs))
        b = other.coeffs + [zero] * (n - len(other.coeffs))
        return Polynomial(self.field, [x + y for x, y in zip(a, b)])

    def __neg__(self) -> "Polynomial":
        return Polynomial(self.field, [-c for c in self.coeffs])

    def __sub__(self, other: "Polynomial") -> "Polynomial":
        return self + (-other)

    def __mul__(self, other) -> "Polynomial":
        if not isinstance(other, Polynomial):
            c = self.field(other)
            return Polynomial(self.field, [a * c for a in self.coeffs])
        out = [self.field.zero()] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a.is_zero():
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] = out[i + j] + a * b
        return Polynomial(self.field, out)

    __rmul__ = __mul__

    def divmod_monic(self, g: "Polynomial") -> Tuple["Polynomial", "Polynomial"]:
        """Division by a monic polynomial."""
        n = g.degree
        rem = list(self.coeffs)
        if len(rem) <= n:
            return Polynomial(self.field, [0]), Polynomial(self.field, rem)
        quot = [self.field.zero()] * (len(rem) - n)
        for k in range(len(rem) - 1 - n, -1, -1):
            c = rem[k + n]
            quot[k] = c
            if c.is_zero():
                continue
            for j in range(n):
                rem[k + j] = rem[k + j] - c * g.coeffs[j]
        return Polynomial(self.field, quot), Polynomial(self.field, rem[:n] or [0])

    def compose_linear(self, a: Scalar, b: Scalar) -> "Polynomial":
        """f(a + b*t) as a polynomial in t."""
        a, b = self.field(a), self.field(b)
        result = Polynomial(self.field, [0])
        lin = Polynomial(self.field, [a, b])
        for c in reversed(self.coeffs):
            result = result * lin + Polynomial(self.field, [c])
        return result

    def scale_variable(self, c: Scalar) -> "Polynomial":
        """f(c*x)."""
        c = self.field(c)
        out, power = [], self.field.one()
        for coeff in self.coeffs:
            out.append(coeff * power)
            power = power * c
        return Polynomial(self.field, out)

    def min_valuation(self) -> int:
        return min(c.valuation() for c in self.coeffs if not c.is_zero())

    def divide_by_pi_power(self, k: int) -> "Polynomial":
        pik = self.field.pi_power(-k) if k else self.field.one()
        return Polynomial(self.field, [c * pik for c in self.coeffs])

    def primitive_part(self) -> "Polynomial":
        return self.divide_by_pi_power(self.min_valuation())

    def newton_polygon(self) -> List[Tuple[int, int]]:
        """Vertices (i, v(c_i)) of the lower convex hull."""
        points = [(i, c.valuation()) for i, c in enumerate(self.coeffs) if not c.is_zero()]
        hull: List[Tuple[int, int]] = []
        for pt in points:
            while len(hull) >= 2:
                (x1, y1), (x2, y2) = hull[-2], hull[-1]
                if (y2 - y1) * (pt[0] - x1) >= (pt[1] - y1) * (x2 - x1):
                    hull.pop()
                else:
                    break
            hull.append(pt)
        return hull

    def slopes(self) -> List[Tuple[Fraction, int]]:
        """(slope, length) of each Newton polygon segment."""
        hull = self.newton_polygon()
        return [
            (Fraction(y2 - y1, x2 - x1), x2 - x1)
            for (x1, y1), (x2, y2) in zip(hull, hull[1:])
        ]

    def is_eisenstein(self) -> bool:
        if self.degree < 1 or not (self.leading - 1).is_zero():
            return False
        c0 = self.coeffs[0]
        if c0.is_zero() or c0.valuation() != 1:
            return False
        return all(c.is_zero() or c.valuation() >= 1 for c in self.coeffs[1:-1])

    def reduction(self) -> List[int]:
        """Residue polynomial as codes, low degree first (integral coefficients)."""
        return self.field.residue.poly_trim([c.residue() for c in self.coeffs])


def newton_iterate(g: Polynomial, x: FieldElement, dg: Optional[Polynomial] = None) -> FieldElement:
    dg = dg or g.derivative()
    K = x.field
    for _ in range((K.e * K.precision).bit_length() + 4):
        gx = g(x)
        if gx.is_zero():
            return x
        step = gx / dg(x)
        x = x - step
        if step.is_zero():
            return x
    return x


def hensel_root(K: LocalField, g: Polynomial, x0: Scalar) -> FieldElement:
    """Root of g near x0 under the strong Hensel hypothesis v(g(x0)) > 2 v(g'(x0))."""
    x0 = K(x0)
    if g.field is not K:
        g = g.map(K)
    dg = g.derivative()
    gx, dgx = g(x0), dg(x0)
    if dgx.is_zero():
        raise HenselError("no certified root from this seed: g'(x0) vanishes")
    if not gx.is_zero() and gx.valuation() <= 2 * dgx.valuation():
        raise HenselError("no certified root from this seed")
    root = newton_iterate(g, x0, dg)
    if not g(root).is_zero():
        raise PrecisionError("Newton iteration did not converge at working precision")
    return root


def roots_in_field(K: LocalField, g: Polynomial) -> List[FieldElement]:
    """All roots of a separable polynomial g in K."""
    if g.field is not K:
        g = g.map(K)
    if g.degree < 1:
        return []
    roots: List[FieldElement] = []
    coeffs = list(g.coeffs)
    while len(coeffs) > 1 and coeffs[0].is_zero():
        coeffs.pop(0)
        if not any(r.is_zero() for r in roots):
            roots.append(K.zero())
    g = Polynomial(K, coeffs)
    if g.degree < 1:
        return roots
    for slope, _ in g.slopes():
        if slope.denominator != 1:
            continue
        r = -int(slope)
        h = g.scale_variable(K.pi_power(r)).primitive_part()
        pi_r = K.pi_power(r)
        for y in _integral_roots(h, depth=0, units_only=True):
            roots.append(y * pi_r)
    polished = []
    dg = g.derivative()
    for r in roots:
        if r.is_zero():
            polished.append(r)
            continue
        try:
            polished.append(newton_iterate(g, r, dg))
        except PrecisionError:
            polished.append(r)
    return polished


def _integral_roots(h: Polynomial, depth: int, units_only: bool = False) -> List[FieldElement]:
    K = h.field
    F = K.residue
    if depth > K.e * K.precision:
        raise PrecisionError("precision insufficient to separate root clusters")
    hbar = h.reduction()
    if len(hbar) <= 1:
        return []
    found: List[FieldElement] = []
    pi = K.uniformizer
    for z in F.roots(hbar):
        if units_only and z == 0:
            continue
        y0 = K.lift(z)
        if F.root_multiplicity(hbar, z) == 1:
            found.append(newton_iterate(h, y0))
            continue
        h1 = h.compose_linear(y0, pi)
        if all(c.is_zero() for c in h1.coeffs):
            raise PrecisionError("precision insufficient to separate root clusters")
        h1 = h1.primitive_part()
        for t in _integral_roots(h1, depth + 1):
            found.append(y0 + pi * t)
    return found
