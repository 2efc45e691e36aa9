"""
Finite extensions of Q_p presented as towers of unramified and eisenstein steps.

Layout of an element of a tower field L:

- flat coordinates c_I over the power basis of the tower, the index of a level
  being I = i_top * D_parent + I_parent, so ancestors occupy the first slots
- value = p^shift * sum(c_I * basis_I), coordinates known modulo p^prec
- normalized: some coordinate is prime to p, or the element is zero

The power basis of every step is an integral basis, so an element is integral
exactly when its shift is >= 0 and v(x) = min(e * v_p(c_I) + w(I)) where w(I)
is the uniformizer valuation of basis_I.
"""
import logging
from fractions import Fraction
from functools import cached_property
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

from sympy import factorint, isprime

from . import conf
from .exceptions import LevelError, PrecisionError, PresentationError
from .residue import ResidueField, mul_coords

logger = logging.getLogger(__name__)

BASE = "base"
UNRAMIFIED = "unramified"
EISENSTEIN = "eisenstein"

Scalar = Union[int, Fraction, "FieldElement"]


def _vp(n: int, p: int) -> int:
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


class LocalField:
    """One level of a tower over Q_p.

    Build fields with make_base_field and the functions of inertia.extensions;
    the constructor is the low-level step builder.
    """

    def __init__(
        self,
        p: int,
        *,
        parent: Optional["LocalField"] = None,
        kind: str = BASE,
        poly: Sequence["FieldElement"] = (),
        precision: Optional[int] = None,
        name: str = "",
        gen_name: str = "",
    ):
        self.p = p
        self.parent = parent
        self.kind = kind
        self.name = name or (f"Q{p}" if parent is None else "")
        self.gen_name = gen_name
        self.precision = precision if precision is not None else (
            parent.precision if parent is not None else conf.get("INERTIA_PRECISION")
        )
        self.modulus = p ** self.precision

        if parent is None:
            self.n = 1
            self.degree = 1
            self.e = 1
            self.f = 1
            self.weights: List[int] = [0]
            self.res_indices: List[int] = [0]
            self._steps: Tuple = ()
            self.poly: Tuple["FieldElement", ...] = ()
            self.residue = ResidueField(p)
            self.depth = 0
        else:
            if kind not in (UNRAMIFIED, EISENSTEIN):
                raise PresentationError(f"unknown step kind {kind!r}")
            self.n = len(poly)
            if self.n < 2:
                raise PresentationError("a tower step needs degree >= 2")
            self.poly = tuple(parent(c) for c in poly)
            self.degree = parent.degree * self.n
            self.depth = parent.depth + 1
            coeff_coords = tuple(tuple(c.int_coords()) for c in self.poly)
            self._steps = parent._steps + ((self.n, coeff_coords),)
            wpar = parent.weights
            if kind == EISENSTEIN:
                self.e = parent.e * self.n
                self.f = parent.f
                self.weights = [i + self.n * w for i in range(self.n) for w in wpar]
                self.res_indices = list(parent.res_indices)
                self.residue = parent.residue
            else:
                self.e = parent.e
                self.f = parent.f * self.n
                self.weights = [w for _ in range(self.n) for w in wpar]
                self.res_indices = [i * parent.degree + j for i in range(self.n) for j in parent.res_indices]
                if any(not c.is_integral() for c in self.poly):
                    raise PresentationError("unramified step needs integral coefficients")
                reduced = tuple(parent.residue.digits(c.residue()) for c in self.poly)
                self.residue = ResidueField(p, parent.residue.steps + ((self.n, reduced),))
            self._check_step()

        self.q = self.residue.q
        self._pi_powers: Dict[int, "FieldElement"] = {}
        self.label = ""
        self.is_base = False
        self.named_gen: Optional["FieldElement"] = None
        self.root: Optional["FieldElement"] = None
        # filled in by the enumeration of totally ramified extensions
        self.different: Optional[int] = None
        self.automorphisms: Optional[int] = None
        # unit groups, power classes, norm characters and quadratics computed on this field
        self.cache: Dict[str, Any] = {}

    def _check_step(self):
        if self.kind == EISENSTEIN:
            c0 = self.poly[0]
            if c0.is_zero() or c0.valuation() != 1:
                raise PresentationError("eisenstein step needs a constant term of valuation 1")
            if any((not c.is_zero()) and c.valuation() < 1 for c in self.poly[1:]):
                raise PresentationError("eisenstein step needs non-constant coefficients in the maximal ideal")
        else:
            reduced = [c.residue() for c in self.poly] + [1]
            if not self.parent.residue.is_irreducible(reduced):
                raise PresentationError("unramified step is reducible modulo the maximal ideal")

    def __repr__(self):
        return f"<LocalField {self.name or '?'} p={self.p} e={self.e} f={self.f}>"

    # tower navigation

    def tower(self) -> List["LocalField"]:
        levels: List[LocalField] = []
        node: Optional[LocalField] = self
        while node is not None:
            levels.append(node)
            node = node.parent
        return levels[::-1]

    @property
    def base(self) -> "LocalField":
        return self.tower()[0]

    @property
    def ground(self) -> "LocalField":
        """The base field Q_{p^f} the tower was built on (Q_p when f = 1)."""
        levels = self.tower()
        if len(levels) > 1 and levels[1].is_base:
            return levels[1]
        return levels[0]

    def has_level(self, K: "LocalField") -> bool:
        return any(level is K for level in self.tower())

    def __call__(self, value: Scalar) -> "FieldElement":
        if isinstance(value, FieldElement):
            if value.field is self:
                return value
            if not self.has_level(value.field):
                raise LevelError(f"{value.field!r} is not a level of {self!r}")
            coords = tuple(value.coords) + (0,) * (self.degree - value.field.degree)
            return FieldElement(self, value.shift, coords, value.prec)
        if isinstance(value, bool):
            value = int(value)
        if isinstance(value, int):
            return self.from_int(value)
        if isinstance(value, Fraction):
            return self.from_int(value.numerator) / self.from_int(value.denominator)
        raise TypeError(f"cannot coerce {type(value).__name__} into {self!r}")

    # constructors

    def zero(self, absprec: Optional[int] = None) -> "FieldElement":
        return FieldElement(self, self.precision if absprec is None else absprec, (0,) * self.degree, 0)

    def one(self) -> "FieldElement":
        return self.from_int(1)

    def from_int(self, n: int) -> "FieldElement":
        if n == 0:
            return self.zero()
        v = _vp(n, self.p)
        coords = [0] * self.degree
        coords[0] = (n // self.p ** v) % self.modulus
        return FieldElement(self, v, tuple(coords), self.precision)

    def element(self, coords: Sequence[int], shift: int = 0, prec: Optional[int] = None) -> "FieldElement":
        """Element p^shift * sum(coords[I] * basis_I), normalized."""
        prec = self.precision if prec is None else prec
        if len(coords) != self.degree:
            raise ValueError(f"expected {self.degree} coordinates, got {len(coords)}")
        return _normalize(self, shift, [int(c) for c in coords], prec)

    def basis_element(self, index: int) -> "FieldElement":
        coords = [0] * self.degree
        coords[index] = 1
        return FieldElement(self, 0, tuple(coords), self.precision)

    @cached_property
    def step_gen(self) -> "FieldElement":
        """Root of this level's defining polynomial (the power-basis generator)."""
        if self.parent is None:
            return self.from_int(self.p)
        return self.basis_element(self.parent.degree)

    @cached_property
    def gen(self) -> "FieldElement":
        return self.named_gen if self.named_gen is not None else self.step_gen

    @cached_property
    def uniformizer(self) -> "FieldElement":
        if self.parent is None:
            return self.from_int(self.p)
        if self.kind == EISENSTEIN:
            return self.step_gen
        return self(self.parent.uniformizer)

    def pi_power(self, k: int) -> "FieldElement":
        if k < 0:
            return self.pi_power(-k).inverse()
        if k not in self._pi_powers:
            self._pi_powers[k] = self.uniformizer ** k if k else self.one()
        return self._pi_powers[k]

    def lift(self, code: int) -> "FieldElement":
        """Plain lift of a residue code through the weight-0 coordinates."""
        digits = self.residue.digits(code)
        coords = [0] * self.degree
        for idx, d in zip(self.res_indices, digits):
            coords[idx] = d
        return self.element(coords)

    def teichmuller(self, code: int) -> "FieldElement":
        x = self.lift(code)
        if code == 0:
            return x
        for _ in range(self.precision * self.e + 2):
            y = x ** self.q
            if (y - x).is_zero():
                return y
            x = y
        return x

    def random_element(self, rng, *, integral: bool = True, digits: Optional[int] = None) -> "FieldElement":
        digits = digits or self.precision
        coords = [rng.randrange(self.p ** digits) for _ in range(self.degree)]
        x = self.element(coords, prec=digits)
        return x if integral else x * self.pi_power(-rng.randrange(0, 3))

    # relative structure over the parent

    def split_blocks(self, x: "FieldElement") -> List["FieldElement"]:
        """Coefficients a_i in the parent with x = sum(a_i * step_gen^i)."""
        d = self.parent.degree
        return [
            _normalize(self.parent, x.shift, list(x.coords[i * d:(i + 1) * d]), x.prec)
            for i in range(self.n)
        ]

    def join_blocks(self, blocks: Sequence["FieldElement"]) -> "FieldElement":
        blocks = [self.parent(b) for b in blocks]
        shift = min(b.shift for b in blocks)
        top = min(b.shift + b.prec for b in blocks)
        prec = top - shift
        coords: List[int] = []
        for b in blocks:
            scale = self.p ** (b.shift - shift)
            coords.extend(c * scale for c in b.coords)
        return _normalize(self, shift, coords, prec)

    def multiplication_matrix(self, x: "FieldElement", K: Optional["LocalField"] = None) -> List[List["FieldElement"]]:
        """Matrix of y -> x*y as a K-linear map of this field (K defaults to the parent)."""
        K = K or self.parent
        if K is None or not self.has_level(K) or K is self:
            raise LevelError(f"{K!r} is not a proper level of {self!r}")
        x = self(x)
        size = self.degree // K.degree
        d = K.degree
        cols = []
        for j in range(size):
            prod = x * self.basis_element(j * d)
            cols.append([
                _normalize(K, prod.shift, list(prod.coords[i * d:(i + 1) * d]), prod.prec)
                for i in range(size)
            ])
        return [[cols[j][i] for j in range(size)] for i in range(size)]

    # description

    def descriptor(self) -> Dict[str, Any]:
        """JSON-ready tower description: the base Q_{p^f} plus the steps above it."""
        levels = self.tower()
        base_f = 1
        start = 1
        if len(levels) > 1 and levels[1].is_base:
            base_f = levels[1].n
            start = 2
        steps = []
        for level in levels[start:]:
            steps.append({
                "kind": level.kind,
                "name": level.name,
                "gen": level.gen_name,
                "poly": [_balanced_coords(c) for c in level.poly],
            })
        return {"p": self.p, "f": base_f, "precision": self.precision, "steps": steps}

    @classmethod
    def from_descriptor(cls, desc: Dict[str, Any], base: Optional["LocalField"] = None) -> "LocalField":
        """Rebuild a tower; ``base`` is reused when its own descriptor is a prefix of ``desc``."""
        p, f = int(desc["p"]), int(desc.get("f", 1))
        precision = int(desc.get("precision") or conf.get("INERTIA_PRECISION"))
        steps = list(desc.get("steps", []))
        field = None
        if base is not None:
            own = base.descriptor()
            k = len(own["steps"])
            if (own["p"], own["f"], own["precision"]) == (p, f, precision) and steps[:k] == own["steps"]:
                field, steps = base, steps[k:]
        if field is None:
            field = make_base_field(p, f, precision)
        for step in steps:
            coeffs = [_from_balanced(field, c) for c in step["poly"]]
            field = LocalField(
                field.p, parent=field, kind=step["kind"], poly=coeffs,
                name=step.get("name", ""), gen_name=step.get("gen", ""),
            )
        return field


def _balanced_coords(x: "FieldElement") -> List[Any]:
    """[shift, prec, c_0, c_1, ...] with coordinates in balanced residue form."""
    mod = x.field.p ** x.prec if x.prec else 1
    coords = [c if c <= mod // 2 else c - mod for c in x.coords]
    return [x.shift, x.prec] + coords


def _from_balanced(field: LocalField, data: Sequence[int]) -> "FieldElement":
    shift, prec, *coords = data
    return field.element(coords, shift=shift, prec=prec)


def _normalize(field: LocalField, shift: int, coords: List[int], prec: int) -> "FieldElement":
    p = field.p
    if prec <= 0:
        return FieldElement(field, shift + max(prec, 0), (0,) * field.degree, 0)
    mod = p ** prec
    coords = [c % mod for c in coords]
    if not any(coords):
        return FieldElement(field, shift + prec, (0,) * field.degree, 0)
    v = min(_vp(c, p) for c in coords if c)
    if v:
        scale = p ** v
        mod //= scale
        coords = [(c // scale) % mod for c in coords]
    return FieldElement(field, shift + v, tuple(coords), prec - v)


class FieldElement:
    """Immutable element of a LocalField with bounded p-adic precision."""

    __slots__ = ("field", "shift", "coords", "prec")

    def __init__(self, field: LocalField, shift: int, coords: Tuple[int, ...], prec: int):
        self.field = field
        self.shift = shift
        self.coords = coords
        self.prec = prec

    # predicates

    def is_zero(self) -> bool:
        return self.prec == 0

    def is_integral(self) -> bool:
        return self.is_zero() or self.shift >= 0

    def is_unit(self) -> bool:
        return (not self.is_zero()) and self.valuation() == 0

    @property
    def absprec(self) -> int:
        """p-adic absolute precision."""
        return self.shift + self.prec

    def valuation(self) -> int:
        """Valuation in this element's own field, v(uniformizer) = 1."""
        if self.is_zero():
            raise PrecisionError("valuation undetermined: element is zero at working precision")
        K = self.field
        p = K.p
        best = None
        for c, w in zip(self.coords, K.weights):
            if c:
                val = K.e * _vp(c, p) + w
                if best is None or val < best:
                    best = val
        return K.e * self.shift + best

    def valuation_or(self, default: int) -> int:
        """valuation(), or ``default`` when the element is zero at precision."""
        if self.is_zero():
            return default
        return self.valuation()

    def lower_valuation(self) -> int:
        """Certified lower bound on the valuation (exact when nonzero)."""
        if self.is_zero():
            return self.field.e * self.shift
        return self.valuation()

    def p_valuation(self) -> Fraction:
        return Fraction(self.valuation(), self.field.e)

    def int_coords(self) -> List[int]:
        """Integer coordinates of an integral element, reduced mod p^absprec."""
        if not self.is_integral():
            raise PrecisionError("int_coords of a non-integral element")
        if self.is_zero():
            return [0] * self.field.degree
        scale = self.field.p ** self.shift
        return [c * scale for c in self.coords]

    def residue(self) -> int:
        if not self.is_integral():
            raise PrecisionError("residue of a non-integral element")
        if self.is_zero() or self.shift > 0:
            return 0
        K = self.field
        return K.residue.code([self.coords[i] % K.p for i in K.res_indices])

    def key(self, m: int) -> Tuple[int, ...]:
        """Canonical tuple of the class of an integral element modulo pi^m."""
        K = self.field
        if m <= 0:
            return ()
        needed = [max(0, -(-(m - w) // K.e)) for w in K.weights]
        if not self.is_zero() and self.shift < 0:
            raise PrecisionError("key of a non-integral element")
        if self.absprec < max(needed):
            raise PrecisionError(f"element known to p^{self.absprec}, need p^{max(needed)}")
        coords = self.int_coords()
        return tuple(c % (K.p ** k) for c, k in zip(coords, needed))

    def truncate(self, m: int) -> "FieldElement":
        """Representative of the class modulo pi^m with coordinates in canonical range."""
        K = self.field
        return K.element(list(self.key(m)) if m > 0 else [0] * K.degree)

    # arithmetic

    def _coerce(self, other: Scalar) -> "FieldElement":
        if isinstance(other, FieldElement):
            if other.field is self.field:
                return other
            if self.field.has_level(other.field):
                return self.field(other)
            raise LevelError(f"cannot combine elements of {self.field!r} and {other.field!r}")
        return self.field(other)

    def _lift_to(self, other: Scalar) -> Tuple["FieldElement", "FieldElement"]:
        if isinstance(other, FieldElement) and other.field is not self.field and other.field.has_level(self.field):
            return other.field(self), other
        return self, self._coerce(other)

    def __add__(self, other: Scalar) -> "FieldElement":
        x, y = self._lift_to(other)
        K = x.field
        a = min(x.shift, y.shift)
        top = min(x.absprec, y.absprec)
        sx, sy = K.p ** (x.shift - a), K.p ** (y.shift - a)
        coords = [cx * sx + cy * sy for cx, cy in zip(x.coords, y.coords)]
        return _normalize(K, a, coords, top - a)

    __radd__ = __add__

    def __neg__(self) -> "FieldElement":
        if self.is_zero():
            return self
        mod = self.field.p ** self.prec
        return FieldElement(self.field, self.shift, tuple((-c) % mod for c in self.coords), self.prec)

    def __sub__(self, other: Scalar) -> "FieldElement":
        x, y = self._lift_to(other)
        return x + (-y)

    def __rsub__(self, other: Scalar) -> "FieldElement":
        return (-self) + other

    def __mul__(self, other: Scalar) -> "FieldElement":
        x, y = self._lift_to(other)
        K = x.field
        prec = min(x.prec, y.prec)
        shift = x.shift + y.shift
        if prec == 0:
            return _zero_product(x, y)
        coords = mul_coords(K._steps, x.coords, y.coords, K.p ** prec)
        return _normalize(K, shift, coords, prec)

    __rmul__ = __mul__

    def inverse(self) -> "FieldElement":
        K = self.field
        if self.is_zero():
            raise PrecisionError("inverse of an element indistinguishable from 0")
        if self.prec < min(conf.get("INERTIA_MIN_DIGITS"), K.precision):
            raise PrecisionError(f"only {self.prec} digits left, refusing to invert")
        j = self.valuation()
        if j == 0:
            return self._unit_inverse()
        t = -(-j // K.e)
        k = K.e * t - j
        y = self * K.uniformizer ** k if k else self
        y = FieldElement(K, y.shift - t, y.coords, y.prec)
        inv = y._unit_inverse()
        inv = inv * K.uniformizer ** k if k else inv
        return FieldElement(K, inv.shift - t, inv.coords, inv.prec)

    def _unit_inverse(self) -> "FieldElement":
        K = self.field
        z = K.lift(K.residue.inv(self.residue()))
        one = K.one()
        for _ in range(2 * (K.e * K.precision).bit_length() + 4):
            err = one - self * z
            if err.is_zero():
                break
            z = z + z * err
        return z

    def __truediv__(self, other: Scalar) -> "FieldElement":
        x, y = self._lift_to(other)
        return x * y.inverse()

    def __rtruediv__(self, other: Scalar) -> "FieldElement":
        return self._coerce(other) * self.inverse()

    def __pow__(self, k: int) -> "FieldElement":
        if k < 0:
            return self.inverse() ** (-k)
        result = self.field.one()
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other: Any) -> bool:
        if not isinstance(other, (FieldElement, int, Fraction)):
            return NotImplemented
        try:
            return (self - other).is_zero()
        except LevelError:
            return False

    __hash__ = None

    # norms and traces

    def norm(self, K: Optional[LocalField] = None) -> "FieldElement":
        """Nm_{L/K}, taken one tower step at a time."""
        L = self.field
        K = K or L.base
        if not L.has_level(K):
            raise LevelError(f"{K!r} is not on the tower of {L!r}")
        x, level = self, L
        while level is not K:
            x = determinant(level.multiplication_matrix(x))
            level = level.parent
        return x

    def trace(self, K: Optional[LocalField] = None) -> "FieldElement":
        L = self.field
        K = K or L.base
        if not L.has_level(K):
            raise LevelError(f"{K!r} is not on the tower of {L!r}")
        x, level = self, L
        while level is not K:
            m = level.multiplication_matrix(x)
            acc = level.parent.zero()
            for i in range(level.n):
                acc = acc + m[i][i]
            x, level = acc, level.parent
        return x

    def __repr__(self):
        if self.is_zero():
            return f"O({self.field.p}^{self.shift})"
        return f"<{self.field.name or 'L'}: p^{self.shift} * {list(self.coords)} +O(p^{self.absprec})>"


def _zero_product(x: FieldElement, y: FieldElement) -> FieldElement:
    K = x.field
    bound = x.lower_valuation() + y.lower_valuation()
    return K.zero(-(-bound // K.e))


def determinant(matrix: List[List[FieldElement]]) -> FieldElement:
    """Determinant by elimination, pivoting on the smallest valuation."""
    rows = [list(r) for r in matrix]
    n = len(rows)
    K = rows[0][0].field
    det = K.one()
    for col in range(n):
        pivot_row, best = None, None
        for r in range(col, n):
            entry = rows[r][col]
            if not entry.is_zero():
                v = entry.valuation()
                if best is None or v < best:
                    pivot_row, best = r, v
        if pivot_row is None:
            return det * K.zero()
        if pivot_row != col:
            rows[col], rows[pivot_row] = rows[pivot_row], rows[col]
            det = -det
        pivot = rows[col][col]
        det = det * pivot
        inv = pivot.inverse()
        for r in range(col + 1, n):
            factor = rows[r][col]
            if factor.is_zero():
                continue
            factor = factor * inv
            rows[r] = [a - factor * b if j >= col else a for j, (a, b) in enumerate(zip(rows[r], rows[col]))]
    return det


def berkowitz(matrix: List[List[FieldElement]]) -> List[FieldElement]:
    """Division-free characteristic polynomial det(tI - M), coefficients high to low."""
    n = len(matrix)
    K = matrix[0][0].field
    if n == 1:
        return [K.one(), -matrix[0][0]]
    a = matrix[0][0]
    R = matrix[0][1:]
    C = [row[0] for row in matrix[1:]]
    A = [row[1:] for row in matrix[1:]]
    diags = [K.one(), -a]
    vec = C
    for _ in range(n - 1):
        acc = K.zero()
        for r, v in zip(R, vec):
            acc = acc + r * v
        diags.append(-acc)
        vec = [sum((A[i][j] * vec[j] for j in range(n - 1)), K.zero()) for i in range(n - 1)]
    sub = berkowitz(A)
    out = []
    for i in range(n + 1):
        acc = K.zero()
        for j in range(min(i, n - 1) + 1):
            if i - j < len(diags):
                acc = acc + diags[i - j] * sub[j]
        out.append(acc)
    return out


def make_base_field(p: int, f: int = 2, N: Optional[int] = None) -> LocalField:
    """Q_p (f=1) or its unramified extension of degree f in canonical presentation.

    Q_9 is x^2 - 2, Q_{p^2} for p >= 5 is x^2 - n with n the least non-residue
    and Q_4 is labelled x^2 - 5 while its integral basis uses x^2 - x - 1.
    """
    if not isprime(p):
        raise PresentationError(f"{p} is not prime")
    N = conf.get("INERTIA_PRECISION") if N is None else N
    if N < conf.get("INERTIA_MIN_DIGITS"):
        raise PrecisionError(f"precision {N} below the minimum of {conf.get('INERTIA_MIN_DIGITS')} digits")
    if f < 1:
        raise PresentationError("residue degree must be >= 1")
    Qp = LocalField(p, precision=N, name=f"Q{p}")
    if f == 1:
        return Qp
    if p == 2 and f == 2:
        coeffs, label, name = [-1, -1], "x^2-5", "Q4"
    elif f == 2 and p != 2:
        n = next(k for k in range(2, p) if pow(k, (p - 1) // 2, p) == p - 1)
        coeffs, label, name = [-n, 0], f"x^2-{n}", f"Q{p * p}"
    else:
        coeffs = _first_irreducible(Qp.residue, f)
        label = "x^%d" % f + "".join(f"{c:+d}*x^{i}" for i, c in reversed(list(enumerate(coeffs))) if c)
        name = f"Q{p ** f}"
    field = LocalField(p, parent=Qp, kind=UNRAMIFIED, poly=[Qp(c) for c in coeffs], name=name, gen_name="a")
    field.is_base = True
    field.label = label
    if p == 2 and f == 2:
        field.named_gen = 2 * field.step_gen - 1
    logger.debug("base field %s presented by %s", name, label)
    return field


def _first_irreducible(F: ResidueField, f: int) -> List[int]:
    from itertools import product

    for tail in product(range(F.p), repeat=f):
        coeffs = list(reversed(tail))
        if F.is_irreducible(coeffs + [1]):
            return coeffs
    raise PresentationError(f"no irreducible polynomial of degree {f}")  # pragma: no cover


def field_from_tag(tag: str, N: Optional[int] = None) -> LocalField:
    """Base field named like Q9, Q4 or Q25 (a tag Q<q> with q a prime power)."""
    try:
        q = int(tag.strip().upper().lstrip("Q"))
    except ValueError:
        raise PresentationError(f"unknown field tag {tag!r}") from None
    factors = factorint(q)
    if len(factors) != 1:
        raise PresentationError(f"{q} is not a prime power")
    (p, f), = factors.items()
    return make_base_field(p, f, N)
