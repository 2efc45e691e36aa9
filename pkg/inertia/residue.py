"""Finite residue fields and the shared tower multiplication kernel.

A residue field F_q is a tower of irreducible steps over F_p.  Elements are
handled as integer codes: the base-p number whose digits are the flat
coordinates of the element over the tower basis.  Multiplication goes through
discrete-log tables built from the first primitive element in code order.
"""
import logging
from functools import reduce
from typing import Dict, List, Optional, Sequence, Tuple

from sympy import primefactors

logger = logging.getLogger(__name__)

Step = Tuple[int, Tuple[Tuple[int, ...], ...]]


def mul_coords(steps: Sequence[Step], a: Sequence[int], b: Sequence[int], modulus: int) -> List[int]:
    """Product of two flat coordinate vectors over a tower, coefficients mod ``modulus``.

    ``steps`` runs bottom to top; each is (n, poly) where poly holds the n
    lower coefficients of the monic defining polynomial, each itself a flat
    vector over the level below.  Reduction uses x^n = -sum(poly[r] * x^r).
    """
    if not steps:
        return [a[0] * b[0] % modulus]
    if not any(a[1:]):
        return [a[0] * y % modulus for y in b]
    if not any(b[1:]):
        return [b[0] * x % modulus for x in a]

    lower = steps[:-1]
    n, poly = steps[-1]
    d = len(a) // n

    blocks_a = [a[i * d:(i + 1) * d] for i in range(n)]
    blocks_b = [b[j * d:(j + 1) * d] for j in range(n)]
    prod: List[Optional[List[int]]] = [None] * (2 * n - 1)
    for i, ai in enumerate(blocks_a):
        if not any(ai):
            continue
        for j, bj in enumerate(blocks_b):
            if not any(bj):
                continue
            t = mul_coords(lower, ai, bj, modulus)
            acc = prod[i + j]
            prod[i + j] = t if acc is None else [(x + y) % modulus for x, y in zip(acc, t)]

    for k in range(2 * n - 2, n - 1, -1):
        c = prod[k]
        if c is None or not any(c):
            continue
        for r, g in enumerate(poly):
            if not any(g):
                continue
            t = mul_coords(lower, c, g, modulus)
            acc = prod[k - n + r]
            if acc is None:
                prod[k - n + r] = [(-y) % modulus for y in t]
            else:
                prod[k - n + r] = [(x - y) % modulus for x, y in zip(acc, t)]

    out: List[int] = []
    for k in range(n):
        out.extend(prod[k] if prod[k] is not None else [0] * d)
    return out


class ResidueField:
    """F_q as a tower of steps over F_p, elements encoded as ints in [0, q)."""

    def __init__(self, p: int, steps: Sequence[Step] = ()):
        self.p = p
        self.steps: Tuple[Step, ...] = tuple(
            (n, tuple(tuple(int(c) % p for c in coeff) for coeff in poly)) for n, poly in steps
        )
        self.degree = reduce(lambda acc, s: acc * s[0], self.steps, 1)
        self.q = p ** self.degree
        self._exp: List[int] = []
        self._log: Dict[int, int] = {}
        self._build_tables()

    def __repr__(self):
        return f"GF({self.p}^{self.degree})"

    # codes

    def digits(self, code: int) -> Tuple[int, ...]:
        out = []
        for _ in range(self.degree):
            code, r = divmod(code, self.p)
            out.append(r)
        return tuple(out)

    def code(self, coords: Sequence[int]) -> int:
        value = 0
        for c in reversed(list(coords)):
            value = value * self.p + int(c) % self.p
        return value

    def _mul_slow(self, x: int, y: int) -> int:
        return self.code(mul_coords(self.steps, self.digits(x), self.digits(y), self.p))

    def _build_tables(self):
        order = self.q - 1
        if order == 1:
            self._exp = [1]
            self._log = {1: 0}
            self.primitive = 1
            return
        factors = primefactors(order)
        for g in range(2, self.q):
            if all(self._pow_slow(g, order // r) != 1 for r in factors):
                break
        else:  # pragma: no cover - every finite field has a primitive element
            raise RuntimeError(f"no primitive element in {self!r}")
        self.primitive = g
        exp = [1]
        for _ in range(order - 1):
            exp.append(self._mul_slow(exp[-1], g))
        self._exp = exp
        self._log = {v: k for k, v in enumerate(exp)}
        logger.debug("built %r tables, primitive code %d", self, g)

    def _pow_slow(self, x: int, k: int) -> int:
        result, base = 1, x
        while k:
            if k & 1:
                result = self._mul_slow(result, base)
            base = self._mul_slow(base, base)
            k >>= 1
        return result

    # arithmetic

    def add(self, x: int, y: int) -> int:
        return self.code([(a + b) for a, b in zip(self.digits(x), self.digits(y))])

    def sub(self, x: int, y: int) -> int:
        return self.code([(a - b) for a, b in zip(self.digits(x), self.digits(y))])

    def neg(self, x: int) -> int:
        return self.code([-a for a in self.digits(x)])

    def scale(self, k: int, x: int) -> int:
        return self.code([k * a for a in self.digits(x)])

    def mul(self, x: int, y: int) -> int:
        if x == 0 or y == 0:
            return 0
        return self._exp[(self._log[x] + self._log[y]) % (self.q - 1)]

    def inv(self, x: int) -> int:
        if x == 0:
            raise ZeroDivisionError("inverse of 0 in residue field")
        return self._exp[(-self._log[x]) % (self.q - 1)]

    def pow(self, x: int, k: int) -> int:
        if x == 0:
            return 0 if k > 0 else 1
        return self._exp[(self._log[x] * k) % (self.q - 1)]

    def log(self, x: int) -> int:
        """Discrete log to the primitive element."""
        return self._log[x]

    def exp(self, k: int) -> int:
        return self._exp[k % (self.q - 1)]

    def is_square(self, x: int) -> bool:
        if x == 0 or self.p == 2:
            return True
        return self._log[x] % 2 == 0

    def sqrt(self, x: int) -> int:
        if x == 0:
            return 0
        if self.p == 2:
            return self.pow(x, self.q // 2)
        k = self._log[x]
        if k % 2:
            raise ValueError("not a square in the residue field")
        return self._exp[k // 2]

    def cube_root(self, x: int) -> Optional[int]:
        """Some cube root of x, or None."""
        if x == 0:
            return 0
        if self.p == 3:
            return self.pow(x, self.q // 3)
        k, order = self._log[x], self.q - 1
        for t in range(order):
            if (3 * t) % order == k:
                return self._exp[t]
        return None

    def frobenius(self, x: int) -> int:
        return self.pow(x, self.p)

    def trace(self, x: int) -> int:
        """Absolute trace to F_p, as an integer in [0, p)."""
        total, y = 0, x
        for _ in range(self.degree):
            total = self.add(total, y)
            y = self.frobenius(y)
        return total

    def elements(self) -> range:
        return range(self.q)

    # polynomials over codes, coefficient lists low -> high

    def poly_trim(self, f: Sequence[int]) -> List[int]:
        f = list(f)
        while f and f[-1] == 0:
            f.pop()
        return f

    def poly_eval(self, f: Sequence[int], x: int) -> int:
        acc = 0
        for c in reversed(list(f)):
            acc = self.add(self.mul(acc, x), c)
        return acc

    def poly_mul(self, f: Sequence[int], g: Sequence[int]) -> List[int]:
        if not f or not g:
            return []
        out = [0] * (len(f) + len(g) - 1)
        for i, a in enumerate(f):
            if a == 0:
                continue
            for j, b in enumerate(g):
                if b:
                    out[i + j] = self.add(out[i + j], self.mul(a, b))
        return self.poly_trim(out)

    def poly_divmod(self, f: Sequence[int], g: Sequence[int]) -> Tuple[List[int], List[int]]:
        f, g = self.poly_trim(f), self.poly_trim(g)
        if not g:
            raise ZeroDivisionError("polynomial division by zero")
        inv_lead = self.inv(g[-1])
        quot = [0] * max(len(f) - len(g) + 1, 0)
        rem = list(f)
        for k in range(len(f) - len(g), -1, -1):
            c = self.mul(rem[k + len(g) - 1], inv_lead)
            quot[k] = c
            if c:
                for j, b in enumerate(g):
                    rem[k + j] = self.sub(rem[k + j], self.mul(c, b))
        return self.poly_trim(quot), self.poly_trim(rem[:len(g) - 1])

    def poly_monic(self, f: Sequence[int]) -> List[int]:
        f = self.poly_trim(f)
        inv_lead = self.inv(f[-1])
        return [self.mul(c, inv_lead) for c in f]

    def poly_gcd(self, f: Sequence[int], g: Sequence[int]) -> List[int]:
        f, g = self.poly_trim(f), self.poly_trim(g)
        while g:
            f, g = g, self.poly_divmod(f, g)[1]
        return self.poly_monic(f) if f else []

    def poly_powmod(self, f: Sequence[int], k: int, modulus: Sequence[int]) -> List[int]:
        result: List[int] = [1]
        base = self.poly_divmod(f, modulus)[1]
        while k:
            if k & 1:
                result = self.poly_divmod(self.poly_mul(result, base), modulus)[1]
            base = self.poly_divmod(self.poly_mul(base, base), modulus)[1]
            k >>= 1
        return result

    def roots(self, f: Sequence[int]) -> List[int]:
        """All roots of f in this field, in code order."""
        f = self.poly_trim(f)
        if len(f) <= 1:
            return []
        return [x for x in self.elements() if self.poly_eval(f, x) == 0]

    def root_multiplicity(self, f: Sequence[int], x: int) -> int:
        f = self.poly_trim(f)
        mult = 0
        linear = [self.neg(x), 1]
        while len(f) > 1:
            quot, rem = self.poly_divmod(f, linear)
            if rem:
                break
            f, mult = quot, mult + 1
        return mult

    def is_irreducible(self, f: Sequence[int]) -> bool:
        f = self.poly_monic(f)
        n = len(f) - 1
        if n <= 0:
            return False
        x = [0, 1]
        power = x
        for _ in range(1, n // 2 + 1):
            power = self.poly_powmod(power, self.q, f)
            diff = list(power) + [0] * max(0, 2 - len(power))
            diff[1] = self.sub(diff[1], 1)
            if len(self.poly_gcd(f, diff)) > 1:
                return False
        return True

    def power_of_irreducible(self, f: Sequence[int]) -> Optional[Tuple[List[int], int]]:
        """(phi, k) when f = phi^k with phi monic irreducible, else None."""
        f = self.poly_monic(f)
        n = len(f) - 1
        for d in range(1, n + 1):
            if n % d:
                continue
            for phi in self._monic_candidates(d, f):
                k = n // d
                power: List[int] = [1]
                for _ in range(k):
                    power = self.poly_mul(power, phi)
                if power == f:
                    return phi, k
        return None

    def _monic_candidates(self, d: int, f: Sequence[int]):
        # phi is the monic gcd of f with its derivative chain; try the radical first
        radical = self._radical(f)
        if len(radical) - 1 == d and self.is_irreducible(radical):
            yield radical

    def _radical(self, f: Sequence[int]) -> List[int]:
        f = self.poly_monic(f)
        deriv = self.poly_trim([self.scale(i, c) for i, c in enumerate(f)][1:])
        if not deriv:
            # f is a p-th power: take the p-th root coefficientwise
            root = [self.pow(c, self.q // self.p) for c in f[::self.p]]
            return self._radical(root)
        g = self.poly_gcd(f, deriv)
        if len(g) <= 1:
            return f
        quot, _ = self.poly_divmod(f, g)
        return self._radical(quot)
