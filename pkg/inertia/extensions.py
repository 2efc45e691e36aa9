"""
Building new tower levels: square roots, radicals, general roots, unramified
steps, and the enumeration of totally ramified extensions with mass tracking.
"""
import logging
import random
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from itertools import product
from math import gcd
from typing import Dict, List, Optional, Sequence, Tuple

from . import conf
from .exceptions import BudgetError, LevelError, PrecisionError, PresentationError, ReducibleError
from .localfield import EISENSTEIN, UNRAMIFIED, FieldElement, LocalField, Scalar, berkowitz
from .polynomials import Polynomial, roots_in_field

logger = logging.getLogger(__name__)


def _step(K: LocalField, kind: str, coeffs: Sequence[Scalar], name: str = "", gen_name: str = "z") -> LocalField:
    return LocalField(K.p, parent=K, kind=kind, poly=[K(c) for c in coeffs], name=name, gen_name=gen_name)


def eisenstein_extension(K: LocalField, g: Polynomial, name: str = "", gen_name: str = "z") -> LocalField:
    g = g.monic()
    if not g.is_eisenstein():
        raise PresentationError("polynomial is not eisenstein")
    L = _step(K, EISENSTEIN, g.coeffs[:-1], name, gen_name)
    L.root = L.step_gen
    return L


def unramified_extension(K: LocalField, n: int, name: str = "", gen_name: str = "w") -> LocalField:
    """The unramified extension of degree n, from the first irreducible residue polynomial."""
    F = K.residue
    for tail in product(range(F.q), repeat=n):
        coeffs = list(reversed(tail))
        if coeffs[0] and F.is_irreducible(coeffs + [1]):
            L = _step(K, UNRAMIFIED, [K.lift(c) for c in coeffs], name or f"{K.name}^ur{n}", gen_name)
            L.root = L.step_gen
            return L
    raise PresentationError(f"no irreducible residue polynomial of degree {n}")  # pragma: no cover


def adjoin_sqrt(K: LocalField, y: Scalar, name: str = "", gen_name: str = "z") -> Tuple[LocalField, FieldElement]:
    """(L, s) with L = K(sqrt y) presented by one tower step and s^2 = y in L."""
    y = K(y)
    if y.is_zero():
        raise PrecisionError("square root of an element indistinguishable from 0")
    v = y.valuation()
    k = v // 2
    y1 = y * K.pi_power(-2 * k) if k else y
    pik = K.pi_power(k) if k else K.one()

    if v % 2:
        L = _step(K, EISENSTEIN, [-y1, 0], name, gen_name)
        return L, L.step_gen * L(pik)

    F = K.residue
    if K.p != 2:
        if F.is_square(y1.residue()):
            raise ReducibleError("element is a square")
        L = _step(K, UNRAMIFIED, [-y1, 0], name, gen_name)
        return L, L.step_gen * L(pik)

    e = K.e
    t = K.lift(F.sqrt(y1.residue()))
    for _ in range(2 * e + 2):
        d = y1 - t * t
        if d.is_zero():
            raise ReducibleError("element is a square")
        m = d.valuation()
        if m > 2 * e:
            raise ReducibleError("element is a square")
        if m == 2 * e:
            c = (y1 / (t * t) - 1) / 4
            cbar = c.residue()
            if F.roots([F.neg(cbar), 1, 1]):
                raise ReducibleError("element is a square")
            L = _step(K, UNRAMIFIED, [-c, 1], name, gen_name)
            w = L.step_gen
            return L, L(t) * (1 + 2 * w) * L(pik)
        if m % 2:
            k2 = (m - 1) // 2
            w1 = (y1 / (t * t) - 1) * K.pi_power(-m)
            L = _step(K, EISENSTEIN, [-(K.uniformizer * w1), 2 * K.pi_power(-k2)], name, gen_name)
            X = L.step_gen
            return L, L(t) * (1 + L(K.pi_power(k2)) * X) * L(pik)
        w = d * K.pi_power(-m)
        t = t + K.pi_power(m // 2) * K.lift(F.sqrt(w.residue()))
    raise PrecisionError("square-root refinement did not stabilise")  # pragma: no cover


def adjoin_radical(K: LocalField, beta: Scalar, n: int, name: str = "", gen_name: str = "z") -> LocalField:
    """K(beta^(1/n)); the distinguished root is stored as L.root."""
    beta = K(beta)
    v = beta.valuation()
    if gcd(v, n) == 1:
        a = pow(v % n, -1, n) if n > 1 else 1
        b = (a * v - 1) // n
        top = beta ** a * K.pi_power(-b * n)
        L = _step(K, EISENSTEIN, [-top] + [0] * (n - 1), name, gen_name)
        a_inv = pow(a, -1, n)
        t = (a * a_inv - 1) // n
        Pi = L.step_gen
        root = (Pi * L(K.pi_power(b))) ** a_inv / L(beta) ** t
        L.root = root
        return L
    g = Polynomial(K, [-beta] + [0] * (n - 1) + [1])
    return adjoin_root(K, g, name=name, gen_name=gen_name)


def adjoin_root(K: LocalField, g: Polynomial, name: str = "", gen_name: str = "z") -> LocalField:
    """K[x]/(g) for irreducible g, presented as one tower step, with L.root a root of g."""
    if g.field is not K:
        g = g.map(K)
    if g.degree < 1:
        raise PresentationError("constant polynomial")
    g = g.monic()
    n = g.degree
    if n == 1:
        raise ReducibleError("degree-1 polynomial has its root in the base field")
    if roots_in_field(K, g):
        raise ReducibleError("polynomial has a root in the base field")

    if n == 2:
        c0, c1 = g.coeffs[0], g.coeffs[1]
        L, s = adjoin_sqrt(K, c1 * c1 - 4 * c0, name=name, gen_name=gen_name)
        L.root = (s - L(c1)) / 2
        return L
    if g.is_eisenstein():
        return eisenstein_extension(K, g, name, gen_name)
    if all(c.is_integral() for c in g.coeffs) and K.residue.is_irreducible(g.reduction()):
        L = _step(K, UNRAMIFIED, g.coeffs[:-1], name, gen_name)
        L.root = L.step_gen
        return L

    L = _present(K, g, name, gen_name)
    roots = roots_in_field(L, g)
    if not roots:
        raise PresentationError("no root of the polynomial in its presentation")
    L.root = min(roots, key=lambda r: (r.shift, r.coords))
    return L


def _present(K: LocalField, g: Polynomial, name: str, gen_name: str) -> LocalField:
    n = g.degree
    h = g
    F = K.residue
    for _ in range(K.e * K.precision):
        slopes = h.slopes()
        if len(slopes) != 1:
            raise ReducibleError("Newton polygon has several segments")
        r = -slopes[0][0]
        if r.denominator == n:
            return _eisenstein_from_valuation(K, h, r, name, gen_name)
        if r.denominator != 1:
            raise PresentationError("mixed ramification and residue extension in one step")
        shift = int(r)
        hr = h.scale_variable(K.pi_power(shift)).primitive_part().monic()
        hbar = hr.reduction()
        if F.is_irreducible(hbar):
            L = _step(K, UNRAMIFIED, hr.coeffs[:-1], name, gen_name)
            return L
        roots = F.roots(hbar)
        if len(roots) == 1 and F.root_multiplicity(hbar, roots[0]) == n:
            h = hr.compose_linear(K.lift(roots[0]), 1)
            continue
        piece = F.power_of_irreducible(hbar)
        if piece is not None and 1 < len(piece[0]) - 1 < n:
            raise PresentationError("extension needs an unramified step below a ramified one")
        raise ReducibleError("residual polynomial splits into coprime factors")
    raise PrecisionError("translation by residual roots did not terminate")


def _eisenstein_from_valuation(K: LocalField, h: Polynomial, r: Fraction, name: str, gen_name: str) -> LocalField:
    # x has valuation a/n; Pi = x^u * pi^-w has valuation 1/n when u*a - w*n = 1
    n = h.degree
    a = r.numerator
    u = pow(a % n, -1, n)
    w = (u * a - 1) // n
    pi_w = K.pi_power(-w)
    x_pow = Polynomial.monomial(K, u)
    _, P = x_pow.divmod_monic(h)
    P = P * pi_w
    columns = []
    basis = Polynomial(K, [1])
    xpoly = Polynomial(K, [0, 1])
    for _ in range(n):
        _, col = (P * basis).divmod_monic(h)
        coeffs = col.coeffs + [K.zero()] * (n - len(col.coeffs))
        columns.append(coeffs)
        _, basis = (basis * xpoly).divmod_monic(h)
    matrix = [[columns[j][i] for j in range(n)] for i in range(n)]
    chi = list(reversed(berkowitz(matrix)))
    poly = Polynomial(K, chi)
    if not poly.is_eisenstein():
        raise PresentationError("derived uniformizer polynomial is not eisenstein")
    return eisenstein_extension(K, poly, name, gen_name)


# enumeration of totally ramified extensions


def different_exponent(g: Polynomial) -> int:
    """v_L(g'(pi_L)) for an eisenstein g, in the valuation of L."""
    K = g.field
    n = g.degree
    best = None
    for i in range(1, n + 1):
        c = g.coeffs[i] * i
        if c.is_zero():
            continue
        term = n * c.valuation() + i - 1
        best = term if best is None else min(best, term)
    return best


def _vk_int(K: LocalField, i: int) -> int:
    return K(i).valuation()


def _k_min(K: LocalField, n: int, j: int, D: int) -> int:
    """Least k >= 1 with n*(k + v(j)) + j - 1 > D."""
    return max(1, (D - j + 1) // n + 1 - _vk_int(K, j))


def discriminant_probabilities(K: LocalField, n: int) -> Dict[int, Fraction]:
    """Haar probability that an eisenstein polynomial of degree n has different exponent d.

    The different exponent is min over i of n*v(i*a_i) + i - 1; the terms are
    distinct modulo n, so the class d is decided by one coefficient.
    """
    q = K.q
    fixed = n * _vk_int(K, n) + n - 1
    probs: Dict[int, Fraction] = {}
    for D in range(n - 1, fixed + 1):
        i = D % n + 1
        if i == n:
            if D != fixed:
                continue
            prob = Fraction(1)
        else:
            if D >= fixed:
                continue
            k = (D - i + 1) // n - _vk_int(K, i)
            if k < 1:
                continue
            prob = Fraction(q - 1, q) / Fraction(q) ** (k - 1)
        for j in range(1, n):
            if j != i:
                prob /= Fraction(q) ** (_k_min(K, n, j, D) - 1)
        if prob:
            probs[D] = prob
    return probs


def _random_integral(K: LocalField, rng: random.Random, level: int) -> FieldElement:
    """Uniform representative of O_K / pi^level."""
    if level <= 0:
        return K.zero()
    coords = [rng.randrange(K.p ** max(0, -(-(level - w) // K.e))) for w in K.weights]
    return K.element(coords)


def _sample_eisenstein(K: LocalField, n: int, D: int, bound: int, rng: random.Random) -> Polynomial:
    pi = K.uniformizer
    i_star = D % n + 1
    coeffs: List[FieldElement] = []
    while True:
        unit = _random_integral(K, rng, bound - 1)
        if unit.residue():
            break
    coeffs.append(pi * unit)
    for j in range(1, n):
        vj = _vk_int(K, j)
        if j == i_star:
            k = (D - j + 1) // n - vj
            while True:
                unit = _random_integral(K, rng, max(bound - k, 1))
                if unit.residue():
                    break
            coeffs.append(K.pi_power(k) * unit)
        else:
            k_min = _k_min(K, n, j, D)
            if k_min >= bound:
                coeffs.append(K.zero())
            else:
                coeffs.append(K.pi_power(k_min) * _random_integral(K, rng, bound - k_min))
    coeffs.append(K.one())
    return Polynomial(K, coeffs)


def _coefficient_key(g: Polynomial, bound: int) -> Tuple:
    return tuple(c.key(bound) if not c.is_zero() else () for c in g.coeffs[:-1])


MASS_REACHED = "mass reached"
SAMPLES_SPENT = "samples spent"


@dataclass
class DiscriminantClass:
    """Fields found in one discriminant class and why the search of the class stopped."""

    different: int
    target: Fraction
    mass: Fraction = Fraction(0)
    sampled: int = 0
    fields: List[LocalField] = dc_field(default_factory=list)
    stopped: str = ""


@dataclass
class Enumeration:
    K: LocalField
    n: int
    classes: List[DiscriminantClass]

    @property
    def fields(self) -> List[LocalField]:
        return [L for cls in self.classes for L in cls.fields]

    def counts(self) -> Dict[int, int]:
        return {cls.different: len(cls.fields) for cls in self.classes}


def enumerate_classes(
    K: LocalField,
    n: int,
    *,
    budget: Optional[int] = None,
    seed: Optional[int] = None,
    samples_per_class: Optional[int] = None,
) -> Enumeration:
    """Totally ramified degree-n extensions of K, one discriminant class at a time.

    Candidates are sampled from Haar measure. By default a class is complete when
    the mass sum(n/#Aut * q^-c) of its accepted fields equals n times the exact
    probability of the class. With ``samples_per_class`` every class is sampled
    exactly that many times and the mass target plays no part in stopping.
    """
    if not 2 <= n <= 12:
        raise LevelError(f"degree {n} out of the supported range 2..12")
    budget = budget or conf.get("INERTIA_ENUMERATION_BUDGET")
    rng = random.Random(conf.get("INERTIA_SEED") if seed is None else seed)
    probs = discriminant_probabilities(K, n)
    q = K.q
    classes: List[DiscriminantClass] = []
    spent = 0
    for D, prob in sorted(probs.items()):
        cls = DiscriminantClass(D, n * prob)
        c = D - n + 1
        bound = 2 * D // n + 1
        seen = set()
        while True:
            if samples_per_class is not None:
                if cls.sampled >= samples_per_class:
                    cls.stopped = SAMPLES_SPENT
                    break
            elif cls.mass >= cls.target:
                cls.stopped = MASS_REACHED
                break
            elif spent >= budget:
                raise BudgetError(f"enumeration budget of {budget} candidates exhausted at d={D}")
            spent += 1
            cls.sampled += 1
            g = _sample_eisenstein(K, n, D, bound, rng)
            key = _coefficient_key(g, bound)
            if key in seen:
                continue
            seen.add(key)
            if any(roots_in_field(L, g) for L in cls.fields):
                continue
            L = eisenstein_extension(K, g, name=f"{K.name}[{n}:{D}:{len(cls.fields) + 1}]")
            aut = len(roots_in_field(L, g))
            L.different = D
            L.automorphisms = aut
            cls.fields.append(L)
            cls.mass += Fraction(n, aut) / Fraction(q) ** c
            logger.debug("accepted degree-%d field d=%d aut=%d mass %s/%s", n, D, aut, cls.mass, cls.target)
        if samples_per_class is None and cls.mass != cls.target:
            raise PrecisionError(f"mass overshoot at d={D}: {cls.mass} > {cls.target}")
        cls.fields.sort(key=lambda L: [x.coords for x in L.poly])
        classes.append(cls)
        logger.info("d=%d: %d fields over %s after %d samples (%s)", D, len(cls.fields), K.name, cls.sampled, cls.stopped)
    return Enumeration(K, n, classes)


def enumerate_totally_ramified(
    K: LocalField,
    n: int,
    *,
    budget: Optional[int] = None,
    seed: Optional[int] = None,
) -> List[LocalField]:
    """Every totally ramified degree-n extension of K once, up to K-isomorphism."""
    return enumerate_classes(K, n, budget=budget, seed=seed).fields


def mass(fields: Sequence[LocalField], n: int) -> Fraction:
    """sum over fields of (n/#Aut) * q^-(d - n + 1); equals n for a complete list."""
    total = Fraction(0)
    for L in fields:
        q = L.parent.q
        total += Fraction(n, L.automorphisms) / Fraction(q) ** (L.different - n + 1)
    return total
