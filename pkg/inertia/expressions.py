"""
Field-element expressions: integers, named generators, + - * / ^ and parentheses.

Expressions are parsed with sympy and then evaluated exactly inside a LocalField,
so "3^3*a" or "(3b+11)/2" become FieldElements of the field that owns the symbols.
"""
import logging
from fractions import Fraction
from tokenize import TokenError
from typing import Dict, List, Mapping, Optional

from sympy import Add, Integer, Mul, Poly, Pow, Rational, Symbol
from sympy.core.sympify import SympifyError
from sympy.parsing.sympy_parser import (
    convert_xor,
    implicit_multiplication,
    parse_expr,
    standard_transformations,
)

from .exceptions import ExpressionError
from .localfield import FieldElement, LocalField
from .polynomials import Polynomial, roots_in_field

logger = logging.getLogger(__name__)

TRANSFORMATIONS = standard_transformations + (convert_xor, implicit_multiplication)

ALIASES = {"φ": "phi", "√2": "a", "√5": "b"}


def _normalize_text(text: str) -> str:
    for old, new in ALIASES.items():
        text = text.replace(old, new)
    return text.strip()


def parse(text: str, names: Optional[List[str]] = None):
    """Parse ``text`` into a sympy expression over the given symbol names."""
    text = _normalize_text(text)
    if not text:
        raise ExpressionError("empty expression")
    local = {name: Symbol(name) for name in (names or [])}
    try:
        return parse_expr(text, local_dict=local, transformations=TRANSFORMATIONS, evaluate=True)
    except (SympifyError, SyntaxError, TypeError, TokenError) as exc:
        raise ExpressionError(f"cannot parse {text!r}: {exc}") from exc


def evaluate(expr, K: LocalField, symbols: Mapping[str, FieldElement]) -> FieldElement:
    """Evaluate a parsed sympy expression inside K."""
    if isinstance(expr, Integer):
        return K(int(expr))
    if isinstance(expr, Rational):
        return K(Fraction(int(expr.p), int(expr.q)))
    if isinstance(expr, Symbol):
        try:
            return K(symbols[expr.name])
        except KeyError:
            raise ExpressionError(f"unknown symbol {expr.name!r}") from None
    if isinstance(expr, Add):
        acc = K.zero()
        for term in expr.args:
            acc = acc + evaluate(term, K, symbols)
        return acc
    if isinstance(expr, Mul):
        acc = K.one()
        for factor in expr.args:
            acc = acc * evaluate(factor, K, symbols)
        return acc
    if isinstance(expr, Pow):
        base, exp = expr.args
        if not isinstance(exp, Integer):
            raise ExpressionError(f"non-integer exponent in {expr}")
        x = evaluate(base, K, symbols)
        k = int(exp)
        return x ** k if k >= 0 else x.inverse() ** (-k)
    raise ExpressionError(f"unsupported expression {expr}")


def element(text: str, K: LocalField, symbols: Optional[Mapping[str, FieldElement]] = None) -> FieldElement:
    """``text`` as an element of K; ``a``, ``b``, ``phi`` and ``z`` are bound by default."""
    scope: Dict[str, FieldElement] = dict(default_symbols(K))
    scope.update(symbols or {})
    return evaluate(parse(text, list(scope)), K, scope)


def default_symbols(K: LocalField) -> Dict[str, FieldElement]:
    F = K.ground
    scope: Dict[str, FieldElement] = {"a": F.gen}
    if F.p == 2 and F.degree == 2:
        scope["b"] = F.gen
        scope["phi"] = F.step_gen
    if K is not F:
        scope["z"] = K.root if K.root is not None else K.gen
    return scope


def generator_from_poly(F: LocalField, text: str) -> FieldElement:
    """The root of ``text`` (a polynomial in x) in F with the smallest integral coordinates."""
    x = Symbol("x")
    expr = parse(text, ["x"])
    try:
        coeffs = [int(c) for c in Poly(expr, x).all_coeffs()]
    except Exception as exc:
        raise ExpressionError(f"{text!r} is not an integer polynomial in x") from exc
    roots = roots_in_field(F, Polynomial.from_ints(F, list(reversed(coeffs))))
    if not roots:
        raise ExpressionError(f"{text!r} has no root in {F.name}")
    return min(roots, key=lambda r: [c % F.modulus for c in r.int_coords()])


def curve_coefficients(text: str, F: LocalField, gen_poly: Optional[str] = None) -> List[FieldElement]:
    """Five ';'-separated coefficient expressions a1;a2;a3;a4;a6."""
    parts = [s for s in text.split(";")]
    if len(parts) != 5:
        raise ExpressionError(f"expected 5 coefficients separated by ';', got {len(parts)}")
    scope = default_symbols(F)
    if gen_poly:
        scope["a"] = generator_from_poly(F, gen_poly)
    return [evaluate(parse(s or "0", list(scope)), F, scope) for s in parts]


def polynomial(text: str, K: LocalField, var: str = "x", symbols: Optional[Mapping[str, FieldElement]] = None) -> Polynomial:
    """``text`` as a polynomial in ``var`` with coefficients evaluated in K."""
    scope: Dict[str, FieldElement] = dict(default_symbols(K))
    scope.update(symbols or {})
    expr = parse(text, list(scope) + [var])
    try:
        coeffs = Poly(expr, Symbol(var)).all_coeffs()
    except Exception as exc:
        raise ExpressionError(f"{text!r} is not a polynomial in {var}") from exc
    return Polynomial(K, [evaluate(c, K, scope) for c in reversed(coeffs)])
