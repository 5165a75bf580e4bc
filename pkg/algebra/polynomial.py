"""Exact sparse multivariate polynomials over the rationals.

A polynomial is a finite map from exponent tuples to nonzero ``Fraction``
coefficients together with its ambient variable count. Values are immutable
after construction; every operation returns a new polynomial.
"""

from fractions import Fraction
from types import MappingProxyType
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

from sympy import Poly, Symbol
from sympy.parsing.sympy_parser import (
    convert_xor,
    implicit_multiplication,
    parse_expr,
    rationalize,
    standard_transformations,
)

Monomial = Tuple[int, ...]
Point = Tuple[Fraction, ...]
Scalar = Union[int, Fraction]

NEG_INFINITY = float('-inf')

_TRANSFORMATIONS = standard_transformations + (implicit_multiplication, convert_xor, rationalize)


class DimensionMismatch(ValueError):
    """Raised when operands live in different ambient dimensions"""


def as_rational(value) -> Fraction:
    """Coerce ints, Fractions and rational strings like '3/2'; floats are rejected"""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool) or isinstance(value, float):
        raise TypeError(f"exact rational expected, got {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    # sympy Rational / Integer
    if hasattr(value, 'p') and hasattr(value, 'q'):
        return Fraction(int(value.p), int(value.q))
    raise TypeError(f"exact rational expected, got {value!r}")


def make_point(coordinates: Iterable) -> Point:
    return tuple(as_rational(c) for c in coordinates)


def parse_point(text: str) -> Point:
    """Parse '(0, 3/4)' or '0, 3/4' into a point"""
    body = text.strip()
    if body.startswith('(') and body.endswith(')'):
        body = body[1:-1]
    parts = [p for p in body.replace(' ', '').split(',') if p != '']
    if not parts:
        raise ValueError(f"empty point '{text}'")
    try:
        return tuple(Fraction(p) for p in parts)
    except (ValueError, ZeroDivisionError) as e:
        raise ValueError(f"invalid point '{text}': {e}")


def format_rational(value: Fraction) -> str:
    return str(value)


def format_point(point: Sequence[Fraction]) -> str:
    return '(' + ', '.join(format_rational(c) for c in point) + ')'


def default_variables(nvars: int) -> List[str]:
    return [f"x{i + 1}" for i in range(nvars)]


def _check_dim(expected: int, got: int, what: str):
    if expected != got:
        raise DimensionMismatch(f"{what}: expected dimension {expected}, got {got}")


class Polynomial:
    """Sparse polynomial in ``nvars`` variables with exact rational coefficients"""

    __slots__ = ('_terms', '_nvars', '_hash')

    def __init__(self, terms: Mapping[Sequence[int], Scalar], nvars: int):
        if nvars < 0:
            raise ValueError("nvars must be nonnegative")
        clean: Dict[Monomial, Fraction] = {}
        for mono, coeff in terms.items():
            key = tuple(int(e) for e in mono)
            _check_dim(nvars, len(key), "monomial")
            if any(e < 0 for e in key):
                raise ValueError(f"negative exponent in {key}")
            c = as_rational(coeff)
            if c:
                clean[key] = clean.get(key, Fraction(0)) + c
                if not clean[key]:
                    del clean[key]
        self._terms = clean
        self._nvars = nvars
        self._hash = None

    # -- constructors -----------------------------------------------------

    @classmethod
    def zero(cls, nvars: int) -> 'Polynomial':
        return cls({}, nvars)

    @classmethod
    def constant(cls, value: Scalar, nvars: int) -> 'Polynomial':
        return cls({(0,) * nvars: value}, nvars)

    @classmethod
    def variable(cls, index: int, nvars: int) -> 'Polynomial':
        if not 0 <= index < nvars:
            raise IndexError(f"variable index {index} out of range for {nvars} variables")
        mono = [0] * nvars
        mono[index] = 1
        return cls({tuple(mono): 1}, nvars)

    @classmethod
    def monomial(cls, exponents: Sequence[int], coefficient: Scalar = 1) -> 'Polynomial':
        return cls({tuple(exponents): coefficient}, len(exponents))

    @classmethod
    def affine(cls, constant: Scalar, linear: Sequence[Scalar]) -> 'Polynomial':
        """Build c + sum(a_i x_i)"""
        n = len(linear)
        terms: Dict[Monomial, Scalar] = {(0,) * n: constant}
        for i, a in enumerate(linear):
            mono = [0] * n
            mono[i] = 1
            terms[tuple(mono)] = a
        return cls(terms, n)

    @classmethod
    def from_text(cls, text: str, variables: Optional[Sequence[str]] = None, nvars: Optional[int] = None) -> 'Polynomial':
        if variables is None:
            if nvars is None:
                raise ValueError("either variables or nvars is required")
            variables = default_variables(nvars)
        return parse_polynomial(text, variables)

    # -- accessors --------------------------------------------------------

    @property
    def nvars(self) -> int:
        return self._nvars

    @property
    def terms(self) -> Mapping[Monomial, Fraction]:
        return MappingProxyType(self._terms)

    @property
    def is_zero(self) -> bool:
        return not self._terms

    @property
    def degree(self):
        """Total degree; the zero polynomial has degree NEG_INFINITY"""
        if not self._terms:
            return NEG_INFINITY
        return max(sum(m) for m in self._terms)

    @property
    def is_affine(self) -> bool:
        return self.degree <= 1

    def coefficient(self, mono: Sequence[int]) -> Fraction:
        return self._terms.get(tuple(mono), Fraction(0))

    @property
    def constant_term(self) -> Fraction:
        return self.coefficient((0,) * self._nvars)

    def linear_coefficients(self) -> List[Fraction]:
        coeffs = []
        for i in range(self._nvars):
            mono = [0] * self._nvars
            mono[i] = 1
            coeffs.append(self.coefficient(mono))
        return coeffs

    def sorted_terms(self) -> List[Tuple[Monomial, Fraction]]:
        """Terms in graded-lexicographic order, highest first"""
        return sorted(self._terms.items(), key=lambda item: (sum(item[0]), item[0]), reverse=True)

    # -- ring operations --------------------------------------------------

    def _coerce(self, other) -> 'Polynomial':
        if isinstance(other, Polynomial):
            _check_dim(self._nvars, other._nvars, "polynomial operand")
            return other
        return Polynomial.constant(as_rational(other), self._nvars)

    def __add__(self, other) -> 'Polynomial':
        other = self._coerce(other)
        terms = dict(self._terms)
        for mono, c in other._terms.items():
            terms[mono] = terms.get(mono, Fraction(0)) + c
        return Polynomial(terms, self._nvars)

    __radd__ = __add__

    def __neg__(self) -> 'Polynomial':
        return Polynomial({m: -c for m, c in self._terms.items()}, self._nvars)

    def __sub__(self, other) -> 'Polynomial':
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> 'Polynomial':
        return self._coerce(other) - self

    def __mul__(self, other) -> 'Polynomial':
        if not isinstance(other, Polynomial):
            c = as_rational(other)
            return Polynomial({m: c * v for m, v in self._terms.items()}, self._nvars)
        _check_dim(self._nvars, other._nvars, "polynomial operand")
        terms: Dict[Monomial, Fraction] = {}
        for m1, c1 in self._terms.items():
            for m2, c2 in other._terms.items():
                mono = tuple(a + b for a, b in zip(m1, m2))
                terms[mono] = terms.get(mono, Fraction(0)) + c1 * c2
        return Polynomial(terms, self._nvars)

    __rmul__ = __mul__

    def scale(self, factor: Scalar) -> 'Polynomial':
        return self * as_rational(factor)

    def __pow__(self, exponent: int) -> 'Polynomial':
        if not isinstance(exponent, int) or exponent < 0:
            raise ValueError("integer power must be a nonnegative int")
        result = Polynomial.constant(1, self._nvars)
        base = self
        while exponent:
            if exponent & 1:
                result = result * base
            exponent >>= 1
            if exponent:
                base = base * base
        return result

    def __eq__(self, other) -> bool:
        if isinstance(other, Polynomial):
            return self._nvars == other._nvars and self._terms == other._terms
        try:
            return self == Polynomial.constant(as_rational(other), self._nvars)
        except (TypeError, ValueError):
            return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self._nvars, frozenset(self._terms.items())))
        return self._hash

    # -- evaluation and calculus -------------------------------------------

    def evaluate(self, point: Sequence) -> Fraction:
        z = make_point(point)
        _check_dim(self._nvars, len(z), "evaluation point")
        total = Fraction(0)
        for mono, c in self._terms.items():
            value = c
            for zi, e in zip(z, mono):
                if e:
                    value *= zi ** e
            total += value
        return total

    __call__ = evaluate

    def partial(self, index: int) -> 'Polynomial':
        if not 0 <= index < self._nvars:
            raise IndexError(f"variable index {index} out of range")
        terms: Dict[Monomial, Fraction] = {}
        for mono, c in self._terms.items():
            e = mono[index]
            if e:
                lowered = list(mono)
                lowered[index] = e - 1
                terms[tuple(lowered)] = c * e
        return Polynomial(terms, self._nvars)

    def gradient(self, point: Sequence) -> List[Fraction]:
        z = make_point(point)
        _check_dim(self._nvars, len(z), "gradient point")
        return [self.partial(i).evaluate(z) for i in range(self._nvars)]

    def hessian(self, point: Sequence) -> List[List[Fraction]]:
        z = make_point(point)
        _check_dim(self._nvars, len(z), "hessian point")
        n = self._nvars
        firsts = [self.partial(i) for i in range(n)]
        matrix = [[Fraction(0)] * n for _ in range(n)]
        for i in range(n):
            for j in range(i, n):
                value = firsts[i].partial(j).evaluate(z)
                matrix[i][j] = value
                matrix[j][i] = value
        return matrix

    def restrict_to_line(self, point: Sequence, direction: Sequence) -> List[Fraction]:
        """Coefficients c_k of the univariate polynomial t -> p(z + t v), lowest first"""
        z = make_point(point)
        v = make_point(direction)
        _check_dim(self._nvars, len(z), "line point")
        _check_dim(self._nvars, len(v), "line direction")
        line = [Polynomial({(0,): zi, (1,): vi}, 1) for zi, vi in zip(z, v)]
        restricted = self.compose(line)
        if restricted.is_zero:
            return [Fraction(0)]
        coeffs = [Fraction(0)] * (restricted.degree + 1)
        for (k,), c in restricted.terms.items():
            coeffs[k] = c
        return coeffs

    def directional_derivative(self, point: Sequence, direction: Sequence) -> Fraction:
        coeffs = self.restrict_to_line(point, direction)
        return coeffs[1] if len(coeffs) > 1 else Fraction(0)

    def hessian_form(self, point: Sequence, direction: Sequence) -> Fraction:
        coeffs = self.restrict_to_line(point, direction)
        return 2 * coeffs[2] if len(coeffs) > 2 else Fraction(0)

    def compose(self, substitutions: Sequence['Polynomial']) -> 'Polynomial':
        """Substitute ``substitutions[i]`` for x_i"""
        _check_dim(self._nvars, len(substitutions), "substitution list")
        if not substitutions:
            return Polynomial(dict(self._terms), 0)
        target = substitutions[0].nvars
        for sub in substitutions:
            _check_dim(target, sub.nvars, "substituted polynomial")
        powers: Dict[Tuple[int, int], Polynomial] = {}

        def power(i: int, e: int) -> Polynomial:
            key = (i, e)
            if key not in powers:
                powers[key] = substitutions[i] ** e
            return powers[key]

        result = Polynomial.zero(target)
        for mono, c in self._terms.items():
            term = Polynomial.constant(c, target)
            for i, e in enumerate(mono):
                if e:
                    term = term * power(i, e)
            result = result + term
        return result

    # -- text format ------------------------------------------------------

    def to_text(self, variables: Optional[Sequence[str]] = None) -> str:
        """Canonical text: signed terms 'c x1^e1 x2^e2', graded-lex order"""
        if variables is None:
            variables = default_variables(self._nvars)
        if not self._terms:
            return '0'
        pieces = []
        for index, (mono, c) in enumerate(self.sorted_terms()):
            factors = [] if abs(c) == 1 and any(mono) else [format_rational(abs(c))]
            for name, e in zip(variables, mono):
                if e == 1:
                    factors.append(name)
                elif e > 1:
                    factors.append(f"{name}^{e}")
            body = ' '.join(factors)
            if index == 0:
                pieces.append(('-' if c < 0 else '') + body)
            else:
                pieces.append(('- ' if c < 0 else '+ ') + body)
        return ' '.join(pieces)

    def __str__(self) -> str:
        return self.to_text()

    def __repr__(self) -> str:
        return f"Polynomial('{self.to_text()}', nvars={self._nvars})"


def parse_polynomial(text: str, variables: Sequence[str]) -> Polynomial:
    """Parse an expression such as '3/2 x1^2 x2 - x1*(1 - x2)' over the given variables"""
    symbols = [Symbol(name) for name in variables]
    local = dict(zip(variables, symbols))
    try:
        expr = parse_expr(text, local_dict=local, transformations=_TRANSFORMATIONS)
    except Exception as e:
        raise ValueError(f"cannot parse polynomial '{text}': {e}")
    free = getattr(expr, 'free_symbols', set())
    unknown = sorted(str(s) for s in free if s not in symbols)
    if unknown:
        raise ValueError(f"undeclared variable(s) {', '.join(unknown)} in '{text}'")
    try:
        poly = Poly(expr, *symbols, domain='QQ') if symbols else None
    except Exception as e:
        raise ValueError(f"'{text}' is not a polynomial with rational coefficients: {e}")
    if poly is None:
        return Polynomial.constant(as_rational(expr), 0)
    terms = {tuple(mono): as_rational(coeff) for mono, coeff in poly.terms()}
    return Polynomial(terms, len(symbols))


def monomials_up_to(nvars: int, degree: int) -> List[Monomial]:
    """All exponent tuples of total degree <= degree, graded then lexicographic ascending"""
    if degree < 0:
        return []
    result: List[Monomial] = []

    def extend(prefix: List[int], budget: int):
        if len(prefix) == nvars:
            result.append(tuple(prefix))
            return
        for e in range(budget + 1):
            extend(prefix + [e], budget - e)

    extend([], degree)
    return sorted(result, key=lambda m: (sum(m), tuple(-e for e in m)))


def dot(u: Sequence[Fraction], v: Sequence[Fraction]) -> Fraction:
    _check_dim(len(u), len(v), "dot product")
    return sum((a * b for a, b in zip(u, v)), Fraction(0))
