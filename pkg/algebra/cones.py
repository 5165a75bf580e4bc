"""Generator sets, product bases and certificates for finitely generated cones.

Four cone kinds are supported. Semirings and preorderings are closed under
products of generators; quadratic modules and semiring-modules are not.
Sums of squares enter the LP relaxation through diagonally dominant squares
m^2 and (m_i +/- m_j)^2 of monomials.
"""

from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from config import Config
from algebra.errors import CapExceeded
from algebra.polynomial import DimensionMismatch, Monomial, Polynomial, monomials_up_to


class ConeKind(str, Enum):
    SEMIRING = 'semiring'
    SEMIRING_MODULE = 'semiring-module'
    QUADRATIC_MODULE = 'quadratic-module'
    PREORDERING = 'preordering'

    @classmethod
    def parse(cls, text: str) -> 'ConeKind':
        try:
            return cls(text.strip().lower())
        except ValueError:
            valid = ', '.join(k.value for k in cls)
            raise ValueError(f"unknown cone kind '{text}' (expected one of: {valid})")

    @property
    def has_squares(self) -> bool:
        return self in (ConeKind.QUADRATIC_MODULE, ConeKind.PREORDERING)


Exponents = Tuple[int, ...]
# (exponents on the generators, module generator index with 0 = the constant 1, square base or None)
TermKey = Tuple[Exponents, int, Optional[Polynomial]]


@dataclass(frozen=True)
class GeneratorSet:
    kind: ConeKind
    generators: Tuple[Polynomial, ...]
    module_generators: Tuple[Polynomial, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, 'generators', tuple(self.generators))
        object.__setattr__(self, 'module_generators', tuple(self.module_generators))
        if not self.generators:
            raise ValueError("a cone needs at least one generator")
        n = self.generators[0].nvars
        for g in self.generators + self.module_generators:
            if g.nvars != n:
                raise DimensionMismatch(f"generator '{g}' has {g.nvars} variables, expected {n}")
        if self.module_generators and self.kind != ConeKind.SEMIRING_MODULE:
            raise ValueError("module generators are only allowed for a semiring-module")

    @property
    def nvars(self) -> int:
        return self.generators[0].nvars

    @property
    def constraints(self) -> Tuple[Polynomial, ...]:
        """Polynomials whose common nonnegativity set is X(M)"""
        return self.generators + self.module_generators

    @property
    def is_affine(self) -> bool:
        return all(g.is_affine for g in self.constraints)

    def contains_point(self, point: Sequence[Fraction]) -> bool:
        return all(g.evaluate(point) >= 0 for g in self.constraints)

    def is_interior_point(self, point: Sequence[Fraction]) -> bool:
        return all(g.evaluate(point) > 0 for g in self.constraints)

    def active(self, point: Sequence[Fraction]) -> List[int]:
        """Indices into ``constraints`` vanishing at the point"""
        return [i for i, g in enumerate(self.constraints) if g.evaluate(point) == 0]

    def semiring(self) -> 'GeneratorSet':
        if self.kind in (ConeKind.SEMIRING, ConeKind.PREORDERING):
            return self
        return GeneratorSet(ConeKind.SEMIRING, self.generators)

    def module_factor(self, index: int) -> Polynomial:
        if index == 0:
            return Polynomial.constant(1, self.nvars)
        return self.module_generators[index - 1]


def _exponent_vectors(degrees: Sequence, budget: int, squarefree: bool) -> List[Exponents]:
    """All alpha with sum alpha_i deg g_i <= budget; constant generators get exponent <= 1"""
    vectors: List[Exponents] = []

    def extend(prefix: List[int], remaining: int):
        i = len(prefix)
        if i == len(degrees):
            vectors.append(tuple(prefix))
            return
        d = degrees[i]
        if squarefree or d <= 0:
            top = 1 if (d <= 0 or d <= remaining) else 0
        else:
            top = remaining // d
        for e in range(top + 1):
            used = e * d if d > 0 else 0
            extend(prefix + [e], remaining - used)

    if budget < 0:
        return []
    extend([], budget)
    return vectors


def _weighted_degree(alpha: Exponents, degrees: Sequence) -> int:
    return sum(a * d for a, d in zip(alpha, degrees) if a and d > 0)


def product_basis(cone: GeneratorSet, degree: int, cap: Optional[int] = None) -> List[Tuple[Exponents, Polynomial]]:
    """Products g^alpha admissible for the cone kind, with total degree <= degree.

    Semiring and semiring-module use all exponents, preorderings use squarefree
    ones, and quadratic modules only the bare generators and 1.
    """
    cap = Config.BASIS_CAP if cap is None else cap
    gens = cone.generators
    s = len(gens)
    degrees = [g.degree if not g.is_zero else 0 for g in gens]
    if cone.kind == ConeKind.QUADRATIC_MODULE:
        alphas = [(0,) * s] + [tuple(int(j == i) for j in range(s)) for i in range(s) if degrees[i] <= degree]
    else:
        alphas = _exponent_vectors(degrees, degree, squarefree=cone.kind == ConeKind.PREORDERING)
    if len(alphas) > cap:
        raise CapExceeded("product basis", len(alphas), cap)
    alphas.sort(key=lambda a: (_weighted_degree(a, degrees), tuple(-e for e in a)))

    cache: Dict[Exponents, Polynomial] = {(0,) * s: Polynomial.constant(1, cone.nvars)}

    def power_product(alpha: Exponents) -> Polynomial:
        if alpha not in cache:
            i = max(k for k, e in enumerate(alpha) if e)
            lower = list(alpha)
            lower[i] -= 1
            cache[alpha] = power_product(tuple(lower)) * gens[i]
        return cache[alpha]

    return [(alpha, power_product(alpha)) for alpha in alphas]


def square_bases(nvars: int, degree: int) -> List[Polynomial]:
    """Bases b with b^2 of degree <= degree: m, then m_i + m_j and m_i - m_j.

    The constant monomial is left out as a lone base since 1^2 is already the
    unit multiplier.
    """
    if degree < 2:
        return []
    monomials = [Polynomial.monomial(m) for m in monomials_up_to(nvars, degree // 2)]
    bases = [m for m in monomials if m.degree > 0]
    for i in range(len(monomials)):
        for j in range(i + 1, len(monomials)):
            bases.append(monomials[i] + monomials[j])
            bases.append(monomials[i] - monomials[j])
    return bases


@dataclass
class Column:
    key: TermKey
    polynomial: Polynomial


def multiplier_basis(cone: GeneratorSet, degree: int, cap: Optional[int] = None) -> List[Column]:
    """Every LP column for a degree-bounded membership test in the cone.

    Each column is g^alpha * h_j * b^2 with h_0 = 1 and b absent for the
    products without a square factor.
    """
    cap = Config.BASIS_CAP if cap is None else cap
    products = product_basis(cone, degree, cap)
    columns: List[Column] = []
    factors = [(0, Polynomial.constant(1, cone.nvars))]
    factors += [(j + 1, h) for j, h in enumerate(cone.module_generators)]
    for index, h in factors:
        for alpha, p in products:
            base = p * h if index else p
            if base.is_zero or base.degree > degree:
                continue
            columns.append(Column((alpha, index, None), base))
            if cone.kind.has_squares:
                for b in square_bases(cone.nvars, degree - max(base.degree, 0)):
                    columns.append(Column((alpha, index, b), base * b * b))
            if len(columns) > cap:
                raise CapExceeded("multiplier basis", len(columns), cap)
    return columns


def term_polynomial(cone: GeneratorSet, key: TermKey) -> Polynomial:
    alpha, index, base = key
    if len(alpha) != len(cone.generators):
        raise ValueError(f"exponent vector {alpha} does not match {len(cone.generators)} generators")
    if not 0 <= index <= len(cone.module_generators):
        raise ValueError(f"module index {index} out of range")
    result = Polynomial.constant(1, cone.nvars)
    for g, e in zip(cone.generators, alpha):
        if e:
            result = result * g ** e
    if index:
        result = result * cone.module_factor(index)
    if base is not None:
        result = result * base * base
    return result


def _term_sort_key(item):
    (alpha, index, base), _ = item
    return (alpha, index, '' if base is None else base.to_text())


@dataclass
class Certificate:
    """f = sum over terms of coeff * g^alpha * h_j * b^2, every coeff > 0"""
    kind: ConeKind
    degree: int
    terms: Dict[TermKey, Fraction] = field(default_factory=dict)

    def sorted_terms(self) -> List[Tuple[TermKey, Fraction]]:
        return sorted(self.terms.items(), key=_term_sort_key)

    def expand(self, cone: GeneratorSet) -> Polynomial:
        total = Polynomial.zero(cone.nvars)
        for key, c in self.terms.items():
            total = total + term_polynomial(cone, key) * c
        return total

    def respects_kind(self, cone: GeneratorSet) -> bool:
        for alpha, index, base in self.terms:
            if index and cone.kind != ConeKind.SEMIRING_MODULE:
                return False
            if base is not None and not cone.kind.has_squares:
                return False
            if cone.kind == ConeKind.PREORDERING and any(e > 1 for e in alpha):
                return False
            if cone.kind == ConeKind.QUADRATIC_MODULE and sum(alpha) > 1:
                return False
        return True
