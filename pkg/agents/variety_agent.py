from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Iterator, List, Optional, Sequence, Tuple

from config import Config
from algebra.cones import GeneratorSet
from algebra.errors import CapExceeded
from algebra.linalg import nullspace, rank, solve_linear
from algebra.polynomial import DimensionMismatch, Point, Polynomial, format_point, make_point, monomials_up_to


class IdealRole(str, Enum):
    CONSTRAINT = 'constraint-ideal'
    VARIETY = 'variety-ideal'


@dataclass(frozen=True)
class IdealBasis:
    generators: Tuple[Polynomial, ...]
    role: IdealRole = IdealRole.CONSTRAINT

    def __post_init__(self):
        object.__setattr__(self, 'generators', tuple(self.generators))
        if not self.generators:
            raise ValueError("an ideal basis needs at least one generator")
        n = self.generators[0].nvars
        for g in self.generators:
            if g.nvars != n:
                raise DimensionMismatch(f"ideal generator '{g}' has {g.nvars} variables, expected {n}")

    @property
    def nvars(self) -> int:
        return self.generators[0].nvars

    def squared(self) -> 'IdealBasis':
        """Generators g_i * g_j (i <= j) of the squared ideal"""
        gens = self.generators
        products = [gens[i] * gens[j] for i in range(len(gens)) for j in range(i, len(gens))]
        return IdealBasis(tuple(products), self.role)

    def vanishes_at(self, point: Sequence[Fraction]) -> bool:
        return all(g.evaluate(point) == 0 for g in self.generators)


@dataclass
class Cofactors:
    """f = sum q_i g_i with deg q_i <= degree"""
    cofactors: List[Polynomial]
    degree: int

    def expand(self, ideal: IdealBasis) -> Polynomial:
        total = Polynomial.zero(ideal.nvars)
        for q, g in zip(self.cofactors, ideal.generators):
            total = total + q * g
        return total


@dataclass
class IdealNotFound:
    degree: int
    reason: str = ''


@dataclass
class TangentSpace:
    point: Point
    jacobian: List[List[Fraction]]
    basis: List[List[Fraction]]
    rank: int
    codimension: Optional[int] = None
    nonsingular: Optional[bool] = None

    @property
    def dimension(self) -> int:
        return len(self.basis)


@dataclass(frozen=True)
class SamplePoint:
    point: Point
    origin: str = 'user'


@dataclass
class SampleSet:
    """Points of Z(f) intersected with X(M); origin tells user points from generated ones"""
    samples: List[SamplePoint] = field(default_factory=list)

    @classmethod
    def build(cls, points: Sequence[Sequence], cone: GeneratorSet, target: Optional[Polynomial] = None,
              origin: str = 'user') -> 'SampleSet':
        result = cls()
        result.extend(points, cone, target, origin)
        return result

    def extend(self, points: Sequence[Sequence], cone: GeneratorSet, target: Optional[Polynomial] = None,
               origin: str = 'user'):
        seen = {s.point for s in self.samples}
        for raw in points:
            z = make_point(raw)
            if len(z) != cone.nvars:
                raise DimensionMismatch(f"sample {format_point(z)} has {len(z)} coordinates, expected {cone.nvars}")
            if not cone.contains_point(z):
                raise ValueError(f"sample {format_point(z)} is outside X(M)")
            if target is not None and target.evaluate(z) != 0:
                raise ValueError(f"sample {format_point(z)} is not a zero of f (f = {target.evaluate(z)})")
            if z not in seen:
                seen.add(z)
                self.samples.append(SamplePoint(z, origin))

    @property
    def points(self) -> List[Point]:
        return [s.point for s in self.samples]

    def __iter__(self) -> Iterator[SamplePoint]:
        return iter(self.samples)

    def __len__(self) -> int:
        return len(self.samples)


class VarietyAgent:
    """Ideal membership and tangent spaces over Q"""

    def __init__(self, config: Optional[Config] = None):
        self.config = config or Config()
        self.progress_callback = None

    def set_progress_callback(self, callback):
        """Set callback for progress updates"""
        self.progress_callback = callback

    def _update_progress(self, message):
        if self.progress_callback:
            self.progress_callback(message)

    def ideal_membership(self, f: Polynomial, ideal: IdealBasis, degree: int):
        """Cofactors with f = sum q_i g_i and deg q_i <= degree, or IdealNotFound.

        Unknowns are the coefficients of every q_i; the equations match
        coefficients monomial by monomial and are solved by exact row reduction.
        """
        if f.nvars != ideal.nvars:
            raise DimensionMismatch(f"f has {f.nvars} variables, ideal has {ideal.nvars}")
        if degree < 0:
            return IdealNotFound(degree, "negative cofactor degree")
        if f.is_zero:
            return Cofactors([Polynomial.zero(f.nvars) for _ in ideal.generators], degree)

        monomials = monomials_up_to(f.nvars, degree)
        unknowns = len(monomials) * len(ideal.generators)
        if unknowns > self.config.SYSTEM_CAP:
            raise CapExceeded("ideal membership system", unknowns, self.config.SYSTEM_CAP)
        self._update_progress(f"ideal membership at cofactor degree {degree}: {unknowns} unknowns")

        columns: List[Polynomial] = [Polynomial.monomial(m) * g for g in ideal.generators for m in monomials]
        rows_index = sorted(set(f.terms).union(*(set(c.terms) for c in columns)))
        rows = [[c.coefficient(mono) for c in columns] for mono in rows_index]
        rhs = [f.coefficient(mono) for mono in rows_index]
        solution = solve_linear(rows, rhs, len(columns))
        if solution is None:
            return IdealNotFound(degree, f"no cofactors of degree <= {degree}")

        cofactors = []
        for i in range(len(ideal.generators)):
            chunk = solution[i * len(monomials):(i + 1) * len(monomials)]
            cofactors.append(Polynomial(dict(zip(monomials, chunk)), f.nvars))
        result = Cofactors(cofactors, degree)
        if result.expand(ideal) != f:
            raise ArithmeticError("ideal membership cofactors failed to verify")
        return result

    def tangent_space(self, ideal: IdealBasis, point: Sequence, dimension: Optional[int] = None) -> TangentSpace:
        """T_z = ker Jac(J)(z); nonsingular iff the Jacobian rank equals n - dimension"""
        z = make_point(point)
        if len(z) != ideal.nvars:
            raise DimensionMismatch(f"point {format_point(z)} has {len(z)} coordinates, expected {ideal.nvars}")
        if not ideal.vanishes_at(z):
            raise ValueError(f"point {format_point(z)} is not on the variety")
        jacobian = [g.gradient(z) for g in ideal.generators]
        r = rank(jacobian, ideal.nvars)
        basis = nullspace(jacobian, ideal.nvars)
        space = TangentSpace(point=z, jacobian=jacobian, basis=basis, rank=r)
        if dimension is not None:
            space.codimension = ideal.nvars - dimension
            space.nonsingular = r == space.codimension
        return space
