"""Extreme rays of polyhedral cones {v : G v >= 0}.

The conversion from constraints to generators is done by the Parma Polyhedra
Library (pplpy) in exact integer arithmetic. Rows are scaled to integers
first; the minimized generators are then put in a canonical form: rays are
projected onto the orthogonal complement of the lineality space, normalized,
and sorted.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm
from typing import List, Optional, Sequence

import ppl

from config import Config
from algebra.errors import CapExceeded
from algebra.linalg import nullspace
from algebra.polynomial import as_rational, dot

Vector = List[Fraction]


@dataclass
class RayDecomposition:
    """cone = cone(rays) + span(lineality)"""
    rays: List[Vector] = field(default_factory=list)
    lineality: List[Vector] = field(default_factory=list)

    def generators(self) -> List[Vector]:
        """Rays, then each lineality vector with both signs"""
        result = [list(r) for r in self.rays]
        for w in self.lineality:
            result.append(list(w))
            result.append([-x for x in w])
        return result

    def verify(self, rows: Sequence[Sequence[Fraction]]) -> bool:
        for r in self.rays:
            if any(dot(row, r) < 0 for row in rows):
                return False
        for w in self.lineality:
            if any(dot(row, w) != 0 for row in rows):
                return False
        return True


def integer_row(row: Sequence[Fraction]) -> List[int]:
    """Positive multiple of a rational row with integer entries"""
    scale = lcm(*(Fraction(x).denominator for x in row)) if row else 1
    return [int(Fraction(x) * scale) for x in row]


def linear_form(coefficients: Sequence[int], variables: Sequence):
    return sum(c * v for c, v in zip(coefficients, variables) if c)


def ppl_generators(rows: Sequence[Sequence[Fraction]], ncols: int, constants: Optional[Sequence[Fraction]] = None):
    """Minimized generators of {x : rows x + constants >= 0}"""
    variables = [ppl.Variable(i) for i in range(ncols)]
    constraints = ppl.Constraint_System()
    for j, row in enumerate(rows):
        c = Fraction(0) if constants is None else Fraction(constants[j])
        scaled = integer_row(list(row) + [c])
        if not any(scaled[:-1]):
            if scaled[-1] < 0:
                return []
            continue
        constraints.insert(linear_form(scaled[:-1], variables) + scaled[-1] >= 0)
    polyhedron = ppl.C_Polyhedron(ncols, 'universe')
    polyhedron.add_constraints(constraints)
    if polyhedron.is_empty():
        return []
    return list(polyhedron.minimized_generators())


def generator_vector(generator) -> Vector:
    return [Fraction(int(c)) for c in generator.coefficients()]


def normalize_direction(v: Sequence[Fraction]) -> Vector:
    """Scale so the first nonzero coordinate is +1 or -1"""
    lead = next((x for x in v if x != 0), None)
    if lead is None:
        return list(v)
    return [x / abs(lead) for x in v]


def _orthogonal_basis(vectors: Sequence[Vector]) -> List[Vector]:
    basis: List[Vector] = []
    for v in vectors:
        w = list(v)
        for u in basis:
            w = _project_out(w, u)
        if any(w):
            basis.append(w)
    return basis


def _project_out(v: Vector, u: Vector) -> Vector:
    t = dot(v, u) / dot(u, u)
    return [x - t * y for x, y in zip(v, u)]


def extreme_rays(rows: Sequence[Sequence], ncols: Optional[int] = None, cap: Optional[int] = None) -> RayDecomposition:
    """Minimal generators of {v in Q^n : rows * v >= 0}, rays in descending lexicographic order"""
    matrix = [[as_rational(x) for x in row] for row in rows]
    if ncols is None:
        if not matrix:
            raise ValueError("ncols is required when there are no constraints")
        ncols = len(matrix[0])
    if any(len(row) != ncols for row in matrix):
        raise ValueError(f"every constraint must have {ncols} entries")
    cap = Config.RAY_DIMENSION_CAP if cap is None else cap
    if ncols > cap:
        raise CapExceeded("ray enumeration dimension", ncols, cap)

    identity = [[Fraction(int(i == j)) for j in range(ncols)] for i in range(ncols)]
    # canonical lineality basis: the kernel of the constraint matrix
    lineality = nullspace(matrix, ncols) if matrix else identity
    ortho = _orthogonal_basis(lineality)
    rays: List[Vector] = []
    for generator in ppl_generators(matrix, ncols):
        if not generator.is_ray():
            continue
        r = generator_vector(generator)
        for u in ortho:
            r = _project_out(r, u)
        r = normalize_direction(r)
        if any(r) and r not in rays:
            rays.append(r)
    rays.sort(reverse=True)
    return RayDecomposition(rays=rays, lineality=[normalize_direction(w) for w in lineality])
