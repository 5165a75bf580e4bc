"""Polyhedra {x : g_j(x) >= 0} cut out by affine polynomials.

Bounding boxes come from exact LPs; vertices are the points among the
minimized generators computed by pplpy.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from math import ceil
from typing import List, Optional, Sequence, Tuple

from algebra.linalg import rank
from algebra.polynomial import Point, Polynomial, make_point
from solvers.double_description import generator_vector, ppl_generators
from solvers.simplex import Infeasible, Optimal, inequality_system, optimize

BOUNDED = 'bounded'
UNBOUNDED = 'unbounded'
EMPTY = 'empty'


def affine_rows(generators: Sequence[Polynomial]) -> Tuple[List[List[Fraction]], List[Fraction]]:
    """g_j = a_j . x + c_j  ->  rows a_j and lower bounds -c_j"""
    if not generators:
        raise ValueError("at least one generator is required")
    for g in generators:
        if not g.is_affine:
            raise ValueError(f"generator '{g}' is not affine")
    rows = [g.linear_coefficients() for g in generators]
    lower = [-g.constant_term for g in generators]
    return rows, lower


@dataclass
class BoundingBox:
    status: str
    lower: List[Fraction] = field(default_factory=list)
    upper: List[Fraction] = field(default_factory=list)

    @property
    def is_bounded(self) -> bool:
        return self.status == BOUNDED

    def radius(self) -> int:
        """Smallest integer N >= 1 with the box inside [-N, N]^n"""
        if not self.is_bounded:
            raise ValueError(f"box is {self.status}")
        extent = max([abs(x) for x in self.lower + self.upper] + [Fraction(1)])
        return max(1, ceil(extent))


def bounding_box(generators: Sequence[Polynomial]) -> BoundingBox:
    rows, lower = affine_rows(generators)
    n = generators[0].nvars
    system = inequality_system(rows, lower)
    lows, highs = [], []
    for i in range(n):
        objective = [Fraction(int(j == i)) for j in range(system.ncols)]
        for sense, sink in (('min', lows), ('max', highs)):
            result = optimize(objective, system, sense)
            if isinstance(result, Infeasible):
                return BoundingBox(EMPTY)
            if not isinstance(result, Optimal):
                return BoundingBox(UNBOUNDED)
            sink.append(result.value)
    return BoundingBox(BOUNDED, lows, highs)


def contains(generators: Sequence[Polynomial], point: Sequence[Fraction]) -> bool:
    return all(g.evaluate(point) >= 0 for g in generators)


def vertices(generators: Sequence[Polynomial]) -> List[Point]:
    """Vertices of the polyhedron, sorted; empty when it contains a line"""
    rows, lower = affine_rows(generators)
    n = generators[0].nvars
    if n == 0:
        return [()] if contains(generators, ()) else []
    found = set()
    for generator in ppl_generators(rows, n, [-c for c in lower]):
        if generator.is_line():
            return []
        if generator.is_point():
            divisor = Fraction(int(generator.divisor()))
            found.add(make_point(c / divisor for c in generator_vector(generator)))
    return sorted(found)


def affinely_independent(points: Sequence[Point]) -> List[Point]:
    """Greedy maximal affinely independent subset, first point kept"""
    if not points:
        return []
    base = points[0]
    chosen = [base]
    directions: List[List[Fraction]] = []
    for p in points[1:]:
        d = [a - b for a, b in zip(p, base)]
        if rank(directions + [d], len(base)) > len(directions):
            directions.append(d)
            chosen.append(p)
    return chosen


def affine_dimension(points: Sequence[Point]) -> int:
    return len(affinely_independent(points)) - 1 if points else -1


def barycentric_grid(simplex: Sequence[Point], order: int) -> List[Point]:
    """Points sum_k (m_k / order) v_k with nonnegative integers m summing to order"""
    if not simplex:
        return []
    if order < 1:
        return [tuple(simplex[0])]
    k = len(simplex)
    points = set()
    for weights in product(range(order + 1), repeat=k):
        if sum(weights) != order:
            continue
        points.add(tuple(sum((Fraction(w, order) * v[i] for w, v in zip(weights, simplex)), Fraction(0))
                         for i in range(len(simplex[0]))))
    return sorted(points)


def box_grid(lower: Sequence[Fraction], upper: Sequence[Fraction], steps: int, cap: Optional[int] = None) -> List[Point]:
    """Uniform grid with steps+1 points per axis, coarsened until it fits under cap"""
    n = len(lower)
    steps = max(1, steps)
    if cap is not None:
        while steps > 1 and (steps + 1) ** n > cap:
            steps -= 1
    axes = []
    for lo, hi in zip(lower, upper):
        lo, hi = Fraction(lo), Fraction(hi)
        if lo == hi:
            axes.append([lo])
        else:
            axes.append([lo + (hi - lo) * Fraction(k, steps) for k in range(steps + 1)])
    return [tuple(p) for p in product(*axes)]
