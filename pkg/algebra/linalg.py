"""Exact rational linear algebra.

Rank, kernels and row reduction go through sympy matrices with Rational
entries; the symmetric decomposition used for semidefiniteness tests is a
pivoted LDL^T over ``Fraction`` that also produces a negative direction when
the form is indefinite.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence

from sympy import Matrix, Rational

from algebra.polynomial import as_rational, dot

Vector = List[Fraction]
Rows = Sequence[Sequence[Fraction]]


def to_sympy(rows: Rows, ncols: int) -> Matrix:
    if not rows:
        return Matrix.zeros(0, ncols)
    return Matrix([[Rational(int(x.numerator), int(x.denominator)) for x in map(as_rational, row)] for row in rows])


def from_sympy_vector(column) -> Vector:
    return [as_rational(v) for v in column]


def rank(rows: Rows, ncols: int) -> int:
    if not rows or ncols == 0:
        return 0
    return int(to_sympy(rows, ncols).rank())


def nullspace(rows: Rows, ncols: int) -> List[Vector]:
    """Basis of {v : rows * v = 0}; the standard basis when there are no rows"""
    if not rows or all(all(x == 0 for x in row) for row in rows):
        return [[Fraction(int(i == j)) for j in range(ncols)] for i in range(ncols)]
    return [from_sympy_vector(col) for col in to_sympy(rows, ncols).nullspace()]


def solve_linear(rows: Rows, rhs: Sequence[Fraction], ncols: int) -> Optional[Vector]:
    """One exact solution of rows * x = rhs (free variables set to 0), or None"""
    if len(rows) != len(rhs):
        raise ValueError("row count and right-hand side length differ")
    if not rows:
        return [Fraction(0)] * ncols
    augmented = to_sympy([list(r) + [rhs[i]] for i, r in enumerate(rows)], ncols + 1)
    reduced, pivots = augmented.rref()
    if ncols in pivots:
        return None
    solution = [Fraction(0)] * ncols
    for row_index, col in enumerate(pivots):
        solution[col] = as_rational(reduced[row_index, ncols])
    return solution


def mat_vec(rows: Rows, v: Sequence[Fraction]) -> Vector:
    return [dot(row, v) for row in rows]


def vec_mat(y: Sequence[Fraction], rows: Rows, ncols: int) -> Vector:
    result = [Fraction(0)] * ncols
    for yi, row in zip(y, rows):
        if yi:
            for j, a in enumerate(row):
                if a:
                    result[j] += yi * a
    return result


def quadratic_form(matrix: Rows, v: Sequence[Fraction]) -> Fraction:
    return dot(v, mat_vec(matrix, v))


def is_symmetric(matrix: Rows) -> bool:
    n = len(matrix)
    return all(len(row) == n for row in matrix) and all(
        matrix[i][j] == matrix[j][i] for i in range(n) for j in range(i + 1, n))


@dataclass
class SymmetricDecomposition:
    """Outcome of the pivoted LDL^T: PSD verdict, pivots, and a negative direction if any"""
    is_psd: bool
    diagonal: List[Fraction] = field(default_factory=list)
    pivot_order: List[int] = field(default_factory=list)
    negative_direction: Optional[Vector] = None
    negative_value: Optional[Fraction] = None

    @property
    def rank(self) -> int:
        return len(self.diagonal)


def symmetric_decomposition(matrix: Rows) -> SymmetricDecomposition:
    """Exact symmetric elimination with diagonal pivoting.

    Pivots on the largest positive diagonal entry. A negative diagonal entry,
    or an all-zero diagonal with a nonzero off-diagonal entry, proves the form
    is not PSD; the corresponding direction is carried back through the
    eliminated pivots so that v^T H v < 0 holds for the original matrix.
    """
    if not is_symmetric(matrix):
        raise ValueError("matrix is not symmetric")
    n = len(matrix)
    work = [[as_rational(x) for x in row] for row in matrix]
    remaining = list(range(n))
    steps = []
    diagonal: List[Fraction] = []
    local: Optional[Dict[int, Fraction]] = None

    while remaining:
        negative = [i for i in remaining if work[i][i] < 0]
        if negative:
            local = {negative[0]: Fraction(1)}
            break
        positive = [i for i in remaining if work[i][i] > 0]
        if not positive:
            off = [(i, j) for a, i in enumerate(remaining) for j in remaining[a + 1:] if work[i][j] != 0]
            if off:
                i, j = off[0]
                local = {i: Fraction(1), j: Fraction(-1) if work[i][j] > 0 else Fraction(1)}
            break
        p = max(positive, key=lambda i: (work[i][i], -i))
        d = work[p][p]
        others = [j for j in remaining if j != p]
        multipliers = {j: work[p][j] / d for j in others}
        for i in others:
            if work[i][p] == 0:
                continue
            for j in others:
                work[i][j] -= work[i][p] * multipliers[j]
        steps.append((p, multipliers))
        diagonal.append(d)
        remaining = others

    result = SymmetricDecomposition(is_psd=local is None, diagonal=diagonal,
                                    pivot_order=[p for p, _ in steps])
    if local is None:
        return result

    # carry the local direction back through the eliminated pivots
    x = [Fraction(0)] * n
    for i, value in local.items():
        x[i] = value
    for p, multipliers in reversed(steps):
        x[p] = -sum((m * x[j] for j, m in multipliers.items()), Fraction(0))
    value = quadratic_form(matrix, x)
    if value >= 0:
        raise ArithmeticError("negative direction failed to verify")
    result.negative_direction = x
    result.negative_value = value
    return result


def in_kernel(rows: Rows, v: Sequence[Fraction]) -> bool:
    """True iff rows * v = 0"""
    return all(x == 0 for x in mat_vec(rows, v))
