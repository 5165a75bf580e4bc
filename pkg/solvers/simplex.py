"""Exact rational simplex method.

Two-phase tableau simplex over ``Fraction`` with Bland's rule, so it
terminates on degenerate problems. Every answer carries a payload that can be
re-checked by plain matrix arithmetic: a feasible point, a Farkas vector, an
optimal point, or an improving ray.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple, Union

from config import Config
from algebra.linalg import mat_vec, vec_mat
from algebra.polynomial import as_rational, dot


@dataclass
class LinearSystem:
    """{x : A x = b, x_j >= 0 for nonnegative columns}"""
    matrix: List[List[Fraction]]
    rhs: List[Fraction]
    nonnegative: List[bool]

    def __post_init__(self):
        self.matrix = [[as_rational(a) for a in row] for row in self.matrix]
        self.rhs = [as_rational(b) for b in self.rhs]
        self.nonnegative = [bool(s) for s in self.nonnegative]
        if len(self.matrix) != len(self.rhs):
            raise ValueError(f"{len(self.matrix)} rows but {len(self.rhs)} right-hand sides")
        for i, row in enumerate(self.matrix):
            if len(row) != len(self.nonnegative):
                raise ValueError(f"row {i} has {len(row)} entries, expected {len(self.nonnegative)}")

    @property
    def nrows(self) -> int:
        return len(self.matrix)

    @property
    def ncols(self) -> int:
        return len(self.nonnegative)

    def is_satisfied_by(self, point: Sequence[Fraction]) -> bool:
        if len(point) != self.ncols:
            return False
        if any(s and x < 0 for s, x in zip(self.nonnegative, point)):
            return False
        return mat_vec(self.matrix, point) == self.rhs

    def with_rhs(self, rhs: Sequence[Fraction]) -> 'LinearSystem':
        return LinearSystem([list(r) for r in self.matrix], list(rhs), list(self.nonnegative))


@dataclass
class FarkasCertificate:
    """y with y^T A <= 0 on nonnegative columns, = 0 on free ones, and y^T b > 0"""
    multipliers: List[Fraction]

    def verify(self, system: LinearSystem) -> bool:
        if len(self.multipliers) != system.nrows:
            return False
        combined = vec_mat(self.multipliers, system.matrix, system.ncols)
        for value, nonneg in zip(combined, system.nonnegative):
            if nonneg and value > 0:
                return False
            if not nonneg and value != 0:
                return False
        return dot(self.multipliers, system.rhs) > 0


@dataclass
class Feasible:
    point: List[Fraction]

    def verify(self, system: LinearSystem) -> bool:
        return system.is_satisfied_by(self.point)


@dataclass
class Infeasible:
    certificate: FarkasCertificate

    def verify(self, system: LinearSystem) -> bool:
        return self.certificate.verify(system)


@dataclass
class Optimal:
    value: Fraction
    point: List[Fraction]


@dataclass
class Unbounded:
    point: List[Fraction]
    ray: List[Fraction]

    def verify(self, system: LinearSystem, objective: Sequence[Fraction], sense: str = 'min') -> bool:
        if not system.is_satisfied_by(self.point):
            return False
        if any(x != 0 for x in mat_vec(system.matrix, self.ray)):
            return False
        if any(s and r < 0 for s, r in zip(system.nonnegative, self.ray)):
            return False
        gain = dot([as_rational(c) for c in objective], self.ray)
        return gain < 0 if sense == 'min' else gain > 0


SolveResult = Union[Feasible, Infeasible]
OptimizeResult = Union[Optimal, Unbounded, Infeasible]


@dataclass
class _Tableau:
    rows: List[List[Fraction]]
    basis: List[int]
    columns: List[Tuple[int, int]]
    n_std: int
    row_signs: List[int]
    reduced: List[Fraction] = field(default_factory=list)
    cost: List[Fraction] = field(default_factory=list)


class ExactSimplex:
    """Stateless solver; one instance may be shared between concurrent solves"""

    def __init__(self, debug: Optional[bool] = None):
        self.debug = Config.DEBUG_TABLEAU if debug is None else debug

    # -- public API -------------------------------------------------------

    def solve(self, system: LinearSystem) -> SolveResult:
        tableau = self._build(system)
        infeasible = self._phase_one(tableau, system)
        if infeasible is not None:
            return infeasible
        return Feasible(self._original_point(tableau, system))

    def optimize(self, objective: Sequence, system: LinearSystem, sense: str = 'min') -> OptimizeResult:
        if sense not in ('min', 'max'):
            raise ValueError("sense must be 'min' or 'max'")
        objective = [as_rational(c) for c in objective]
        if len(objective) != system.ncols:
            raise ValueError(f"objective has {len(objective)} entries, expected {system.ncols}")
        tableau = self._build(system)
        infeasible = self._phase_one(tableau, system)
        if infeasible is not None:
            return infeasible
        self._drive_out_artificials(tableau)

        direction = 1 if sense == 'min' else -1
        n_artificial = len(tableau.row_signs)
        tableau.cost = [direction * objective[j] * sign for j, sign in tableau.columns] + [Fraction(0)] * n_artificial
        self._compute_reduced(tableau)
        status, entering = self._run(tableau, range(tableau.n_std))
        point = self._original_point(tableau, system)
        if status == 'unbounded':
            std_ray = [Fraction(0)] * tableau.n_std
            std_ray[entering] = Fraction(1)
            for r, b in enumerate(tableau.basis):
                if b < tableau.n_std:
                    std_ray[b] = -tableau.rows[r][entering]
            ray = self._to_original(tableau, system, std_ray)
            return Unbounded(point=point, ray=ray)
        return Optimal(value=dot(objective, point), point=point)

    # -- tableau mechanics ------------------------------------------------

    def _build(self, system: LinearSystem) -> _Tableau:
        columns: List[Tuple[int, int]] = []
        for j, nonneg in enumerate(system.nonnegative):
            columns.append((j, 1))
            if not nonneg:
                columns.append((j, -1))
        n_std = len(columns)
        m = system.nrows
        row_signs = [-1 if b < 0 else 1 for b in system.rhs]
        rows = []
        for i in range(m):
            s = row_signs[i]
            row = [s * sign * system.matrix[i][j] for j, sign in columns]
            row += [Fraction(1) if k == i else Fraction(0) for k in range(m)]
            row.append(s * system.rhs[i])
            rows.append(row)
        return _Tableau(rows=rows, basis=[n_std + i for i in range(m)], columns=columns,
                        n_std=n_std, row_signs=row_signs)

    def _compute_reduced(self, tableau: _Tableau):
        n = tableau.n_std + len(tableau.row_signs)
        reduced = list(tableau.cost[:n])
        for r, b in enumerate(tableau.basis):
            cb = tableau.cost[b]
            if cb:
                row = tableau.rows[r]
                for j in range(n):
                    if row[j]:
                        reduced[j] -= cb * row[j]
        tableau.reduced = reduced

    def _pivot(self, tableau: _Tableau, r: int, j: int):
        rows = tableau.rows
        pivot_row = rows[r]
        p = pivot_row[j]
        if p != 1:
            pivot_row = [x / p for x in pivot_row]
            rows[r] = pivot_row
        support = [k for k, x in enumerate(pivot_row) if x]
        for i, row in enumerate(rows):
            if i == r:
                continue
            factor = row[j]
            if factor:
                for k in support:
                    row[k] -= factor * pivot_row[k]
        if tableau.reduced:
            factor = tableau.reduced[j]
            if factor:
                for k in support:
                    if k < len(tableau.reduced):
                        tableau.reduced[k] -= factor * pivot_row[k]
        tableau.basis[r] = j
        if self.debug:
            self._dump(tableau, f"pivot row={r} col={j}")

    def _run(self, tableau: _Tableau, allowed) -> Tuple[str, Optional[int]]:
        allowed = list(allowed)
        while True:
            entering = next((j for j in allowed if tableau.reduced[j] < 0), None)
            if entering is None:
                return 'optimal', None
            best = None
            for r, row in enumerate(tableau.rows):
                a = row[entering]
                if a > 0:
                    key = (row[-1] / a, tableau.basis[r])
                    if best is None or key < best[0]:
                        best = (key, r)
            if best is None:
                return 'unbounded', entering
            self._pivot(tableau, best[1], entering)

    def _phase_one(self, tableau: _Tableau, system: LinearSystem) -> Optional[Infeasible]:
        m = len(tableau.row_signs)
        tableau.cost = [Fraction(0)] * tableau.n_std + [Fraction(1)] * m
        self._compute_reduced(tableau)
        self._run(tableau, range(tableau.n_std + m))
        value = sum((tableau.cost[b] * tableau.rows[r][-1] for r, b in enumerate(tableau.basis)), Fraction(0))
        if value == 0:
            return None
        # y' = c_B^T B^{-1}, read from the artificial block of the tableau
        flipped = [Fraction(0)] * m
        for r, b in enumerate(tableau.basis):
            cb = tableau.cost[b]
            if cb:
                row = tableau.rows[r]
                for i in range(m):
                    flipped[i] += cb * row[tableau.n_std + i]
        multipliers = [y * s for y, s in zip(flipped, tableau.row_signs)]
        certificate = FarkasCertificate(multipliers)
        if not certificate.verify(system):
            raise ArithmeticError("phase one produced an invalid Farkas certificate")
        return Infeasible(certificate)

    def _drive_out_artificials(self, tableau: _Tableau):
        r = 0
        while r < len(tableau.rows):
            if tableau.basis[r] >= tableau.n_std:
                row = tableau.rows[r]
                j = next((k for k in range(tableau.n_std) if row[k]), None)
                if j is None:
                    # redundant equation
                    del tableau.rows[r]
                    del tableau.basis[r]
                    continue
                self._pivot(tableau, r, j)
            r += 1

    def _std_point(self, tableau: _Tableau) -> List[Fraction]:
        x = [Fraction(0)] * tableau.n_std
        for r, b in enumerate(tableau.basis):
            if b < tableau.n_std:
                x[b] = tableau.rows[r][-1]
        return x

    def _to_original(self, tableau: _Tableau, system: LinearSystem, std: Sequence[Fraction]) -> List[Fraction]:
        x = [Fraction(0)] * system.ncols
        for k, (j, sign) in enumerate(tableau.columns):
            x[j] += sign * std[k]
        return x

    def _original_point(self, tableau: _Tableau, system: LinearSystem) -> List[Fraction]:
        return self._to_original(tableau, system, self._std_point(tableau))

    def _dump(self, tableau: _Tableau, title: str):
        print(f"[DEBUG] tableau {title}")
        print(f"[DEBUG]   basis: {tableau.basis}")
        for row in tableau.rows:
            print("[DEBUG]   " + ' '.join(str(x) for x in row))
        if tableau.reduced:
            print("[DEBUG]   reduced: " + ' '.join(str(x) for x in tableau.reduced))


def solve(system: LinearSystem) -> SolveResult:
    return ExactSimplex().solve(system)


def optimize(objective: Sequence, system: LinearSystem, sense: str = 'min') -> OptimizeResult:
    return ExactSimplex().optimize(objective, system, sense)


def inequality_system(rows: Sequence[Sequence[Fraction]], lower: Sequence[Fraction]) -> LinearSystem:
    """{x free : rows * x >= lower}, written as rows * x - s = lower with slacks s >= 0.

    The first len(rows[0]) variables of the returned system are x.
    """
    m = len(rows)
    if m == 0:
        raise ValueError("at least one inequality is required")
    n = len(rows[0])
    matrix = []
    for i, row in enumerate(rows):
        slack = [Fraction(-1) if k == i else Fraction(0) for k in range(m)]
        matrix.append([as_rational(a) for a in row] + slack)
    return LinearSystem(matrix, [as_rational(b) for b in lower], [False] * n + [True] * m)
