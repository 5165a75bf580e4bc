from dataclasses import dataclass, field
from fractions import Fraction
from math import ceil
from typing import Dict, List, Optional, Sequence, Tuple

from config import Config
from algebra.cones import Certificate, Column, ConeKind, GeneratorSet, multiplier_basis
from algebra.polynomial import DimensionMismatch, Point, Polynomial
from agents.variety_agent import IdealBasis, IdealNotFound, VarietyAgent
from solvers import polytope
from solvers.simplex import (
    ExactSimplex, FarkasCertificate, Feasible, Infeasible, LinearSystem, Optimal, inequality_system,
)


class PolytopeHypothesisError(ValueError):
    """The generators do not describe a nonempty compact polytope"""


@dataclass
class DegreeAttempt:
    """A degree at which the coefficient-matching LP was infeasible"""
    degree: int
    system: LinearSystem
    certificate: FarkasCertificate

    def verify(self) -> bool:
        return self.certificate.verify(self.system)


@dataclass
class NotFoundAtDegree:
    max_degree: int
    attempts: List[DegreeAttempt] = field(default_factory=list)
    reason: str = ''


@dataclass
class MinkowskiCombination:
    """f = constant + sum coefficients[i] * g_i with all multipliers >= 0"""
    constant: Fraction
    coefficients: List[Fraction]

    def expand(self, generators: Sequence[Polynomial]) -> Polynomial:
        total = Polynomial.constant(self.constant, generators[0].nvars)
        for c, g in zip(self.coefficients, generators):
            total = total + g * c
        return total


@dataclass
class RefutationPoint:
    point: Point
    value: Fraction


@dataclass
class ArchimedeanCertificate:
    """N - x_i and N + x_i as nonnegative combinations of the generators"""
    bound: int
    combinations: Dict[Tuple[int, int], MinkowskiCombination]


@dataclass
class NotPolytopeCompact:
    reason: str


@dataclass
class ProbeRefutation:
    """n * u + sign * a is not in the truncated cone for any n >= 0.

    The system keeps n as its last column (with column -u); a Farkas vector
    for it stays valid for every fixed n, see ``system_for``.
    """
    sign: int
    degree: int
    system: LinearSystem
    certificate: FarkasCertificate

    def system_for(self, n) -> LinearSystem:
        matrix = [row[:-1] for row in self.system.matrix]
        rhs = [b - Fraction(n) * row[-1] for b, row in zip(self.system.rhs, self.system.matrix)]
        return LinearSystem(matrix, rhs, self.system.nonnegative[:-1])

    def verify(self, n=None) -> bool:
        if n is None:
            return self.certificate.verify(self.system)
        return self.certificate.verify(self.system_for(n))


@dataclass
class ProbeEntry:
    target: Polynomial
    bound: Optional[int] = None
    certificates: Dict[int, Certificate] = field(default_factory=dict)
    refutations: List[ProbeRefutation] = field(default_factory=list)
    note: str = ''

    @property
    def found(self) -> bool:
        return self.bound is not None


@dataclass
class ProbeResult:
    degree: int
    n_max: int
    entries: List[ProbeEntry] = field(default_factory=list)

    @property
    def bound(self) -> Optional[int]:
        if not self.entries or not all(e.found for e in self.entries):
            return None
        return max(e.bound for e in self.entries)


class CertificateAgent:
    """Degree-bounded cone membership by exact linear programming"""

    def __init__(self, config: Optional[Config] = None, solver: Optional[ExactSimplex] = None):
        self.config = config or Config()
        self.solver = solver or ExactSimplex()
        self.variety_agent = VarietyAgent(self.config)
        self.progress_callback = None

    def set_progress_callback(self, callback):
        """Set callback for progress updates"""
        self.progress_callback = callback
        self.variety_agent.set_progress_callback(callback)

    def _update_progress(self, message):
        if self.progress_callback:
            self.progress_callback(message)

    # -- coefficient matching ---------------------------------------------

    @staticmethod
    def _coefficient_system(target: Polynomial, polynomials: Sequence[Polynomial]) -> LinearSystem:
        """sum_k c_k p_k = target with c >= 0, one row per monomial"""
        monomials = set(target.terms)
        for p in polynomials:
            monomials.update(p.terms)
        order = sorted(monomials)
        matrix = [[p.coefficient(m) for p in polynomials] for m in order]
        rhs = [target.coefficient(m) for m in order]
        if not order:
            matrix = [[Fraction(0)] * len(polynomials)]
            rhs = [Fraction(0)]
        return LinearSystem(matrix, rhs, [True] * len(polynomials))

    def _membership(self, target: Polynomial, cone: GeneratorSet, degree: int):
        """Certificate at exactly this degree, or a DegreeAttempt carrying the Farkas vector"""
        columns: List[Column] = multiplier_basis(cone, degree, self.config.BASIS_CAP)
        system = self._coefficient_system(target, [c.polynomial for c in columns])
        self._update_progress(f"degree {degree}: {len(columns)} products, {system.nrows} monomials")
        result = self.solver.solve(system)
        if isinstance(result, Infeasible):
            return DegreeAttempt(degree, system, result.certificate)
        terms = {col.key: value for col, value in zip(columns, result.point) if value > 0}
        return Certificate(kind=cone.kind, degree=degree, terms=terms)

    # -- operations -------------------------------------------------------

    def handelman_certify(self, f: Polynomial, cone: GeneratorSet, max_degree: Optional[int] = None,
                          start_degree: Optional[int] = None):
        """Certificate for f in the cone at the lowest degree up to max_degree.

        Returns a Certificate, or NotFoundAtDegree with one Farkas vector per
        degree tried.
        """
        if cone.kind == ConeKind.QUADRATIC_MODULE:
            raise ValueError("certification needs a semiring, semiring-module or preordering")
        if f.nvars != cone.nvars:
            raise DimensionMismatch(f"f has {f.nvars} variables, generators have {cone.nvars}")
        max_degree = self.config.MAX_DEGREE if max_degree is None else max_degree
        if f.is_zero:
            return Certificate(kind=cone.kind, degree=0)

        gen_degree = max([g.degree for g in cone.constraints if not g.is_zero] + [0])
        if start_degree is None:
            start_degree = max(f.degree, min(gen_degree, max_degree))
        attempts: List[DegreeAttempt] = []
        for degree in range(start_degree, max_degree + 1):
            outcome = self._membership(f, cone, degree)
            if isinstance(outcome, Certificate):
                if not self.verify_certificate(f, outcome, cone):
                    raise ArithmeticError("LP solution failed certificate verification")
                self._update_progress(f"certificate found at degree {degree} with {len(outcome.terms)} terms")
                return outcome
            attempts.append(outcome)
        reason = f"no certificate up to degree {max_degree}"
        if start_degree > max_degree:
            reason = f"degree of f ({f.degree}) exceeds the degree limit {max_degree}"
        return NotFoundAtDegree(max_degree=max_degree, attempts=attempts, reason=reason)

    def verify_certificate(self, f: Polynomial, certificate: Certificate, cone: GeneratorSet) -> bool:
        """Recompute the expansion; coefficients must be positive and terms admissible"""
        if certificate.kind != cone.kind:
            return False
        if any(c <= 0 for c in certificate.terms.values()):
            return False
        if not certificate.respects_kind(cone):
            return False
        return certificate.expand(cone) == f

    def minkowski_linear_rep(self, f: Polynomial, cone: GeneratorSet):
        """f >= 0 on the polytope K as a nonnegative combination of 1 and the g_i.

        When no combination exists the minimum of f over K is negative and the
        minimizer is returned as a RefutationPoint.
        """
        gens = list(cone.generators)
        if not f.is_affine or not all(g.is_affine for g in gens):
            raise ValueError("linear representation needs affine f and affine generators")
        box = polytope.bounding_box(gens)
        if not box.is_bounded:
            raise PolytopeHypothesisError(f"K is {box.status}")
        one = Polynomial.constant(1, f.nvars)
        system = self._coefficient_system(f, [one] + gens)
        result = self.solver.solve(system)
        if isinstance(result, Feasible):
            combination = MinkowskiCombination(result.point[0], result.point[1:])
            if combination.expand(gens) != f:
                raise ArithmeticError("linear representation failed to verify")
            return combination

        rows, lower = polytope.affine_rows(gens)
        region = inequality_system(rows, lower)
        objective = f.linear_coefficients() + [Fraction(0)] * (region.ncols - f.nvars)
        optimum = self.solver.optimize(objective, region, 'min')
        if not isinstance(optimum, Optimal):
            raise ArithmeticError("minimizing an affine function over a compact polytope failed")
        point = tuple(optimum.point[:f.nvars])
        value = f.evaluate(point)
        if value >= 0:
            raise ArithmeticError("f is nonnegative on K but has no linear representation")
        return RefutationPoint(point, value)

    def archimedean_polytope_check(self, cone: GeneratorSet):
        """N +/- x_i in the semiring for an integer N, or NotPolytopeCompact"""
        gens = list(cone.generators)
        if not all(g.is_affine for g in gens):
            return NotPolytopeCompact("generators are not all affine")
        box = polytope.bounding_box(gens)
        if not box.is_bounded:
            return NotPolytopeCompact(f"K is {box.status}")
        bound = box.radius()
        combinations: Dict[Tuple[int, int], MinkowskiCombination] = {}
        for i in range(cone.nvars):
            x = Polynomial.variable(i, cone.nvars)
            for sign in (1, -1):
                outcome = self.minkowski_linear_rep(bound - x * sign, cone)
                if not isinstance(outcome, MinkowskiCombination):
                    raise ArithmeticError(f"{bound} - ({sign}) x{i + 1} is negative on K")
                combinations[(i, sign)] = outcome
        return ArchimedeanCertificate(bound, combinations)

    def order_unit_probe(self, ideal: IdealBasis, cone: GeneratorSet, unit: Polynomial,
                         targets: Sequence[Polynomial], degree: int, n_max: Optional[int] = None) -> ProbeResult:
        """Smallest integer n with n * u +/- a in the degree-bounded cone, per target a.

        n is an LP variable, so an infeasible LP refutes every n at once.
        """
        n_max = self.config.N_MAX if n_max is None else n_max
        for name, p in [('unit', unit)] + [(f"target '{a}'", a) for a in targets]:
            if p.nvars != ideal.nvars:
                raise DimensionMismatch(f"{name} has {p.nvars} variables, ideal has {ideal.nvars}")
            membership = self.variety_agent.ideal_membership(p, ideal, p.degree if not p.is_zero else 0)
            if isinstance(membership, IdealNotFound):
                raise ValueError(f"{name} is not in the ideal ({membership.reason})")

        columns = multiplier_basis(cone, degree, self.config.BASIS_CAP)
        polys = [c.polynomial for c in columns]
        result = ProbeResult(degree=degree, n_max=n_max)
        for a in targets:
            entry = ProbeEntry(target=a)
            lowest = 1
            for sign in (1, -1):
                system = self._coefficient_system(a * sign, polys + [-unit])
                objective = [Fraction(0)] * len(polys) + [Fraction(1)]
                outcome = self.solver.optimize(objective, system, 'min')
                if isinstance(outcome, Infeasible):
                    entry.refutations.append(ProbeRefutation(sign, degree, system, outcome.certificate))
                    continue
                lowest = max(lowest, ceil(outcome.value))
            if entry.refutations:
                entry.note = f"no n >= 0 works at degree {degree}"
                result.entries.append(entry)
                continue
            for n in range(lowest, n_max + 1):
                found = {}
                for sign in (1, -1):
                    outcome = self._membership(unit * n + a * sign, cone, degree)
                    if not isinstance(outcome, Certificate):
                        break
                    if not self.verify_certificate(unit * n + a * sign, outcome, cone):
                        raise ArithmeticError("probe certificate failed to verify")
                    found[sign] = outcome
                if len(found) == 2:
                    entry.bound = n
                    entry.certificates = found
                    break
            if entry.bound is None:
                entry.note = f"smallest LP bound {lowest} but no certificate with n <= {n_max}"
            self._update_progress(f"target '{a}': n = {entry.bound}")
            result.entries.append(entry)
        return result
