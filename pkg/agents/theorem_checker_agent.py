from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from config import Config
from algebra.cones import Certificate, ConeKind, GeneratorSet
from algebra.linalg import in_kernel, nullspace, symmetric_decomposition
from algebra.polynomial import DimensionMismatch, Point, Polynomial, dot, format_point
from agents.certificate_agent import (
    CertificateAgent, NotPolytopeCompact, PolytopeHypothesisError,
)
from agents.variety_agent import Cofactors, IdealBasis, IdealRole, SampleSet, VarietyAgent
from agents.witness_agent import WitnessAgent
from solvers import polytope
from solvers.double_description import RayDecomposition, extreme_rays


class IdentityError(ValueError):
    """A declared decomposition does not multiply out to f"""


class Verdict(str, Enum):
    VERIFIED = 'hypotheses-verified-on-samples'
    VIOLATED = 'hypothesis-violated'
    INCONCLUSIVE = 'inconclusive'


class Status(str, Enum):
    OK = 'ok'
    VIOLATED = 'violated'
    INCONCLUSIVE = 'inconclusive'


@dataclass
class Counterexample:
    kind: str
    point: Optional[Point] = None
    direction: Optional[List[Fraction]] = None
    value: Optional[Fraction] = None
    detail: str = ''


@dataclass
class ConditionReport:
    name: str
    status: Status
    detail: str = ''
    counterexample: Optional[Counterexample] = None

    @classmethod
    def ok(cls, name: str, detail: str = '') -> 'ConditionReport':
        return cls(name, Status.OK, detail)

    @classmethod
    def violated(cls, name: str, counterexample: Counterexample, detail: str = '') -> 'ConditionReport':
        return cls(name, Status.VIOLATED, detail or counterexample.detail, counterexample)

    @classmethod
    def inconclusive(cls, name: str, detail: str) -> 'ConditionReport':
        return cls(name, Status.INCONCLUSIVE, detail)


@dataclass
class CheckReport:
    theorem: str
    verdict: Verdict
    conditions: List[ConditionReport] = field(default_factory=list)
    counterexample: Optional[Counterexample] = None
    certificate: Optional[Certificate] = None
    notes: List[str] = field(default_factory=list)

    @classmethod
    def from_conditions(cls, theorem: str, conditions: List[ConditionReport],
                        notes: Sequence[str] = ()) -> 'CheckReport':
        """The first violated condition decides; otherwise any inconclusive one does"""
        violated = next((c for c in conditions if c.status == Status.VIOLATED), None)
        if violated is not None:
            return cls(theorem, Verdict.VIOLATED, conditions, violated.counterexample, notes=list(notes))
        if any(c.status == Status.INCONCLUSIVE for c in conditions):
            return cls(theorem, Verdict.INCONCLUSIVE, conditions, notes=list(notes))
        return cls(theorem, Verdict.VERIFIED, conditions, notes=list(notes))

    @property
    def reason(self) -> str:
        for c in self.conditions:
            if c.status != Status.OK:
                return f"{c.name}: {c.detail}"
        return ''


@dataclass
class SumTerm:
    """One summand b * s of a decomposition f = sum b_i s_i with s_i in the semiring"""
    b: Polynomial
    s: Polynomial
    certificate: Optional[Certificate] = None


@dataclass
class ConeConditionOutcome:
    ok: bool
    decomposition: RayDecomposition
    gradient: List[Fraction]
    direction: Optional[List[Fraction]] = None
    value: Optional[Fraction] = None
    detail: str = ''


class TheoremCheckerAgent:
    """Checks the hypotheses of local-global positivity criteria on sample points"""

    def __init__(self, config: Optional[Config] = None):
        self.config = config or Config()
        self.certificate_agent = CertificateAgent(self.config)
        self.variety_agent = VarietyAgent(self.config)
        self.witness_agent = WitnessAgent(self.config)
        self.progress_callback = None

    def set_progress_callback(self, callback):
        """Set callback for progress updates"""
        self.progress_callback = callback
        self.certificate_agent.set_progress_callback(callback)
        self.variety_agent.set_progress_callback(callback)
        self.witness_agent.set_progress_callback(callback)

    def _update_progress(self, message):
        if self.progress_callback:
            self.progress_callback(message)

    # -- shared conditions ------------------------------------------------

    def _nonnegativity(self, f: Polynomial, cone: GeneratorSet) -> ConditionReport:
        found = self.witness_agent.type1_search(f, cone)
        if found is None:
            return ConditionReport.ok('nonnegativity', "no negative grid point")
        z = found.witness.point
        return ConditionReport.violated('nonnegativity', Counterexample(
            'negative-point', z, value=found.witness.value, detail=f"f{format_point(z)} = {found.witness.value} < 0"))

    def _samples_condition(self, samples: SampleSet) -> Optional[ConditionReport]:
        if len(samples) == 0:
            return ConditionReport.inconclusive('samples', "no samples of Z(f) in X(M) supplied")
        return None

    def _ideal_condition(self, name: str, f: Polynomial, ideal: IdealBasis, degree: int) -> ConditionReport:
        outcome = self.variety_agent.ideal_membership(f, ideal, degree)
        if isinstance(outcome, Cofactors):
            return ConditionReport.ok(name, f"cofactor degree {degree}")
        return ConditionReport.inconclusive(name, outcome.reason)

    def cone_condition(self, f: Polynomial, ideal: Sequence[Polynomial], variety: IdealBasis,
                       z: Sequence) -> ConeConditionOutcome:
        """Every direction v with grad g_i(z) . v >= 0 has grad f(z) . v >= 0, and v in T_z when equality holds"""
        z = tuple(Fraction(c) for c in z)
        if f.evaluate(z) != 0:
            raise ValueError(f"f does not vanish at {format_point(z)}")
        for g in ideal:
            if g.evaluate(z) != 0:
                raise ValueError(f"ideal generator '{g}' does not vanish at {format_point(z)}")
        rows = [g.gradient(z) for g in ideal]
        decomposition = extreme_rays(rows, f.nvars)
        gradient = f.gradient(z)
        tangent = self.variety_agent.tangent_space(variety, z)

        def outcome(direction, detail):
            return ConeConditionOutcome(False, decomposition, gradient, direction, dot(gradient, direction), detail)

        for r in decomposition.rays:
            value = dot(gradient, r)
            if value < 0:
                return outcome(r, f"grad f . v = {value} < 0 on an extreme ray")
            if value == 0 and not in_kernel(tangent.jacobian, r):
                return outcome(r, "grad f . v = 0 but v is not tangent to the variety")
        for w in decomposition.lineality:
            value = dot(gradient, w)
            if value != 0:
                return outcome(w if value < 0 else [-x for x in w], "grad f is not orthogonal to the lineality space")
            if not in_kernel(tangent.jacobian, w):
                return outcome(w, "lineality direction is not tangent to the variety")
        return ConeConditionOutcome(True, decomposition, gradient)

    def _boundary_conditions(self, f: Polynomial, ideal: Sequence[Polynomial], variety: IdealBasis,
                             dimension: int, samples: SampleSet, degree: int) -> List[ConditionReport]:
        conditions = [self._ideal_condition('ideal-membership', f, IdealBasis(tuple(ideal)), degree)]
        for sample in samples:
            z = sample.point
            at = f"@{format_point(z)}"
            cone_check = self.cone_condition(f, ideal, variety, z)
            if cone_check.ok:
                conditions.append(ConditionReport.ok('cone-condition' + at))
            else:
                conditions.append(ConditionReport.violated('cone-condition' + at, Counterexample(
                    'cone-direction', z, direction=cone_check.direction, value=cone_check.value,
                    detail=cone_check.detail)))
            tangent = self.variety_agent.tangent_space(variety, z, dimension)
            if tangent.nonsingular:
                conditions.append(ConditionReport.ok('nonsingular' + at, f"rank {tangent.rank}"))
            else:
                conditions.append(ConditionReport.violated('nonsingular' + at, Counterexample(
                    'singular-point', z, detail=f"Jacobian rank {tangent.rank}, codimension {tangent.codimension}")))
        return conditions

    # -- criteria ---------------------------------------------------------

    def check_sumbiti(self, f: Polynomial, terms: Sequence[SumTerm], cone: GeneratorSet, samples: SampleSet,
                      epsilon: Optional[Fraction] = None, max_degree: Optional[int] = None) -> CheckReport:
        """f = sum b_i s_i with s_i in the semiring and every b_i > 0 on Z(f) in X(M)"""
        semiring = cone.semiring()
        total = Polynomial.zero(f.nvars)
        for term in terms:
            if term.b.nvars != f.nvars or term.s.nvars != f.nvars:
                raise DimensionMismatch("decomposition term has the wrong number of variables")
            total = total + term.b * term.s
        if total != f:
            raise IdentityError(f"sum of b_i s_i is '{total}', not f")

        conditions = [ConditionReport.ok('identity')]
        for index, term in enumerate(terms, 1):
            name = f"membership[s_{index}]"
            certificate = term.certificate
            if certificate is None:
                outcome = self.certificate_agent.handelman_certify(term.s, semiring, max_degree)
                certificate = outcome if isinstance(outcome, Certificate) else None
            if certificate is None or not self.certificate_agent.verify_certificate(term.s, certificate, semiring):
                raise ValueError(f"s_{index} = '{term.s}' has no verified certificate in the semiring")
            term.certificate = certificate
            conditions.append(ConditionReport.ok(name, f"degree {certificate.degree}"))

        missing = self._samples_condition(samples)
        if missing:
            conditions.append(missing)
        for sample in samples:
            z = sample.point
            for index, term in enumerate(terms, 1):
                value = term.b.evaluate(z)
                name = f"positivity[b_{index}]@{format_point(z)}"
                if value > 0:
                    conditions.append(ConditionReport.ok(name))
                else:
                    conditions.append(ConditionReport.violated(name, Counterexample(
                        'sample-value', z, value=value, detail=f"b_{index}{format_point(z)} = {value} is not > 0")))

        if epsilon is not None:
            for index, term in enumerate(terms, 1):
                name = f"margin[b_{index}]"
                outcome = self.certificate_agent.handelman_certify(term.b - epsilon, semiring, max_degree)
                if isinstance(outcome, Certificate):
                    conditions.append(ConditionReport.ok(name, f"b_{index} - {epsilon} certified"))
                else:
                    conditions.append(ConditionReport.inconclusive(name, f"b_{index} - {epsilon}: {outcome.reason}"))
        return CheckReport.from_conditions('sumbiti', conditions)

    def check_boundary_theorem(self, f: Polynomial, cone: GeneratorSet, ideal: Sequence[Polynomial],
                               variety: IdealBasis, dimension: int, samples: SampleSet,
                               degree: Optional[int] = None) -> CheckReport:
        for g in ideal:
            if g not in cone.generators:
                raise ValueError(f"ideal generator '{g}' is not a cone generator")
        if not ideal:
            raise ValueError("at least one ideal generator is required")
        if len(samples) == 0:
            raise ValueError("the boundary criterion needs at least one sample")
        for sample in samples:
            if any(g.evaluate(sample.point) != 0 for g in ideal):
                raise ValueError(f"ideal generators do not vanish at {format_point(sample.point)}")
        degree = max(f.degree - 1, 0) if degree is None else degree
        conditions = [self._nonnegativity(f, cone)]
        conditions += self._boundary_conditions(f, ideal, variety, dimension, samples, degree)
        return CheckReport.from_conditions('boundary', conditions)

    def check_polytope_face(self, f: Polynomial, cone: GeneratorSet, face: Sequence[int],
                            samples: Optional[SampleSet] = None, degree: Optional[int] = None,
                            density: Optional[int] = None) -> CheckReport:
        """Boundary criterion on a face F of a polytope K, with the ideal of the face.

        ``face`` holds 0-based indices of generators defining F.
        """
        if cone.kind != ConeKind.SEMIRING or not cone.is_affine:
            raise PolytopeHypothesisError("the face criterion needs a semiring of affine generators")
        archimedean = self.certificate_agent.archimedean_polytope_check(cone)
        if isinstance(archimedean, NotPolytopeCompact):
            raise PolytopeHypothesisError(archimedean.reason)
        gens = list(cone.generators)
        for i in face:
            if not 0 <= i < len(gens):
                raise IndexError(f"face generator index {i + 1} out of range")
        density = self.config.GRID_DENSITY if density is None else density
        degree = max(f.degree - 1, 0) if degree is None else degree

        all_vertices = polytope.vertices(gens)
        face_vertices = [v for v in all_vertices if all(gens[i].evaluate(v) == 0 for i in face)]
        if not face_vertices:
            raise ValueError("the selected generators do not define a nonempty face")
        vanishing = [i for i, g in enumerate(gens) if all(g.evaluate(v) == 0 for v in face_vertices)]
        dimension = polytope.affine_dimension(face_vertices)
        simplex = polytope.affinely_independent(face_vertices)
        notes = [f"face has {len(face_vertices)} vertices, dimension {dimension}, "
                 f"vanishing generators {', '.join(str(i + 1) for i in vanishing)}"]
        self._update_progress(notes[0])

        conditions = []
        base = face_vertices[0]
        directions = [[a - b for a, b in zip(v, base)] for v in face_vertices[1:]]
        line = [Polynomial.affine(base[k], [d[k] for d in directions]) for k in range(f.nvars)]
        if not f.compose(line).is_zero:
            bad = next((p for p in polytope.barycentric_grid(simplex, max(f.degree, 1)) if f.evaluate(p) != 0), None)
            if bad is None:
                raise ArithmeticError("f is nonzero on the face but vanishes on its lattice points")
            conditions.append(ConditionReport.violated('face-vanishing', Counterexample(
                'face-nonvanishing', bad, value=f.evaluate(bad), detail=f"f{format_point(bad)} = {f.evaluate(bad)}")))
            return CheckReport.from_conditions('polytope-face', conditions, notes)
        conditions.append(ConditionReport.ok('face-vanishing'))

        face_samples = SampleSet()
        if samples is not None:
            for s in samples:
                if any(gens[i].evaluate(s.point) != 0 for i in face):
                    raise ValueError(f"sample {format_point(s.point)} is not on the face")
            face_samples.extend(samples.points, cone, f, origin='user')
        face_samples.extend(face_vertices, cone, f, origin='grid')
        grid = polytope.barycentric_grid(simplex, density)[:self.config.SAMPLE_CAP]
        face_samples.extend(grid, cone, f, origin='grid')

        ideal = [gens[i] for i in vanishing]
        variety = IdealBasis(tuple(ideal), IdealRole.VARIETY)
        conditions += self._boundary_conditions(f, ideal, variety, dimension, face_samples, degree)
        conditions.append(self._positivity_off_face(f, cone, face, all_vertices, density))
        report = CheckReport.from_conditions('polytope-face', conditions, notes)
        if report.verdict == Verdict.VERIFIED:
            outcome = self.certificate_agent.handelman_certify(f, cone)
            if isinstance(outcome, Certificate):
                report.certificate = outcome
            else:
                report.notes.append(f"no certificate found: {outcome.reason}")
        return report

    def _positivity_off_face(self, f: Polynomial, cone: GeneratorSet, face: Sequence[int],
                             vertices: Sequence[Point], density: int) -> ConditionReport:
        gens = list(cone.generators)
        box = polytope.bounding_box(gens)
        points = set(vertices) | set(polytope.box_grid(box.lower, box.upper, 2 * density, self.config.BASIS_CAP))
        for p in sorted(points):
            if not cone.contains_point(p) or all(gens[i].evaluate(p) == 0 for i in face):
                continue
            value = f.evaluate(p)
            if value <= 0:
                return ConditionReport.violated('positivity-off-face', Counterexample(
                    'positivity-off-face', p, value=value, detail=f"f{format_point(p)} = {value} off the face"))
        return ConditionReport.ok('positivity-off-face')

    def check_interior_theorem(self, f: Polynomial, cone: GeneratorSet, variety: IdealBasis, dimension: int,
                               samples: SampleSet, degree: Optional[int] = None,
                               complete_intersection: bool = False) -> CheckReport:
        """Second-order criterion at zeros of f: nonsingular, critical, PSD Hessian with kernel in T_z"""
        degree = max(f.degree - 2, 0) if degree is None else degree
        conditions = [self._nonnegativity(f, cone)]
        missing = self._samples_condition(samples)
        if missing:
            conditions.append(missing)
        conditions.append(self._ideal_condition('ideal-square-membership', f, variety.squared(), degree))
        if complete_intersection:
            conditions.append(ConditionReport.ok('complete-intersection', "asserted by the user, not verified"))
        else:
            conditions.append(ConditionReport.inconclusive('complete-intersection', "not asserted"))

        for sample in samples:
            z = sample.point
            at = f"@{format_point(z)}"
            tangent = self.variety_agent.tangent_space(variety, z, dimension)
            if tangent.nonsingular:
                conditions.append(ConditionReport.ok('nonsingular' + at, f"rank {tangent.rank}"))
            else:
                conditions.append(ConditionReport.violated('nonsingular' + at, Counterexample(
                    'singular-point', z, detail=f"Jacobian rank {tangent.rank}, codimension {tangent.codimension}")))
            gradient = f.gradient(z)
            if any(gradient):
                conditions.append(ConditionReport.violated('critical' + at, Counterexample(
                    'gradient', z, direction=gradient, detail="grad f does not vanish")))
            else:
                conditions.append(ConditionReport.ok('critical' + at))
            decomposition = symmetric_decomposition(f.hessian(z))
            if not decomposition.is_psd:
                v = decomposition.negative_direction
                conditions.append(ConditionReport.violated('hessian-psd' + at, Counterexample(
                    'hessian-direction', z, direction=v, value=decomposition.negative_value,
                    detail=f"v^T H v = {decomposition.negative_value} < 0")))
                continue
            conditions.append(ConditionReport.ok('hessian-psd' + at, f"rank {decomposition.rank}"))
            hessian = f.hessian(z)
            kernel_ok, bad = self._kernel_in_tangent(hessian, tangent.jacobian, f.nvars)
            if kernel_ok:
                conditions.append(ConditionReport.ok('hessian-kernel' + at))
            else:
                conditions.append(ConditionReport.violated('hessian-kernel' + at, Counterexample(
                    'kernel-direction', z, direction=bad, detail="Hessian kernel leaves the tangent space")))
        return CheckReport.from_conditions('interior', conditions)

    @staticmethod
    def _kernel_in_tangent(hessian, jacobian, n: int) -> Tuple[bool, Optional[List[Fraction]]]:
        for v in nullspace(hessian, n):
            if not in_kernel(jacobian, v):
                return False, v
        return True, None
