from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Collection, Dict, List, Optional, Sequence, Tuple

from config import Config
from algebra.cones import ConeKind, GeneratorSet
from algebra.linalg import symmetric_decomposition
from algebra.polynomial import DimensionMismatch, Point, Polynomial, dot, format_point, make_point
from agents.variety_agent import Cofactors, IdealBasis, SampleSet, VarietyAgent
from solvers import polytope
from solvers.double_description import extreme_rays


class WitnessKind(str, Enum):
    EVALUATION = 'evaluation'
    FIRST_ORDER = 'first-order'
    SECOND_ORDER = 'second-order'
    QUOTIENT = 'quotient'


class WitnessType(str, Enum):
    TYPE_I = 'type-I'
    TYPE_II = 'type-II'


class Justification(str, Enum):
    UNCONDITIONAL = 'unconditional'
    CONDITIONAL = 'conditional-on-quotient-hypotheses'


class QuotientHypothesis(str, Enum):
    """Assumptions on I = (g) under which the quotient functional is nonnegative on M"""
    M_CONVEX = 'm-convex'
    RADICAL = 'radical'
    NON_ZERO_DIVISORS = 'non-zero-divisors'


_KIND_RANK = {WitnessKind.EVALUATION: 0, WitnessKind.FIRST_ORDER: 1,
              WitnessKind.SECOND_ORDER: 2, WitnessKind.QUOTIENT: 3}


@dataclass(frozen=True)
class Witness:
    """A linear functional L with L(f) < 0 that is nonnegative on the cone"""
    kind: WitnessKind
    point: Point
    value: Fraction
    direction: Optional[Tuple[Fraction, ...]] = None
    generator_index: Optional[int] = None

    def functional(self, p: Polynomial) -> Fraction:
        if self.kind == WitnessKind.EVALUATION:
            return p.evaluate(self.point)
        if self.kind == WitnessKind.SECOND_ORDER:
            return p.hessian_form(self.point, self.direction)
        return p.directional_derivative(self.point, self.direction)

    def sort_key(self):
        return (_KIND_RANK[self.kind], self.point, self.direction or ())


@dataclass
class Rejection:
    reason: str
    inconclusive: bool = False


@dataclass
class RefutationReport:
    witness: Witness
    radius: Optional[Fraction] = None
    negative_point: Optional[Point] = None
    justification: Justification = Justification.UNCONDITIONAL
    hypotheses: Tuple[QuotientHypothesis, ...] = ()
    cofactors: Optional[Cofactors] = None
    notes: List[str] = field(default_factory=list)


def classify(witness: Witness) -> WitnessType:
    return WitnessType.TYPE_I if witness.kind == WitnessKind.EVALUATION else WitnessType.TYPE_II


class WitnessAgent:
    """Searches for linear functionals separating f from a cone"""

    def __init__(self, config: Optional[Config] = None):
        self.config = config or Config()
        self.variety_agent = VarietyAgent(self.config)
        self.progress_callback = None

    def set_progress_callback(self, callback):
        """Set callback for progress updates"""
        self.progress_callback = callback

    def _update_progress(self, message):
        if self.progress_callback:
            self.progress_callback(message)

    # -- helpers ----------------------------------------------------------

    def _negative_point(self, f: Polynomial, cone: GeneratorSet, z: Point, v: Sequence[Fraction]):
        """Halve eps from 1 until z + eps v is in X(M) with f < 0"""
        eps = Fraction(1)
        for _ in range(self.config.RADIUS_STEPS):
            p = tuple(zi + eps * vi for zi, vi in zip(z, v))
            if cone.contains_point(p) and f.evaluate(p) < 0:
                return eps, p
            eps /= 2
        return None

    def grid_candidates(self, cone: GeneratorSet, density: Optional[int] = None,
                        radius: Optional[int] = None) -> List[Point]:
        """Rational grid points inside X(M); polytope vertices are included when K is bounded"""
        density = self.config.GRID_DENSITY if density is None else density
        radius = self.config.GRID_RADIUS if radius is None else radius
        n = cone.nvars
        extra: List[Point] = []
        lower = [Fraction(-radius)] * n
        upper = [Fraction(radius)] * n
        if cone.is_affine:
            box = polytope.bounding_box(list(cone.constraints))
            if box.status == polytope.EMPTY:
                return []
            if box.is_bounded:
                lower, upper = box.lower, box.upper
                extra = polytope.vertices(list(cone.constraints))
        grid = polytope.box_grid(lower, upper, 2 * density, self.config.BASIS_CAP)
        points = sorted(set(p for p in grid if cone.contains_point(p)) | set(extra))
        return points

    # -- witness constructors ---------------------------------------------

    def type1_witness(self, f: Polynomial, cone: GeneratorSet, z: Sequence):
        z = make_point(z)
        if len(z) != f.nvars:
            raise DimensionMismatch(f"point has {len(z)} coordinates, f has {f.nvars} variables")
        if not cone.contains_point(z):
            return Rejection(f"{format_point(z)} is outside X(M)")
        value = f.evaluate(z)
        if value >= 0:
            return Rejection(f"f({format_point(z)}) = {value} is not negative")
        return RefutationReport(Witness(WitnessKind.EVALUATION, z, value), negative_point=z)

    def first_order_witness(self, f: Polynomial, cone: GeneratorSet, z: Sequence, v: Sequence):
        """L(p) = D_v p(z) at a zero z of f, for an inward direction v with D_v f(z) < 0"""
        z, v = make_point(z), make_point(v)
        if not cone.contains_point(z):
            return Rejection(f"{format_point(z)} is outside X(M)")
        if f.evaluate(z) != 0:
            return Rejection(f"f does not vanish at {format_point(z)}")
        value = f.directional_derivative(z, v)
        if value >= 0:
            return Rejection(f"D_v f = {value} is not negative")
        for i in cone.active(z):
            g = cone.constraints[i]
            slope = g.directional_derivative(z, v)
            if slope > 0 or (slope == 0 and g.is_affine):
                continue
            if slope < 0:
                return Rejection(f"v leaves X(M) through generator {i + 1}")
            return Rejection(f"D_v g_{i + 1} = 0 for a nonlinear generator", inconclusive=True)
        found = self._negative_point(f, cone, z, v)
        if found is None:
            return Rejection("no negative point along v within the radius search", inconclusive=True)
        radius, point = found
        return RefutationReport(Witness(WitnessKind.FIRST_ORDER, z, value, v), radius=radius, negative_point=point)

    def second_order_witness(self, f: Polynomial, cone: GeneratorSet, z: Sequence, v: Sequence):
        """L(p) = v^T Hess p(z) v at an interior critical zero z of f"""
        z, v = make_point(z), make_point(v)
        if not cone.is_interior_point(z):
            return Rejection(f"{format_point(z)} is not interior to X(M)")
        if f.evaluate(z) != 0:
            return Rejection(f"f does not vanish at {format_point(z)}")
        if any(f.gradient(z)):
            return Rejection("gradient of f does not vanish")
        value = f.hessian_form(z, v)
        if value >= 0:
            return Rejection(f"v^T H v = {value} is not negative")
        found = self._negative_point(f, cone, z, v) or self._negative_point(f, cone, z, [-x for x in v])
        if found is None:
            return Rejection("no negative point along v within the radius search", inconclusive=True)
        radius, point = found
        return RefutationReport(Witness(WitnessKind.SECOND_ORDER, z, value, v), radius=radius, negative_point=point)

    def quotient_witness(self, f: Polynomial, cone: GeneratorSet, generator_index: int, z: Sequence,
                         degree: Optional[int] = None, asserted: Collection[QuotientHypothesis] = ()):
        """L(p) = D_w p(z) with D_w g = 1 for an affine generator g vanishing at z.

        Requires f = g q with q(z) < 0. The functional is nonnegative on the
        quadratic module only when every QuotientHypothesis holds for I = (g). These are
        asserted by the caller, never checked; the report lists them.
        """
        z = make_point(z)
        if cone.kind != ConeKind.QUADRATIC_MODULE:
            return Rejection("quotient witnesses apply to quadratic modules only")
        missing = [h.value for h in QuotientHypothesis if h not in asserted]
        if missing:
            return Rejection(f"quotient hypotheses not asserted: {', '.join(missing)}", inconclusive=True)
        if not 0 <= generator_index < len(cone.generators):
            raise IndexError(f"generator index {generator_index} out of range")
        g = cone.generators[generator_index]
        if not g.is_affine or g.degree < 1:
            return Rejection("quotient generator must be affine and nonconstant")
        if g.evaluate(z) != 0:
            return Rejection(f"g does not vanish at {format_point(z)}")
        degree = max(f.degree - 1, 0) if degree is None else degree
        cofactors = self.variety_agent.ideal_membership(f, IdealBasis((g,)), degree)
        if not isinstance(cofactors, Cofactors):
            return Rejection(f"f is not a multiple of g ({cofactors.reason})")
        q = cofactors.cofactors[0]
        if q.evaluate(z) >= 0:
            return Rejection(f"quotient q({format_point(z)}) = {q.evaluate(z)} is not negative")
        a = g.linear_coefficients()
        k = next(i for i, c in enumerate(a) if c != 0)
        w = tuple(Fraction(int(i == k)) / a[k] for i in range(len(a)))
        value = f.directional_derivative(z, w)
        return RefutationReport(Witness(WitnessKind.QUOTIENT, z, value, w, generator_index),
                                justification=Justification.CONDITIONAL, hypotheses=tuple(QuotientHypothesis),
                                cofactors=cofactors, notes=[f"q = {q}"])

    # -- search -----------------------------------------------------------

    def _sample_candidates(self, f: Polynomial, cone: GeneratorSet, z: Point) -> List[RefutationReport]:
        value = f.evaluate(z)
        if value < 0:
            report = self.type1_witness(f, cone, z)
            return [report] if isinstance(report, RefutationReport) else []
        if value > 0:
            return []
        found: List[RefutationReport] = []
        gradient = f.gradient(z)
        active = cone.active(z)
        if not active:
            if any(gradient):
                report = self.first_order_witness(f, cone, z, [-x for x in gradient])
                if isinstance(report, RefutationReport):
                    found.append(report)
            else:
                decomposition = symmetric_decomposition(f.hessian(z))
                if not decomposition.is_psd:
                    report = self.second_order_witness(f, cone, z, decomposition.negative_direction)
                    if isinstance(report, RefutationReport):
                        found.append(report)
            return found

        rows = [cone.constraints[i].gradient(z) for i in active]
        cone_rays = extreme_rays(rows, cone.nvars)
        tilt = [sum((r[k] for r in cone_rays.rays), Fraction(0)) for k in range(cone.nvars)]
        for d in cone_rays.generators():
            if dot(gradient, d) >= 0:
                continue
            report = self.first_order_witness(f, cone, z, d)
            step = Fraction(1, 2)
            while isinstance(report, Rejection) and report.inconclusive and any(tilt) and step >= Fraction(1, 256):
                tilted = [a + step * b for a, b in zip(d, tilt)]
                if dot(gradient, tilted) < 0:
                    report = self.first_order_witness(f, cone, z, tilted)
                step /= 2
            if isinstance(report, RefutationReport):
                found.append(report)
        return found

    def type1_search(self, f: Polynomial, cone: GeneratorSet, density: Optional[int] = None,
                     radius: Optional[int] = None) -> Optional[RefutationReport]:
        """Most negative grid point of f in X(M), ties broken by the smallest point"""
        best = None
        for p in self.grid_candidates(cone, density, radius):
            value = f.evaluate(p)
            if value < 0 and (best is None or (value, p) < best):
                best = (value, p)
        if best is None:
            return None
        return RefutationReport(Witness(WitnessKind.EVALUATION, best[1], best[0]), negative_point=best[1])

    def witness_search(self, f: Polynomial, cone: GeneratorSet, samples: Optional[SampleSet] = None,
                       density: Optional[int] = None, radius: Optional[int] = None) -> Optional[RefutationReport]:
        """Witnesses built at the samples first, then the rational grid.

        Among sample witnesses the smallest by (kind, point, direction) wins.
        """
        candidates: List[RefutationReport] = []
        for sample in samples or []:
            candidates.extend(self._sample_candidates(f, cone, sample.point))
        if candidates:
            chosen = min(candidates, key=lambda r: r.witness.sort_key())
            self._update_progress(f"{len(candidates)} sample witnesses, chose {chosen.witness.kind.value} "
                                  f"at {format_point(chosen.witness.point)}")
            return chosen
        self._update_progress("no sample witness, searching the grid for a negative point")
        return self.type1_search(f, cone, density, radius)

    def quotient_sweep(self, f: Polynomial, cone: GeneratorSet, generator_index: int, values: Sequence,
                       points: Sequence[Sequence], degree: Optional[int] = None,
                       asserted: Collection[QuotientHypothesis] = ()) -> Dict[Fraction, Optional[Tuple[int, RefutationReport]]]:
        """For each c, a quotient witness for c*g + f or c*g - f at the first point that admits one"""
        g = cone.generators[generator_index]
        results: Dict[Fraction, Optional[Tuple[int, RefutationReport]]] = {}
        for raw in values:
            c = Fraction(raw)
            results[c] = None
            for sign in (1, -1):
                target = g * c + f * sign
                for z in points:
                    report = self.quotient_witness(target, cone, generator_index, z, degree, asserted)
                    if isinstance(report, RefutationReport):
                        results[c] = (sign, report)
                        break
                if results[c] is not None:
                    break
        return results

    def verify_witness(self, report: RefutationReport, f: Polynomial, cone: GeneratorSet) -> bool:
        """Re-check every claim of the report with exact arithmetic"""
        w = report.witness
        if len(w.point) != f.nvars:
            return False
        if w.functional(f) != w.value or w.value >= 0:
            return False
        if w.kind != WitnessKind.QUOTIENT and not cone.contains_point(w.point):
            return False
        if report.negative_point is not None:
            if not cone.contains_point(report.negative_point) or f.evaluate(report.negative_point) >= 0:
                return False
        if w.kind == WitnessKind.EVALUATION:
            return report.justification == Justification.UNCONDITIONAL
        if w.kind == WitnessKind.FIRST_ORDER:
            if f.evaluate(w.point) != 0:
                return False
            for i in cone.active(w.point):
                g = cone.constraints[i]
                slope = g.directional_derivative(w.point, w.direction)
                if slope < 0 or (slope == 0 and not g.is_affine):
                    return False
            return report.justification == Justification.UNCONDITIONAL
        if w.kind == WitnessKind.SECOND_ORDER:
            return (cone.is_interior_point(w.point) and f.evaluate(w.point) == 0
                    and not any(f.gradient(w.point))
                    and report.justification == Justification.UNCONDITIONAL)
        if cone.kind != ConeKind.QUADRATIC_MODULE or w.generator_index is None:
            return False
        g = cone.generators[w.generator_index]
        return (g.is_affine and g.evaluate(w.point) == 0 and g.directional_derivative(w.point, w.direction) == 1
                and report.justification == Justification.CONDITIONAL)
