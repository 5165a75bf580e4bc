from fractions import Fraction

import pytest

from config import Config
from algebra.cones import ConeKind, GeneratorSet
from algebra.polynomial import Polynomial, parse_polynomial
from agents.certificate_agent import PolytopeHypothesisError
from agents.theorem_checker_agent import IdentityError, Status, SumTerm, TheoremCheckerAgent, Verdict
from agents.variety_agent import Cofactors, IdealBasis, IdealNotFound, IdealRole, SampleSet, VarietyAgent

X1X2 = ['x1', 'x2']
XYZ = ['x', 'y', 'z']


def p(text, variables=X1X2):
    return parse_polynomial(text, variables)


def triangle():
    return GeneratorSet(ConeKind.SEMIRING, (p('x1'), p('x2'), p('1 - x1 - x2')))


def ball():
    return GeneratorSet(ConeKind.PREORDERING, (p('9 - x^2 - y^2 - z^2', XYZ),))


def axis():
    return IdealBasis((p('x', XYZ), p('y', XYZ)), IdealRole.VARIETY)


AXIS_SAMPLES = [(0, 0, 0), (0, 0, 1), (0, 0, -2)]


@pytest.fixture
def checker():
    return TheoremCheckerAgent(Config())


def condition(report, name):
    return next(c for c in report.conditions if c.name == name)


class TestVariety:
    def test_squared_ideal_membership(self):
        f = p('x^2 + y^2 + 4*x*y', XYZ)
        outcome = VarietyAgent().ideal_membership(f, axis().squared(), 0)
        assert isinstance(outcome, Cofactors)
        assert outcome.expand(axis().squared()) == f

    def test_not_a_member(self):
        outcome = VarietyAgent().ideal_membership(p('x1'), IdealBasis((p('x1^2'),)), 3)
        assert isinstance(outcome, IdealNotFound)

    def test_tangent_space_on_axis(self):
        space = VarietyAgent().tangent_space(axis(), (0, 0, 1), 1)
        assert space.rank == 2
        assert space.nonsingular
        assert space.basis == [[0, 0, 1]]

    def test_cusp_is_singular(self):
        cusp = IdealBasis((p('x1^2 - x2^3'),), IdealRole.VARIETY)
        space = VarietyAgent().tangent_space(cusp, (0, 0), 1)
        assert space.rank == 0
        assert not space.nonsingular

    def test_samples_must_be_zeros(self):
        with pytest.raises(ValueError):
            SampleSet.build([(Fraction(1, 2), 0)], triangle(), p('x1*(1 + x2)'))
        with pytest.raises(ValueError):
            SampleSet.build([(0, 2)], triangle())


class TestConeCondition:
    def test_face_example_holds(self, checker):
        variety = IdealBasis((p('x1'),), IdealRole.VARIETY)
        outcome = checker.cone_condition(p('x1*(1 + x2)'), [p('x1')], variety, (0, Fraction(1, 2)))
        assert outcome.ok
        assert outcome.decomposition.rays == [[1, 0]]
        assert outcome.decomposition.lineality == [[0, 1]]

    def test_negative_ray(self, checker):
        variety = IdealBasis((p('x1'),), IdealRole.VARIETY)
        z = (0, Fraction(3, 4))
        outcome = checker.cone_condition(p('x1*(1 - 2*x2)'), [p('x1')], variety, z)
        assert not outcome.ok
        assert outcome.direction == [1, 0]
        assert outcome.value == Fraction(-1, 2)

    def test_point_must_be_a_zero(self, checker):
        variety = IdealBasis((p('x1'),), IdealRole.VARIETY)
        with pytest.raises(ValueError):
            checker.cone_condition(p('x1 + 1'), [p('x1')], variety, (0, 0))


class TestPolytopeFace:
    def test_verified_and_certified(self, checker):
        cone = triangle()
        f = p('x1*(1 + x2)')
        report = checker.check_polytope_face(f, cone, [0])
        assert report.verdict == Verdict.VERIFIED
        assert condition(report, 'face-vanishing').status == Status.OK
        assert condition(report, 'positivity-off-face').status == Status.OK
        assert report.certificate is not None
        assert report.certificate.degree <= 4
        assert checker.certificate_agent.verify_certificate(f, report.certificate, cone)

    def test_perturbed_target(self, checker):
        cone = triangle()
        f = p('x1*(1 - 2*x2)')
        samples = SampleSet.build([(0, Fraction(3, 4))], cone, f)
        report = checker.check_polytope_face(f, cone, [0], samples)
        assert report.verdict == Verdict.VIOLATED
        counterexample = report.counterexample
        assert counterexample.kind == 'cone-direction'
        assert counterexample.point == (0, Fraction(3, 4))
        assert counterexample.value == Fraction(-1, 2)
        assert f.directional_derivative(counterexample.point, counterexample.direction) == Fraction(-1, 2)
        assert report.certificate is None

    def test_flat_product_at_corner(self, checker):
        report = checker.check_polytope_face(p('x1*x2'), triangle(), [0])
        assert report.verdict == Verdict.VIOLATED
        assert report.counterexample.point == (0, 0)
        assert report.counterexample.direction == [1, 0]

    def test_target_not_vanishing_on_face(self, checker):
        report = checker.check_polytope_face(p('x1 + x2'), triangle(), [0])
        assert report.verdict == Verdict.VIOLATED
        assert report.counterexample.kind == 'face-nonvanishing'

    def test_unbounded_generators(self, checker):
        cone = GeneratorSet(ConeKind.SEMIRING, (p('x1'), p('x2')))
        with pytest.raises(PolytopeHypothesisError):
            checker.check_polytope_face(p('x1'), cone, [0])


class TestBoundary:
    def test_face_target(self, checker):
        cone = triangle()
        f = p('x1*(1 + x2)')
        samples = SampleSet.build([(0, 0), (0, Fraction(1, 2)), (0, 1)], cone, f)
        variety = IdealBasis((p('x1'),), IdealRole.VARIETY)
        report = checker.check_boundary_theorem(f, cone, [p('x1')], variety, 1, samples)
        assert report.verdict == Verdict.VERIFIED
        assert condition(report, 'nonnegativity').status == Status.OK
        assert condition(report, 'ideal-membership').status == Status.OK

    def test_ideal_generator_must_be_a_cone_generator(self, checker):
        cone = triangle()
        f = p('x1*(1 + x2)')
        samples = SampleSet.build([(0, 0)], cone, f)
        variety = IdealBasis((p('x1'),), IdealRole.VARIETY)
        with pytest.raises(ValueError):
            checker.check_boundary_theorem(f, cone, [p('2*x1')], variety, 1, samples)


class TestInterior:
    def samples(self, f):
        return SampleSet.build(AXIS_SAMPLES, ball(), f)

    def test_axis_verified(self, checker):
        f = p('x^2 + y^2', XYZ)
        report = checker.check_interior_theorem(f, ball(), axis(), 1, self.samples(f), complete_intersection=True)
        assert report.verdict == Verdict.VERIFIED
        assert condition(report, 'hessian-psd@(0, 0, 1)').detail == 'rank 2'

    def test_positive_definite_block(self, checker):
        f = p('2*x^2 + y^2 + 2*x*y', XYZ)
        report = checker.check_interior_theorem(f, ball(), axis(), 1, self.samples(f), complete_intersection=True)
        assert report.verdict == Verdict.VERIFIED

    def test_indefinite_block(self, checker):
        f = p('x^2 + y^2 + 4*x*y', XYZ)
        report = checker.check_interior_theorem(f, ball(), axis(), 1, self.samples(f), complete_intersection=True)
        assert report.verdict == Verdict.VIOLATED
        hessian = condition(report, 'hessian-psd@(0, 0, 0)')
        assert hessian.status == Status.VIOLATED
        v = hessian.counterexample.direction
        assert f.hessian_form((0, 0, 0), v) < 0

    def test_complete_intersection_not_asserted(self, checker):
        f = p('x^2 + y^2', XYZ)
        report = checker.check_interior_theorem(f, ball(), axis(), 1, self.samples(f))
        assert report.verdict == Verdict.INCONCLUSIVE
        assert report.reason.startswith('complete-intersection')

    def test_no_samples(self, checker):
        f = p('x^2 + y^2', XYZ)
        report = checker.check_interior_theorem(f, ball(), axis(), 1, SampleSet(), complete_intersection=True)
        assert report.verdict == Verdict.INCONCLUSIVE


class TestSumbiti:
    def test_product_decomposition(self, checker):
        cone = triangle()
        f = p('x1 + x1*x2')
        samples = SampleSet.build([(0, 0), (0, Fraction(1, 2))], cone, f)
        report = checker.check_sumbiti(f, [SumTerm(p('1 + x2'), p('x1'))], cone, samples, Fraction(1, 2))
        assert report.verdict == Verdict.VERIFIED
        assert condition(report, 'margin[b_1]').status == Status.OK

    def test_b_vanishes_on_a_sample(self, checker):
        cone = triangle()
        f = p('x1*x2')
        samples = SampleSet.build([(0, 0)], cone, f)
        report = checker.check_sumbiti(f, [SumTerm(p('x2'), p('x1'))], cone, samples)
        assert report.verdict == Verdict.VIOLATED
        assert report.counterexample.value == 0

    def test_identity_must_hold(self, checker):
        cone = triangle()
        with pytest.raises(IdentityError):
            checker.check_sumbiti(p('x1'), [SumTerm(p('2'), p('x1'))], cone, SampleSet())

    def test_s_outside_semiring(self, checker):
        cone = triangle()
        with pytest.raises(ValueError):
            checker.check_sumbiti(p('-x1'), [SumTerm(p('1'), p('-x1'))], cone, SampleSet(), max_degree=2)
