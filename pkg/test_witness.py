from fractions import Fraction

import pytest

from config import Config
from algebra.cones import ConeKind, GeneratorSet
from algebra.polynomial import parse_polynomial
from agents.variety_agent import SampleSet
from agents.witness_agent import (
    Justification, QuotientHypothesis, RefutationReport, Rejection, Witness, WitnessAgent, WitnessKind, WitnessType,
    classify,
)

XY = ['x', 'y']
XYZ = ['x', 'y', 'z']
ALL_QUOTIENT = tuple(QuotientHypothesis)


def p(text, variables=XY):
    return parse_polynomial(text, variables)


def triangle(kind=ConeKind.SEMIRING):
    return GeneratorSet(kind, (p('x'), p('y'), p('1 - x - y')))


def ball():
    return GeneratorSet(ConeKind.PREORDERING, (p('9 - x^2 - y^2 - z^2', XYZ),))


@pytest.fixture
def agent():
    return WitnessAgent(Config())


def assert_negative_point(report, f, cone):
    z = report.negative_point
    assert cone.contains_point(z)
    assert f.evaluate(z) < 0


class TestConstructors:
    def test_evaluation(self, agent):
        f = p('x - 2')
        report = agent.type1_witness(f, triangle(), (0, 0))
        assert isinstance(report, RefutationReport)
        assert report.witness.value == -2
        assert classify(report.witness) == WitnessType.TYPE_I
        assert agent.verify_witness(report, f, triangle())

    def test_evaluation_outside(self, agent):
        assert isinstance(agent.type1_witness(p('x - 2'), triangle(), (2, 2)), Rejection)

    def test_first_order(self, agent):
        f = p('-x')
        cone = triangle()
        report = agent.first_order_witness(f, cone, (0, Fraction(1, 2)), (1, 0))
        assert isinstance(report, RefutationReport)
        assert report.witness.value == -1
        assert report.radius == Fraction(1, 2)
        assert classify(report.witness) == WitnessType.TYPE_II
        assert_negative_point(report, f, cone)
        assert agent.verify_witness(report, f, cone)

    def test_first_order_leaving_direction(self, agent):
        rejection = agent.first_order_witness(p('x'), triangle(), (0, Fraction(1, 2)), (-1, 0))
        assert isinstance(rejection, Rejection)
        assert not rejection.inconclusive

    def test_second_order_saddle(self, agent):
        f = p('x^2 - y^2', XYZ)
        report = agent.second_order_witness(f, ball(), (0, 0, 0), (0, 1, 0))
        assert isinstance(report, RefutationReport)
        assert report.witness.value == -2
        assert report.radius == 1
        assert report.negative_point == (0, 1, 0)
        assert agent.verify_witness(report, f, ball())

    def test_second_order_indefinite_block(self, agent):
        f = p('x^2 + y^2 + 4*x*y', XYZ)
        report = agent.second_order_witness(f, ball(), (0, 0, 0), (1, -1, 0))
        assert report.witness.value == -4
        assert_negative_point(report, f, ball())

    def test_second_order_needs_critical_point(self, agent):
        rejection = agent.second_order_witness(p('x + y^2', XYZ), ball(), (0, 0, 0), (0, 1, 0))
        assert isinstance(rejection, Rejection)


class TestQuotient:
    def test_xy_in_quadratic_module(self, agent):
        cone = triangle(ConeKind.QUADRATIC_MODULE)
        f = p('x*y')
        report = agent.quotient_witness(f, cone, 0, (0, -1), asserted=ALL_QUOTIENT)
        assert isinstance(report, RefutationReport)
        assert report.witness.value == -1
        assert report.witness.kind == WitnessKind.QUOTIENT
        assert report.justification == Justification.CONDITIONAL
        assert report.hypotheses == (QuotientHypothesis.M_CONVEX, QuotientHypothesis.RADICAL,
                                     QuotientHypothesis.NON_ZERO_DIVISORS)
        assert report.cofactors.cofactors[0] == p('y')
        assert agent.verify_witness(report, f, cone)

    def test_hypotheses_must_be_asserted(self, agent):
        rejection = agent.quotient_witness(p('x*y'), triangle(ConeKind.QUADRATIC_MODULE), 0, (0, -1))
        assert isinstance(rejection, Rejection)
        assert rejection.inconclusive

    def test_missing_hypothesis_is_named(self, agent):
        cone = triangle(ConeKind.QUADRATIC_MODULE)
        rejection = agent.quotient_witness(p('x*y'), cone, 0, (0, -1),
                                           asserted={QuotientHypothesis.M_CONVEX, QuotientHypothesis.NON_ZERO_DIVISORS})
        assert isinstance(rejection, Rejection)
        assert rejection.inconclusive
        assert rejection.reason == 'quotient hypotheses not asserted: radical'

    def test_hypotheses_by_name(self, agent):
        report = agent.quotient_witness(p('x*y'), triangle(ConeKind.QUADRATIC_MODULE), 0, (0, -1),
                                        asserted=['radical', 'm-convex', 'non-zero-divisors'])
        assert isinstance(report, RefutationReport)

    def test_only_for_quadratic_modules(self, agent):
        rejection = agent.quotient_witness(p('x*y'), triangle(), 0, (0, -1), asserted=ALL_QUOTIENT)
        assert isinstance(rejection, Rejection)

    def test_positive_quotient(self, agent):
        rejection = agent.quotient_witness(p('x*y'), triangle(ConeKind.QUADRATIC_MODULE), 0, (0, 1), asserted=ALL_QUOTIENT)
        assert isinstance(rejection, Rejection)

    def test_sweep(self, agent):
        cone = triangle(ConeKind.QUADRATIC_MODULE)
        results = agent.quotient_sweep(p('x*y'), cone, 0, [-2, 0], [(0, -1)], asserted=ALL_QUOTIENT)
        sign, report = results[Fraction(-2)]
        assert sign == 1
        assert report.witness.value == -3
        assert results[Fraction(0)][1].witness.value == -1


class TestSearch:
    def test_grid_finds_most_negative_point(self, agent):
        report = agent.witness_search(p('x - 2'), triangle())
        assert report.witness.kind == WitnessKind.EVALUATION
        assert report.witness.point == (0, 0)
        assert report.witness.value == -2

    def test_nonnegative_target(self, agent):
        samples = SampleSet.build([(0, 0), (0, 1)], triangle())
        assert agent.witness_search(p('x'), triangle(), samples) is None

    def test_boundary_sample(self, agent):
        cone = triangle()
        f = p('x*(1 - 2*y)')
        samples = SampleSet.build([(0, Fraction(3, 4))], cone)
        report = agent.witness_search(f, cone, samples)
        assert report.witness.kind == WitnessKind.FIRST_ORDER
        assert report.witness.value == Fraction(-1, 2)
        assert report.radius == Fraction(1, 4)
        assert agent.verify_witness(report, f, cone)

    def test_interior_sample(self, agent):
        f = p('x^2 + y^2 + 4*x*y', XYZ)
        samples = SampleSet.build([(0, 0, 1), (0, 0, 0)], ball(), f)
        report = agent.witness_search(f, ball(), samples)
        assert report.witness.kind == WitnessKind.SECOND_ORDER
        assert report.witness.point == (0, 0, 0)
        assert f.hessian_form(report.witness.point, report.witness.direction) < 0
        assert_negative_point(report, f, ball())
        # the negative point is itself an evaluation witness
        again = agent.type1_witness(f, ball(), report.negative_point)
        assert agent.verify_witness(again, f, ball())

    def test_tampered_value(self, agent):
        f = p('x - 2')
        report = agent.type1_witness(f, triangle(), (0, 0))
        forged = RefutationReport(Witness(WitnessKind.EVALUATION, (0, 0), Fraction(-3)), negative_point=(0, 0))
        assert agent.verify_witness(report, f, triangle())
        assert not agent.verify_witness(forged, f, triangle())
