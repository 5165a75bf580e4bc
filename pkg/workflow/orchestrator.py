import os
import tempfile
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional

from config import Config
from algebra.cones import Certificate, ConeKind
from algebra.errors import CapExceeded
from agents.certificate_agent import CertificateAgent, RefutationPoint
from agents.theorem_checker_agent import SumTerm, TheoremCheckerAgent, Verdict
from agents.variety_agent import IdealBasis, SampleSet
from agents.witness_agent import QuotientHypothesis, RefutationReport, WitnessAgent
from algebra.polynomial import format_point
from interface import reports
from interface.problem_file import ProblemFile, ProblemFileError, load_problem
from solvers import polytope

EXIT_CODES = {
    'certified': 0,
    'verified': 0,
    'refuted': 1,
    'violated': 1,
    'rejected': 1,
    'inconclusive': 2,
    'error': 3,
    'internal-error': 4,
}

THEOREMS = ('sumbiti', 'boundary', 'polytope-face', 'interior')


@dataclass
class RunOutcome:
    status: str
    lines: List[str] = field(default_factory=list)
    payload: Any = None
    path: Optional[str] = None

    @property
    def exit_code(self) -> int:
        return EXIT_CODES[self.status]

    @property
    def text(self) -> str:
        return '\n'.join(self.lines) + '\n'


def write_atomic(path: str, text: str):
    """Write via a temporary file in the same directory, then rename"""
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(prefix='.posate-', dir=directory)
    try:
        with os.fdopen(fd, 'w', encoding='utf-8') as f:
            f.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


class PipelineOrchestrator:
    """Runs one problem file through the certify / check / refute / verify / probe pipelines"""

    def __init__(self, config: Optional[Config] = None):
        self.config = config or Config()
        self.certificate_agent = CertificateAgent(self.config)
        self.checker_agent = TheoremCheckerAgent(self.config)
        self.witness_agent = WitnessAgent(self.config)

        # Workflow state
        self.current_state = "idle"
        self.workflow_data: Dict[str, Any] = {}
        self.error_log: List[str] = []

        # Progress callback
        self.progress_callback = None

    def set_progress_callback(self, callback):
        """Set the progress callback function"""
        self.progress_callback = callback
        for agent in (self.certificate_agent, self.checker_agent, self.witness_agent):
            agent.set_progress_callback(lambda msg, _agent=type(agent).__name__: self._update_progress(_agent, msg))

    def _update_progress(self, step: str, message: str):
        """Update progress if callback is set"""
        if self.progress_callback:
            self.progress_callback(step, message)

    # -- entry point ------------------------------------------------------

    def run(self, command: str, path: str, max_degree: Optional[int] = None, theorem: Optional[str] = None,
            certificate_path: Optional[str] = None, write_report: bool = False) -> RunOutcome:
        self.current_state = "loading"
        self._update_progress("Loader", f"reading {path}")
        try:
            problem = load_problem(path)
            self._configure(problem, max_degree)
            self.workflow_data['problem'] = problem
            self.current_state = command
            if command == 'certify':
                outcome = self.certify(problem)
            elif command == 'check':
                outcome = self.check(problem, theorem)
            elif command == 'refute':
                outcome = self.refute(problem)
            elif command == 'verify':
                outcome = self.verify(problem, certificate_path)
            elif command == 'probe':
                outcome = self.probe(problem)
            else:
                raise ValueError(f"unknown command '{command}'")
        except ProblemFileError as e:
            return self._create_error_response(command, path, str(e), 'error')
        except CapExceeded as e:
            outcome = RunOutcome('inconclusive', [f"reason: {e}"])
        except ValueError as e:
            return self._create_error_response(command, path, str(e), 'error')
        except Exception as e:
            return self._create_error_response(command, path, f"{type(e).__name__}: {e}", 'internal-error')

        outcome.path = path
        outcome.lines = [f"command: {command}", f"problem: {os.path.basename(path)}",
                         f"status: {outcome.status}"] + outcome.lines
        self.current_state = "done"
        if write_report:
            write_atomic(path + self.config.REPORT_SUFFIX, outcome.text)
        return outcome

    def _configure(self, problem: ProblemFile, max_degree: Optional[int]):
        options = problem.options
        self.config.MAX_DEGREE = options.max_degree if max_degree is None else max_degree
        self.config.GRID_DENSITY = options.grid_density
        self.config.GRID_RADIUS = options.grid_radius
        self.config.N_MAX = options.n_max

    def _create_error_response(self, command: str, path: str, message: str, status: str) -> RunOutcome:
        """Create standardized error response"""
        error_msg = f"{command} failed at step: {self.current_state}, Error: {message}"
        self.error_log.append(error_msg)
        self._update_progress("Error", error_msg)
        return RunOutcome(status, [f"command: {command}", f"problem: {os.path.basename(path)}",
                                   f"status: {status}", f"error: {message}"], path=path)

    def reset_workflow(self):
        """Reset workflow state"""
        self.current_state = "idle"
        self.workflow_data = {}
        self.error_log = []

    # -- pipelines --------------------------------------------------------

    def certify(self, problem: ProblemFile) -> RunOutcome:
        problem.require('generators', 'target')
        cone = problem.cone()
        if cone.kind == ConeKind.QUADRATIC_MODULE:
            raise problem.error("quadratic modules are not certified by linear programming", 'kind')
        f = problem.target
        v = problem.variables
        self._update_progress("Certificate", f"certifying '{f.to_text(v)}' up to degree {self.config.MAX_DEGREE}")
        outcome = self.certificate_agent.handelman_certify(f, cone, self.config.MAX_DEGREE)
        if isinstance(outcome, Certificate):
            self.workflow_data['certificate'] = outcome
            write_atomic(problem.path + self.config.CERTIFICATE_SUFFIX, reports.format_certificate(outcome, v))
            return RunOutcome('certified', reports.certificate_lines(outcome, v), outcome)

        lines = reports.not_found_lines(outcome)
        refutation = self._type1_refutation(problem)
        if refutation is not None:
            return RunOutcome('refuted', lines + reports.refutation_lines(refutation), refutation)
        return RunOutcome('inconclusive', lines, outcome)

    def _type1_refutation(self, problem: ProblemFile) -> Optional[RefutationReport]:
        """A point of X(M) with f < 0: the LP minimizer when everything is affine, else the grid"""
        cone = problem.cone()
        f = problem.target
        report = None
        if f.is_affine and cone.kind == ConeKind.SEMIRING and cone.is_affine:
            if polytope.bounding_box(list(cone.generators)).is_bounded:
                outcome = self.certificate_agent.minkowski_linear_rep(f, cone)
                if isinstance(outcome, RefutationPoint):
                    report = self.witness_agent.type1_witness(f, cone, outcome.point)
        if not isinstance(report, RefutationReport):
            report = self.witness_agent.type1_search(f, cone)
        if report is not None and not self.witness_agent.verify_witness(report, f, cone):
            raise ArithmeticError("type-I witness failed to verify")
        return report

    def check(self, problem: ProblemFile, theorem: Optional[str] = None) -> RunOutcome:
        theorem = theorem or problem.options.theorem
        if theorem not in THEOREMS:
            raise problem.error(f"select a theorem with --theorem or 'theorem =' ({', '.join(THEOREMS)})", 'options')
        problem.require('generators', 'target')
        cone = problem.cone()
        f = problem.target
        options = problem.options
        checker = self.checker_agent
        if theorem == 'sumbiti':
            problem.require('decomposition')
            terms = [SumTerm(b, s) for b, s in problem.decomposition]
            report = checker.check_sumbiti(f, terms, cone, problem.sample_set(), options.epsilon_value,
                                           self.config.MAX_DEGREE)
        elif theorem == 'boundary':
            problem.require('ideal', 'variety', 'samples')
            report = checker.check_boundary_theorem(f, cone, problem.ideal, problem.variety_ideal(),
                                                    problem.variety_dimension, problem.sample_set(), options.degree)
        elif theorem == 'polytope-face':
            problem.require('face')
            samples = problem.sample_set() if problem.samples else None
            report = checker.check_polytope_face(f, cone, problem.face, samples, options.degree,
                                                 options.grid_density)
        else:
            problem.require('variety', 'samples')
            report = checker.check_interior_theorem(f, cone, problem.variety_ideal(), problem.variety_dimension,
                                                    problem.sample_set(), options.degree,
                                                    options.complete_intersection)
        self.workflow_data['report'] = report
        if report.certificate is not None:
            write_atomic(problem.path + self.config.CERTIFICATE_SUFFIX,
                         reports.format_certificate(report.certificate, problem.variables))
        status = {Verdict.VERIFIED: 'verified', Verdict.VIOLATED: 'violated',
                  Verdict.INCONCLUSIVE: 'inconclusive'}[report.verdict]
        return RunOutcome(status, reports.check_report_lines(report, problem.variables), report)

    def refute(self, problem: ProblemFile) -> RunOutcome:
        problem.require('generators', 'target')
        cone = problem.cone()
        f = problem.target
        options = problem.options
        if cone.kind == ConeKind.QUADRATIC_MODULE and options.quotient_generator is not None:
            return self._quotient_refutation(problem)

        samples = SampleSet()
        samples.extend([p for p in problem.samples if cone.contains_point(p)], cone)
        report = self.witness_agent.witness_search(f, cone, samples, options.grid_density, options.grid_radius)
        if report is None:
            return RunOutcome('inconclusive', ["reason: none-found"])
        if not self.witness_agent.verify_witness(report, f, cone):
            raise ArithmeticError("witness failed to verify")
        return RunOutcome('refuted', reports.refutation_lines(report), report)

    def _quotient_refutation(self, problem: ProblemFile) -> RunOutcome:
        problem.require('samples')
        cone = problem.cone()
        f = problem.target
        options = problem.options
        index = options.quotient_generator - 1
        asserted = [QuotientHypothesis(name) for name in options.quotient_assertions]
        agent = self.witness_agent
        lines: List[str] = []
        for c, found in agent.quotient_sweep(f, cone, index, options.sweep_values, problem.samples,
                                             options.degree, asserted).items():
            if found is None:
                lines.append(f"sweep: c={c} none-found")
            else:
                sign, swept = found
                lines.append(f"sweep: c={c} sign={'+' if sign > 0 else '-'} point={format_point(swept.witness.point)} "
                             f"value={swept.witness.value}")
        rejection = None
        for z in problem.samples:
            report = agent.quotient_witness(f, cone, index, z, options.degree, asserted)
            if isinstance(report, RefutationReport):
                if not agent.verify_witness(report, f, cone):
                    raise ArithmeticError("quotient witness failed to verify")
                return RunOutcome('refuted', reports.refutation_lines(report) + lines, report)
            rejection = rejection or report
        reason = rejection.reason if rejection is not None else "no candidate points"
        return RunOutcome('inconclusive', [f"reason: {reason}"] + lines)

    def verify(self, problem: ProblemFile, certificate_path: Optional[str] = None) -> RunOutcome:
        problem.require('generators', 'target')
        cone = problem.cone()
        certificate_path = certificate_path or problem.path + self.config.CERTIFICATE_SUFFIX
        try:
            with open(certificate_path, 'r', encoding='utf-8') as f:
                text = f.read()
        except OSError as e:
            raise ProblemFileError(f"cannot read certificate: {e.strerror}", None, certificate_path)
        try:
            certificate = reports.parse_certificate(text, problem.variables)
        except ValueError as e:
            raise ProblemFileError(str(e), None, certificate_path)
        lines = [f"certificate: {os.path.basename(certificate_path)}", f"terms: {len(certificate.terms)}"]
        try:
            valid = self.certificate_agent.verify_certificate(problem.target, certificate, cone)
        except ValueError as e:
            return RunOutcome('rejected', lines + [f"reason: {e}"])
        if valid:
            return RunOutcome('certified', lines, certificate)
        return RunOutcome('rejected', lines + ["reason: expansion does not equal f"])

    def probe(self, problem: ProblemFile) -> RunOutcome:
        problem.require('generators', 'ideal', 'unit', 'targets')
        cone = problem.cone()
        ideal = IdealBasis(tuple(problem.ideal))
        lines: List[str] = []
        bound = None
        for degree in problem.options.probe_degrees:
            result = self.certificate_agent.order_unit_probe(ideal, cone, problem.unit, problem.targets,
                                                             degree, self.config.N_MAX)
            lines += reports.probe_lines(result, problem.variables)
            if result.bound is not None:
                bound = result.bound
                break
        if bound is not None:
            return RunOutcome('certified', lines, bound)
        return RunOutcome('inconclusive', lines)
