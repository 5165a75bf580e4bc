import shutil
from fractions import Fraction
from pathlib import Path

import pytest

import main
from algebra.cones import ConeKind
from interface.problem_file import ProblemFileError, parse_problem

PROBLEMS = Path(__file__).parent / 'problems'


@pytest.fixture
def workspace(tmp_path):
    for source in PROBLEMS.glob('*.posate'):
        shutil.copy(source, tmp_path / source.name)
    return tmp_path


def run(capsys, *argv):
    code = main.main([str(a) for a in argv])
    return code, capsys.readouterr().out


class TestProblemFile:
    def test_sections(self):
        problem = parse_problem((PROBLEMS / 'simplex_boundary.posate').read_text())
        assert problem.variables == ['x1', 'x2']
        assert problem.kind == ConeKind.SEMIRING
        assert len(problem.generators) == 3
        assert problem.variety_dimension == 1
        # segment with grid_density = 4
        assert len(problem.samples) == 5
        assert problem.samples[1] == (0, Fraction(1, 4))
        assert problem.options.theorem == 'boundary'

    def test_options(self):
        problem = parse_problem((PROBLEMS / 'quotient_xy.posate').read_text())
        assert problem.options.quotient_assertions == ['m-convex', 'radical', 'non-zero-divisors']
        assert problem.options.quotient_generator == 1
        assert problem.options.sweep_values == [-2, -1, 0, Fraction(1, 2)]
        probe = parse_problem((PROBLEMS / 'probe_axis.posate').read_text())
        assert probe.options.probe_degrees == [2, 3, 4, 5, 6]

    def test_face_indices_are_zero_based(self):
        problem = parse_problem((PROBLEMS / 'simplex_face.posate').read_text())
        assert problem.face == [0]

    def test_render_parses_back(self):
        problem = parse_problem((PROBLEMS / 'ball_axis.posate').read_text())
        again = parse_problem(problem.render())
        assert again.generators == problem.generators
        assert again.target == problem.target
        assert again.variety == problem.variety
        assert again.samples == problem.samples
        assert again.options == problem.options

    @pytest.mark.parametrize('text, line', [
        ('[variables]\nx\n[generators]\nx + q\n', 4),
        ('[variables]\nx\n[colors]\nred\n', 3),
        ('x\n[variables]\nx\n', 1),
        ('[variables]\nx\n[samples]\n(1, 2)\n', 4),
        ('[variables]\nx\n[generators]\nx\n[face]\n2\n', 6),
    ])
    def test_errors_carry_line_numbers(self, text, line):
        with pytest.raises(ProblemFileError) as excinfo:
            parse_problem(text, 'bad.posate')
        assert excinfo.value.line == line
        assert str(excinfo.value).startswith(f'bad.posate:{line}:')

    def test_unknown_option(self):
        with pytest.raises(ProblemFileError, match='colour'):
            parse_problem('[variables]\nx\n[options]\ncolour = blue\n')


class TestCertifyCommand:
    def test_certify_then_verify(self, workspace, capsys):
        path = workspace / 'interval_certify.posate'
        code, out = run(capsys, 'certify', path)
        assert code == 0
        assert 'status: certified' in out
        cert = Path(str(path) + '.cert')
        assert cert.exists()

        code, out = run(capsys, 'verify', path)
        assert code == 0

        lines = cert.read_text().splitlines()
        forged = [line.replace('coeff=', 'coeff=7') if line.startswith('alpha=') else line for line in lines]
        cert.write_text('\n'.join(forged) + '\n')
        code, out = run(capsys, 'verify', path)
        assert code == 1
        assert 'status: rejected' in out

    def test_negative_target_is_refuted(self, workspace, capsys):
        code, out = run(capsys, 'certify', workspace / 'simplex_negative.posate')
        assert code == 1
        assert 'witness: evaluation' in out
        assert 'value: -2' in out
        assert 'farkas: degree=1' in out

    def test_quadratic_module_is_an_error(self, workspace, capsys):
        code, out = run(capsys, 'certify', workspace / 'quotient_xy.posate')
        assert code == 3
        assert 'status: error' in out

    def test_missing_file(self, tmp_path, capsys):
        code, out = run(capsys, 'certify', tmp_path / 'absent.posate')
        assert code == 3


class TestCheckCommand:
    def test_face_verified(self, workspace, capsys):
        path = workspace / 'simplex_face.posate'
        code, out = run(capsys, 'check', path)
        assert code == 0
        assert 'verdict: hypotheses-verified-on-samples' in out
        assert Path(str(path) + '.cert').exists()
        assert run(capsys, 'verify', path)[0] == 0

    def test_face_perturbed(self, workspace, capsys):
        code, out = run(capsys, 'check', workspace / 'simplex_face_perturbed.posate')
        assert code == 1
        assert 'counterexample: kind=cone-direction point=(0, 3/4) direction=(1, 0) value=-1/2' in out

    def test_boundary_and_sumbiti(self, workspace, capsys):
        assert run(capsys, 'check', workspace / 'simplex_boundary.posate')[0] == 0
        assert run(capsys, 'check', workspace / 'simplex_sumbiti.posate')[0] == 0

    def test_ball_axis(self, workspace, capsys):
        code, out = run(capsys, 'check', workspace / 'ball_axis.posate')
        assert code == 0
        code, out = run(capsys, 'check', workspace / 'ball_axis_indefinite.posate')
        assert code == 1

    def test_interior_needs_variety(self, workspace, capsys):
        path = workspace / 'no_variety.posate'
        path.write_text('[variables]\nx\n[generators]\n1 - x^2\n[target]\nx^2\n[samples]\n(0)\n')
        code, out = run(capsys, 'check', path, '--theorem', 'interior')
        assert code == 3
        assert 'missing [variety]' in out

    def test_theorem_required(self, workspace, capsys):
        code, out = run(capsys, 'check', workspace / 'interval_certify.posate')
        assert code == 3


class TestRefuteCommand:
    def test_second_order(self, workspace, capsys):
        code, out = run(capsys, 'refute', workspace / 'ball_axis_indefinite.posate')
        assert code == 1
        assert 'witness: second-order' in out
        assert 'type: type-II' in out

    def test_quotient(self, workspace, capsys):
        code, out = run(capsys, 'refute', workspace / 'quotient_xy.posate')
        assert code == 1
        assert 'witness: quotient' in out
        assert 'value: -1' in out
        assert 'justification: conditional-on-quotient-hypotheses' in out
        assert 'hypotheses: m-convex, radical, non-zero-divisors' in out
        assert 'sweep: c=1/2' in out

    def test_quotient_names_the_missing_hypothesis(self, workspace, capsys):
        path = workspace / 'quotient_xy.posate'
        path.write_text(path.read_text().replace('quotient_radical = true\n', ''))
        code, out = run(capsys, 'refute', path)
        assert code == 2
        assert 'reason: quotient hypotheses not asserted: radical' in out
        assert 'sweep: c=0 none-found' in out

    def test_none_found(self, workspace, capsys):
        code, out = run(capsys, 'refute', workspace / 'simplex_nonnegative.posate')
        assert code == 2
        assert 'reason: none-found' in out


class TestOtherCommands:
    def test_taylor(self, capsys):
        code, out = run(capsys, 'taylor', 12)
        assert code == 0
        assert 'nonnegative-coefficients: yes' in out
        code, out = run(capsys, 'taylor', 2)
        assert 'p_2(1/2): 17/1024' in out

    def test_probe(self, workspace, capsys):
        code, out = run(capsys, 'probe', workspace / 'probe_disc.posate')
        assert code == 0
        assert 'bound: 1' in out

    def test_batch_keeps_input_order(self, workspace, capsys):
        code, out = run(capsys, 'certify', workspace / 'simplex_negative.posate',
                        workspace / 'interval_certify.posate', '--workers', 2)
        assert code == 1
        assert out.index('simplex_negative') < out.index('interval_certify')

    def test_write_report(self, workspace, capsys):
        path = workspace / 'simplex_nonnegative.posate'
        code, out = run(capsys, 'refute', path, '--write-report')
        assert Path(str(path) + '.report').read_text() == out

    def test_usage_error(self, capsys):
        with pytest.raises(SystemExit) as excinfo:
            main.main(['frobnicate'])
        assert excinfo.value.code == 3
