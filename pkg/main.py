#!/usr/bin/env python3
"""
posate - exact positivity certificates and refutations

Command line entry point: certify, check, refute, verify and probe problem
files, or print the square-root Taylor defect polynomials.
"""

import argparse
import sys
from fractions import Fraction
from concurrent.futures import ThreadPoolExecutor
from typing import List

from config import Config
from algebra.taylor import defect_coefficients, is_dyadic, sqrt_defect, taylor_sqrt
from workflow.orchestrator import EXIT_CODES, THEOREMS, PipelineOrchestrator, RunOutcome

USAGE_ERROR = EXIT_CODES['error']


class PosateArgumentParser(argparse.ArgumentParser):
    """Usage errors exit with the problem-file error code"""

    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"[ERROR] {message}", file=sys.stderr)
        sys.exit(USAGE_ERROR)


def run_file(command: str, path: str, args, verbose: bool) -> RunOutcome:
    """Run one problem file with its own orchestrator"""
    config = Config()
    orchestrator = PipelineOrchestrator(config)
    if verbose:
        orchestrator.set_progress_callback(lambda step, message: print(f"[INFO] {step}: {message}", file=sys.stderr))
    return orchestrator.run(
        command,
        path,
        max_degree=getattr(args, 'max_degree', None),
        theorem=getattr(args, 'theorem', None),
        certificate_path=getattr(args, 'certificate', None),
        write_report=getattr(args, 'write_report', False),
    )


def run_files(args, verbose: bool) -> int:
    """Run every file; reports are printed in input order, the exit code is the largest one"""
    files: List[str] = args.files
    if getattr(args, 'certificate', None) and len(files) > 1:
        print("[ERROR] --certificate needs exactly one problem file", file=sys.stderr)
        return USAGE_ERROR
    workers = max(1, min(args.workers, len(files)))
    if workers == 1:
        outcomes = [run_file(args.command, path, args, verbose) for path in files]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            outcomes = list(pool.map(lambda path: run_file(args.command, path, args, verbose), files))
    for index, outcome in enumerate(outcomes):
        if index:
            print()
        sys.stdout.write(outcome.text)
        if verbose and outcome.exit_code == 0:
            print(f"[SUCCESS] {outcome.path}: {outcome.status}", file=sys.stderr)
    return max(outcome.exit_code for outcome in outcomes)


def run_taylor(n: int) -> int:
    if n < 1:
        print("[ERROR] n must be at least 1", file=sys.stderr)
        return USAGE_ERROR
    t = taylor_sqrt(n)
    p = sqrt_defect(n)
    coefficients = defect_coefficients(n)
    nonnegative = all(c >= 0 for c in coefficients)
    dyadic = all(is_dyadic(c) for c in coefficients)
    print(f"t_{n}: {t.to_text(['x'])}")
    print(f"p_{n}: {p.to_text(['x'])}")
    print(f"p_{n}(1/2): {p.evaluate([Fraction(1, 2)])}")
    print(f"nonnegative-coefficients: {'yes' if nonnegative else 'no'}")
    print(f"dyadic-coefficients: {'yes' if dyadic else 'no'}")
    return 0 if nonnegative else 1


def build_parser() -> argparse.ArgumentParser:
    parser = PosateArgumentParser(
        prog='posate',
        description='Exact positivity certificates, hypothesis checks and refutation witnesses',
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  posate certify problems/interval_certify.posate --max-degree 4
  posate check problems/simplex_face.posate --theorem polytope-face
  posate refute problems/quotient_xy.posate
  posate verify problems/interval_certify.posate
  posate taylor 12

Exit codes: 0 positive verdict, 1 negative verdict, 2 inconclusive, 3 usage or parse error, 4 internal error
        """
    )
    parser.add_argument('--verbose', '-v', action='store_true', help='Print progress lines to stderr')
    sub = parser.add_subparsers(dest='command', required=True, parser_class=PosateArgumentParser)

    def with_files(name: str, help_text: str):
        p = sub.add_parser(name, help=help_text)
        p.add_argument('files', nargs='+', help='Problem files')
        p.add_argument('--workers', type=int, default=Config.BATCH_WORKERS,
                       help='Concurrent files in batch mode (default: %(default)s)')
        p.add_argument('--write-report', action='store_true',
                       help=f'Also write the report next to each input ({Config.REPORT_SUFFIX})')
        return p

    certify = with_files('certify', 'Search a Handelman-type certificate by exact LP')
    certify.add_argument('--max-degree', type=int, default=None,
                         help=f'Highest degree tried (default: file option or {Config.MAX_DEGREE})')
    check = with_files('check', 'Check the hypotheses of a local-global criterion on samples')
    check.add_argument('--theorem', choices=THEOREMS, default=None, help='Criterion to check')
    check.add_argument('--max-degree', type=int, default=None, help='Degree limit for auxiliary certificates')
    with_files('refute', 'Search a refutation witness')
    verify = with_files('verify', 'Re-verify the certificate written next to a problem file')
    verify.add_argument('--certificate', default=None,
                        help=f'Certificate file (default: <problem>{Config.CERTIFICATE_SUFFIX})')
    with_files('probe', 'Probe for an order unit with n u +/- a certificates')
    taylor = sub.add_parser('taylor', help='Print t_n, p_n = t_n^2 - (1 - x) and the coefficient verdict')
    taylor.add_argument('n', type=int)
    return parser


def main(argv=None) -> int:
    """Main entry point"""
    args = build_parser().parse_args(argv)
    verbose = args.verbose or Config.VERBOSE
    if args.command == 'taylor':
        return run_taylor(args.n)
    return run_files(args, verbose)


if __name__ == '__main__':
    sys.exit(main())
