"""Line-oriented text formats for certificates and reports.

Every line is ``key: value`` or, for certificates, ``alpha=(...) coeff=p/q``
with optional ``module=j`` and ``square=<polynomial>`` fields. Output is
deterministic so that reports can be diffed against golden files.
"""

import re
from fractions import Fraction
from typing import List, Optional, Sequence, Union

from algebra.cones import Certificate, ConeKind, TermKey
from algebra.polynomial import Polynomial, format_point, parse_polynomial
from agents.certificate_agent import (
    ArchimedeanCertificate, MinkowskiCombination, NotFoundAtDegree, ProbeResult, RefutationPoint,
)
from agents.theorem_checker_agent import CheckReport, Counterexample
from agents.witness_agent import RefutationReport, classify

CERTIFICATE_HEADER = '# posate certificate'

_TERM_RE = re.compile(r'alpha=\(([0-9,\s]*)\)\s+coeff=(\S+)(?:\s+module=(\d+))?(?:\s+square=(.+))?')


def format_certificate(certificate: Certificate, variables: Sequence[str]) -> str:
    lines = [CERTIFICATE_HEADER, f"kind: {certificate.kind.value}", f"degree: {certificate.degree}"]
    for (alpha, index, base), c in certificate.sorted_terms():
        line = f"alpha=({','.join(str(a) for a in alpha)}) coeff={c}"
        if index:
            line += f" module={index}"
        if base is not None:
            line += f" square={base.to_text(variables)}"
        lines.append(line)
    return '\n'.join(lines) + '\n'


def parse_certificate(text: str, variables: Sequence[str]) -> Certificate:
    kind: Optional[ConeKind] = None
    degree: Optional[int] = None
    terms = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith('#'):
            continue
        if line.startswith('kind:'):
            kind = ConeKind.parse(line[len('kind:'):])
            continue
        if line.startswith('degree:'):
            degree = int(line[len('degree:'):].strip())
            continue
        match = _TERM_RE.fullmatch(line)
        if not match:
            raise ValueError(f"line {lineno}: cannot read certificate term '{line}'")
        alpha = tuple(int(a) for a in match.group(1).replace(' ', '').split(',') if a != '')
        base = parse_polynomial(match.group(4), variables) if match.group(4) else None
        key: TermKey = (alpha, int(match.group(3) or 0), base)
        if key in terms:
            raise ValueError(f"line {lineno}: duplicate certificate term")
        terms[key] = Fraction(match.group(2))
    if kind is None or degree is None:
        raise ValueError("certificate needs 'kind:' and 'degree:' lines")
    return Certificate(kind=kind, degree=degree, terms=terms)


def certificate_lines(certificate: Certificate, variables: Sequence[str]) -> List[str]:
    body = format_certificate(certificate, variables).splitlines()[1:]
    return [f"certificate: {line}" for line in body]


def not_found_lines(outcome: NotFoundAtDegree) -> List[str]:
    lines = [f"reason: {outcome.reason}"]
    for attempt in outcome.attempts:
        status = 'verified' if attempt.verify() else 'INVALID'
        lines.append(f"farkas: degree={attempt.degree} rows={attempt.system.nrows} {status}")
    return lines


def counterexample_lines(counterexample: Counterexample) -> List[str]:
    parts = [f"kind={counterexample.kind}"]
    if counterexample.point is not None:
        parts.append(f"point={format_point(counterexample.point)}")
    if counterexample.direction is not None:
        parts.append(f"direction={format_point(counterexample.direction)}")
    if counterexample.value is not None:
        parts.append(f"value={counterexample.value}")
    return ['counterexample: ' + ' '.join(parts)]


def check_report_lines(report: CheckReport, variables: Sequence[str]) -> List[str]:
    lines = [f"theorem: {report.theorem}", f"verdict: {report.verdict.value}"]
    for c in report.conditions:
        detail = f" {c.detail}" if c.detail else ''
        lines.append(f"condition: {c.name} {c.status.value}{detail}")
    if report.counterexample is not None:
        lines += counterexample_lines(report.counterexample)
    for note in report.notes:
        lines.append(f"note: {note}")
    if report.certificate is not None:
        lines += certificate_lines(report.certificate, variables)
    return lines


def refutation_lines(report: RefutationReport) -> List[str]:
    w = report.witness
    lines = [f"witness: {w.kind.value}", f"type: {classify(w).value}", f"point: {format_point(w.point)}"]
    if w.direction is not None:
        lines.append(f"direction: {format_point(w.direction)}")
    if w.generator_index is not None:
        lines.append(f"generator: {w.generator_index + 1}")
    lines.append(f"value: {w.value}")
    if report.radius is not None:
        lines.append(f"radius: {report.radius}")
    if report.negative_point is not None:
        lines.append(f"negative-point: {format_point(report.negative_point)}")
    lines.append(f"justification: {report.justification.value}")
    if report.hypotheses:
        lines.append(f"hypotheses: {', '.join(h.value for h in report.hypotheses)}")
    for note in report.notes:
        lines.append(f"note: {note}")
    return lines


def minkowski_lines(outcome: Union[MinkowskiCombination, RefutationPoint], generators: Sequence[Polynomial], variables: Sequence[str]) -> List[str]:
    if isinstance(outcome, RefutationPoint):
        return [f"refutation-point: {format_point(outcome.point)}", f"value: {outcome.value}"]
    lines = [f"combination: 1 * {outcome.constant}"]
    for c, g in zip(outcome.coefficients, generators):
        if c:
            lines.append(f"combination: ({g.to_text(variables)}) * {c}")
    return lines


def archimedean_lines(outcome: ArchimedeanCertificate, variables: Sequence[str]) -> List[str]:
    lines = [f"bound: {outcome.bound}"]
    for (i, sign), combo in sorted(outcome.combinations.items()):
        terms = [str(combo.constant)] + [f"{c}*g{k + 1}" for k, c in enumerate(combo.coefficients) if c]
        op = '-' if sign > 0 else '+'
        lines.append(f"order-unit: {outcome.bound} {op} {variables[i]} = {' + '.join(terms)}")
    return lines


def probe_lines(result: ProbeResult, variables: Sequence[str]) -> List[str]:
    lines = [f"degree: {result.degree}", f"n-max: {result.n_max}"]
    for entry in result.entries:
        name = entry.target.to_text(variables)
        if entry.found:
            lines.append(f"target: {name} n={entry.bound}")
        else:
            lines.append(f"target: {name} not-found")
        for refutation in entry.refutations:
            sign = '+' if refutation.sign > 0 else '-'
            status = 'verified' if refutation.verify() else 'INVALID'
            lines.append(f"farkas: sign={sign} degree={refutation.degree} all-n {status}")
        if entry.note:
            lines.append(f"note: {entry.note}")
    bound = result.bound
    lines.append(f"bound: {bound if bound is not None else 'not-found'}")
    return lines
