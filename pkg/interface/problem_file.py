"""Problem files.

A problem file is plain text made of ``[section]`` headers followed by one
entry per line; ``#`` starts a comment. Sections::

    [variables]      names, whitespace or comma separated
    [kind]           semiring | semiring-module | quadratic-module | preordering
    [generators]     one polynomial per line
    [module]         module generators (semiring-module only)
    [target]         the polynomial f
    [ideal]          generators g_i of the ideal I (cone generators, or the probe ideal)
    [face]           1-based indices of the generators cutting out a face
    [variety]        'dim = k' plus generators of J
    [samples]        points '(a, b)' or 'segment (a, b) -> (c, d)'
    [decomposition]  'b ; s' per summand
    [unit]           order-unit candidate u
    [targets]        probe targets
    [options]        'key = value', validated by ProblemOptions
"""

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Literal, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator

from config import Config
from algebra.cones import ConeKind, GeneratorSet
from algebra.polynomial import Point, Polynomial, format_point, parse_point, parse_polynomial
from agents.variety_agent import IdealBasis, IdealRole, SampleSet

SECTIONS = ('variables', 'kind', 'generators', 'module', 'target', 'ideal', 'face', 'variety',
            'samples', 'decomposition', 'unit', 'targets', 'options')

_SECTION_RE = re.compile(r'\[([a-z-]+)\]')
_NAME_RE = re.compile(r'[A-Za-z_][A-Za-z0-9_]*')


class ProblemFileError(ValueError):
    def __init__(self, message: str, line: Optional[int] = None, path: Optional[str] = None):
        self.message = message
        self.line = line
        self.path = path
        where = path or '<problem>'
        if line is not None:
            where += f":{line}"
        super().__init__(f"{where}: {message}")


def _split_list(value):
    if isinstance(value, str):
        return [v.strip() for v in value.split(',') if v.strip()]
    return value


class ProblemOptions(BaseModel):
    """Per-problem knobs; unset values fall back to Config"""
    model_config = ConfigDict(extra='forbid')

    max_degree: int = Field(default_factory=lambda: Config.MAX_DEGREE, ge=0)
    degree: Optional[int] = Field(default=None, ge=0)
    theorem: Optional[Literal['sumbiti', 'boundary', 'polytope-face', 'interior']] = None
    epsilon: Optional[str] = None
    grid_density: int = Field(default_factory=lambda: Config.GRID_DENSITY, ge=1)
    grid_radius: int = Field(default_factory=lambda: Config.GRID_RADIUS, ge=1)
    n_max: int = Field(default_factory=lambda: Config.N_MAX, ge=1)
    probe_degrees: List[int] = Field(default_factory=lambda: [2])
    complete_intersection: bool = False
    quotient_m_convex: bool = False
    quotient_radical: bool = False
    quotient_non_zero_divisors: bool = False
    quotient_generator: Optional[int] = Field(default=None, ge=1)
    quotient_sweep: List[str] = Field(default_factory=list)

    @field_validator('epsilon')
    @classmethod
    def _check_epsilon(cls, value):
        if value is None:
            return value
        if Fraction(value) <= 0:
            raise ValueError("epsilon must be positive")
        return str(Fraction(value))

    @field_validator('probe_degrees', mode='before')
    @classmethod
    def _expand_degrees(cls, value):
        items = _split_list(value)
        degrees = []
        for item in items:
            if isinstance(item, str) and '-' in item:
                lo, hi = (int(x) for x in item.split('-', 1))
                degrees.extend(range(lo, hi + 1))
            else:
                degrees.append(int(item))
        if not degrees or any(d < 0 for d in degrees):
            raise ValueError("probe degrees must be a nonempty list of nonnegative integers")
        return degrees

    @field_validator('quotient_sweep', mode='before')
    @classmethod
    def _check_sweep(cls, value):
        items = _split_list(value)
        return [str(Fraction(v)) for v in items]

    @property
    def epsilon_value(self) -> Optional[Fraction]:
        return Fraction(self.epsilon) if self.epsilon is not None else None

    @property
    def sweep_values(self) -> List[Fraction]:
        return [Fraction(v) for v in self.quotient_sweep]

    @property
    def quotient_assertions(self) -> List[str]:
        """Asserted quotient hypotheses, named as in the refutation report"""
        flags = [('m-convex', self.quotient_m_convex), ('radical', self.quotient_radical),
                 ('non-zero-divisors', self.quotient_non_zero_divisors)]
        return [name for name, asserted in flags if asserted]


@dataclass
class ProblemFile:
    variables: List[str]
    kind: ConeKind = ConeKind.SEMIRING
    generators: List[Polynomial] = field(default_factory=list)
    module: List[Polynomial] = field(default_factory=list)
    target: Optional[Polynomial] = None
    ideal: List[Polynomial] = field(default_factory=list)
    face: List[int] = field(default_factory=list)
    variety: List[Polynomial] = field(default_factory=list)
    variety_dimension: Optional[int] = None
    samples: List[Point] = field(default_factory=list)
    decomposition: List[Tuple[Polynomial, Polynomial]] = field(default_factory=list)
    unit: Optional[Polynomial] = None
    targets: List[Polynomial] = field(default_factory=list)
    options: ProblemOptions = field(default_factory=ProblemOptions)
    path: Optional[str] = None
    lines: Dict[str, int] = field(default_factory=dict)

    @property
    def nvars(self) -> int:
        return len(self.variables)

    def error(self, message: str, section: Optional[str] = None) -> ProblemFileError:
        return ProblemFileError(message, self.lines.get(section) if section else None, self.path)

    def require(self, *sections: str):
        for section in sections:
            present = {
                'generators': bool(self.generators), 'target': self.target is not None,
                'ideal': bool(self.ideal), 'face': bool(self.face), 'variety': bool(self.variety),
                'samples': bool(self.samples), 'decomposition': bool(self.decomposition),
                'unit': self.unit is not None, 'targets': bool(self.targets),
            }.get(section, True)
            if not present:
                raise self.error(f"missing [{section}] section")
        if 'variety' in sections and self.variety_dimension is None:
            raise self.error("[variety] needs a 'dim = k' line", 'variety')

    def cone(self) -> GeneratorSet:
        self.require('generators')
        try:
            return GeneratorSet(self.kind, tuple(self.generators), tuple(self.module))
        except ValueError as e:
            raise self.error(str(e), 'generators')

    def variety_ideal(self) -> IdealBasis:
        self.require('variety')
        return IdealBasis(tuple(self.variety), IdealRole.VARIETY)

    def sample_set(self, on_target: bool = True) -> SampleSet:
        try:
            return SampleSet.build(self.samples, self.cone(), self.target if on_target else None)
        except ValueError as e:
            raise self.error(str(e), 'samples')

    def render(self) -> str:
        """Canonical text; parsing it gives back an equal problem"""
        v = self.variables
        out = ['[variables]', ' '.join(v), '', '[kind]', self.kind.value]

        def block(name, items):
            if items:
                out.extend(['', f'[{name}]'] + list(items))

        block('generators', (g.to_text(v) for g in self.generators))
        block('module', (h.to_text(v) for h in self.module))
        block('target', [self.target.to_text(v)] if self.target is not None else [])
        block('ideal', (g.to_text(v) for g in self.ideal))
        block('face', [' '.join(str(i + 1) for i in self.face)] if self.face else [])
        if self.variety:
            block('variety', [f"dim = {self.variety_dimension}"] + [g.to_text(v) for g in self.variety])
        block('samples', (format_point(p) for p in self.samples))
        block('decomposition', (f"{b.to_text(v)} ; {s.to_text(v)}" for b, s in self.decomposition))
        block('unit', [self.unit.to_text(v)] if self.unit is not None else [])
        block('targets', (a.to_text(v) for a in self.targets))
        options = self.options.model_dump(exclude_defaults=True)
        block('options', (f"{k} = {_render_option(val)}" for k, val in sorted(options.items())))
        return '\n'.join(out) + '\n'


def _render_option(value) -> str:
    if isinstance(value, bool):
        return 'true' if value else 'false'
    if isinstance(value, list):
        return ', '.join(str(v) for v in value)
    return str(value)


def _segment(text: str, steps: int) -> List[Point]:
    body = text[len('segment'):].strip()
    if '->' not in body:
        raise ValueError("segment needs 'p -> q'")
    start, end = (parse_point(part) for part in body.split('->', 1))
    if len(start) != len(end):
        raise ValueError("segment endpoints differ in dimension")
    return [tuple(a + (b - a) * Fraction(k, steps) for a, b in zip(start, end)) for k in range(steps + 1)]


def parse_problem(text: str, path: Optional[str] = None) -> ProblemFile:
    entries: Dict[str, List[Tuple[int, str]]] = {}
    headers: Dict[str, int] = {}
    section = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split('#', 1)[0].strip()
        if not line:
            continue
        match = _SECTION_RE.fullmatch(line)
        if match:
            section = match.group(1)
            if section not in SECTIONS:
                raise ProblemFileError(f"unknown section [{section}]", lineno, path)
            if section in headers:
                raise ProblemFileError(f"duplicate section [{section}]", lineno, path)
            headers[section] = lineno
            entries[section] = []
            continue
        if section is None:
            raise ProblemFileError("content before the first section", lineno, path)
        entries[section].append((lineno, line))

    if 'variables' not in entries or not entries['variables']:
        raise ProblemFileError("missing [variables] section", headers.get('variables'), path)
    variables: List[str] = []
    for lineno, line in entries['variables']:
        for name in re.split(r'[\s,]+', line):
            if not _NAME_RE.fullmatch(name):
                raise ProblemFileError(f"invalid variable name '{name}'", lineno, path)
            if name in variables:
                raise ProblemFileError(f"variable '{name}' declared twice", lineno, path)
            variables.append(name)

    problem = ProblemFile(variables=variables, path=path, lines=dict(headers))

    def poly(lineno: int, line: str) -> Polynomial:
        try:
            return parse_polynomial(line, variables)
        except ValueError as e:
            raise ProblemFileError(str(e), lineno, path)

    def single(name: str) -> Optional[Tuple[int, str]]:
        items = entries.get(name, [])
        if len(items) > 1:
            raise ProblemFileError(f"[{name}] takes a single entry", items[1][0], path)
        return items[0] if items else None

    options: Dict[str, str] = {}
    for lineno, line in entries.get('options', []):
        if '=' not in line:
            raise ProblemFileError(f"option line '{line}' is not 'key = value'", lineno, path)
        key, value = (part.strip() for part in line.split('=', 1))
        options[key.replace('-', '_')] = value
    try:
        problem.options = ProblemOptions(**options)
    except ValidationError as e:
        first = e.errors()[0]
        raise ProblemFileError(f"option {'.'.join(str(p) for p in first['loc'])}: {first['msg']}",
                               headers.get('options'), path)

    kind = single('kind')
    if kind is not None:
        try:
            problem.kind = ConeKind.parse(kind[1])
        except ValueError as e:
            raise ProblemFileError(str(e), kind[0], path)

    problem.generators = [poly(n, line) for n, line in entries.get('generators', [])]
    problem.module = [poly(n, line) for n, line in entries.get('module', [])]
    if problem.module and problem.kind != ConeKind.SEMIRING_MODULE:
        raise ProblemFileError("[module] requires kind semiring-module", headers['module'], path)
    target = single('target')
    problem.target = poly(*target) if target else None
    problem.ideal = [poly(n, line) for n, line in entries.get('ideal', [])]
    unit = single('unit')
    problem.unit = poly(*unit) if unit else None
    problem.targets = [poly(n, line) for n, line in entries.get('targets', [])]

    for lineno, line in entries.get('face', []):
        for token in re.split(r'[\s,]+', line):
            if not token.isdigit() or not 1 <= int(token) <= len(problem.generators):
                raise ProblemFileError(f"face index '{token}' does not name a generator", lineno, path)
            if int(token) - 1 not in problem.face:
                problem.face.append(int(token) - 1)

    for lineno, line in entries.get('variety', []):
        match = re.fullmatch(r'dim\s*=\s*(\d+)', line)
        if match:
            problem.variety_dimension = int(match.group(1))
            if problem.variety_dimension > len(variables):
                raise ProblemFileError("variety dimension exceeds the number of variables", lineno, path)
        else:
            problem.variety.append(poly(lineno, line))

    for lineno, line in entries.get('samples', []):
        try:
            if line.startswith('segment'):
                points = _segment(line, problem.options.grid_density)
            else:
                points = [parse_point(line)]
        except ValueError as e:
            raise ProblemFileError(str(e), lineno, path)
        for p in points:
            if len(p) != len(variables):
                raise ProblemFileError(f"sample {format_point(p)} has {len(p)} coordinates, "
                                       f"expected {len(variables)}", lineno, path)
            if p not in problem.samples:
                problem.samples.append(p)

    for lineno, line in entries.get('decomposition', []):
        if ';' not in line:
            raise ProblemFileError("decomposition lines are 'b ; s'", lineno, path)
        b, s = line.split(';', 1)
        problem.decomposition.append((poly(lineno, b), poly(lineno, s)))

    if problem.options.quotient_generator is not None and problem.options.quotient_generator > len(problem.generators):
        raise ProblemFileError("quotient_generator does not name a generator", headers.get('options'), path)
    return problem


def load_problem(path: str) -> ProblemFile:
    try:
        with open(path, 'r', encoding='utf-8') as f:
            text = f.read()
    except OSError as e:
        raise ProblemFileError(f"cannot read problem file: {e.strerror}", None, path)
    return parse_problem(text, path)
