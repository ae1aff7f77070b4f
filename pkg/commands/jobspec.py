"""
Job files
A job is a JSON document naming the command and its inputs. Numbers written
as integers or "p/q" strings are exact; JSON floats stay floats.
"""
import json
import logging
from dataclasses import dataclass, field, replace
from typing import Optional

from config import Config
from errors import CantorError, SpecSyntaxError, SpecValidationError
from models.construction import ExplicitConstruction, RatioRule, parse_word
from models.interval import Interval
from models.maps import Ifs, MapDescriptor
from models.numeric import parse_number
from services.ifs import check_distinct_fixed_points, two_map_construction

logger = logging.getLogger(__name__)

COMMANDS = ('attractor', 'second-gen', 'sum-check', 'ulbd-check', 'gaps', 'neps',
            'oracle-compare', 'plot', 'union')
MODES = ('empirical', 'certified')


@dataclass(frozen=True)
class JobSpec:
    command: str
    maps: Optional[Ifs] = None
    sets: tuple = ()
    alpha: object = None
    a: object = None
    epsilon: object = 0
    depth: int = Config.DEFAULT_DEPTH
    tolerance: object = None
    mode: str = 'empirical'
    summands: int = 2
    domain: Optional[Interval] = None
    beta_depth: int = Config.BETA_DEPTH
    grid_step: float = Config.GRID_STEP
    level: int = 1
    svg: bool = False
    raw: dict = field(default_factory=dict, compare=False)

    @property
    def first_gen(self):
        """What the second-generation commands iterate over: the IFS, else the first set"""
        if self.maps is not None:
            return self.maps
        if self.sets:
            return self.sets[0]
        raise SpecValidationError('maps', "the job needs either maps or sets")


# Field parsers

def _number(value, path):
    try:
        return parse_number(value)
    except (ValueError, ZeroDivisionError):
        raise SpecValidationError(path, f"not a number: {value!r}")


def _integer(value, path, minimum=None):
    if isinstance(value, bool) or not isinstance(value, int):
        raise SpecValidationError(path, f"expected an integer, got {value!r}")
    if minimum is not None and value < minimum:
        raise SpecValidationError(path, f"must be >= {minimum}, got {value}")
    return value


def _interval(value, path):
    if not isinstance(value, list) or len(value) != 2:
        raise SpecValidationError(path, f"expected [lo, hi], got {value!r}")
    lo, hi = _number(value[0], f"{path}[0]"), _number(value[1], f"{path}[1]")
    if not lo < hi:
        raise SpecValidationError(path, f"need lo < hi, got [{lo}, {hi}]")
    return Interval(lo, hi)


def _wrap(path, build):
    """Report library input errors under the field path they came from"""
    try:
        return build()
    except SpecValidationError:
        raise
    except CantorError as e:
        raise SpecValidationError(path, e.message)


def _map(entry, index, domain):
    path = f"maps[{index}]"
    if not isinstance(entry, dict):
        raise SpecValidationError(path, f"expected an object, got {entry!r}")
    if 'expression' in entry:
        missing = [key for key in ('sigma', 'delta', 'curvature') if key not in entry]
        if missing:
            raise SpecValidationError(f"{path}.{missing[0]}", "required for expression maps")
        map_domain = _interval(entry['domain'], f"{path}.domain") if 'domain' in entry else domain
        if map_domain is None:
            raise SpecValidationError(f"{path}.domain", "expression maps need a domain")
        return _wrap(path, lambda: MapDescriptor.from_expression(
            entry['expression'],
            _number(entry['sigma'], f"{path}.sigma"),
            _number(entry['delta'], f"{path}.delta"),
            _number(entry['curvature'], f"{path}.curvature"),
            map_domain))
    for key in ('slope', 'offset'):
        if key not in entry:
            raise SpecValidationError(f"{path}.{key}", "required for affine maps")
    slope = _number(entry['slope'], f"{path}.slope")
    offset = _number(entry['offset'], f"{path}.offset")
    return _wrap(path, lambda: MapDescriptor.affine(slope, offset, domain))


def _ifs(entries, path, domain):
    if not isinstance(entries, list):
        raise SpecValidationError(path, f"expected a list of maps, got {entries!r}")
    if len(entries) < 2:
        raise SpecValidationError(path, f"need at least two maps, got {len(entries)}")
    maps = tuple(_map(entry, i, domain) for i, entry in enumerate(entries))
    f = _wrap(path, lambda: Ifs(maps, domain))
    _wrap(path, lambda: check_distinct_fixed_points(f))
    return f


def _construction(entry, index, domain):
    path = f"sets[{index}]"
    if not isinstance(entry, dict):
        raise SpecValidationError(path, f"expected an object, got {entry!r}")
    kind = entry.get('kind', 'ratio')
    if kind in ('ratio', 'middle-third'):
        root = _interval(entry.get('root', [0, 1]), f"{path}.root")
        if kind == 'middle-third':
            return RatioRule.middle_third(root)
        left = _number(entry.get('left'), f"{path}.left")
        right = _number(entry.get('right', entry.get('left')), f"{path}.right")
        return _wrap(path, lambda: RatioRule(root, left, right))
    if kind == 'ifs':
        f = _ifs(entry.get('maps'), f"{path}.maps", domain)
        c = _wrap(path, lambda: two_map_construction(f))
        if isinstance(c, Interval):
            raise SpecValidationError(path, f"the first-level images meet; the attractor is the interval {c}")
        return c
    if kind == 'explicit':
        table = entry.get('table')
        if not isinstance(table, dict):
            raise SpecValidationError(f"{path}.table", "expected an object mapping words to [lo, hi]")
        intervals = {}
        for word, value in table.items():
            key = _wrap(f"{path}.table", lambda: parse_word(word))
            intervals[key] = _interval(value, f"{path}.table.{word or '()'}")
        return _wrap(path, lambda: ExplicitConstruction(intervals))
    raise SpecValidationError(f"{path}.kind", f"unknown construction kind {kind!r}")


# Validation

def _check_alpha(alpha):
    if alpha is not None and not 0 < alpha < 1:
        raise SpecValidationError('alpha', f"must lie in ]0, 1[, got {alpha}")


def _check_scalars(job):
    _check_alpha(job.alpha)
    if job.a is not None and not 0 < job.a < 1:
        raise SpecValidationError('a', f"must lie in ]0, 1[, got {job.a}")
    if job.mode not in MODES:
        raise SpecValidationError('mode', f"must be one of {', '.join(MODES)}, got {job.mode!r}")
    if job.epsilon < 0:
        raise SpecValidationError('epsilon', f"must be non-negative, got {job.epsilon}")
    if job.tolerance is not None and not job.tolerance > 0:
        raise SpecValidationError('tolerance', f"must be positive, got {job.tolerance}")
    if job.depth < 0:
        raise SpecValidationError('depth', f"must be non-negative, got {job.depth}")
    if not job.grid_step > 0:
        raise SpecValidationError('grid_step', f"must be positive, got {job.grid_step}")


def _check_inputs(job):
    needs_alpha = ('second-gen', 'neps', 'oracle-compare', 'plot')
    if job.command in needs_alpha and job.alpha is None:
        raise SpecValidationError('alpha', f"required by {job.command}")
    if job.command in needs_alpha + ('attractor',) and job.maps is None and not job.sets:
        raise SpecValidationError('maps', f"{job.command} needs maps or sets")
    if job.command in ('ulbd-check', 'gaps') and not job.sets and job.maps is None:
        raise SpecValidationError('sets', f"{job.command} needs at least one set")
    if job.command == 'union' and len(job.sets) < 2:
        raise SpecValidationError('sets', f"union needs two sets, got {len(job.sets)}")
    if job.command == 'sum-check' and not job.sets:
        raise SpecValidationError('sets', "sum-check needs at least one set")
    if job.command == 'oracle-compare' and job.maps is None:
        raise SpecValidationError('maps', "oracle-compare needs an IFS")


def parse_spec(text, command=None):
    """Parse and validate a job document; `command` overrides the document's"""
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise SpecSyntaxError(e.msg, e.lineno, e.colno)
    if not isinstance(data, dict):
        raise SpecValidationError('$', "the job must be a JSON object")

    command = command or data.get('command')
    if command not in COMMANDS:
        raise SpecValidationError('command', f"must be one of {', '.join(COMMANDS)}, got {command!r}")

    domain = _interval(data['domain'], 'domain') if 'domain' in data else None
    maps = _ifs(data['maps'], 'maps', domain) if 'maps' in data else None
    sets = data.get('sets', [])
    if not isinstance(sets, list):
        raise SpecValidationError('sets', f"expected a list, got {sets!r}")
    constructions = tuple(_construction(entry, i, domain) for i, entry in enumerate(sets))

    summands = _integer(data.get('summands', 2), 'summands', 1)
    if command == 'sum-check' and len(constructions) == 1:
        constructions = constructions * summands

    job = JobSpec(
        command=command,
        maps=maps,
        sets=constructions,
        alpha=_number(data['alpha'], 'alpha') if 'alpha' in data else None,
        a=_number(data['a'], 'a') if 'a' in data else None,
        epsilon=_number(data.get('epsilon', 0), 'epsilon'),
        depth=_integer(data.get('depth', Config.DEFAULT_DEPTH), 'depth', 0),
        tolerance=_number(data['tolerance'], 'tolerance') if 'tolerance' in data else None,
        mode=data.get('mode', 'empirical'),
        summands=summands,
        domain=domain,
        beta_depth=_integer(data.get('beta_depth', Config.BETA_DEPTH), 'beta_depth', 1),
        grid_step=float(_number(data.get('grid_step', Config.GRID_STEP), 'grid_step')),
        level=_integer(data.get('level', 1), 'level', 0),
        svg=bool(data.get('svg', False)),
        raw=data,
    )
    _check_scalars(job)
    _check_inputs(job)
    logger.debug("parsed %s job: %d maps, %d sets", command, len(maps) if maps else 0, len(constructions))
    return job


def _flag_number(text, path):
    """Flags written as p/q or integers are exact, decimals are floats"""
    if isinstance(text, str) and any(ch in text for ch in '.eE'):
        try:
            return float(text)
        except ValueError:
            raise SpecValidationError(path, f"not a number: {text!r}")
    return _number(text, path)


def apply_overrides(job, alpha=None, depth=None, tol=None, mode=None, svg=None):
    """Command-line flags win over the document's scalar fields"""
    changes = {}
    if alpha is not None:
        changes['alpha'] = _flag_number(alpha, 'alpha')
    if depth is not None:
        changes['depth'] = _integer(depth, 'depth', 0)
    if tol is not None:
        changes['tolerance'] = _flag_number(tol, 'tolerance')
    if mode is not None:
        changes['mode'] = mode
    if svg:
        changes['svg'] = True
    if not changes:
        return job
    job = replace(job, **changes)
    _check_scalars(job)
    _check_inputs(job)
    return job
