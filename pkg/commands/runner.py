"""
Job runner
Dispatches a validated JobSpec to the services, writes the artifacts and
maps failures to exit codes
"""
import logging
import os
import time

from config import Config
from errors import EXIT_INVARIANT, EXIT_OK, CantorError, InputError
from models.construction import format_word
from models.grid import GridSet
from models.interval import Interval, IntervalUnion
from models.maps import Ifs
from models.numeric import format_number
from services.attractor import (SecondGenSpec, n_epsilon, sandwich_check,
                                second_gen_attractor, select_cover)
from services.dissection import cover, diameter_decay_holds, gaps, max_gap, ratios, ulbd_bound
from services.ifs import attractor_bounds, attractor_cover, fixed_points, hull, ratio_floor, two_map_construction
from services.oracle import grid_minkowski_sum, grid_second_gen, hausdorff
from services.setops import a_m, aprime, sum_is_interval, union_construct
from commands.output import write_report, write_svg, write_union

logger = logging.getLogger(__name__)

HANDLERS = {}


def handler(command):
    def register(func):
        HANDLERS[command] = func
        return func
    return register


class Outcome:
    """What a handler hands back: report fields, an optional union and SVG lanes"""

    def __init__(self, payload, union=None, lanes=None, hull=None, summary=''):
        self.payload = payload
        self.union = union
        self.lanes = lanes or []
        self.hull = hull
        self.summary = summary


def _construction(job, index=0):
    """The index-th set, or the two-map IFS presented as a construction"""
    if job.sets:
        return job.sets[index]
    c = two_map_construction(job.maps)
    if isinstance(c, Interval):
        raise InputError(f"the attractor is the interval {c}; there is no dissection to inspect")
    return c


def _realised(c, depth):
    """Clamp a depth to what the construction realises"""
    return min(depth, c.depth_limit) if c.depth_limit is not None else depth


def _first_gen_cover(job, depth):
    source = job.first_gen
    if isinstance(source, Ifs):
        return attractor_cover(source, depth)
    return cover(source, _realised(source, depth))


def _constants(source):
    """c for an IFS, a and a' for a construction"""
    if isinstance(source, Ifs):
        return {'c': format_number(ratio_floor(source)), 'sigma': format_number(source.sigma),
                'delta': format_number(source.delta), 'B': format_number(source.curvature)}
    certificate = ulbd_bound(source)
    constants = {'a': format_number(certificate.bound), 'ulbd': certificate.to_dict()}
    if 0 < certificate.bound <= 1:
        constants['a_prime'] = format_number(aprime(certificate.bound))
    return constants


# Handlers

@handler('attractor')
def first_generation(job):
    source = job.first_gen
    if isinstance(source, Ifs):
        inner, outer = attractor_bounds(source, job.depth)
        extra = {'hull': str(hull(source)), 'inner_points': len(inner),
                 'fixed_points': [format_number(x) for x in fixed_points(source)]}
    else:
        outer = _first_gen_cover(job, job.depth)
        extra = {'hull': str(source.root)}
    payload = {'depth': job.depth, 'interval_count': len(outer), 'constants': _constants(source), **extra}
    return Outcome(payload, outer, [('K_Psi cover', outer)], outer.hull,
                   f"{len(outer)} intervals at depth {job.depth}, hull {outer.hull}")


def _second_generation(job):
    spec = SecondGenSpec(job.first_gen, job.alpha)
    tol = job.tolerance if job.tolerance is not None else Config.DEFAULT_TOLERANCE
    result = second_gen_attractor(spec, tol=tol, mode=job.mode, depth=job.depth)
    return spec, result


@handler('second-gen')
def second_generation(job):
    spec, result = _second_generation(job)
    neps = n_epsilon(spec, job.alpha, job.epsilon, job.depth)
    disjoint = all(not result.intervals.meets(piece) for piece in neps)
    sandwich = sandwich_check(spec, result, job.depth)
    payload = result.to_dict()
    payload['constants'] = _constants(spec.first_gen)
    payload['constants']['n'] = result.n
    payload.update(sandwich=sandwich, n_epsilon=[str(piece) for piece in neps],
                   n_epsilon_disjoint=disjoint)
    if not isinstance(spec.first_gen, Interval):
        payload['cover_selection'] = select_cover(spec.first_gen, job.alpha, job.level).to_dict()
    lanes = [('K_Psi cover', _first_gen_cover(job, job.depth)), ('K_Phi', result.intervals),
             ('N_eps', neps)]
    return Outcome(payload, result.intervals, lanes, result.hull,
                   f"{len(result.intervals)} intervals, n={result.n}, depth {result.depth}, "
                   f"guarantee {result.guarantee}, "
                   f"sandwich {'ok' if sandwich else 'FAILED'}")


@handler('plot')
def plot(job):
    outcome = second_generation(job)
    outcome.payload['svg'] = True
    return outcome


@handler('sum-check')
def sum_check(job):
    sets = list(job.sets)
    certificates = [ulbd_bound(c) for c in sets]
    a = min(cert.bound for cert in certificates) if job.a is None else job.a
    verdict = sum_is_interval(sets, a)
    m = len(sets)
    constants = {'a': format_number(a), 'm': m,
                 'ulbd': [cert.to_dict() for cert in certificates]}
    if 0 < a < 1:
        constants['a_m'] = format_number(a_m(a, m))
    payload = {'certificate': verdict.to_dict(), 'constants': constants}

    h = job.grid_step
    grids = [GridSet.from_union(cover(c, _realised(c, job.depth)), h) for c in sets]
    total = grid_minkowski_sum(grids)
    target = Interval(sum(c.root.lo for c in sets), sum(c.root.hi for c in sets))
    empty = total.empty_cells_within(target)
    payload['oracle'] = {'grid_step': h, 'depth': job.depth, 'empty_cells': int(empty.size),
                         'gap_free': bool(empty.size == 0)}
    union = IntervalUnion([verdict.interval]) if verdict.certified else total.to_union()
    lanes = [(f"C{i + 1}", cover(c, _realised(c, job.depth))) for i, c in enumerate(sets)]
    lanes.append(('grid sum', total.to_union()))
    return Outcome(payload, union, lanes, target,
                   f"{verdict.verdict} (Cabrelli value {format_number(verdict.condition_value)}); "
                   f"grid oracle: {empty.size} empty cells")


@handler('ulbd-check')
def ulbd_check(job):
    constructions = list(job.sets) or [_construction(job)]
    reports = []
    for c in constructions:
        depth = _realised(c, job.depth)
        certificate = ulbd_bound(c, depth)
        width, exhaustive = max_gap(c, depth)
        reports.append({'certificate': certificate.to_dict(),
                        'witness': format_word(certificate.witness),
                        'max_gap': format_number(width) if width is not None else None,
                        'max_gap_exhaustive': exhaustive,
                        'diameter_decay': diameter_decay_holds(c, certificate.bound, depth)})
    payload = {'sets': reports}
    if job.maps is not None and not job.sets:
        floor = ratio_floor(job.maps)
        smallest = min(r for _, r in ratios(constructions[0], job.depth))
        payload['constants'] = _constants(job.maps)
        payload['min_ratio'] = format_number(smallest)
        payload['ratios_above_floor'] = bool(smallest >= floor)
    first = reports[0]['certificate']
    return Outcome(payload, summary=f"ulbd bound {first['bound']} to depth {first['depth_checked']} "
                                    f"(exhaustive={first['exhaustive']})")


@handler('gaps')
def gap_listing(job):
    c = _construction(job)
    depth = _realised(c, job.depth)
    found = gaps(c, depth)
    width, exhaustive = max_gap(c, depth) if depth >= 1 else (None, False)
    payload = {'depth': depth,
               'gaps': [{'word': format_word(w), 'gap': str(g)} for w, g in found],
               'max_gap': format_number(width) if width is not None else None,
               'max_gap_exhaustive': exhaustive}
    union = cover(c, depth)
    return Outcome(payload, union, [('cover', union), ('gaps', [g for _, g in found])], c.root,
                   f"{len(found)} gaps, widest {payload['max_gap']}")


@handler('neps')
def neighbourhood(job):
    spec = SecondGenSpec(job.first_gen, job.alpha)
    found = n_epsilon(spec, job.alpha, job.epsilon, job.depth)
    outer = _first_gen_cover(job, job.depth)
    payload = {'epsilon': format_number(job.epsilon), 'n_epsilon': [str(piece) for piece in found]}
    return Outcome(payload, None, [('K_Psi cover', outer), ('N_eps', found)], outer.hull,
                   f"{len(found)} open intervals")


@handler('oracle-compare')
def oracle_compare(job):
    spec = SecondGenSpec(job.maps, job.alpha)
    result = second_gen_attractor(spec, mode=job.mode, depth=job.depth)
    grid = grid_second_gen(job.maps, job.alpha, job.grid_step, job.beta_depth)
    distance = hausdorff(result.intervals, grid)
    threshold = job.tolerance if job.tolerance is not None else Config.ORACLE_TOLERANCE
    passed = distance <= threshold
    payload = result.to_dict()
    payload['oracle'] = {'grid_step': job.grid_step, 'beta_depth': job.beta_depth,
                         'cells': len(grid), 'hausdorff': float(distance),
                         'tolerance': format_number(threshold), 'passed': passed}
    lanes = [('K_Phi', result.intervals), ('grid oracle', grid.to_union())]
    return Outcome(payload, result.intervals, lanes, result.hull,
                   f"Hausdorff distance {float(distance):.3e} {'PASS' if passed else 'FAIL'} "
                   f"(tolerance {format_number(threshold)})")


@handler('union')
def union(job):
    c = union_construct(job.sets[0], job.sets[1])
    certificate = ulbd_bound(c, job.depth)
    payload = {'plan': c.plan.to_dict(), 'ratio_bound': format_number(c.ratio_bound),
               'ulbd': certificate.to_dict(),
               'ratios_above_bound': bool(certificate.bound >= c.ratio_bound)}
    depth = min(job.depth, c.depth_limit) if c.depth_limit is not None else job.depth
    covered = cover(c, depth)
    return Outcome(payload, covered, [('union cover', covered)], c.root,
                   f"union on {c.root}, n_bar={c.plan.n_bar}, ratios >= {format_number(c.ratio_bound)}")


# Entry point

def execute(job):
    if job.command not in HANDLERS:
        raise InputError(f"unknown command {job.command!r}")
    return HANDLERS[job.command](job)


def run(job, out_dir=None, echo=None):
    """Run the job, write its artifacts and return the process exit code"""
    out_dir = out_dir or Config.OUTPUT_DIR
    started = time.perf_counter()
    try:
        outcome = execute(job)
    except CantorError as e:
        logger.error("%s failed: %s", job.command, e.message)
        payload = e.to_payload()
        payload['command'] = job.command
        write_report(out_dir, payload)
        if echo:
            echo(f"error: {e.message}")
        return e.exit_code
    except Exception as e:
        logger.exception("%s failed unexpectedly", job.command)
        write_report(out_dir, {'status': 'error', 'type': type(e).__name__, 'message': str(e),
                               'exit_code': EXIT_INVARIANT, 'command': job.command})
        if echo:
            echo(f"internal error: {e}")
        return EXIT_INVARIANT

    artifacts = []
    if outcome.union is not None:
        artifacts.extend(write_union(out_dir, outcome.union))
    if (job.svg or job.command == 'plot') and outcome.lanes and outcome.hull is not None:
        artifacts.append(write_svg(out_dir, outcome.lanes, outcome.hull))
    payload = {'status': 'success', 'command': job.command, **outcome.payload,
               'artifacts': [os.path.basename(path) for path in artifacts],
               'elapsed_seconds': round(time.perf_counter() - started, 6)}
    write_report(out_dir, payload)
    logger.info("%s finished in %.3fs", job.command, payload['elapsed_seconds'])
    if echo:
        echo(outcome.summary)
    return EXIT_OK
