"""
Second-generation attractor pipeline
The maps φ_β(x) = αx + (1-α)β, β in K, have the attractor
K_Φ = (1-α)·Σ_j α^j K. It is computed as the fixed point of
U -> α^n·U + J with J the n-term partial sum.
"""
import itertools
import logging
import time
from dataclasses import dataclass, field

import numpy as np

from config import Config
from errors import (BudgetError, CertificateError, InputError, InvariantError,
                    NonConvergenceError)
from models.construction import AffineImage, Construction
from models.interval import Interval, IntervalUnion, OpenInterval
from models.maps import Ifs
from models.numeric import is_exact, tolerance
from services.dissection import cover, subtree, ulbd_bound
from services.ifs import (composite_fixed_points, compose_map, hull, hutchinson_image, ratio_floor,
                          two_map_construction)
from services.oracle import hausdorff
from services.setops import cabrelli_check, cabrelli_value, geometric_count, sum_is_interval, third

logger = logging.getLogger(__name__)

EMPIRICAL = 'empirical'
CERTIFIED = 'certified'
MODES = (EMPIRICAL, CERTIFIED)

# Guarantees reported on the result
GUARANTEE_NONE = 'none'
GUARANTEE_INTERVAL = 'interval'
GUARANTEE_COMBINATIONS = 'cabrelli-per-combination'
GUARANTEE_COUNT = 'geometric-count'

# Composites up to this word length give extra inner points of an IFS attractor
COMPOSITE_LENGTH = 3


@dataclass(frozen=True)
class SecondGenSpec:
    """First-generation attractor (Ifs, Construction or Interval) and the common ratio α"""
    first_gen: object
    alpha: object

    def __post_init__(self):
        if not 0 < self.alpha < 1:
            raise InputError(f"alpha must lie in ]0, 1[, got {self.alpha}")
        if not isinstance(self.first_gen, (Ifs, Construction, Interval)):
            raise InputError(f"cannot build a second generation over {type(self.first_gen).__name__}")


@dataclass(frozen=True)
class CoverSelection:
    level: int
    words: tuple
    pieces: tuple
    window: tuple
    route: str

    def union(self):
        return IntervalUnion.from_intervals(self.pieces)

    def to_dict(self):
        return {
            'level': self.level,
            'route': self.route,
            'size': len(self.words),
            'window': [str(self.window[0]), str(self.window[1])],
        }


@dataclass(frozen=True)
class PartialSum:
    outer: IntervalUnion
    inner: list
    n: int
    depth: int


@dataclass
class AttractorResult:
    intervals: IntervalUnion
    alpha: object
    hull: Interval
    mode: str
    n: int
    depth: int
    iterations: int = 0
    history: list = field(default_factory=list)
    guarantee: str = GUARANTEE_NONE
    certificates: dict = field(default_factory=dict)
    elapsed: float = 0.0
    depth_settled: bool = True

    @property
    def merged_gaps(self):
        return self.intervals.merged_gaps

    def to_dict(self):
        return {
            'alpha': str(self.alpha),
            'hull': str(self.hull),
            'mode': self.mode,
            'n': self.n,
            'depth': self.depth,
            'depth_settled': self.depth_settled,
            'iterations': self.iterations,
            'displacements': [str(d) for d in self.history],
            'guarantee': self.guarantee,
            'certificates': self.certificates,
            'interval_count': len(self.intervals),
            'total_length': str(self.intervals.total_length),
            'merged_gaps': self.merged_gaps,
            'elapsed_seconds': round(self.elapsed, 6),
        }


class _Presentation:
    """Uniform access to K: hull, outer cover at a depth and true points of K"""

    def __init__(self, source):
        self.source = source
        self._covers = {}
        if isinstance(source, Construction):
            self.hull = source.root
        elif isinstance(source, Ifs):
            self.hull = hull(source)
        elif isinstance(source, Interval):
            self.hull = source
        else:
            raise InputError(f"cannot present {type(source).__name__} as a first-generation attractor")

    @property
    def is_exact(self):
        return is_exact(self.hull.lo, self.hull.hi)

    def cover(self, depth):
        if depth < 0:
            raise InputError(f"depth must be non-negative, got {depth}")
        if depth not in self._covers:
            source = self.source
            if isinstance(source, Construction):
                realised = depth
                if source.depth_limit is not None and depth > source.depth_limit:
                    logger.info("cover depth %d clamped to the realised depth %d", depth, source.depth_limit)
                    realised = source.depth_limit
                self._covers[depth] = cover(source, realised)
            elif isinstance(source, Ifs):
                known = max((d for d in self._covers if d < depth), default=0)
                union = self._covers[known] if known in self._covers else IntervalUnion([self.hull])
                for level in range(known + 1, depth + 1):
                    union = hutchinson_image(source, union)
                    self._covers[level] = union
                self._covers[depth] = union
            else:
                self._covers[depth] = IntervalUnion([source])
        return self._covers[depth]

    def width(self, depth):
        """Widest component of the depth-`depth` cover"""
        return max(iv.diameter for iv in self.cover(depth))

    def term_depth(self, alpha, j, depth):
        """Shallowest cover depth whose components, scaled by α^j, are no wider than at `depth`"""
        if j == 0:
            return depth
        target = self.width(depth)
        scale = alpha ** j
        for d in range(depth):
            if scale * self.width(d) <= target:
                return d
        return depth

    def points(self, depth):
        """Points of K: endpoints of the merged cover, plus fixed points of short composites for an IFS"""
        points = self.cover(depth).endpoints
        if isinstance(self.source, Ifs):
            for length in range(1, COMPOSITE_LENGTH + 1):
                points.extend(composite_fixed_points(self.source, length))
        return points


def _presentation(source):
    if isinstance(source, SecondGenSpec):
        source = source.first_gen
    return source if isinstance(source, _Presentation) else _Presentation(source)


def merge_tolerance(hull_interval, *values):
    """τ_m: zero in rational mode, 4 machine epsilons of the hull diameter otherwise"""
    if is_exact(hull_interval.lo, hull_interval.hi, *values):
        return 0
    return 4 * float(np.finfo(float).eps) * float(hull_interval.diameter)


def phi(alpha, beta, x):
    return alpha * x + (1 - alpha) * beta


def compose_phi(alpha, betas, x):
    """φ_{β_n} ∘ ... ∘ φ_{β_1}(x) = α^n x + (1-α)·Σ β_i α^(n-i)"""
    betas = list(betas)
    n = len(betas)
    total = alpha ** n * x
    for i, beta in enumerate(betas, start=1):
        total += (1 - alpha) * beta * alpha ** (n - i)
    return total


# Cover selection

def _select_ulbd(c, alpha, level, scale):
    if level < 0:
        raise InputError(f"cover level must be >= 0, got {level}")
    certificate = ulbd_bound(c)
    threshold = scale * alpha ** level
    words, pieces = [], []
    stack = [c.root_node()]
    while stack:
        node = stack.pop()
        children = c.split(node)
        if any(child.interval.diameter < threshold for child in children):
            words.append(node.word)
            pieces.append(node.interval)
        else:
            stack.extend(reversed(children))
    return CoverSelection(level, tuple(words), tuple(pieces),
                          (threshold, threshold / certificate.bound), 'ulbd')


def _select_ifs(f, alpha, level, scale):
    if level < 1:
        raise InputError(f"the IFS route needs level >= 1, got {level}")
    H = hull(f)
    threshold = scale * alpha ** level
    floor = ratio_floor(f)
    words, pieces = [], []
    frontier = [((), compose_map(f, ()))]
    while frontier:
        nxt = []
        for word, composite in frontier:
            image = composite.image(H)
            if image.diameter <= threshold:
                words.append(word)
                pieces.append(image)
                continue
            nxt.extend((word + (index,), composite.compose(psi)) for index, psi in enumerate(f))
        frontier = nxt
    order = sorted(range(len(words)), key=lambda i: pieces[i].lo)
    return CoverSelection(level, tuple(words[i] for i in order), tuple(pieces[i] for i in order),
                          (floor * threshold, threshold), 'ifs')


def select_cover(K, alpha, level, scale=None):
    """B_l: pieces of K whose diameters are comparable to scale·α^l

    `scale` (A) defaults to the hull diameter. Constructions use the ulbd
    window [Aα^l, Aα^l/a), IFSs the window ]cAα^l, Aα^l].
    """
    if not 0 < alpha < 1:
        raise InputError(f"alpha must lie in ]0, 1[, got {alpha}")
    if isinstance(K, Construction):
        scale = K.root.diameter if scale is None else scale
        return _select_ulbd(K, alpha, level, scale)
    if isinstance(K, Ifs):
        scale = hull(K).diameter if scale is None else scale
        return _select_ifs(K, alpha, level, scale)
    raise InputError(f"select_cover needs a construction or an IFS, got {type(K).__name__}")


# Partial sums

def _partial_sums(pres, alpha, depth, merge_tol, budget):
    """Yield (n, J_n) with J_n = ⊕_{j<n} (1-α)α^j·K_j

    K_j is the cover of K at the depth matching the α^j scale, so every
    term resolves K about as finely as the depth-`depth` leading term.
    """
    zero = pres.hull.lo - pres.hull.lo
    total = IntervalUnion([Interval(zero, zero)], merge_tol)
    n = 0
    while True:
        term = pres.cover(pres.term_depth(alpha, n, depth)).affine((1 - alpha) * alpha ** n)
        total = total.minkowski(term, merge_tol, budget)
        n += 1
        logger.debug("partial sum n=%d: %d intervals", n, len(total))
        yield n, total


def partial_geometric_sum(K, alpha, n, depth, budget=None):
    """Outer and inner bounds of (1-α)·Σ_{j<n} α^j K from covers down to depth `depth`

    The inner points are the outer endpoints: each is a sum of cover
    endpoints, so it lies in the true partial sum.
    """
    if n < 1:
        raise InputError(f"partial_geometric_sum needs n >= 1, got {n}")
    pres = _presentation(K)
    budget = budget or Config.INTERVAL_BUDGET
    tol = merge_tolerance(pres.hull, alpha)
    for count, outer in _partial_sums(pres, alpha, depth, tol, budget):
        if count == n:
            if outer.merged_gaps:
                logger.warning("%d gaps narrower than %s merged in the partial sum", outer.merged_gaps, tol)
            return PartialSum(outer, outer.endpoints, n, depth)


def _tail_outer(J, alpha, n, H, merge_tol):
    tail = IntervalUnion([Interval(alpha ** n * H.lo, alpha ** n * H.hi)])
    return J.minkowski(tail, merge_tol)


def _stabilised_terms(pres, alpha, depth, merge_tol, budget, max_terms):
    """Smallest n whose tail cannot close a gap and whose count has settled"""
    H = pres.hull
    previous = None
    for n, J in _partial_sums(pres, alpha, depth, merge_tol, budget):
        outer = _tail_outer(J, alpha, n, H, merge_tol)
        gaps = outer.gaps()
        narrow_tail = not gaps or 2 * alpha ** n * H.diameter < min(g.width for g in gaps)
        if narrow_tail and previous == len(outer):
            logger.debug("partial sum stabilised at n=%d with %d intervals (depth %d)", n, len(outer), depth)
            return n, J
        previous = len(outer)
        if n >= max_terms:
            logger.warning("partial sum did not stabilise within %d terms; using n=%d", max_terms, n)
            return n, J


def _settled_partial_sum(pres, alpha, depth, max_depth, tol, merge_tol, budget, max_terms, terms):
    """(n, J, depth, settled): deepen the covers until J stops moving

    J has settled when one more level keeps n and the interval count and
    moves J by at most `tol` in Hausdorff distance.
    """
    previous = None
    for level in range(depth, max_depth + 1):
        if terms is None:
            n, J = _stabilised_terms(pres, alpha, level, merge_tol, budget, max_terms)
        else:
            n, J = terms, partial_geometric_sum(pres, alpha, terms, level, budget).outer
        if previous is not None:
            last_n, last_J = previous
            moved = hausdorff(J, last_J)
            logger.debug("depth %d: n=%d, %d intervals, moved %s", level, n, len(J), moved)
            if n == last_n and len(J) == len(last_J) and moved <= tol:
                logger.info("partial sum settled at depth %d: n=%d, %d intervals", level, n, len(J))
                return n, J, level, True
        previous = n, J
    logger.warning("partial sum still moving at depth %d; using it", max_depth)
    return n, J, max_depth, False


# Certified partial sums

def _certified_partial_sum(pres, alpha, budget):
    """(n, J, guarantee, certificates) with J exact from certified pieces"""
    source = pres.source
    if isinstance(source, Ifs):
        if len(source) != 2:
            raise CertificateError(f"certified mode needs a two-map IFS, got {len(source)} maps")
        source = two_map_construction(source)
    if isinstance(source, Interval):
        return None, None, GUARANTEE_INTERVAL, {'route': GUARANTEE_INTERVAL}

    certificate = ulbd_bound(source)
    if not certificate.exhaustive:
        raise CertificateError(
            f"ulbd bound {certificate.bound} is only checked to depth {certificate.depth_checked}",
            depth_checked=certificate.depth_checked)
    a = certificate.bound
    A = source.root.diameter
    certificates = {'a': str(a), 'A': str(A), 'ulbd': certificate.to_dict()}

    n = 1
    while not cabrelli_check(a, n):
        n += 1
    selections = [select_cover(source, alpha, level) for level in range(1, n + 1)]
    combinations = 1
    for selection in selections:
        combinations *= len(selection.words)
    certificates.update(cabrelli_value=str(cabrelli_value(min(a, third(a)), n)),
                        combinations=combinations)

    if combinations <= Config.COMBINATION_BUDGET:
        pieces = [[AffineImage(subtree(source, w), 1 / alpha ** level) for w in selection.words]
                  for level, selection in enumerate(selections, start=1)]
        cache = {}
        failed = None
        for combination in itertools.product(*pieces):
            verdict = sum_is_interval(combination, a, cache=cache)
            if not verdict.certified:
                failed = verdict.reason
                break
        if failed is None:
            J = _assemble(selections, alpha, n, pres, budget)
            certificates.update(route=GUARANTEE_COMBINATIONS, n=n)
            logger.info("all %d piece combinations certified at n=%d", combinations, n)
            return n, J, GUARANTEE_COMBINATIONS, certificates
        logger.info("piece combination not certified: %s", failed)
        certificates['combination_failure'] = failed
    else:
        logger.info("%d piece combinations exceed the budget %d", combinations, Config.COMBINATION_BUDGET)

    count = geometric_count(A, A / a, a)
    certificates['geometric_count'] = count
    if count <= Config.MAX_TERMS:
        selections = [select_cover(source, alpha, level) for level in range(1, count + 1)]
        J = _assemble(selections, alpha, count, pres, budget)
        certificates.update(route=GUARANTEE_COUNT, n=count)
        logger.info("geometric count n=%d fits the term budget", count)
        return count, J, GUARANTEE_COUNT, certificates
    raise BudgetError(
        f"no certificate within budgets: {combinations} combinations (budget {Config.COMBINATION_BUDGET}), "
        f"geometric count {count} (budget {Config.MAX_TERMS})",
        combinations=combinations, geometric_count=count)


def _assemble(selections, alpha, n, pres, budget):
    """⊕_i (1-α)α^(n-i)·(union of the level-i piece intervals)"""
    merge_tol = merge_tolerance(pres.hull, alpha)
    zero = pres.hull.lo - pres.hull.lo
    total = IntervalUnion([Interval(zero, zero)], merge_tol)
    for level, selection in enumerate(selections, start=1):
        scaled = selection.union().affine((1 - alpha) * alpha ** (n - level))
        total = total.minkowski(scaled, merge_tol, budget)
    return total


# Fixed point of U -> α^n U + J

def _snap(union, H):
    """Pin the outer endpoints on the hull"""
    intervals = list(union)
    intervals[0] = Interval(H.lo, max(H.lo, intervals[0].hi))
    intervals[-1] = Interval(min(H.hi, intervals[-1].lo), H.hi)
    return IntervalUnion(intervals, union.merge_tolerance, union.merged_gaps)


def _solve(J, alpha, n, H, tol, max_iter, merge_tol, budget, exact):
    scale = alpha ** n
    current = IntervalUnion([H], merge_tol)
    history = []
    for iteration in range(1, max_iter + 1):
        nxt = current.affine(scale).minkowski(J, merge_tol, budget)
        if not exact:
            nxt = _snap(nxt, H)
        displacement = hausdorff(nxt, current)
        history.append(displacement)
        logger.debug("iteration %d: %d intervals, displacement %s", iteration, len(nxt), displacement)
        current = nxt
        if displacement <= tol:
            return current, iteration, history
    raise NonConvergenceError(f"U -> α^n U + J did not settle within {max_iter} iterations",
                              last=current, history=history)


def second_gen_attractor(spec, tol=None, mode=EMPIRICAL, depth=None, terms=None,
                         max_terms=None, max_iter=None, budget=None, max_depth=None):
    """K_Φ as a finite union of closed intervals

    `depth` is where the empirical cover depth starts; it grows until the
    partial sum settles (at most `max_depth`) and the result reports the
    depth reached.
    """
    if mode not in MODES:
        raise InputError(f"mode must be one of {', '.join(MODES)}, got {mode!r}")
    tol = Config.DEFAULT_TOLERANCE if tol is None else tol
    depth = Config.DEFAULT_DEPTH if depth is None else depth
    max_depth = max(Config.MAX_DEPTH if max_depth is None else max_depth, depth + 1)
    max_terms = max_terms or Config.MAX_TERMS
    max_iter = max_iter or Config.MAX_ITERATIONS
    budget = budget or Config.INTERVAL_BUDGET
    if tol < 0:
        raise InputError(f"tolerance must be non-negative, got {tol}")
    if terms is not None and terms < 1:
        raise InputError(f"terms must be >= 1, got {terms}")

    started = time.perf_counter()
    alpha = spec.alpha
    pres = _presentation(spec)
    H = pres.hull
    merge_tol = merge_tolerance(H, alpha)
    exact = merge_tol == 0
    guarantee, certificates = GUARANTEE_NONE, {}
    settled = True

    if mode == CERTIFIED:
        n, J, guarantee, certificates = _certified_partial_sum(pres, alpha, budget)
        if J is None:
            result = AttractorResult(IntervalUnion([H], merge_tol), alpha, H, mode, 0, depth,
                                     guarantee=guarantee, certificates=certificates,
                                     elapsed=time.perf_counter() - started)
            logger.info("first-generation attractor is the interval %s", H)
            return result
    else:
        n, J, depth, settled = _settled_partial_sum(pres, alpha, depth, max_depth, tol, merge_tol,
                                                    budget, max_terms, terms)

    intervals, iterations, history = _solve(J, alpha, n, H, tol, max_iter, merge_tol, budget, exact)
    if intervals.lo != H.lo or intervals.hi != H.hi:
        raise InvariantError(f"attractor hull {intervals.hull} differs from {H}")
    if intervals.merged_gaps:
        logger.warning("%d gaps narrower than %s were merged", intervals.merged_gaps, merge_tol)
    elapsed = time.perf_counter() - started
    logger.info("attractor: %d intervals, n=%d, depth %d, %d iterations, guarantee %s, %.3fs",
                len(intervals), n, depth, iterations, guarantee, elapsed)
    return AttractorResult(intervals, alpha, H, mode, n, depth, iterations, history,
                           guarantee, certificates, elapsed, settled)


# Localisation and sandwich

def n_epsilon(K, alpha, eps, depth):
    """Open intervals of points x whose window [x - αM - ε, x - αm + ε] misses (1-α)K"""
    if eps < 0:
        raise InputError(f"epsilon must be non-negative, got {eps}")
    if not 0 < alpha < 1:
        raise InputError(f"alpha must lie in ]0, 1[, got {alpha}")
    pres = _presentation(K)
    H = pres.hull
    scaled = pres.cover(depth).affine(1 - alpha)
    found = []
    for g in scaled.gaps():
        lo = g.lo + alpha * H.hi + eps
        hi = g.hi + alpha * H.lo - eps
        if lo < hi:
            found.append(OpenInterval(lo, hi))
    logger.debug("N_eps: %d of %d gaps admit the window", len(found), len(scaled.gaps()))
    return found


def sandwich_check(spec, attractor, depth, slack=None):
    """K ⊆ attractor ⊆ α·d(hull)-neighbourhood of the outer cover of K"""
    if isinstance(attractor, AttractorResult):
        attractor = attractor.intervals
    pres = _presentation(spec)
    H = pres.hull
    alpha = spec.alpha
    slack = tolerance(H.lo, H.hi, alpha) if slack is None else slack
    for x in pres.points(depth):
        if attractor.distance(x) > slack:
            logger.info("inner point %s of K is missing from the attractor", x)
            return False
    neighbourhood = pres.cover(depth).fattened(alpha * H.diameter + slack)
    inside = all(neighbourhood.covers(iv) for iv in attractor)
    if not inside:
        logger.info("attractor leaves the %s-neighbourhood of K", alpha * H.diameter)
    return inside
