"""
Brute-force oracle
Grid Hutchinson iteration, grid Minkowski sums, grid second-generation
iteration and the Hausdorff distance between compact sets on the line
"""
import bisect
import logging
from functools import reduce

import numpy as np

from config import Config
from errors import (BudgetError, InputError, NonConvergenceError, ResolutionError,
                    UndefinedDistanceError)
from models.construction import Construction
from models.grid import GridSet
from models.interval import Interval, IntervalUnion
from models.maps import Ifs
from services.dissection import cover
from services.ifs import attractor_cover, hull

logger = logging.getLogger(__name__)


def _iterate(start, step, max_iter, what):
    current = start
    for iteration in range(1, max_iter + 1):
        nxt = step(current)
        if nxt == current:
            logger.info("%s reached fixed occupancy after %d iterations (%d cells)",
                        what, iteration, len(nxt))
            return nxt
        current = nxt
    raise NonConvergenceError(f"{what} did not reach a fixed occupancy in {max_iter} iterations",
                              last=current)


def grid_attractor(f, h, max_iter=None, origin=None):
    """Outer grid approximation of K_Ψ by iterating U on cells"""
    if not h > 0:
        raise InputError(f"grid step must be positive, got {h}")
    max_iter = max_iter or Config.MAX_ITERATIONS
    H = hull(f)
    origin = float(H.lo) if origin is None else origin
    start = GridSet.from_union([H], h, origin)

    def step(current):
        images = [current.map_image(psi) for psi in f]
        return reduce(GridSet.union, images)

    return _iterate(start, step, max_iter, "grid attractor")


def grid_minkowski(a, b, budget=None):
    """Cell sumset; cells i + j and i + j + 1 so the true sum is inside"""
    if a.h != b.h:
        raise ResolutionError(f"grid steps differ: {a.h} vs {b.h}", h=a.h, other_h=b.h)
    budget = budget or Config.INTERVAL_BUDGET
    first_a, last_a = a.runs()
    first_b, last_b = b.runs()
    if first_a.size * first_b.size > budget:
        raise BudgetError(f"grid sum of {first_a.size} x {first_b.size} runs exceeds budget {budget}")
    first = (first_a[:, None] + first_b[None, :]).ravel()
    last = (last_a[:, None] + last_b[None, :]).ravel() + 1
    return GridSet.from_ranges(first, last, a.origin + b.origin, a.h)


def grid_minkowski_sum(sets):
    sets = list(sets)
    if not sets:
        raise InputError("grid_minkowski_sum needs at least one set")
    return reduce(grid_minkowski, sets)


def beta_points(source, beta_depth):
    """Points of K used as the fixed points β: cover endpoints at the given depth"""
    if isinstance(source, Construction):
        return cover(source, beta_depth).endpoints, source.root
    if isinstance(source, Ifs):
        return attractor_cover(source, beta_depth).endpoints, hull(source)
    if isinstance(source, Interval):
        return np.linspace(float(source.lo), float(source.hi), 2 ** beta_depth + 1).tolist(), source
    raise InputError(f"cannot take fixed points from {type(source).__name__}")


def grid_second_gen(f, alpha, h, beta_depth=None, max_iter=None, origin=None):
    """Iterate A -> ∪_β rasterize(αA + (1-α)β) with β over cover endpoints of K"""
    if not h > 0:
        raise InputError(f"grid step must be positive, got {h}")
    beta_depth = Config.BETA_DEPTH if beta_depth is None else beta_depth
    if beta_depth < 1:
        raise InputError(f"beta_depth must be >= 1, got {beta_depth}")
    max_iter = max_iter or Config.MAX_ITERATIONS
    betas, H = beta_points(f, beta_depth)
    alpha = float(alpha)
    shifts = (1 - alpha) * np.asarray([float(b) for b in betas])
    origin = float(H.lo) if origin is None else origin
    start = GridSet.from_union([H], h, origin)
    logger.debug("grid second-generation run with %d fixed points at step %g", len(betas), h)
    return _iterate(start, lambda current: current.scaled_shifts(alpha, shifts), max_iter,
                    "grid second-generation")


def _as_union(value):
    if isinstance(value, GridSet):
        return value.to_union()
    if isinstance(value, IntervalUnion):
        return value
    if isinstance(value, Interval):
        return IntervalUnion([value])
    return IntervalUnion.from_points(value)


def _directed(a, b):
    """sup over x in a of dist(x, b)"""
    gaps = b.gaps()
    mids = [(g.lo + g.hi) / 2 for g in gaps]
    worst = 0
    for iv in a:
        candidates = [iv.lo, iv.hi]
        start = bisect.bisect_left(mids, iv.lo)
        stop = bisect.bisect_right(mids, iv.hi)
        candidates.extend(mids[start:stop])
        for x in candidates:
            d = b.distance(x)
            if d > worst:
                worst = d
    return worst


def hausdorff(a, b):
    """Symmetric Hausdorff distance between unions of closed intervals (or grid sets)"""
    a, b = _as_union(a), _as_union(b)
    if a.is_empty or b.is_empty:
        raise UndefinedDistanceError("Hausdorff distance to an empty set is undefined")
    return max(_directed(a, b), _directed(b, a))
