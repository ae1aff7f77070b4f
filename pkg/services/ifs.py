"""
First-generation IFS service
Composition, fixed points, attractor hull and bounds, the ratio floor c and
the two-map Cantor construction
"""
import itertools
import logging
import math
from fractions import Fraction

from config import Config
from errors import DegenerateAttractorError, InputError, NonConvergenceError
from models.construction import IfsConstruction
from models.interval import Interval, IntervalUnion
from models.maps import Ifs, MapDescriptor
from models.numeric import tolerance

logger = logging.getLogger(__name__)


def compose_map(f, v):
    """ψ_v = ψ_{v1} ∘ ... ∘ ψ_{vn}; the empty word gives the identity"""
    result = MapDescriptor.identity(f.domain)
    for index in v:
        if not 0 <= index < len(f):
            raise InputError(f"map index {index} out of range for an IFS with {len(f)} maps")
        result = result.compose(f[index])
    return result


def fixed_point(m, tol=None, max_iter=None):
    """The unique x with ψ(x) = x"""
    if m.is_affine:
        if m.slope == 1:
            raise InputError("the identity has no unique fixed point")
        return m.offset / (1 - m.slope)
    tol = Config.FLOAT_TOLERANCE if tol is None else tol
    max_iter = max_iter or Config.FIXED_POINT_MAX_ITER
    # |ψ(x) - x| <= tol·(1 - δ) puts x within tol of the fixed point
    target = tol * (1 - float(m.delta))
    x = float(m.domain.midpoint)
    for _ in range(max_iter):
        nxt = m(x)
        if abs(nxt - x) <= target:
            return nxt
        x = nxt
    raise NonConvergenceError(f"fixed point of {m.label} did not converge in {max_iter} steps", last=x)


def fixed_points(f):
    return [fixed_point(psi) for psi in f]


def check_distinct_fixed_points(f):
    points = fixed_points(f)
    tol = tolerance(*points)
    if max(points) - min(points) <= tol:
        raise DegenerateAttractorError(
            f"all {len(f)} maps share the fixed point {points[0]}; the attractor is a single point")
    return points


def hull_candidates(f):
    """Fix ψ_i, Fix ψ_i∘ψ_j and ψ_i(Fix ψ_j): points of K_Ψ among which the hull endpoints lie"""
    points = fixed_points(f)
    candidates = list(points)
    for i, j in itertools.permutations(range(len(f)), 2):
        candidates.append(fixed_point(f[i].compose(f[j])))
        candidates.append(f[i](points[j]))
    return sorted(set(candidates))


def _smooth_hull(f):
    """Iterate J -> Conv(U(J)) from the domain until it stops moving"""
    current = f.domain
    target = Config.FLOAT_TOLERANCE * (1 - float(f.delta))
    for step in range(Config.FIXED_POINT_MAX_ITER):
        images = [psi.image(current) for psi in f]
        nxt = Interval(min(iv.lo for iv in images), max(iv.hi for iv in images))
        moved = max(abs(nxt.lo - current.lo), abs(nxt.hi - current.hi))
        current = nxt
        if moved <= target:
            logger.debug("smooth hull converged after %d steps", step + 1)
            return current
    raise NonConvergenceError("attractor hull iteration did not converge", last=current)


def hull(f):
    """[m_Ψ, M_Ψ] = Conv(K_Ψ)"""
    check_distinct_fixed_points(f)
    if f.is_affine:
        candidates = hull_candidates(f)
        return Interval(candidates[0], candidates[-1])
    return _smooth_hull(f)


def _first_index(f, value, source_points):
    """First map sending one of `source_points` (tried in order) onto `value`"""
    tol = tolerance(value, *source_points)
    for source in source_points:
        for index, psi in enumerate(f):
            if abs(psi(source) - value) <= tol:
                return index
    return None


def extreme_submaps(f):
    """Two maps of Ψ whose attractor has the same hull as K_Ψ"""
    h = hull(f)
    low = _first_index(f, h.lo, [h.lo, h.hi])
    high = _first_index(f, h.hi, [h.hi, h.lo])
    if low is None or high is None:
        # float noise only; fall back to the nearest hit
        def miss(index, value):
            psi = f[index]
            return min(abs(psi(h.lo) - value), abs(psi(h.hi) - value))
        low = min(range(len(f)), key=lambda i: miss(i, h.lo)) if low is None else low
        high = min(range(len(f)), key=lambda i: miss(i, h.hi)) if high is None else high
    if low == high:
        raise DegenerateAttractorError("a single map attains both hull endpoints")
    return f.select(sorted((low, high)))


def hutchinson_image(f, union):
    """U(A) = ∪ ψ(A) over the maps of f, for a union of intervals A"""
    return IntervalUnion.from_intervals(psi.image(iv) for psi in f for iv in union)


def attractor_cover(f, n):
    """U^n(hull): the outer intervals alone"""
    if n < 0:
        raise InputError(f"depth must be non-negative, got {n}")
    outer = IntervalUnion([hull(f)])
    for level in range(n):
        outer = hutchinson_image(f, outer)
        logger.debug("cover level %d: %d intervals", level + 1, len(outer))
    return outer


def attractor_bounds(f, n):
    """(U^n(fixed points), U^n(hull)): monotone inner points and outer intervals"""
    if n < 0:
        raise InputError(f"depth must be non-negative, got {n}")
    inner = sorted(set(fixed_points(f)))
    for level in range(n):
        inner = sorted({psi(x) for psi in f for x in inner})
        logger.debug("bounds level %d: %d points", level + 1, len(inner))
    return inner, attractor_cover(f, n)


def ratio_floor(f, domain=None):
    """c = σ·exp(−B·d(I)/(σ(1−δ))) with d(ψ_vi(J)) >= c·d(ψ_v(J)); exactly σ when B = 0"""
    sigma, delta, curvature = f.sigma, f.delta, f.curvature
    if curvature == 0:
        return sigma
    domain = domain or f.domain or hull(f)
    exponent = float(curvature) * float(domain.diameter) / (float(sigma) * (1 - float(delta)))
    return float(sigma) * math.exp(-exponent)


def two_map_construction(f):
    """Either the hull (when the two first-level images meet) or the Cantor construction"""
    if len(f) != 2:
        raise InputError(f"two_map_construction needs exactly two maps, got {len(f)}")
    h = hull(f)
    left, right = sorted((psi.image(h) for psi in f), key=lambda iv: iv.lo)
    if left.hi >= right.lo - tolerance(left.hi, right.lo):
        logger.info("first-level images %s and %s meet: attractor is the interval %s", left, right, h)
        return h
    return IfsConstruction(f, h)


def normalizer(source, target):
    """(scale, shift) of the increasing affine bijection source -> target"""
    scale = target.diameter / source.diameter
    return scale, target.lo - scale * source.lo


def rescale(f, target=None):
    """Conjugate every map so that the hull becomes `target` (default [-1, 1])"""
    target = target or Interval(Fraction(-1), Fraction(1))
    scale, shift = normalizer(hull(f), target)
    maps = tuple(psi.conjugate(scale, shift) for psi in f)
    domain = f.domain.affine(scale, shift) if f.domain is not None else None
    return Ifs(maps, domain)


def composite_fixed_points(f, length):
    """Fixed points of every composite ψ_v with |v| = length"""
    if length < 1:
        raise InputError(f"word length must be >= 1, got {length}")
    points = {fixed_point(compose_map(f, v)) for v in itertools.product(range(len(f)), repeat=length)}
    return sorted(points)
