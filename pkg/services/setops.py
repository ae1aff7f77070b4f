"""
Cantor-set calculus
Union of two separated ulbd sets, the sum-subset construction, the a_m
recursion, the Cabrelli interval criterion, the sandwich extension and the
geometric count bound.
"""
import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from config import Config
from errors import CertificateError, InputError, OverlapError
from models.construction import AffineImage, Construction, Subtree
from models.interval import Interval
from models.numeric import is_exact, tolerance
from services.dissection import cover, max_gap, ulbd_bound

logger = logging.getLogger(__name__)

CERTIFIED = 'certified-interval'
NOT_CERTIFIED = 'not-certified'

FIRST, SECOND, THIRD, FOURTH = 'first', 'second', 'third', 'fourth'


def third(*values):
    """1/3 in the numeric mode of the given values"""
    return Fraction(1, 3) if is_exact(*values) else 1 / 3


# Constants

def check_separated(c1, c2):
    if not c1.root.hi < c2.root.lo:
        raise OverlapError(f"sets are not separated: max C1 = {c1.root.hi} >= min C2 = {c2.root.lo}",
                           max_first=str(c1.root.hi), min_second=str(c2.root.lo))


def lemma7_a(c1, c2, a1, a2):
    """Dissection bound of the union of two separated ulbd sets, before aprime"""
    check_separated(c1, c2)
    lo1, hi1 = c1.root.lo, c1.root.hi
    lo2, hi2 = c2.root.lo, c2.root.hi
    return min((hi1 - lo1) / (lo2 - lo1), (hi2 - lo2) / (hi2 - hi1), a1, a2)


def aprime(a):
    """a' = min(a/2, a^2/(a+1))"""
    if not 0 < a <= 1:
        raise InputError(f"aprime needs 0 < a <= 1, got {a}")
    return min(a / 2, a * a / (a + 1))


def a_m(a, m):
    """a_1 = a, a_{k+1} = aprime(min(a, a_k))"""
    if not 0 < a < 1:
        raise InputError(f"a_m needs 0 < a < 1, got {a}")
    if m < 1:
        raise InputError(f"a_m needs m >= 1, got {m}")
    bound = a
    for _ in range(m - 1):
        bound = aprime(min(a, bound))
    return bound


def cabrelli_value(a, m):
    """(m-1)·a²/(1-a)³ + a/(1-a)"""
    return (m - 1) * a * a / (1 - a) ** 3 + a / (1 - a)


def cabrelli_check(a, m):
    if not a > 0:
        raise InputError(f"cabrelli_check needs a > 0, got {a}")
    if m < 1:
        raise InputError(f"cabrelli_check needs m >= 1, got {m}")
    return cabrelli_value(min(a, third(a)), m) >= 1


def geometric_count(A1, A2, a):
    """n = H·m + m summands with diameters in [A1, A2] whose sum is an interval"""
    if not 0 < A1 <= A2:
        raise InputError(f"geometric_count needs 0 < A1 <= A2, got {A1}, {A2}")
    if not 0 < a < 1:
        raise InputError(f"geometric_count needs 0 < a < 1, got {a}")
    ratio = Fraction(A2) / Fraction(A1) if is_exact(A1, A2) else A2 / A1
    m = math.floor(ratio) + 1
    b = min(a_m(a, m), third(a))
    need = 1 - b / (1 - b)
    per_summand = b * b / (1 - b) ** 3
    H = max(0, math.ceil(need / per_summand))
    logger.debug("geometric_count: m=%d, b=%s, H=%d", m, b, H)
    return H * m + m


# Union (two separated sets)

@dataclass(frozen=True)
class UnionPlan:
    n_bar: int
    mirrored: bool
    a: object
    a_prime: object

    def case(self, word):
        """Which branch of the union table realises this word"""
        word = tuple(word)
        if self.mirrored:
            word = tuple(1 - letter for letter in word)
        n = self.n_bar
        if len(word) <= n and all(letter == 1 for letter in word):
            return FIRST
        if len(word) > n and all(letter == 1 for letter in word[:n]):
            return SECOND if word[n] == 0 else THIRD
        return FOURTH

    def to_dict(self):
        return {'n_bar': self.n_bar, 'mirrored': self.mirrored,
                'a': str(self.a), 'a_prime': str(self.a_prime)}


class _OrientedUnion(Construction):
    """Union table for left set wider than right; state is (case, node, spine length)"""
    kind = 'union-oriented'

    def __init__(self, left, right, n_bar):
        self.left = left
        self.right = right
        self.n_bar = n_bar
        super().__init__(Interval(left.root.lo, right.root.hi))

    def _root_state(self):
        return FIRST, self.left.root_node(), 0

    def _split(self, node):
        case, base, n = node.state
        if case == FIRST:
            first, second = self.left.split(base)
            if n < self.n_bar:
                return ((first.interval, (FOURTH, first, None)),
                        (Interval(second.interval.lo, self.right.root.hi), (FIRST, second, n + 1)))
            right_root = self.right.root_node()
            return ((base.interval, (SECOND, base, None)),
                    (right_root.interval, (THIRD, right_root, None)))
        source = self.right if case == THIRD else self.left
        first, second = source.split(base)
        return (first.interval, (case, first, None)), (second.interval, (case, second, None))


class UnionConstruction(Construction):
    """C¹ ∪ C² for max C¹ < min C², with every ratio >= aprime(lemma7_a)"""
    kind = 'union'

    def __init__(self, c1, c2, a1=None, a2=None):
        a1 = ulbd_bound(c1).bound if a1 is None else a1
        a2 = ulbd_bound(c2).bound if a2 is None else a2
        a = lemma7_a(c1, c2, a1, a2)
        self.first = c1
        self.second = c2
        mirrored = c1.root.diameter < c2.root.diameter
        if mirrored:
            left, right = AffineImage(c2, -1), AffineImage(c1, -1)
        else:
            left, right = c1, c2
        n_bar = self._crossover(left, right)
        body = _OrientedUnion(left, right, n_bar)
        self._body = AffineImage(body, -1) if mirrored else body
        self.plan = UnionPlan(n_bar, mirrored, a, aprime(a))
        depth_limits = [c.depth_limit for c in (c1, c2) if c.depth_limit is not None]
        if depth_limits:
            self.depth_limit = min(depth_limits)
        super().__init__(self._body.root)
        logger.debug("union on %s: n_bar=%d mirrored=%s a=%s", self.root, n_bar, mirrored, a)

    @staticmethod
    def _crossover(left, right):
        """Last n with d(I¹_{1^n}) >= d(I²)"""
        target = right.root.diameter
        node = left.root_node()
        n = 0
        while True:
            nxt = left.split(node)[1]
            if nxt.interval.diameter < target:
                return n
            node, n = nxt, n + 1

    @property
    def ratio_bound(self):
        return self.plan.a_prime

    @property
    def ratio_horizon(self):
        h1, h2 = self.first.ratio_horizon, self.second.ratio_horizon
        if h1 is None or h2 is None:
            return None
        return self.plan.n_bar + 2 + max(h1, h2)

    def _root_state(self):
        return self._body.root_node()

    def _split(self, node):
        first, second = self._body.split(node.state)
        return (first.interval, first), (second.interval, second)


def union_construct(c1, c2, a1=None, a2=None):
    """Union of two separated constructions; missing bounds come from ulbd certificates"""
    check_separated(c1, c2)
    bounds = []
    for c, a in ((c1, a1), (c2, a2)):
        if a is None:
            certificate = ulbd_bound(c)
            if not certificate.exhaustive:
                logger.warning("ulbd bound %s of %r checked to depth %d only",
                               certificate.bound, c, certificate.depth_checked)
            a = certificate.bound
        bounds.append(a)
    return UnionConstruction(c1, c2, *bounds)


# Sum (sum-subset construction)

class SumConstruction(Construction):
    """A ulbd Cantor set inside C¹ + C² with the same hull

    I_{0^n} = I¹_{0^n} + I²_{0^n}; the word 0^n 1 w' is I(n)_{w'}, where
    I(n) is the union construction of the auxiliary sets A¹_n and A²_n.
    """
    kind = 'sum'

    def __init__(self, c1, c2, a):
        self.first = c1
        self.second = c2
        self.bound = a
        limits = [c.depth_limit for c in (c1, c2) if c.depth_limit is not None]
        if limits:
            self.depth_limit = min(limits)
        super().__init__(c1.root + c2.root)

    @property
    def ratio_bound(self):
        return aprime(self.bound)

    def _root_state(self):
        return 'spine', self.first.root_node(), self.second.root_node()

    def auxiliary(self, n1, n2):
        """(A¹_n, A²_n) for the spine nodes I¹_{0^n}, I²_{0^n}"""
        z1, o1 = self.first.split(n1)
        z2, o2 = self.second.split(n2)
        gap1 = o1.interval.lo - z1.interval.hi
        gap2 = o2.interval.lo - z2.interval.hi
        if gap1 <= gap2:
            a_left = AffineImage(Subtree(self.second, o2.word), 1, z1.interval.hi)
            a_right = AffineImage(Subtree(self.first, o1.word), 1, o2.interval.hi)
        else:
            a_left = AffineImage(Subtree(self.first, o1.word), 1, z2.interval.hi)
            a_right = AffineImage(Subtree(self.second, o2.word), 1, o1.interval.hi)
        return a_left, a_right

    def _split(self, node):
        tag = node.state[0]
        if tag == 'branch':
            _, union, inner = node.state
            first, second = union.split(inner)
            return (first.interval, ('branch', union, first)), (second.interval, ('branch', union, second))
        _, n1, n2 = node.state
        z1, _ = self.first.split(n1)
        z2, _ = self.second.split(n2)
        a_left, a_right = self.auxiliary(n1, n2)
        union = UnionConstruction(a_left, a_right, self.bound, self.bound)
        return ((z1.interval + z2.interval, ('spine', z1, z2)),
                (union.root, ('branch', union, union.root_node())))


def sum_subset_construct(cs, a, depth=None):
    """Fold the two-set construction over the list; the result has ratios >= a_m(a, m)"""
    cs = list(cs)
    if not cs:
        raise InputError("sum_subset_construct needs at least one construction")
    for index, c in enumerate(cs):
        certificate = ulbd_bound(c, depth)
        if certificate.bound < a - tolerance(certificate.bound, a):
            raise CertificateError(
                f"construction {index} has a ratio {certificate.bound} below a = {a}",
                index=index, bound=str(certificate.bound))
    result, bound = cs[0], a
    for c in cs[1:]:
        b = min(a, bound)
        result = SumConstruction(result, c, b)
        bound = aprime(b)
    return result


# Interval certificates

@dataclass(frozen=True)
class IntervalCertificate:
    verdict: str
    a: object
    m: int
    condition_value: object
    interval: Optional[Interval] = None
    reason: str = ''
    min_diameter: object = None
    max_gap: object = None
    details: dict = field(default_factory=dict, compare=False)

    @property
    def certified(self):
        return self.verdict == CERTIFIED

    def to_dict(self):
        return {
            'verdict': self.verdict,
            'a': str(self.a),
            'm': self.m,
            'condition_value': str(self.condition_value),
            'interval': str(self.interval) if self.interval else None,
            'reason': self.reason,
            'min_diameter': str(self.min_diameter),
            'max_gap': str(self.max_gap),
        }


def _summand_facts(c, depth, cache):
    """(ulbd certificate, widest gap, gap scan exhaustive) of one summand"""
    if cache is not None and c in cache:
        return cache[c]
    width, done = max_gap(c, depth)
    facts = ulbd_bound(c, depth), width, done
    if cache is not None:
        cache[c] = facts
    return facts


def sum_is_interval(cs, a, depth=None, cache=None):
    """Certify C¹ + ... + C^m = [Σ min, Σ max] through the Cabrelli criterion

    `cache` (a dict keyed by construction) lets callers checking many
    combinations of the same pieces scan every piece once.
    """
    cs = list(cs)
    if not cs:
        raise InputError("sum_is_interval needs at least one construction")
    m = len(cs)
    a_used = min(a, third(a))
    value = cabrelli_value(a_used, m)
    hull = Interval(sum((c.root.lo for c in cs[1:]), cs[0].root.lo),
                    sum((c.root.hi for c in cs[1:]), cs[0].root.hi))
    diameters = [c.root.diameter for c in cs]
    facts = [_summand_facts(c, depth, cache) for c in cs]
    widest = max(width for _, width, _ in facts)
    exhaustive = all(done for _, _, done in facts)

    def verdict(ok, reason):
        return IntervalCertificate(CERTIFIED if ok else NOT_CERTIFIED, a_used, m, value,
                                   hull if ok else None, reason, min(diameters), widest)

    if value < 1:
        return verdict(False, f"Cabrelli condition fails: {value} < 1")
    for index, (certificate, _, _) in enumerate(facts):
        if certificate.bound < a - tolerance(certificate.bound, a):
            return verdict(False, f"construction {index} has ratio {certificate.bound} below a = {a}")
        if not certificate.exhaustive:
            return verdict(False, f"ulbd bound of construction {index} is not exhaustive")
    if not exhaustive:
        return verdict(False, "maximal gap scan is not exhaustive")
    if not min(diameters) > widest:
        return verdict(False, f"a translate may fit in a gap: min diameter {min(diameters)} <= max gap {widest}")
    logger.debug("sum of %d sets certified as %s", m, hull)
    return verdict(True, '')


def sandwich_extension(certificate, constructions, sets, depth=None):
    """Carry a certified verdict over to sets D^i with C^i ⊆ D^i ⊆ I^i and equal extremes

    `sets` are IntervalUnions; C^i ⊆ D^i is checked on the endpoints of the
    depth-`depth` cover, which all belong to C^i.
    """
    depth = Config.CERTIFICATE_DEPTH if depth is None else depth

    def refuse(reason):
        return IntervalCertificate(NOT_CERTIFIED, certificate.a, certificate.m,
                                   certificate.condition_value, None, reason,
                                   certificate.min_diameter, certificate.max_gap)

    if not certificate.certified:
        return refuse(certificate.reason or "the Cantor sets are not certified")
    if len(constructions) != len(sets):
        raise InputError(f"{len(constructions)} constructions but {len(sets)} sandwich sets")
    for index, (c, d) in enumerate(zip(constructions, sets)):
        if d.is_empty:
            return refuse(f"set {index} is empty")
        if d.lo != c.root.lo or d.hi != c.root.hi:
            return refuse(f"set {index} has extremes [{d.lo}, {d.hi}], not those of {c.root}")
        points = cover(c, depth).endpoints
        if not all(d.contains(x) for x in points):
            return refuse(f"set {index} misses points of its Cantor set")
    return certificate
