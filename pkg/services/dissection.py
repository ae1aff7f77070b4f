"""
Dissection service
Covers, ratios, gaps and ulbd certificates of word-indexed constructions
"""
import logging
from dataclasses import dataclass

from config import Config
from errors import InputError, UndefinedRatioError
from models.construction import EMPTY_WORD, Subtree, check_word
from models.interval import IntervalUnion, OpenInterval
from models.numeric import tolerance

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class UlbdCertificate:
    bound: object
    depth_checked: int
    exhaustive: bool
    witness: tuple = EMPTY_WORD

    def to_dict(self):
        return {
            'bound': str(self.bound),
            'depth_checked': self.depth_checked,
            'exhaustive': self.exhaustive,
        }


def cover(c, n):
    """C_n: the 2^n intervals I_w with |w| = n, left to right"""
    return IntervalUnion(node.interval for node in c.level(n))


def dissection_ratio(c, w):
    w = check_word(w)
    if not w:
        raise UndefinedRatioError("the dissection ratio of the root is undefined")
    parent = c.node(w[:-1])
    child = c.split(parent)[w[-1]]
    return child.interval.diameter / parent.interval.diameter


def gap(c, w):
    """]c_w, d_w[ between the two children of I_w"""
    left, right = c.children(w)
    return OpenInterval(left.interval.hi, right.interval.lo)


def ratios(c, depth):
    """Yield (word, r_w) for every word of length 1..depth"""
    for nodes in c.levels(depth - 1):
        for node in nodes:
            d = node.interval.diameter
            for child in c.split(node):
                yield child.word, child.interval.diameter / d


def gaps(c, depth):
    """(word, gap) for every word of length < depth, in breadth-first order"""
    found = []
    if depth <= 0:
        return found
    for nodes in c.levels(depth - 1):
        for node in nodes:
            left, right = c.split(node)
            found.append((node.word, OpenInterval(left.interval.hi, right.interval.lo)))
    return found


def max_gap(c, depth=None):
    """(widest gap over words of length < depth, exhaustive)

    Exhaustive means no deeper gap can be wider: every deeper gap sits inside
    some depth-`depth` interval, so it is enough that the widest of those
    is no wider than the gap found. A construction realised only to a
    finite depth is scanned to that depth and has no deeper gaps.
    """
    depth = Config.CERTIFICATE_DEPTH if depth is None else depth
    if depth < 1:
        raise InputError(f"max_gap needs depth >= 1, got {depth}")
    limited = c.depth_limit is not None and depth >= c.depth_limit
    if limited:
        depth = c.depth_limit
        if depth < 1:
            raise InputError("construction has no realised dissection")
    widest = None
    deepest = None
    for nodes in c.levels(depth):
        if nodes[0].depth == depth:
            deepest = max(node.interval.diameter for node in nodes)
            break
        for node in nodes:
            left, right = c.split(node)
            width = right.interval.lo - left.interval.hi
            if widest is None or width > widest:
                widest = width
    exhaustive = limited or deepest <= widest
    logger.debug("max gap %s to depth %d (exhaustive=%s)", widest, depth, exhaustive)
    return widest, exhaustive


def ulbd_bound(c, depth=None):
    """Smallest realised ratio over words of length <= depth"""
    depth = Config.CERTIFICATE_DEPTH if depth is None else depth
    if depth < 1:
        raise InputError(f"ulbd_bound needs depth >= 1, got {depth}")
    if c.depth_limit is not None:
        depth = min(depth, c.depth_limit)
        if depth < 1:
            raise InputError("construction has no realised dissection")
    bound, witness = None, EMPTY_WORD
    for word, r in ratios(c, depth):
        if bound is None or r < bound:
            bound, witness = r, word
    horizon = c.ratio_horizon
    exhaustive = ((c.depth_limit is not None and depth >= c.depth_limit)
                  or (horizon is not None and depth >= horizon))
    logger.debug("ulbd bound %s at depth %d (exhaustive=%s)", bound, depth, exhaustive)
    return UlbdCertificate(bound, depth, exhaustive, witness)


def subtree(c, w):
    w = check_word(w)
    if not w:
        return c
    return Subtree(c, w)


def diameter_decay_holds(c, a, depth=None):
    """d(I_w) <= (1 - a)^|w| d(I_root) for all |w| <= depth"""
    depth = Config.CERTIFICATE_DEPTH if depth is None else depth
    root = c.root.diameter
    factor = 1
    for nodes in c.levels(depth):
        limit = factor * root
        slack = tolerance(limit, a)
        if any(node.interval.diameter > limit + slack for node in nodes):
            return False
        factor *= (1 - a)
    return True
