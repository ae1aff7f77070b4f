"""
Word-indexed Cantor constructions
A construction assigns to every binary word w a closed interval I_w; the
children I_w0, I_w1 sit inside I_w, share its outer endpoints and leave
the open gap ]c_w, d_w[ between them.
"""
import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, NamedTuple, Optional

from config import Config
from errors import DepthUnavailableError, InputError, InvariantError
from models.interval import Interval
from models.maps import MapDescriptor
from models.numeric import exact, is_exact, tolerance

logger = logging.getLogger(__name__)

EMPTY_WORD = ()


def parse_word(text):
    """'0110' -> (0, 1, 1, 0); '' is the empty word"""
    text = (text or '').strip()
    if any(ch not in '01' for ch in text):
        raise InputError(f"binary word may only contain 0 and 1: {text!r}")
    return tuple(int(ch) for ch in text)


def format_word(word):
    return ''.join(str(letter) for letter in word) or '()'


def check_word(word):
    word = tuple(word)
    if any(letter not in (0, 1) for letter in word):
        raise InputError(f"binary word has letters outside {{0, 1}}: {word}")
    return word


@dataclass(frozen=True)
class Node:
    """A realised word, its interval and whatever the backing needs to split it"""
    word: tuple
    interval: Interval
    state: Any = None

    @property
    def depth(self):
        return len(self.word)


class IfsState(NamedTuple):
    composite: MapDescriptor
    letters: tuple


class Construction:
    """Base class for every backing; subclasses implement `_split`"""
    kind = 'abstract'
    # None means words of any length can be realised
    depth_limit: Optional[int] = None

    def __init__(self, root):
        if not root.lo < root.hi:
            raise InputError(f"construction root must have positive length: {root}")
        self._root = root

    # Backing hooks

    def _root_state(self):
        return None

    def _split(self, node):
        """Return ((I_w0, state0), (I_w1, state1))"""
        raise NotImplementedError

    @property
    def ratio_horizon(self):
        """Depth by which every distinct ratio is realised, when such a depth exists"""
        return None

    # Public API

    @property
    def root(self):
        return self._root

    @property
    def is_exact(self):
        return is_exact(self._root.lo, self._root.hi)

    def root_node(self):
        return Node(EMPTY_WORD, self._root, self._root_state())

    def check_depth(self, depth):
        if depth < 0:
            raise InputError(f"depth must be non-negative, got {depth}")
        if self.depth_limit is not None and depth > self.depth_limit:
            raise DepthUnavailableError(
                f"{self.kind} construction is realised only to depth {self.depth_limit}, asked for {depth}",
                depth=depth, depth_limit=self.depth_limit)

    def split(self, node):
        """The two children of a node, validated against the nesting invariant"""
        self.check_depth(node.depth + 1)
        (left, left_state), (right, right_state) = self._split(node)
        parent = node.interval
        tol = tolerance(parent.lo, parent.hi, left.lo, left.hi, right.lo, right.hi)
        if tol:
            tol *= 16 * max(1, abs(parent.lo), abs(parent.hi))
        if (abs(left.lo - parent.lo) > tol or abs(right.hi - parent.hi) > tol
                or not left.lo < left.hi < right.lo < right.hi):
            raise InvariantError(
                f"nesting violated at word {format_word(node.word)}: {parent} -> {left}, {right}")
        if tol:
            # outer endpoints are shared by definition; drop float noise
            left = Interval(parent.lo, left.hi)
            right = Interval(right.lo, parent.hi)
        return (Node(node.word + (0,), left, left_state),
                Node(node.word + (1,), right, right_state))

    def children(self, word):
        return self.split(self.node(word))

    def node(self, word):
        word = check_word(word)
        self.check_depth(len(word))
        current = self.root_node()
        for letter in word:
            current = self.split(current)[letter]
        return current

    def interval(self, word):
        return self.node(word).interval

    def levels(self, depth):
        """Yield the node lists of depths 0..depth, each in left-to-right order"""
        self.check_depth(depth)
        level = [self.root_node()]
        yield level
        for _ in range(depth):
            level = [child for node in level for child in self.split(node)]
            yield level

    def level(self, depth):
        for nodes in self.levels(depth):
            pass
        return nodes

    def __repr__(self):
        return f"{type(self).__name__}(root={self._root})"


class ExplicitConstruction(Construction):
    """A finite table word -> interval, realised up to the deepest complete level"""
    kind = 'explicit'

    def __init__(self, table, depth_limit=None):
        table = {check_word(w): iv for w, iv in table.items()}
        if EMPTY_WORD not in table:
            raise InputError("explicit construction needs the root interval")
        super().__init__(table[EMPTY_WORD])
        self._table = table
        complete = 0
        level = [EMPTY_WORD]
        while True:
            nxt = [w + (letter,) for w in level for letter in (0, 1)]
            if not all(w in table for w in nxt):
                break
            complete += 1
            level = nxt
        limit = Config.EXPLICIT_DEPTH_LIMIT if depth_limit is None else depth_limit
        self.depth_limit = min(complete, limit)
        self._validate()

    def _split(self, node):
        return (self._table[node.word + (0,)], None), (self._table[node.word + (1,)], None)

    def _validate(self):
        """Nesting and ratio sum for every realised word"""
        for nodes in self.levels(self.depth_limit):
            if not nodes or nodes[0].depth == self.depth_limit:
                continue
            for node in nodes:
                left, right = self.split(node)
                d = node.interval.diameter
                total = (left.interval.diameter + right.interval.diameter) / d
                if not total < 1 - tolerance(total):
                    raise InvariantError(f"ratio sum {total} >= 1 at word {format_word(node.word)}")

    @property
    def ratio_horizon(self):
        return self.depth_limit


class RuleConstruction(Construction):
    """Children produced by a callable rule(word, interval) -> (I_w0, I_w1)"""
    kind = 'rule'

    def __init__(self, root, rule, depth_limit=None):
        super().__init__(root)
        self._rule = rule
        self.depth_limit = depth_limit

    def _split(self, node):
        left, right = self._rule(node.word, node.interval)
        return (left, None), (right, None)


class RatioRule(Construction):
    """Self-similar dissection: every I_w keeps a left share r0 and a right share r1"""
    kind = 'ratio'

    def __init__(self, root, left, right):
        super().__init__(root)
        left, right = exact(left), exact(right)
        if not (0 < left and 0 < right and left + right < 1):
            raise InputError(f"ratios must be positive with sum < 1, got {left} and {right}")
        self.left = left
        self.right = right

    @classmethod
    def middle_third(cls, root=None):
        root = root or Interval(Fraction(0), Fraction(1))
        return cls(root, Fraction(1, 3), Fraction(1, 3))

    def _split(self, node):
        iv = node.interval
        d = iv.diameter
        return ((Interval(iv.lo, iv.lo + self.left * d), None),
                (Interval(iv.hi - self.right * d, iv.hi), None))

    @property
    def ratio_horizon(self):
        return 1


class IfsConstruction(Construction):
    """I_w = ψ_{g(w)}(hull) for a two-map IFS, children ordered left to right

    With a prefix map ψ_v the construction is the one of ψ_v(K).
    """
    kind = 'ifs'

    def __init__(self, ifs, hull, prefix=None, prefix_letters=()):
        if len(ifs) != 2:
            raise InputError(f"IFS-backed constructions need exactly two maps, got {len(ifs)}")
        self.ifs = ifs
        self.hull = hull
        self.prefix = prefix or MapDescriptor.identity(hull)
        self.prefix_letters = tuple(prefix_letters)
        super().__init__(self.prefix.image(hull))

    def _root_state(self):
        return IfsState(self.prefix, self.prefix_letters)

    def _split(self, node):
        composite, letters = node.state
        pieces = []
        for index, psi in enumerate(self.ifs):
            inner = composite.compose(psi)
            pieces.append((inner.image(self.hull), IfsState(inner, letters + (index,))))
        pieces.sort(key=lambda piece: piece[0].lo)
        return pieces[0], pieces[1]

    @property
    def ratio_horizon(self):
        return 1 if self.ifs.is_affine else None


class AffineImage(Construction):
    """Image of a construction under x -> scale*x + shift; a negative scale swaps letters"""
    kind = 'affine-image'

    def __init__(self, base, scale, shift=0):
        if scale == 0:
            raise InputError("affine image with zero scale")
        self.base = base
        self.scale = scale
        self.shift = shift
        self.depth_limit = base.depth_limit
        super().__init__(base.root.affine(scale, shift))

    def _root_state(self):
        return self.base.root_node()

    def _split(self, node):
        left, right = self.base.split(node.state)
        if self.scale < 0:
            left, right = right, left
        return ((left.interval.affine(self.scale, self.shift), left),
                (right.interval.affine(self.scale, self.shift), right))

    @property
    def ratio_horizon(self):
        return self.base.ratio_horizon


class Subtree(Construction):
    """C(I_w) = I_w ∩ C, relabelled so that w becomes the empty word"""
    kind = 'subtree'

    def __init__(self, base, word):
        self.base = base
        self.prefix = check_word(word)
        self._start = base.node(self.prefix)
        if base.depth_limit is not None:
            self.depth_limit = base.depth_limit - len(self.prefix)
        super().__init__(self._start.interval)

    def _root_state(self):
        return self._start

    def _split(self, node):
        left, right = self.base.split(node.state)
        return (left.interval, left), (right.interval, right)

    @property
    def ratio_horizon(self):
        return self.base.ratio_horizon
