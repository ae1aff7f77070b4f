"""
Closed intervals, open gaps and finite unions of closed intervals
These are the atoms every other module does its set arithmetic with
"""
import bisect
from dataclasses import dataclass

from errors import BudgetError, InputError
from models.numeric import format_number


@dataclass(frozen=True)
class Interval:
    """Closed interval [lo, hi] with lo <= hi"""
    lo: object
    hi: object

    def __post_init__(self):
        if self.lo > self.hi:
            raise InputError(f"interval with lo > hi: [{self.lo}, {self.hi}]")

    @property
    def diameter(self):
        return self.hi - self.lo

    @property
    def midpoint(self):
        return (self.lo + self.hi) / 2

    def contains(self, x):
        return self.lo <= x <= self.hi

    def contains_interval(self, other):
        return self.lo <= other.lo and other.hi <= self.hi

    def __add__(self, other):
        if isinstance(other, Interval):
            return Interval(self.lo + other.lo, self.hi + other.hi)
        return Interval(self.lo + other, self.hi + other)

    def affine(self, scale, shift=0):
        """Image under x -> scale * x + shift"""
        a = scale * self.lo + shift
        b = scale * self.hi + shift
        return Interval(a, b) if a <= b else Interval(b, a)

    def __str__(self):
        return f"[{format_number(self.lo)}, {format_number(self.hi)}]"


@dataclass(frozen=True)
class OpenInterval:
    """Open interval ]lo, hi[, used for gaps and for N_epsilon pieces"""
    lo: object
    hi: object

    @property
    def width(self):
        return self.hi - self.lo

    def contains(self, x):
        return self.lo < x < self.hi

    def meets(self, interval):
        """True when the closed interval has a point inside this open one"""
        return interval.lo < self.hi and self.lo < interval.hi

    def __str__(self):
        return f"]{format_number(self.lo)}, {format_number(self.hi)}["


def merge_pairs(pairs, tolerance=0):
    """Sort (lo, hi) pairs and merge overlaps or gaps not wider than tolerance

    Returns the merged pairs and how many genuine gaps (width > 0) were
    swallowed by the tolerance.
    """
    ordered = sorted(pairs)
    merged = []
    swallowed = 0
    for lo, hi in ordered:
        if merged and lo - merged[-1][1] <= tolerance:
            if lo > merged[-1][1]:
                swallowed += 1
            if hi > merged[-1][1]:
                merged[-1][1] = hi
        else:
            merged.append([lo, hi])
    return [(lo, hi) for lo, hi in merged], swallowed


class IntervalUnion:
    """Sorted, pairwise separated closed intervals

    Consecutive intervals are separated by more than `merge_tolerance`.
    `merged_gaps` counts the gaps that were narrower than that and got merged.
    """

    __slots__ = ('intervals', 'merge_tolerance', 'merged_gaps', '_los')

    def __init__(self, intervals=(), merge_tolerance=0, merged_gaps=0):
        self.intervals = tuple(intervals)
        self.merge_tolerance = merge_tolerance
        self.merged_gaps = merged_gaps
        self._los = [iv.lo for iv in self.intervals]

    @classmethod
    def from_pairs(cls, pairs, merge_tolerance=0):
        merged, swallowed = merge_pairs(pairs, merge_tolerance)
        return cls((Interval(lo, hi) for lo, hi in merged), merge_tolerance, swallowed)

    @classmethod
    def from_intervals(cls, intervals, merge_tolerance=0):
        return cls.from_pairs(((iv.lo, iv.hi) for iv in intervals), merge_tolerance)

    @classmethod
    def from_points(cls, points):
        return cls.from_pairs((p, p) for p in points)

    def __len__(self):
        return len(self.intervals)

    def __iter__(self):
        return iter(self.intervals)

    def __getitem__(self, index):
        return self.intervals[index]

    def __eq__(self, other):
        if not isinstance(other, IntervalUnion):
            return NotImplemented
        return self.intervals == other.intervals

    def __hash__(self):
        return hash(self.intervals)

    def __repr__(self):
        return f"IntervalUnion({', '.join(str(iv) for iv in self.intervals)})"

    @property
    def is_empty(self):
        return not self.intervals

    @property
    def lo(self):
        return self.intervals[0].lo

    @property
    def hi(self):
        return self.intervals[-1].hi

    @property
    def hull(self):
        return Interval(self.lo, self.hi)

    @property
    def endpoints(self):
        points = []
        for iv in self.intervals:
            points.append(iv.lo)
            if iv.hi != iv.lo:
                points.append(iv.hi)
        return points

    @property
    def total_length(self):
        return sum((iv.diameter for iv in self.intervals), 0)

    def gaps(self):
        return [OpenInterval(left.hi, right.lo)
                for left, right in zip(self.intervals, self.intervals[1:])]

    @property
    def gap_length(self):
        return sum((g.width for g in self.gaps()), 0)

    def _locate(self, x):
        """Index of the last interval whose lo is <= x, or -1"""
        return bisect.bisect_right(self._los, x) - 1

    def contains(self, x):
        i = self._locate(x)
        return i >= 0 and x <= self.intervals[i].hi

    def distance(self, x):
        """Distance from the point x to the union"""
        if not self.intervals:
            raise InputError("distance to an empty union is undefined")
        i = self._locate(x)
        best = None
        if i >= 0:
            iv = self.intervals[i]
            best = 0 if x <= iv.hi else x - iv.hi
        if i + 1 < len(self.intervals):
            right = self.intervals[i + 1].lo - x
            best = right if best is None else min(best, right)
        return best

    def covers(self, interval):
        """True when the closed interval lies inside a single component"""
        i = self._locate(interval.lo)
        return i >= 0 and interval.hi <= self.intervals[i].hi

    def issubset(self, other, slack=0):
        for iv in self.intervals:
            if slack:
                iv = Interval(iv.lo + slack, iv.hi - slack) if iv.diameter > 2 * slack else Interval(iv.midpoint, iv.midpoint)
            if not other.covers(iv):
                return False
        return True

    def meets(self, gap):
        """True when some component has a point inside the open interval"""
        return any(gap.meets(iv) for iv in self.intervals)

    def affine(self, scale, shift=0):
        return IntervalUnion(sorted((iv.affine(scale, shift) for iv in self.intervals),
                                    key=lambda iv: iv.lo),
                             self.merge_tolerance, self.merged_gaps)

    def union(self, other, merge_tolerance=None):
        tol = self.merge_tolerance if merge_tolerance is None else merge_tolerance
        return IntervalUnion.from_intervals(self.intervals + other.intervals, tol)

    def fattened(self, radius):
        """Closed radius-neighbourhood of the union"""
        return IntervalUnion.from_pairs(((iv.lo - radius, iv.hi + radius) for iv in self.intervals),
                                        self.merge_tolerance)

    @property
    def narrowest(self):
        return min(iv.diameter for iv in self.intervals)

    @property
    def widest_gap(self):
        return max((g.width for g in self.gaps()), default=0)

    def minkowski(self, other, merge_tolerance=None, budget=None):
        """Minkowski sum {x + y}, merged with the given tolerance

        A closed interval plus a set whose gaps are all no wider than it is
        an interval, so a summand whose gaps are bridged by every component
        of the other is replaced by its hull.
        """
        tol = self.merge_tolerance if merge_tolerance is None else merge_tolerance
        left, right = self, other
        if left.intervals and right.intervals:
            if len(right) > 1 and left.narrowest >= right.widest_gap:
                right = IntervalUnion([right.hull])
            elif len(left) > 1 and right.narrowest >= left.widest_gap:
                left = IntervalUnion([left.hull])
        size = len(left.intervals) * len(right.intervals)
        if budget is not None and size > budget:
            raise BudgetError(f"Minkowski sum of {len(left)} x {len(right)} intervals exceeds budget {budget}",
                              partial=self, size=size, budget=budget)
        pairs = [(a.lo + b.lo, a.hi + b.hi) for a in left.intervals for b in right.intervals]
        result = IntervalUnion.from_pairs(pairs, tol)
        result.merged_gaps += self.merged_gaps + other.merged_gaps
        return result
