"""
Uniform-grid sets for the brute-force oracle
Cell k is [origin + k*h, origin + (k+1)*h]; rasterisation always rounds outward
"""
from dataclasses import dataclass

import numpy as np

from errors import InputError, ResolutionError
from models.interval import Interval, IntervalUnion

# Endpoints within this fraction of a cell from a grid line snap onto it
SNAP = 1e-9


def cells_from_ranges(first, last):
    """Sorted unique cells covered by the inclusive index ranges [first_i, last_i]"""
    first = np.asarray(first, dtype=np.int64)
    last = np.asarray(last, dtype=np.int64)
    if first.size == 0:
        return np.empty(0, dtype=np.int64)
    offset = first.min()
    marks = np.zeros(int(last.max() - offset) + 2, dtype=np.int64)
    np.add.at(marks, first - offset, 1)
    np.add.at(marks, last - offset + 1, -1)
    occupied = np.cumsum(marks)[:-1] > 0
    return np.nonzero(occupied)[0].astype(np.int64) + offset


def rasterize(los, his, origin, h):
    """Cell index ranges outer-covering the closed intervals [lo_i, hi_i]"""
    los = (np.asarray(los, dtype=float) - origin) / h
    his = (np.asarray(his, dtype=float) - origin) / h
    first = np.floor(los + SNAP).astype(np.int64)
    last = np.ceil(his - SNAP).astype(np.int64) - 1
    return first, np.maximum(first, last)


@dataclass(frozen=True, eq=False)
class GridSet:
    origin: float
    h: float
    cells: np.ndarray

    def __post_init__(self):
        if not self.h > 0:
            raise InputError(f"grid step must be positive, got {self.h}")

    @classmethod
    def from_ranges(cls, first, last, origin, h):
        return cls(float(origin), float(h), cells_from_ranges(first, last))

    @classmethod
    def from_pairs(cls, pairs, h, origin=0.0):
        pairs = list(pairs)
        los = [float(lo) for lo, _ in pairs]
        his = [float(hi) for _, hi in pairs]
        first, last = rasterize(los, his, origin, h)
        return cls.from_ranges(first, last, origin, h)

    @classmethod
    def from_union(cls, union, h, origin=0.0):
        return cls.from_pairs(((iv.lo, iv.hi) for iv in union), h, origin)

    @classmethod
    def from_points(cls, points, h, origin=0.0):
        return cls.from_pairs(((p, p) for p in points), h, origin)

    def __len__(self):
        return int(self.cells.size)

    def __eq__(self, other):
        if not isinstance(other, GridSet):
            return NotImplemented
        return (self.h == other.h and self.origin == other.origin
                and np.array_equal(self.cells, other.cells))

    @property
    def is_empty(self):
        return self.cells.size == 0

    def check_compatible(self, other):
        if self.h != other.h or self.origin != other.origin:
            raise ResolutionError(
                f"grids differ: step {self.h} at {self.origin} vs step {other.h} at {other.origin}",
                h=self.h, other_h=other.h)

    def runs(self):
        """Maximal runs of consecutive cells as inclusive (first, last) index arrays"""
        if self.cells.size == 0:
            empty = np.empty(0, dtype=np.int64)
            return empty, empty
        breaks = np.nonzero(np.diff(self.cells) > 1)[0]
        first = np.concatenate(([self.cells[0]], self.cells[breaks + 1]))
        last = np.concatenate((self.cells[breaks], [self.cells[-1]]))
        return first, last

    def run_bounds(self):
        """Runs as real (lo, hi) arrays"""
        first, last = self.runs()
        return self.origin + first * self.h, self.origin + (last + 1) * self.h

    def to_union(self):
        los, his = self.run_bounds()
        return IntervalUnion([Interval(float(lo), float(hi)) for lo, hi in zip(los, his)])

    def union(self, other):
        self.check_compatible(other)
        return GridSet(self.origin, self.h, np.union1d(self.cells, other.cells))

    def issubset(self, other):
        self.check_compatible(other)
        return bool(np.all(np.isin(self.cells, other.cells)))

    def empty_cells_within(self, interval):
        """Unoccupied cells among those lying inside the closed interval"""
        first = int(np.ceil((float(interval.lo) - self.origin) / self.h - SNAP))
        last = int(np.floor((float(interval.hi) - self.origin) / self.h + SNAP)) - 1
        if last < first:
            return np.empty(0, dtype=np.int64)
        return np.setdiff1d(np.arange(first, last + 1, dtype=np.int64), self.cells)

    def map_image(self, psi):
        """Outer rasterisation of ψ(A), run by run (ψ is monotone)"""
        los, his = self.run_bounds()
        images = [psi.image(Interval(float(lo), float(hi))) for lo, hi in zip(los, his)]
        return GridSet.from_pairs(((iv.lo, iv.hi) for iv in images), self.h, self.origin)

    def scaled_shifts(self, scale, shifts):
        """Outer rasterisation of ⋃_t (scale·A + t) over the given shifts"""
        los, his = self.run_bounds()
        a, b = scale * los, scale * his
        lo, hi = np.minimum(a, b), np.maximum(a, b)
        shifts = np.asarray(shifts, dtype=float)
        all_lo = (lo[None, :] + shifts[:, None]).ravel()
        all_hi = (hi[None, :] + shifts[:, None]).ravel()
        first, last = rasterize(all_lo, all_hi, self.origin, self.h)
        return GridSet.from_ranges(first, last, self.origin, self.h)
