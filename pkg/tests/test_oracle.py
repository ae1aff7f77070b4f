from fractions import Fraction as F

import numpy as np
import pytest

from errors import BudgetError, InputError, ResolutionError, UndefinedDistanceError
from models import GridSet, Interval, IntervalUnion, RatioRule
from services.dissection import cover
from services.ifs import attractor_bounds
from services.oracle import (beta_points, grid_attractor, grid_minkowski, grid_minkowski_sum,
                             grid_second_gen, hausdorff)
from services.setops import sum_is_interval
from tests.conftest import SYMMETRIC

H_FINE = 3.0 ** -8


def cover_of(f, depth=8):
    return attractor_bounds(f, depth)[1]


class TestGridSet:
    def test_rasterisation_rounds_outward(self):
        grid = GridSet.from_pairs([(0.05, 0.25)], 0.1)
        assert grid.cells.tolist() == [0, 1, 2]

    def test_points_occupy_one_cell(self):
        grid = GridSet.from_points([0.0, 0.35], 0.1)
        assert grid.cells.tolist() == [0, 3]

    def test_runs_and_union(self):
        grid = GridSet.from_pairs([(0, 0.2), (0.5, 0.6)], 0.1)
        first, last = grid.runs()
        assert first.tolist() == [0, 5]
        assert last.tolist() == [1, 5]
        assert len(grid.to_union()) == 2

    def test_incompatible_grids(self):
        a = GridSet.from_points([0.0], 0.1)
        b = GridSet.from_points([0.0], 0.2)
        with pytest.raises(ResolutionError):
            a.union(b)


class TestGridMinkowski:
    def test_point_cells(self):
        a = GridSet.from_points([0.0], 1.0)
        assert grid_minkowski(a, a).cells.tolist() == [0, 1]

    def test_step_mismatch(self):
        with pytest.raises(ResolutionError):
            grid_minkowski(GridSet.from_points([0.0], 0.1), GridSet.from_points([0.0], 0.2))

    def test_budget(self, middle_third):
        grid = GridSet.from_union(cover(middle_third, 4), 0.001)
        with pytest.raises(BudgetError):
            grid_minkowski(grid, grid, budget=10)

    def test_empty_list(self):
        with pytest.raises(InputError):
            grid_minkowski_sum([])

    def test_two_middle_thirds_fill_the_interval(self, middle_third):
        grid = GridSet.from_union(cover(middle_third, 8), H_FINE)
        total = grid_minkowski_sum([grid, grid])
        assert total.empty_cells_within(Interval(0, 2)).size == 0
        assert not sum_is_interval([middle_third] * 2, F(1, 3)).certified

    def test_three_middle_thirds_agree_with_the_certificate(self, middle_third):
        certificate = sum_is_interval([middle_third] * 3, F(1, 3))
        assert certificate.certified
        grid = GridSet.from_union(cover(middle_third, 8), H_FINE)
        total = grid_minkowski_sum([grid] * 3)
        assert total.empty_cells_within(certificate.interval).size == 0

    def test_wide_gaps_survive(self):
        sparse = RatioRule(Interval(F(0), F(1)), F(1, 5), F(1, 5))
        grid = GridSet.from_union(cover(sparse, 5), 1e-3)
        total = grid_minkowski(grid, grid)
        assert total.empty_cells_within(Interval(0, 2)).size > 0


class TestGridIteration:
    def test_interval_ifs_fills_its_hull(self, interval_ifs):
        union = grid_attractor(interval_ifs, 1e-3).to_union()
        assert len(union) == 1
        assert union.lo == pytest.approx(0.0) and union.hi == pytest.approx(1.0)

    def test_middle_third_tracks_the_cover(self, middle_third_ifs):
        grid = grid_attractor(middle_third_ifs, 1e-4)
        assert hausdorff(grid, cover_of(middle_third_ifs)) <= 2e-3

    def test_beta_points_of_an_ifs(self, middle_third_ifs):
        betas, H = beta_points(middle_third_ifs, 2)
        assert H == SYMMETRIC
        assert betas[0] == -1 and betas[-1] == 1
        assert len(betas) == 8

    def test_small_alpha_tracks_the_first_generation(self, middle_third_ifs):
        grid = grid_second_gen(middle_third_ifs, 0.05, 1e-4, beta_depth=6)
        assert hausdorff(grid, cover_of(middle_third_ifs)) <= 2 * 0.05 + 1e-3

    def test_beta_depth_must_be_positive(self, middle_third_ifs):
        with pytest.raises(InputError):
            grid_second_gen(middle_third_ifs, 0.45, 1e-3, beta_depth=0)


class TestHausdorff:
    def test_identity(self, middle_third):
        union = cover(middle_third, 4)
        assert hausdorff(union, union) == 0

    def test_points(self):
        assert hausdorff([F(0)], [F(1)]) == 1

    def test_gap_midpoints_count(self):
        a = IntervalUnion([Interval(F(0), F(4))])
        b = IntervalUnion([Interval(F(0), F(1)), Interval(F(3), F(4))])
        assert hausdorff(a, b) == 1

    def test_empty(self):
        with pytest.raises(UndefinedDistanceError):
            hausdorff(IntervalUnion(), [F(0)])

    def test_deeper_covers_are_close(self, middle_third):
        distance = hausdorff(cover(middle_third, 6), cover(middle_third, 8))
        assert distance <= F(1, 3 ** 6)

    def test_grid_and_union_mix(self):
        grid = GridSet.from_pairs([(0.0, 1.0)], 0.25)
        assert hausdorff(grid, Interval(0.0, 1.0)) == pytest.approx(0.0)
        assert np.isclose(hausdorff(grid, [0.5]), 0.5)
