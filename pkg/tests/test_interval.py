from fractions import Fraction as F

import pytest

from errors import BudgetError, InputError
from models import Interval, IntervalUnion, OpenInterval, exact, format_number, parse_number, tolerance
from models.interval import merge_pairs


def union(*pairs, tol=0):
    return IntervalUnion.from_pairs(((exact(lo), exact(hi)) for lo, hi in pairs), tol)


class TestNumeric:
    @pytest.mark.parametrize('value, expected', [
        ('1/3', F(1, 3)),
        (' -2/6 ', F(-1, 3)),
        (2, F(2)),
        ('0.45', F(9, 20)),
    ])
    def test_parse_number_is_exact(self, value, expected):
        parsed = parse_number(value)
        assert parsed == expected
        assert isinstance(parsed, F)

    def test_parse_number_keeps_floats(self):
        assert isinstance(parse_number(0.45), float)

    @pytest.mark.parametrize('value', [True, None, 'abc', [1]])
    def test_parse_number_rejects(self, value):
        with pytest.raises(ValueError):
            parse_number(value)

    def test_exact_rejects_booleans(self):
        with pytest.raises(TypeError):
            exact(True)

    def test_tolerance_is_zero_in_rational_mode(self):
        assert tolerance(F(1, 3), 2) == 0
        assert tolerance(F(1, 3), 0.5) > 0

    def test_format_number(self):
        assert format_number(F(-2, 3)) == '-2/3'
        assert format_number(0.5) == '0.5'


class TestInterval:
    def test_rejects_reversed_endpoints(self):
        with pytest.raises(InputError):
            Interval(1, 0)

    def test_affine_with_negative_scale_reorders(self):
        assert Interval(F(0), F(1)).affine(-2, 1) == Interval(F(-1), F(1))

    def test_addition(self):
        assert Interval(0, 1) + Interval(2, 5) == Interval(2, 6)
        assert Interval(0, 1) + 3 == Interval(3, 4)

    def test_str(self):
        assert str(Interval(F(-1, 3), F(1))) == '[-1/3, 1]'
        assert str(OpenInterval(F(1, 3), F(2, 3))) == ']1/3, 2/3['

    def test_open_interval_meets(self):
        gap = OpenInterval(1, 2)
        assert gap.meets(Interval(F(3, 2), 3))
        assert not gap.meets(Interval(2, 3))
        assert not gap.meets(Interval(0, 1))


class TestMerge:
    def test_overlaps_merge(self):
        merged, swallowed = merge_pairs([(2, 3), (0, 1), (F(1, 2), F(3, 2))])
        assert merged == [(0, F(3, 2)), (2, 3)]
        assert swallowed == 0

    def test_touching_intervals_merge_without_counting(self):
        merged, swallowed = merge_pairs([(0, 1), (1, 2)])
        assert merged == [(0, 2)]
        assert swallowed == 0

    def test_narrow_gaps_are_counted(self):
        result = union((0, 1), (1.0 + 1e-15, 2), tol=1e-12)
        assert len(result) == 1
        assert result.merged_gaps == 1


class TestIntervalUnion:
    def test_queries(self):
        u = union((0, 1), (2, 3), (5, 8))
        assert u.hull == Interval(0, 8)
        assert u.contains(F(5, 2)) and not u.contains(4)
        assert u.distance(4) == 1
        assert u.distance(-2) == 2
        assert u.distance(F(1, 2)) == 0
        assert [str(g) for g in u.gaps()] == [']1, 2[', ']3, 5[']
        assert u.total_length == 5
        assert u.gap_length == 3
        assert u.endpoints == [0, 1, 2, 3, 5, 8]

    def test_distance_to_empty_union(self):
        with pytest.raises(InputError):
            IntervalUnion().distance(0)

    def test_covers_needs_a_single_component(self):
        u = union((0, 1), (2, 3))
        assert u.covers(Interval(F(1, 4), F(3, 4)))
        assert not u.covers(Interval(F(1, 2), F(5, 2)))

    def test_minkowski(self):
        cantor = union((0, F(1, 3)), (F(2, 3), 1))
        assert cantor.minkowski(cantor) == union((0, 2))
        assert union((0, 0), (3, 3)).minkowski(union((0, 1))) == union((0, 1), (3, 4))

    def test_minkowski_bridges_narrow_gaps(self):
        fine = union(*((F(k, 10), F(k, 10) + F(1, 20)) for k in range(10)))
        wide = union((0, 1), (5, 6))
        assert wide.minkowski(fine, budget=2) == union((0, F(39, 20)), (5, F(139, 20)))
        assert fine.minkowski(wide, budget=2) == wide.minkowski(fine)

    def test_minkowski_budget_keeps_partial(self):
        u = union((0, 1), (3, 4), (6, 7))
        with pytest.raises(BudgetError) as info:
            u.minkowski(u, budget=4)
        assert info.value.partial is u
        assert info.value.details['size'] == 9

    def test_fattened_and_issubset(self):
        u = union((0, 1), (3, 4))
        fat = u.fattened(1)
        assert fat == union((-1, 5))
        assert u.issubset(fat)
        assert not fat.issubset(u)

    def test_affine_keeps_order(self):
        u = union((0, 1), (2, 3))
        assert u.affine(-1) == union((-3, -2), (-1, 0))

    def test_meets(self):
        u = union((0, 1), (2, 3))
        assert not u.meets(OpenInterval(1, 2))
        assert u.meets(OpenInterval(F(1, 2), 2))
