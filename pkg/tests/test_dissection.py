from fractions import Fraction as F

import pytest

from errors import DepthUnavailableError, InputError, InvariantError, UndefinedRatioError
from models import (AffineImage, ExplicitConstruction, Interval, IntervalUnion, RatioRule,
                    RuleConstruction, Subtree, format_word, parse_word)
from services.dissection import (cover, diameter_decay_holds, dissection_ratio, gap, gaps,
                                 max_gap, ratios, subtree, ulbd_bound)


def pairs(union):
    return [(iv.lo, iv.hi) for iv in union]


@pytest.fixture
def explicit():
    table = {
        '': [F(0), F(1)],
        '0': [F(0), F(1, 4)], '1': [F(1, 2), F(1)],
        '00': [F(0), F(1, 16)], '01': [F(1, 8), F(1, 4)],
        '10': [F(1, 2), F(5, 8)], '11': [F(3, 4), F(1)],
    }
    return ExplicitConstruction({parse_word(w): Interval(*iv) for w, iv in table.items()})


class TestWords:
    def test_parse_and_format(self):
        assert parse_word('0110') == (0, 1, 1, 0)
        assert parse_word('') == ()
        assert format_word((1, 0)) == '10'
        assert format_word(()) == '()'

    def test_rejects_other_letters(self):
        with pytest.raises(InputError):
            parse_word('012')


class TestMiddleThird:
    def test_cover(self, middle_third):
        assert pairs(cover(middle_third, 2)) == [
            (0, F(1, 9)), (F(2, 9), F(1, 3)), (F(2, 3), F(7, 9)), (F(8, 9), 1)]

    def test_ratios_are_one_third(self, middle_third):
        assert dissection_ratio(middle_third, (0, 1)) == F(1, 3)
        assert {r for _, r in ratios(middle_third, 4)} == {F(1, 3)}

    def test_root_ratio_is_undefined(self, middle_third):
        with pytest.raises(UndefinedRatioError):
            dissection_ratio(middle_third, ())

    def test_gaps(self, middle_third):
        assert str(gap(middle_third, ())) == ']1/3, 2/3['
        found = gaps(middle_third, 3)
        assert len(found) == 7
        assert [w for w, _ in found[:3]] == [(), (0,), (1,)]
        assert gaps(middle_third, 0) == []

    def test_max_gap_is_exhaustive(self, middle_third):
        assert max_gap(middle_third, 3) == (F(1, 3), True)

    def test_ulbd_certificate(self, middle_third):
        certificate = ulbd_bound(middle_third)
        assert certificate.bound == F(1, 3)
        assert certificate.exhaustive

    def test_diameter_decay(self, middle_third):
        assert diameter_decay_holds(middle_third, F(1, 3), 6)
        assert not diameter_decay_holds(middle_third, 0.7, 3)

    def test_rule_backing_agrees(self, middle_third):
        def rule(word, iv):
            d = iv.diameter
            return Interval(iv.lo, iv.lo + d / 3), Interval(iv.hi - d / 3, iv.hi)

        ruled = RuleConstruction(middle_third.root, rule)
        assert cover(ruled, 4) == cover(middle_third, 4)
        assert not ulbd_bound(ruled, 4).exhaustive

    def test_invalid_ratios(self):
        with pytest.raises(InputError):
            RatioRule(Interval(F(0), F(1)), F(1, 2), F(1, 2))


class TestExplicit:
    def test_depth_limit(self, explicit):
        assert explicit.depth_limit == 2
        with pytest.raises(DepthUnavailableError):
            explicit.node((0, 0, 0))

    def test_max_gap_stops_at_the_limit(self, explicit):
        assert max_gap(explicit, 10) == (F(1, 4), True)
        assert max_gap(explicit, 2) == (F(1, 4), True)

    def test_ulbd_is_exhaustive_at_the_limit(self, explicit):
        certificate = ulbd_bound(explicit)
        assert certificate.bound == F(1, 4)
        assert certificate.depth_checked == 2
        assert certificate.exhaustive

    def test_overlapping_children_are_rejected(self):
        table = {(): Interval(F(0), F(1)), (0,): Interval(F(0), F(3, 5)), (1,): Interval(F(1, 2), F(1))}
        with pytest.raises(InvariantError):
            ExplicitConstruction(table)

    def test_missing_root(self):
        with pytest.raises(InputError):
            ExplicitConstruction({(0,): Interval(F(0), F(1))})


class TestDerived:
    def test_subtree(self, middle_third):
        sub = subtree(middle_third, (1,))
        assert isinstance(sub, Subtree)
        assert sub.root == Interval(F(2, 3), F(1))
        assert pairs(cover(sub, 1)) == [(F(2, 3), F(7, 9)), (F(8, 9), 1)]
        assert subtree(middle_third, ()) is middle_third

    def test_subtree_of_explicit_shortens_the_limit(self, explicit):
        assert Subtree(explicit, (1,)).depth_limit == 1

    def test_reflection_swaps_letters(self, middle_third):
        mirrored = AffineImage(middle_third, -1)
        assert mirrored.root == Interval(F(-1), F(0))
        assert mirrored.interval((0,)) == Interval(F(-1), F(-2, 3))
        assert cover(mirrored, 3) == cover(middle_third, 3).affine(-1)
        assert ulbd_bound(mirrored).exhaustive

    def test_scaled_copy_keeps_ratios(self, middle_third):
        scaled = AffineImage(middle_third, 2, -1)
        assert scaled.root == Interval(F(-1), F(1))
        assert cover(scaled, 2) == cover(middle_third, 2).affine(2, -1)
        assert ulbd_bound(scaled).bound == F(1, 3)

    def test_cover_is_union(self, middle_third):
        assert isinstance(cover(middle_third, 0), IntervalUnion)
        assert len(cover(middle_third, 5)) == 32
