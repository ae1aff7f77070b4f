from fractions import Fraction as F

import pytest

from models import Ifs, Interval, MapDescriptor, RatioRule

UNIT = Interval(F(0), F(1))
SYMMETRIC = Interval(F(-1), F(1))


@pytest.fixture
def middle_third():
    return RatioRule.middle_third()


@pytest.fixture
def symmetric_middle_third():
    return RatioRule.middle_third(SYMMETRIC)


@pytest.fixture
def middle_third_ifs():
    """x/3 - 2/3 and x/3 + 2/3: the middle-third set on [-1, 1]"""
    return Ifs.affine([(F(1, 3), F(-2, 3)), (F(1, 3), F(2, 3))])


@pytest.fixture
def float_middle_third_ifs():
    return Ifs.affine([(1 / 3, -2 / 3), (1 / 3, 2 / 3)])


@pytest.fixture
def interval_ifs():
    """x/2 and x/2 + 1/2: the attractor is [0, 1]"""
    return Ifs.affine([(F(1, 2), F(0)), (F(1, 2), F(1, 2))])


@pytest.fixture(scope='session')
def smooth_ifs():
    """σ = 0.3, δ = 0.4, B = 0.1 on [0, 1]"""
    domain = Interval(0.0, 1.0)
    left = MapDescriptor.from_expression('0.3*x + 0.05*x**2', 0.3, 0.4, 0.1, domain)
    right = MapDescriptor.from_expression('0.6 + 0.3*x + 0.05*x**2', 0.3, 0.4, 0.1, domain)
    return Ifs((left, right), domain)
