"""
Numeric tower: exact rationals when every input is rational, floats otherwise
"""
from fractions import Fraction
from numbers import Rational
from typing import Union

from config import Config

Number = Union[Fraction, float]


def is_exact(*values):
    """True when every value is an int or Fraction (no floats involved)"""
    return all(isinstance(v, Rational) for v in values)


def exact(value):
    """Normalise ints to Fraction, leave floats alone"""
    if isinstance(value, bool):
        raise TypeError("booleans are not numbers here")
    if isinstance(value, Rational):
        return Fraction(value)
    return float(value)


def parse_number(value):
    """Parse a JSON value: ints and "p/q" strings become exact, floats stay floats"""
    if isinstance(value, bool):
        raise ValueError(f"not a number: {value!r}")
    if isinstance(value, (int, Fraction)):
        return Fraction(value)
    if isinstance(value, float):
        return value
    if isinstance(value, str):
        return Fraction(value.strip())
    raise ValueError(f"not a number: {value!r}")


def tolerance(*values, tol=None):
    """Absolute comparison slack: zero in rational mode, τ otherwise"""
    if is_exact(*values):
        return 0
    return Config.FLOAT_TOLERANCE if tol is None else tol


def close(x, y, tol=None):
    return abs(x - y) <= tolerance(x, y, tol=tol)


def less(x, y, tol=None):
    """Strict x < y that survives float noise"""
    return y - x > tolerance(x, y, tol=tol)


def format_number(value):
    if isinstance(value, Fraction):
        return str(value)
    return repr(float(value))
