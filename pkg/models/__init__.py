from .numeric import Number, exact, format_number, is_exact, parse_number, tolerance
from .interval import Interval, IntervalUnion, OpenInterval
from .maps import Ifs, MapDescriptor
from .construction import (
    AffineImage, Construction, ExplicitConstruction, IfsConstruction, Node,
    RatioRule, RuleConstruction, Subtree, format_word, parse_word,
)
from .grid import GridSet

__all__ = [
    'Number', 'exact', 'format_number', 'is_exact', 'parse_number', 'tolerance',
    'Interval', 'IntervalUnion', 'OpenInterval',
    'Ifs', 'MapDescriptor',
    'AffineImage', 'Construction', 'ExplicitConstruction', 'IfsConstruction', 'Node',
    'RatioRule', 'RuleConstruction', 'Subtree', 'format_word', 'parse_word',
    'GridSet',
]
