# Services package
from .dissection import (
    UlbdCertificate, cover, diameter_decay_holds, dissection_ratio, gap, gaps,
    max_gap, ratios, subtree, ulbd_bound,
)
from .ifs import (
    attractor_bounds, attractor_cover, composite_fixed_points, compose_map, extreme_submaps,
    fixed_point, hull, hull_candidates, hutchinson_image, ratio_floor, rescale,
    two_map_construction,
)
from .setops import (
    IntervalCertificate, SumConstruction, UnionConstruction, a_m, aprime,
    cabrelli_check, cabrelli_value, geometric_count, sandwich_extension,
    sum_is_interval, sum_subset_construct, union_construct,
)
from .oracle import grid_attractor, grid_minkowski, grid_minkowski_sum, grid_second_gen, hausdorff
from .attractor import (
    AttractorResult, CoverSelection, PartialSum, SecondGenSpec, compose_phi,
    n_epsilon, partial_geometric_sum, sandwich_check, second_gen_attractor,
    select_cover,
)
