from .bags import (
    Bag,
    Mapping,
    canonical,
    compatible,
    diff,
    join,
    left_outer_join,
    semijoin,
    union_bag,
)
from .reference import match_triple, reference_evaluate
