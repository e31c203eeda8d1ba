from .cost import (
    LocalCost,
    SizeEstimator,
    delta_cost,
    f_and,
    f_optional,
    f_union,
    local_cost_inject,
    local_cost_merge,
)
from .transformer import (
    MergeDecision,
    TransformRecord,
    decide_inject,
    decide_merge,
    is_trivial_level,
    multi_level_transform,
    single_level_transform,
)
from .transforms import (
    Applied,
    TransformKind,
    Transformation,
    apply_inject,
    apply_merge,
    inject_violation,
    merge_choices,
    merge_violation,
    undo,
    undo_inject,
    undo_merge,
)
