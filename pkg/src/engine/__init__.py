from .bgp_engine import (
    SAMPLE_SIZE,
    BgpPlan,
    CardEstimator,
    Deadline,
    PlanStep,
    binary_join_cost,
    estimate_cardinality,
    evaluate_bgp,
    match_count,
    order_triples,
    plan_bgp,
    wco_step_cost,
)
from .executor import (
    DEFAULT_FIXED_RATIO,
    ExecMode,
    ExecOptions,
    ExecStats,
    ThresholdPolicy,
    evaluate,
    projection,
    threshold_for,
)
