from .betree import (
    BeNode,
    BeTree,
    BgpNode,
    GroupNode,
    OptionalNode,
    UnionNode,
    betree_to_pattern,
    build_betree,
    certain_variables,
    coalescable,
    describe,
    explain,
    hoist_blocker,
    iter_bgp_nodes,
    node_variables,
    signature,
)
from .stats import (
    QueryMetrics,
    bgp_components,
    classify,
    count_bgp,
    depth,
    join_space,
    query_metrics,
)
