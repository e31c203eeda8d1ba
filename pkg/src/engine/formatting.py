"""Text rendering of results, explain plans and per-query statistics."""

from __future__ import annotations

from ..algebra.bags import Bag
from ..plan.betree import BeTree
from ..plan.stats import QueryMetrics
from ..store.rdf_store import Store
from .bgp_engine import CardEstimator, plan_bgp
from .executor import ExecStats


def format_results(result: Bag, variables: list[str], store: Store) -> list[str]:
    """Header of variable names, then one tab-separated row per mapping. Unbound is empty."""
    lines = ["\t".join(variables)]
    for m in result:
        lines.append(
            "\t".join(store.decode(m[v]).n3() if v in m else "" for v in variables)
        )
    return lines


def format_explain(
    plan_before: list[str],
    plan_after: list[str],
    transformations: list,
    rejected_hoists: list[str],
) -> list[str]:
    lines = ["-- plan", *plan_before]
    if rejected_hoists:
        lines.append("-- hoists refused")
        lines.extend(f"  {reason}" for reason in rejected_hoists)
    lines.append("-- transformations")
    if transformations:
        lines.extend(f"  {record.describe()}" for record in transformations)
    else:
        lines.append("  (none)")
    lines.append("-- transformed plan")
    lines.extend(plan_after)
    return lines


def format_stats(
    query_id: str,
    metrics: QueryMetrics,
    stats: ExecStats,
    tree: BeTree,
    store: Store,
    result_rows: int,
    seed: int = 0,
    sample_size: int = 100,
) -> list[str]:
    """One key: value block. Everything but the ``*_us`` lines is deterministic for a seed."""
    lines = [
        f"# stats {query_id}",
        f"result_rows: {result_rows}",
        f"count_bgp: {metrics.count_bgp}",
        f"depth: {metrics.depth}",
        f"query_type: {metrics.query_type}",
        f"join_space: {stats.join_space}",
        f"pruned_bgp_count: {stats.pruned_bgp_count}",
        f"materialized_rows: {stats.materialized_rows}",
    ]
    if stats.cand_sizes:
        lines.append(f"cand_sizes: {stats.cand_sizes}")
        lines.append(f"cand_raw_sizes: {stats.cand_raw_sizes}")
    estimator = CardEstimator(store, sample_size=sample_size, seed=seed)
    for node in tree.bgp_nodes():
        if node.is_empty:
            continue
        plan = plan_bgp(store, node.triples, estimator)
        lines.append(
            f"bgp: {node.label(tree.prefixes)} rows={stats.per_bgp_result_size.get(node, 0)} "
            f"est={plan.estimated_result_size:g} wco_cost={plan.cost:g} "
            f"binary_cost={plan.binary_cost:g}"
        )
    lines.append(f"transform_time_us: {stats.transform_time_us}")
    lines.append(f"wall_time_us: {stats.wall_time_us}")
    return lines
