"""One query, end to end: BE-tree, optional transformation, evaluation, projection."""

from __future__ import annotations

import time
from dataclasses import dataclass, field

from ..algebra.bags import Bag
from ..optimizer.cost import SizeEstimator
from ..optimizer.transformer import TransformRecord, multi_level_transform
from ..plan.betree import BeTree, build_betree, explain
from ..sparql.ast import Query
from ..store.rdf_store import Store
from .executor import ExecMode, ExecOptions, ExecStats, evaluate, projection


@dataclass
class QueryRun:
    result: Bag
    stats: ExecStats
    tree: BeTree
    plan_before: list[str]
    plan_after: list[str]
    transformations: list[TransformRecord] = field(default_factory=list)


def execute_query(store: Store, q: Query, opts: ExecOptions | None = None) -> QueryRun:
    opts = opts or ExecOptions()
    tree = build_betree(q)
    plan_before = explain(tree)
    transformations: list[TransformRecord] = []
    transform_us = 0
    if opts.mode.transforms:
        started = time.perf_counter()
        est = SizeEstimator(store, sample_size=opts.sample_size, seed=opts.seed)
        # full mode leaves a lone BGP next to one UNION/OPTIONAL to candidate pruning
        transformations = multi_level_transform(
            store, tree, est, skip_trivial_levels=opts.mode is ExecMode.FULL
        )
        transform_us = int((time.perf_counter() - started) * 1_000_000)

    result, stats = evaluate(store, tree, opts)
    stats.transform_time_us = transform_us
    return QueryRun(
        result=projection(result, None if q.is_wildcard else q.output_variables()),
        stats=stats,
        tree=tree,
        plan_before=plan_before,
        plan_after=explain(tree, show_estimates=True),
        transformations=transformations,
    )
