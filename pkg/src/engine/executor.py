"""BE-tree evaluation with optional candidate pruning.

A group's children are processed left to right, accumulating ``r``. BGP, group
and UNION children are joined into ``r``; an OPTIONAL child is left-outer-joined.
Under the pruning modes the rows accumulated so far, projected on the variables
they share with the next child, travel down as candidates and restrict BGP
evaluation whenever their distinct count is under the threshold.

An OPTIONAL child only ever receives the candidates of its own group: candidates
inherited from further up could empty its right side and turn a row that should
be dropped into an unextended one.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

from ..algebra.bags import Bag, join, left_outer_join, union_bag
from ..plan.betree import (
    BeNode,
    BeTree,
    BgpNode,
    GroupNode,
    OptionalNode,
    UnionNode,
    node_variables,
)
from ..plan.stats import join_space
from ..store.rdf_store import Store
from .bgp_engine import SAMPLE_SIZE, Deadline, evaluate_bgp

DEFAULT_FIXED_RATIO = 0.01


class ExecMode(Enum):
    BASE = "base"
    TT = "tt"
    CP = "cp"
    FULL = "full"

    @property
    def transforms(self) -> bool:
        return self in (ExecMode.TT, ExecMode.FULL)

    @property
    def prunes(self) -> bool:
        return self in (ExecMode.CP, ExecMode.FULL)


class ThresholdPolicy(Enum):
    FIXED = "fixed"
    ADAPTIVE = "adaptive"


@dataclass(frozen=True)
class ExecOptions:
    mode: ExecMode = ExecMode.BASE
    fixed_ratio: float = DEFAULT_FIXED_RATIO
    timeout_us: int | None = None
    seed: int = 0
    sample_size: int = SAMPLE_SIZE

    @property
    def policy(self) -> ThresholdPolicy:
        return ThresholdPolicy.ADAPTIVE if self.mode is ExecMode.FULL else ThresholdPolicy.FIXED


@dataclass
class ExecStats:
    per_bgp_result_size: dict[BgpNode, int] = field(default_factory=dict)
    join_space: int = 0
    wall_time_us: int = 0
    transform_time_us: int = 0
    pruned_bgp_count: int = 0
    # rows produced by BGP evaluation, summed over every BGP leaf
    materialized_rows: int = 0
    # per applied candidate set: distinct size, and the row count it was projected from
    cand_sizes: list[int] = field(default_factory=list)
    cand_raw_sizes: list[int] = field(default_factory=list)


def threshold_for(node: BgpNode, store: Store, opts: ExecOptions) -> float:
    """Candidate sets at or above this size are not applied."""
    fixed = opts.fixed_ratio * len(store)
    if opts.policy is ThresholdPolicy.ADAPTIVE and node.estimate is not None:
        return node.estimate
    return fixed


def _candidates(r: Bag | None, child: BeNode) -> Bag | None:
    """``r`` projected on the variables it shares with ``child``; None if they share none."""
    if r is None:
        return None
    shared = sorted(r.variables() & node_variables(child))
    if not shared:
        return None
    return r.project(shared)


class _Evaluator:
    def __init__(self, store: Store, opts: ExecOptions, stats: ExecStats, deadline: Deadline):
        self.store = store
        self.opts = opts
        self.stats = stats
        self.deadline = deadline

    def group(self, group: GroupNode, cand: Bag | None) -> Bag:
        prunes = self.opts.mode.prunes
        r: Bag | None = None
        for child in group.children:
            self.deadline.check()
            if isinstance(child, OptionalNode):
                right = self.group(child.group, _candidates(r, child) if prunes else None)
                r = left_outer_join(r if r is not None else Bag.identity(), right)
                continue
            if prunes:
                child_cand = _candidates(r, child) if r is not None else cand
            else:
                child_cand = None
            part = self.node(child, child_cand)
            r = part if r is None else join(r, part)
        return r if r is not None else Bag.identity()

    def node(self, node: BeNode, cand: Bag | None) -> Bag:
        if isinstance(node, BgpNode):
            return self.bgp(node, cand)
        if isinstance(node, GroupNode):
            return self.group(node, cand)
        if isinstance(node, UnionNode):
            out = Bag()
            for branch in node.branches:
                out = union_bag(out, self.group(branch, cand))
            return out
        raise TypeError(f"unexpected BE-tree node: {node!r}")

    def bgp(self, node: BgpNode, cand: Bag | None) -> Bag:
        applied: Bag | None = None
        if cand is not None and not node.is_empty:
            shared = sorted(node.variables() & cand.variables())
            if shared:
                restricted = cand.project(shared).distinct()
                if len(restricted) < threshold_for(node, self.store, self.opts):
                    applied = restricted
                    self.stats.pruned_bgp_count += 1
                    self.stats.cand_sizes.append(len(restricted))
                    self.stats.cand_raw_sizes.append(len(cand))
        result = evaluate_bgp(self.store, node.triples, applied, self.deadline)
        self.stats.per_bgp_result_size[node] = len(result)
        self.stats.materialized_rows += len(result)
        return result


def evaluate(store: Store, tree: BeTree, opts: ExecOptions | None = None) -> tuple[Bag, ExecStats]:
    """Evaluate ``tree`` over ``store``. Raises QueryTimeout past ``opts.timeout_us``."""
    opts = opts or ExecOptions()
    stats = ExecStats()
    deadline = Deadline(opts.timeout_us)
    result = _Evaluator(store, opts, stats, deadline).group(tree.root, None)
    stats.wall_time_us = deadline.elapsed_us()
    stats.join_space = join_space(tree, stats.per_bgp_result_size)
    return result, stats


def projection(result: Bag, variables: list[str] | None) -> Bag:
    """Restrict every mapping to ``variables``; None keeps them all."""
    if variables is None:
        return result
    return result.project(variables)

