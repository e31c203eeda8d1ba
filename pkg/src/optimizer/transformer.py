"""Greedy cost-driven BE-tree transformation.

Levels are handled bottom-up (children before their parent group). At one
level, each BGP child is merged into the sibling UNION with the most negative
Δ-cost, if any is negative; a BGP that stays is then considered for injection
into every OPTIONAL to its right, each decided on its own.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from ..plan.betree import BeTree, BgpNode, GroupNode, OptionalNode, UnionNode, describe
from ..store.rdf_store import Store
from .cost import SizeEstimator, delta_cost, local_cost_inject, local_cost_merge
from .transforms import (
    TransformKind,
    Transformation,
    apply_inject,
    apply_merge,
    coalescable_children,
    inject_violation,
    merge_choices,
    merge_violation,
    undo,
)


@dataclass(frozen=True)
class TransformRecord:
    kind: TransformKind
    source: str
    target: str
    delta: float

    def describe(self) -> str:
        return f"{self.kind.value} {self.source} into {self.target} (delta {self.delta:+.6g})"


@dataclass(frozen=True)
class MergeDecision:
    """Lowest Δ-cost over all per-branch coalescing choices.

    ``best`` is None when no choice is legal.
    """

    delta: float
    best: tuple[BgpNode | None, ...] | None = None


def decide_merge(
    est: SizeEstimator, parent: GroupNode, source: BgpNode, union: UnionNode
) -> MergeDecision:
    """Trial every choice tuple with apply/undo. The tree is left as it was."""
    if merge_violation(parent, source, union) is not None:
        return MergeDecision(0.0)
    best: MergeDecision | None = None
    for combo in itertools.product(*merge_choices(source, union)):
        before = local_cost_merge(est, parent, source, union, combo)
        applied = apply_merge(Transformation(TransformKind.MERGE, parent, source, union, combo))
        placeholder, *merged = applied.created
        after = local_cost_merge(est, parent, placeholder, union, merged)
        undo(applied)
        delta = delta_cost(before, after)
        if best is None or delta < best.delta:
            best = MergeDecision(delta, combo)
    return best if best is not None else MergeDecision(0.0)


def decide_inject(
    est: SizeEstimator,
    parent: GroupNode,
    source: BgpNode,
    optional: OptionalNode,
    prefixes: dict[str, str] | None = None,
) -> TransformRecord | None:
    """Inject ``source`` into ``optional`` with the coalescing choice of lowest negative Δ-cost."""
    if inject_violation(parent, source, optional) is not None:
        return None
    best: tuple[float, Transformation] | None = None
    for target in coalescable_children(source, optional.group):
        if inject_violation(parent, source, optional, target) is not None:
            continue
        x = Transformation(TransformKind.INJECT, parent, source, optional, (target,))
        before = local_cost_inject(est, parent, source, optional, target)
        applied = apply_inject(x)
        after = local_cost_inject(est, parent, source, optional, applied.created[0])
        undo(applied)
        delta = delta_cost(before, after)
        if delta < 0 and (best is None or delta < best[0]):
            best = (delta, x)
    if best is None:
        return None
    delta, x = best
    apply_inject(x)
    return TransformRecord(
        TransformKind.INJECT, source.label(prefixes), describe(optional), delta
    )


def is_trivial_level(group: GroupNode) -> bool:
    """Exactly one BGP followed by one UNION or OPTIONAL; pruning alone covers it."""
    children = group.children
    return (
        len(children) == 2
        and isinstance(children[0], BgpNode)
        and isinstance(children[1], UnionNode | OptionalNode)
    )


def single_level_transform(
    est: SizeEstimator,
    group: GroupNode,
    prefixes: dict[str, str] | None = None,
    skip_trivial_levels: bool = False,
) -> list[TransformRecord]:
    log: list[TransformRecord] = []
    if skip_trivial_levels and is_trivial_level(group):
        return log
    unions = [c for c in group.children if isinstance(c, UnionNode)]
    for node in list(group.children):
        if not isinstance(node, BgpNode) or node.is_empty:
            continue
        if not any(c is node for c in group.children):
            continue

        target: UnionNode | None = None
        chosen: MergeDecision | None = None
        for union in unions:
            decision = decide_merge(est, group, node, union)
            if decision.best is not None and decision.delta < (chosen.delta if chosen else 0):
                target, chosen = union, decision
        if target is not None and chosen is not None and chosen.best is not None:
            label = node.label(prefixes)
            apply_merge(Transformation(TransformKind.MERGE, group, node, target, chosen.best))
            log.append(TransformRecord(TransformKind.MERGE, label, describe(target), chosen.delta))
            continue

        position = next(i for i, c in enumerate(group.children) if c is node)
        for optional in [c for c in group.children[position + 1 :] if isinstance(c, OptionalNode)]:
            record = decide_inject(est, group, node, optional, prefixes)
            if record is not None:
                log.append(record)
    return log


def multi_level_transform(
    store: Store,
    tree: BeTree,
    est: SizeEstimator | None = None,
    skip_trivial_levels: bool = False,
) -> list[TransformRecord]:
    """Transform every level post-order; returns the accepted transformations in order.

    Afterwards every BGP node carries its size estimate.
    """
    est = est or SizeEstimator(store)
    log: list[TransformRecord] = []
    _post_order(est, tree.root, tree.prefixes, skip_trivial_levels, log)
    for node in tree.bgp_nodes():
        est.size(node)
    return log


def _post_order(
    est: SizeEstimator,
    group: GroupNode,
    prefixes: dict[str, str],
    skip_trivial_levels: bool,
    log: list[TransformRecord],
) -> None:
    for child in list(group.children):
        if isinstance(child, GroupNode):
            _post_order(est, child, prefixes, skip_trivial_levels, log)
        elif isinstance(child, UnionNode):
            for branch in child.branches:
                _post_order(est, branch, prefixes, skip_trivial_levels, log)
        elif isinstance(child, OptionalNode):
            _post_order(est, child.group, prefixes, skip_trivial_levels, log)
    log.extend(single_level_transform(est, group, prefixes, skip_trivial_levels))
