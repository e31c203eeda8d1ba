"""Local Δ-cost model for merge and inject.

A transformation only changes a few BGP nodes and the algebra around them, so
its cost is compared locally: the BGP evaluation cost of the affected nodes plus
an algebra term per node (f_AND over the node and its left and right siblings)
and the UNION or OPTIONAL combining them. Joins and OPTIONAL multiply sizes,
UNION adds them; a missing sibling side counts as 1.
"""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass
from math import prod

from ..engine.bgp_engine import CardEstimator, plan_bgp
from ..plan.betree import BeNode, BgpNode, GroupNode, OptionalNode, UnionNode
from ..sparql.ast import TriplePattern
from ..store.rdf_store import Store


@dataclass(frozen=True)
class LocalCost:
    bgp_cost: float
    algebra_cost: float

    @property
    def total(self) -> float:
        return self.bgp_cost + self.algebra_cost


def f_and(*sizes: float) -> float:
    return prod(sizes)


def f_union(*sizes: float) -> float:
    return sum(sizes)


def f_optional(left: float, right: float) -> float:
    return left * right


def delta_cost(before: LocalCost, after: LocalCost) -> float:
    return after.total - before.total


class SizeEstimator:
    """BGP cost and size estimates, memoized by triple sequence, plus the size recursion above BGPs.

    Every BGP size computed is also cached on its node (``BgpNode.estimate``) for
    the adaptive pruning threshold.
    """

    def __init__(self, store: Store, sample_size: int = 100, seed: int = 0):
        self.store = store
        self.cards = CardEstimator(store, sample_size=sample_size, seed=seed)
        self._memo: dict[tuple[TriplePattern, ...], tuple[float, float]] = {}

    def bgp_estimate(self, triples: Sequence[TriplePattern]) -> tuple[float, float]:
        """(plan cost, estimated result size). The empty BGP costs 0 and has one row."""
        key = tuple(triples)
        if not key:
            return 0.0, 1.0
        hit = self._memo.get(key)
        if hit is None:
            plan = plan_bgp(self.store, key, self.cards)
            hit = (plan.cost, plan.estimated_result_size)
            self._memo[key] = hit
        return hit

    def cost(self, node: BgpNode) -> float:
        return self.bgp_estimate(node.triples)[0]

    def size(self, node: BeNode) -> float:
        if isinstance(node, BgpNode):
            node.estimate = self.bgp_estimate(node.triples)[1]
            return node.estimate
        if isinstance(node, GroupNode):
            return prod(self.size(c) for c in node.children)
        if isinstance(node, UnionNode):
            return sum(self.size(b) for b in node.branches)
        if isinstance(node, OptionalNode):
            return self.size(node.group)
        raise TypeError(f"unknown BE-tree node: {node!r}")

    def sides(self, parent: GroupNode, node: BeNode) -> tuple[float, float]:
        """Sizes of everything left and right of ``node`` among its siblings."""
        index = next(i for i, c in enumerate(parent.children) if c is node)
        left = prod(self.size(c) for c in parent.children[:index])
        right = prod(self.size(c) for c in parent.children[index + 1 :])
        return left, right

    def and_term(self, parent: GroupNode, node: BgpNode) -> float:
        left, right = self.sides(parent, node)
        return f_and(self.size(node), left, right)


def local_cost_merge(
    est: SizeEstimator,
    parent: GroupNode,
    source: BgpNode,
    union: UnionNode,
    branch_bgps: Sequence[BgpNode | None],
) -> LocalCost:
    """Local cost around ``source`` and the chosen BGP of each branch of ``union``.

    ``None`` stands for a branch without a chosen BGP: an empty node in front of
    the branch, costing nothing and sized 1.
    """
    bgp = est.cost(source)
    algebra = est.and_term(parent, source)
    for branch, node in zip(union.branches, branch_bgps, strict=True):
        if node is None:
            algebra += f_and(1.0, 1.0, est.size(branch))
            continue
        bgp += est.cost(node)
        algebra += est.and_term(branch, node)
    algebra += f_union(*(est.size(b) for b in union.branches))
    return LocalCost(bgp, algebra)


def local_cost_inject(
    est: SizeEstimator,
    parent: GroupNode,
    source: BgpNode,
    optional: OptionalNode,
    target: BgpNode,
) -> LocalCost:
    bgp = est.cost(source) + est.cost(target)
    algebra = (
        est.and_term(parent, source)
        + est.and_term(optional.group, target)
        + f_optional(est.size(source), est.size(optional.group))
    )
    return LocalCost(bgp, algebra)
