"""Static query metrics: BGP count, nesting depth, join space and query type."""

from __future__ import annotations

from collections.abc import Mapping, Sequence
from dataclasses import dataclass
from math import prod

from ..core.errors import ContractError
from ..sparql.ast import (
    AndPattern,
    BgpPattern,
    GraphPattern,
    GroupPattern,
    OptionalPattern,
    Query,
    TriplePattern,
    UnionPattern,
)
from .betree import (
    BeTree,
    BgpNode,
    GroupNode,
    OptionalNode,
    UnionNode,
    betree_to_pattern,
    build_betree,
)


def bgp_components(triples: Sequence[TriplePattern]) -> list[list[TriplePattern]]:
    """Split triple patterns into coalescable components, ordered by first member."""
    parent = list(range(len(triples)))

    def find(i: int) -> int:
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    owner: dict[str, int] = {}
    for i, t in enumerate(triples):
        for var in t.join_variables():
            if var in owner:
                parent[find(i)] = find(owner[var])
            else:
                owner[var] = i

    groups: dict[int, list[TriplePattern]] = {}
    for i, t in enumerate(triples):
        groups.setdefault(find(i), []).append(t)
    return sorted(groups.values(), key=lambda g: triples.index(g[0]))


def count_bgp(p: GraphPattern) -> int:
    if isinstance(p, BgpPattern):
        return len(bgp_components(p.triples))
    if isinstance(p, GroupPattern):
        return count_bgp(p.inner)
    if isinstance(p, AndPattern | UnionPattern | OptionalPattern):
        return count_bgp(p.left) + count_bgp(p.right)
    raise TypeError(f"unknown pattern node: {p!r}")


def depth(p: GraphPattern) -> int:
    if isinstance(p, BgpPattern):
        return 0
    if isinstance(p, GroupPattern):
        return depth(p.inner) + 1
    if isinstance(p, AndPattern | UnionPattern | OptionalPattern):
        return max(depth(p.left), depth(p.right))
    raise TypeError(f"unknown pattern node: {p!r}")


def join_space(tree: BeTree | GroupNode, bgp_sizes: Mapping[BgpNode, int]) -> int:
    """Product over joins and OPTIONALs, sum over UNION branches, of actual BGP result sizes.

    Raises ContractError when a non-empty BGP leaf has no recorded size. An empty
    BGP is the identity and counts as 1.
    """
    root = tree.root if isinstance(tree, BeTree) else tree
    return _join_space(root, bgp_sizes)


def _join_space(node, sizes: Mapping[BgpNode, int]) -> int:
    if isinstance(node, BgpNode):
        if node in sizes:
            return sizes[node]
        if node.is_empty:
            return 1
        raise ContractError(f"no result size recorded for {node.label()}")
    if isinstance(node, GroupNode):
        return prod(_join_space(c, sizes) for c in node.children)
    if isinstance(node, UnionNode):
        return sum(_join_space(b, sizes) for b in node.branches)
    if isinstance(node, OptionalNode):
        return _join_space(node.group, sizes)
    raise TypeError(f"unknown BE-tree node: {node!r}")


def classify(p: GraphPattern) -> str:
    """Query type by operator mix: "BGP", "U", "O" or "U+O"."""
    has_union = has_optional = False
    stack = [p]
    while stack:
        node = stack.pop()
        if isinstance(node, UnionPattern):
            has_union = True
        elif isinstance(node, OptionalPattern):
            has_optional = True
        if isinstance(node, GroupPattern):
            stack.append(node.inner)
        elif isinstance(node, AndPattern | UnionPattern | OptionalPattern):
            stack.extend((node.left, node.right))
    if has_union and has_optional:
        return "U+O"
    if has_union:
        return "U"
    if has_optional:
        return "O"
    return "BGP"


@dataclass(frozen=True)
class QueryMetrics:
    count_bgp: int
    depth: int
    query_type: str


def query_metrics(q: Query) -> QueryMetrics:
    """Metrics of the query as its BE-tree sees it, with sibling BGPs coalesced."""
    pattern = betree_to_pattern(build_betree(q))
    return QueryMetrics(
        count_bgp=count_bgp(pattern), depth=depth(pattern), query_type=classify(q.body)
    )
