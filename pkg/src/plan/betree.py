"""BE-tree: the plan tree of group, UNION, OPTIONAL and BGP nodes.

Leaves are BGPs, maximal groups of triple patterns connected through shared
subject/object variables. A group's children are evaluated left to right and
joined; an OPTIONAL child left-outer-joins everything accumulated before it.

Nodes are mutable and compared by identity: the optimizer rewrites trees in
place and keeps per-node bookkeeping in dicts keyed by node.
"""

from __future__ import annotations

from dataclasses import dataclass, field

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

INDENT = "  "


@dataclass(eq=False)
class BgpNode:
    triples: list[TriplePattern] = field(default_factory=list)
    # estimated result size, cached by the optimizer for the adaptive pruning threshold
    estimate: float | None = None

    @property
    def is_empty(self) -> bool:
        return not self.triples

    def variables(self) -> set[str]:
        return set().union(*(t.variables() for t in self.triples))

    def join_variables(self) -> set[str]:
        return set().union(*(t.join_variables() for t in self.triples))

    def label(self, prefixes: dict[str, str] | None = None) -> str:
        return "BGP{" + " . ".join(t.text(prefixes) for t in self.triples) + "}"


@dataclass(eq=False)
class GroupNode:
    children: list[BeNode] = field(default_factory=list)


@dataclass(eq=False)
class UnionNode:
    branches: list[GroupNode] = field(default_factory=list)


@dataclass(eq=False)
class OptionalNode:
    group: GroupNode = field(default_factory=GroupNode)


BeNode = GroupNode | BgpNode | UnionNode | OptionalNode


@dataclass
class BeTree:
    root: GroupNode
    prefixes: dict[str, str] = field(default_factory=dict)
    # hoists the safe-hoist rule refused during construction, for explain output
    rejected_hoists: list[str] = field(default_factory=list)

    def bgp_nodes(self) -> list[BgpNode]:
        return list(iter_bgp_nodes(self.root))


def coalescable(a: BgpNode, b: BgpNode) -> bool:
    return bool(a.join_variables() & b.join_variables())


def node_variables(node: BeNode) -> set[str]:
    if isinstance(node, BgpNode):
        return node.variables()
    if isinstance(node, GroupNode):
        return set().union(*(node_variables(c) for c in node.children))
    if isinstance(node, UnionNode):
        return set().union(*(node_variables(b) for b in node.branches))
    return node_variables(node.group)


def iter_bgp_nodes(node: BeNode):
    """BGP leaves in left-to-right order."""
    if isinstance(node, BgpNode):
        yield node
    elif isinstance(node, GroupNode):
        for child in node.children:
            yield from iter_bgp_nodes(child)
    elif isinstance(node, UnionNode):
        for branch in node.branches:
            yield from iter_bgp_nodes(branch)
    else:
        yield from iter_bgp_nodes(node.group)


def certain_variables(nodes: list[BeNode]) -> set[str]:
    """Variables bound in every row once ``nodes`` are joined: those of their BGP nodes."""
    out: set[str] = set()
    for node in nodes:
        if isinstance(node, BgpNode):
            out |= node.variables()
    return out


def hoist_blocker(
    children: list[BeNode],
    moving: set[str],
    start: int,
    stop: int,
    extra_certain: set[str] | frozenset[str] = frozenset(),
    guard_unions: bool = False,
) -> BeNode | None:
    """First node in ``children[start:stop]`` a join over ``moving`` may not cross leftward.

    Moving a join in front of an OPTIONAL is only sound when every variable the
    two share is already bound by whatever precedes the OPTIONAL.
    """
    bound = certain_variables(children[:start]) | set(extra_certain)
    for node in children[start:stop]:
        if isinstance(node, OptionalNode) or (guard_unions and isinstance(node, UnionNode)):
            if (moving & node_variables(node)) - bound:
                return node
        elif isinstance(node, BgpNode):
            bound |= node.variables()
    return None


# -- construction -----------------------------------------------------------


def build_betree(q: Query) -> BeTree:
    rejected: list[str] = []
    root = _build_group(q.body, rejected, q.prefixes)
    return BeTree(root=root, prefixes=dict(q.prefixes), rejected_hoists=rejected)


def _build_group(gp: GroupPattern, rejected: list[str], prefixes: dict[str, str]) -> GroupNode:
    children = _siblings(gp.inner, rejected, prefixes)
    _coalesce(children, rejected, prefixes)
    if not children:
        children = [BgpNode()]
    return GroupNode(children)


def _as_group(p: GraphPattern) -> GroupPattern:
    return p if isinstance(p, GroupPattern) else GroupPattern(p)


def _siblings(p: GraphPattern, rejected: list[str], prefixes: dict[str, str]) -> list[BeNode]:
    if isinstance(p, BgpPattern):
        return [BgpNode([t]) for t in p.triples]
    if isinstance(p, AndPattern):
        return _siblings(p.left, rejected, prefixes) + _siblings(p.right, rejected, prefixes)
    if isinstance(p, OptionalPattern):
        right = _build_group(_as_group(p.right), rejected, prefixes)
        return [*_siblings(p.left, rejected, prefixes), OptionalNode(right)]
    if isinstance(p, UnionPattern):
        branches = [_build_group(b, rejected, prefixes) for b in _union_operands(p)]
        return [UnionNode(branches)]
    if isinstance(p, GroupPattern):
        return [_build_group(p, rejected, prefixes)]
    raise TypeError(f"unknown pattern node: {p!r}")


def _union_operands(p: GraphPattern) -> list[GroupPattern]:
    """Flatten left-nested UNION chains, and a braced UNION used directly as an operand."""
    if isinstance(p, UnionPattern):
        return _union_operands(p.left) + _union_operands(p.right)
    if isinstance(p, GroupPattern) and isinstance(p.inner, UnionPattern):
        return _union_operands(p.inner)
    return [_as_group(p)]


def _coalesce(children: list[BeNode], rejected: list[str], prefixes: dict[str, str]) -> None:
    """Merge coalescable sibling BGPs into the leftmost one, when the hoist is safe."""
    changed = True
    while changed:
        changed = False
        positions = [i for i, c in enumerate(children) if isinstance(c, BgpNode) and c.triples]
        for a, i in enumerate(positions):
            target = children[i]
            for j in positions[a + 1 :]:
                mover = children[j]
                if not coalescable(target, mover):
                    continue
                blocker = hoist_blocker(
                    children, mover.variables(), i + 1, j, guard_unions=True
                )
                if blocker is not None:
                    continue
                target.triples.extend(mover.triples)
                del children[j]
                changed = True
                break
            if changed:
                break

    positions = [i for i, c in enumerate(children) if isinstance(c, BgpNode) and c.triples]
    for a, i in enumerate(positions):
        for j in positions[a + 1 :]:
            target, mover = children[i], children[j]
            if not coalescable(target, mover):
                continue
            blocker = hoist_blocker(children, mover.variables(), i + 1, j, guard_unions=True)
            if blocker is not None:
                shared = sorted(
                    (mover.variables() & node_variables(blocker))
                    - certain_variables(children[: i + 1])
                )
                rejected.append(
                    f"kept {mover.label(prefixes)} apart from {target.label(prefixes)}: "
                    f"{describe(blocker)} binds " + ", ".join(f"?{v}" for v in shared)
                )


# -- back to patterns -------------------------------------------------------


def betree_to_pattern(tree: BeTree | GroupNode) -> GroupPattern:
    root = tree.root if isinstance(tree, BeTree) else tree
    return _group_pattern(root)


def _group_pattern(group: GroupNode) -> GroupPattern:
    acc: GraphPattern | None = None
    for child in group.children:
        if isinstance(child, OptionalNode):
            left = acc if acc is not None else BgpPattern()
            acc = OptionalPattern(left, _group_pattern(child.group))
            continue
        part = _node_pattern(child)
        acc = part if acc is None else AndPattern(acc, part)
    return GroupPattern(acc if acc is not None else BgpPattern())


def _node_pattern(node: BeNode) -> GraphPattern:
    if isinstance(node, BgpNode):
        return BgpPattern(tuple(node.triples))
    if isinstance(node, GroupNode):
        return _group_pattern(node)
    if isinstance(node, UnionNode):
        branches = [_group_pattern(b) for b in node.branches]
        acc: GraphPattern = branches[0]
        for branch in branches[1:]:
            acc = UnionPattern(acc, branch)
        return acc
    raise TypeError(f"an OPTIONAL node has no standalone pattern: {node!r}")


# -- inspection -------------------------------------------------------------


def signature(node: BeNode) -> tuple:
    """Structural fingerprint; equal signatures mean structurally equal trees."""
    if isinstance(node, BgpNode):
        return ("BGP", tuple(node.triples))
    if isinstance(node, GroupNode):
        return ("GROUP", tuple(signature(c) for c in node.children))
    if isinstance(node, UnionNode):
        return ("UNION", tuple(signature(b) for b in node.branches))
    return ("OPTIONAL", signature(node.group))


def describe(node: BeNode, prefixes: dict[str, str] | None = None) -> str:
    if isinstance(node, BgpNode):
        return node.label(prefixes)
    if isinstance(node, GroupNode):
        return "GROUP"
    if isinstance(node, UnionNode):
        return f"UNION({len(node.branches)} branches)"
    return "OPTIONAL"


def explain(tree: BeTree, show_estimates: bool = False) -> list[str]:
    """Indented tree text, one node per line."""
    lines: list[str] = []
    _explain(tree.root, 0, tree.prefixes, show_estimates, lines)
    return lines


def _explain(
    node: BeNode, level: int, prefixes: dict[str, str], show_estimates: bool, out: list[str]
) -> None:
    line = INDENT * level + describe(node, prefixes)
    if show_estimates and isinstance(node, BgpNode) and node.estimate is not None:
        line += f"  est={node.estimate:g}"
    out.append(line)
    if isinstance(node, GroupNode):
        for child in node.children:
            _explain(child, level + 1, prefixes, show_estimates, out)
    elif isinstance(node, UnionNode):
        for branch in node.branches:
            _explain(branch, level + 1, prefixes, show_estimates, out)
    elif isinstance(node, OptionalNode):
        _explain(node.group, level + 1, prefixes, show_estimates, out)
