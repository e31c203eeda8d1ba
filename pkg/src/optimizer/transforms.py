"""Merge and inject rewrites on a BE-tree, applied in place and undoable.

merge:  P1 AND (P2 UNION P3)   ->  (P1 AND P2) UNION (P1 AND P3), P1 removed
inject: P1 OPTIONAL P2         ->  P1 OPTIONAL (P1 AND P2), P1 kept

In both, the copy of P1 lands as the leftmost child of the receiving group and
is coalesced with one chosen BGP child of that group. Moving patterns inside a
group past an OPTIONAL is only allowed when the hoist keeps the left-outer
join's meaning (see ``hoist_blocker``).
"""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass, field
from enum import Enum

from ..core.errors import ContractError
from ..plan.betree import (
    BeNode,
    BgpNode,
    GroupNode,
    OptionalNode,
    UnionNode,
    coalescable,
    hoist_blocker,
)


class TransformKind(Enum):
    MERGE = "merge"
    INJECT = "inject"


@dataclass
class Transformation:
    kind: TransformKind
    parent: GroupNode
    source: BgpNode
    target: UnionNode | OptionalNode
    # merge: one entry per UNION branch, None for "no BGP chosen"; inject: exactly one BGP
    choices: tuple[BgpNode | None, ...]


@dataclass
class Applied:
    """Enough state to put the tree back exactly as it was."""

    transformation: Transformation
    snapshots: list[tuple[list[BeNode], list[BeNode]]] = field(default_factory=list)
    created: list[BgpNode] = field(default_factory=list)


def _index(children: Sequence[BeNode], node: BeNode) -> int:
    for i, child in enumerate(children):
        if child is node:
            return i
    return -1


def _enters_group_safely(source: BgpNode, group: GroupNode) -> bool:
    """Whether joining ``source`` at the front of ``group`` equals joining it after the group."""
    return (
        hoist_blocker(group.children, source.variables(), 0, len(group.children)) is None
    )


def _hoists_to_front(source: BgpNode, group: GroupNode, node: BgpNode) -> bool:
    position = _index(group.children, node)
    return (
        hoist_blocker(group.children, node.variables(), 0, position, source.variables())
        is None
    )


def coalescable_children(source: BgpNode, group: GroupNode) -> list[BgpNode]:
    return [
        c
        for c in group.children
        if isinstance(c, BgpNode) and not c.is_empty and coalescable(source, c)
    ]


def merge_choices(source: BgpNode, union: UnionNode) -> list[list[BgpNode | None]]:
    """Per branch, the BGPs ``source`` may coalesce with; ``[None]`` for a branch with none."""
    out: list[list[BgpNode | None]] = []
    for branch in union.branches:
        usable: list[BgpNode | None] = [
            b for b in coalescable_children(source, branch) if _hoists_to_front(source, branch, b)
        ]
        out.append(usable or [None])
    return out


def merge_violation(parent: GroupNode, source: BgpNode, union: UnionNode) -> str | None:
    """Why ``source`` may not be merged into ``union``, or None when it may."""
    i = _index(parent.children, source)
    u = _index(parent.children, union)
    if i < 0 or u < 0:
        return "source and UNION are not siblings"
    if source.is_empty:
        return "source BGP is empty"
    lo, hi = sorted((i, u))
    if any(isinstance(c, OptionalNode) for c in parent.children[lo + 1 : hi]):
        return "an OPTIONAL lies between source and UNION"
    if not any(coalescable_children(source, b) for b in union.branches):
        return "no branch has a BGP coalescable with the source"
    for branch in union.branches:
        if not _enters_group_safely(source, branch):
            return "source cannot move in front of an OPTIONAL inside a branch"
    return None


def inject_violation(
    parent: GroupNode, source: BgpNode, optional: OptionalNode, target: BgpNode | None = None
) -> str | None:
    """Why ``source`` may not be injected into ``optional`` (coalescing with ``target``)."""
    i = _index(parent.children, source)
    o = _index(parent.children, optional)
    if i < 0 or o < 0:
        return "source and OPTIONAL are not siblings"
    if o < i:
        return "OPTIONAL is left of the source"
    if source.is_empty:
        return "source BGP is empty"
    group = optional.group
    if not coalescable_children(source, group):
        return "OPTIONAL group has no BGP coalescable with the source"
    if not _enters_group_safely(source, group):
        return "source cannot move in front of an OPTIONAL inside the group"
    if target is not None:
        if target not in coalescable_children(source, group):
            return "target is not a coalescable BGP child of the OPTIONAL group"
        if not _hoists_to_front(source, group, target):
            return "target cannot move in front of an OPTIONAL inside the group"
    return None


def _check_merge(x: Transformation) -> None:
    union = x.target
    if not isinstance(union, UnionNode):
        raise ContractError("merge targets a UNION node")
    reason = merge_violation(x.parent, x.source, union)
    if reason is None and len(x.choices) != len(union.branches):
        reason = "one choice per UNION branch is required"
    if reason is None:
        usable = merge_choices(x.source, union)
        for choice, allowed in zip(x.choices, usable, strict=True):
            if choice is not None and choice not in allowed:
                reason = "choice is not a usable BGP of its branch"
                break
    if reason is not None:
        raise ContractError(f"illegal merge: {reason}")


def apply_merge(x: Transformation) -> Applied:
    _check_merge(x)
    union = x.target
    applied = Applied(x)
    applied.snapshots.append((x.parent.children, list(x.parent.children)))
    for branch in union.branches:
        applied.snapshots.append((branch.children, list(branch.children)))

    # an empty BGP keeps the source's slot so sibling positions stay put
    placeholder = BgpNode()
    x.parent.children[_index(x.parent.children, x.source)] = placeholder
    applied.created.append(placeholder)
    for branch, choice in zip(union.branches, x.choices, strict=True):
        triples = list(x.source.triples)
        if choice is not None:
            triples += choice.triples
            del branch.children[_index(branch.children, choice)]
        merged = BgpNode(triples)
        branch.children.insert(0, merged)
        applied.created.append(merged)
    return applied


def apply_inject(x: Transformation) -> Applied:
    optional = x.target
    if not isinstance(optional, OptionalNode) or len(x.choices) != 1 or x.choices[0] is None:
        raise ContractError("inject targets an OPTIONAL node with one chosen BGP")
    target = x.choices[0]
    reason = inject_violation(x.parent, x.source, optional, target)
    if reason is not None:
        raise ContractError(f"illegal inject: {reason}")

    group = optional.group
    applied = Applied(x)
    applied.snapshots.append((group.children, list(group.children)))
    del group.children[_index(group.children, target)]
    injected = BgpNode([*x.source.triples, *target.triples])
    group.children.insert(0, injected)
    applied.created.append(injected)
    return applied


def undo(applied: Applied) -> None:
    for children, saved in reversed(applied.snapshots):
        children[:] = saved


undo_merge = undo
undo_inject = undo
