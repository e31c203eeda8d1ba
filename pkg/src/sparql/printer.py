"""Render a Query back to SPARQL text that re-parses to the same tree."""

from __future__ import annotations

from .ast import (
    AndPattern,
    BgpPattern,
    GraphPattern,
    GroupPattern,
    OptionalPattern,
    Query,
    UnionPattern,
)

INDENT = "  "


def pattern_to_text(q: Query) -> str:
    lines = [f"PREFIX {name}: <{iri}>" for name, iri in sorted(q.prefixes.items())]
    if q.projection is None:
        head = "SELECT *"
    else:
        head = "SELECT " + " ".join(str(v) for v in q.projection)
    block = group_lines(q.body, q.prefixes)
    block[0] = f"{head} WHERE {block[0]}"
    lines.extend(block)
    return "\n".join(lines) + "\n"


def group_lines(group: GroupPattern, prefixes: dict[str, str] | None = None) -> list[str]:
    """A braced group, one element per line, nested groups indented."""
    body = [INDENT + line for line in _element_lines(group.inner, prefixes)]
    return ["{", *body, "}"]


def _element_lines(p: GraphPattern, prefixes: dict[str, str] | None) -> list[str]:
    if isinstance(p, BgpPattern):
        return [t.text(prefixes) + " ." for t in p.triples]
    if isinstance(p, GroupPattern):
        return group_lines(p, prefixes)
    if isinstance(p, AndPattern):
        return _element_lines(p.left, prefixes) + _element_lines(p.right, prefixes)
    if isinstance(p, OptionalPattern):
        right = _as_group(p.right)
        block = group_lines(right, prefixes)
        block[0] = "OPTIONAL " + block[0]
        return _element_lines(p.left, prefixes) + block
    if isinstance(p, UnionPattern):
        lines: list[str] = []
        for i, branch in enumerate(_union_branches(p)):
            block = group_lines(branch, prefixes)
            if i:
                block[0] = "UNION " + block[0]
            lines.extend(block)
        return lines
    raise TypeError(f"unknown pattern node: {p!r}")


def _union_branches(p: UnionPattern) -> list[GroupPattern]:
    branches: list[GroupPattern] = []
    left = p.left
    if isinstance(left, UnionPattern):
        branches.extend(_union_branches(left))
    else:
        branches.append(_as_group(left))
    branches.append(_as_group(p.right))
    return branches


def _as_group(p: GraphPattern) -> GroupPattern:
    return p if isinstance(p, GroupPattern) else GroupPattern(p)
