"""Naive evaluator over the binary pattern tree. This is the correctness oracle.

No indexes, no reordering, no pruning: every triple pattern is matched by a full
pass over the store and the operators are applied exactly as written.
"""

from __future__ import annotations

from ..sparql.ast import (
    AndPattern,
    BgpPattern,
    GraphPattern,
    GroupPattern,
    OptionalPattern,
    TriplePattern,
    UnionPattern,
    Variable,
)
from ..store.rdf_store import Store
from .bags import Bag, join, left_outer_join, union_bag


def reference_evaluate(p: GraphPattern, store: Store) -> Bag:
    if isinstance(p, BgpPattern):
        result = Bag.identity()
        for t in p.triples:
            result = join(result, match_triple(t, store))
        return result
    if isinstance(p, GroupPattern):
        return reference_evaluate(p.inner, store)
    if isinstance(p, AndPattern):
        return join(reference_evaluate(p.left, store), reference_evaluate(p.right, store))
    if isinstance(p, UnionPattern):
        return union_bag(reference_evaluate(p.left, store), reference_evaluate(p.right, store))
    if isinstance(p, OptionalPattern):
        return left_outer_join(
            reference_evaluate(p.left, store), reference_evaluate(p.right, store)
        )
    raise TypeError(f"unknown pattern node: {p!r}")


def match_triple(t: TriplePattern, store: Store) -> Bag:
    """All bindings of ``t``'s variables that turn it into a triple of the store."""
    positions = (t.s, t.p, t.o)
    constants: list[int | None] = []
    for atom in positions:
        if isinstance(atom, Variable):
            constants.append(None)
            continue
        term_id = store.encode(atom)
        if term_id is None:
            return Bag()
        constants.append(term_id)

    rows = []
    for triple in store.scan():
        binding: dict[str, int] = {}
        for atom, want, value in zip(positions, constants, triple, strict=True):
            if want is not None:
                if value != want:
                    break
            elif binding.setdefault(atom.name, value) != value:
                break
        else:
            rows.append(binding)
    return Bag(rows)
