"""Unit tests for the local Δ-cost model."""

from __future__ import annotations

import pytest

from src.optimizer import cost as cost_module
from src.optimizer.cost import (
    LocalCost,
    SizeEstimator,
    delta_cost,
    f_and,
    f_optional,
    f_union,
    local_cost_inject,
    local_cost_merge,
)
from src.plan.betree import build_betree
from src.sparql.parser import parse_query
from src.store.rdf_store import Store
from src.store.terms import Term

EX = "http://example.org/"
PREFIX = f"PREFIX ex: <{EX}>\n"


@pytest.fixture
def unit_store() -> Store:
    """One subject with one edge per predicate: every single-pattern BGP has one row."""
    a = Term.iri(EX + "a")
    return Store.from_terms(
        [(a, Term.iri(f"{EX}p{i}"), Term.iri(f"{EX}o{i}")) for i in range(1, 5)]
    )


def tree_of(body: str):
    return build_betree(parse_query(PREFIX + "SELECT * WHERE { " + body + " }"))


def test_algebra_functions():
    assert f_and(2, 3, 4) == 24
    assert f_and() == 1
    assert f_union(2, 3) == 5
    assert f_optional(3, 7) == 21


def test_local_cost_total_and_delta():
    before = LocalCost(bgp_cost=3, algebra_cost=6)
    after = LocalCost(bgp_cost=4, algebra_cost=6)
    assert before.total == 9
    assert delta_cost(before, after) == 1


def test_size_recursion(unit_store):
    tree = tree_of("?x ex:p1 ?y { ?x ex:p2 ?z } UNION { ?x ex:p3 ?w } OPTIONAL { ?x ex:p4 ?v }")
    est = SizeEstimator(unit_store)
    assert est.size(tree.root) == 2.0
    source = tree.root.children[0]
    assert source.estimate == 1.0
    assert est.sides(tree.root, tree.root.children[1]) == (1.0, 1.0)


def test_empty_bgp_costs_nothing(unit_store):
    est = SizeEstimator(unit_store)
    assert est.bgp_estimate([]) == (0.0, 1.0)


def test_merge_cost_with_unit_sizes(unit_store):
    tree = tree_of("?x ex:p1 ?y { ?x ex:p2 ?z } UNION { ?x ex:p3 ?w }")
    source, union = tree.root.children
    chosen = [b.children[0] for b in union.branches]
    cost = local_cost_merge(SizeEstimator(unit_store), tree.root, source, union, chosen)
    # three one-row BGPs; source term 1*1*2, two branch terms, UNION 1+1
    assert cost == LocalCost(bgp_cost=3.0, algebra_cost=6.0)


def test_merge_cost_branch_without_choice(unit_store):
    tree = tree_of("?x ex:p1 ?y { ?x ex:p2 ?z } UNION { ?x ex:p3 ?w }")
    source, union = tree.root.children
    chosen = [union.branches[0].children[0], None]
    cost = local_cost_merge(SizeEstimator(unit_store), tree.root, source, union, chosen)
    assert cost == LocalCost(bgp_cost=2.0, algebra_cost=6.0)


def test_inject_cost_with_unit_sizes(unit_store):
    tree = tree_of("?x ex:p1 ?y OPTIONAL { ?x ex:p2 ?z }")
    source, optional = tree.root.children
    target = optional.group.children[0]
    cost = local_cost_inject(SizeEstimator(unit_store), tree.root, source, optional, target)
    assert cost == LocalCost(bgp_cost=2.0, algebra_cost=3.0)


def test_estimates_are_memoized(unit_store, mocker):
    tree = tree_of("?x ex:p1 ?y . ?x ex:p2 ?z")
    (node,) = tree.root.children
    spy = mocker.spy(cost_module, "plan_bgp")
    est = SizeEstimator(unit_store)
    est.cost(node)
    est.size(node)
    est.cost(node)
    assert spy.call_count == 1
