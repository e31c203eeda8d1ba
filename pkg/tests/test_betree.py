"""Unit tests for BE-tree construction, coalescing and inspection."""

from __future__ import annotations

import numpy as np
import pytest

from src.algebra.reference import reference_evaluate
from src.plan.betree import (
    BgpNode,
    GroupNode,
    OptionalNode,
    UnionNode,
    betree_to_pattern,
    build_betree,
    describe,
    explain,
    hoist_blocker,
    signature,
)
from src.sparql.parser import parse_query
from src.workload import queries, random_cases

PREFIX = "PREFIX ex: <http://example.org/>\n"


def tree_of(body: str):
    return build_betree(parse_query(PREFIX + "SELECT * WHERE { " + body + " }"))


def test_presidents_layout(presidents_query):
    tree = build_betree(presidents_query)
    kinds = [type(c) for c in tree.root.children]
    assert kinds == [BgpNode, UnionNode, OptionalNode]
    # the trailing required birth date joins the leading BGP
    assert len(tree.root.children[0].triples) == 2
    assert tree.rejected_hoists == []


def test_presidents_explain(presidents_query):
    assert explain(build_betree(presidents_query)) == [
        "GROUP",
        "  BGP{?v1 dbo:wikiPageWikiLink dbr:President_of_the_United_States . ?v1 dbp:birthDate ?v7}",
        "  UNION(2 branches)",
        "    GROUP",
        "      BGP{?v1 foaf:name ?v2}",
        "    GROUP",
        "      BGP{?v1 rdfs:label ?v2}",
        "  OPTIONAL",
        "    GROUP",
        "      BGP{?v1 owl:sameAs ?v3}",
        "      OPTIONAL",
        "        GROUP",
        "          BGP{?v3 dbp:birthDate ?v4}",
    ]


def test_explain_shows_estimates_when_known(presidents_query):
    tree = build_betree(presidents_query)
    tree.root.children[0].estimate = 1.0
    lines = explain(tree, show_estimates=True)
    assert lines[1].endswith("  est=1")
    assert "est=" not in lines[4]


def test_disconnected_triples_stay_separate():
    tree = tree_of("?x ex:a ?y . ?z ex:b ?w")
    assert [len(c.triples) for c in tree.root.children] == [1, 1]


def test_triples_connected_through_a_third_coalesce():
    tree = tree_of("?x ex:a ?y . ?z ex:b ?w . ?y ex:c ?z")
    assert len(tree.root.children) == 1
    assert len(tree.root.children[0].triples) == 3


def test_predicate_variables_do_not_connect():
    tree = tree_of("?x ?p ?y . ?z ?p ?w")
    assert len(tree.root.children) == 2


def test_hoist_past_optional_binding_a_new_variable_is_refused():
    tree = tree_of("?x ex:a ?y . OPTIONAL { ?x ex:b ?z } ?x ex:c ?z")
    assert [type(c) for c in tree.root.children] == [BgpNode, OptionalNode, BgpNode]
    assert tree.rejected_hoists == [
        "kept BGP{?x ex:c ?z} apart from BGP{?x ex:a ?y}: OPTIONAL binds ?z"
    ]


def test_hoist_past_optional_on_bound_variables_is_allowed():
    tree = tree_of("?x ex:a ?y . OPTIONAL { ?x ex:b ?z } ?x ex:c ?w")
    assert [type(c) for c in tree.root.children] == [BgpNode, OptionalNode]
    assert len(tree.root.children[0].triples) == 2


def test_union_chains_flatten_into_one_node():
    tree = tree_of("{ { ?x ex:a ?y } UNION { ?x ex:b ?y } } UNION { ?x ex:c ?y }")
    (union,) = tree.root.children
    assert isinstance(union, UnionNode)
    assert len(union.branches) == 3
    assert describe(union) == "UNION(3 branches)"


def test_nested_group_is_its_own_node():
    tree = tree_of("?x ex:a ?y { ?y ex:b ?z }")
    assert [type(c) for c in tree.root.children] == [BgpNode, GroupNode]


def test_empty_query_has_one_empty_bgp():
    tree = tree_of("")
    (leaf,) = tree.root.children
    assert isinstance(leaf, BgpNode) and leaf.is_empty


def test_hoist_blocker_finds_the_optional():
    tree = tree_of("?x ex:a ?y . OPTIONAL { ?y ex:b ?z } ?w ex:c ?v")
    children = tree.root.children
    assert hoist_blocker(children, {"z"}, 1, 2) is children[1]
    assert hoist_blocker(children, {"y"}, 1, 2) is None
    assert hoist_blocker(children, {"z"}, 1, 2, extra_certain={"z"}) is None


def test_round_trip_preserves_results(presidents_store, presidents_query):
    pattern = betree_to_pattern(build_betree(presidents_query))
    expected = reference_evaluate(presidents_query.body, presidents_store)
    assert reference_evaluate(pattern, presidents_store) == expected


def test_signature_is_structural(presidents_query):
    a = build_betree(presidents_query)
    b = build_betree(presidents_query)
    assert a.root is not b.root
    assert signature(a.root) == signature(b.root)
    b.root.children.reverse()
    assert signature(a.root) != signature(b.root)


def group_depth(group: GroupNode) -> int:
    """Nesting depth of groups, counting ``group`` itself as 1."""
    inner = [0]
    for child in group.children:
        if isinstance(child, GroupNode):
            inner.append(group_depth(child))
        elif isinstance(child, UnionNode):
            inner.extend(group_depth(b) for b in child.branches)
        elif isinstance(child, OptionalNode):
            inner.append(group_depth(child.group))
    return 1 + max(inner)


def all_nodes(group: GroupNode):
    for child in group.children:
        yield child
        if isinstance(child, GroupNode):
            yield from all_nodes(child)
        elif isinstance(child, UnionNode):
            for branch in child.branches:
                yield from all_nodes(branch)
        elif isinstance(child, OptionalNode):
            yield from all_nodes(child.group)


def test_lubm_department_heads_layout():
    tree = build_betree(parse_query(queries.get("lubm_mixed_06").text))
    nodes = list(all_nodes(tree.root))
    unions = [n for n in nodes if isinstance(n, UnionNode)]
    optionals = [n for n in nodes if isinstance(n, OptionalNode)]
    assert len(unions) == 3
    assert all(len(u.branches) == 2 for u in unions)
    assert len(optionals) == 2
    # the second OPTIONAL wraps a UNION: root, OPTIONAL group, branch group
    assert [type(c) for c in optionals[1].group.children] == [UnionNode]
    assert group_depth(tree.root) == 3
    assert sum(len(b.triples) for b in tree.bgp_nodes()) == 10
    assert tree.rejected_hoists == []


@pytest.mark.slow
@pytest.mark.parametrize("fixture", queries.list_all(), ids=lambda f: f.id)
def test_round_trip_preserves_results_on_fixtures(fixture):
    q = parse_query(fixture.text)
    pattern = betree_to_pattern(build_betree(q))
    for seed in range(3):
        store = random_cases.vocabulary_store(q, np.random.default_rng(seed))
        assert reference_evaluate(pattern, store) == reference_evaluate(q.body, store)
