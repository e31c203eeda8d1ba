"""Unit tests for BGP planning, cardinality estimation and evaluation."""

from __future__ import annotations

import time

import pytest

from src.algebra.bags import Bag
from src.algebra.reference import reference_evaluate
from src.core.errors import ContractError, QueryTimeout
from src.engine.bgp_engine import (
    CardEstimator,
    Deadline,
    binary_join_cost,
    estimate_cardinality,
    evaluate_bgp,
    match_count,
    order_triples,
    plan_bgp,
    wco_step_cost,
)
from src.sparql.ast import BgpPattern, TriplePattern, Variable
from src.store.rdf_store import Store
from src.store.terms import Term
from src.workload.profiles import build_profile_store

EX = "http://example.org/"


def var(name: str) -> Variable:
    return Variable(name)


@pytest.fixture
def linked_names(iri):
    """?x links to the presidency and has a foaf:name."""
    link = TriplePattern(
        var("x"), iri("dbo:wikiPageWikiLink"), iri("dbr:President_of_the_United_States")
    )
    name = TriplePattern(var("x"), iri("foaf:name"), var("n"))
    return link, name


def test_cost_formulas():
    assert binary_join_cost(5, 7) == 17
    assert binary_join_cost(7, 5) == 17
    assert wco_step_cost(10, 3) == 30


def test_single_pattern_estimate_is_exact(presidents_store, linked_names):
    _, name = linked_names
    assert CardEstimator(presidents_store).estimate([name]) == 2.0
    assert estimate_cardinality(presidents_store, [name]) == 2.0


def test_empty_prefix_estimates_one_row(presidents_store):
    assert CardEstimator(presidents_store).estimate([]) == 1.0


def test_estimate_never_drops_below_one():
    a, b, c = (Term.iri(EX + x) for x in "abc")
    p1, p2 = Term.iri(EX + "p1"), Term.iri(EX + "p2")
    # ?y p2 ?z exists, but never from the object of a p1 edge
    store = Store.from_terms([(a, p1, b), (c, p2, a)])
    first = TriplePattern(var("x"), p1, var("y"))
    second = TriplePattern(var("y"), p2, var("z"))
    assert CardEstimator(store).estimate([first, second]) == 1.0


def test_estimate_of_unmatched_base_stays_zero(presidents_store):
    missing = TriplePattern(var("x"), Term.iri(EX + "nothing"), var("y"))
    follow = TriplePattern(var("y"), Term.iri(EX + "nothing"), var("z"))
    assert CardEstimator(presidents_store).estimate([missing, follow]) == 0.0


def test_sample_size_must_be_positive(presidents_store):
    with pytest.raises(ValueError):
        CardEstimator(presidents_store, sample_size=0)


def test_sampled_estimates_are_seeded():
    store = build_profile_store()
    same_as = TriplePattern(var("x"), Term.iri("http://www.w3.org/2002/07/owl#sameAs"), var("y"))
    name = TriplePattern(var("x"), Term.iri("http://xmlns.com/foaf/0.1/name"), var("n"))
    a = CardEstimator(store, sample_size=50, seed=3).estimate([same_as, name])
    b = CardEstimator(store, sample_size=50, seed=3).estimate([same_as, name])
    assert a == b
    assert a >= 1.0


@pytest.mark.parametrize("seed", [0, 1])
@pytest.mark.parametrize("sample_size", [1, 7, 50, 300, 1000])
def test_one_row_per_sample_keeps_the_estimate(sample_size, seed):
    hub, p1, p2 = Term.iri(EX + "hub"), Term.iri(EX + "p1"), Term.iri(EX + "p2")
    statements = []
    for i in range(300):
        node = Term.iri(f"{EX}e{i}")
        statements += [(node, p1, hub), (node, p2, Term.iri(f"{EX}n{i}"))]
    store = Store.from_terms(statements)
    first = TriplePattern(var("x"), p1, var("y"))
    second = TriplePattern(var("x"), p2, var("z"))
    est = CardEstimator(store, sample_size=sample_size, seed=seed)
    assert est.estimate([first]) == 300.0
    # every sampled row extends to exactly one row
    assert est.estimate([first, second]) == 300.0


@pytest.mark.parametrize("sample_size", [10, 100])
def test_sample_covering_every_row_is_exact(sample_size):
    hub, p1, p2 = Term.iri(EX + "hub"), Term.iri(EX + "p1"), Term.iri(EX + "p2")
    statements = []
    for i in range(10):
        node = Term.iri(f"{EX}e{i}")
        statements.append((node, p1, hub))
        statements += [(node, p2, Term.iri(f"{EX}n{i}_{k}")) for k in range(i)]
    store = Store.from_terms(statements)
    triples = (TriplePattern(var("x"), p1, var("y")), TriplePattern(var("x"), p2, var("z")))
    exact = len(reference_evaluate(BgpPattern(triples), store))
    assert exact == 45
    assert CardEstimator(store, sample_size=sample_size).estimate(list(triples)) == exact


def test_match_count_with_repeated_variable():
    a, b, p = Term.iri(EX + "a"), Term.iri(EX + "b"), Term.iri(EX + "p")
    store = Store.from_terms([(a, p, a), (a, p, b), (b, p, b)])
    assert match_count(store, TriplePattern(var("v"), p, var("v"))) == 2
    assert match_count(store, TriplePattern(var("s"), p, var("o"))) == 3


def test_plan_of_two_patterns(presidents_store, linked_names):
    link, name = linked_names
    plan = plan_bgp(presidents_store, [name, link])
    # equal counts: the first pattern in the given order starts
    assert plan.order == [name, link]
    assert plan.per_step_cost == [2.0, 2.0]
    assert plan.cost == 4.0
    assert plan.estimated_result_size == 2.0
    assert plan.binary_cost == 6.0
    assert plan.vertex_order[0] == "?x"


def test_plan_of_nothing(presidents_store):
    plan = plan_bgp(presidents_store, [])
    assert plan.steps == ()
    assert plan.cost == 0
    assert plan.estimated_result_size == 1.0


def test_order_prefers_the_most_selective_start(presidents_store, iri):
    born = TriplePattern(var("x"), Term.iri("http://dbpedia.org/property/birthDate"), var("d"))
    name = TriplePattern(var("x"), iri("foaf:name"), var("n"))
    assert order_triples(presidents_store, [name, born]) == [born, name]


def test_order_takes_closing_pattern_next():
    a, b, c, d, e = (Term.iri(EX + x) for x in "abcde")
    p, q, r, s = (Term.iri(EX + x) for x in "pqrs")
    store = Store.from_terms(
        [(a, p, b), (b, q, c), (d, q, e), (a, r, c), (a, r, d), (a, r, e), (c, s, d), (e, s, a)]
    )
    first = TriplePattern(var("x"), p, var("y"))
    second = TriplePattern(var("y"), q, var("z"))
    closing = TriplePattern(var("x"), r, var("z"))
    last = TriplePattern(var("z"), s, var("w"))
    # p is the rarest; q fans out less than r; once x and z are bound r only checks
    order = order_triples(store, [last, closing, second, first])
    assert order == [first, second, closing, last]


def test_evaluate_bgp_matches_reference(presidents_store, linked_names):
    link, name = linked_names
    result = evaluate_bgp(presidents_store, [link, name])
    assert len(result) == 2
    assert result == reference_evaluate(BgpPattern((link, name)), presidents_store)


def test_evaluate_bgp_with_candidates(presidents_store, linked_names, iri):
    link, name = linked_names
    clinton = presidents_store.encode(iri("dbr:Bill_Clinton"))
    result = evaluate_bgp(presidents_store, [link, name], cand=Bag([{"x": clinton}]))
    assert len(result) == 1
    (row,) = result
    assert row["x"] == clinton


def test_candidates_on_uncertain_variables_filter_afterwards(presidents_store, linked_names, iri):
    link, name = linked_names
    clinton = presidents_store.encode(iri("dbr:Bill_Clinton"))
    bush_name = presidents_store.encode(Term.literal("George Walker Bush", language="en"))
    cand = Bag([{"x": clinton}, {"n": bush_name}])
    assert len(evaluate_bgp(presidents_store, [link, name], cand=cand)) == 2
    assert len(evaluate_bgp(presidents_store, [link, name], cand=Bag([{"n": bush_name}]))) == 1


def test_empty_candidate_set_gives_no_rows(presidents_store, linked_names):
    assert evaluate_bgp(presidents_store, list(linked_names), cand=Bag()) == Bag()


def test_empty_bgp_is_identity(presidents_store):
    assert evaluate_bgp(presidents_store, []) == Bag.identity()


def test_unknown_constant_gives_no_rows(presidents_store, linked_names):
    _, name = linked_names
    missing = TriplePattern(var("x"), Term.iri(EX + "nothing"), var("z"))
    assert evaluate_bgp(presidents_store, [name, missing]) == Bag()


def test_disconnected_bgp_is_a_contract_error(presidents_store):
    a = TriplePattern(var("x"), Term.iri(EX + "p"), var("y"))
    b = TriplePattern(var("z"), Term.iri(EX + "p"), var("w"))
    with pytest.raises(ContractError):
        evaluate_bgp(presidents_store, [a, b])


def test_deadline():
    Deadline().check()
    Deadline(budget_us=10_000_000).check()
    expired = Deadline(budget_us=10, started=time.perf_counter() - 1.0)
    with pytest.raises(QueryTimeout) as exc:
        expired.check()
    assert exc.value.budget_us == 10


def test_evaluation_honours_an_expired_deadline(presidents_store, linked_names):
    expired = Deadline(budget_us=10, started=time.perf_counter() - 1.0)
    with pytest.raises(QueryTimeout):
        evaluate_bgp(presidents_store, list(linked_names), deadline=expired)
