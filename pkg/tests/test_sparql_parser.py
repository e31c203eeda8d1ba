"""Unit tests for the SPARQL parser: precedence, terms, and error positions."""

from __future__ import annotations

import pytest

from src.core.errors import ParseError
from src.sparql.ast import (
    AndPattern,
    BgpPattern,
    GroupPattern,
    OptionalPattern,
    TriplePattern,
    UnionPattern,
    Variable,
    pattern_triples,
)
from src.sparql.parser import RDF_TYPE, parse_query, tokenize
from src.store.terms import Term
from src.workload import queries

EX = "http://example.org/"
PREFIX = f"PREFIX ex: <{EX}>\n"


def tp(s: str, p: str, o: str) -> TriplePattern:
    """Triple pattern from '?var' or 'ex:' local names."""

    def atom(x: str):
        return Variable(x[1:]) if x.startswith("?") else Term.iri(EX + x)

    return TriplePattern(atom(s), atom(p), atom(o))


def bgp(*triples: TriplePattern) -> BgpPattern:
    return BgpPattern(tuple(triples))


def test_minimal_select_star():
    q = parse_query("SELECT * WHERE { ?s ?p ?o }")
    assert q.is_wildcard
    assert q.body == GroupPattern(bgp(TriplePattern(Variable("s"), Variable("p"), Variable("o"))))
    assert q.output_variables() == ["s", "p", "o"]


def test_where_keyword_is_optional():
    assert parse_query("SELECT * { ?s ?p ?o }") == parse_query("SELECT * WHERE { ?s ?p ?o }")


def test_optional_is_left_associative_over_preceding_siblings():
    q = parse_query(
        PREFIX + "SELECT * WHERE { ?x ex:a ?y OPTIONAL { ?x ex:b ?z } OPTIONAL { ?x ex:c ?w } }"
    )
    a, b, c = tp("?x", "a", "?y"), tp("?x", "b", "?z"), tp("?x", "c", "?w")
    expected = OptionalPattern(
        OptionalPattern(bgp(a), GroupPattern(bgp(b))),
        GroupPattern(bgp(c)),
    )
    assert q.body == GroupPattern(expected)


def test_union_binds_tighter_than_and():
    q = parse_query(PREFIX + "SELECT * WHERE { { ?x ex:a ?y } UNION { ?x ex:b ?y } . ?x ex:c ?z }")
    union = UnionPattern(
        GroupPattern(bgp(tp("?x", "a", "?y"))), GroupPattern(bgp(tp("?x", "b", "?y")))
    )
    assert q.body == GroupPattern(AndPattern(union, bgp(tp("?x", "c", "?z"))))


def test_union_chain_nests_left():
    q = parse_query(
        PREFIX + "SELECT * WHERE { { ?x ex:a ?y } UNION { ?x ex:b ?y } UNION { ?x ex:c ?y } }"
    )
    inner = q.body.inner
    assert isinstance(inner, UnionPattern)
    assert isinstance(inner.left, UnionPattern)
    assert inner.right == GroupPattern(bgp(tp("?x", "c", "?y")))


def test_leading_optional_has_empty_left():
    q = parse_query(PREFIX + "SELECT * WHERE { OPTIONAL { ?x ex:a ?y } }")
    right = GroupPattern(bgp(tp("?x", "a", "?y")))
    assert q.body == GroupPattern(OptionalPattern(BgpPattern(), right))


def test_empty_group_is_empty_bgp():
    assert parse_query("SELECT * WHERE { }").body == GroupPattern(BgpPattern())


def test_a_is_rdf_type_in_predicate_position():
    q = parse_query(PREFIX + "SELECT ?x WHERE { ?x a ex:Person }")
    (t,) = pattern_triples(q.body)
    assert t.p == Term.iri(RDF_TYPE)
    assert q.projection == (Variable("x"),)


def test_literals_with_language_and_datatype():
    text = (
        PREFIX
        + 'PREFIX xsd: <http://www.w3.org/2001/XMLSchema#>\n'
        + 'SELECT * WHERE { ?x ex:name "Bill Clinton"@en . ?x ex:born "1946-08-19"^^xsd:date . '
        + "?x ex:note 'say \\\"hi\\\"' }"
    )
    name, born, note = pattern_triples(parse_query(text).body)
    assert name.o == Term.literal("Bill Clinton", language="en")
    assert born.o == Term.literal("1946-08-19", datatype="http://www.w3.org/2001/XMLSchema#date")
    assert note.o == Term.literal('say "hi"')


def test_prefixed_names_with_colons_and_dots():
    q = parse_query(
        "PREFIX dbr: <http://dbpedia.org/resource/>\n"
        "SELECT * WHERE { ?x ?p dbr:Category:Cell_biology . ?x ?p dbr:George_W._Bush . }"
    )
    first, second = pattern_triples(q.body)
    assert first.o == Term.iri("http://dbpedia.org/resource/Category:Cell_biology")
    assert second.o == Term.iri("http://dbpedia.org/resource/George_W._Bush")


def test_prefixes_are_kept_but_not_compared():
    q = parse_query(PREFIX + "SELECT * WHERE { ?x ex:a ?y }")
    assert q.prefixes == {"ex": EX}
    assert q == parse_query(f"SELECT * WHERE {{ ?x <{EX}a> ?y }}")


def test_presidents_fixture_shape(presidents_query):
    body = presidents_query.body
    assert len(pattern_triples(body)) == 6
    assert presidents_query.output_variables() == ["v1", "v2", "v3", "v4", "v7"]


@pytest.mark.parametrize("fixture", queries.list_all(), ids=lambda f: f.id)
def test_every_fixture_parses(fixture):
    q = parse_query(fixture.text)
    assert pattern_triples(q.body)


def test_tokens_carry_positions():
    tokens = tokenize("SELECT *\n  WHERE { }")
    where = next(t for t in tokens if t.text == "WHERE")
    assert (where.line, where.column) == (2, 3)
    assert tokens[-1].kind == "eof"


def test_unknown_prefix_position():
    with pytest.raises(ParseError) as exc:
        parse_query("SELECT * WHERE {\n  ?s ex:p ?o }")
    assert (exc.value.line, exc.value.column) == (2, 6)
    assert "unknown prefix" in exc.value.message


def test_empty_iri_is_a_parse_error():
    with pytest.raises(ParseError) as exc:
        parse_query("SELECT * WHERE { ?s <> ?o }")
    assert (exc.value.line, exc.value.column) == (1, 21)
    assert exc.value.message == "IRI must not be empty"


def test_prefix_bound_to_empty_iri():
    # binding is fine, a bare use expands to nothing
    q = parse_query("PREFIX ex: <>\nSELECT * WHERE { ?s ex:p ?o }")
    assert q.prefixes == {"ex": ""}
    with pytest.raises(ParseError) as exc:
        parse_query("PREFIX ex: <>\nSELECT * WHERE {\n  ?s ex: ?o }")
    assert (exc.value.line, exc.value.column) == (3, 6)
    assert exc.value.message == "IRI must not be empty"


def test_empty_datatype_iri_is_a_parse_error():
    with pytest.raises(ParseError, match="IRI must not be empty"):
        parse_query('SELECT * WHERE { ?s ?p "1"^^<> }')


def test_missing_closing_brace():
    with pytest.raises(ParseError) as exc:
        parse_query("SELECT * WHERE { ?s ?p ?o")
    assert "unbalanced" in exc.value.message


def test_stray_closing_brace():
    with pytest.raises(ParseError) as exc:
        parse_query("SELECT * WHERE { ?s ?p ?o } }")
    assert exc.value.column == 29


@pytest.mark.parametrize(
    "text, keyword",
    [
        ("SELECT * WHERE { ?s ?p ?o } LIMIT 10", "LIMIT"),
        ("SELECT * WHERE { ?s ?p ?o . FILTER (?o) }", "FILTER"),
        ("SELECT DISTINCT ?s WHERE { ?s ?p ?o }", "DISTINCT"),
        ("ASK { ?s ?p ?o }", "ASK"),
        ("SELECT * WHERE { ?s ?p ?o MINUS { ?s ?p ?o } }", "MINUS"),
    ],
)
def test_unsupported_keywords_are_rejected(text, keyword):
    with pytest.raises(ParseError) as exc:
        parse_query(text)
    assert exc.value.message == f"unsupported keyword {keyword}"


def test_union_without_left_group():
    with pytest.raises(ParseError) as exc:
        parse_query("SELECT * WHERE { ?s ?p ?o UNION { ?s ?p ?o } }")
    assert "UNION" in exc.value.message


def test_projected_variable_must_occur_in_body():
    with pytest.raises(ParseError) as exc:
        parse_query("SELECT ?missing WHERE { ?s ?p ?o }")
    assert exc.value.column == 8


def test_duplicate_projection_is_rejected():
    with pytest.raises(ParseError):
        parse_query("SELECT ?s ?s WHERE { ?s ?p ?o }")


def test_literal_subject_is_rejected():
    with pytest.raises(ParseError) as exc:
        parse_query('SELECT * WHERE { "x" ?p ?o }')
    assert exc.value.column == 18


def test_blank_nodes_in_patterns_are_rejected():
    with pytest.raises(ParseError):
        parse_query("SELECT * WHERE { _:b ?p ?o }")


def test_unexpected_character_reports_position():
    with pytest.raises(ParseError) as exc:
        parse_query("SELECT * WHERE { ?s ?p ?o ; }")
    assert exc.value.column == 27
