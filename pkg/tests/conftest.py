"""Shared pytest fixtures."""

from __future__ import annotations

import sys
from pathlib import Path

import pytest

# Make `src.*` importable without installing the package
REPO_ROOT = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(REPO_ROOT))

from src.sparql.ast import Query  # noqa: E402
from src.sparql.parser import parse_query  # noqa: E402
from src.store.rdf_store import Store, load_ntriples_file  # noqa: E402
from src.store.terms import Term  # noqa: E402
from src.workload import queries  # noqa: E402

DBR = "http://dbpedia.org/resource/"
DBO = "http://dbpedia.org/ontology/"
FOAF = "http://xmlns.com/foaf/0.1/"
RDFS = "http://www.w3.org/2000/01/rdf-schema#"
OWL = "http://www.w3.org/2002/07/owl#"


@pytest.fixture
def repo_root() -> Path:
    return REPO_ROOT


@pytest.fixture
def tmp_config_path(tmp_path) -> Path:
    """A writable tmp path for RunConfig load/save round-trip tests."""
    return tmp_path / "config.json"


@pytest.fixture(scope="session")
def presidents_store() -> Store:
    """The seven-triple example store in data/presidents.nt."""
    return load_ntriples_file(REPO_ROOT / "data" / "presidents.nt")


@pytest.fixture(scope="session")
def presidents_query() -> Query:
    return parse_query(queries.get("presidents_names").text)


@pytest.fixture
def iri():
    """Shorthand for building IRIs in the vocabularies the example store uses."""
    prefixes = {"dbr": DBR, "dbo": DBO, "foaf": FOAF, "rdfs": RDFS, "owl": OWL}

    def make(name: str) -> Term:
        prefix, _, local = name.partition(":")
        return Term.iri(prefixes[prefix] + local)

    return make
