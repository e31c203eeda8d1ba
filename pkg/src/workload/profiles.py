"""Synthetic selectivity profiles: one seeded store and the query shapes that stress each rewrite.

- ``selective_inject``: a BGP matching two rows in front of OPTIONALs over large
  predicates. Injecting it shrinks the OPTIONAL sides by orders of magnitude.
- ``unselective_merge``: a BGP whose only join variable takes two values,
  next to a UNION. Merging it multiplies every branch, so the merge is refused.
- ``optional_pruning``: the selective BGP in front of a single OPTIONAL. With
  candidate pruning the OPTIONAL side only looks at the two candidate subjects.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from ..sparql.ast import Query
from ..sparql.parser import parse_query
from ..store.rdf_store import Store, StoreBuilder
from ..store.terms import Term

EX = "http://example.org/"
OWL_SAME_AS = "http://www.w3.org/2002/07/owl#sameAs"
FOAF_NAME = "http://xmlns.com/foaf/0.1/name"

PAGES = 1000
TOPICS = 200
WIKI_LINKS = 1000
SAME_AS = 3000
NAMED_PAGES = 800
MEMBERS = 1000
GROUPS = 2
TAGS_PER_GROUP = 50

_PREFIXES = f"""PREFIX ex: <{EX}>
PREFIX owl: <http://www.w3.org/2002/07/owl#>
PREFIX foaf: <http://xmlns.com/foaf/0.1/>
"""


@dataclass(frozen=True)
class Profile:
    name: str
    description: str
    text: str

    @property
    def query(self) -> Query:
        return parse_query(self.text)


PROFILES: dict[str, Profile] = {
    p.name: p
    for p in (
        Profile(
            "selective_inject",
            "two-row BGP followed by OPTIONALs over sameAs and names",
            _PREFIXES
            + """SELECT * WHERE {
  ?x ex:wikiLink ex:President .
  OPTIONAL { ?x owl:sameAs ?y . }
  OPTIONAL { ?x foaf:name ?n . }
}
""",
        ),
        Profile(
            "unselective_merge",
            "BGP joining on a two-valued variable next to a UNION",
            _PREFIXES
            + """SELECT * WHERE {
  ?x ex:memberOf ?g .
  { ?g ex:tag ?n . } UNION { ?g ex:altName ?n . }
}
""",
        ),
        Profile(
            "optional_pruning",
            "two-row BGP followed by one large OPTIONAL",
            _PREFIXES
            + """SELECT * WHERE {
  ?x ex:wikiLink ex:President .
  OPTIONAL { ?x owl:sameAs ?y . }
}
""",
        ),
    )
}


def _iri(local: str) -> Term:
    return Term.iri(EX + local)


@lru_cache(maxsize=4)
def build_profile_store(seed: int = 0) -> Store:
    """About six thousand triples. Deterministic for a seed."""
    rng = np.random.default_rng(seed)
    b = StoreBuilder()
    wiki_link = _iri("wikiLink")
    same_as = Term.iri(OWL_SAME_AS)
    name = Term.iri(FOAF_NAME)
    president = _iri("President")

    # the two selective subjects: 2 and 1 aliases
    for i, aliases in enumerate((2, 1)):
        person = _iri(f"president{i}")
        b.add(person, wiki_link, president)
        b.add(person, name, Term.literal(f"President {i}", language="en"))
        for j in range(aliases):
            b.add(person, same_as, _iri(f"president{i}_alias{j}"))

    sources = rng.integers(0, PAGES, size=WIKI_LINKS)
    targets = rng.integers(0, TOPICS, size=WIKI_LINKS)
    for s, t in zip(sources, targets, strict=True):
        b.add(_iri(f"page{s}"), wiki_link, _iri(f"topic{t}"))

    owners = rng.integers(0, PAGES, size=SAME_AS)
    for j, s in enumerate(owners):
        b.add(_iri(f"page{s}"), same_as, _iri(f"alias{j}"))

    for s in rng.choice(PAGES, size=NAMED_PAGES, replace=False):
        b.add(_iri(f"page{s}"), name, Term.literal(f"Page {s}", language="en"))

    member_of = _iri("memberOf")
    tag = _iri("tag")
    alt_name = _iri("altName")
    for i, g in enumerate(rng.integers(0, GROUPS, size=MEMBERS)):
        b.add(_iri(f"member{i}"), member_of, _iri(f"group{g}"))
    for g in range(GROUPS):
        for k in range(TAGS_PER_GROUP):
            b.add(_iri(f"group{g}"), tag, Term.literal(f"tag {g}.{k}"))
            b.add(_iri(f"group{g}"), alt_name, Term.literal(f"alt {g}.{k}"))
    return b.build()


def get(name: str) -> Profile:
    if name not in PROFILES:
        raise KeyError(f"No profile named {name!r}")
    return PROFILES[name]


def list_all() -> list[Profile]:
    return list(PROFILES.values())
