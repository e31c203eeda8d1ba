"""Seeded random stores and queries for the oracle suite and the eval harness.

Everything is drawn from a small vocabulary so that random patterns actually
match, join and leave OPTIONAL variables unbound often enough to matter.
"""

from __future__ import annotations

from collections.abc import Iterable, Iterator
from dataclasses import dataclass

import numpy as np

from ..sparql.ast import (
    AndPattern,
    Atom,
    BgpPattern,
    GraphPattern,
    GroupPattern,
    OptionalPattern,
    Query,
    TriplePattern,
    UnionPattern,
    Variable,
    pattern_triples,
)
from ..store.rdf_store import Store
from ..store.terms import Term

EX = "http://example.org/"
PREFIXES = {"ex": EX}

MAX_STORE_TRIPLES = 50
TERM_COUNT = 8
PREDICATE_COUNT = 4
MAX_QUERY_TRIPLES = 6
MAX_DEPTH = 3
VOCABULARY_ENTITIES = 6
VOCABULARY_TRIPLES = 40

VARIABLES = ("a", "b", "c", "d", "e")
# a constant the generated stores never contain
MISSING = Term.iri(EX + "missing")


def entity(i: int) -> Term:
    return Term.iri(f"{EX}e{i}")


def predicate(i: int) -> Term:
    return Term.iri(f"{EX}p{i}")


@dataclass(frozen=True)
class RandomCase:
    seed: int
    store: Store
    query: Query


def random_store(
    rng: np.random.Generator,
    max_triples: int = MAX_STORE_TRIPLES,
    term_count: int = TERM_COUNT,
    predicate_count: int = PREDICATE_COUNT,
) -> Store:
    """Up to ``max_triples`` distinct triples over ``term_count`` entities."""
    n = int(rng.integers(1, max_triples + 1))
    statements = []
    for _ in range(n):
        s, o = rng.integers(0, term_count, size=2)
        p = rng.integers(0, predicate_count)
        statements.append((entity(int(s)), predicate(int(p)), entity(int(o))))
    return Store.from_terms(statements)


def vocabulary_store(
    q: Query,
    rng: np.random.Generator,
    entity_count: int = VOCABULARY_ENTITIES,
    triple_count: int = VOCABULARY_TRIPLES,
) -> Store:
    """A small store over the query's own predicates and constants plus ``entity_count`` fillers."""
    triples = pattern_triples(q.body)
    predicates = list(dict.fromkeys(t.p for t in triples if not isinstance(t.p, Variable)))
    if not predicates:
        predicates = [predicate(0)]
    constants = list(
        dict.fromkeys(a for t in triples for a in (t.s, t.o) if not isinstance(a, Variable))
    )
    entities = [entity(i) for i in range(entity_count)]
    subjects = entities + [c for c in constants if not c.is_literal]
    objects = entities + constants
    statements = [
        (
            subjects[int(rng.integers(len(subjects)))],
            predicates[int(rng.integers(len(predicates)))],
            objects[int(rng.integers(len(objects)))],
        )
        for _ in range(triple_count)
    ]
    return Store.from_terms(statements)


class _QueryGen:
    def __init__(
        self,
        rng: np.random.Generator,
        max_triples: int,
        max_depth: int,
        term_count: int,
        predicate_count: int,
    ):
        self.rng = rng
        self.budget = max_triples
        self.max_depth = max_depth
        self.term_count = term_count
        self.predicate_count = predicate_count

    def chance(self, p: float) -> bool:
        return bool(self.rng.random() < p)

    def node_atom(self) -> Atom:
        if self.chance(0.8):
            return Variable(str(self.rng.choice(VARIABLES)))
        if self.chance(0.05):
            return MISSING
        return entity(int(self.rng.integers(0, self.term_count)))

    def predicate_atom(self) -> Atom:
        if self.chance(0.1):
            return Variable("p")
        return predicate(int(self.rng.integers(0, self.predicate_count)))

    def triple(self) -> TriplePattern:
        self.budget -= 1
        return TriplePattern(self.node_atom(), self.predicate_atom(), self.node_atom())

    def bgp(self) -> BgpPattern:
        n = int(self.rng.integers(1, min(self.budget, 3) + 1))
        return BgpPattern(tuple(self.triple() for _ in range(n)))

    def group(self, level: int) -> GroupPattern:
        """A group at nesting ``level`` (the root group is level 1)."""
        acc: GraphPattern | None = None
        elements = int(self.rng.integers(1, 4))
        for _ in range(elements):
            if self.budget <= 0:
                break
            nested = level < self.max_depth
            roll = self.rng.random()
            if nested and roll < 0.25:
                right = self.group(level + 1)
                acc = OptionalPattern(acc if acc is not None else BgpPattern(), right)
                continue
            if nested and roll < 0.45 and self.budget >= 2:
                part: GraphPattern = UnionPattern(self.group(level + 1), self.group(level + 1))
            elif nested and roll < 0.5:
                part = self.group(level + 1)
            else:
                part = self.bgp()
            acc = part if acc is None else AndPattern(acc, part)
        if acc is None:
            acc = self.bgp() if self.budget > 0 else BgpPattern()
        return GroupPattern(acc)


def random_query(
    rng: np.random.Generator,
    max_triples: int = MAX_QUERY_TRIPLES,
    max_depth: int = MAX_DEPTH,
    term_count: int = TERM_COUNT,
    predicate_count: int = PREDICATE_COUNT,
) -> Query:
    """SELECT * over at most ``max_triples`` patterns nested at most ``max_depth`` groups deep."""
    gen = _QueryGen(rng, max_triples, max_depth, term_count, predicate_count)
    return Query(None, gen.group(1), dict(PREFIXES))


def random_bgp(
    rng: np.random.Generator,
    max_triples: int = 3,
    term_count: int = TERM_COUNT,
    predicate_count: int = PREDICATE_COUNT,
) -> BgpPattern:
    """One to ``max_triples`` triple patterns over the shared variable pool."""
    gen = _QueryGen(rng, max_triples, 1, term_count, predicate_count)
    return gen.bgp()


def make_case(seed: int) -> RandomCase:
    rng = np.random.default_rng(seed)
    store = random_store(rng)
    return RandomCase(seed=seed, store=store, query=random_query(rng))


def cases(seeds: Iterable[int]) -> Iterator[RandomCase]:
    for seed in seeds:
        yield make_case(seed)
