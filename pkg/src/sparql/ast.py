"""Syntax tree for the supported SPARQL subset."""

from __future__ import annotations

from dataclasses import dataclass, field

from ..store.terms import Term


@dataclass(frozen=True)
class Variable:
    name: str

    def __post_init__(self):
        if not self.name:
            raise ValueError("variable name must not be empty")

    def __str__(self) -> str:
        return f"?{self.name}"


Atom = Variable | Term


@dataclass(frozen=True)
class TriplePattern:
    s: Atom
    p: Atom
    o: Atom

    def __post_init__(self):
        if isinstance(self.s, Term) and self.s.is_literal:
            raise ValueError("a literal cannot be a subject")
        if isinstance(self.p, Term) and not self.p.is_iri:
            raise ValueError("predicate must be a variable or an IRI")

    def variables(self) -> set[str]:
        return {a.name for a in (self.s, self.p, self.o) if isinstance(a, Variable)}

    def join_variables(self) -> set[str]:
        """Variables in subject/object position, the ones coalescing looks at."""
        return {a.name for a in (self.s, self.o) if isinstance(a, Variable)}

    def text(self, prefixes: dict[str, str] | None = None) -> str:
        return " ".join(_atom_text(a, prefixes) for a in (self.s, self.p, self.o))

    def __str__(self) -> str:
        return self.text()


def _atom_text(atom: Atom, prefixes: dict[str, str] | None) -> str:
    if isinstance(atom, Variable):
        return str(atom)
    return atom.n3(prefixes)


@dataclass(frozen=True)
class BgpPattern:
    triples: tuple[TriplePattern, ...] = ()


@dataclass(frozen=True)
class GroupPattern:
    inner: GraphPattern


@dataclass(frozen=True)
class AndPattern:
    left: GraphPattern
    right: GraphPattern


@dataclass(frozen=True)
class UnionPattern:
    left: GraphPattern
    right: GraphPattern


@dataclass(frozen=True)
class OptionalPattern:
    left: GraphPattern
    right: GraphPattern


GraphPattern = BgpPattern | GroupPattern | AndPattern | UnionPattern | OptionalPattern


def pattern_variables(p: GraphPattern) -> set[str]:
    """Every variable mentioned anywhere in ``p``."""
    if isinstance(p, BgpPattern):
        return set().union(*(t.variables() for t in p.triples))
    if isinstance(p, GroupPattern):
        return pattern_variables(p.inner)
    return pattern_variables(p.left) | pattern_variables(p.right)


def pattern_triples(p: GraphPattern) -> list[TriplePattern]:
    """Triple patterns in textual order."""
    if isinstance(p, BgpPattern):
        return list(p.triples)
    if isinstance(p, GroupPattern):
        return pattern_triples(p.inner)
    return pattern_triples(p.left) + pattern_triples(p.right)


@dataclass(frozen=True)
class Query:
    """A SELECT query. ``projection`` is None for ``SELECT *``."""

    projection: tuple[Variable, ...] | None
    body: GroupPattern
    prefixes: dict[str, str] = field(default_factory=dict, compare=False, hash=False)

    @property
    def is_wildcard(self) -> bool:
        return self.projection is None

    def output_variables(self) -> list[str]:
        """Projected variable names, or every body variable in first-seen order for ``*``."""
        if self.projection is not None:
            return [v.name for v in self.projection]
        seen: dict[str, None] = {}
        for t in pattern_triples(self.body):
            for atom in (t.s, t.p, t.o):
                if isinstance(atom, Variable):
                    seen.setdefault(atom.name, None)
        return list(seen)
