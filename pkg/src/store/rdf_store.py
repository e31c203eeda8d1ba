"""Dictionary-encoded in-memory triple store.

Terms are interned into dense integer ids in first-seen order. Triples live in
three sorted permutations (SPO, POS, OSP) so any combination of bound positions
is answered by a prefix range on one of them. Per-predicate statistics for the
cost model are computed once, when the store is built; after that the store is
immutable and safe to share between threads.
"""

from __future__ import annotations

import re
from bisect import bisect_left
from collections import Counter, defaultdict
from collections.abc import Iterable
from enum import Enum
from pathlib import Path
from typing import BinaryIO, NamedTuple, TextIO

from rdflib import BNode, Literal, URIRef
from rdflib.plugins.parsers.ntriples import W3CNTriplesParser

from ..core.errors import LoadError
from .terms import Term, TermKind

TermId = int

_LANG_AND_DATATYPE = re.compile(r'"@[A-Za-z]+(?:-[A-Za-z0-9]+)*\^\^')


class Triple(NamedTuple):
    s: TermId
    p: TermId
    o: TermId


class Direction(Enum):
    """Which end of an edge the fan-out is counted from."""

    BY_SUBJECT = "bySubject"
    BY_OBJECT = "byObject"


def term_from_rdflib(node) -> Term:
    """Convert an rdflib node into a ``Term``. Blank node labels are kept verbatim."""
    if isinstance(node, URIRef):
        return Term.iri(str(node))
    if isinstance(node, BNode):
        return Term.blank(str(node))
    if isinstance(node, Literal):
        return Term.literal(
            str(node),
            language=node.language,
            datatype=str(node.datatype) if node.datatype is not None else None,
        )
    raise TypeError(f"unsupported rdflib node: {node!r}")


class Store:
    """Immutable triple store. Build it with ``StoreBuilder`` or ``load_ntriples``."""

    def __init__(self, terms: list[Term], triples: Iterable[Triple]):
        self._terms = list(terms)
        self._ids = {term: i for i, term in enumerate(self._terms)}
        unique = set(triples)
        self._spo = sorted(unique)
        self._pos = sorted((t.p, t.o, t.s) for t in unique)
        self._osp = sorted((t.o, t.s, t.p) for t in unique)

        self._pred_counts: Counter[TermId] = Counter(t.p for t in unique)
        subjects: dict[TermId, set[TermId]] = defaultdict(set)
        objects: dict[TermId, set[TermId]] = defaultdict(set)
        for t in unique:
            subjects[t.p].add(t.s)
            objects[t.p].add(t.o)
        self._degree: dict[tuple[TermId, Direction], float] = {}
        for p, count in self._pred_counts.items():
            self._degree[(p, Direction.BY_SUBJECT)] = count / len(subjects[p])
            self._degree[(p, Direction.BY_OBJECT)] = count / len(objects[p])
        n = len(unique)
        self._any_degree = {
            Direction.BY_SUBJECT: n / len({t.s for t in unique}) if n else 0.0,
            Direction.BY_OBJECT: n / len({t.o for t in unique}) if n else 0.0,
        }

    @classmethod
    def from_terms(cls, statements: Iterable[tuple[Term, Term, Term]]) -> Store:
        builder = StoreBuilder()
        for s, p, o in statements:
            builder.add(s, p, o)
        return builder.build()

    # -- catalog ---------------------------------------------------------

    def encode(self, term: Term) -> TermId | None:
        """Id of ``term``, or None when the store never saw it."""
        return self._ids.get(term)

    def decode(self, term_id: TermId) -> Term:
        return self._terms[term_id]

    @property
    def term_count(self) -> int:
        return len(self._terms)

    def __len__(self) -> int:
        return len(self._spo)

    def __repr__(self) -> str:
        return f"Store(triples={len(self)}, terms={len(self._terms)})"

    @property
    def triples(self) -> list[Triple]:
        return [Triple(*t) for t in self._spo]

    # -- access ----------------------------------------------------------

    def scan(
        self, s: TermId | None = None, p: TermId | None = None, o: TermId | None = None
    ) -> list[Triple]:
        """Every triple matching the bound positions, each exactly once."""
        index, prefix, order = self._choose(s, p, o)
        lo, hi = _prefix_range(index, prefix)
        rows = index[lo:hi]
        if order == "spo":
            return [Triple(*r) for r in rows]
        if order == "pos":
            return [Triple(r[2], r[0], r[1]) for r in rows]
        return [Triple(r[1], r[2], r[0]) for r in rows]

    def count(
        self, s: TermId | None = None, p: TermId | None = None, o: TermId | None = None
    ) -> int:
        """Exact number of matches, read off the index without materializing."""
        index, prefix, _ = self._choose(s, p, o)
        lo, hi = _prefix_range(index, prefix)
        return hi - lo

    def _choose(self, s, p, o) -> tuple[list[tuple[int, int, int]], tuple[int, ...], str]:
        if s is not None:
            if p is not None:
                return self._spo, (s, p) if o is None else (s, p, o), "spo"
            if o is not None:
                return self._osp, (o, s), "osp"
            return self._spo, (s,), "spo"
        if p is not None:
            return self._pos, (p,) if o is None else (p, o), "pos"
        if o is not None:
            return self._osp, (o,), "osp"
        return self._spo, (), "spo"

    # -- statistics ------------------------------------------------------

    def predicate_count(self, p: TermId) -> int:
        return self._pred_counts.get(p, 0)

    @property
    def predicate_counts(self) -> dict[TermId, int]:
        return dict(self._pred_counts)

    def average_size(self, p: TermId | None, direction: Direction) -> float:
        """Average fan-out of predicate ``p`` from one end. 0 when ``p`` is absent.

        ``p=None`` stands for a predicate variable and averages over the whole store.
        """
        if p is None:
            return self._any_degree[direction]
        return self._degree.get((p, direction), 0.0)


def _prefix_range(index: list[tuple[int, int, int]], prefix: tuple[int, ...]) -> tuple[int, int]:
    if not prefix:
        return 0, len(index)
    lo = bisect_left(index, prefix)
    upper = (*prefix[:-1], prefix[-1] + 1)
    hi = bisect_left(index, upper, lo)
    return lo, hi


class StoreBuilder:
    """Interns terms and collects distinct triples before freezing them into a ``Store``."""

    def __init__(self):
        self._terms: list[Term] = []
        self._ids: dict[Term, TermId] = {}
        self._triples: set[Triple] = set()

    def intern(self, term: Term) -> TermId:
        term_id = self._ids.get(term)
        if term_id is None:
            term_id = len(self._terms)
            self._ids[term] = term_id
            self._terms.append(term)
        return term_id

    def add(self, s: Term, p: Term, o: Term) -> None:
        if s.kind is TermKind.LITERAL:
            raise ValueError("subject must be an IRI or blank node")
        if p.kind is not TermKind.IRI:
            raise ValueError("predicate must be an IRI")
        self._triples.add(Triple(self.intern(s), self.intern(p), self.intern(o)))

    def build(self) -> Store:
        return Store(self._terms, self._triples)


class _LineSink:
    """rdflib sink that keeps the last parsed statement."""

    def __init__(self):
        self.statements: list[tuple] = []

    def triple(self, s, p, o) -> None:
        self.statements.append((s, p, o))


def load_ntriples(stream: BinaryIO | TextIO | Iterable[bytes | str]) -> Store:
    """Load N-Triples text into a ``Store``.

    Lines are fed to rdflib's N-Triples tokenizer one at a time so errors carry
    the 1-based line number. Blank node labels are renumbered in first-seen order.
    """
    builder = StoreBuilder()
    sink = _LineSink()
    parser = W3CNTriplesParser(sink=sink)
    bnode_context: dict[str, BNode] = {}
    blank_labels: dict[str, str] = {}

    for line_no, raw in enumerate(stream, start=1):
        if isinstance(raw, bytes):
            try:
                line = raw.decode("utf-8")
            except UnicodeDecodeError as e:
                raise LoadError(line_no, f"invalid UTF-8: {e}") from e
        else:
            line = raw
        text = line.strip()
        if not text or text.startswith("#"):
            continue
        if _LANG_AND_DATATYPE.search(text):
            raise LoadError(line_no, "literal has both a language tag and a datatype")

        sink.statements.clear()
        try:
            parser.parsestring(text + "\n", bnode_context=bnode_context)
        except Exception as e:
            raise LoadError(line_no, str(e) or e.__class__.__name__) from e
        if len(sink.statements) != 1:
            raise LoadError(line_no, "expected exactly one statement")

        terms = []
        for node in sink.statements[0]:
            term = term_from_rdflib(node)
            if term.kind is TermKind.BLANK:
                label = blank_labels.setdefault(term.lexical, f"b{len(blank_labels)}")
                term = Term.blank(label)
            terms.append(term)
        try:
            builder.add(*terms)
        except ValueError as e:
            raise LoadError(line_no, str(e)) from e

    return builder.build()


def load_ntriples_file(path: Path | str) -> Store:
    with Path(path).open("rb") as f:
        return load_ntriples(f)
