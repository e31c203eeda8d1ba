"""RDF terms: IRIs, blank nodes and literals."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

_ESCAPES = {"\\": "\\\\", '"': '\\"', "\n": "\\n", "\r": "\\r", "\t": "\\t"}


class TermKind(Enum):
    """The three disjoint RDF term sets."""

    IRI = "iri"
    BLANK = "bnode"
    LITERAL = "literal"


@dataclass(frozen=True)
class Term:
    """An RDF term. Equality covers kind and every present field."""

    kind: TermKind
    lexical: str
    language: str | None = None
    datatype: str | None = None

    def __post_init__(self):
        if self.kind is TermKind.IRI and not self.lexical:
            raise ValueError("IRI must not be empty")
        if self.language is not None and self.datatype is not None:
            raise ValueError("literal cannot carry both a language tag and a datatype")
        if self.kind is not TermKind.LITERAL and (self.language or self.datatype):
            raise ValueError(f"{self.kind.value} cannot carry a language tag or datatype")

    @classmethod
    def iri(cls, value: str) -> Term:
        return cls(TermKind.IRI, value)

    @classmethod
    def blank(cls, label: str) -> Term:
        return cls(TermKind.BLANK, label)

    @classmethod
    def literal(
        cls, value: str, language: str | None = None, datatype: str | None = None
    ) -> Term:
        return cls(TermKind.LITERAL, value, language or None, datatype or None)

    @property
    def is_iri(self) -> bool:
        return self.kind is TermKind.IRI

    @property
    def is_literal(self) -> bool:
        return self.kind is TermKind.LITERAL

    def n3(self, prefixes: dict[str, str] | None = None) -> str:
        """N-Triples form, or a prefixed name when ``prefixes`` covers the IRI."""
        if self.kind is TermKind.IRI:
            return compact_iri(self.lexical, prefixes)
        if self.kind is TermKind.BLANK:
            return f"_:{self.lexical}"
        body = "".join(_ESCAPES.get(ch, ch) for ch in self.lexical)
        if self.language:
            return f'"{body}"@{self.language}'
        if self.datatype:
            return f'"{body}"^^{compact_iri(self.datatype, prefixes)}'
        return f'"{body}"'

    def __str__(self) -> str:
        return self.n3()


def compact_iri(iri: str, prefixes: dict[str, str] | None = None) -> str:
    """Shorten ``iri`` with the longest matching prefix whose local part stays a valid name."""
    if prefixes:
        best: tuple[str, str] | None = None
        for name, base in prefixes.items():
            if iri.startswith(base) and (best is None or len(base) > len(best[1])):
                best = (name, base)
        if best is not None:
            local = iri[len(best[1]) :]
            if _is_safe_local(local):
                return f"{best[0]}:{local}"
    return f"<{iri}>"


def _is_safe_local(local: str) -> bool:
    if local.endswith("."):
        return False
    return all(ch.isalnum() or ch in "_-.:%" for ch in local)
