"""Recursive-descent parser for SELECT queries over BGP / UNION / OPTIONAL / groups.

Operator precedence, loosest last: group braces, UNION, the implicit AND between
siblings, OPTIONAL. OPTIONAL is left-associative and takes every preceding
sibling of its group as its left operand, so

    A OPTIONAL {B} OPTIONAL {C}   ->  Optional(Optional(A, B), C)
    {A} UNION {B} . C             ->  And(Union(A, B), C)
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from rdflib import Literal, URIRef

from ..core.errors import ParseError
from ..store.rdf_store import term_from_rdflib
from ..store.terms import Term
from .ast import (
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
    pattern_variables,
)

RDF_TYPE = "http://www.w3.org/1999/02/22-rdf-syntax-ns#type"

UNSUPPORTED_KEYWORDS = frozenset(
    {
        "FILTER", "BIND", "VALUES", "MINUS", "SERVICE", "GRAPH", "FROM", "NAMED",
        "GROUP", "ORDER", "BY", "HAVING", "LIMIT", "OFFSET", "DISTINCT", "REDUCED",
        "ASK", "CONSTRUCT", "DESCRIBE", "INSERT", "DELETE", "LOAD", "CLEAR", "BASE",
        "AS", "EXISTS", "NOT",
    }
)  # fmt: skip

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+|\#[^\n]*)
  | (?P<var>[?$][A-Za-z0-9_]+)
  | (?P<iri><[^<>"{}|^`\\\s]*>)
  | (?P<string>"(?:[^"\\\n]|\\.)*"|'(?:[^'\\\n]|\\.)*')
  | (?P<langtag>@[A-Za-z]+(?:-[A-Za-z0-9]+)*)
  | (?P<dtype>\^\^)
  | (?P<bnode>_:[A-Za-z0-9_]*)
  | (?P<pname>(?:[A-Za-z][\w-]*)?:(?:[\w:%-]|\.(?=[\w:%-]))*)
  | (?P<name>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<number>[+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)
  | (?P<punct>[{}.*])
  | (?P<other>\S)
    """,
    re.VERBOSE,
)

_STRING_ESCAPE_RE = re.compile(r"\\(u[0-9A-Fa-f]{4}|U[0-9A-Fa-f]{8}|.)")
_SIMPLE_ESCAPES = {
    "t": "\t",
    "n": "\n",
    "r": "\r",
    "b": "\b",
    "f": "\f",
    '"': '"',
    "'": "'",
    "\\": "\\",
}


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    line: int
    column: int

    @property
    def keyword(self) -> str:
        return self.text.upper() if self.kind == "name" else ""


def tokenize(text: str) -> list[Token]:
    tokens: list[Token] = []
    pos, line, line_start = 0, 1, 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        column = pos - line_start + 1
        kind = m.lastgroup
        chunk = m.group()
        if kind != "ws":
            tokens.append(Token(kind, chunk, line, column))
        newlines = chunk.count("\n")
        if newlines:
            line += newlines
            line_start = pos + chunk.rfind("\n") + 1
        pos = m.end()
    tokens.append(Token("eof", "", line, pos - line_start + 1))
    return tokens


def _unescape(body: str) -> str:
    def repl(m: re.Match) -> str:
        code = m.group(1)
        if code[0] in "uU" and len(code) > 1:
            return chr(int(code[1:], 16))
        return _SIMPLE_ESCAPES.get(code, code)

    return _STRING_ESCAPE_RE.sub(repl, body)


class _Parser:
    def __init__(self, text: str):
        self._tokens = tokenize(text)
        self._i = 0
        self.prefixes: dict[str, str] = {}

    # -- token helpers ---------------------------------------------------

    def _peek(self) -> Token:
        return self._tokens[self._i]

    def _advance(self) -> Token:
        tok = self._tokens[self._i]
        self._i += 1
        return tok

    def _error(self, message: str, tok: Token | None = None) -> ParseError:
        tok = tok or self._peek()
        return ParseError(message, tok.line, tok.column)

    def _expect_punct(self, text: str) -> Token:
        tok = self._peek()
        if tok.kind != "punct" or tok.text != text:
            found = "end of input" if tok.kind == "eof" else repr(tok.text)
            raise self._error(f"expected {text!r}, found {found}")
        return self._advance()

    def _is_punct(self, text: str) -> bool:
        tok = self._peek()
        return tok.kind == "punct" and tok.text == text

    def _check_keyword(self, tok: Token) -> None:
        if tok.keyword in UNSUPPORTED_KEYWORDS:
            raise self._error(f"unsupported keyword {tok.text.upper()}", tok)

    # -- grammar ---------------------------------------------------------

    def query(self) -> Query:
        while self._peek().keyword == "PREFIX":
            self._advance()
            name = self._advance()
            if name.kind != "pname" or not name.text.endswith(":") or name.text.count(":") != 1:
                raise self._error("expected a prefix name like 'ex:'", name)
            iri = self._advance()
            if iri.kind != "iri":
                raise self._error("expected an IRI after the prefix name", iri)
            self.prefixes[name.text[:-1]] = iri.text[1:-1]

        tok = self._advance()
        self._check_keyword(tok)
        if tok.keyword != "SELECT":
            raise self._error("expected SELECT", tok)

        projection: list[tuple[Variable, Token]] | None = []
        if self._is_punct("*"):
            self._advance()
            projection = None
        else:
            while self._peek().kind == "var":
                var_tok = self._advance()
                projection.append((Variable(var_tok.text[1:]), var_tok))
            if not projection:
                self._check_keyword(self._peek())
                raise self._error("expected '*' or at least one variable after SELECT")

        if self._peek().keyword == "WHERE":
            self._advance()
        self._check_keyword(self._peek())
        body = self.group()

        tail = self._peek()
        if tail.kind != "eof":
            self._check_keyword(tail)
            raise self._error(f"unexpected {tail.text!r} after the query body", tail)

        if projection is None:
            return Query(None, body, dict(self.prefixes))

        bound = pattern_variables(body)
        seen: set[str] = set()
        for var, var_tok in projection:
            if var.name not in bound:
                raise self._error(
                    f"projected variable ?{var.name} does not occur in WHERE", var_tok
                )
            if var.name in seen:
                raise self._error(f"duplicate projected variable ?{var.name}", var_tok)
            seen.add(var.name)
        return Query(tuple(v for v, _ in projection), body, dict(self.prefixes))

    def group(self) -> GroupPattern:
        self._expect_punct("{")
        acc: GraphPattern | None = None
        run: list[TriplePattern] = []

        def flush() -> None:
            nonlocal acc
            if run:
                bgp = BgpPattern(tuple(run))
                acc = bgp if acc is None else AndPattern(acc, bgp)
                run.clear()

        while True:
            tok = self._peek()
            if tok.kind == "eof":
                raise self._error("unbalanced braces: missing '}'", tok)
            if self._is_punct("}"):
                self._advance()
                break
            if self._is_punct("."):
                self._advance()
                continue
            if self._is_punct("{"):
                flush()
                element: GraphPattern = self.group()
                while self._peek().keyword == "UNION":
                    self._advance()
                    element = UnionPattern(element, self.group())
                acc = element if acc is None else AndPattern(acc, element)
                continue
            if tok.keyword == "OPTIONAL":
                self._advance()
                flush()
                right = self.group()
                acc = OptionalPattern(acc if acc is not None else BgpPattern(), right)
                continue
            if tok.keyword == "UNION":
                raise self._error("UNION must follow a braced group", tok)
            self._check_keyword(tok)
            run.append(self.triple())
            nxt = self._peek()
            if not (self._is_punct(".") or self._is_punct("}") or self._is_punct("{")
                    or nxt.keyword == "OPTIONAL"):
                if nxt.kind == "eof":
                    raise self._error("unbalanced braces: missing '}'", nxt)
                self._check_keyword(nxt)
                raise self._error(f"expected '.' after triple pattern, found {nxt.text!r}", nxt)

        flush()
        return GroupPattern(acc if acc is not None else BgpPattern())

    def triple(self) -> TriplePattern:
        s_tok = self._peek()
        s = self.atom(position="subject")
        p_tok = self._peek()
        p = self.atom(position="predicate")
        o = self.atom(position="object")
        if isinstance(s, Term) and s.is_literal:
            raise self._error("a literal cannot be a subject", s_tok)
        if isinstance(p, Term) and not p.is_iri:
            raise self._error("predicate must be a variable or an IRI", p_tok)
        return TriplePattern(s, p, o)

    def atom(self, position: str) -> Atom:
        tok = self._advance()
        if tok.kind == "var":
            return Variable(tok.text[1:])
        if tok.kind == "iri":
            return Term.iri(self._iri_text(tok))
        if tok.kind == "pname":
            return Term.iri(self._expand(tok))
        if tok.kind == "name" and tok.text == "a" and position == "predicate":
            return Term.iri(RDF_TYPE)
        if tok.kind == "string":
            return self._literal(tok)
        if tok.kind == "bnode":
            raise self._error("blank nodes are not supported in query patterns", tok)
        if tok.kind == "number":
            raise self._error("numeric literals are not supported; quote and type them", tok)
        if tok.kind == "eof":
            raise self._error(f"unexpected end of input, expected a {position}", tok)
        self._check_keyword(tok)
        raise self._error(f"unexpected {tok.text!r}, expected a {position}", tok)

    def _expand(self, tok: Token) -> str:
        prefix, _, local = tok.text.partition(":")
        if prefix not in self.prefixes:
            raise self._error(f"unknown prefix {prefix + ':'!r}", tok)
        expanded = self.prefixes[prefix] + local
        if not expanded:
            raise self._error("IRI must not be empty", tok)
        return expanded

    def _iri_text(self, tok: Token) -> str:
        text = tok.text[1:-1]
        if not text:
            raise self._error("IRI must not be empty", tok)
        return text

    def _literal(self, tok: Token) -> Term:
        value = _unescape(tok.text[1:-1])
        language = None
        datatype = None
        if self._peek().kind == "langtag":
            language = self._advance().text[1:]
        elif self._peek().kind == "dtype":
            self._advance()
            dt_tok = self._advance()
            if dt_tok.kind == "iri":
                datatype = self._iri_text(dt_tok)
            elif dt_tok.kind == "pname":
                datatype = self._expand(dt_tok)
            else:
                raise self._error("expected a datatype IRI after '^^'", dt_tok)
        if self._peek().kind in ("langtag", "dtype"):
            raise self._error("literal cannot carry both a language tag and a datatype")
        try:
            node = Literal(
                value,
                lang=language,
                datatype=URIRef(datatype) if datatype is not None else None,
            )
        except ValueError as e:
            raise self._error(str(e), tok) from e
        return term_from_rdflib(node)


def parse_query(text: str) -> Query:
    """Parse one SELECT query. Raises ``ParseError`` with a 1-based line/column."""
    return _Parser(text).query()
