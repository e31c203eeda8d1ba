from .ast import (
    AndPattern,
    BgpPattern,
    GraphPattern,
    GroupPattern,
    OptionalPattern,
    Query,
    TriplePattern,
    UnionPattern,
    Variable,
    pattern_triples,
    pattern_variables,
)
from .parser import parse_query
from .printer import pattern_to_text
