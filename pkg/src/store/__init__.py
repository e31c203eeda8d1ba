from .rdf_store import (
    Direction,
    Store,
    StoreBuilder,
    TermId,
    Triple,
    load_ntriples,
    load_ntriples_file,
    term_from_rdflib,
)
from .terms import Term, TermKind
