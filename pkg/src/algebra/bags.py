"""Mappings, bags of mappings and the four bag operators.

A mapping is a plain ``dict`` from variable name to term id; a variable that an
OPTIONAL left unbound is simply absent. A ``Bag`` keeps duplicates: joins
multiply multiplicities and unions add them.
"""

from __future__ import annotations

from collections import Counter, defaultdict
from collections.abc import Iterable, Iterator

Mapping = dict[str, int]
CanonicalRow = tuple[tuple[str, int], ...]


def canonical(m: Mapping) -> CanonicalRow:
    return tuple(sorted(m.items()))


class Bag:
    """A multiset of mappings. Row order carries no meaning."""

    __slots__ = ("rows",)

    def __init__(self, rows: Iterable[Mapping] = ()):
        self.rows: list[Mapping] = list(rows)

    @classmethod
    def identity(cls) -> Bag:
        """The bag holding only the empty mapping; neutral element of ``join``."""
        return cls([{}])

    def __len__(self) -> int:
        return len(self.rows)

    def __iter__(self) -> Iterator[Mapping]:
        return iter(self.rows)

    def __bool__(self) -> bool:
        return bool(self.rows)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Bag):
            return NotImplemented
        return len(self.rows) == len(other.rows) and self.canonical() == other.canonical()

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        preview = ", ".join(str(r) for r in self.rows[:3])
        more = ", ..." if len(self.rows) > 3 else ""
        return f"Bag([{preview}{more}], n={len(self.rows)})"

    def canonical(self) -> list[CanonicalRow]:
        """Rows as sorted (variable, id) tuples, themselves sorted. Equal bags compare equal."""
        return sorted(canonical(m) for m in self.rows)

    def counts(self) -> Counter[CanonicalRow]:
        return Counter(canonical(m) for m in self.rows)

    def variables(self) -> set[str]:
        out: set[str] = set()
        for m in self.rows:
            out.update(m)
        return out

    def certain_variables(self) -> set[str]:
        """Variables bound in every row. Empty for the empty bag."""
        if not self.rows:
            return set()
        out = set(self.rows[0])
        for m in self.rows[1:]:
            out.intersection_update(m)
            if not out:
                break
        return out

    def project(self, variables: Iterable[str]) -> Bag:
        keep = list(variables)
        return Bag({v: m[v] for v in keep if v in m} for m in self.rows)

    def distinct(self) -> Bag:
        seen: dict[CanonicalRow, Mapping] = {}
        for m in self.rows:
            seen.setdefault(canonical(m), m)
        return Bag(seen.values())


def compatible(m1: Mapping, m2: Mapping) -> bool:
    """True iff the mappings agree on every variable both bind."""
    if len(m2) < len(m1):
        m1, m2 = m2, m1
    for var, value in m1.items():
        other = m2.get(var)
        if other is not None and other != value:
            return False
    return True


def _partition(
    left: Bag, right: Bag
) -> tuple[tuple[str, ...], dict[tuple[int, ...], list[Mapping]] | None]:
    """Hash ``right`` on the shared variables both sides always bind, if there are any."""
    keys = tuple(sorted(left.certain_variables() & right.certain_variables()))
    if not keys:
        return keys, None
    index: dict[tuple[int, ...], list[Mapping]] = defaultdict(list)
    for m in right.rows:
        index[tuple(m[k] for k in keys)].append(m)
    return keys, index


def _candidates(
    m: Mapping, keys: tuple[str, ...], index: dict | None, right: Bag
) -> list[Mapping]:
    if index is None:
        return right.rows
    return index.get(tuple(m[k] for k in keys), [])


def join(left: Bag, right: Bag) -> Bag:
    """Every union of a compatible pair, one per pair."""
    if not left.rows or not right.rows:
        return Bag()
    keys, index = _partition(left, right)
    out: list[Mapping] = []
    for m1 in left.rows:
        for m2 in _candidates(m1, keys, index, right):
            if compatible(m1, m2):
                out.append({**m1, **m2})
    return Bag(out)


def union_bag(left: Bag, right: Bag) -> Bag:
    return Bag(left.rows + right.rows)


def diff(left: Bag, right: Bag) -> Bag:
    """Rows of ``left`` (with their multiplicity) compatible with no row of ``right``."""
    if not right.rows:
        return Bag(left.rows)
    keys, index = _partition(left, right)
    return Bag(
        m1
        for m1 in left.rows
        if not any(compatible(m1, m2) for m2 in _candidates(m1, keys, index, right))
    )


def left_outer_join(left: Bag, right: Bag) -> Bag:
    return union_bag(join(left, right), diff(left, right))


def semijoin(left: Bag, right: Bag) -> Bag:
    """Rows of ``left`` compatible with at least one row of ``right``."""
    if not right.rows:
        return Bag()
    keys, index = _partition(left, right)
    return Bag(
        m1
        for m1 in left.rows
        if any(compatible(m1, m2) for m2 in _candidates(m1, keys, index, right))
    )
