"""BGP evaluation by vertex extension, plus the plan and cardinality estimates the optimizer prices.

A BGP is evaluated one triple pattern at a time: every partial mapping is
extended through an index lookup with the positions it already binds. The
order is greedy. Start from the pattern with the smallest exact count, then
take a pattern whose ends are both bound if there is one, else the connected
pattern with the smallest average fan-out.

Cardinalities of longer prefixes are estimated by extending a uniform sample
(without replacement) of the previous prefix and scaling by the observed
extension ratio, never dropping below 1 once the base is non-empty.
"""

from __future__ import annotations

import time
from collections.abc import Iterable, Iterator, Sequence
from dataclasses import dataclass, field

import numpy as np

from ..algebra.bags import Bag, Mapping, semijoin
from ..core.errors import ContractError, QueryTimeout
from ..plan.stats import bgp_components
from ..sparql.ast import TriplePattern, Variable
from ..store.rdf_store import Direction, Store

SAMPLE_SIZE = 100
# rows between deadline checks while extending
CHECK_EVERY = 1024

# a compiled position: ("var", name) or ("const", term id)
Slot = tuple[str, str | int]


@dataclass
class Deadline:
    """Wall-clock budget for one query. ``budget_us=None`` never expires."""

    budget_us: int | None = None
    started: float = field(default_factory=time.perf_counter)

    def elapsed_us(self) -> int:
        return int((time.perf_counter() - self.started) * 1_000_000)

    def check(self) -> None:
        if self.budget_us is not None and self.elapsed_us() > self.budget_us:
            raise QueryTimeout(self.budget_us)


def wco_step_cost(cardinality: float, fanout: float) -> float:
    return cardinality * fanout


def binary_join_cost(left: float, right: float) -> float:
    """Hash-join style cost of joining two inputs: build on the smaller, stream the larger."""
    return 2 * min(left, right) + max(left, right)


def _compile(store: Store, t: TriplePattern) -> tuple[Slot, Slot, Slot] | None:
    """Encode constants; None when one of them is not in the store."""
    slots: list[Slot] = []
    for atom in (t.s, t.p, t.o):
        if isinstance(atom, Variable):
            slots.append(("var", atom.name))
            continue
        term_id = store.encode(atom)
        if term_id is None:
            return None
        slots.append(("const", term_id))
    return slots[0], slots[1], slots[2]


def _extend(
    store: Store,
    rows: Iterable[Mapping],
    slots: tuple[Slot, Slot, Slot] | None,
    deadline: Deadline | None = None,
) -> Iterator[Mapping]:
    """Every extension of every row in ``rows`` by one match of the compiled pattern."""
    if slots is None:
        return
    for n, m in enumerate(rows, start=1):
        if deadline is not None and n % CHECK_EVERY == 0:
            deadline.check()
        bound = [value if kind == "const" else m.get(value) for kind, value in slots]
        for triple in store.scan(*bound):
            binding = dict(m)
            for (kind, value), term_id in zip(slots, triple, strict=True):
                if kind == "const":
                    continue
                current = binding.setdefault(value, term_id)
                if current != term_id:
                    break
            else:
                yield binding


def match_count(store: Store, t: TriplePattern) -> int:
    """Exact number of matches of a single pattern."""
    slots = _compile(store, t)
    if slots is None:
        return 0
    names = [v for kind, v in slots if kind == "var"]
    if len(names) == len(set(names)):
        return store.count(*(v if kind == "const" else None for kind, v in slots))
    return sum(1 for _ in _extend(store, [{}], slots))


# -- cardinality estimation --------------------------------------------------


class CardEstimator:
    """Sampled cardinality estimates of pattern prefixes, cached per prefix.

    One estimator serves one query's optimization pass; the cache is not locked.
    """

    def __init__(self, store: Store, sample_size: int = SAMPLE_SIZE, seed: int = 0):
        if sample_size <= 0:
            raise ValueError("sample_size must be positive")
        self.store = store
        self.sample_size = sample_size
        self.seed = seed
        self.cache: dict[tuple[TriplePattern, ...], tuple[float, list[Mapping]]] = {}

    def estimate(self, triples: Sequence[TriplePattern]) -> float:
        """Estimated result size of the patterns joined in the given order."""
        if not triples:
            return 1.0
        return self._entry(tuple(triples))[0]

    def _entry(self, prefix: tuple[TriplePattern, ...]) -> tuple[float, list[Mapping]]:
        hit = self.cache.get(prefix)
        if hit is not None:
            return hit
        slots = _compile(self.store, prefix[-1])
        if len(prefix) == 1:
            population = list(_extend(self.store, [{}], slots))
            card = float(len(population))
        else:
            prev_card, prev_sample = self._entry(prefix[:-1])
            population = list(_extend(self.store, prev_sample, slots))
            if prev_card == 0:
                card = 0.0
            elif not prev_sample:
                card = 1.0
            else:
                card = max(len(population) / len(prev_sample) * prev_card, 1.0)
        rng = np.random.default_rng((self.seed, len(prefix)))
        entry = (card, self._sample(population, rng))
        self.cache[prefix] = entry
        return entry

    def _sample(self, population: list[Mapping], rng: np.random.Generator) -> list[Mapping]:
        n = len(population)
        if n <= self.sample_size:
            return population
        picks = np.sort(rng.choice(n, size=self.sample_size, replace=False))
        return [population[i] for i in picks]


# -- planning ----------------------------------------------------------------


@dataclass(frozen=True)
class PlanStep:
    triple: TriplePattern
    new_vertices: tuple[str, ...]
    cardinality: float
    cost: float


@dataclass(frozen=True)
class BgpPlan:
    steps: tuple[PlanStep, ...]
    # the same order priced as a left-deep chain of binary joins, for comparison
    binary_cost: float = 0.0

    @property
    def order(self) -> list[TriplePattern]:
        return [s.triple for s in self.steps]

    @property
    def vertex_order(self) -> list[str]:
        return [v for s in self.steps for v in s.new_vertices]

    @property
    def per_step_cost(self) -> list[float]:
        return [s.cost for s in self.steps]

    @property
    def cost(self) -> float:
        return sum(self.per_step_cost)

    @property
    def estimated_result_size(self) -> float:
        return self.steps[-1].cardinality if self.steps else 1.0


def _vertex(atom) -> str:
    return str(atom) if isinstance(atom, Variable) else atom.n3()


def _is_bound(atom, bound: set[str]) -> bool:
    return not isinstance(atom, Variable) or atom.name in bound


def _fanout(store: Store, t: TriplePattern, bound: set[str]) -> float:
    """Average matches per already-bound end; the exact count when neither end is bound."""
    p = None if isinstance(t.p, Variable) else store.encode(t.p)
    if not isinstance(t.p, Variable) and p is None:
        return 0.0
    options = []
    if _is_bound(t.s, bound):
        options.append(store.average_size(p, Direction.BY_SUBJECT))
    if _is_bound(t.o, bound):
        options.append(store.average_size(p, Direction.BY_OBJECT))
    if not options:
        return float(match_count(store, t))
    return min(options)


def order_triples(
    store: Store, triples: Sequence[TriplePattern], bound: Iterable[str] = ()
) -> list[TriplePattern]:
    """Greedy extension order. ``bound`` names variables already fixed by seed rows."""
    remaining = list(triples)
    seen = set(bound)
    order: list[TriplePattern] = []
    while remaining:
        connected = [t for t in remaining if t.variables() & seen]
        if not connected:
            pick = min(remaining, key=lambda t: match_count(store, t))
        else:
            checks = [
                t for t in connected if _is_bound(t.s, seen) and _is_bound(t.o, seen)
            ]
            if checks:
                pick = checks[0]
            else:
                pick = min(connected, key=lambda t: _fanout(store, t, seen))
        remaining.remove(pick)
        order.append(pick)
        seen |= pick.variables()
    return order


def plan_bgp(
    store: Store, triples: Sequence[TriplePattern], estimator: CardEstimator | None = None
) -> BgpPlan:
    """Greedy order with its per-step WCO cost and estimated result size."""
    if not triples:
        return BgpPlan(steps=())
    estimator = estimator or CardEstimator(store)
    order = order_triples(store, triples)
    steps: list[PlanStep] = []
    seen_vars: set[str] = set()
    seen_vertices: set[str] = set()
    binary = 0.0
    for k, t in enumerate(order):
        if k == 0:
            cost = float(match_count(store, t))
        else:
            cost = wco_step_cost(estimator.estimate(order[:k]), _fanout(store, t, seen_vars))
            binary += binary_join_cost(estimator.estimate(order[:k]), match_count(store, t))
        new = tuple(
            v for v in dict.fromkeys(_vertex(a) for a in (t.s, t.o)) if v not in seen_vertices
        )
        seen_vertices.update(new)
        seen_vars |= t.variables()
        steps.append(PlanStep(t, new, estimator.estimate(order[: k + 1]), cost))
    return BgpPlan(steps=tuple(steps), binary_cost=binary)


def estimate_cardinality(
    store: Store, triples: Sequence[TriplePattern], estimator: CardEstimator | None = None
) -> float:
    estimator = estimator or CardEstimator(store)
    return estimator.estimate(order_triples(store, triples))


# -- evaluation --------------------------------------------------------------


def evaluate_bgp(
    store: Store,
    triples: Sequence[TriplePattern],
    cand: Bag | None = None,
    deadline: Deadline | None = None,
) -> Bag:
    """All mappings over the BGP's variables that embed it into the store.

    With ``cand``, only mappings compatible with some candidate row are produced.
    Shared variables every candidate row binds seed the extension; the rest are
    checked by a final semijoin.
    """
    if cand is not None and not cand:
        return Bag()
    if not triples:
        return Bag.identity()
    if len(triples) > 1 and len(bgp_components(triples)) > 1:
        raise ContractError(
            "BGP is not connected: " + " . ".join(t.text() for t in triples)
        )

    compiled = {t: _compile(store, t) for t in triples}
    if any(slots is None for slots in compiled.values()):
        return Bag()

    variables = set().union(*(t.variables() for t in triples))
    shared = sorted(variables & cand.variables()) if cand is not None else []
    seeded: list[str] = []
    rows: list[Mapping] = [{}]
    if cand is not None and shared:
        seeded = sorted(cand.certain_variables() & set(shared))
        if seeded:
            keys = dict.fromkeys(tuple(m[v] for v in seeded) for m in cand)
            rows = [dict(zip(seeded, key, strict=True)) for key in keys]

    for t in order_triples(store, triples, bound=seeded):
        if deadline is not None:
            deadline.check()
        rows = list(_extend(store, rows, compiled[t], deadline))
        if not rows:
            return Bag()

    result = Bag(rows)
    if len(seeded) < len(shared):
        result = semijoin(result, cand.project(shared))
    return result
