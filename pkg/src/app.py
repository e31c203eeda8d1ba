"""Main application class: load the store once, then run every query against it."""

import sys
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

from .core.config import RunConfig
from .core.errors import QuarryError
from .core.metrics import MetricsLogger, QueryMetric, now_timestamp
from .engine.executor import ExecMode, ExecOptions
from .engine.formatting import format_explain, format_results, format_stats
from .engine.pipeline import execute_query
from .plan.stats import query_metrics
from .sparql.parser import parse_query
from .store.rdf_store import Store, load_ntriples_file
from .workload import queries as registry


@dataclass
class QueryOutcome:
    """Result of one query: the text block for stdout, or the reason it failed."""

    query_id: str
    source: str
    lines: list[str] = field(default_factory=list)
    result_rows: int = 0
    total_us: int = 0
    error: str | None = None

    @property
    def success(self) -> bool:
        return self.error is None


def read_query(ref: str) -> tuple[str, str]:
    """(query id, query text) for a file path, or for a fixture id from the registry."""
    path = Path(ref)
    if path.exists():
        return path.stem, path.read_text(encoding="utf-8")
    try:
        fixture = registry.get(ref)
    except KeyError:
        raise FileNotFoundError(f"no query file or fixture named {ref!r}") from None
    return fixture.id, fixture.text


class QuarryApp:
    """Batch runner orchestrating load, plan, transform, evaluate and report."""

    def __init__(self, config: RunConfig, out=None, err=None):
        self._config = config
        self._out = out or sys.stdout
        self._err = err or sys.stderr
        self._store: Store | None = None

        # Metrics logger (JSONL); off unless the config names a file
        metrics_path = Path(config.metrics_path) if config.metrics_path else None
        self._metrics = MetricsLogger(metrics_path, enabled=metrics_path is not None)

        self._options = ExecOptions(
            mode=ExecMode(config.mode),
            fixed_ratio=config.threshold_ratio,
            timeout_us=config.timeout_us,
            seed=config.seed,
            sample_size=config.sample_size,
        )

    @property
    def store(self) -> Store | None:
        return self._store

    def _warn(self, message: str) -> None:
        print(message, file=self._err)

    def load_store(self) -> Store:
        started = time.perf_counter()
        self._store = load_ntriples_file(self._config.data_path)
        elapsed_ms = (time.perf_counter() - started) * 1000
        self._warn(
            f"[load] {self._config.data_path}: {len(self._store)} triples, "
            f"{self._store.term_count} terms in {elapsed_ms:.1f} ms"
        )
        return self._store

    def run_query(self, ref: str) -> QueryOutcome:
        """Parse, plan, transform and evaluate one query. Never raises for query errors."""
        store = self._store
        if store is None:
            raise RuntimeError("load_store() must run before run_query()")
        started = time.perf_counter()
        outcome = QueryOutcome(query_id=Path(ref).stem, source=ref)
        metric = QueryMetric(
            timestamp=now_timestamp(),
            query_id=outcome.query_id,
            query_path=ref,
            mode=self._config.mode,
            seed=self._config.seed,
        )
        try:
            outcome.query_id, text = read_query(ref)
            metric.query_id = outcome.query_id
            q = parse_query(text)
            shape = query_metrics(q)
            metric.count_bgp, metric.depth, metric.query_type = (
                shape.count_bgp,
                shape.depth,
                shape.query_type,
            )
            run = execute_query(store, q, self._options)
        except (QuarryError, OSError, ValueError) as e:
            outcome.error = f"{e.__class__.__name__}: {e}"
        else:
            variables = q.output_variables()
            outcome.result_rows = len(run.result)
            outcome.lines.append(f"# query {outcome.query_id}")
            if self._config.explain:
                tree = run.tree
                outcome.lines.extend(
                    format_explain(
                        run.plan_before, run.plan_after, run.transformations, tree.rejected_hoists
                    )
                )
            outcome.lines.extend(format_results(run.result, variables, store))
            if self._config.stats:
                outcome.lines.extend(
                    format_stats(
                        outcome.query_id,
                        shape,
                        run.stats,
                        run.tree,
                        store,
                        outcome.result_rows,
                        seed=self._config.seed,
                        sample_size=self._config.sample_size,
                    )
                )
            metric.result_rows = outcome.result_rows
            metric.join_space = run.stats.join_space
            metric.pruned_bgp_count = run.stats.pruned_bgp_count
            metric.materialized_rows = run.stats.materialized_rows
            metric.transformations = [r.describe() for r in run.transformations]
            metric.transform_us = run.stats.transform_time_us
            metric.eval_us = run.stats.wall_time_us

        outcome.total_us = int((time.perf_counter() - started) * 1_000_000)
        metric.total_us = outcome.total_us
        metric.error = outcome.error
        self._metrics.log(metric)
        return outcome

    def run(self) -> int:
        """Run the whole batch. Exit status: 0 ok, 1 a query failed, 2 no store."""
        try:
            self.load_store()
        except (QuarryError, OSError) as e:
            self._warn(f"[load] error: {e}")
            return 2

        refs = list(self._config.query_paths)
        if self._config.parallel and len(refs) > 1:
            with ThreadPoolExecutor() as pool:
                outcomes = list(pool.map(self.run_query, refs))
        else:
            outcomes = [self.run_query(ref) for ref in refs]

        failed = 0
        for outcome in outcomes:
            if outcome.success:
                print("\n".join(outcome.lines), file=self._out)
                self._warn(
                    f"[query] {outcome.query_id}: {outcome.result_rows} rows "
                    f"in {outcome.total_us} us"
                )
            else:
                failed += 1
                self._warn(f"[query] {outcome.source}: error: {outcome.error}")
        return 1 if failed else 0
