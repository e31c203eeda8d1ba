"""Metrics logger: append-only JSONL, one line per executed query.

Records go to ``$XDG_DATA_HOME/quarry/metrics.jsonl`` (default
``~/.local/share/quarry/metrics.jsonl``) unless the config points elsewhere. The
engine never reads the file back; ``scripts/report.py`` summarizes it on demand.

Logging must never break a batch run, so every write is wrapped in a
try/except that drops the record with a stderr warning.
"""

from __future__ import annotations

import json
import os
import sys
import threading
from dataclasses import asdict, dataclass, field
from datetime import datetime, timezone
from pathlib import Path

# ----- record -------------------------------------------------------------


@dataclass
class QueryMetric:
    """One executed query. Serialized as one JSONL line."""

    timestamp: str = ""
    query_id: str = ""
    query_path: str = ""
    mode: str = ""  # base / tt / cp / full
    seed: int = 0
    result_rows: int = 0
    # static shape
    count_bgp: int = 0
    depth: int = 0
    query_type: str = ""
    # execution
    join_space: int = 0
    pruned_bgp_count: int = 0
    materialized_rows: int = 0
    transformations: list[str] = field(default_factory=list)
    # timings, microseconds
    transform_us: int = 0
    eval_us: int = 0
    total_us: int = 0
    error: str | None = None
    # arbitrary extras for future use without a schema bump
    extra: dict = field(default_factory=dict)


def now_timestamp() -> str:
    return datetime.now(timezone.utc).isoformat(timespec="seconds")


# ----- logger -------------------------------------------------------------


def default_metrics_path() -> Path:
    """Return the default metrics file path, honoring XDG_DATA_HOME."""
    base = os.environ.get("XDG_DATA_HOME", "").strip()
    root = Path(base) if base else Path.home() / ".local" / "share"
    return root / "quarry" / "metrics.jsonl"


class MetricsLogger:
    """Append-only JSONL logger. Thread-safe (``--parallel`` logs from worker threads)."""

    def __init__(self, path: Path | None = None, enabled: bool = True):
        self._path = path or default_metrics_path()
        self._enabled = enabled
        self._lock = threading.Lock()

    @property
    def path(self) -> Path:
        return self._path

    @property
    def enabled(self) -> bool:
        return self._enabled

    def log(self, metric: QueryMetric) -> None:
        """Append a single metric. Never raises: warns to stderr on failure."""
        if not self._enabled:
            return
        try:
            with self._lock:
                self._path.parent.mkdir(parents=True, exist_ok=True)
                with self._path.open("a", encoding="utf-8") as f:
                    f.write(json.dumps(asdict(metric), ensure_ascii=False) + "\n")
        except Exception as e:
            print(f"[metrics] warning: failed to write metric: {e}", file=sys.stderr)


# Exposed for tests + scripts/report.py
__all__ = [
    "MetricsLogger",
    "QueryMetric",
    "default_metrics_path",
    "now_timestamp",
]


if __name__ == "__main__":
    # Tiny demo: log a synthetic record.
    m = QueryMetric(
        timestamp=now_timestamp(),
        query_id="presidents_names",
        mode="full",
        result_rows=4,
        count_bgp=5,
        depth=3,
        query_type="U+O",
        join_space=12,
        transform_us=850,
        eval_us=1_200,
    )
    m.total_us = m.transform_us + m.eval_us
    MetricsLogger().log(m)
    print(f"Wrote demo metric to {default_metrics_path()}")
