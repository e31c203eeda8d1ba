#!/usr/bin/env python3
"""Summarize the metrics JSONL produced by quarry.

Usage:
    python scripts/report.py                # last 30 days
    python scripts/report.py --days 7
    python scripts/report.py --all
    python scripts/report.py --mode full
    python scripts/report.py --path /custom/path/metrics.jsonl
"""

from __future__ import annotations

import argparse
import json
import statistics
import sys
from collections import Counter, defaultdict
from datetime import datetime, timedelta, timezone
from pathlib import Path

import numpy as np

# repo root on sys.path for src.core
HERE = Path(__file__).resolve().parent
sys.path.insert(0, str(HERE.parent))

from src.core.config import MODES  # noqa: E402
from src.core.metrics import default_metrics_path  # noqa: E402


def percentile(values: list[float], pct: float) -> float:
    return float(np.percentile(values, pct, method="nearest")) if values else 0.0


def read_records(path: Path, since: datetime | None = None) -> list[dict]:
    """Records from the JSONL file, oldest first. Malformed lines and, with ``since``,
    records without a parseable timestamp are dropped."""
    records = []
    for line in path.read_text(encoding="utf-8").splitlines():
        try:
            record = json.loads(line)
        except json.JSONDecodeError:
            continue
        if since is not None:
            try:
                if datetime.fromisoformat(record.get("timestamp", "")) < since:
                    continue
            except (TypeError, ValueError):
                continue
        records.append(record)
    return records


def fmt_us(x: float) -> str:
    if x >= 1_000_000:
        return f"{x / 1_000_000:.2f}s"
    if x >= 1000:
        return f"{x / 1000:.1f}ms"
    return f"{x:.0f}us"


def summary(records: list[dict]) -> None:
    if not records:
        print("No records in window.")
        return

    n = len(records)
    ok = [r for r in records if not r.get("error")]
    print(f"Queries:            {n}")
    print(f"Succeeded:          {len(ok)}")
    print(f"Result rows:        {sum(r.get('result_rows', 0) or 0 for r in ok)}")
    print()

    # Per mode: latency and the counters the optimizations move
    by_mode: dict[str, list[dict]] = defaultdict(list)
    for r in ok:
        by_mode[r.get("mode", "")].append(r)
    if by_mode:
        print("By mode (total p50 / p95, mean join space, pruned, transforms):")
        for mode in sorted(by_mode):
            rows = by_mode[mode]
            totals = [r.get("total_us", 0) or 0 for r in rows]
            join_space = statistics.mean(r.get("join_space", 0) or 0 for r in rows)
            pruned = sum(r.get("pruned_bgp_count", 0) or 0 for r in rows)
            transforms = sum(len(r.get("transformations") or []) for r in rows)
            print(
                f"  {mode or '(empty)':<6} n={len(rows):<5} "
                f"{fmt_us(percentile(totals, 50))} / {fmt_us(percentile(totals, 95))}  "
                f"join_space {join_space:,.0f}  pruned {pruned}  transforms {transforms}"
            )
        print()

    # By query type
    by_type = Counter(r.get("query_type", "") for r in records)
    print("By query type:")
    for qtype, count in by_type.most_common():
        print(f"  {qtype or '(unknown)':<20} {count}")
    print()

    # Slowest queries
    slowest = sorted(ok, key=lambda r: r.get("total_us", 0) or 0, reverse=True)[:5]
    if slowest:
        print("Slowest:")
        for r in slowest:
            qid, mode = r.get("query_id", ""), r.get("mode", "")
            print(f"  {qid:<30} {mode:<5} {fmt_us(r.get('total_us', 0))}")
        print()

    savings = join_space_by_query(ok)
    if savings:
        print("Join space, base against full (latest record per query and mode):")
        for qid, (base, full) in sorted(savings.items(), key=lambda kv: kv[1][0] - kv[1][1]):
            ratio = f"{base / full:,.1f}x" if full else "n/a"
            print(f"  {qid:<30} {base:>14,} -> {full:>14,}  {ratio}")
        print()

    # Error summary
    errors = [r for r in records if r.get("error")]
    if errors:
        print(f"Records with errors: {len(errors)} ({100 * len(errors) / n:.1f}%)")
        reasons = Counter(r["error"].split(":", 1)[0] for r in errors)
        for reason, count in reasons.most_common(5):
            print(f"  {reason[:50]:<50} {count}")


def join_space_by_query(records: list[dict]) -> dict[str, tuple[int, int]]:
    """(base, full) join space for every query run in both modes."""
    latest: dict[tuple[str, str], int] = {}
    for r in records:
        latest[(r.get("query_id", ""), r.get("mode", ""))] = r.get("join_space", 0) or 0
    return {
        qid: (latest[(qid, "base")], latest[(qid, "full")])
        for qid, mode in latest
        if mode == "base" and (qid, "full") in latest
    }


def main() -> int:
    ap = argparse.ArgumentParser(description="Summarize the per-query metrics quarry writes")
    ap.add_argument("--path", type=Path, help=f"metrics file (default: {default_metrics_path()})")
    window = ap.add_mutually_exclusive_group()
    window.add_argument("--days", type=int, default=30, help="look back N days (default: 30)")
    window.add_argument("--all", action="store_true", help="every record in the file")
    ap.add_argument("--mode", choices=MODES, help="only records of one execution mode")
    args = ap.parse_args()

    path = args.path or default_metrics_path()
    if not path.exists():
        print(f"{path}: no metrics yet. Run quarry with --metrics to record some.")
        return 0

    since = None if args.all else datetime.now(timezone.utc) - timedelta(days=args.days)
    records = read_records(path, since)
    if args.mode:
        records = [r for r in records if r.get("mode") == args.mode]
    scope = "all time" if args.all else f"last {args.days} day(s)"
    print(f"{path}: {len(records)} record(s), {scope}")
    print()
    summary(records)
    return 0


if __name__ == "__main__":
    sys.exit(main())
