#!/usr/bin/env python3
"""Run query workloads in every execution mode and write a comparison report.

What this evaluates
-------------------
The four execution modes side by side on the same store and query:

- **base**: BE-tree as built, no pruning
- **tt**: cost-driven merge/inject transformations
- **cp**: candidate pruning with the fixed threshold
- **full**: transformations plus pruning with the adaptive threshold

Every mode must return the same bag of results; a mismatch is reported as a
failure. For random cases the naive reference evaluator is checked too.

Workloads
---------
- the synthetic selectivity profiles over their generated store
- the worked example fixture over ``data/presidents.nt``
- ``--data FILE --dataset lubm|dbpedia``: that dataset's fixtures over FILE
- ``--random N``: N seeded random store/query pairs

Metrics reported
----------------
- **rows**: result size (identical across modes when the case passes)
- **join_space**: product/sum of actual BGP result sizes over the final tree
- **materialized**: rows produced by BGP evaluation, summed over leaves
- **pruned**: BGP evaluations restricted by a candidate set
- **transforms**: merges and injects applied
- **total_us**: transformation plus evaluation wall time

Usage
-----
    python evals/run.py
    python evals/run.py --random 200 --seed 7
    python evals/run.py --data lubm.nt --dataset lubm
    python evals/run.py --output evals/last_report.md
"""

from __future__ import annotations

import argparse
import json
import statistics
import sys
import time
from dataclasses import asdict, dataclass, field
from pathlib import Path

HERE = Path(__file__).resolve().parent
REPO = HERE.parent
sys.path.insert(0, str(REPO))

from src.algebra.reference import reference_evaluate  # noqa: E402
from src.core.errors import QuarryError  # noqa: E402
from src.engine.executor import ExecMode, ExecOptions  # noqa: E402
from src.engine.pipeline import execute_query  # noqa: E402
from src.sparql.ast import Query  # noqa: E402
from src.sparql.parser import parse_query  # noqa: E402
from src.store.rdf_store import Store, load_ntriples_file  # noqa: E402
from src.workload import profiles, queries, random_cases  # noqa: E402

MODES = [m.value for m in ExecMode]


@dataclass
class ModeResult:
    mode: str
    rows: int = 0
    join_space: int = 0
    materialized: int = 0
    pruned: int = 0
    transforms: int = 0
    total_us: int = 0
    error: str | None = None


@dataclass
class CaseResult:
    id: str
    workload: str
    modes: list = field(default_factory=list)
    consistent: bool = True
    oracle_checked: bool = False
    note: str = ""


@dataclass
class Report:
    timestamp: str
    seed: int
    cases: list = field(default_factory=list)
    passed: int = 0
    failed: int = 0
    join_space_reduction_median: dict = field(default_factory=dict)


def run_case(
    case_id: str,
    workload: str,
    store: Store,
    q: Query,
    seed: int,
    fixed_ratio: float,
    check_oracle: bool = False,
) -> CaseResult:
    result = CaseResult(id=case_id, workload=workload)
    bags = {}
    for mode in MODES:
        opts = ExecOptions(mode=ExecMode(mode), fixed_ratio=fixed_ratio, seed=seed)
        mr = ModeResult(mode=mode)
        started = time.perf_counter()
        try:
            run = execute_query(store, q, opts)
        except QuarryError as e:
            mr.error = f"{e.__class__.__name__}: {e}"
        else:
            bags[mode] = run.result
            mr.rows = len(run.result)
            mr.join_space = run.stats.join_space
            mr.materialized = run.stats.materialized_rows
            mr.pruned = run.stats.pruned_bgp_count
            mr.transforms = len(run.transformations)
        mr.total_us = int((time.perf_counter() - started) * 1_000_000)
        result.modes.append(mr)

    if len(bags) != len(MODES):
        result.consistent = False
        result.note = "a mode failed"
        return result
    base = bags["base"]
    mismatched = [m for m, bag in bags.items() if bag != base]
    if mismatched:
        result.consistent = False
        result.note = "results differ from base in " + ", ".join(mismatched)
    if check_oracle:
        result.oracle_checked = True
        expected = reference_evaluate(q.body, store)
        if base != expected:
            result.consistent = False
            result.note = (result.note + "; " if result.note else "") + "base differs from oracle"
    return result


def aggregate(cases: list[CaseResult], seed: int) -> Report:
    rep = Report(
        timestamp=time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime()),
        seed=seed,
        cases=cases,
    )
    rep.passed = sum(c.consistent for c in cases)
    rep.failed = len(cases) - rep.passed
    for mode in MODES[1:]:
        ratios = []
        for c in cases:
            by_mode = {m.mode: m for m in c.modes}
            base, other = by_mode["base"], by_mode[mode]
            if base.error or other.error or not other.join_space:
                continue
            ratios.append(base.join_space / other.join_space)
        if ratios:
            rep.join_space_reduction_median[mode] = round(statistics.median(ratios), 3)
    return rep


def render_markdown(report: Report) -> str:
    lines = []
    lines.append("# Mode Comparison Report")
    lines.append("")
    lines.append(f"- **Generated:** {report.timestamp}")
    lines.append(f"- **Seed:** {report.seed}")
    lines.append(f"- **Cases:** {len(report.cases)}")
    lines.append(f"- **Consistent across modes:** {report.passed} / {len(report.cases)}")
    lines.append("")
    if report.join_space_reduction_median:
        lines.append("## Join space vs base (median ratio, higher is better)")
        lines.append("")
        lines.append("| Mode | base / mode |")
        lines.append("|---|---|")
        for mode, ratio in report.join_space_reduction_median.items():
            lines.append(f"| `{mode}` | {ratio:g} |")
        lines.append("")

    lines.append("## Per-case results")
    lines.append("")
    lines.append("| ID | Workload | Mode | Rows | Join space | Materialized | Pruned | Transforms | Time |")
    lines.append("|---|---|---|---|---|---|---|---|---|")
    for c in report.cases:
        if c.workload == "random" and c.consistent:
            continue
        mark = "" if c.consistent else " ❌"
        for m in c.modes:
            if m.error:
                lines.append(f"| `{c.id}`{mark} | {c.workload} | {m.mode} | **ERROR:** {m.error} |||||")
                continue
            lines.append(
                f"| `{c.id}`{mark} | {c.workload} | {m.mode} | {m.rows} | {m.join_space} | "
                f"{m.materialized} | {m.pruned} | {m.transforms} | {m.total_us} us |"
            )
    random_ok = sum(1 for c in report.cases if c.workload == "random" and c.consistent)
    if random_ok:
        lines.append("")
        lines.append(f"{random_ok} consistent random case(s) omitted from the table.")

    failures = [c for c in report.cases if not c.consistent]
    if failures:
        lines.append("")
        lines.append("## Failures")
        lines.append("")
        for c in failures:
            lines.append(f"- `{c.id}`: {c.note}")
    lines.append("")
    lines.append("## Methodology")
    lines.append("")
    lines.append("- Results are compared as bags: same rows with the same multiplicities.")
    lines.append(
        "- Join space is computed on each mode's final BE-tree, so `tt` and `full` "
        "show the effect of the transformations on intermediate result sizes."
    )
    lines.append("- Timings are wall-clock and vary run to run; every other column is seeded.")
    return "\n".join(lines) + "\n"


def collect(args) -> list[CaseResult]:
    results = []

    store = profiles.build_profile_store(args.seed)
    for profile in profiles.list_all():
        print(f"  profile {profile.name}...", end=" ", file=sys.stderr)
        r = run_case(profile.name, "profile", store, profile.query, args.seed, args.cp_threshold)
        print("OK" if r.consistent else r.note, file=sys.stderr)
        results.append(r)

    example = queries.get("presidents_names")
    presidents = load_ntriples_file(REPO / "data" / "presidents.nt")
    results.append(
        run_case(
            example.id,
            "example",
            presidents,
            parse_query(example.text),
            args.seed,
            args.cp_threshold,
            check_oracle=True,
        )
    )

    if args.data is not None:
        data_store = load_ntriples_file(args.data)
        print(f"  loaded {args.data}: {len(data_store)} triples", file=sys.stderr)
        for fixture in queries.by_dataset(args.dataset):
            print(f"  fixture {fixture.id}...", end=" ", file=sys.stderr)
            r = run_case(
                fixture.id,
                fixture.dataset,
                data_store,
                parse_query(fixture.text),
                args.seed,
                args.cp_threshold,
            )
            print("OK" if r.consistent else r.note, file=sys.stderr)
            results.append(r)

    for case in random_cases.cases(range(args.seed, args.seed + args.random)):
        results.append(
            run_case(
                f"random_{case.seed}",
                "random",
                case.store,
                case.query,
                args.seed,
                1.0,
                check_oracle=True,
            )
        )
    return results


def main() -> int:
    ap = argparse.ArgumentParser()
    ap.add_argument("--output", type=Path, default=HERE / "last_report.md")
    ap.add_argument("--json", type=Path, default=HERE / "last_report.json")
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--cp-threshold", type=float, default=0.01)
    ap.add_argument("--random", type=int, default=100, help="random cases to run (default: 100)")
    ap.add_argument("--data", type=Path, default=None, help="N-Triples file for the fixtures")
    ap.add_argument("--dataset", choices=["lubm", "dbpedia"], default="lubm")
    args = ap.parse_args()

    if args.data is not None and not args.data.exists():
        print(f"Data file not found: {args.data}", file=sys.stderr)
        return 1

    print(f"Running workloads in modes {', '.join(MODES)}...", file=sys.stderr)
    results = collect(args)
    report = aggregate(results, args.seed)

    args.output.parent.mkdir(parents=True, exist_ok=True)
    args.output.write_text(render_markdown(report))
    args.json.write_text(json.dumps(asdict(report), indent=2, ensure_ascii=False))

    print(f"\nWrote {args.output} and {args.json}", file=sys.stderr)
    print(f"Consistent: {report.passed} / {len(report.cases)}")
    for mode, ratio in report.join_space_reduction_median.items():
        print(f"Join space base/{mode}: median {ratio:g}")
    return 0 if report.failed == 0 else 1


if __name__ == "__main__":
    sys.exit(main())
