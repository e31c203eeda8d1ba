"""Entry point for quarry."""

import argparse
import sys
from pathlib import Path

from .core.config import MODES, RunConfig
from .core.errors import ConfigError


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="quarry",
        description="Run SPARQL queries with UNION/OPTIONAL over an N-Triples file.",
    )
    p.add_argument("--data", help="N-Triples file to load")
    p.add_argument(
        "--query",
        action="append",
        help="query file, or a fixture id from queries/ (repeatable)",
    )
    p.add_argument("--mode", choices=MODES, help="base | tt | cp | full (default: full)")
    p.add_argument(
        "--cp-threshold",
        type=float,
        help="fixed pruning threshold as a fraction of the triple count (default: 0.01)",
    )
    p.add_argument("--explain", action="store_true", default=None, help="print the plan trees")
    p.add_argument("--stats", action="store_true", default=None, help="print per-query stats")
    p.add_argument("--seed", type=int, help="sampling seed (default: 0)")
    p.add_argument("--sample-size", type=int, help="rows sampled per estimate (default: 100)")
    p.add_argument("--timeout-us", type=int, help="per-query budget (default: 2000000)")
    p.add_argument(
        "--parallel", action="store_true", default=None, help="run distinct queries concurrently"
    )
    p.add_argument("--config", type=Path, help="JSON config file (flags take precedence)")
    p.add_argument("--metrics", help="append one JSONL metric per query to this file")
    return p


def main(argv: list[str] | None = None):
    """Main entry point."""
    from .app import QuarryApp

    args = build_parser().parse_args(argv)
    try:
        config = RunConfig.load(args.config).with_overrides(
            data_path=args.data,
            query_paths=args.query,
            mode=args.mode,
            threshold_ratio=args.cp_threshold,
            explain=args.explain,
            stats=args.stats,
            seed=args.seed,
            sample_size=args.sample_size,
            timeout_us=args.timeout_us,
            parallel=args.parallel,
            metrics_path=args.metrics,
        )
    except ConfigError as e:
        print(f"[config] error: {e}", file=sys.stderr)
        sys.exit(2)

    if not config.is_runnable:
        print("[config] error: --data and at least one --query are required", file=sys.stderr)
        sys.exit(2)

    app = QuarryApp(config)
    sys.exit(app.run())


if __name__ == "__main__":
    main()
