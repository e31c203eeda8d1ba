"""Configuration management for quarry."""

import json
from dataclasses import dataclass, field, fields, replace
from pathlib import Path

from .errors import ConfigError

MODES = ("base", "tt", "cp", "full")


@dataclass
class RunConfig:
    """One batch run: the data, the queries and how to execute them."""

    data_path: str = ""
    query_paths: list = field(default_factory=list)
    mode: str = "full"  # base / tt / cp / full

    # candidate pruning: fixed threshold as a fraction of the store's triple count
    threshold_ratio: float = 0.01

    explain: bool = False
    stats: bool = False

    # cardinality sampling
    seed: int = 0
    sample_size: int = 100

    timeout_us: int = 2_000_000
    parallel: bool = False
    metrics_path: str | None = None  # None disables the JSONL log

    _config_path: Path = field(default=None, repr=False)

    @classmethod
    def load(cls, config_path: Path | None = None) -> "RunConfig":
        """Load configuration from file."""
        if config_path is None:
            # Default to config.json in project root
            config_path = Path(__file__).parent.parent.parent / "config.json"

        config = cls()
        config._config_path = config_path

        if config_path.exists():
            try:
                with open(config_path) as f:
                    data = json.load(f)

                config.data_path = data.get("data_path", config.data_path)
                config.query_paths = data.get("query_paths", config.query_paths)
                config.mode = data.get("mode", config.mode)
                config.threshold_ratio = data.get("threshold_ratio", config.threshold_ratio)
                config.explain = data.get("explain", config.explain)
                config.stats = data.get("stats", config.stats)
                config.seed = data.get("seed", config.seed)
                config.sample_size = data.get("sample_size", config.sample_size)
                config.timeout_us = data.get("timeout_us", config.timeout_us)
                config.parallel = data.get("parallel", config.parallel)
                config.metrics_path = data.get("metrics_path", config.metrics_path)
            except (OSError, json.JSONDecodeError) as e:
                print(f"Warning: Failed to load config from {config_path}: {e}")

        config.validate()
        return config

    def save(self, config_path: Path | None = None) -> None:
        """Save configuration to file."""
        if config_path is None:
            config_path = self._config_path

        if config_path is None:
            config_path = Path(__file__).parent.parent.parent / "config.json"

        data = {f.name: getattr(self, f.name) for f in fields(self) if not f.name.startswith("_")}

        try:
            with open(config_path, "w") as f:
                json.dump(data, f, indent=2)
        except OSError as e:
            print(f"Error: Failed to save config to {config_path}: {e}")

    def with_overrides(self, **overrides) -> "RunConfig":
        """Copy with every non-None override applied; command-line flags win over the file."""
        changes = {k: v for k, v in overrides.items() if v is not None}
        unknown = set(changes) - {f.name for f in fields(self)}
        if unknown:
            raise ConfigError(f"unknown config field(s): {', '.join(sorted(unknown))}")
        updated = replace(self, **changes)
        updated._config_path = self._config_path
        updated.validate()
        return updated

    def validate(self) -> None:
        if self.mode not in MODES:
            raise ConfigError(f"mode must be one of {', '.join(MODES)}, got {self.mode!r}")
        if not 0 < self.threshold_ratio <= 1:
            raise ConfigError(f"threshold_ratio must be in (0, 1], got {self.threshold_ratio}")
        if self.sample_size <= 0:
            raise ConfigError(f"sample_size must be positive, got {self.sample_size}")
        if self.timeout_us <= 0:
            raise ConfigError(f"timeout_us must be positive, got {self.timeout_us}")

    @property
    def is_runnable(self) -> bool:
        """Check that there is data and at least one query."""
        return bool(self.data_path) and bool(self.query_paths)
