"""Unit tests for RunConfig: load/save round-trip, defaults, overrides, validation."""

from __future__ import annotations

import json

import pytest

from src.core.config import RunConfig
from src.core.errors import ConfigError


def test_defaults_when_file_missing(tmp_config_path):
    cfg = RunConfig.load(tmp_config_path)
    assert cfg.data_path == ""
    assert cfg.query_paths == []
    assert cfg.mode == "full"
    assert cfg.threshold_ratio == 0.01
    assert cfg.seed == 0
    assert cfg.sample_size == 100
    assert cfg.timeout_us == 2_000_000
    assert cfg.metrics_path is None
    assert cfg.is_runnable is False


def test_is_runnable_needs_data_and_a_query(tmp_config_path):
    cfg = RunConfig.load(tmp_config_path)
    cfg.data_path = "data/presidents.nt"
    assert cfg.is_runnable is False
    cfg.query_paths = ["presidents_names"]
    assert cfg.is_runnable is True


def test_load_save_round_trip(tmp_config_path):
    cfg = RunConfig.load(tmp_config_path)
    cfg.data_path = "data/presidents.nt"
    cfg.query_paths = ["presidents_names", "lubm_mixed_01"]
    cfg.mode = "cp"
    cfg.threshold_ratio = 0.2
    cfg.stats = True
    cfg.save(tmp_config_path)

    reloaded = RunConfig.load(tmp_config_path)
    assert reloaded.data_path == "data/presidents.nt"
    assert reloaded.query_paths == ["presidents_names", "lubm_mixed_01"]
    assert reloaded.mode == "cp"
    assert reloaded.threshold_ratio == 0.2
    assert reloaded.stats is True
    assert "_config_path" not in json.loads(tmp_config_path.read_text())


def test_load_tolerates_malformed_json(tmp_config_path, capsys):
    tmp_config_path.write_text("{ this is not json")
    cfg = RunConfig.load(tmp_config_path)
    # Falls back to defaults instead of raising
    assert cfg.mode == "full"
    out = capsys.readouterr().out
    assert "Failed to load" in out


def test_load_rejects_invalid_values(tmp_config_path):
    tmp_config_path.write_text(json.dumps({"mode": "fast"}))
    with pytest.raises(ConfigError):
        RunConfig.load(tmp_config_path)


def test_overrides_skip_none_values(tmp_config_path):
    tmp_config_path.write_text(json.dumps({"mode": "tt", "seed": 7}))
    cfg = RunConfig.load(tmp_config_path)
    updated = cfg.with_overrides(mode=None, seed=3, stats=True)
    assert updated.mode == "tt"
    assert updated.seed == 3
    assert updated.stats is True
    # the original is untouched
    assert cfg.seed == 7


def test_unknown_override_is_an_error():
    with pytest.raises(ConfigError, match="colour"):
        RunConfig().with_overrides(colour="blue")


@pytest.mark.parametrize(
    "changes",
    [
        {"mode": "fastest"},
        {"threshold_ratio": 0.0},
        {"threshold_ratio": 1.5},
        {"sample_size": 0},
        {"timeout_us": -1},
    ],
)
def test_validate_rejects(changes):
    with pytest.raises(ConfigError):
        RunConfig().with_overrides(**changes)


def test_example_config_is_valid(repo_root):
    cfg = RunConfig.load(repo_root / "config.example.json")
    assert cfg.is_runnable
    assert cfg.mode == "full"
