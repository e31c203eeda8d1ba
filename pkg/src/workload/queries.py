"""Query fixture registry: loads versioned YAML query fixtures from queries/."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from pathlib import Path

import yaml


@dataclass(frozen=True)
class QueryFixture:
    """A benchmark query with its expected static shape."""

    id: str
    version: int
    dataset: str  # "lubm", "dbpedia" or "example"
    group: str  # "mixed" (UNION and OPTIONAL) or "optional" (OPTIONAL-heavy)
    query_type: str  # "BGP", "U", "O" or "U+O"
    description: str
    text: str
    count_bgp: int
    depth: int
    # statistics as published alongside the benchmark, when they exist
    published_count_bgp: int | None
    published_depth: int | None
    erratum: str
    updated_at: str
    source_path: Path


QUERIES_DIR = Path(__file__).resolve().parent.parent.parent / "queries"


def _parse_filename(path: Path) -> tuple[str, int] | None:
    """Parse '<id>.v<N>.yaml' into (id, version). Returns None on non-match."""
    stem = path.stem  # e.g., "lubm_mixed_01.v1"
    if ".v" not in stem:
        return None
    id_part, _, v_part = stem.rpartition(".v")
    try:
        return id_part, int(v_part)
    except ValueError:
        return None


def _optional_int(value) -> int | None:
    return None if value is None else int(value)


@lru_cache(maxsize=1)
def _load_all(queries_dir: Path = QUERIES_DIR) -> dict[str, QueryFixture]:
    """Load every fixture YAML in queries_dir, keeping only the highest version per id."""
    latest: dict[str, QueryFixture] = {}

    if not queries_dir.is_dir():
        return latest

    for path in sorted(queries_dir.glob("*.yaml")):
        parsed = _parse_filename(path)
        if parsed is None:
            continue
        file_id, file_version = parsed

        with path.open(encoding="utf-8") as f:
            data = yaml.safe_load(f) or {}

        # Manifest id/version should agree with filename; the manifest wins.
        manifest_id = data.get("id", file_id)
        manifest_version = int(data.get("version", file_version))
        published = data.get("published") or {}

        fixture = QueryFixture(
            id=manifest_id,
            version=manifest_version,
            dataset=data.get("dataset", ""),
            group=data.get("group", ""),
            query_type=data.get("query_type", ""),
            description=data.get("description", "").strip(),
            text=data.get("query", "").strip(),
            count_bgp=int(data.get("count_bgp", 0)),
            depth=int(data.get("depth", 0)),
            published_count_bgp=_optional_int(published.get("count_bgp")),
            published_depth=_optional_int(published.get("depth")),
            erratum=(data.get("erratum") or "").strip(),
            updated_at=str(data.get("updated_at", "")),
            source_path=path,
        )

        existing = latest.get(manifest_id)
        if existing is None or fixture.version > existing.version:
            latest[manifest_id] = fixture

    return latest


def get(query_id: str) -> QueryFixture:
    """Look up a fixture by id. Raises KeyError if it does not exist."""
    fixtures = _load_all()
    if query_id not in fixtures:
        raise KeyError(f"No query fixture with id={query_id!r}")
    return fixtures[query_id]


def by_dataset(dataset: str) -> list[QueryFixture]:
    """Fixtures of one dataset, sorted by id."""
    return [f for f in list_all() if f.dataset == dataset]


def list_all() -> list[QueryFixture]:
    """Return all loaded fixtures, sorted by (dataset, id)."""
    fixtures = _load_all()
    return sorted(fixtures.values(), key=lambda f: (f.dataset, f.id))


def reload() -> None:
    """Clear the cache: useful for tests and eval runs that modify fixtures on disk."""
    _load_all.cache_clear()
