"""Fixture-backed knowledge-graph tables.

Layout: one ``<table>.json`` file per table in a directory, each holding a
JSON array of records. Every record is validated at load time; one bad
record fails the whole load.
"""

from __future__ import annotations

import json
from collections.abc import Mapping
from dataclasses import dataclass, field
from pathlib import Path
from types import MappingProxyType

import jsonschema

from ..resources import data_path

BARS_PER_DAY = 390  # 09:30 through 15:59, one bar per minute

_str = {"type": "string", "minLength": 1}
_opt_str = {"type": ["string", "null"]}
_date = {"type": "string", "pattern": r"^\d{4}-\d{2}-\d{2}$"}
_names = {"type": "array", "items": _str}
_bar = {
    "type": "array",
    "prefixItems": [
        {"type": "number", "exclusiveMinimum": 0},
        {"type": "number", "exclusiveMinimum": 0},
        {"type": "number", "exclusiveMinimum": 0},
        {"type": "number", "exclusiveMinimum": 0},
        {"type": "integer", "minimum": 0},
    ],
    "minItems": 5,
    "maxItems": 5,
}


def _obj(required: dict, optional: dict | None = None) -> dict:
    return {
        "type": "object",
        "properties": {**required, **(optional or {})},
        "required": sorted(required),
    }


TABLE_SCHEMAS: dict[str, dict] = {
    "finance_companies": _obj(
        {"ticker": _str, "name": _str, "market_cap": {"type": "number", "minimum": 0}},
        {
            "pe_ratio": {"type": ["number", "null"]},
            "dividends": {
                "type": "array",
                "items": _obj({"date": _date, "amount": {"type": "number", "minimum": 0}}),
            },
        },
    ),
    "finance_minute_bars": _obj(
        {
            "ticker": _str,
            "date": _date,
            "bars": {"type": "array", "items": _bar, "minItems": BARS_PER_DAY, "maxItems": BARS_PER_DAY},
        }
    ),
    "music_artists": _obj(
        {"name": _str, "kind": {"enum": ["person", "band"]}},
        {
            "birth_date": {"anyOf": [_date, {"type": "null"}]},
            "members": _names,
            "works": {
                "type": "array",
                "items": _obj({"title": _str, "year": {"type": "integer"}, "type": {"enum": ["album", "single"]}}),
            },
        },
    ),
    "music_songs": _obj({"title": _str, "artist": _str, "release_date": _date}, {"writers": _names}),
    "movie_movies": _obj(
        {"title": _str, "release_date": _date},
        {
            "directors": _names,
            "cast": _names,
            "genres": _names,
            "budget": {"type": ["number", "null"]},
            "revenue": {"type": ["number", "null"]},
        },
    ),
    "movie_persons": _obj(
        {"name": _str},
        {
            "birth_date": {"anyOf": [_date, {"type": "null"}]},
            "acted_in": _names,
            "directed": _names,
            "oscar_wins": {"type": "integer", "minimum": 0},
        },
    ),
    "sports_nba_games": _obj(
        {
            "date": _date,
            "home": _str,
            "away": _str,
            "home_pts": {"type": "integer", "minimum": 0},
            "away_pts": {"type": "integer", "minimum": 0},
        }
    ),
    "sports_soccer_games": _obj(
        {
            "date": _date,
            "competition": _str,
            "home": _str,
            "away": _str,
            "home_goals": {"type": "integer", "minimum": 0},
            "away_goals": {"type": "integer", "minimum": 0},
        }
    ),
}


class FixtureError(ValueError):
    """A fixture file or record failed validation."""


def _fold(name: str) -> str:
    return " ".join(name.casefold().split())


def _check_bars(rec: dict) -> None:
    for i, (o, h, l, c, _v) in enumerate(rec["bars"]):
        if not (l <= min(o, c) and max(o, c) <= h):
            raise jsonschema.ValidationError(f"bar {i} violates low <= open/close <= high")


@dataclass(frozen=True)
class KgStore:
    """Read-only tables plus lookup indexes keyed by the API's case rules."""

    tables: Mapping[str, tuple[dict, ...]] = field(default_factory=dict)

    def table(self, name: str) -> tuple[dict, ...]:
        return self.tables.get(name, ())

    def __post_init__(self):
        idx: dict[str, dict[str, dict]] = {}
        idx["company"] = {r["ticker"].upper(): r for r in self.table("finance_companies")}
        bars: dict[str, list[dict]] = {}
        for r in self.table("finance_minute_bars"):
            bars.setdefault(r["ticker"].upper(), []).append(r)
        idx["bars"] = {t: sorted(days, key=lambda d: d["date"]) for t, days in bars.items()}
        idx["artist"] = {_fold(r["name"]): r for r in self.table("music_artists")}
        idx["song"] = {_fold(r["title"]): r for r in self.table("music_songs")}
        idx["movie"] = {_fold(r["title"]): r for r in self.table("movie_movies")}
        idx["person"] = {_fold(r["name"]): r for r in self.table("movie_persons")}
        object.__setattr__(self, "index", MappingProxyType(idx))

    @property
    def is_empty(self) -> bool:
        return not any(self.tables.values())


def load_fixtures(path: str | Path) -> KgStore:
    root = Path(path)
    if not root.is_dir():
        raise FixtureError(f"fixture directory not found: {root}")
    tables: dict[str, tuple[dict, ...]] = {}
    for file in sorted(root.glob("*.json")):
        name = file.stem
        schema = TABLE_SCHEMAS.get(name)
        if schema is None:
            raise FixtureError(f"{file.name}: unknown table {name!r}; expected one of {sorted(TABLE_SCHEMAS)}")
        try:
            records = json.loads(file.read_text(encoding="utf-8"))
        except json.JSONDecodeError as exc:
            raise FixtureError(f"{file.name}: invalid JSON: {exc}") from exc
        if not isinstance(records, list):
            raise FixtureError(f"{file.name}: expected a JSON array of records")
        validator = jsonschema.Draft202012Validator(schema)
        for i, rec in enumerate(records):
            try:
                validator.validate(rec)
                if name == "finance_minute_bars":
                    _check_bars(rec)
            except jsonschema.ValidationError as exc:
                raise FixtureError(f"{file.name}: record {i}: {exc.message}") from exc
        tables[name] = tuple(records)
    return KgStore(MappingProxyType(tables))


def default_fixtures_dir() -> Path:
    return data_path("fixtures")
