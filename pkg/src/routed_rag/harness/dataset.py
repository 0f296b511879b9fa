"""JSON-lines dataset loading.

One record per line::

    {"interaction_id": "...", "query": "...", "query_time": "03/01/2024, 10:00:00 PT",
     "answer": "...", "domain": "...", "static_or_dynamic": "...",
     "search_results": [{"page_name", "page_url", "page_snippet",
                         "page_last_modified", "page_result"}, ...]}
"""

from __future__ import annotations

import json
import logging
import re
from collections.abc import Mapping
from datetime import datetime
from pathlib import Path
from zoneinfo import ZoneInfo

from ..records import Question, SearchResult

log = logging.getLogger(__name__)

MAX_PAGES = 50

TZ_ALIASES: dict[str, str] = {
    "PT": "America/Los_Angeles", "PST": "America/Los_Angeles", "PDT": "America/Los_Angeles",
    "MT": "America/Denver", "MST": "America/Denver", "MDT": "America/Denver",
    "CT": "America/Chicago", "CST": "America/Chicago", "CDT": "America/Chicago",
    "ET": "America/New_York", "EST": "America/New_York", "EDT": "America/New_York",
    "UTC": "UTC", "GMT": "UTC", "Z": "UTC",
}

_US_STAMP = re.compile(
    r"^\s*(\d{1,2})/(\d{1,2})/(\d{4}),?\s+(\d{1,2}):(\d{2})(?::(\d{2}))?\s+([A-Za-z_/]+)\s*$"
)


class DatasetError(ValueError):
    pass


def parse_query_time(text: str, tz_aliases: Mapping[str, str] = TZ_ALIASES) -> datetime:
    """Parse ISO-8601 (with offset) or ``MM/DD/YYYY, HH:MM:SS TZ``.

    Naive timestamps are rejected rather than guessed.
    """
    if not isinstance(text, str) or not text.strip():
        raise ValueError("empty query_time")
    m = _US_STAMP.match(text)
    if m:
        month, day, year, hh, mm, ss, zone = m.groups()
        name = tz_aliases.get(zone.upper(), zone)
        try:
            tz = ZoneInfo(name)
        except Exception:
            raise ValueError(f"unknown time zone {zone!r}") from None
        return datetime(int(year), int(month), int(day), int(hh), int(mm), int(ss or 0), tzinfo=tz)
    iso = text.strip()
    if iso.endswith("Z"):
        iso = iso[:-1] + "+00:00"
    dt = datetime.fromisoformat(iso)
    if dt.tzinfo is None:
        raise ValueError(f"query_time {text!r} has no time zone")
    return dt


def _search_result(doc: dict) -> SearchResult:
    return SearchResult(
        page_url=doc.get("page_url") or "",
        page_name=doc.get("page_name") or "",
        page_snippet=doc.get("page_snippet") or "",
        page_last_modified=doc.get("page_last_modified") or None,
        html=doc.get("page_result") or doc.get("html") or "",
    )


def parse_record(doc: dict, tz_aliases: Mapping[str, str] = TZ_ALIASES) -> tuple[Question, list[SearchResult]]:
    if not isinstance(doc, dict):
        raise ValueError("record is not a JSON object")
    qid = doc.get("interaction_id") or doc.get("id")
    if not qid:
        raise ValueError("missing interaction_id")
    if "query_time" not in doc:
        raise ValueError("missing query_time")
    raw_time = doc["query_time"]
    question = Question(
        id=str(qid),
        query=doc.get("query") or "",
        query_time=parse_query_time(raw_time, tz_aliases),
        query_time_text=raw_time,
        answer=doc.get("answer") or None,
        domain=doc.get("domain") or None,
        dynamism=doc.get("static_or_dynamic") or doc.get("dynamism") or None,
    )
    pages = doc.get("search_results") or []
    if not isinstance(pages, list):
        raise ValueError("search_results must be a list")
    if len(pages) > MAX_PAGES:
        raise ValueError(f"{len(pages)} search results exceed the {MAX_PAGES}-page limit")
    return question, [_search_result(p) for p in pages]


def load_dataset(
    path: str | Path, tz_aliases: Mapping[str, str] = TZ_ALIASES
) -> list[tuple[Question, list[SearchResult]]]:
    records = []
    with Path(path).open(encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            if not line.strip():
                continue
            try:
                records.append(parse_record(json.loads(line), tz_aliases))
            except (ValueError, TypeError) as exc:
                log.warning("%s:%d: skipping record: %s", path, lineno, exc)
    if not records:
        raise DatasetError(f"{path}: no valid records")
    return records
