"""Dataset records shared by every stage."""

from __future__ import annotations

from dataclasses import dataclass
from datetime import datetime


@dataclass(frozen=True)
class Question:
    id: str
    query: str
    query_time: datetime
    query_time_text: str = ""
    answer: str | None = None
    domain: str | None = None
    dynamism: str | None = None

    def __post_init__(self):
        if not self.query.strip():
            raise ValueError("question text must be nonempty")
        if self.query_time.tzinfo is None:
            raise ValueError("query_time must be timezone-aware")

    @property
    def time_label(self) -> str:
        return self.query_time_text or self.query_time.isoformat()


@dataclass(frozen=True)
class SearchResult:
    page_url: str
    page_name: str = ""
    page_snippet: str = ""
    page_last_modified: str | None = None
    html: str = ""

    def __post_init__(self):
        if not self.page_url:
            raise ValueError("page_url must be nonempty")
