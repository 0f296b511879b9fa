"""Domain and dynamism routing.

Every backend maps a question onto the closed label sets below; nothing
else leaves this module.
"""

from __future__ import annotations

import json
import logging
import re
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import Protocol

from .gateway import GatewayError, LlmClient, ResponseCache, chat
from .records import Question
from .resources import load_json

log = logging.getLogger(__name__)


class Domain(str, Enum):
    FINANCE = "finance"
    SPORTS = "sports"
    MUSIC = "music"
    MOVIE = "movie"
    OPEN = "open"

    def __str__(self) -> str:
        return self.value


class Dynamism(str, Enum):
    STATIC = "static"
    SLOW_CHANGING = "slow-changing"
    FAST_CHANGING = "fast-changing"
    REAL_TIME = "real-time"

    def __str__(self) -> str:
        return self.value


class RoutingError(RuntimeError):
    def __init__(self, backend: str, message: str):
        super().__init__(f"[{backend}] {message}")
        self.backend = backend


class ClassifierBackend(Protocol):
    name: str

    def domain(self, text: str) -> Domain: ...

    def dynamism(self, text: str) -> Dynamism: ...


def _phrase_pattern(phrase: str) -> re.Pattern[str]:
    words = [re.escape(w) for w in phrase.casefold().split()]
    return re.compile(r"(?<!\w)" + r"\s+".join(words) + r"(?!\w)")


@dataclass(frozen=True)
class _Rule:
    label: str
    patterns: tuple[re.Pattern[str], ...]


class KeywordBackend:
    """Ordered keyword rules; the first rule with any matching phrase wins."""

    name = "keyword"

    def __init__(self, table: dict | None = None):
        table = table if table is not None else load_json("router_rules.json")
        self._domain_rules = self._compile(table["domain"]["rules"], Domain)
        self._domain_default = Domain(table["domain"]["default"])
        self._dyn_rules = self._compile(table["dynamism"]["rules"], Dynamism)
        self._dyn_default = Dynamism(table["dynamism"]["default"])

    @classmethod
    def from_file(cls, path: str | Path) -> "KeywordBackend":
        return cls(json.loads(Path(path).read_text(encoding="utf-8")))

    @staticmethod
    def _compile(rules: list[dict], enum: type[Enum]) -> list[_Rule]:
        return [
            _Rule(enum(r["label"]).value, tuple(_phrase_pattern(p) for p in r["phrases"]))
            for r in rules
        ]

    @staticmethod
    def _first(rules: list[_Rule], text: str) -> str | None:
        folded = text.casefold()
        for rule in rules:
            if any(p.search(folded) for p in rule.patterns):
                return rule.label
        return None

    def domain(self, text: str) -> Domain:
        label = self._first(self._domain_rules, text)
        return Domain(label) if label else self._domain_default

    def dynamism(self, text: str) -> Dynamism:
        label = self._first(self._dyn_rules, text)
        return Dynamism(label) if label else self._dyn_default


class ScriptedBackend:
    """Returns fixed labels, optionally overridden per exact question text."""

    name = "scripted"

    def __init__(
        self,
        domain: Domain | str = Domain.OPEN,
        dynamism: Dynamism | str = Dynamism.STATIC,
        overrides: dict[str, tuple[str, str]] | None = None,
    ):
        self._domain = Domain(domain)
        self._dynamism = Dynamism(dynamism)
        self._overrides = {q: (Domain(d), Dynamism(y)) for q, (d, y) in (overrides or {}).items()}

    def domain(self, text: str) -> Domain:
        return self._overrides.get(text, (self._domain, None))[0]

    def dynamism(self, text: str) -> Dynamism:
        return self._overrides.get(text, (None, self._dynamism))[1]


_DOMAIN_PROMPT = (
    "Classify the question into exactly one domain from this list: "
    "finance, sports, music, movie, open.\n"
    "Use open for anything that fits none of the others.\n"
    "Reply with the single label only.\n\nQuestion: {query}"
)
_DYNAMISM_PROMPT = (
    "How quickly does the true answer to this question change over time? "
    "Choose exactly one of: static, slow-changing, fast-changing, real-time.\n"
    "Reply with the single label only.\n\nQuestion: {query}"
)


def _parse_label(reply: str, enum: type[Enum]):
    folded = reply.casefold()
    # longest labels first so "slow-changing" is not read as something shorter
    hits = []
    for member in sorted(enum, key=lambda m: -len(m.value)):
        m = re.search(r"(?<![\w-])" + re.escape(member.value) + r"(?![\w-])", folded)
        if m:
            hits.append((m.start(), member))
    return min(hits, key=lambda h: h[0])[1] if hits else None


class LlmBackend:
    """Constrained-prompt classification through the model gateway.

    Replies that contain no valid label fall back to (open, static).
    """

    def __init__(self, client: LlmClient, cache: ResponseCache | None = None):
        self.client = client
        self.cache = cache
        self.name = f"llm:{client.backend_id}"

    def _ask(self, template: str, text: str) -> str:
        try:
            return chat([{"role": "user", "content": template.format(query=text)}], self.client, self.cache)
        except GatewayError as exc:
            raise RoutingError(self.name, f"classifier backend unreachable: {exc}") from exc

    def domain(self, text: str) -> Domain:
        label = _parse_label(self._ask(_DOMAIN_PROMPT, text), Domain)
        if label is None:
            log.info("unparseable domain reply; falling back to open")
        return label or Domain.OPEN

    def dynamism(self, text: str) -> Dynamism:
        label = _parse_label(self._ask(_DYNAMISM_PROMPT, text), Dynamism)
        return label or Dynamism.STATIC


def _text(question: Question | str) -> str:
    text = question.query if isinstance(question, Question) else question
    if not text or not text.strip():
        raise ValueError("question text must be nonempty")
    return text


def classify_domain(question: Question | str, backend: ClassifierBackend) -> Domain:
    return Domain(backend.domain(_text(question)))


def classify_dynamism(question: Question | str, backend: ClassifierBackend) -> Dynamism:
    return Dynamism(backend.dynamism(_text(question)))
