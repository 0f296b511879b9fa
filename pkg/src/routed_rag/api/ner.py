"""Named-entity prompts and the ``name (category)`` line grammar."""

from __future__ import annotations

import re
from collections.abc import Iterable
from dataclasses import dataclass

from ..records import Question
from ..resources import load_json
from ..router import Domain

_LINE = re.compile(r"^(?P<name>.*)\((?P<cat>[^()\n]*)\)\s*[;,.]?\s*$")


class NotApplicable(ValueError):
    """The open domain has no entity APIs."""


@dataclass(frozen=True)
class Entity:
    name: str
    category: str
    # filled in by entity matching
    kind: str | None = None
    canonical: str | None = None

    def __post_init__(self):
        if not self.name or not self.category:
            raise ValueError("entity name and category must be nonempty")


def ner_prompts() -> dict:
    return load_json("ner_prompts.json")


def build_ner_prompt(question: Question | str, domain: Domain | str, prompts: dict | None = None) -> str:
    domain = Domain(domain)
    if domain is Domain.OPEN:
        raise NotApplicable("no NER prompt for the open domain")
    query = question.query if isinstance(question, Question) else question
    template = (prompts or ner_prompts())[domain.value]["template"]
    return template.replace("{query}", query)


def parse_ner_output(text: str) -> list[Entity]:
    """One entity per ``name (category)`` line; the last parenthesis group is
    the category. Lines outside the grammar are ignored."""
    out = []
    for line in (text or "").split("\n"):
        m = _LINE.match(line.strip())
        if not m:
            continue
        name, cat = m["name"].strip(), m["cat"].strip()
        if name and cat:
            out.append(Entity(name, cat))
    return out


def render_entities(entities: Iterable[Entity]) -> str:
    return "\n".join(f"{e.name} ({e.category})" for e in entities)
