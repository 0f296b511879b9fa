"""Prompt assembly, generation, answer extraction, and refusal rules."""

from __future__ import annotations

import re
from collections.abc import Sequence
from dataclasses import dataclass, field, replace
from enum import Enum

from .augmentor import NO_REFERENCES
from .gateway import GatewayError, LlmClient, ResponseCache, chat
from .records import Question
from .resources import load_json
from .router import Domain, Dynamism

_CONFIG = load_json("generation.json")

REFUSAL: str = _CONFIG["refusal"]
ANSWER_MARKER: str = _CONFIG["answer_marker"]
AGGREGATION_TERMS: tuple[str, ...] = tuple(_CONFIG["aggregation_terms"])

REFUSING_DOMAINS = frozenset({Domain.OPEN, Domain.MOVIE, Domain.MUSIC})
VOLATILE = frozenset({Dynamism.FAST_CHANGING, Dynamism.REAL_TIME})

COT_INSTRUCTION = (
    "Work through the problem step by step before answering: note which references "
    "are relevant, check whether the question rests on a false premise, and reason "
    "from the query time when the question depends on dates."
)
BASE_INSTRUCTION = (
    "You answer factual questions using the references provided. "
    "If the references do not support an answer, reply with \"{refusal}\". "
    "If the question is based on a false premise, say what is wrong with it."
)
MARKER_INSTRUCTION = 'Finish with a single line of the form "{marker} <final answer>", kept short.'


class GenerationError(RuntimeError):
    pass


class Forced(str, Enum):
    NONE = "none"
    DYNAMISM = "dynamism-rule"
    AGGREGATION = "aggregation-rule"

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class Prompt:
    system: str
    fewshots: tuple[tuple[str, str], ...]
    context: str
    question: str
    query_time: str
    marker: str = ANSWER_MARKER

    def user_message(self) -> str:
        refs = self.context or NO_REFERENCES
        return f"References:\n{refs}\n\nQuery time: {self.query_time}\nQuestion: {self.question}"

    def messages(self) -> list[dict[str, str]]:
        msgs = [{"role": "system", "content": self.system}]
        for q, a in self.fewshots:
            msgs.append({"role": "user", "content": f"Question: {q}"})
            msgs.append({"role": "assistant", "content": f"{self.marker} {a}"})
        msgs.append({"role": "user", "content": self.user_message()})
        return msgs

    def text(self) -> str:
        return "\n\n".join(m["content"] for m in self.messages())


@dataclass(frozen=True)
class Answer:
    text: str
    raw: str = ""
    forced: Forced = Forced.NONE
    domain: Domain = Domain.OPEN
    dynamism: Dynamism = Dynamism.STATIC
    notes: tuple[str, ...] = field(default_factory=tuple)


def fewshots_for(domain: Domain | str, config: dict | None = None) -> tuple[tuple[str, str], ...]:
    shots = (config or _CONFIG)["fewshots"].get(Domain(domain).value, {"examples": []})
    return tuple((e["question"], e["answer"]) for e in shots["examples"])


def build_prompt(
    question: Question,
    context: str,
    domain: Domain | str,
    *,
    fewshot: bool = True,
    cot: bool = True,
    marker: str = ANSWER_MARKER,
    refusal: str = REFUSAL,
) -> Prompt:
    system = [BASE_INSTRUCTION.format(refusal=refusal)]
    if cot:
        system.append(COT_INSTRUCTION)
    system.append(MARKER_INSTRUCTION.format(marker=marker))
    return Prompt(
        system=" ".join(system),
        fewshots=fewshots_for(domain) if fewshot else (),
        context=context,
        question=question.query,
        query_time=question.time_label,
        marker=marker,
    )


def generate(prompt: Prompt, llm: LlmClient, cache: ResponseCache | None = None) -> str:
    try:
        return chat(prompt.messages(), llm, cache)
    except GatewayError as exc:
        raise GenerationError(str(exc)) from exc


def extract_final_answer(raw: str, marker: str = ANSWER_MARKER) -> str:
    """Text after the last line-leading marker, else the whole text (trimmed)."""
    hits = list(re.finditer(r"(?im)^[ \t*_#>-]*" + re.escape(marker), raw))
    if hits:
        tail = raw[hits[-1].end():].strip().strip("*_").strip()
        if tail:
            return tail
    return raw.strip()


def _has_term(question_text: str, terms: Sequence[str]) -> bool:
    folded = question_text.casefold()
    return any(
        re.search(r"(?<!\w)" + r"\s+".join(map(re.escape, t.casefold().split())) + r"(?!\w)", folded)
        for t in terms
    )


def refusal_reason(
    domain: Domain | str,
    dynamism: Dynamism | str,
    question_text: str,
    aggregation_terms: Sequence[str] = AGGREGATION_TERMS,
) -> Forced:
    if Domain(domain) in REFUSING_DOMAINS and Dynamism(dynamism) in VOLATILE:
        return Forced.DYNAMISM
    if _has_term(question_text, aggregation_terms):
        return Forced.AGGREGATION
    return Forced.NONE


def post_process(
    answer: Answer,
    domain: Domain | str,
    dynamism: Dynamism | str,
    question_text: str,
    *,
    aggregation_terms: Sequence[str] = AGGREGATION_TERMS,
    refusal: str = REFUSAL,
) -> Answer:
    reason = refusal_reason(domain, dynamism, question_text, aggregation_terms)
    if reason is Forced.NONE:
        return answer
    return replace(answer, text=refusal, forced=reason)
