"""Answer judging and CRAG-style metrics (correct +1, missing 0, incorrect -1)."""

from __future__ import annotations

import logging
import unicodedata
from collections import Counter, defaultdict
from collections.abc import Iterable, Sequence
from dataclasses import asdict, dataclass
from enum import Enum
from typing import Protocol

from .gateway import GatewayError, LlmClient, ResponseCache, chat

log = logging.getLogger(__name__)

MISSING_PHRASE = "i dont know"


class Verdict(str, Enum):
    CORRECT = "correct"
    MISSING = "missing"
    INCORRECT = "incorrect"

    def __str__(self) -> str:
        return self.value


def normalize(text: str) -> str:
    """NFKC, case-fold, drop punctuation, collapse whitespace."""
    text = unicodedata.normalize("NFKC", text).casefold()
    text = "".join(ch for ch in text if not unicodedata.category(ch).startswith("P"))
    return " ".join(text.split())


def is_missing(prediction: str) -> bool:
    norm = normalize(prediction)
    return norm == MISSING_PHRASE or norm.startswith(MISSING_PHRASE + " ")


class JudgeBackend(Protocol):
    def judge(self, prediction: str, gold: str) -> Verdict: ...


class RuleJudge:
    """Correct when the normalized gold answer occurs in the normalized prediction."""

    def judge(self, prediction: str, gold: str) -> Verdict:
        p, g = normalize(prediction), normalize(gold)
        if p == g or (g and g in p):
            return Verdict.CORRECT
        return Verdict.INCORRECT


JUDGE_PROMPT = (
    "You grade answers to factual questions.\n"
    "Gold answer: {gold}\n"
    "Predicted answer: {prediction}\n\n"
    "Does the prediction state the same fact as the gold answer? "
    'Reply with exactly one word: "correct" or "incorrect".'
)


class LlmJudge:
    """Model-graded judging; any failure or unreadable reply falls back to RuleJudge."""

    def __init__(self, client: LlmClient, cache: ResponseCache | None = None):
        self.client = client
        self.cache = cache
        self.fallbacks: list[str] = []
        self._rule = RuleJudge()

    def judge(self, prediction: str, gold: str) -> Verdict:
        msg = [{"role": "user", "content": JUDGE_PROMPT.format(gold=gold, prediction=prediction)}]
        try:
            reply = normalize(chat(msg, self.client, self.cache))
        except GatewayError as exc:
            self.fallbacks.append(f"judge backend failed: {exc}")
            return self._rule.judge(prediction, gold)
        first = reply.split()[0] if reply else ""
        if first in ("correct", "incorrect"):
            return Verdict(first)
        self.fallbacks.append(f"unreadable judge reply: {reply[:80]!r}")
        return self._rule.judge(prediction, gold)


def judge_answer(prediction: str, gold: str, judge: JudgeBackend | None = None) -> Verdict:
    if not gold or not gold.strip():
        raise ValueError("gold answer must be nonempty")
    if is_missing(prediction):
        return Verdict.MISSING
    return (judge or RuleJudge()).judge(prediction, gold)


@dataclass(frozen=True)
class Metrics:
    score: float
    accuracy: float
    hallucination: float
    missing: float
    n: int

    def as_percent(self) -> dict[str, float]:
        return {k: round(100 * getattr(self, k), 2) for k in ("score", "accuracy", "hallucination", "missing")}


def score_run(verdicts: Iterable[Verdict]) -> Metrics:
    counts = Counter(Verdict(v) for v in verdicts)
    n = sum(counts.values())
    if n == 0:
        raise ValueError("cannot score an empty run")
    c, m, i = counts[Verdict.CORRECT], counts[Verdict.MISSING], counts[Verdict.INCORRECT]
    return Metrics(score=(c - i) / n, accuracy=c / n, hallucination=i / n, missing=m / n, n=n)


def metrics_report(rows: Sequence[dict]) -> dict:
    """Overall metrics plus per-domain and per-dynamism breakdowns.

    Each row needs ``verdict`` and may carry ``domain`` / ``dynamism``.
    """
    out = {"overall": asdict(score_run(r["verdict"] for r in rows))}
    for key in ("domain", "dynamism"):
        groups: dict[str, list] = defaultdict(list)
        for r in rows:
            if r.get(key):
                groups[str(r[key])].append(r["verdict"])
        out[f"by_{key}"] = {g: asdict(score_run(v)) for g, v in sorted(groups.items())}
    return out
