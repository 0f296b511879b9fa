"""Chat clients: a scripted stub for offline runs and a chat-completions client."""

from __future__ import annotations

import json
import re
import threading
from collections.abc import Sequence
from dataclasses import dataclass
from pathlib import Path
from typing import Protocol

import httpx

from ._http import DEFAULT_MAX_IN_FLIGHT, GatewayError, JsonPoster, ProtocolError
from .cache import ResponseCache, cache_key

ROLES = frozenset({"system", "user", "assistant"})


class LlmClient(Protocol):
    backend_id: str

    def complete(self, messages: list[dict[str, str]]) -> str: ...


@dataclass(frozen=True)
class ScriptRule:
    pattern: re.Pattern[str]
    response: str


class ScriptedLlm:
    """Answers from an ordered rule list; the first matching regex wins.

    Rules match against all message contents joined with blank lines.
    Anything unmatched gets ``default``.
    """

    def __init__(self, rules: Sequence[tuple[str, str]] = (), default: str = "Answer: I don't know"):
        self.rules = [ScriptRule(re.compile(p, re.S | re.I), r) for p, r in rules]
        self.default = default
        self.backend_id = "scripted:" + cache_key("script", [list(r) for r in rules] + [default])[:12]
        self.calls = 0
        self._lock = threading.Lock()

    @classmethod
    def from_file(cls, path: str | Path) -> "ScriptedLlm":
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
        rules = [(r["pattern"], r["response"]) for r in doc.get("rules", [])]
        return cls(rules, doc.get("default", "Answer: I don't know"))

    def complete(self, messages: list[dict[str, str]]) -> str:
        with self._lock:
            self.calls += 1
        text = "\n\n".join(m["content"] for m in messages)
        for rule in self.rules:
            if rule.pattern.search(text):
                return rule.response
        return self.default


class RemoteChatLlm:
    """Client for any server speaking the chat-completions JSON convention.

    Request: ``{"model", "messages", "temperature", "max_tokens"}`` POSTed to
    ``url``; response text read from ``choices[0].message.content`` (or
    ``choices[0].text`` for completion-style servers).
    """

    def __init__(
        self,
        url: str,
        model: str,
        *,
        temperature: float = 0.0,
        max_tokens: int = 512,
        timeout: float = 60.0,
        retries: int = 2,
        max_in_flight: int = DEFAULT_MAX_IN_FLIGHT,
        api_key: str | None = None,
        transport: httpx.BaseTransport | None = None,
    ):
        self.model = model
        self.temperature = temperature
        self.max_tokens = max_tokens
        self.backend_id = f"chat:{model}@{url}"
        headers = {"Authorization": f"Bearer {api_key}"} if api_key else None
        self._http = JsonPoster(
            self.backend_id, url, timeout=timeout, retries=retries,
            max_in_flight=max_in_flight, headers=headers, transport=transport,
        )

    @property
    def calls(self) -> int:
        return self._http.attempts

    def request(self, messages: list[dict[str, str]]) -> dict:
        return {
            "model": self.model,
            "messages": messages,
            "temperature": self.temperature,
            "max_tokens": self.max_tokens,
        }

    def complete(self, messages: list[dict[str, str]]) -> str:
        body = self._http.post(self.request(messages))
        try:
            choice = body["choices"][0]
            text = choice["message"]["content"] if "message" in choice else choice["text"]
        except (KeyError, IndexError, TypeError) as exc:
            raise ProtocolError(self.backend_id, f"no generated text in response: {exc!r}") from exc
        if not isinstance(text, str):
            raise ProtocolError(self.backend_id, "generated text is not a string")
        return text


def chat(
    messages: list[dict[str, str]],
    client: LlmClient,
    cache: ResponseCache | None = None,
) -> str:
    """Send ``messages`` through ``client``, consulting ``cache`` first."""
    if not messages:
        raise ValueError("messages must be nonempty")
    for m in messages:
        if m.get("role") not in ROLES or not isinstance(m.get("content"), str):
            raise ValueError(f"bad message: {m!r}")
    request = getattr(client, "request", None)
    canonical = request(messages) if callable(request) else {"messages": messages}
    key = cache_key(client.backend_id, canonical)
    if cache is not None:
        hit = cache.get(key)
        if hit is not None:
            return hit
    try:
        text = client.complete(messages)
    except GatewayError:
        raise
    except Exception as exc:
        raise GatewayError(client.backend_id, str(exc)) from exc
    if cache is not None:
        cache.put(key, text)
    return text
