"""Token counting and token-bounded chunking."""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Protocol


class Tokenizer(Protocol):
    def spans(self, text: str) -> list[tuple[int, int]]:
        """Character offsets of each token, in order."""
        ...


class WordTokenizer:
    """Unicode words plus standalone punctuation; whitespace is dropped."""

    pattern = re.compile(r"\w+|[^\w\s]")

    def spans(self, text: str) -> list[tuple[int, int]]:
        return [m.span() for m in self.pattern.finditer(text)]

    def tokenize(self, text: str) -> list[str]:
        return self.pattern.findall(text)


DEFAULT_TOKENIZER = WordTokenizer()


def tokenize_count(text: str, tokenizer: Tokenizer = DEFAULT_TOKENIZER) -> int:
    return len(tokenizer.spans(text))


def tokens(text: str, tokenizer: Tokenizer = DEFAULT_TOKENIZER) -> list[str]:
    return [text[s:e] for s, e in tokenizer.spans(text)]


def truncate_tokens(text: str, limit: int, tokenizer: Tokenizer = DEFAULT_TOKENIZER) -> str:
    """Prefix of ``text`` holding at most ``limit`` tokens."""
    if limit <= 0:
        return ""
    spans = tokenizer.spans(text)
    if len(spans) <= limit:
        return text
    return text[: spans[limit - 1][1]]


@dataclass(frozen=True)
class Chunk:
    doc_id: int
    seq: int
    text: str
    n_tokens: int
    source: str = "web"
    title: str = ""
    # (doc_id, seq) of the coarse block this chunk was re-cut from, if any
    parent: tuple[int, int] | None = None

    @property
    def key(self) -> tuple[int, int]:
        return (self.doc_id, self.seq)


def chunk_text(
    text: str,
    chunk_size: int,
    *,
    doc_id: int = 0,
    seq_start: int = 0,
    title: str = "",
    parent: tuple[int, int] | None = None,
    tokenizer: Tokenizer = DEFAULT_TOKENIZER,
) -> list[Chunk]:
    """Split ``text`` into consecutive, non-overlapping token windows.

    Each chunk's text is the original substring from its first token to its
    last, so re-tokenizing the chunks reproduces the input token stream.
    """
    if chunk_size < 1:
        raise ValueError(f"chunk_size must be >= 1, got {chunk_size}")
    spans = tokenizer.spans(text)
    chunks = []
    for i, lo in enumerate(range(0, len(spans), chunk_size)):
        window = spans[lo : lo + chunk_size]
        chunks.append(
            Chunk(
                doc_id=doc_id,
                seq=seq_start + i,
                text=text[window[0][0] : window[-1][1]],
                n_tokens=len(window),
                title=title,
                parent=parent,
            )
        )
    return chunks
