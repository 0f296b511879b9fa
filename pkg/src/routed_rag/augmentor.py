"""Per-domain source selection and context rendering."""

from __future__ import annotations

from collections.abc import Mapping, Sequence
from dataclasses import dataclass, field

from .api.execution import ApiResult
from .router import Domain
from .web.chunking import DEFAULT_TOKENIZER, Tokenizer, tokenize_count, truncate_tokens
from .web.ranking import ScoredChunk

WEB = "web"
API = "api"

SOURCE_POLICY: Mapping[Domain, frozenset[str]] = {
    Domain.OPEN: frozenset({WEB}),
    Domain.MOVIE: frozenset({WEB, API}),
    Domain.MUSIC: frozenset({WEB, API}),
    Domain.SPORTS: frozenset({API}),
    Domain.FINANCE: frozenset({API}),
}

DEFAULT_TOTAL_BUDGET = 4096
MIN_ITEM_TOKENS = 16
NO_REFERENCES = "No references retrieved."


@dataclass(frozen=True)
class RefItem:
    source: str
    label: str
    text: str


@dataclass
class ContextBundle:
    items: list[RefItem] = field(default_factory=list)
    total_budget: int = DEFAULT_TOTAL_BUDGET
    source_budgets: dict[str, int] = field(default_factory=dict)

    @property
    def sources(self) -> set[str]:
        return {i.source for i in self.items}


def _api_label(r: ApiResult) -> str:
    if r.params:
        args = ", ".join(f"{k}={v}" for k, v in r.params.items())
        return f"{r.api}({args})"
    return r.api


def fuse_references(
    domain: Domain | str,
    web_chunks: Sequence[ScoredChunk],
    api_results: Sequence[ApiResult],
    *,
    policy: Mapping[Domain, frozenset[str]] = SOURCE_POLICY,
    source_order: Sequence[str] = (WEB, API),
    total_budget: int = DEFAULT_TOTAL_BUDGET,
    source_budgets: Mapping[str, int] | None = None,
) -> ContextBundle:
    """Keep only the sources the domain's policy allows, input order intact."""
    allowed = policy[Domain(domain)]
    per_source = {
        WEB: [RefItem(WEB, s.chunk.title or f"page {s.chunk.doc_id}", s.chunk.text) for s in web_chunks],
        API: [RefItem(API, _api_label(r), r.markdown) for r in api_results if r.success and r.markdown],
    }
    items = [item for src in source_order if src in allowed for item in per_source[src]]
    return ContextBundle(items, total_budget, dict(source_budgets or {}))


def _heading(n: int, item: RefItem) -> str:
    return f"### Reference {n} ({item.source}): {item.label}\n"


def render_context(bundle: ContextBundle, tokenizer: Tokenizer = DEFAULT_TOKENIZER) -> str:
    """Numbered references within the token budgets.

    An item that overflows its source's remaining budget, or the total, is cut
    at a token boundary; once fewer than MIN_ITEM_TOKENS body tokens would
    fit, that item and every later one are dropped.
    """
    if bundle.total_budget < 1 or any(b < 1 for b in bundle.source_budgets.values()):
        raise ValueError("budgets must be positive")
    remaining = bundle.total_budget
    source_left = dict(bundle.source_budgets)
    parts = []
    for item in bundle.items:
        head = _heading(len(parts) + 1, item)
        room = remaining - tokenize_count(head, tokenizer)
        if item.source in source_left:
            room = min(room, source_left[item.source])
        if room < MIN_ITEM_TOKENS:
            if item.source in source_left and remaining - tokenize_count(head, tokenizer) >= MIN_ITEM_TOKENS:
                continue  # only this source is exhausted
            break
        body = truncate_tokens(item.text, room, tokenizer)
        used = tokenize_count(head, tokenizer) + tokenize_count(body, tokenizer)
        remaining -= used
        if item.source in source_left:
            source_left[item.source] -= tokenize_count(body, tokenizer)
        parts.append(head + body)
    return "\n\n".join(parts)
