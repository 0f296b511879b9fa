"""HTML to plain text.

Two backends ship:

``dom``
    Every visible text node, one line per block-level element.
``density``
    Boilerplate removal: drops navigation/chrome subtrees, then keeps the
    blocks with enough words and a low share of link text. Falls back to the
    DOM text of the content root when the filter leaves nothing.
"""

from __future__ import annotations

import logging
import re
import time
from collections.abc import Callable, Iterable, Mapping
from dataclasses import dataclass, field

from bs4 import BeautifulSoup, Comment, Doctype, NavigableString, Tag
from bs4.element import CData, Declaration, ProcessingInstruction

log = logging.getLogger(__name__)

SKIP_TAGS = frozenset(
    {"script", "style", "noscript", "template", "svg", "canvas", "iframe", "object", "head"}
)
BLOCK_TAGS = frozenset(
    """address article aside blockquote body caption dd details div dl dt fieldset
    figcaption figure footer form h1 h2 h3 h4 h5 h6 header hr html li main nav ol
    p pre section summary table tbody td tfoot th thead title tr ul""".split()
)
HEADINGS = frozenset({"h1", "h2", "h3", "h4", "h5", "h6", "title"})
CHROME_TAGS = frozenset({"nav", "header", "footer", "aside", "form", "button", "select", "menu"})
JUNK = re.compile(
    r"(^|[\s_-])(nav|navbar|menu|breadcrumbs?|footer|masthead|sidebar|related|promo|"
    r"sponsor|subscribe|newsletter|social|share|cookie|advert|ads?|banner|widget|"
    r"comments?|popular|recommend)($|[\s_-])",
    re.I,
)
_NON_TEXT = (Comment, Doctype, CData, Declaration, ProcessingInstruction)

MIN_BLOCK_WORDS = 6
MAX_LINK_DENSITY = 0.5


class ParserConfigError(ValueError):
    """Unknown parser backend name."""


@dataclass(frozen=True)
class ParsedPage:
    url: str
    text: str
    success: bool
    duration: float


@dataclass
class _Block:
    tag: str
    text: str
    link_chars: int

    @property
    def link_density(self) -> float:
        return self.link_chars / len(self.text) if self.text else 0.0


def _soup(html: str | bytes) -> BeautifulSoup:
    if isinstance(html, bytes):
        html = html.decode("utf-8", errors="replace")
    return BeautifulSoup(html, "html.parser")


def _blocks(root: Tag, skip: Callable[[Tag], bool]) -> list[_Block]:
    blocks: list[_Block] = []
    parts: list[tuple[str, bool]] = []

    def flush(tag: str) -> None:
        text = " ".join("".join(p for p, _ in parts).split())
        if text:
            link = sum(len(" ".join(p.split())) for p, in_a in parts if in_a)
            blocks.append(_Block(tag, text, min(link, len(text))))
        parts.clear()

    def walk(node: Tag, block: str, in_link: bool) -> None:
        for child in node.children:
            if isinstance(child, _NON_TEXT):
                continue
            if isinstance(child, NavigableString):
                parts.append((str(child), in_link))
                continue
            if not isinstance(child, Tag) or skip(child):
                continue
            name = child.name
            if name == "br":
                parts.append((" ", in_link))
            elif name in BLOCK_TAGS:
                flush(block)
                walk(child, name, in_link)
                flush(name)
            else:
                walk(child, block, in_link or name == "a")

    walk(root, root.name or "body", False)
    flush(root.name or "body")
    return blocks


def _skip_invisible(tag: Tag) -> bool:
    return tag.name in SKIP_TAGS or tag.has_attr("hidden")


def _is_chrome(tag: Tag) -> bool:
    if _skip_invisible(tag) or tag.name in CHROME_TAGS:
        return True
    if tag.name in ("html", "body", "main", "article"):
        return False
    attrs = tag.attrs or {}
    ident = " ".join(
        [attrs.get("id") or ""]
        + (attrs.get("class") if isinstance(attrs.get("class"), list) else [attrs.get("class") or ""])
        + [attrs.get("role") or ""]
    )
    return bool(ident.strip()) and bool(JUNK.search(ident))


def dom_text(html: str | bytes) -> str:
    soup = _soup(html)
    lines = []
    if soup.title and soup.title.string:
        lines.append(" ".join(soup.title.string.split()))
    lines.extend(b.text for b in _blocks(soup, _skip_invisible))
    return "\n".join(line for line in lines if line)


def density_text(html: str | bytes) -> str:
    soup = _soup(html)
    root = soup.find("article") or soup.find("main") or soup.find("body") or soup
    blocks = _blocks(root, _is_chrome)
    kept = [
        b.text
        for b in blocks
        if b.link_density <= MAX_LINK_DENSITY
        and (len(b.text.split()) >= MIN_BLOCK_WORDS or b.tag in HEADINGS)
    ]
    if not any(len(t.split()) >= MIN_BLOCK_WORDS for t in kept):
        kept = [b.text for b in _blocks(root, _skip_invisible)]
    return "\n".join(kept)


BACKENDS: dict[str, Callable[[str | bytes], str]] = {
    "dom": dom_text,
    "density": density_text,
}
DEFAULT_BACKEND = "density"


def parse_html(
    html: str | bytes,
    backend_name: str = DEFAULT_BACKEND,
    *,
    url: str = "",
    backends: Mapping[str, Callable[[str | bytes], str]] | None = None,
) -> ParsedPage:
    """Extract main-content text; failures come back as ``success=False``."""
    registry = BACKENDS if backends is None else backends
    try:
        extract = registry[backend_name]
    except KeyError:
        raise ParserConfigError(
            f"unknown parser backend {backend_name!r}; known: {sorted(registry)}"
        ) from None
    t0 = time.perf_counter()
    try:
        text = extract(html) if html else ""
    except Exception as exc:  # malformed input must never escape
        log.debug("parser %s failed on %s: %s", backend_name, url or "<page>", exc)
        text = ""
    duration = max(0.0, time.perf_counter() - t0)
    text = text.strip()
    return ParsedPage(url=url, text=text, success=bool(text), duration=duration)


@dataclass
class ParserStats:
    backend: str
    mean_time: float
    success_rate: float
    score: float | None = None


@dataclass
class ParserReport:
    rows: list[ParserStats] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "rows": [
                {
                    "backend": r.backend,
                    "mean_time": r.mean_time,
                    "success_rate": r.success_rate,
                    "score": r.score,
                }
                for r in self.rows
            ]
        }

    def __getitem__(self, backend: str) -> ParserStats:
        for row in self.rows:
            if row.backend == backend:
                return row
        raise KeyError(backend)


def benchmark_parsers(
    corpus: Iterable[str | bytes],
    backends: Iterable[str] = tuple(BACKENDS),
    *,
    registry: Mapping[str, Callable[[str | bytes], str]] | None = None,
) -> ParserReport:
    docs = list(corpus)
    if not docs:
        raise ValueError("benchmark corpus is empty")
    report = ParserReport()
    for name in backends:
        pages = [parse_html(doc, name, backends=registry) for doc in docs]
        report.rows.append(
            ParserStats(
                backend=name,
                mean_time=sum(p.duration for p in pages) / len(pages),
                success_rate=sum(p.success for p in pages) / len(pages),
            )
        )
    return report
