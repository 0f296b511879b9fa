"""Entity matching: exact canonical match first, BM25 over aliases second."""

from __future__ import annotations

import string
import unicodedata
from collections.abc import Mapping, Sequence
from dataclasses import dataclass, replace

from ..bm25 import bm25_scores
from ..resources import load_json
from .ner import Entity


def _is_edge(ch: str) -> bool:
    return ch.isspace() or ch in string.punctuation or unicodedata.category(ch).startswith("P")


class NoMatch(LookupError):
    pass


def canonicalize(text: str) -> str:
    """NFC, case-fold, collapse whitespace, strip edge punctuation."""
    text = " ".join(unicodedata.normalize("NFC", text).casefold().split())
    lo, hi = 0, len(text)
    while lo < hi and _is_edge(text[lo]):
        lo += 1
    while hi > lo and _is_edge(text[hi - 1]):
        hi -= 1
    return text[lo:hi]


@dataclass(frozen=True)
class Lexicon:
    domain: str
    kind: str
    entries: Mapping[str, tuple[str, ...]]
    categories: tuple[str, ...] = ()

    def __post_init__(self):
        for canon, aliases in self.entries.items():
            if not canon or any(not a or not a.strip() for a in aliases):
                raise ValueError(f"lexicon {self.domain}/{self.kind}: empty alias for {canon!r}")

    def surfaces(self) -> list[tuple[str, str]]:
        """(canonical value, surface form) pairs, canonical value included."""
        out = []
        for canon in sorted(self.entries):
            out.append((canon, canon))
            out.extend((canon, a) for a in self.entries[canon])
        return out


def load_lexicons(doc: dict | None = None) -> dict[str, list[Lexicon]]:
    doc = doc if doc is not None else load_json("lexicons.json")
    out: dict[str, list[Lexicon]] = {}
    for domain, kinds in doc.items():
        for kind, spec in kinds.items():
            entries = {c: tuple(a) for c, a in spec["entries"].items()}
            out.setdefault(domain, []).append(Lexicon(domain, kind, entries, tuple(spec.get("categories", ()))))
    return out


def match_entity(entity: Entity, lexicon: Lexicon) -> str:
    """Canonical lexicon value for ``entity`` or NoMatch."""
    if not lexicon.entries:
        raise NoMatch(f"empty lexicon {lexicon.domain}/{lexicon.kind}")
    surfaces = lexicon.surfaces()
    target = canonicalize(entity.name)
    for canon, surface in surfaces:
        if canonicalize(surface) == target:
            return canon
    # each surface form is scored on its own, as a one-document corpus
    best: tuple[float, str] | None = None
    for canon, surface in surfaces:
        (score,) = bm25_scores([canonicalize(surface)], target)
        if score > 0 and (best is None or score > best[0] or (score == best[0] and canon < best[1])):
            best = (score, canon)
    if best is None:
        raise NoMatch(f"no lexicon entry resembles {entity.name!r}")
    return best[1]


def _category_key(category: str) -> str:
    c = " ".join(category.casefold().split())
    return c[:-1] if c.endswith("s") and not c.endswith("ss") else c


def match_entities(entities: Sequence[Entity], lexicons: Sequence[Lexicon]) -> list[Entity]:
    """Resolve every entity against each lexicon accepting its category.

    An entity can resolve in several lexicons (a band is also an artist);
    each resolution becomes its own matched entity. Unresolved ones drop out.
    """
    out = []
    for e in entities:
        key = _category_key(e.category)
        for lex in lexicons:
            if key not in {_category_key(c) for c in lex.categories}:
                continue
            try:
                out.append(replace(e, kind=lex.kind, canonical=match_entity(e, lex)))
            except NoMatch:
                continue
    return out
