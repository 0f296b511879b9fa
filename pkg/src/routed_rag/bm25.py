"""Okapi BM25 over small in-memory corpora.

Document frequencies come from the corpus handed in, so scores are only
comparable within one call.
"""

from __future__ import annotations

import math
import re
from collections import Counter
from collections.abc import Sequence

K1 = 1.5
B = 0.75

_TERM = re.compile(r"\w+")


def terms(text: str) -> list[str]:
    """Case-folded word terms; punctuation is not indexed."""
    return _TERM.findall(text.casefold())


class BM25:
    def __init__(self, corpus: Sequence[str], k1: float = K1, b: float = B):
        self.k1 = k1
        self.b = b
        docs = [terms(d) for d in corpus]
        self.n_docs = len(docs)
        self.doc_lens = [len(d) for d in docs]
        self.tfs = [Counter(d) for d in docs]
        self.avgdl = sum(self.doc_lens) / self.n_docs if self.n_docs else 0.0
        df: Counter[str] = Counter()
        for tf in self.tfs:
            df.update(tf.keys())
        # Lucene-style idf stays positive even for single-document corpora;
        # the max() keeps the no-negative-idf guarantee explicit.
        self.idf = {
            t: max(0.0, math.log(1.0 + (self.n_docs - n + 0.5) / (n + 0.5)))
            for t, n in df.items()
        }

    def scores(self, query: str) -> list[float]:
        q = terms(query)
        out = []
        for tf, dl in zip(self.tfs, self.doc_lens):
            s = 0.0
            if dl:
                norm = self.k1 * (1.0 - self.b + self.b * dl / self.avgdl)
                for t in q:
                    f = tf.get(t)
                    if f:
                        s += self.idf[t] * f * (self.k1 + 1.0) / (f + norm)
            out.append(s)
        return out


def bm25_scores(corpus: Sequence[str], query: str, k1: float = K1, b: float = B) -> list[float]:
    return BM25(corpus, k1, b).scores(query)
