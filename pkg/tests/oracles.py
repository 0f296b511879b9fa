"""Independent reference implementations the library is checked against.

Written from the documented definitions, sharing no code with the package.
"""

import hashlib
import math
import re

WORD = re.compile(r"\w+")


def words(text):
    return WORD.findall(text.casefold())


def brute_bm25(docs, query, k1=1.5, b=0.75):
    """Okapi BM25 by direct summation; idf = ln(1 + (N - n + .5) / (n + .5)), floored at 0."""
    tokenized = [words(d) for d in docs]
    N = len(tokenized)
    avgdl = sum(len(d) for d in tokenized) / N if N else 0.0
    out = []
    for d in tokenized:
        total = 0.0
        if d:
            for q in words(query):
                f = d.count(q)
                if not f:
                    continue
                n = sum(1 for other in tokenized if q in other)
                idf = max(0.0, math.log(1.0 + (N - n + 0.5) / (n + 0.5)))
                total += idf * f * (k1 + 1.0) / (f + k1 * (1.0 - b + b * len(d) / avgdl))
        out.append(total)
    return out


def brute_order(docs, query, keys=None):
    """Indices by descending BM25, ties by the given keys (default: index)."""
    scores = brute_bm25(docs, query)
    keys = keys or list(range(len(docs)))
    return sorted(range(len(docs)), key=lambda i: (-scores[i], keys[i]))


def hash_bucket(feature, dim=256):
    h = hashlib.blake2b(feature.encode("utf-8"), digest_size=8).digest()
    return int.from_bytes(h, "little") % dim


def hash_embedding(text, dim=256):
    """Unit vector of hashed unigram and bigram counts, as a plain list."""
    toks = words(text)
    feats = toks + [f"{a} {b}" for a, b in zip(toks, toks[1:])]
    vec = [0.0] * dim
    for f in feats:
        vec[hash_bucket(f, dim)] += 1.0
    norm = math.sqrt(sum(v * v for v in vec))
    if norm == 0:
        vec[0] = 1.0
        return vec
    return [v / norm for v in vec]


def cosine(u, v):
    return sum(a * b for a, b in zip(u, v))
