"""Text normalization and sparse bag-of-words features for requirement pairs.

The pipeline is deliberately small: lowercase, strip everything outside
``[a-z]`` and whitespace, tokenize on whitespace, drop stopwords, and apply
a light suffix stemmer. A pair is encoded as token counts over the
concatenation of its two preprocessed texts, so the encoding is symmetric
in the two sides.
"""

from __future__ import annotations

import functools
import hashlib
import re
from dataclasses import dataclass
from importlib import resources
from typing import Callable, Iterable, Sequence

import numpy as np

from .corpus import RequirementPair
from .errors import DataError

_NON_LETTER = re.compile(r"[^a-z\s]")


@functools.lru_cache(maxsize=1)
def default_stopwords() -> frozenset[str]:
    """Stopword list shipped with the package (one token per line)."""
    text = resources.files("roilab").joinpath("data/stopwords.txt").read_text("utf-8")
    return frozenset(t.strip() for t in text.splitlines() if t.strip())


def load_stopwords(path) -> frozenset[str]:
    with open(path, encoding="utf-8") as fh:
        return frozenset(t.strip() for t in fh if t.strip())


def suffix_stem(token: str) -> str:
    """Light deterministic stemmer: strips ing/ed/es/s with length guards."""
    if token.endswith("ing") and len(token) >= 6:
        return token[:-3]
    if token.endswith("ed") and len(token) >= 5:
        return token[:-2]
    if token.endswith("es") and len(token) >= 5:
        return token[:-2]
    if token.endswith("s") and len(token) >= 4 and not token.endswith("ss"):
        return token[:-1]
    return token


def preprocess(
    text: str,
    stopwords: Iterable[str] | None = None,
    stemmer: Callable[[str], str] | None = suffix_stem,
) -> list[str]:
    """Normalize free text to a token list.

    Lowercases, deletes characters outside ``[a-z]``/whitespace (digits and
    punctuation vanish), splits on whitespace, removes stopwords, then stems.
    ``stemmer=None`` disables stemming.
    """
    stop = default_stopwords() if stopwords is None else set(stopwords)
    cleaned = _NON_LETTER.sub("", text.lower())
    tokens = [t for t in cleaned.split() if t not in stop]
    if stemmer is not None:
        tokens = [stemmer(t) for t in tokens]
    return tokens


@dataclass(frozen=True)
class Vocabulary:
    """Immutable token -> column-index map fitted on training pairs only."""

    index: dict[str, int]
    fitted_on: str
    min_df: int

    def __len__(self) -> int:
        return len(self.index)

    @property
    def tokens(self) -> tuple[str, ...]:
        return tuple(sorted(self.index, key=self.index.get))


@dataclass(frozen=True)
class FeatureVector:
    """Sparse nonzero (index, count) entries with strictly increasing indices."""

    indices: tuple[int, ...]
    counts: tuple[int, ...]
    dim: int

    def total(self) -> int:
        return sum(self.counts)

    def to_dense(self) -> np.ndarray:
        dense = np.zeros(self.dim, dtype=np.float64)
        for i, c in zip(self.indices, self.counts):
            dense[i] = c
        return dense


def pair_tokens(
    pair: RequirementPair,
    stopwords: Iterable[str] | None = None,
    stemmer: Callable[[str], str] | None = suffix_stem,
) -> list[str]:
    """Tokens of both sides concatenated (order is irrelevant downstream)."""
    return preprocess(pair.text_a, stopwords, stemmer) + preprocess(pair.text_b, stopwords, stemmer)


def _fingerprint(pairs: Sequence[RequirementPair]) -> str:
    digest = hashlib.sha256()
    for p in sorted(pairs, key=lambda q: q.key):
        digest.update(f"{p.id_a}\x00{p.id_b}\x00{p.text_a}\x00{p.text_b}\n".encode())
    return digest.hexdigest()[:16]


def build_vocab(
    train_pairs: Sequence[RequirementPair],
    min_df: int = 1,
    stopwords: Iterable[str] | None = None,
    stemmer: Callable[[str], str] | None = suffix_stem,
) -> Vocabulary:
    """Vocabulary over tokens appearing in at least ``min_df`` training
    pairs, with deterministic lexicographic index assignment."""
    if min_df < 1:
        raise ValueError("min_df must be >= 1")
    stop = default_stopwords() if stopwords is None else frozenset(stopwords)
    df: dict[str, int] = {}
    for p in train_pairs:
        for tok in set(pair_tokens(p, stop, stemmer)):
            df[tok] = df.get(tok, 0) + 1
    kept = sorted(t for t, n in df.items() if n >= min_df)
    if not kept:
        raise DataError("empty vocabulary: no token meets min_df on the training pairs")
    return Vocabulary(
        index={t: i for i, t in enumerate(kept)},
        fitted_on=_fingerprint(train_pairs),
        min_df=min_df,
    )


def vectorize_pair(
    pair: RequirementPair,
    vocab: Vocabulary,
    stopwords: Iterable[str] | None = None,
    stemmer: Callable[[str], str] | None = suffix_stem,
) -> FeatureVector:
    """Count in-vocabulary tokens over both texts; unknown tokens dropped."""
    counts: dict[int, int] = {}
    for tok in pair_tokens(pair, stopwords, stemmer):
        col = vocab.index.get(tok)
        if col is not None:
            counts[col] = counts.get(col, 0) + 1
    items = sorted(counts.items())
    return FeatureVector(
        indices=tuple(i for i, _ in items),
        counts=tuple(c for _, c in items),
        dim=len(vocab),
    )


def to_matrix(vectors: Sequence[FeatureVector]) -> np.ndarray:
    """Stack sparse vectors into a dense (n, V) count matrix."""
    if not vectors:
        raise ValueError("no vectors to stack")
    dim = vectors[0].dim
    if any(v.dim != dim for v in vectors):
        raise ValueError("vectors have inconsistent dimension")
    X = np.zeros((len(vectors), dim), dtype=np.float64)
    for row, v in enumerate(vectors):
        if v.indices:
            X[row, list(v.indices)] = v.counts
    return X


def vectorize_pairs(
    pairs: Sequence[RequirementPair],
    vocab: Vocabulary,
    stopwords: Iterable[str] | None = None,
    stemmer: Callable[[str], str] | None = suffix_stem,
) -> np.ndarray:
    """Convenience: dense count matrix for a list of pairs."""
    return to_matrix([vectorize_pair(p, vocab, stopwords, stemmer) for p in pairs])
