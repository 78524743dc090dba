"""Corpus streaming, vocabulary construction, and sampling tables.

A corpus is a UTF-8 plain-text file with one document or sentence per
line; lines are the training unit, and context windows never cross them.
"""

from __future__ import annotations

import logging
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Iterator

import numpy as np

__all__ = [
    "NEGATIVE_TABLE_SIZE",
    "Vocabulary",
    "tokenize",
    "iter_corpus_lines",
    "build_vocabulary",
    "build_negative_table",
    "subsample_discard_probs",
]

logger = logging.getLogger(__name__)

NEGATIVE_TABLE_SIZE = 10_000_000
NEGATIVE_SAMPLING_POWER = 0.75


def tokenize(line: str) -> list[str]:
    """Split a line into maximal runs of non-whitespace characters.

    No case folding or other rewriting happens here: training consumes the
    raw corpus, and normalization is applied only when deriving bridge
    strings.
    """
    return line.split()


def iter_corpus_lines(path) -> Iterator[str]:
    """Yield lines of a UTF-8 corpus file (newlines stripped)."""
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            yield line.rstrip("\n")


def subsample_discard_probs(
    counts: np.ndarray, total: int, threshold: float
) -> np.ndarray:
    """Per-word discard probability ``max(0, 1 - sqrt(t / f))``.

    ``f`` is the word's relative frequency. Words at or below the threshold
    frequency are never discarded, and the probability is strictly below 1
    for every word. A non-positive threshold disables subsampling entirely
    (all probabilities zero) rather than discarding everything.
    """
    counts = np.asarray(counts, dtype=np.float64)
    if threshold <= 0.0 or total <= 0:
        return np.zeros(counts.shape[0])
    freqs = counts / float(total)
    return np.clip(1.0 - np.sqrt(threshold / freqs), 0.0, None)


def build_negative_table(
    counts: np.ndarray, size: int = NEGATIVE_TABLE_SIZE
) -> np.ndarray:
    """Unigram table for negative sampling, weighted by count^0.75.

    Word ids are repeated proportionally to ``count ** 0.75``; cumulative
    rounding keeps the total length exactly ``size`` while each word's
    multiplicity stays within one slot of the exact proportion.
    """
    if size < 1:
        raise ValueError("negative table size must be positive")
    weights = np.asarray(counts, dtype=np.float64) ** NEGATIVE_SAMPLING_POWER
    cumulative = np.cumsum(weights)
    # dividing by the running sum's own last element makes the final
    # boundary land on `size` exactly
    bounds = np.floor(cumulative / cumulative[-1] * size).astype(np.int64)
    multiplicities = np.diff(np.concatenate(([0], bounds)))
    return np.repeat(np.arange(len(weights), dtype=np.int32), multiplicities)


@dataclass
class Vocabulary:
    """Corpus word inventory with counts and sampling tables.

    Words are ordered by descending count, ties broken by first occurrence
    in the corpus, which makes construction deterministic. ``total_tokens``
    counts occurrences of retained words only. The negative-sampling table
    is built lazily on first use.
    """

    words: list[str]
    counts: np.ndarray
    index: dict[str, int]
    total_tokens: int
    discard_prob: np.ndarray
    negative_table_size: int = NEGATIVE_TABLE_SIZE
    _negative_table: np.ndarray | None = field(
        default=None, repr=False, compare=False
    )

    def __len__(self) -> int:
        return len(self.words)

    def __contains__(self, word: str) -> bool:
        return word in self.index

    def word_id(self, word: str) -> int | None:
        return self.index.get(word)

    @property
    def negative_table(self) -> np.ndarray:
        if self._negative_table is None:
            self._negative_table = build_negative_table(
                self.counts, self.negative_table_size
            )
        return self._negative_table

    def should_discard(self, word_id: int, rng: np.random.Generator) -> bool:
        """True with probability ``discard_prob[word_id]``."""
        return bool(rng.random() < self.discard_prob[word_id])

    def write_counts(self, path) -> None:
        """Diagnostic dump: one ``word<TAB>count`` line, descending count."""
        with open(path, "w", encoding="utf-8") as fh:
            for word, count in zip(self.words, self.counts):
                fh.write(f"{word}\t{int(count)}\n")


def build_vocabulary(
    tokens: Iterable[str],
    min_count: int = 5,
    *,
    subsample_t: float = 1e-4,
    negative_table_size: int = NEGATIVE_TABLE_SIZE,
) -> Vocabulary:
    """Count a token stream and assemble the vocabulary.

    Words occurring fewer than ``min_count`` times are dropped. Raises
    ``ValueError`` if nothing survives (an empty stream or one with no
    word frequent enough cannot be trained on).
    """
    if min_count < 1:
        raise ValueError("min_count must be >= 1")
    counter = Counter(tokens)
    kept = [(word, count) for word, count in counter.items() if count >= min_count]
    if not kept:
        raise ValueError(
            "empty vocabulary: token stream was empty or no word reached "
            f"min_count={min_count}"
        )
    kept.sort(key=lambda item: -item[1])  # stable: ties keep stream order
    words = [word for word, _ in kept]
    counts = np.array([count for _, count in kept], dtype=np.int64)
    total = int(counts.sum())
    vocab = Vocabulary(
        words=words,
        counts=counts,
        index={word: i for i, word in enumerate(words)},
        total_tokens=total,
        discard_prob=subsample_discard_probs(counts, total, subsample_t),
        negative_table_size=negative_table_size,
    )
    logger.info(
        "built vocabulary: %d words, %d retained tokens", len(words), total
    )
    return vocab
