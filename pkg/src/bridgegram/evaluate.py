"""Intrinsic evaluation: word similarity, outlier detection, neighbors.

Word similarity scores pairs with cosine over composed vectors and reports
the Spearman correlation against the gold standard. Outlier detection
scores each word of a set by the compactness left behind when it is
removed (leave-one-out mean pairwise cosine) and predicts the word whose
removal maximizes it. Sentence vectors are plain bag-of-words means.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import FileFormatError, OutOfVocabulary, UndefinedCorrelationError
from .model import EmbeddingModel

__all__ = [
    "SimilarityDataset",
    "OutlierSet",
    "cosine",
    "spearman",
    "eval_similarity",
    "detect_outlier",
    "eval_outliers",
    "sentence_vector",
    "nearest_neighbors",
    "load_similarity_dataset",
    "load_outlier_sets",
]

OOV_POLICIES = ("zero-sim", "skip")


@dataclass(frozen=True)
class SimilarityDataset:
    """Word pairs with gold similarity scores."""

    name: str
    pairs: tuple[tuple[str, str, float], ...]

    def __post_init__(self):
        if len(self.pairs) < 2:
            raise ValueError("similarity dataset needs at least 2 pairs")
        if not all(np.isfinite(score) for _, _, score in self.pairs):
            raise ValueError("gold scores must be finite")


@dataclass(frozen=True)
class OutlierSet:
    """An in-group cluster plus candidate outliers, tested one at a time."""

    cluster: tuple[str, ...]
    outliers: tuple[str, ...]

    def __post_init__(self):
        if len(self.cluster) < 2:
            raise ValueError("cluster needs at least 2 words")
        if not self.outliers:
            raise ValueError("need at least one outlier candidate")
        if any(not w for w in self.cluster + self.outliers):
            raise ValueError("empty word in outlier set")
        overlap = set(self.cluster) & set(self.outliers)
        if overlap:
            raise ValueError(f"outliers also present in cluster: {sorted(overlap)}")


def cosine(u: np.ndarray, v: np.ndarray) -> float:
    """Cosine similarity; zero if either vector has zero norm."""
    u = np.asarray(u, dtype=np.float64)
    v = np.asarray(v, dtype=np.float64)
    if u.shape != v.shape:
        raise ValueError(f"dimension mismatch: {u.shape} vs {v.shape}")
    if not (np.all(np.isfinite(u)) and np.all(np.isfinite(v))):
        raise ValueError("vectors must be finite")
    nu = np.linalg.norm(u)
    nv = np.linalg.norm(v)
    if nu == 0.0 or nv == 0.0:
        return 0.0
    return float(np.dot(u, v) / (nu * nv))


def _fractional_ranks(values: np.ndarray) -> np.ndarray:
    """Ranks starting at 1; ties receive the mean of their rank range."""
    order = np.argsort(values, kind="stable")
    ranks = np.empty(values.shape[0], dtype=np.float64)
    i = 0
    n = values.shape[0]
    while i < n:
        j = i
        while j + 1 < n and values[order[j + 1]] == values[order[i]]:
            j += 1
        ranks[order[i : j + 1]] = 0.5 * (i + j) + 1.0
        i = j + 1
    return ranks


def spearman(xs: Sequence[float], ys: Sequence[float]) -> float:
    """Spearman rank correlation (Pearson over fractional ranks)."""
    x = np.asarray(xs, dtype=np.float64)
    y = np.asarray(ys, dtype=np.float64)
    if x.ndim != 1 or y.ndim != 1 or x.shape[0] != y.shape[0]:
        raise ValueError("inputs must be 1-d sequences of equal length")
    if x.shape[0] < 2:
        raise ValueError("need at least 2 observations")
    if np.all(x == x[0]) or np.all(y == y[0]):
        raise UndefinedCorrelationError(
            "correlation undefined for a constant input"
        )
    rx = _fractional_ranks(x)
    ry = _fractional_ranks(y)
    rx -= rx.mean()
    ry -= ry.mean()
    return float(rx @ ry / np.sqrt((rx @ rx) * (ry @ ry)))


def eval_similarity(
    model: EmbeddingModel,
    dataset: SimilarityDataset,
    oov_policy: str = "zero-sim",
) -> tuple[float, float]:
    """Score a similarity dataset; returns (spearman, oov_rate).

    ``oov_rate`` is the fraction of pairs containing a word that is not in
    the vocabulary, whatever the mode. Pairs a word-only model cannot score
    at all are handled per ``oov_policy``: ``zero-sim`` keeps them with
    similarity 0 (the default, so list lengths stay comparable across
    models), ``skip`` drops them.
    """
    if oov_policy not in OOV_POLICIES:
        raise ValueError(f"oov_policy must be one of {OOV_POLICIES}")
    scores: list[float] = []
    golds: list[float] = []
    oov_pairs = 0
    for w1, w2, gold in dataset.pairs:
        if w1 not in model.vocab or w2 not in model.vocab:
            oov_pairs += 1
        try:
            score = cosine(model.input_vector(w1), model.input_vector(w2))
        except OutOfVocabulary:
            if oov_policy == "skip":
                continue
            score = 0.0
        scores.append(score)
        golds.append(gold)
    if len(scores) < 2:
        raise ValueError("fewer than 2 scorable pairs")
    return spearman(scores, golds), oov_pairs / len(dataset.pairs)


def _vector_or_zero(model: EmbeddingModel, word: str) -> np.ndarray:
    try:
        return model.input_vector(word)
    except OutOfVocabulary:
        return np.zeros(model.dim, dtype=model.input_matrix.dtype)


def detect_outlier(
    model: EmbeddingModel, cluster: Sequence[str], candidate: str
) -> tuple[int, bool]:
    """Predict the outlier in ``cluster + [candidate]`` by compactness.

    For each word the score is the mean pairwise cosine among the
    remaining words; removing the true outlier should maximize it. Returns
    the predicted index into ``list(cluster) + [candidate]`` (ties go to
    the lowest index) and whether it is the candidate. Unrepresentable
    words participate as zero vectors.
    """
    if len(cluster) < 2:
        raise ValueError("cluster needs at least 2 words")
    words = list(cluster) + [candidate]
    n = len(words)
    vectors = np.vstack([_vector_or_zero(model, w) for w in words])
    sims = np.zeros((n, n))
    for i in range(n):
        for j in range(i + 1, n):
            sims[i, j] = sims[j, i] = cosine(vectors[i], vectors[j])
    pair_total = sims.sum() / 2.0
    remaining_pairs = (n - 1) * (n - 2) / 2.0
    compactness = (pair_total - sims.sum(axis=1)) / remaining_pairs
    predicted = int(np.argmax(compactness))
    return predicted, predicted == n - 1


def eval_outliers(
    model: EmbeddingModel, sets: Sequence[OutlierSet]
) -> tuple[float, int]:
    """Detection accuracy over every (cluster, candidate) pairing."""
    correct = 0
    total = 0
    for outlier_set in sets:
        for candidate in outlier_set.outliers:
            _, ok = detect_outlier(model, outlier_set.cluster, candidate)
            correct += ok
            total += 1
    if total == 0:
        raise ValueError("no outlier tests to run")
    return correct / total, total


def sentence_vector(model: EmbeddingModel, tokens: Sequence[str]) -> np.ndarray:
    """Bag-of-words sentence vector: mean over representable tokens.

    Tokens a word-only model cannot represent are skipped; if none remain
    the zero vector is returned.
    """
    if not tokens:
        raise ValueError("token list must be non-empty")
    vectors = []
    for token in tokens:
        try:
            vectors.append(model.input_vector(token))
        except OutOfVocabulary:
            continue
    if not vectors:
        return np.zeros(model.dim, dtype=model.input_matrix.dtype)
    return np.mean(vectors, axis=0)


def nearest_neighbors(
    model: EmbeddingModel, query: str, k: int = 10
) -> list[tuple[str, float]]:
    """Top-k vocabulary words by cosine with the query's composed vector.

    The query itself is excluded when it is a vocabulary word; exact ties
    are broken by word id.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    query_vec = np.asarray(model.input_vector(query), dtype=np.float64)
    matrix = model.composed_vocab_vectors().astype(np.float64)
    norms = np.linalg.norm(matrix, axis=1)
    qnorm = np.linalg.norm(query_vec)
    with np.errstate(invalid="ignore", divide="ignore"):
        sims = matrix @ query_vec / (norms * qnorm)
    sims[(norms == 0.0)] = 0.0
    if qnorm == 0.0:
        sims[:] = 0.0
    query_id = model.vocab.index.get(query)
    if query_id is not None:
        sims[query_id] = -np.inf
    order = np.lexsort((np.arange(len(sims)), -sims))
    top = [i for i in order if i != query_id][:k]
    return [(model.vocab.words[i], float(sims[i])) for i in top]


# ---------------------------------------------------------------------------
# dataset files
# ---------------------------------------------------------------------------


def load_similarity_dataset(path, name: str | None = None) -> SimilarityDataset:
    """Read a ``word1<TAB>word2<TAB>score`` file."""
    pairs: list[tuple[str, str, float]] = []
    with open(path, encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            line = line.rstrip("\n")
            if not line.strip():
                continue
            fields = line.split("\t")
            if len(fields) != 3:
                raise FileFormatError(
                    path, line_no, f"expected 3 tab-separated fields, got {len(fields)}"
                )
            try:
                score = float(fields[2])
            except ValueError:
                raise FileFormatError(path, line_no, "non-numeric score") from None
            pairs.append((fields[0], fields[1], score))
    if len(pairs) < 2:
        raise FileFormatError(path, None, "need at least 2 pairs")
    return SimilarityDataset(name or str(path), tuple(pairs))


def load_outlier_sets(path) -> list[OutlierSet]:
    """Read blank-line-separated blocks: cluster words, ``---``, outliers."""
    sets: list[OutlierSet] = []
    cluster: list[str] = []
    outliers: list[str] = []
    seen_sep = False

    def flush(line_no: int):
        nonlocal cluster, outliers, seen_sep
        if not cluster and not outliers and not seen_sep:
            return
        if not seen_sep:
            raise FileFormatError(path, line_no, "block missing '---' separator")
        try:
            sets.append(OutlierSet(tuple(cluster), tuple(outliers)))
        except ValueError as exc:
            raise FileFormatError(path, line_no, str(exc)) from None
        cluster, outliers, seen_sep = [], [], False

    with open(path, encoding="utf-8") as fh:
        line_no = 0
        for line_no, line in enumerate(fh, start=1):
            word = line.strip()
            if not word:
                flush(line_no)
                continue
            if word == "---":
                if seen_sep:
                    raise FileFormatError(path, line_no, "duplicate '---' in block")
                seen_sep = True
            elif seen_sep:
                outliers.append(word)
            else:
                cluster.append(word)
        flush(line_no)
    if not sets:
        raise FileFormatError(path, None, "no outlier sets found")
    return sets
