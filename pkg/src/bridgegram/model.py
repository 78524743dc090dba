"""Skipgram trainer with negative sampling in three modes.

``word-only`` trains one vector per vocabulary word. ``subword`` composes
word vectors from the word row plus hashed character n-gram rows, which
also gives out-of-vocabulary tokens a representation. ``bridge`` adds the
noise-resistance mechanism: with a per-occurrence gate probability ``pb``,
every bridge string of the center word also predicts the context targets,
its gradients scaled by ``lam``.
"""

from __future__ import annotations

import logging
import threading
from array import array
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

import numpy as np

from . import _kernel
from .corpus import Vocabulary, build_vocabulary, iter_corpus_lines, tokenize
from .errors import OutOfVocabulary
from .normalize import bridge_words
from .subword import BOW, EOW, char_ngrams, fnv1a_32, hash_ngram

__all__ = ["MODES", "TrainConfig", "EmbeddingModel", "train", "train_lines",
           "pair_loss_and_update", "train_step_center"]

logger = logging.getLogger(__name__)

MODES = ("word-only", "subword", "bridge")


@dataclass(frozen=True)
class TrainConfig:
    """All training hyperparameters.

    ``pb`` is the probability that a center-word occurrence introduces its
    bridge strings, and ``lam`` the weight of their updates; both matter
    only in ``bridge`` mode. ``minn``/``maxn``/``bucket`` matter only in
    the subword-based modes. Defaults follow the common reference settings
    for subword skipgram training; ``pb``/``lam`` default to the
    restrained combination that works best.
    """

    mode: str = "bridge"
    dim: int = 100
    window: int = 5
    epochs: int = 5
    lr: float = 0.05
    negatives: int = 5
    minn: int = 3
    maxn: int = 6
    bucket: int = 2_000_000
    min_count: int = 5
    subsample_t: float = 1e-4
    pb: float = 0.5
    lam: float = 0.1
    seed: int = 1
    threads: int = 1

    def __post_init__(self):
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}, got {self.mode!r}")
        if self.dim < 1:
            raise ValueError("dim must be >= 1")
        if self.window < 1:
            raise ValueError("window must be >= 1")
        if self.epochs < 1:
            raise ValueError("epochs must be >= 1")
        if self.negatives < 1:
            raise ValueError("negatives must be >= 1")
        if not 1 <= self.minn <= self.maxn:
            raise ValueError("need 1 <= minn <= maxn")
        if self.bucket < 1:
            raise ValueError("bucket must be >= 1")
        if self.min_count < 1:
            raise ValueError("min_count must be >= 1")
        if not 0.0 <= self.pb <= 1.0:
            raise ValueError("pb must lie in [0, 1]")
        if self.lam < 0.0:
            raise ValueError("lam must be >= 0")
        if self.lr <= 0.0:
            raise ValueError("lr must be positive")
        if self.threads < 1:
            raise ValueError("threads must be >= 1")

    @property
    def uses_subwords(self) -> bool:
        return self.mode != "word-only"


@dataclass
class EmbeddingModel:
    """A trained (or freshly initialized) embedding model.

    ``input_matrix`` has one row per vocabulary word followed by ``bucket``
    shared n-gram/bridge rows (no bucket rows in word-only mode);
    ``output_matrix`` has one row per vocabulary word. ``loss_per_epoch``
    is the unweighted mean pair loss observed during training.
    """

    vocab: Vocabulary
    config: TrainConfig
    input_matrix: np.ndarray
    output_matrix: np.ndarray
    loss_per_epoch: list[float] = field(default_factory=list)
    pairs_per_epoch: list[int] = field(default_factory=list)
    _composed: np.ndarray | None = field(default=None, repr=False, compare=False)

    @property
    def dim(self) -> int:
        return self.input_matrix.shape[1]

    def input_row_ids(self, token: str) -> np.ndarray:
        """Input-matrix rows whose mean represents ``token``.

        Word-only mode: the vocabulary row, or :class:`OutOfVocabulary`.
        Subword modes: the vocabulary row (if any) plus the hashed rows of
        all character n-grams; an unknown token is represented by its
        n-gram rows alone.
        """
        word_id = self.vocab.index.get(token)
        cfg = self.config
        if not cfg.uses_subwords:
            if word_id is None:
                raise OutOfVocabulary(token)
            return np.array([word_id], dtype=np.int32)
        n_vocab = len(self.vocab)
        rows = [] if word_id is None else [word_id]
        rows.extend(
            hash_ngram(gram, cfg.bucket, n_vocab)
            for gram in char_ngrams(token, cfg.minn, cfg.maxn)
        )
        return np.array(rows, dtype=np.int32)

    def bridge_row_ids(self, bridge: str) -> np.ndarray:
        """Input-matrix rows representing a bridge string.

        Bridges never occupy vocabulary rows: they are composed from their
        hashed character n-grams plus the hashed whole boundary-wrapped
        string, which acts as their dedicated unit.
        """
        if not bridge:
            raise ValueError("bridge string must be non-empty")
        cfg = self.config
        if not cfg.uses_subwords:
            raise ValueError("bridge vectors require a subword-based mode")
        n_vocab = len(self.vocab)
        rows = [
            hash_ngram(gram, cfg.bucket, n_vocab)
            for gram in char_ngrams(bridge, cfg.minn, cfg.maxn)
        ]
        rows.append(hash_ngram(BOW + bridge + EOW, cfg.bucket, n_vocab))
        return np.array(rows, dtype=np.int32)

    def input_vector(self, token: str) -> np.ndarray:
        """Composed vector for ``token`` (mean of its input rows)."""
        rows = self.input_row_ids(token)
        if rows.size == 0:
            return np.zeros(self.dim, dtype=self.input_matrix.dtype)
        return self.input_matrix[rows].mean(axis=0)

    def bridge_input_vector(self, bridge: str) -> np.ndarray:
        """Composed vector for a bridge string."""
        return self.input_matrix[self.bridge_row_ids(bridge)].mean(axis=0)

    def composed_vocab_vectors(self) -> np.ndarray:
        """Composed input vectors for every vocabulary word (cached)."""
        if self._composed is None:
            self._composed = np.vstack(
                [self.input_vector(word) for word in self.vocab.words]
            )
        return self._composed


def pair_loss_and_update(
    model: EmbeddingModel,
    input_rows: Sequence[int] | np.ndarray,
    target: int,
    rng: np.random.Generator,
    lr_now: float,
    weight: float = 1.0,
) -> float:
    """One SGD step predicting ``target`` from the mean of ``input_rows``.

    Negatives are drawn from the vocabulary's unigram table, redrawing any
    that equal the target. Updates are scaled by ``weight * lr_now``; the
    returned loss is unweighted.
    """
    rows = np.asarray(list(input_rows), dtype=np.int32)
    if rows.size == 0:
        raise ValueError("input_rows must be non-empty")
    if weight <= 0.0:
        raise ValueError("weight must be positive")
    n_vocab = len(model.vocab)
    if not 0 <= target < n_vocab:
        raise ValueError(f"target {target} outside vocabulary")
    if rows.min() < 0 or rows.max() >= model.input_matrix.shape[0]:
        raise ValueError("input row index out of range")
    table = model.vocab.negative_table
    k = model.config.negatives
    negs = np.empty(k, dtype=np.int32)
    for i in range(k):
        value = table[rng.integers(table.shape[0])]
        while value == target:
            value = table[rng.integers(table.shape[0])]
        negs[i] = value
    dim = model.dim
    return float(
        _kernel.pair_update(
            model.input_matrix,
            model.output_matrix,
            rows,
            target,
            negs,
            lr_now * weight,
            np.empty(dim, dtype=np.float64),
            np.empty(dim, dtype=np.float64),
            np.empty(k + 1, dtype=np.float64),
        )
    )


def train_step_center(
    model: EmbeddingModel,
    center: str,
    context_targets: Sequence[int],
    rng: np.random.Generator,
    lr_now: float,
) -> float:
    """Process one center-word occurrence against its context targets.

    Each target is predicted from the center's input rows; in bridge mode
    a gate is drawn once for the occurrence (open with probability ``pb``)
    and, when open, every bridge string of the center also predicts each
    target with its updates scaled by ``lam``. Returns the accumulated
    unweighted loss.
    """
    cfg = model.config
    if center not in model.vocab:
        raise OutOfVocabulary(center)
    center_rows = model.input_row_ids(center)
    bridges: tuple[str, ...] = ()
    gate = 0
    if cfg.mode == "bridge":
        gate = 1 if rng.random() < cfg.pb else 0
        if gate:
            bridges = bridge_words(center).bridges
    total = 0.0
    for target in context_targets:
        total += pair_loss_and_update(model, center_rows, target, rng, lr_now)
        if gate and cfg.lam > 0.0:
            for bridge in bridges:
                total += pair_loss_and_update(
                    model,
                    model.bridge_row_ids(bridge),
                    target,
                    rng,
                    lr_now,
                    weight=cfg.lam,
                )
    return total


# ---------------------------------------------------------------------------
# full-corpus training
# ---------------------------------------------------------------------------


def _encode_corpus(lines: Iterable[str], vocab: Vocabulary):
    """Map the corpus to word-id arrays; unknown tokens are dropped."""
    ids = array("i")
    offsets = array("q", [0])
    index = vocab.index
    max_len = 1
    for line in lines:
        before = len(ids)
        for token in line.split():
            word_id = index.get(token)
            if word_id is not None:
                ids.append(word_id)
        length = len(ids) - before
        if length > max_len:
            max_len = length
        offsets.append(len(ids))
    return (
        np.frombuffer(ids, dtype=np.int32).copy() if ids else np.zeros(0, np.int32),
        np.frombuffer(offsets, dtype=np.int64).copy(),
        max_len,
    )


def _input_row_table(vocab: Vocabulary, config: TrainConfig):
    """CSR map from word id to its input rows (word row + n-gram rows)."""
    n_vocab = len(vocab)
    if not config.uses_subwords:
        return (
            np.arange(n_vocab, dtype=np.int32),
            np.arange(n_vocab + 1, dtype=np.int64),
        )
    hash_cache: dict[str, int] = {}
    flat = array("i")
    offsets = array("q", [0])
    for word_id, word in enumerate(vocab.words):
        flat.append(word_id)
        for gram in char_ngrams(word, config.minn, config.maxn):
            flat.append(_bucket_row(gram, config.bucket, n_vocab, hash_cache))
        offsets.append(len(flat))
    return (
        np.frombuffer(flat, dtype=np.int32).copy(),
        np.frombuffer(offsets, dtype=np.int64).copy(),
    )


def _bucket_row(gram: str, bucket: int, n_vocab: int, cache: dict[str, int]) -> int:
    h = cache.get(gram)
    if h is None:
        h = fnv1a_32(gram.encode("utf-8"))
        cache[gram] = h
    return n_vocab + h % bucket


def _bridge_row_table(vocab: Vocabulary, config: TrainConfig):
    """Two-level CSR: word id -> bridge indices -> input rows."""
    n_vocab = len(vocab)
    hash_cache: dict[str, int] = {}
    flat = array("i")
    bridge_offsets = array("q", [0])
    word_offsets = array("q", [0])
    for word in vocab.words:
        for bridge in bridge_words(word).bridges:
            for gram in char_ngrams(bridge, config.minn, config.maxn):
                flat.append(_bucket_row(gram, config.bucket, n_vocab, hash_cache))
            flat.append(
                _bucket_row(BOW + bridge + EOW, config.bucket, n_vocab, hash_cache)
            )
            bridge_offsets.append(len(flat))
        word_offsets.append(len(bridge_offsets) - 1)
    return (
        np.frombuffer(flat, dtype=np.int32).copy() if flat else np.zeros(0, np.int32),
        np.frombuffer(bridge_offsets, dtype=np.int64).copy(),
        np.frombuffer(word_offsets, dtype=np.int64).copy(),
    )


def _initial_matrices(config: TrainConfig, n_vocab: int):
    """Input rows uniform in [-1/dim, 1/dim), output rows zero."""
    n_rows = n_vocab + (config.bucket if config.uses_subwords else 0)
    rng = np.random.default_rng(config.seed)
    inp = rng.random((n_rows, config.dim), dtype=np.float32)
    inp *= 2.0 / config.dim
    inp -= 1.0 / config.dim
    out = np.zeros((n_vocab, config.dim), dtype=np.float32)
    return inp, out


def _run_training(
    vocab: Vocabulary,
    token_ids: np.ndarray,
    line_offsets: np.ndarray,
    max_line_len: int,
    config: TrainConfig,
) -> EmbeddingModel:
    inp, out = _initial_matrices(config, len(vocab))
    rows_flat, rows_off = _input_row_table(vocab, config)
    if config.mode == "bridge":
        br_flat, br_off, word_br_off = _bridge_row_table(vocab, config)
    else:
        br_flat = np.zeros(0, dtype=np.int32)
        br_off = np.zeros(1, dtype=np.int64)
        word_br_off = np.zeros(len(vocab) + 1, dtype=np.int64)

    n_lines = len(line_offsets) - 1
    n_workers = min(config.threads, max(1, n_lines))
    bounds = [n_lines * w // n_workers for w in range(n_workers + 1)]
    progress = np.zeros(1, dtype=np.int64)
    total_planned = vocab.total_tokens * config.epochs
    loss_acc = [np.zeros(config.epochs) for _ in range(n_workers)]
    pairs_acc = [np.zeros(config.epochs, dtype=np.int64) for _ in range(n_workers)]

    def shard_args(worker: int):
        return (
            token_ids,
            line_offsets,
            bounds[worker],
            bounds[worker + 1],
            vocab.discard_prob,
            config.subsample_t > 0.0,
            vocab.negative_table,
            rows_flat,
            rows_off,
            br_flat,
            br_off,
            word_br_off,
            inp,
            out,
            config.window,
            config.negatives,
            config.epochs,
            config.lr,
            config.pb,
            config.lam,
            config.mode == "bridge",
            _kernel.seed_state(config.seed, worker, 0),
            _kernel.seed_state(config.seed, worker, 1),
            progress,
            total_planned,
            loss_acc[worker],
            pairs_acc[worker],
            np.empty(max(1, max_line_len), dtype=np.int32),
            np.empty(config.negatives, dtype=np.int32),
            np.empty(config.dim, dtype=np.float64),
            np.empty(config.dim, dtype=np.float64),
            np.empty(config.negatives + 1, dtype=np.float64),
        )

    if n_workers == 1:
        _kernel.train_shard(*shard_args(0))
    else:
        workers = [
            threading.Thread(target=_kernel.train_shard, args=shard_args(w))
            for w in range(n_workers)
        ]
        for t in workers:
            t.start()
        for t in workers:
            t.join()

    loss_sum = np.sum(loss_acc, axis=0)
    pair_sum = np.sum(pairs_acc, axis=0)
    history = [
        float(loss_sum[e] / pair_sum[e]) if pair_sum[e] else 0.0
        for e in range(config.epochs)
    ]
    logger.info("training done: per-epoch mean loss %s", history)
    return EmbeddingModel(
        vocab, config, inp, out, history, [int(p) for p in pair_sum]
    )


def _train_from_source(
    make_lines: Callable[[], Iterable[str]], config: TrainConfig
) -> EmbeddingModel:
    vocab = build_vocabulary(
        (token for line in make_lines() for token in tokenize(line)),
        config.min_count,
        subsample_t=config.subsample_t,
    )
    if len(vocab) < 2:
        raise ValueError(
            "vocabulary has a single word; negative sampling needs at least two"
        )
    token_ids, line_offsets, max_line_len = _encode_corpus(make_lines(), vocab)
    return _run_training(vocab, token_ids, line_offsets, max_line_len, config)


def train(corpus_path, config: TrainConfig) -> EmbeddingModel:
    """Train a model on a one-line-per-document UTF-8 corpus file."""
    return _train_from_source(lambda: iter_corpus_lines(corpus_path), config)


def train_lines(lines: Sequence[str], config: TrainConfig) -> EmbeddingModel:
    """Train a model on an in-memory sequence of corpus lines."""
    lines = list(lines)
    return _train_from_source(lambda: lines, config)
