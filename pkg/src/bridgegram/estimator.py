"""Scikit-learn estimator wrapper around the trainer.

``BridgegramVectorizer`` follows the sklearn contract (constructor stores
parameters verbatim, validation happens in ``fit``, fitted state lives in
trailing-underscore attributes) so the embeddings compose with pipelines,
grid search, and ``clone``. ``transform`` maps raw text to bag-of-words
mean vectors, which is the intended downstream use for sentence-level
tasks.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from .corpus import tokenize
from .evaluate import sentence_vector
from .model import TrainConfig, train_lines

__all__ = ["BridgegramVectorizer"]


class BridgegramVectorizer(BaseEstimator, TransformerMixin):
    """Train noise-resistant word embeddings; transform text to vectors.

    Parameters mirror :class:`~bridgegram.model.TrainConfig`. ``fit``
    expects an iterable of raw text lines (one document or sentence each);
    ``transform`` returns one row per input text, the mean of the composed
    vectors of its whitespace tokens. In subword-based modes every token
    is representable, so unseen and noisy words still land near their
    clean counterparts.
    """

    def __init__(
        self,
        mode: str = "bridge",
        dim: int = 100,
        window: int = 5,
        epochs: int = 5,
        lr: float = 0.05,
        negatives: int = 5,
        minn: int = 3,
        maxn: int = 6,
        bucket: int = 2_000_000,
        min_count: int = 5,
        subsample_t: float = 1e-4,
        pb: float = 0.5,
        lam: float = 0.1,
        seed: int = 1,
        threads: int = 1,
    ):
        self.mode = mode
        self.dim = dim
        self.window = window
        self.epochs = epochs
        self.lr = lr
        self.negatives = negatives
        self.minn = minn
        self.maxn = maxn
        self.bucket = bucket
        self.min_count = min_count
        self.subsample_t = subsample_t
        self.pb = pb
        self.lam = lam
        self.seed = seed
        self.threads = threads

    def _make_config(self) -> TrainConfig:
        # TrainConfig performs the parameter validation
        return TrainConfig(**self.get_params())

    def fit(self, X, y=None):
        """Train on an iterable of text lines."""
        lines = self._check_texts(X)
        if not lines:
            raise ValueError("X must contain at least one text line")
        config = self._make_config()
        self.model_ = train_lines(lines, config)
        self.n_features_out_ = config.dim
        return self

    def transform(self, X) -> np.ndarray:
        """Bag-of-words mean vector per input text, shape (n, dim)."""
        check_is_fitted(self, "model_")
        texts = self._check_texts(X)
        rows = np.zeros((len(texts), self.model_.dim), dtype=np.float32)
        for i, text in enumerate(texts):
            tokens = tokenize(text)
            if tokens:
                rows[i] = sentence_vector(self.model_, tokens)
        return rows

    @staticmethod
    def _check_texts(X) -> list[str]:
        if isinstance(X, str):
            raise ValueError("X must be an iterable of texts, not a single string")
        texts = list(X)
        for item in texts:
            if not isinstance(item, str):
                raise ValueError(f"X must contain strings, got {type(item).__name__}")
        return texts
