"""Noise-resistant word embeddings via bridge-word skipgram training.

The trainer extends subword skipgram with negative sampling: normalized
single-deletion derivatives of each center word ("bridge words") also
predict the context, gated per occurrence by probability ``pb`` and
down-weighted by ``lam``. Shared bridge words give spelling variants
overlapping training signals, pulling them together in the vector space
without any text normalization at training or inference time.

The package also ships the surrounding experiment tooling: corpus and
vocabulary handling, dictionary-driven dataset de-normalization,
join/split segmentation corruption, and intrinsic evaluation (word
similarity, outlier detection, nearest neighbors).
"""

from .corpus import Vocabulary, build_vocabulary, tokenize
from .denorm import (
    CorruptionConfig,
    NormalizationDict,
    corrupt_segmentation,
    denormalize_dataset,
    denormalize_text,
    load_dict,
    segment_corrupt_dataset,
)
from .errors import (
    BridgegramError,
    FileFormatError,
    OutOfVocabulary,
    UndefinedCorrelationError,
)
from .estimator import BridgegramVectorizer
from .evaluate import (
    OutlierSet,
    SimilarityDataset,
    cosine,
    detect_outlier,
    eval_outliers,
    eval_similarity,
    load_outlier_sets,
    load_similarity_dataset,
    nearest_neighbors,
    sentence_vector,
    spearman,
)
from .io import load_model, load_vectors, save_model, save_vectors
from .model import (
    MODES,
    EmbeddingModel,
    TrainConfig,
    pair_loss_and_update,
    train,
    train_lines,
    train_step_center,
)
from .normalize import BridgeSet, bridge_words, normalize_word
from .subword import char_ngrams, hash_ngram

__version__ = "0.1.0"

__all__ = [
    "__version__",
    "BridgegramError",
    "BridgegramVectorizer",
    "BridgeSet",
    "CorruptionConfig",
    "EmbeddingModel",
    "FileFormatError",
    "MODES",
    "NormalizationDict",
    "OutlierSet",
    "OutOfVocabulary",
    "SimilarityDataset",
    "TrainConfig",
    "UndefinedCorrelationError",
    "Vocabulary",
    "bridge_words",
    "build_vocabulary",
    "char_ngrams",
    "corrupt_segmentation",
    "cosine",
    "denormalize_dataset",
    "denormalize_text",
    "detect_outlier",
    "eval_outliers",
    "eval_similarity",
    "hash_ngram",
    "load_dict",
    "load_model",
    "load_outlier_sets",
    "load_similarity_dataset",
    "load_vectors",
    "nearest_neighbors",
    "normalize_word",
    "pair_loss_and_update",
    "save_model",
    "save_vectors",
    "segment_corrupt_dataset",
    "sentence_vector",
    "spearman",
    "tokenize",
    "train",
    "train_lines",
    "train_step_center",
]
