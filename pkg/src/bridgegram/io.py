"""Model persistence: text vectors for interop, binary for exactness.

The text format is the widely used embedding layout: a ``count dim``
header, then one ``word v1 .. v_dim`` line per vocabulary word with values
printed to 6 significant digits. The binary format stores the full model
(config, vocabulary, both matrices) exactly: matrices are row-major
little-endian 32-bit floats, so a round-trip is bit-identical.
"""

from __future__ import annotations

import dataclasses
import json
import struct

import numpy as np

from .corpus import Vocabulary, subsample_discard_probs
from .errors import FileFormatError
from .model import EmbeddingModel, TrainConfig

__all__ = ["save_vectors", "load_vectors", "save_model", "load_model"]

MAGIC = b"BRGMODEL"
FORMAT_VERSION = 1
_FLOAT_LE = np.dtype("<f4")


def save_vectors(model: EmbeddingModel, path) -> None:
    """Write the composed per-word input vectors in text format."""
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"{len(model.vocab)} {model.dim}\n")
        for word in model.vocab.words:
            values = " ".join(f"{v:.6g}" for v in model.input_vector(word))
            fh.write(f"{word} {values}\n")


def load_vectors(path) -> dict[str, np.ndarray]:
    """Read a text-format vector file into a word -> vector table."""
    with open(path, encoding="utf-8") as fh:
        header = fh.readline()
        parts = header.split()
        if len(parts) != 2:
            raise FileFormatError(path, 1, "expected header 'count dim'")
        try:
            count, dim = int(parts[0]), int(parts[1])
        except ValueError:
            raise FileFormatError(path, 1, "non-integer header fields") from None
        vectors: dict[str, np.ndarray] = {}
        line_no = 1
        for line in fh:
            line_no += 1
            if not line.strip():
                continue
            fields = line.split()
            if len(fields) != dim + 1:
                raise FileFormatError(
                    path, line_no, f"expected 1 word + {dim} values, got {len(fields)} fields"
                )
            try:
                vectors[fields[0]] = np.array(fields[1:], dtype=np.float32)
            except ValueError:
                raise FileFormatError(path, line_no, "non-numeric vector value") from None
        if len(vectors) != count:
            raise FileFormatError(
                path, line_no, f"header promised {count} words, found {len(vectors)}"
            )
    return vectors


def _write_block(fh, payload: bytes) -> None:
    fh.write(struct.pack("<I", len(payload)))
    fh.write(payload)


def _read_exact(fh, n: int, path) -> bytes:
    data = fh.read(n)
    if len(data) != n:
        raise FileFormatError(path, None, "unexpected end of file")
    return data


def _read_block(fh, path) -> bytes:
    (length,) = struct.unpack("<I", _read_exact(fh, 4, path))
    return _read_exact(fh, length, path)


def _write_matrix(fh, matrix: np.ndarray) -> None:
    rows, cols = matrix.shape
    fh.write(struct.pack("<QQ", rows, cols))
    fh.write(np.ascontiguousarray(matrix, dtype=_FLOAT_LE).tobytes())


def _read_matrix(fh, path) -> np.ndarray:
    rows, cols = struct.unpack("<QQ", _read_exact(fh, 16, path))
    data = _read_exact(fh, rows * cols * 4, path)
    return np.frombuffer(data, dtype=_FLOAT_LE).reshape(rows, cols).copy()


def save_model(model: EmbeddingModel, path) -> None:
    """Persist the full model (config, vocabulary, matrices) exactly."""
    header = {
        "config": dataclasses.asdict(model.config),
        "loss_per_epoch": list(model.loss_per_epoch),
        "pairs_per_epoch": list(model.pairs_per_epoch),
        "negative_table_size": model.vocab.negative_table_size,
    }
    with open(path, "wb") as fh:
        fh.write(MAGIC)
        fh.write(struct.pack("<I", FORMAT_VERSION))
        _write_block(fh, json.dumps(header).encode("utf-8"))
        fh.write(struct.pack("<Q", len(model.vocab)))
        for word, count in zip(model.vocab.words, model.vocab.counts):
            encoded = word.encode("utf-8")
            fh.write(struct.pack("<I", len(encoded)))
            fh.write(encoded)
            fh.write(struct.pack("<Q", int(count)))
        _write_matrix(fh, model.input_matrix)
        _write_matrix(fh, model.output_matrix)


def load_model(path) -> EmbeddingModel:
    """Load a model written by :func:`save_model`.

    The subsampling probabilities are recomputed from the stored counts and
    config; the negative-sampling table is rebuilt lazily on first use.
    """
    with open(path, "rb") as fh:
        if _read_exact(fh, len(MAGIC), path) != MAGIC:
            raise FileFormatError(path, None, "not a bridgegram model file")
        (version,) = struct.unpack("<I", _read_exact(fh, 4, path))
        if version != FORMAT_VERSION:
            raise FileFormatError(path, None, f"unsupported format version {version}")
        try:
            header = json.loads(_read_block(fh, path).decode("utf-8"))
            config = TrainConfig(**header["config"])
        except (ValueError, KeyError, TypeError) as exc:
            raise FileFormatError(path, None, f"bad header: {exc}") from None
        (n_words,) = struct.unpack("<Q", _read_exact(fh, 8, path))
        words: list[str] = []
        counts = np.empty(n_words, dtype=np.int64)
        for i in range(n_words):
            (length,) = struct.unpack("<I", _read_exact(fh, 4, path))
            words.append(_read_exact(fh, length, path).decode("utf-8"))
            (counts[i],) = struct.unpack("<Q", _read_exact(fh, 8, path))
        total = int(counts.sum())
        vocab = Vocabulary(
            words=words,
            counts=counts,
            index={word: i for i, word in enumerate(words)},
            total_tokens=total,
            discard_prob=subsample_discard_probs(counts, total, config.subsample_t),
            negative_table_size=int(header["negative_table_size"]),
        )
        input_matrix = _read_matrix(fh, path)
        output_matrix = _read_matrix(fh, path)
    return EmbeddingModel(
        vocab=vocab,
        config=config,
        input_matrix=input_matrix,
        output_matrix=output_matrix,
        loss_per_epoch=[float(v) for v in header.get("loss_per_epoch", [])],
        pairs_per_epoch=[int(v) for v in header.get("pairs_per_epoch", [])],
    )
