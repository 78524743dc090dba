"""Character n-gram extraction and the shared hashing-bucket addressing.

Words and bridge strings are decomposed into boundary-marked character
n-grams whose vectors live in a fixed-size bucket table shared across the
whole model. Hashing is FNV-1a (32-bit), so two distinct n-grams may
collide; that is accepted, as in other subword models.
"""

from __future__ import annotations

__all__ = ["BOW", "EOW", "fnv1a_32", "char_ngrams", "hash_ngram"]

BOW = "<"
EOW = ">"

_FNV_OFFSET = 0x811C9DC5
_FNV_PRIME = 0x01000193


def fnv1a_32(data: bytes) -> int:
    """32-bit FNV-1a hash (offset 2166136261, prime 16777619)."""
    h = _FNV_OFFSET
    for byte in data:
        h ^= byte
        h = (h * _FNV_PRIME) & 0xFFFFFFFF
    return h


def char_ngrams(word: str, minn: int = 3, maxn: int = 6) -> list[str]:
    """All character n-grams of the boundary-wrapped word.

    The word is wrapped as ``<word>`` and every contiguous substring with
    length in ``[minn, maxn]`` is emitted (shorter lengths first, then
    position). When the wrapped form is longer than ``maxn`` it is appended
    once more as a whole-word unit, so even long words keep a dedicated
    row. Repeated substrings are kept: their row simply gets more weight.
    """
    if minn > maxn or minn < 1:
        raise ValueError("need 1 <= minn <= maxn")
    wrapped = BOW + word + EOW
    size = len(wrapped)
    grams = [
        wrapped[i : i + n]
        for n in range(minn, maxn + 1)
        for i in range(size - n + 1)
    ]
    if size > maxn:
        grams.append(wrapped)
    return grams


def hash_ngram(ngram: str, bucket: int, n_vocab: int = 0) -> int:
    """Deterministic row index for an n-gram: ``n_vocab + fnv % bucket``.

    Bucket rows sit after the ``n_vocab`` per-word rows of the input
    matrix, so the returned index lies in ``[n_vocab, n_vocab + bucket)``.
    """
    if not ngram:
        raise ValueError("cannot hash an empty n-gram")
    if bucket < 1:
        raise ValueError("bucket must be positive")
    return n_vocab + fnv1a_32(ngram.encode("utf-8")) % bucket
