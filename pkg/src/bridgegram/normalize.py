"""Word normalization and single-deletion bridge strings.

The derivation has two stages. First a word is normalized: lowercased,
accents stripped, and every run of a repeated character collapsed to one
occurrence (so both standard doublings like "success" -> "suces" and
emphatic ones like "daaammn" -> "damn" land on a common form). Then one
bridge string per character position is produced by deleting that
character. Spelling variants that are one edit apart tend to share bridge
strings ("friend" and "freind" both yield "frend" and "frind"), which is
what lets the trainer tie their representations together indirectly.
"""

from __future__ import annotations

import unicodedata
from dataclasses import dataclass
from functools import lru_cache

__all__ = ["BridgeSet", "normalize_word", "bridge_words"]


@dataclass(frozen=True)
class BridgeSet:
    """A word's normalized form and its deletion-derived bridge strings.

    ``bridges`` holds one entry per character of ``normalized`` (the string
    with that character removed), de-duplicated preserving first occurrence.
    Words whose normalized form is a single character have no bridges.
    """

    source: str
    normalized: str
    bridges: tuple[str, ...]


def normalize_word(word: str) -> str:
    """Lowercase, strip accents, and collapse repeated characters.

    Accent stripping removes combining marks after canonical (NFD)
    decomposition; repetition collapse operates on the resulting Unicode
    scalars. The three steps always run in this order and the function is
    idempotent.
    """
    if not word:
        raise ValueError("cannot normalize an empty word")
    decomposed = unicodedata.normalize("NFD", word.lower())
    stripped = "".join(ch for ch in decomposed if not unicodedata.combining(ch))
    collapsed: list[str] = []
    prev = None
    for ch in stripped:
        if ch != prev:
            collapsed.append(ch)
        prev = ch
    return "".join(collapsed)


@lru_cache(maxsize=262144)
def bridge_words(word: str) -> BridgeSet:
    """Derive the bridge strings of ``word``.

    Each bridge is the normalized form with exactly one character deleted,
    in position order. Deleting the only character of a one-character word
    would leave the empty string, so such words get an empty bridge list.
    """
    normalized = normalize_word(word)
    if len(normalized) <= 1:
        return BridgeSet(word, normalized, ())
    deletions = (
        normalized[:j] + normalized[j + 1 :] for j in range(len(normalized))
    )
    return BridgeSet(word, normalized, tuple(dict.fromkeys(deletions)))
