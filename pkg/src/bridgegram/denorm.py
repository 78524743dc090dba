"""Dataset corruption: dictionary-driven de-normalization and bad
segmentation.

De-normalization replaces words with noisy variants drawn from a
normalization dictionary, each covered token independently with
probability ``p_d``. Segmentation corruption removes inter-word
delimiters with probability ``p_j`` (join) or inserts delimiters between
word characters with probability ``p_s`` (split); the two are run as
separate experiment arms.
"""

from __future__ import annotations

import logging
import re
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np

from .errors import FileFormatError

__all__ = [
    "NormalizationDict",
    "CorruptionConfig",
    "DenormReport",
    "load_dict",
    "denormalize_text",
    "corrupt_segmentation",
    "denormalize_dataset",
    "segment_corrupt_dataset",
]

logger = logging.getLogger(__name__)

_WHITESPACE_SPLIT = re.compile(r"(\s+)")


@dataclass(frozen=True)
class NormalizationDict:
    """Bidirectional store of (noisy, standard) word pairs.

    ``forward`` maps a standard word to its noisy variants (de-duplicated,
    lexicographically ordered); ``reverse`` maps each noisy variant back to
    the standard word it belongs to.
    """

    forward: dict[str, tuple[str, ...]]
    reverse: dict[str, str]
    source_names: tuple[str, ...]

    def __len__(self) -> int:
        return len(self.forward)

    def coverage(self, tokens: Sequence[str]) -> float:
        """Fraction of unique lowercased tokens present as forward keys."""
        unique = {token.lower() for token in tokens}
        if not unique:
            return 0.0
        return sum(token in self.forward for token in unique) / len(unique)


@dataclass(frozen=True)
class CorruptionConfig:
    """Corruption probabilities plus run bookkeeping.

    ``runs`` independently seeded corrupted copies are produced per
    dataset, run ``i`` using ``seed + i``, and downstream metrics are meant
    to be averaged over runs.
    """

    p_d: float = 1.0
    p_j: float = 0.0
    p_s: float = 0.0
    runs: int = 1
    seed: int = 1

    def __post_init__(self):
        for name in ("p_d", "p_j", "p_s"):
            value = getattr(self, name)
            if not 0.0 <= value <= 1.0:
                raise ValueError(f"{name} must lie in [0, 1], got {value}")
        if self.runs < 1:
            raise ValueError("runs must be >= 1")


@dataclass(frozen=True)
class DenormReport:
    """Outputs of a dataset corruption: file paths, coverage, manifest."""

    outputs: tuple[Path, ...]
    coverage: float
    manifest: Path


def load_dict(paths: Sequence) -> NormalizationDict:
    """Merge one or more ``noisy<TAB>standard`` dictionary files.

    Columns may equally be separated by other whitespace. When the same
    noisy form maps to different standard words across entries, the first
    mapping wins and the conflict is logged; the losing pair is dropped so
    reverse lookup always undoes a replacement.
    """
    if not paths:
        raise ValueError("need at least one dictionary file")
    forward: dict[str, set[str]] = {}
    reverse: dict[str, str] = {}
    for path in paths:
        with open(path, encoding="utf-8") as fh:
            for line_no, line in enumerate(fh, start=1):
                if not line.strip():
                    continue
                fields = line.split()
                if len(fields) != 2:
                    raise FileFormatError(
                        path, line_no,
                        f"expected 'noisy standard', got {len(fields)} fields",
                    )
                noisy, standard = fields
                previous = reverse.get(noisy)
                if previous is not None and previous != standard:
                    logger.warning(
                        "%s:%d: %r already maps to %r, ignoring mapping to %r",
                        path, line_no, noisy, previous, standard,
                    )
                    continue
                reverse[noisy] = standard
                forward.setdefault(standard, set()).add(noisy)
    return NormalizationDict(
        forward={std: tuple(sorted(variants)) for std, variants in forward.items()},
        reverse=reverse,
        source_names=tuple(str(p) for p in paths),
    )


def denormalize_text(
    tokens: Sequence[str],
    ndict: NormalizationDict,
    p_d: float,
    rng: np.random.Generator,
) -> list[str]:
    """Replace covered tokens with dictionary variants at rate ``p_d``.

    Matching is case-insensitive on the token; replacements are emitted as
    stored in the dictionary and chosen uniformly from the variant list.
    Uncovered tokens pass through, and the token count never changes.
    """
    if not 0.0 <= p_d <= 1.0:
        raise ValueError("p_d must lie in [0, 1]")
    out = []
    for token in tokens:
        variants = ndict.forward.get(token.lower())
        if variants and rng.random() < p_d:
            out.append(variants[rng.integers(len(variants))])
        else:
            out.append(token)
    return out


def corrupt_segmentation(
    tokens: Sequence[str],
    p_j: float,
    p_s: float,
    rng: np.random.Generator,
) -> list[str]:
    """Corrupt token boundaries: join at ``p_j``, then split at ``p_s``.

    Join removes each inter-token boundary independently; split turns each
    intra-token character boundary into a delimiter independently. The
    delimiter-stripped character sequence is preserved exactly. The two
    corruptions are normally used one at a time (the other probability 0).
    """
    if not 0.0 <= p_j <= 1.0 or not 0.0 <= p_s <= 1.0:
        raise ValueError("p_j and p_s must lie in [0, 1]")
    if not tokens:
        return []
    joined: list[str] = []
    current = tokens[0]
    for token in tokens[1:]:
        if rng.random() < p_j:
            current += token
        else:
            joined.append(current)
            current = token
    joined.append(current)
    out: list[str] = []
    for token in joined:
        start = 0
        for boundary in range(1, len(token)):
            if rng.random() < p_s:
                out.append(token[start:boundary])
                start = boundary
        out.append(token[start:])
    return out


def _unique_tokens(paths) -> set[str]:
    unique: set[str] = set()
    for path in paths:
        with open(path, encoding="utf-8") as fh:
            for line in fh:
                unique.update(token.lower() for token in line.split())
    return unique


def _rewrite_tokens(line: str, mapper) -> str:
    """Apply ``mapper`` to the tokens of a line, preserving whitespace."""
    parts = _WHITESPACE_SPLIT.split(line)
    tokens = parts[::2]
    mapped = mapper([token for token in tokens if token])
    it = iter(mapped)
    parts[::2] = [next(it) if token else token for token in tokens]
    return "".join(parts)


def _write_manifest(path: Path, entries: list[tuple[str, object]]) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for key, value in entries:
            fh.write(f"{key}\t{value}\n")


def denormalize_dataset(
    paths: Sequence,
    ndict: NormalizationDict,
    config: CorruptionConfig,
) -> list[DenormReport]:
    """Produce ``config.runs`` de-normalized copies of each dataset file.

    Copies are written next to the originals with suffix
    ``.noise-<p_d>-run<i>``; whitespace structure (tabs included) is
    preserved so tabular datasets stay parseable. A per-dataset manifest
    records seeds, the replacement probability, and dictionary coverage of
    the dataset's unique words.
    """
    reports = []
    for path in paths:
        path = Path(path)
        coverage = ndict.coverage(sorted(_unique_tokens([path])))
        outputs = []
        lines = path.read_text(encoding="utf-8").splitlines(keepends=True)
        for run in range(config.runs):
            rng = np.random.default_rng(config.seed + run)
            out_path = path.with_name(
                f"{path.name}.noise-{config.p_d:g}-run{run}"
            )
            with open(out_path, "w", encoding="utf-8") as fh:
                for line in lines:
                    fh.write(
                        _rewrite_tokens(
                            line,
                            lambda toks: denormalize_text(toks, ndict, config.p_d, rng),
                        )
                    )
            outputs.append(out_path)
        manifest = path.with_name(f"{path.name}.noise-{config.p_d:g}.manifest")
        entries: list[tuple[str, object]] = [
            ("input", path),
            ("p_d", config.p_d),
            ("runs", config.runs),
            ("coverage", f"{coverage:.4f}"),
        ]
        entries += [(f"run{i}_seed", config.seed + i) for i in range(config.runs)]
        entries += [(f"run{i}_output", out) for i, out in enumerate(outputs)]
        _write_manifest(manifest, entries)
        reports.append(DenormReport(tuple(outputs), coverage, manifest))
    return reports


def segment_corrupt_dataset(
    paths: Sequence,
    config: CorruptionConfig,
    fields: Sequence[int] | None = None,
) -> list[DenormReport]:
    """Produce ``config.runs`` segmentation-corrupted copies per file.

    Each line is split on tabs and the selected 1-based ``fields`` (default
    all) are corrupted as token sequences; intra-field spacing collapses to
    single spaces since the delimiters themselves are what is corrupted.
    Output suffix is ``.seg-<p_j>-<p_s>-run<i>``.
    """
    selected = set(fields) if fields else None
    reports = []
    for path in paths:
        path = Path(path)
        lines = path.read_text(encoding="utf-8").splitlines()
        outputs = []
        for run in range(config.runs):
            rng = np.random.default_rng(config.seed + run)
            out_path = path.with_name(
                f"{path.name}.seg-{config.p_j:g}-{config.p_s:g}-run{run}"
            )
            with open(out_path, "w", encoding="utf-8") as fh:
                for line in lines:
                    columns = line.split("\t")
                    for i, column in enumerate(columns, start=1):
                        if selected is None or i in selected:
                            columns[i - 1] = " ".join(
                                corrupt_segmentation(
                                    column.split(), config.p_j, config.p_s, rng
                                )
                            )
                    fh.write("\t".join(columns) + "\n")
            outputs.append(out_path)
        manifest = path.with_name(
            f"{path.name}.seg-{config.p_j:g}-{config.p_s:g}.manifest"
        )
        entries: list[tuple[str, object]] = [
            ("input", path),
            ("p_j", config.p_j),
            ("p_s", config.p_s),
            ("runs", config.runs),
        ]
        entries += [(f"run{i}_seed", config.seed + i) for i in range(config.runs)]
        entries += [(f"run{i}_output", out) for i, out in enumerate(outputs)]
        _write_manifest(manifest, entries)
        reports.append(DenormReport(tuple(outputs), 0.0, manifest))
    return reports
