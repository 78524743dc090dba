"""Command-line interface: train, evaluate, corrupt, inspect.

Machine-readable output is tab-separated ``key<TAB>value`` lines on
stdout. The ``BRIDGEGRAM_LOG`` environment variable (error, info, debug)
controls logging verbosity on stderr. Every randomized subcommand takes
``--seed`` and is reproducible given it (training with ``--threads 1``).
"""

from __future__ import annotations

import logging
import os
import sys

import click

from . import __version__
from .denorm import (
    CorruptionConfig,
    denormalize_dataset,
    load_dict,
    segment_corrupt_dataset,
)
from .errors import BridgegramError
from .evaluate import (
    OOV_POLICIES,
    eval_outliers,
    eval_similarity,
    load_outlier_sets,
    load_similarity_dataset,
    nearest_neighbors,
)
from .io import load_model, save_model, save_vectors
from .model import MODES, TrainConfig, train
from .normalize import bridge_words

_LOG_LEVELS = {"error": logging.ERROR, "info": logging.INFO, "debug": logging.DEBUG}


def _configure_logging() -> None:
    raw = os.environ.get("BRIDGEGRAM_LOG", "error").lower()
    level = _LOG_LEVELS.get(raw, logging.ERROR)
    logging.basicConfig(
        level=level, stream=sys.stderr, format="%(levelname)s %(name)s: %(message)s"
    )


def _emit(key: str, value) -> None:
    click.echo(f"{key}\t{value}")


@click.group()
@click.version_option(__version__)
def cli() -> None:
    """Noise-resistant word embeddings with bridge-word training."""
    _configure_logging()


@cli.command("train")
@click.option("--input", "input_path", required=True,
              type=click.Path(exists=True, dir_okay=False),
              help="Training corpus, one document/sentence per line (UTF-8).")
@click.option("--output", "output_path", required=True, type=click.Path(),
              help="Where to write the binary model.")
@click.option("--mode", type=click.Choice(MODES), default="bridge",
              show_default=True, help="Training mode.")
@click.option("--dim", default=100, show_default=True, help="Embedding dimensionality.")
@click.option("--window", default=5, show_default=True, help="Max context offset.")
@click.option("--epochs", default=5, show_default=True, help="Training epochs.")
@click.option("--lr", default=0.05, show_default=True, help="Initial learning rate.")
@click.option("--negatives", default=5, show_default=True,
              help="Negative samples per target.")
@click.option("--minn", default=3, show_default=True, help="Min n-gram length.")
@click.option("--maxn", default=6, show_default=True, help="Max n-gram length.")
@click.option("--bucket", default=2_000_000, show_default=True,
              help="Hashed n-gram table rows.")
@click.option("--min-count", default=5, show_default=True,
              help="Minimum corpus count for a vocabulary word.")
@click.option("--subsample", "subsample_t", default=1e-4, show_default=True,
              help="Frequent-word subsampling threshold (0 disables).")
@click.option("--pb", default=0.5, show_default=True,
              help="Probability of introducing bridge words per occurrence.")
@click.option("--lambda", "lam", default=0.1, show_default=True,
              help="Weight of bridge-word updates.")
@click.option("--seed", default=1, show_default=True, help="RNG seed.")
@click.option("--threads", default=1, show_default=True,
              help="Training workers (determinism only with 1).")
def train_cmd(input_path, output_path, mode, dim, window, epochs, lr, negatives,
              minn, maxn, bucket, min_count, subsample_t, pb, lam, seed, threads):
    """Train a model and write it in binary format."""
    config = TrainConfig(
        mode=mode, dim=dim, window=window, epochs=epochs, lr=lr,
        negatives=negatives, minn=minn, maxn=maxn, bucket=bucket,
        min_count=min_count, subsample_t=subsample_t, pb=pb, lam=lam,
        seed=seed, threads=threads,
    )
    model = train(input_path, config)
    save_model(model, output_path)
    _emit("vocab_size", len(model.vocab))
    _emit("tokens", model.vocab.total_tokens)
    for epoch, loss in enumerate(model.loss_per_epoch, start=1):
        _emit(f"loss_epoch{epoch}", f"{loss:.6f}")
    _emit("model", output_path)


@cli.command("eval-sim")
@click.option("--model", "model_path", required=True,
              type=click.Path(exists=True, dir_okay=False), help="Binary model file.")
@click.option("--dataset", required=True, type=click.Path(exists=True, dir_okay=False),
              help="Pairs file: word1<TAB>word2<TAB>score.")
@click.option("--oov", "oov_policy", type=click.Choice(OOV_POLICIES),
              default="zero-sim", show_default=True,
              help="How to score pairs a word-only model cannot represent.")
def eval_sim_cmd(model_path, dataset, oov_policy):
    """Word-similarity evaluation (Spearman vs. gold scores)."""
    model = load_model(model_path)
    data = load_similarity_dataset(dataset)
    rho, oov_rate = eval_similarity(model, data, oov_policy)
    _emit("spearman", f"{rho:.6f}")
    _emit("oov_rate", f"{oov_rate:.6f}")


@cli.command("eval-outlier")
@click.option("--model", "model_path", required=True,
              type=click.Path(exists=True, dir_okay=False), help="Binary model file.")
@click.option("--dataset", required=True, type=click.Path(exists=True, dir_okay=False),
              help="Blocks of cluster words, '---', then outlier words.")
def eval_outlier_cmd(model_path, dataset):
    """Outlier-detection evaluation (accuracy)."""
    model = load_model(model_path)
    sets = load_outlier_sets(dataset)
    accuracy, total = eval_outliers(model, sets)
    _emit("accuracy", f"{accuracy:.6f}")
    _emit("tests", total)


@cli.command("denorm")
@click.option("--dict", "dict_paths", required=True, multiple=True,
              type=click.Path(exists=True, dir_okay=False),
              help="Normalization dictionary (noisy<TAB>standard); repeatable.")
@click.option("--input", "inputs", required=True, multiple=True,
              type=click.Path(exists=True, dir_okay=False),
              help="Dataset file to corrupt; repeatable.")
@click.option("--pd", "p_d", default=1.0, show_default=True,
              help="Per-token replacement probability.")
@click.option("--runs", default=1, show_default=True,
              help="Independently seeded corrupted copies.")
@click.option("--seed", default=1, show_default=True, help="Base seed (run i uses seed+i).")
def denorm_cmd(dict_paths, inputs, p_d, runs, seed):
    """Replace words with noisy dictionary variants."""
    ndict = load_dict(list(dict_paths))
    config = CorruptionConfig(p_d=p_d, runs=runs, seed=seed)
    for report in denormalize_dataset(list(inputs), ndict, config):
        _emit("coverage", f"{report.coverage:.4f}")
        _emit("manifest", report.manifest)
        for out in report.outputs:
            _emit("output", out)


@cli.command("corrupt-seg")
@click.option("--input", "inputs", required=True, multiple=True,
              type=click.Path(exists=True, dir_okay=False),
              help="Dataset file to corrupt; repeatable.")
@click.option("--pj", "p_j", default=0.0, show_default=True,
              help="Probability of removing each inter-token boundary.")
@click.option("--ps", "p_s", default=0.0, show_default=True,
              help="Probability of splitting at each intra-token boundary.")
@click.option("--runs", default=1, show_default=True,
              help="Independently seeded corrupted copies.")
@click.option("--seed", default=1, show_default=True, help="Base seed (run i uses seed+i).")
@click.option("--fields", default=None,
              help="Comma-separated 1-based tab fields to corrupt (default: all).")
def corrupt_seg_cmd(inputs, p_j, p_s, runs, seed, fields):
    """Corrupt word segmentation by joining or splitting tokens."""
    config = CorruptionConfig(p_j=p_j, p_s=p_s, runs=runs, seed=seed)
    field_list = None
    if fields:
        try:
            field_list = [int(f) for f in fields.split(",")]
        except ValueError:
            raise click.BadParameter("fields must be comma-separated integers")
    for report in segment_corrupt_dataset(list(inputs), config, field_list):
        _emit("manifest", report.manifest)
        for out in report.outputs:
            _emit("output", out)


@cli.command("nn")
@click.option("--model", "model_path", required=True,
              type=click.Path(exists=True, dir_okay=False), help="Binary model file.")
@click.option("--query", required=True, help="Query word.")
@click.option("-k", "--k", default=10, show_default=True, help="Neighbors to return.")
def nn_cmd(model_path, query, k):
    """Nearest vocabulary words by cosine similarity."""
    model = load_model(model_path)
    for word, sim in nearest_neighbors(model, query, k):
        _emit(word, f"{sim:.6f}")


@cli.command("bridges")
@click.argument("word")
def bridges_cmd(word):
    """Print the normalized form and bridge words of WORD."""
    result = bridge_words(word)
    _emit("source", result.source)
    _emit("normalized", result.normalized)
    for bridge in result.bridges:
        _emit("bridge", bridge)


@cli.command("dump-vec")
@click.option("--model", "model_path", required=True,
              type=click.Path(exists=True, dir_okay=False), help="Binary model file.")
@click.option("--output", "output_path", required=True, type=click.Path(),
              help="Destination text vector file.")
def dump_vec_cmd(model_path, output_path):
    """Export composed word vectors in the text format."""
    model = load_model(model_path)
    save_vectors(model, output_path)
    _emit("vectors", output_path)


def main(argv=None) -> int:
    """Entry point with the documented exit codes.

    0 on success, 2 on usage errors, 1 on runtime failures (diagnostic on
    stderr).
    """
    try:
        cli.main(args=argv, standalone_mode=False)
        return 0
    except click.exceptions.Exit as exc:
        return exc.exit_code
    except click.UsageError as exc:
        exc.show(file=sys.stderr)
        return 2
    except click.ClickException as exc:
        exc.show(file=sys.stderr)
        return exc.exit_code
    except click.exceptions.Abort:
        click.echo("aborted", err=True)
        return 1
    except (BridgegramError, OSError, ValueError) as exc:
        click.echo(f"error: {exc}", err=True)
        return 1


if __name__ == "__main__":
    sys.exit(main())
