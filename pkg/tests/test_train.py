"""End-to-end trainer behavior: determinism, mode reductions, convergence.

The reference-orchestration test rebuilds the whole training loop in pure
Python (mirroring the RNG streams and the documented draw order) while
delegating the arithmetic of each pair update to the same compiled
primitive; the compiled trainer must reproduce it bit for bit.
"""

import numpy as np
import pytest

from bridgegram import TrainConfig, train, train_lines
from bridgegram import _kernel
from bridgegram.model import (
    _bridge_row_table,
    _encode_corpus,
    _initial_matrices,
    _input_row_table,
)
from test_kernel import PyStream


def reference_train(lines, config):
    """Pure-Python single-worker mirror of the compiled training loop."""
    from bridgegram.corpus import build_vocabulary, tokenize

    vocab = build_vocabulary(
        (t for line in lines for t in tokenize(line)),
        config.min_count,
        subsample_t=config.subsample_t,
    )
    token_ids, line_offsets, _ = _encode_corpus(lines, vocab)
    rows_flat, rows_off = _input_row_table(vocab, config)
    bridge_mode = config.mode == "bridge"
    if bridge_mode:
        br_flat, br_off, word_br_off = _bridge_row_table(vocab, config)
    inp, out = _initial_matrices(config, len(vocab))

    table = vocab.negative_table
    use_subsample = config.subsample_t > 0.0
    stream_a = PyStream(_kernel.seed_state(config.seed, 0, 0)[0])
    stream_b = PyStream(_kernel.seed_state(config.seed, 0, 1)[0])
    total_planned = vocab.total_tokens * config.epochs
    progress = 0
    k = config.negatives
    hidden = np.empty(config.dim)
    grad_h = np.empty(config.dim)
    sample_g = np.empty(k + 1)
    negs = np.empty(k, dtype=np.int32)

    def draw_negatives(stream, target):
        for i in range(k):
            value = table[stream.below(len(table))]
            while value == target:
                value = table[stream.below(len(table))]
            negs[i] = value

    for _ in range(config.epochs):
        for li in range(len(line_offsets) - 1):
            start, stop = line_offsets[li], line_offsets[li + 1]
            if stop == start:
                continue
            progress += stop - start
            lr_now = config.lr * max(0.0, 1.0 - progress / total_planned)
            kept = []
            for t in range(start, stop):
                w = int(token_ids[t])
                if use_subsample and stream_a.unit() < vocab.discard_prob[w]:
                    continue
                kept.append(w)
            for i, center in enumerate(kept):
                span = 1 + stream_a.below(config.window)
                gate = 0
                if bridge_mode and stream_b.unit() < config.pb:
                    gate = 1
                lo = max(0, i - span)
                hi = min(len(kept), i + span + 1)
                center_rows = rows_flat[rows_off[center] : rows_off[center + 1]]
                for j in range(lo, hi):
                    if j == i:
                        continue
                    target = kept[j]
                    draw_negatives(stream_a, target)
                    _kernel.pair_update(
                        inp, out, center_rows, target, negs, lr_now,
                        hidden, grad_h, sample_g,
                    )
                    if gate:
                        for bi in range(word_br_off[center], word_br_off[center + 1]):
                            bridge_rows = br_flat[br_off[bi] : br_off[bi + 1]]
                            draw_negatives(stream_b, target)
                            _kernel.pair_update(
                                inp, out, bridge_rows, target, negs,
                                lr_now * config.lam, hidden, grad_h, sample_g,
                            )
    return inp, out


class TestDeterminism:
    def test_two_runs_bit_identical(self, tiny_lines, tiny_config):
        a = train_lines(tiny_lines, tiny_config)
        b = train_lines(tiny_lines, tiny_config)
        assert np.array_equal(a.input_matrix, b.input_matrix)
        assert np.array_equal(a.output_matrix, b.output_matrix)

    def test_seed_changes_result(self, tiny_lines, tiny_config):
        import dataclasses

        a = train_lines(tiny_lines, tiny_config)
        b = train_lines(tiny_lines, dataclasses.replace(tiny_config, seed=8))
        assert not np.array_equal(a.input_matrix, b.input_matrix)


@pytest.fixture(scope="module")
def subword_model(tiny_lines):
    config = TrainConfig(
        mode="subword", dim=16, epochs=2, bucket=2048, min_count=2,
        subsample_t=1e-3, seed=11, threads=1,
    )
    return train_lines(tiny_lines, config)


class TestModeReductions:
    def test_bridge_with_zero_gate_probability_is_bit_identical(
        self, tiny_lines, subword_model
    ):
        config = TrainConfig(
            mode="bridge", pb=0.0, lam=1.0, dim=16, epochs=2, bucket=2048,
            min_count=2, subsample_t=1e-3, seed=11, threads=1,
        )
        bridged = train_lines(tiny_lines, config)
        assert np.array_equal(bridged.input_matrix, subword_model.input_matrix)
        assert np.array_equal(bridged.output_matrix, subword_model.output_matrix)

    def test_bridge_with_zero_weight_matches_subword(self, tiny_lines, subword_model):
        config = TrainConfig(
            mode="bridge", pb=1.0, lam=0.0, dim=16, epochs=2, bucket=2048,
            min_count=2, subsample_t=1e-3, seed=11, threads=1,
        )
        bridged = train_lines(tiny_lines, config)
        assert np.array_equal(bridged.input_matrix, subword_model.input_matrix)
        assert np.array_equal(bridged.output_matrix, subword_model.output_matrix)


class TestReferenceOrchestration:
    @pytest.mark.parametrize("mode,pb,lam", [
        ("word-only", 0.5, 0.1),
        ("subword", 0.5, 0.1),
        ("bridge", 0.6, 0.25),
    ])
    def test_compiled_trainer_matches_python_mirror(self, tiny_lines, mode, pb, lam):
        lines = tiny_lines[:120]
        config = TrainConfig(
            mode=mode, dim=10, window=3, epochs=2, bucket=512, min_count=2,
            subsample_t=1e-3, negatives=3, pb=pb, lam=lam, seed=21, threads=1,
        )
        expected_inp, expected_out = reference_train(lines, config)
        model = train_lines(lines, config)
        assert np.array_equal(model.input_matrix, expected_inp)
        assert np.array_equal(model.output_matrix, expected_out)


class TestTrainingBehavior:
    def test_loss_decreases_over_epochs(self, tiny_lines):
        drops = 0
        for seed in (1, 2, 3):
            config = TrainConfig(
                mode="subword", dim=24, epochs=5, bucket=2048, min_count=2,
                subsample_t=1e-3, seed=seed, threads=1,
            )
            model = train_lines(tiny_lines, config)
            drops += model.loss_per_epoch[4] < model.loss_per_epoch[0]
        assert drops >= 2

    def test_matrices_stay_finite(self, tiny_lines):
        config = TrainConfig(
            mode="bridge", dim=16, epochs=3, bucket=1024, min_count=2,
            pb=1.0, lam=1.0, lr=0.3, subsample_t=1e-3, seed=5, threads=1,
        )
        model = train_lines(tiny_lines, config)
        assert np.all(np.isfinite(model.input_matrix))
        assert np.all(np.isfinite(model.output_matrix))

    def test_bridge_processes_more_pairs_than_subword(self, tiny_lines):
        base = dict(dim=8, epochs=1, bucket=512, min_count=2,
                    subsample_t=1e-3, seed=9, threads=1)
        sub = train_lines(tiny_lines, TrainConfig(mode="subword", **base))
        bridged = train_lines(
            tiny_lines, TrainConfig(mode="bridge", pb=1.0, lam=0.5, **base)
        )
        assert bridged.pairs_per_epoch[0] > sub.pairs_per_epoch[0]

    def test_multithreaded_training_runs(self, tiny_lines):
        config = TrainConfig(
            mode="subword", dim=16, epochs=2, bucket=1024, min_count=2,
            subsample_t=1e-3, seed=5, threads=2,
        )
        model = train_lines(tiny_lines, config)
        assert np.all(np.isfinite(model.input_matrix))
        assert sum(model.pairs_per_epoch) > 0

    def test_empty_corpus_rejected(self):
        with pytest.raises(ValueError):
            train_lines([], TrainConfig(min_count=1))

    def test_single_word_vocabulary_rejected(self):
        with pytest.raises(ValueError):
            train_lines(["solo solo solo solo"], TrainConfig(min_count=1))

    def test_train_reads_corpus_file(self, tiny_lines, tiny_config, tmp_path):
        corpus = tmp_path / "corpus.txt"
        corpus.write_text("\n".join(tiny_lines) + "\n", encoding="utf-8")
        from_file = train(corpus, tiny_config)
        from_memory = train_lines(tiny_lines, tiny_config)
        assert np.array_equal(from_file.input_matrix, from_memory.input_matrix)
