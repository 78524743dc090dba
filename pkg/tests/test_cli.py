import numpy as np
import pytest
from click.testing import CliRunner

from bridgegram.cli import cli, main


def kv_lines(output: str) -> list[tuple[str, str]]:
    return [
        tuple(line.split("\t", 1))
        for line in output.splitlines()
        if "\t" in line
    ]


@pytest.fixture(scope="module")
def runner():
    return CliRunner()


@pytest.fixture(scope="module")
def trained(tmp_path_factory, tiny_lines):
    base = tmp_path_factory.mktemp("cli")
    corpus = base / "corpus.txt"
    corpus.write_text("\n".join(tiny_lines) + "\n", encoding="utf-8")
    model_path = base / "model.bin"
    result = CliRunner().invoke(cli, [
        "train", "--input", str(corpus), "--output", str(model_path),
        "--mode", "bridge", "--pb", "0.5", "--lambda", "0.1",
        "--dim", "16", "--epochs", "2", "--bucket", "1024",
        "--min-count", "2", "--subsample", "1e-3", "--seed", "4",
    ])
    assert result.exit_code == 0, result.output
    return base, corpus, model_path, result.output


class TestBridges:
    def test_friend_bridge_listing(self, runner):
        result = runner.invoke(cli, ["bridges", "friend"])
        assert result.exit_code == 0
        pairs = kv_lines(result.output)
        assert ("source", "friend") in pairs
        assert ("normalized", "friend") in pairs
        bridges = [v for k, v in pairs if k == "bridge"]
        assert bridges == ["riend", "fiend", "frend", "frind", "fried", "frien"]

    def test_normalization_shown_for_noisy_word(self, runner):
        result = runner.invoke(cli, ["bridges", "daaammn"])
        pairs = dict(kv_lines(result.output))
        assert pairs["normalized"] == "damn"


class TestTrainCommand:
    def test_reports_vocab_and_losses(self, trained):
        _, _, _, output = trained
        keys = [k for k, _ in kv_lines(output)]
        assert "vocab_size" in keys
        assert "loss_epoch1" in keys
        assert "model" in keys

    def test_reproducible_given_seed(self, runner, trained, tmp_path):
        base, corpus, model_path, _ = trained
        other = tmp_path / "again.bin"
        result = runner.invoke(cli, [
            "train", "--input", str(corpus), "--output", str(other),
            "--mode", "bridge", "--pb", "0.5", "--lambda", "0.1",
            "--dim", "16", "--epochs", "2", "--bucket", "1024",
            "--min-count", "2", "--subsample", "1e-3", "--seed", "4",
        ])
        assert result.exit_code == 0
        from bridgegram import load_model

        a = load_model(model_path)
        b = load_model(other)
        assert np.array_equal(a.input_matrix, b.input_matrix)


class TestEvalCommands:
    def test_eval_sim_outputs_metrics(self, runner, trained, tmp_path):
        _, _, model_path, _ = trained
        dataset = tmp_path / "pairs.tsv"
        dataset.write_text(
            "red\tgreen\t8.0\nred\tdog\t2.0\nblue\tpaint\t7.0\n", encoding="utf-8"
        )
        result = runner.invoke(cli, [
            "eval-sim", "--model", str(model_path), "--dataset", str(dataset),
            "--oov", "zero-sim",
        ])
        assert result.exit_code == 0, result.output
        metrics = dict(kv_lines(result.output))
        assert -1.0 <= float(metrics["spearman"]) <= 1.0
        assert metrics["oov_rate"] == "0.000000"

    def test_eval_outlier_outputs_accuracy(self, runner, trained, tmp_path):
        _, _, model_path, _ = trained
        dataset = tmp_path / "outliers.txt"
        dataset.write_text(
            "red\ngreen\nblue\n---\ndog\n\nbread\nmilk\ncheese\n---\npaint\n",
            encoding="utf-8",
        )
        result = runner.invoke(cli, [
            "eval-outlier", "--model", str(model_path), "--dataset", str(dataset),
        ])
        assert result.exit_code == 0, result.output
        metrics = dict(kv_lines(result.output))
        assert metrics["tests"] == "2"
        assert 0.0 <= float(metrics["accuracy"]) <= 1.0


class TestNearestNeighbors:
    def test_nn_lists_k_words(self, runner, trained):
        _, _, model_path, _ = trained
        result = runner.invoke(cli, [
            "nn", "--model", str(model_path), "--query", "red", "-k", "3",
        ])
        assert result.exit_code == 0, result.output
        pairs = kv_lines(result.output)
        assert len(pairs) == 3
        assert all(p[0] != "red" for p in pairs)


class TestDumpVec:
    def test_dump_and_reload(self, runner, trained, tmp_path):
        _, _, model_path, _ = trained
        out = tmp_path / "vectors.vec"
        result = runner.invoke(cli, [
            "dump-vec", "--model", str(model_path), "--output", str(out),
        ])
        assert result.exit_code == 0, result.output
        from bridgegram import load_vectors

        table = load_vectors(out)
        assert len(table) > 0


class TestCorruptionCommands:
    def test_denorm_writes_runs(self, runner, tmp_path):
        dictionary = tmp_path / "dict.tsv"
        dictionary.write_text("frnd\tfriend\nthw\tthe\n", encoding="utf-8")
        dataset = tmp_path / "data.txt"
        dataset.write_text("the friend plays\n", encoding="utf-8")
        result = runner.invoke(cli, [
            "denorm", "--dict", str(dictionary), "--input", str(dataset),
            "--pd", "1.0", "--runs", "2", "--seed", "5",
        ])
        assert result.exit_code == 0, result.output
        pairs = kv_lines(result.output)
        outputs = [v for k, v in pairs if k == "output"]
        assert len(outputs) == 2
        text = (tmp_path / "data.txt.noise-1-run0").read_text(encoding="utf-8")
        assert "frnd" in text and "thw" in text and "plays" in text

    def test_corrupt_seg_join(self, runner, tmp_path):
        dataset = tmp_path / "data.txt"
        dataset.write_text("no way\n", encoding="utf-8")
        result = runner.invoke(cli, [
            "corrupt-seg", "--input", str(dataset), "--pj", "1.0", "--seed", "2",
        ])
        assert result.exit_code == 0, result.output
        out = tmp_path / "data.txt.seg-1-0-run0"
        assert out.read_text(encoding="utf-8") == "noway\n"

    def test_corrupt_seg_bad_fields_rejected(self, runner, tmp_path):
        dataset = tmp_path / "data.txt"
        dataset.write_text("a b\n", encoding="utf-8")
        result = runner.invoke(cli, [
            "corrupt-seg", "--input", str(dataset), "--fields", "one,two",
        ])
        assert result.exit_code != 0


class TestExitCodes:
    def test_unknown_flag_is_usage_error(self, capsys):
        assert main(["bridges", "--no-such-flag", "x"]) == 2
        assert "no-such-flag" in capsys.readouterr().err

    def test_unknown_command_is_usage_error(self, capsys):
        assert main(["frobnicate"]) == 2

    def test_missing_file_is_usage_error(self, capsys):
        assert main(["eval-sim", "--model", "/nope.bin", "--dataset", "/nope.tsv"]) == 2

    def test_runtime_failure_is_exit_one(self, tmp_path, capsys):
        bad = tmp_path / "model.bin"
        bad.write_bytes(b"not a model at all")
        dataset = tmp_path / "pairs.tsv"
        dataset.write_text("a\tb\t1.0\nc\td\t2.0\n", encoding="utf-8")
        code = main(["eval-sim", "--model", str(bad), "--dataset", str(dataset)])
        assert code == 1
        assert "error:" in capsys.readouterr().err

    def test_success_returns_zero(self, capsys):
        assert main(["bridges", "friend"]) == 0


class TestHelp:
    @pytest.mark.parametrize("command", [
        "train", "eval-sim", "eval-outlier", "denorm", "corrupt-seg",
        "nn", "bridges", "dump-vec",
    ])
    def test_every_subcommand_has_help(self, runner, command):
        result = runner.invoke(cli, [command, "--help"])
        assert result.exit_code == 0
        assert "Usage" in result.output

    def test_train_help_documents_defaults(self, runner):
        result = runner.invoke(cli, ["train", "--help"])
        assert "--pb" in result.output
        assert "--lambda" in result.output
        assert "default" in result.output.lower()
