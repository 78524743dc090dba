import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from bridgegram import TrainConfig, train_lines


@pytest.fixture(scope="session")
def tiny_lines():
    """A small fixed corpus: three topic word groups plus shared fillers."""
    rng = np.random.default_rng(1234)
    groups = [
        ["red", "green", "blue", "paint", "color"],
        ["dog", "cat", "horse", "animal", "farm"],
        ["bread", "milk", "cheese", "food", "market"],
    ]
    fillers = ["the", "a", "of", "with", "and"]
    lines = []
    for _ in range(300):
        group = groups[rng.integers(3)]
        n = rng.integers(4, 9)
        tokens = []
        for _ in range(n):
            if rng.random() < 0.3:
                tokens.append(fillers[rng.integers(len(fillers))])
            else:
                tokens.append(group[rng.integers(len(group))])
        lines.append(" ".join(tokens))
    return lines


@pytest.fixture(scope="session")
def tiny_config():
    return TrainConfig(
        mode="subword", dim=24, window=4, epochs=2, bucket=4096,
        min_count=2, subsample_t=1e-3, seed=7, threads=1,
    )


@pytest.fixture(scope="session")
def tiny_model(tiny_lines, tiny_config):
    return train_lines(tiny_lines, tiny_config)
