"""Compiled inner loops for skipgram training.

Everything here operates on flat arrays prepared in :mod:`bridgegram.model`.
Randomness comes from two independent splitmix64 streams per worker:

* stream A drives subsampling, window sizes, and negative sampling for the
  ordinary center-word updates;
* stream B drives the bridge gate draw (one per center occurrence) and
  negative sampling for bridge updates.

Keeping bridge randomness on its own stream means disabling bridges
(gate probability 0, or running in a mode without them) cannot perturb the
ordinary sampling sequence, so those configurations produce bit-identical
matrices.

Update order inside a line: for each surviving center position, draw the
window span from stream A, then (bridge mode only) the gate from stream B;
for each context target, apply the center-word pair update first and then,
if the gate is open, one update per bridge string of the center.
"""

from __future__ import annotations

import numpy as np
from numba import njit

_GAMMA = np.uint64(0x9E3779B97F4A7C15)
_MIX1 = np.uint64(0xBF58476D1CE4E5B9)
_MIX2 = np.uint64(0x94D049BB133111EB)
_S30 = np.uint64(30)
_S27 = np.uint64(27)
_S31 = np.uint64(31)
_S11 = np.uint64(11)
_INV_2_53 = 1.0 / 9007199254740992.0  # 2**-53

_MASK64 = (1 << 64) - 1


def seed_state(seed: int, worker: int, stream: int) -> np.ndarray:
    """Initial splitmix64 state, distinct per (seed, worker, stream)."""
    mixed = (seed + 0x9E3779B97F4A7C15 * (2 * worker + stream + 1)) & _MASK64
    return np.array([mixed], dtype=np.uint64)


@njit(cache=True, nogil=True)
def next_u64(state):
    state[0] += _GAMMA
    z = state[0]
    z = (z ^ (z >> _S30)) * _MIX1
    z = (z ^ (z >> _S27)) * _MIX2
    return z ^ (z >> _S31)


@njit(cache=True, nogil=True)
def next_unit(state):
    # uniform in [0, 1) with 53 random bits
    return (next_u64(state) >> _S11) * _INV_2_53


@njit(cache=True, nogil=True)
def next_below(state, n):
    # uniform integer in [0, n)
    return np.int64(next_u64(state) % np.uint64(n))


@njit(cache=True, nogil=True)
def _sigmoid(x):
    if x >= 0.0:
        return 1.0 / (1.0 + np.exp(-x))
    e = np.exp(x)
    return e / (1.0 + e)


@njit(cache=True, nogil=True)
def _softplus(x):
    # log(1 + e^x) without overflow
    if x > 0.0:
        return x + np.log1p(np.exp(-x))
    return np.log1p(np.exp(x))


@njit(cache=True, nogil=True)
def sample_negatives(state, table, target, negs):
    """Fill ``negs`` from the unigram table, redrawing on the target id."""
    size = table.shape[0]
    for i in range(negs.shape[0]):
        value = table[next_below(state, size)]
        while value == target:
            value = table[next_below(state, size)]
        negs[i] = value


@njit(cache=True, nogil=True)
def pair_update(inp, out, rows, target, negs, lr_eff, hidden, grad_h, sample_g):
    """One negative-sampling step for (mean of input rows) -> target.

    Returns the unweighted loss ``-log s(pos) - sum log s(-neg)``. Phase 1
    evaluates the loss and all gradients at the current parameters; phase 2
    applies updates scaled by ``lr_eff``, so the applied deltas are exactly
    ``-lr_eff`` times the gradient of the returned loss, including when a
    row repeats among the inputs or negatives. ``lr_eff`` of zero evaluates
    the loss without changing the model.
    """
    n_rows = rows.shape[0]
    dim = inp.shape[1]
    for d in range(dim):
        hidden[d] = 0.0
    for r in range(n_rows):
        row = rows[r]
        for d in range(dim):
            hidden[d] += inp[row, d]
    inv_n = 1.0 / n_rows
    for d in range(dim):
        hidden[d] *= inv_n

    k = negs.shape[0]
    loss = 0.0
    for d in range(dim):
        grad_h[d] = 0.0
    for si in range(k + 1):
        if si == 0:
            o = target
        else:
            o = np.int64(negs[si - 1])
        score = 0.0
        for d in range(dim):
            score += hidden[d] * out[o, d]
        if si == 0:
            loss += _softplus(-score)
            g = _sigmoid(score) - 1.0
        else:
            loss += _softplus(score)
            g = _sigmoid(score)
        sample_g[si] = g
        for d in range(dim):
            grad_h[d] += g * out[o, d]

    for si in range(k + 1):
        o = target if si == 0 else np.int64(negs[si - 1])
        step = lr_eff * sample_g[si]
        for d in range(dim):
            out[o, d] -= step * hidden[d]
    row_step = lr_eff * inv_n
    for r in range(n_rows):
        row = rows[r]
        for d in range(dim):
            inp[row, d] -= row_step * grad_h[d]
    return loss


@njit(cache=True, nogil=True)
def train_shard(
    token_ids,
    line_offsets,
    line_lo,
    line_hi,
    discard_prob,
    use_subsample,
    neg_table,
    rows_flat,
    rows_off,
    bridge_rows_flat,
    bridge_rows_off,
    word_bridge_off,
    inp,
    out,
    window,
    k_neg,
    epochs,
    lr0,
    pb,
    lam,
    bridge_mode,
    state_a,
    state_b,
    progress,
    total_planned,
    loss_per_epoch,
    pairs_per_epoch,
    kept,
    negs,
    hidden,
    grad_h,
    sample_g,
):
    """Train one contiguous block of lines for ``epochs`` passes.

    ``progress`` is shared across workers; racy increments under hogwild
    parallelism are accepted. The learning rate decays linearly to zero
    over ``total_planned`` scanned tokens.
    """
    for epoch in range(epochs):
        for li in range(line_lo, line_hi):
            start = line_offsets[li]
            stop = line_offsets[li + 1]
            if stop == start:
                continue
            progress[0] += stop - start
            remaining = 1.0 - progress[0] / total_planned
            if remaining < 0.0:
                remaining = 0.0
            lr_now = lr0 * remaining

            m = 0
            for t in range(start, stop):
                w = token_ids[t]
                if use_subsample and next_unit(state_a) < discard_prob[w]:
                    continue
                kept[m] = w
                m += 1

            for i in range(m):
                center = np.int64(kept[i])
                span = 1 + next_below(state_a, window)
                gate = 0
                if bridge_mode and next_unit(state_b) < pb:
                    gate = 1
                lo = i - span
                if lo < 0:
                    lo = 0
                hi = i + span + 1
                if hi > m:
                    hi = m
                center_rows = rows_flat[rows_off[center] : rows_off[center + 1]]
                for j in range(lo, hi):
                    if j == i:
                        continue
                    target = np.int64(kept[j])
                    sample_negatives(state_a, neg_table, target, negs)
                    loss = pair_update(
                        inp, out, center_rows, target, negs, lr_now,
                        hidden, grad_h, sample_g,
                    )
                    loss_per_epoch[epoch] += loss
                    pairs_per_epoch[epoch] += 1
                    if gate == 1:
                        for bi in range(
                            word_bridge_off[center], word_bridge_off[center + 1]
                        ):
                            bridge_rows = bridge_rows_flat[
                                bridge_rows_off[bi] : bridge_rows_off[bi + 1]
                            ]
                            sample_negatives(state_b, neg_table, target, negs)
                            bloss = pair_update(
                                inp, out, bridge_rows, target, negs,
                                lr_now * lam, hidden, grad_h, sample_g,
                            )
                            loss_per_epoch[epoch] += bloss
                            pairs_per_epoch[epoch] += 1
