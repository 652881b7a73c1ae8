"""Paired Monte Carlo constructions behind the distributional identities.

* glue: merging along ``R`` plus every cut edge at ``m`` in one pass, versus
  merging the head and tail separately and then joining them across the cut
  with fresh thresholds;
* grinding: splitting the first ``m`` masses into ``M`` pieces, superposing
  thresholds at times ``t`` and ``t/2`` and keeping only samples where every
  ground block reassembles, versus plain merging at ``3t/2``.

Each function returns per-trial component vectors as (trials, width) arrays.
Two samples that are compared against each other draw from disjoint trial
ranges, so they are independent.
"""

import numpy as np

from . import kernels
from .engine import as_mass_vector, component_rows, head_truncate, rmm_many, tail_shift
from .field import COPY_A, COPY_A_PRIME, COPY_A_TILDE, trial_streams
from .parallel import run_trials
from .relations import MAXIMAL, Shifted, UpDown


def plain_samples(x, t, trials, seed, base_stream=0, threads=None, relation=MAXIMAL, start=0):
    x = as_mass_vector(x)
    pairs = relation.pairs(x.size)

    def chunk(s, c):
        streams = trial_streams(base_stream, c, COPY_A_TILDE, start + s)
        return rmm_many(x, relation, t, seed, streams, pairs=pairs)

    return run_trials(chunk, trials, threads)


def split_samples(x, relation, m, t, seed, streams):
    """Head and tail vectors sharing one threshold table per stream.

    Head: merging of ``x`` with every coordinate past ``m`` zeroed.  Tail:
    merging of the shifted masses on the shifted table along the shifted
    relation.  The two read disjoint threshold entries.
    """
    x = as_mass_vector(x)
    head = rmm_many(head_truncate(x, m), relation, t, seed, streams)
    tail_x = tail_shift(x, m)
    if tail_x.size == 0:
        return head, np.zeros((head.shape[0], 0))
    tail = rmm_many(tail_x, Shifted(relation, m), t, seed, streams, offset=m)
    return head, tail


def join_across(head, tail, t, seed, streams):
    """Concatenate nonzero head prefix and tail, merge across the cut with fresh thresholds."""
    s, n_head = head.shape
    width = n_head + tail.shape[1]
    lengths = np.count_nonzero(head, axis=1)
    joined = np.zeros((s, width))
    out = np.zeros((s, width))
    for k in range(s):
        L = lengths[k]
        joined[k, :L] = head[k, :L]
        joined[k, L : L + tail.shape[1]] = tail[k]
    for L in np.unique(lengths):
        sel = np.flatnonzero(lengths == L)
        out[sel] = rmm_many(joined[sel], UpDown(MAXIMAL, int(L)), t, seed, streams[sel])
    return out


def glue_samples(x, relation, m, t, trials, seed, base_stream=0, threads=None):
    """(direct, staged) samples of the glued merging.

    direct: RMM_t(x; A, R union cut(m)).  staged: head and tail merged
    separately on A, then joined across the cut on the independent copy.
    """
    x = as_mass_vector(x)
    combined = relation | UpDown(MAXIMAL, m)
    pairs = combined.pairs(x.size)

    def direct(s, c):
        streams = trial_streams(base_stream, c, COPY_A, s)
        return rmm_many(x, combined, t, seed, streams, pairs=pairs)

    def staged(s, c):
        streams = trial_streams(base_stream, c, COPY_A, trials + s)
        head, tail = split_samples(x, relation, m, t, seed, streams)
        fresh = trial_streams(base_stream, c, COPY_A_TILDE, trials + s)
        out = join_across(head, tail, t, seed, fresh)
        return out[:, : x.size]

    return run_trials(direct, trials, threads), run_trials(staged, trials, threads)


def _clique_pairs(i, j, m, M):
    """Mask of pairs lying inside one of the first m groups of M pieces."""
    gi = (i - 1) // M
    gj = (j - 1) // M
    return (gi == gj) & (gi < m)


def ground_superposition(x, m, M, t, seed, streams):
    """Component vectors of the superposed graph on the ground masses.

    Returns (rows, accepted): every pair of the ground vector is open via A
    at time ``t`` or via A' at time ``t/2``; ``accepted`` marks the trials in
    which each group of M pieces is connected by A-open edges inside it.
    """
    from .engine import grind

    xg = grind(x, m, M)
    n = xg.size
    i, j = MAXIMAL.pairs(n)
    w = xg[i - 1] * xg[j - 1]
    keep = w > 0
    i, j, w = i[keep], j[keep], w[keep]
    s = streams.size
    open_a = kernels.exp_thresholds(seed, streams[:, None], i[None, :], j[None, :]) <= w * t
    primes = streams + np.uint64(COPY_A_PRIME - COPY_A)
    open_b = kernels.exp_thresholds(seed, primes[:, None], i[None, :], j[None, :]) <= w * (t / 2)
    inside = _clique_pairs(i, j, m, M)
    rows, cols = np.nonzero(open_a & inside[None, :])
    labels = kernels.component_labels(s * n, rows * n + i[cols] - 1, rows * n + j[cols] - 1).reshape(s, n)
    groups = labels[:, : m * M].reshape(s, m, M)
    accepted = np.all(groups == groups[:, :, :1], axis=(1, 2))
    rows, cols = np.nonzero(open_a | open_b)
    out = component_rows(np.broadcast_to(xg, (s, n)), rows, i[cols] - 1, j[cols] - 1)
    return out, accepted


def grinding_samples(x, m, M, t, accepted, seed, base_stream=0, threads=None, batch=4096, max_rounds=10_000):
    """``accepted`` rejection samples of the reassembled ground construction.

    Returns (rows, accepted_count, drawn_count); rows are truncated to
    ``len(x)`` (a reassembled sample has at most that many components).
    """
    x = as_mass_vector(x)
    found = []
    got = 0
    drawn = 0
    for _ in range(max_rounds):
        if got >= accepted:
            break

        def chunk(s, c, first=drawn):
            streams = trial_streams(base_stream, c, COPY_A, first + s)
            rows, ok = ground_superposition(x, m, M, t, seed, streams)
            res = np.zeros((c, x.size + 1))
            res[:, 0] = ok
            res[:, 1:] = rows[:, : x.size]
            return res

        res = run_trials(chunk, batch, threads)
        drawn += batch
        good = res[res[:, 0] == 1, 1:]
        found.append(good)
        got += good.shape[0]
    else:
        raise RuntimeError("reassembly event too rare to collect the requested samples")
    rows = np.concatenate(found)[:accepted]
    return rows, got, drawn
